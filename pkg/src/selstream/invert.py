"""Constructing a row that satisfies a set of conjunctive-policy constraints.

Three kinds of constraint are supported:

* full-positive: the policy holds and cell ``k`` equals ``val``;
* positive: the policy holds;
* negative: the policy does not hold.

For conjunctive equality policies a positive constraint simply fixes every
non-wildcard cell, so solving is unification followed by random filling of
the free cells, resampled until every negative constraint is violated.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Optional, Sequence

from .errors import IncompatibleConstraints, ParameterError

# Size (in bits) of the space free cells are drawn from.
SAMPLE_BITS = 128
MAX_ROUNDS = 64

Value = Hashable
PolicyT = Sequence[Optional[Value]]
Sampler = Callable[[Any], Value]


class Kind(enum.Enum):
    FULL_POSITIVE = "full-positive"
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class Constraint:
    kind: Kind
    policy: tuple
    k: Optional[int] = None
    val: Optional[Value] = None

    def __post_init__(self):
        object.__setattr__(self, "policy", tuple(self.policy))
        if self.kind is Kind.FULL_POSITIVE:
            if self.k is None or self.val is None:
                raise ParameterError("a full-positive constraint needs a column and a value")
            if not 1 <= self.k <= len(self.policy):
                raise ParameterError(f"column {self.k} outside 1..{len(self.policy)}")
        elif self.k is not None or self.val is not None:
            raise ParameterError(f"{self.kind.value} constraints carry no column or value")

    @classmethod
    def full(cls, policy: PolicyT, k: int, val: Value) -> "Constraint":
        return cls(Kind.FULL_POSITIVE, tuple(policy), k, val)

    @classmethod
    def positive(cls, policy: PolicyT) -> "Constraint":
        return cls(Kind.POSITIVE, tuple(policy))

    @classmethod
    def negative(cls, policy: PolicyT) -> "Constraint":
        return cls(Kind.NEGATIVE, tuple(policy))


@dataclass
class ConstraintSet:
    full: list[Constraint] = field(default_factory=list)
    positive: list[Constraint] = field(default_factory=list)
    negative: list[Constraint] = field(default_factory=list)

    def all(self) -> list[Constraint]:
        return [*self.full, *self.positive, *self.negative]

    def add(self, c: Constraint) -> None:
        {
            Kind.FULL_POSITIVE: self.full,
            Kind.POSITIVE: self.positive,
            Kind.NEGATIVE: self.negative,
        }[c.kind].append(c)


@dataclass(frozen=True)
class Solution:
    row: tuple
    rounds: int


def matches(policy: PolicyT, row: Sequence[Value]) -> bool:
    if len(policy) != len(row):
        raise ParameterError(f"policy has {len(policy)} entries, row has {len(row)}")
    return all(p is None or p == c for p, c in zip(policy, row))


def check_admissible(row: Sequence[Value], c: Constraint) -> bool:
    holds = matches(c.policy, row)
    if c.kind is Kind.NEGATIVE:
        return not holds
    if c.kind is Kind.POSITIVE:
        return holds
    return holds and row[c.k - 1] == c.val


def default_sampler(rng) -> int:
    return rng.randint(1, 2 ** SAMPLE_BITS)


def _pin(pins: dict, i: int, value: Value) -> None:
    if i in pins and pins[i] != value:
        raise IncompatibleConstraints(f"cell {i + 1} pinned to two different values")
    pins[i] = value


def solve_constraints(v: ConstraintSet, n: int, rng, sampler: Sampler = default_sampler,
                      max_rounds: int = MAX_ROUNDS) -> Solution:
    for c in v.all():
        if len(c.policy) != n:
            raise ParameterError(f"constraint policy has {len(c.policy)} entries, expected {n}")

    pins: dict[int, Value] = {}
    for c in (*v.full, *v.positive):
        for i, p in enumerate(c.policy):
            if p is not None:
                _pin(pins, i, p)
        if c.kind is Kind.FULL_POSITIVE:
            _pin(pins, c.k - 1, c.val)

    # Negatives that the pinned cells already force to hold can never be violated.
    open_negatives = []
    for c in v.negative:
        fixed = [i for i, p in enumerate(c.policy) if p is not None]
        if any(i in pins and pins[i] != c.policy[i] for i in fixed):
            continue
        if all(i in pins for i in fixed):
            raise IncompatibleConstraints("a negative constraint is implied by the positive ones")
        open_negatives.append(c)

    free = [i for i in range(n) if i not in pins]
    for rounds in range(1, max_rounds + 1):
        row = [pins.get(i) for i in range(n)]
        for i in free:
            row[i] = sampler(rng)
        if all(not matches(c.policy, row) for c in open_negatives):
            return Solution(tuple(row), rounds)
    raise IncompatibleConstraints(f"no admissible row after {max_rounds} rounds")


def const_adm(v: ConstraintSet, n: int, rng, sampler: Sampler = default_sampler) -> tuple:
    return solve_constraints(v, n, rng, sampler).row
