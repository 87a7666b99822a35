import random

import pytest

from selstream import aoe, secharness, sss
from selstream.invert import Constraint, ConstraintSet, matches

P = 16798108731015832284940804142231733909759579603404752749028378864165570215949

_acceptance_lines: list[str] = []


def record_criterion(number, name: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number} [{name}]: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" -- {detail}"
    _acceptance_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(0xA0E)


def dot(xs, ys) -> int:
    return sum(a * b for a, b in zip(xs, ys)) % P


def complete_orthogonal(rng, fixed, free_len: int, partner):
    """Random vector s (len(partner)) with dot(s, partner) + fixed == 0.

    Solves for the last coordinate whose partner entry is nonzero.
    """
    s = [rng.randrange(P) for _ in range(free_len)]
    pivot = max(i for i, x in enumerate(partner) if x % P)
    s[pivot] = 0
    rest = (dot(s, partner) + fixed) % P
    s[pivot] = -rest * pow(partner[pivot], -1, P) % P
    assert (dot(s, partner) + fixed) % P == 0
    return s


def random_vec(rng, length: int, nonzero_tail: bool = False):
    v = [rng.randrange(P) for _ in range(length)]
    if nonzero_tail and length:
        v[-1] = rng.randrange(1, P)
    return v


@pytest.fixture(scope="session")
def small_keys():
    params = aoe.AoeParams(2, 3, 2)
    return aoe.par_gen(params, random.Random(11))


@pytest.fixture(scope="session")
def stream4():
    return sss.init(128, 4, random.Random(12))


def random_compatible_set(rng, n: int, values=(1, 2, 3)):
    """A constraint set built around a hidden witness row, so it is compatible by construction."""
    witness = [rng.choice(values) for _ in range(n)]
    v = ConstraintSet()
    for _ in range(rng.randint(0, 8)):
        policy = tuple(rng.choice(values) if rng.random() < 0.3 else None for _ in range(n))
        if not matches(policy, witness):
            v.add(Constraint.negative(policy))
        elif rng.random() < 0.5:
            v.add(Constraint.positive(policy))
        else:
            k = rng.randint(1, n)
            v.add(Constraint.full(policy, k, witness[k - 1]))
    return v, witness


def random_instance(rng, max_n=8, max_m=10, max_l=6, values=(b"a", b"b", b"c")):
    n = rng.randint(1, max_n)
    m = rng.randint(0, max_m)
    l = rng.randint(0, max_l)
    sources, queriers, processors = ["s1", "s2", "s3"], ["q1", "q2"], ["p1", "p2"]
    stream = tuple(
        (tuple(rng.choice(values) for _ in range(n)), rng.choice(sources)) for _ in range(m)
    )
    requests = tuple(
        secharness.Request(
            tuple(rng.choice(values) if rng.random() < 0.4 else None for _ in range(n)),
            rng.randint(1, n),
            rng.choice(queriers),
            rng.choice(processors),
        )
        for _ in range(l)
    )
    coalition = secharness.Coalition(
        frozenset(s for s in sources if rng.random() < 0.4),
        frozenset(p for p in processors if rng.random() < 0.4),
        frozenset(q for q in queriers if rng.random() < 0.4),
    )
    return secharness.Instance(n, stream, requests), coalition
