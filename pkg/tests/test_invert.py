import random

import pytest
from hypothesis import given, settings, strategies as st

from selstream import invert, sss
from selstream.errors import IncompatibleConstraints, ParameterError
from selstream.invert import Constraint, ConstraintSet, Kind

from conftest import random_compatible_set


def test_check_admissible_examples():
    row = (5, 7)
    assert invert.check_admissible(row, Constraint.positive((5, None)))
    assert not invert.check_admissible(row, Constraint.negative((5, 7)))
    assert invert.check_admissible(row, Constraint.full((5, None), 2, 7))
    assert not invert.check_admissible(row, Constraint.full((5, None), 2, 8))
    with pytest.raises(ParameterError):
        invert.check_admissible((5,), Constraint.positive((5, None)))


def test_constraint_shape_validation():
    with pytest.raises(ParameterError):
        Constraint(Kind.FULL_POSITIVE, (1, None))
    with pytest.raises(ParameterError):
        Constraint(Kind.POSITIVE, (1, None), k=1, val=2)
    with pytest.raises(ParameterError):
        Constraint.full((1, None), 3, 0)


def test_empty_set_gives_random_row():
    rng = random.Random(1)
    a = invert.const_adm(ConstraintSet(), 4, rng)
    b = invert.const_adm(ConstraintSet(), 4, rng)
    assert len(a) == 4 and a != b
    assert all(1 <= x <= 2 ** invert.SAMPLE_BITS for x in a)


def test_full_positive_pins():
    v = ConstraintSet(full=[Constraint.full((5, None), 2, 9)])
    row = invert.const_adm(v, 2, random.Random(2))
    assert row == (5, 9)


def test_positive_and_negative():
    v = ConstraintSet(positive=[Constraint.positive((5, None))], negative=[Constraint.negative((5, 7))])
    row = invert.const_adm(v, 2, random.Random(3))
    assert row[0] == 5 and row[1] != 7
    assert all(invert.check_admissible(row, c) for c in v.all())


def test_conflicting_pins():
    v = ConstraintSet(positive=[Constraint.positive((5, None)), Constraint.positive((6, None))])
    with pytest.raises(IncompatibleConstraints):
        invert.const_adm(v, 2, random.Random(4))
    v = ConstraintSet(full=[Constraint.full((None, None), 1, 3)], positive=[Constraint.positive((4, None))])
    with pytest.raises(IncompatibleConstraints):
        invert.const_adm(v, 2, random.Random(4))


def test_negative_implied_by_positives():
    v = ConstraintSet(positive=[Constraint.positive((5, 7))], negative=[Constraint.negative((5, None))])
    with pytest.raises(IncompatibleConstraints, match="implied"):
        invert.const_adm(v, 2, random.Random(5))
    v = ConstraintSet(negative=[Constraint.negative((None, None))])
    with pytest.raises(IncompatibleConstraints):
        invert.const_adm(v, 2, random.Random(5))


def test_budget_exhaustion_with_tiny_sample_space():
    v = ConstraintSet(negative=[Constraint.negative((1, None))])
    with pytest.raises(IncompatibleConstraints, match="rounds"):
        invert.solve_constraints(v, 2, random.Random(6), sampler=lambda rng: 1)


def test_negatives_already_violated_by_pins_are_skipped():
    v = ConstraintSet(positive=[Constraint.positive((5, None))], negative=[Constraint.negative((6, None))])
    sol = invert.solve_constraints(v, 2, random.Random(7), sampler=lambda rng: 6)
    assert sol.row == (5, 6) and sol.rounds == 1


def test_soundness_random_sets():
    rng = random.Random(8)
    for _ in range(200):
        n = rng.randint(1, 12)
        v, _ = random_compatible_set(rng, n)
        row = invert.const_adm(v, n, rng)
        assert all(invert.check_admissible(row, c) for c in v.all())


def test_mean_rounds():
    rng = random.Random(9)
    rounds = []
    for _ in range(1000):
        n = rng.randint(1, 12)
        v, _ = random_compatible_set(rng, n)
        rounds.append(invert.solve_constraints(v, n, rng).rounds)
    assert sum(rounds) / len(rounds) < 1.01


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 12))
def test_soundness_property(seed, n):
    rng = random.Random(seed)
    v, _ = random_compatible_set(rng, n)
    row = invert.const_adm(v, n, rng)
    assert all(invert.check_admissible(row, c) for c in v.all())


def test_round_trip_through_sss(stream4):
    rng = random.Random(10)
    values = [b"a", b"b", b"c"]
    for _ in range(5):
        v, _ = random_compatible_set(rng, 4, values)
        row = invert.const_adm(v, 4, rng, sampler=lambda r: r.randbytes(16))
        erow = sss.encrypt_row(stream4.mpk, row, rng)
        for c in v.all():
            selected = sss.select(erow, sss.authorize_sel(stream4.msk, list(c.policy), rng))
            assert selected == (c.kind is not Kind.NEGATIVE)
            if c.kind is Kind.FULL_POSITIVE:
                tok = sss.authorize_dec(stream4.msk, list(c.policy), c.k, rng)
                assert sss.decrypt_cell(erow, tok, c.k) == c.val
