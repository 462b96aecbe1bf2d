from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyinv.errors import InputError
from polyinv.model import (
    EQ,
    IDENTITY,
    INITIAL,
    LE,
    LT,
    AffineExpr,
    AffineUpdate,
    ControlState,
    Guard,
    LinAtom,
    Monomial,
    PolyAtom,
    Transition,
    TransitionSystem,
    apply_update,
    eval_guard,
    parse_rational,
    render_rational,
    validate_system,
)
from polyinv.reductions import parabola_atom
from systems import src_t, vec

rationals = st.fractions(-999, 999, max_denominator=50)
GADGET_TICK = AffineUpdate({0: AffineExpr({0: 1}, 1), 1: AffineExpr({1: 1, 0: 1}, 1)})


def test_parabola_guard_holds_on_curve():
    assert eval_guard(Guard(poly=[parabola_atom(0, 1, EQ)]), vec(2, 3))


def test_empty_guard_is_true():
    assert eval_guard(Guard(), vec(7, -3))
    assert eval_guard(Guard(), ())


def test_strict_parabola_guard_below_curve():
    assert eval_guard(Guard(poly=[parabola_atom(0, 1, LT)]), vec(2, 2))
    assert not eval_guard(Guard(poly=[parabola_atom(0, 1, LT)]), vec(2, 3))


def test_guard_dimension_mismatch():
    with pytest.raises(InputError):
        eval_guard(Guard([LinAtom({2: 1}, LE, 0)]), vec(0, 0))


def test_gadget_update_is_simultaneous():
    assert apply_update(GADGET_TICK, vec(0, 0)) == vec(1, 1)
    assert apply_update(GADGET_TICK, vec(3, 6)) == vec(4, 10)


def test_identity_update():
    assert apply_update(IDENTITY, vec(1, "2/3")) == vec(1, "2/3")


def test_update_dimension_mismatch():
    with pytest.raises(InputError):
        apply_update(GADGET_TICK, vec(1), dim=1)


def test_valid_system_has_no_violations():
    assert validate_system(src_t()) == []


def test_transition_out_of_bad_is_reported():
    s = src_t()
    bad, s0 = s.state("bad"), s.state("s0")
    broken = TransitionSystem(s.vars, s.states, s.transitions + (Transition(bad, s0),))
    problems = validate_system(broken)
    assert len(problems) == 1 and "bad->s0" in problems[0]


def test_initial_values_wrong_length():
    s = src_t()
    broken = TransitionSystem(s.vars, s.states, s.transitions, [0, 0])
    problems = validate_system(broken)
    assert len(problems) == 1


def test_needs_one_initial_and_one_bad():
    a, b = ControlState(0, "a", INITIAL), ControlState(1, "b", INITIAL)
    assert validate_system(TransitionSystem(["x"], [a, b], []))


def test_lin_atom_drops_zero_coefficients():
    atom = LinAtom({0: 0, 1: 2}, LE, 1)
    assert atom.coeffs == ((1, Fraction(2)),)


def test_poly_atom_requires_nonlinear_monomial():
    with pytest.raises(InputError):
        PolyAtom([Monomial(1, {0: 1})], EQ, 0)


def test_poly_atom_merges_equal_exponents():
    atom = PolyAtom([Monomial(1, {0: 2}), Monomial(2, {0: 2}), Monomial(1, {1: 1})], LE, 0)
    assert len(atom.monomials) == 2


@pytest.mark.parametrize("text", ["1.5", "", "1/0", "a", "1/-2", " 3"])
def test_parse_rational_rejects(text):
    with pytest.raises(InputError):
        parse_rational(text)


def test_parse_rational_normalizes():
    assert parse_rational("4/6") == Fraction(2, 3)
    assert render_rational(Fraction(4, 6)) == "2/3"
    assert render_rational(Fraction(-3)) == "-3"


@given(rationals)
def test_rational_round_trip(r):
    assert parse_rational(render_rational(r)) == r


@given(st.lists(rationals, min_size=2, max_size=2), st.lists(rationals, min_size=2, max_size=2), rationals)
def test_update_is_affine(p, q, lam):
    u = AffineUpdate({0: AffineExpr({0: 2, 1: -1}, 3), 1: AffineExpr({0: Fraction(1, 3)}, -1)})
    mix = [lam * a + (1 - lam) * b for a, b in zip(p, q)]
    up, uq = apply_update(u, p), apply_update(u, q)
    assert apply_update(u, mix) == tuple(lam * a + (1 - lam) * b for a, b in zip(up, uq))


atoms = st.builds(
    LinAtom,
    st.dictionaries(st.integers(0, 2), st.integers(-3, 3), max_size=3),
    st.sampled_from([LE, LT, EQ]),
    st.integers(-4, 4),
)


@given(st.lists(atoms, max_size=4), st.lists(atoms, max_size=4), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_guard_conjunction(a, b, p):
    p = [Fraction(x) for x in p]
    ga, gb = Guard(a), Guard(b)
    assert eval_guard(ga.conjoin(gb), p) == (eval_guard(ga, p) and eval_guard(gb, p))
    assert eval_guard(ga, p) == all(atom.holds(p) for atom in a)
