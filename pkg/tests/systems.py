"""Small systems shared by the tests."""
from __future__ import annotations

from fractions import Fraction

from polyinv.model import (
    BAD,
    INITIAL,
    LE,
    ORDINARY,
    AffineExpr,
    AffineUpdate,
    ControlState,
    Guard,
    LinAtom,
    Transition,
    TransitionSystem,
)

INC_X = AffineUpdate({0: AffineExpr({0: 1}, 1)})


def src_t() -> TransitionSystem:
    """Counts x from 0 to 3 in s0, then moves to h and halts."""
    s0, h, bad = ControlState(0, "s0", INITIAL), ControlState(1, "h", ORDINARY), ControlState(2, "bad", BAD)
    return TransitionSystem(["x"], [s0, h, bad], [
        Transition(s0, s0, Guard([LinAtom({0: 1}, LE, 2)]), INC_X),
        Transition(s0, h, Guard([LinAtom({0: -1}, LE, -3)])),
    ])


def src_l() -> TransitionSystem:
    """Counts forever."""
    s0, bad = ControlState(0, "s0", INITIAL), ControlState(1, "bad", BAD)
    return TransitionSystem(["x"], [s0, bad], [Transition(s0, s0, Guard(), INC_X)])


def toy(bad_rhs=-1) -> TransitionSystem:
    """Counts forever; may jump to bad when x <= bad_rhs."""
    s0, bad = ControlState(0, "s0", INITIAL), ControlState(1, "bad", BAD)
    return TransitionSystem(["x"], [s0, bad], [
        Transition(s0, s0, Guard(), INC_X),
        Transition(s0, bad, Guard([LinAtom({0: 1}, LE, bad_rhs)])),
    ])


def vec(*xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)
