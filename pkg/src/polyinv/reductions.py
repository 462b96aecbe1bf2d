"""The two constructive reductions.

``gadget_reduce`` adds a time counter ``t`` and an accumulator ``y`` with
``y := y + t + 1``; every transition is guarded by ``y = (t^2 + t)/2`` and
every ordinary state gets a transition into the bad state guarded by
``y < (t^2 + t)/2``. On-run configurations then sit on a strictly convex
curve, so each of them is a vertex of any polytope containing the run.

``state_encode`` folds N control states into N-1 extra registers holding a
vertex of the standard simplex, leaving one working state and the bad state.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .model import (
    BAD,
    EQ,
    INITIAL,
    LE,
    LT,
    AffineExpr,
    AffineUpdate,
    Config,
    ControlState,
    Guard,
    LinAtom,
    Monomial,
    PolyAtom,
    Transition,
    TransitionSystem,
    Vector,
    validate_system,
)
from .polyhedra import HPolyhedron, Polyhedron, VPolytope, substitute, to_v, vrep_to_hrep

HALF = Fraction(1, 2)


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def parabola_atom(t: int, y: int, rel: str) -> PolyAtom:
    """``y - t^2/2 - t/2 rel 0``, i.e. ``y rel (t^2 + t)/2``."""
    return PolyAtom([Monomial(1, {y: 1}), Monomial(-HALF, {t: 2}), Monomial(-HALF, {t: 1})], rel, 0)


@dataclass(frozen=True)
class GadgetLayout:
    t_var: int
    y_var: int
    bad_state: str
    source_dim: int


def _check(s: TransitionSystem) -> None:
    problems = validate_system(s)
    if problems:
        raise InputError("invalid transition system: " + "; ".join(problems))


def gadget_reduce(s: TransitionSystem, le_guard: bool = False) -> tuple[TransitionSystem, GadgetLayout]:
    """Add the time-counter gadget. The source's bad state plays the role of the new bad state."""
    _check(s)
    m = s.dim
    t_name = fresh_name("t", s.vars)
    y_name = fresh_name("y", set(s.vars) | {t_name})
    t, y = m, m + 1
    on_curve = parabola_atom(t, y, LE if le_guard else EQ)
    below = parabola_atom(t, y, LT)
    tick = {
        t: AffineExpr({t: 1}, 1),
        y: AffineExpr({y: 1, t: 1}, 1),
    }
    transitions = []
    for tr in s.transitions:
        update = AffineUpdate({**dict(tr.update.assign), **tick})
        transitions.append(Transition(tr.source, tr.target, tr.guard.conjoin(Guard(poly=[on_curve])), update))
    bad = s.bad_state
    for st in s.states:
        if st.kind != BAD:
            transitions.append(Transition(st, bad, Guard(poly=[below])))
    target = TransitionSystem(
        vars=s.vars + (t_name, y_name),
        states=s.states,
        transitions=transitions,
        initial_values=s.initial_values + (Fraction(0), Fraction(0)),
    )
    return target, GadgetLayout(t, y, bad.name, m)


def project_gadget_config(cfg: Config, layout: GadgetLayout) -> Config:
    return Config(cfg.state, cfg.values[:layout.source_dim])


@dataclass(frozen=True)
class SimplexLayout:
    d: int
    source_vars: tuple[str, ...]
    enc_vars: tuple[int, ...]
    # source state names in code order: the initial state first, the bad state last
    order: tuple[str, ...]
    encodings: Mapping[str, Vector]
    bad_state: str
    target_vars: tuple[str, ...]
    main_state: str = "main"
    target_bad: str = "bad"

    @property
    def n_states(self) -> int:
        return len(self.order)

    @property
    def target_dim(self) -> int:
        return self.d + len(self.enc_vars)


def simplex_codes(n: int) -> list[Vector]:
    """``e_0`` is the origin of ``Q^(n-1)``; ``e_q`` is the q-th unit vector."""
    zero = Fraction(0)
    codes = [(zero,) * (n - 1)]
    for q in range(1, n):
        codes.append(tuple(Fraction(int(i == q - 1)) for i in range(n - 1)))
    return codes


def state_encode(s: TransitionSystem) -> tuple[TransitionSystem, SimplexLayout]:
    _check(s)
    n = len(s.states)
    if n < 2:
        raise InputError("state encoding needs at least two control states")
    d = s.dim
    init, bad = s.initial_state, s.bad_state
    order = [init] + [st for st in s.states if st not in (init, bad)] + [bad]
    codes = dict(zip((st.name for st in order), simplex_codes(n)))
    taken = set(s.vars)
    enc_names = []
    for i in range(n - 1):
        name = fresh_name(f"enc{i}", taken)
        taken.add(name)
        enc_names.append(name)
    enc = tuple(range(d, d + n - 1))
    main = ControlState(0, "main", INITIAL)
    bad_t = ControlState(1, "bad", BAD)

    def at(code: Vector) -> list[LinAtom]:
        return [LinAtom({v: 1}, EQ, c) for v, c in zip(enc, code)]

    transitions = []
    for tr in s.transitions:
        guard = Guard(tr.guard.lin + tuple(at(codes[tr.source.name])), tr.guard.poly)
        if tr.target == bad:
            transitions.append(Transition(main, bad_t, guard, tr.update))
            continue
        jump = {v: AffineExpr({}, c) for v, c in zip(enc, codes[tr.target.name])}
        transitions.append(Transition(main, main, guard,
                                      AffineUpdate({**dict(tr.update.assign), **jump})))
    target = TransitionSystem(
        vars=s.vars + tuple(enc_names),
        states=(main, bad_t),
        transitions=transitions,
        initial_values=s.initial_values + codes[init.name],
    )
    layout = SimplexLayout(d, s.vars, enc, tuple(st.name for st in order), codes, bad.name, target.vars)
    return target, layout


def decode_config(cfg: Config, layout: SimplexLayout, source: TransitionSystem) -> Config:
    """Map a configuration of the encoded system back to the source system."""
    x, code = cfg.values[:layout.d], cfg.values[layout.d:]
    if cfg.state.kind == BAD:
        return Config(source.state(layout.bad_state), x)
    for name, e in layout.encodings.items():
        if e == code:
            return Config(source.state(name), x)
    raise InputError(f"register values {code} do not encode a control state")


def lift_invariant(I: Mapping[str, Polyhedron], layout: SimplexLayout) -> VPolytope:
    """Hull of the union of ``P_q x {e_q}`` over all control states."""
    points = []
    for name in layout.order:
        try:
            P = I[name]
        except KeyError:
            raise InputError(f"labeling has no entry for control state {name!r}") from None
        if P.dim != layout.d:
            raise InputError(f"label of {name!r} has dimension {P.dim}, expected {layout.d}")
        V = to_v(P)
        if name == layout.bad_state and V.points:
            raise InputError("the bad state must be labeled empty before lifting")
        points.extend(p + layout.encodings[name] for p in V.points)
    return VPolytope(layout.target_dim, points)


def lifted_labeling(I: Mapping[str, Polyhedron], layout: SimplexLayout) -> dict[str, Polyhedron]:
    return {
        layout.main_state: lift_invariant(I, layout),
        layout.target_bad: VPolytope.empty(layout.target_dim),
    }


def project_invariant(P: Polyhedron, layout: SimplexLayout) -> dict[str, Polyhedron]:
    """Slice ``P`` at each code ``e_q``.

    The source bad state is labeled empty: in the encoded system it is a
    separate control state, so ``P`` says nothing about it.
    """
    if P.dim != layout.target_dim:
        raise InputError(f"polyhedron has dimension {P.dim}, layout expects {layout.target_dim}")
    codes = set(layout.encodings.values())
    if isinstance(P, VPolytope) and any(p[layout.d:] not in codes for p in P.points):
        P = vrep_to_hrep(P)
    out: dict[str, Polyhedron] = {}
    for name in layout.order:
        code = layout.encodings[name]
        if name == layout.bad_state:
            out[name] = VPolytope.empty(layout.d)
        elif isinstance(P, HPolyhedron):
            out[name] = substitute(P, dict(zip(layout.enc_vars, code)))
        else:
            # every generator sits at a simplex vertex, and a vertex is only
            # reached by convex combinations putting all weight on it
            out[name] = VPolytope(layout.d, [p[:layout.d] for p in P.points if p[layout.d:] == code])
    return out
