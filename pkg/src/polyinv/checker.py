"""Decide whether a labeling of control states by polyhedra is a separating
inductive invariant.

Each transition is checked exactly. Linear guards go through a pull-back of
the target's constraints and a strict-feasibility LP. A single polynomial
atom of the shape ``y rel p(t)`` (``p`` strictly convex, ``y`` linear) is
handled on generator form:

* ``y < p(t)``: a convex function attains its maximum over a polytope at a
  generator, so the guarded set is empty exactly when no generator lies
  strictly below the curve.
* ``y = p(t)`` (and ``y <= p(t)``) against a polytope lying on or above the
  curve: by Jensen's inequality any point of the polytope on the curve is a
  convex combination of on-curve generators sharing one ``t`` value, so the
  guarded set is the union of the hulls of those groups.
"""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import InputError, PreconditionViolated, UnboundedPolyhedron, UnsupportedGuard
from .linalg import dot
from .lp import strict_feasible_point
from .model import EQ, LE, LT, AffineUpdate, LinAtom, PolyAtom, Transition, TransitionSystem, Vector, apply_update
from .polyhedra import (
    Constraint,
    HPolyhedron,
    Polyhedron,
    VPolytope,
    contains,
    hrep_to_vrep,
    is_empty,
    to_h,
    to_v,
)

SEPARATING_INDUCTIVE = "separating-inductive"
NOT_INDUCTIVE = "not-inductive"
NOT_SEPARATING = "not-separating"
INITIAL_VIOLATED = "initial-violated"

PASS = "pass"
FAIL = "fail"
UNDECIDED = "undecided"

Labeling = Mapping[str, Polyhedron]


@dataclass(frozen=True)
class ConvexShape:
    """A polynomial atom rewritten as ``y rel p(t)``; ``poly[k]`` is the coefficient of ``t**k``."""

    y: int
    t: int
    poly: tuple[Fraction, ...]
    rel: str

    def p(self, t: Fraction) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.poly):
            out = out * t + c
        return out

    def gap(self, point: Sequence[Fraction]) -> Fraction:
        """``y - p(t)``: nonnegative on the convex side of the curve."""
        return point[self.y] - self.p(point[self.t])


def _strictly_convex(poly: tuple[Fraction, ...]) -> bool:
    if len(poly) < 3:
        return False
    if len(poly) == 3:
        return poly[2] > 0
    return _second_derivative_nonnegative(poly)


@lru_cache(maxsize=64)
def _second_derivative_nonnegative(poly: tuple[Fraction, ...]) -> bool:
    # p'' >= 0 everywhere with isolated zeros <=> positive leading coefficient and
    # every real root of even multiplicity
    import sympy

    t = sympy.Symbol("t")
    p = sympy.Poly(sum(sympy.Rational(c.numerator, c.denominator) * t**k for k, c in enumerate(poly)), t)
    p2 = p.diff(t).diff(t)
    if p2.is_zero or p2.LC() <= 0:
        return False
    _, factors = p2.sqf_list()
    return all(mult % 2 == 0 or f.count_roots() == 0 for f, mult in factors)


def convex_shape(atom: PolyAtom) -> ConvexShape:
    """Recognize ``a*y + q(t) rel rhs`` with ``a > 0`` (any ``a`` for ``=``) and ``-q/a`` strictly convex."""
    y_coeffs: dict[int, Fraction] = {}
    t_terms: dict[int, dict[int, Fraction]] = {}
    const = Fraction(0)
    for m in atom.monomials:
        if not m.exponents:
            const += m.coeff
        elif len(m.exponents) > 1:
            raise UnsupportedGuard(f"mixed monomial in polynomial atom: {m}")
        else:
            (v, e), = m.exponents
            if e == 1:
                y_coeffs[v] = y_coeffs.get(v, Fraction(0)) + m.coeff
            else:
                t_terms.setdefault(v, {})[e] = m.coeff
    if len(t_terms) != 1:
        raise UnsupportedGuard("polynomial atom must be nonlinear in exactly one variable")
    (t, powers), = t_terms.items()
    lin_t = y_coeffs.pop(t, Fraction(0))
    if len(y_coeffs) != 1:
        raise UnsupportedGuard("polynomial atom must have exactly one other, linear, variable")
    (y, a), = y_coeffs.items()
    if a < 0 and atom.rel != EQ:
        raise UnsupportedGuard("atom restricts the convex side of the curve; unsupported")
    deg = max(powers)
    q = [Fraction(0)] * (deg + 1)
    q[1] = lin_t
    for e, c in powers.items():
        q[e] = c
    # a*y + q(t) + const rel rhs  <=>  y rel (rhs - const - q(t)) / a
    poly = [-c / a for c in q]
    poly[0] += (atom.rhs - const) / a
    shape = ConvexShape(y, t, tuple(poly), atom.rel)
    if not _strictly_convex(shape.poly):
        raise UnsupportedGuard("curve is not strictly convex in its nonlinear variable")
    return shape


def on_curve_groups(V: VPolytope, atom: PolyAtom | ConvexShape) -> list[VPolytope]:
    """Generators of ``V`` lying on the curve, grouped by their ``t`` value.

    The union of the returned hulls is exactly ``V`` intersected with the curve,
    provided no generator lies strictly below it.
    """
    shape = atom if isinstance(atom, ConvexShape) else convex_shape(atom)
    groups: dict[Fraction, list[Vector]] = {}
    for p in V.distinct_points():
        g = shape.gap(p)
        if g < 0:
            raise PreconditionViolated(f"generator {_fmt(p)} lies strictly below the curve")
        if g == 0:
            groups.setdefault(p[shape.t], []).append(p)
    return [VPolytope(V.dim, groups[k]) for k in sorted(groups)]


@dataclass(frozen=True)
class TransitionCheck:
    passed: bool
    fragment: str
    witness: Vector | None = None
    image: Vector | None = None


def _pass(fragment: str) -> TransitionCheck:
    return TransitionCheck(True, fragment)


def _linear_rows(H: HPolyhedron, atoms: Sequence[LinAtom]):
    a_ub, b_ub, a_eq, b_eq = (list(x) for x in H.lp_rows())
    a_lt, b_lt = [], []
    for atom in atoms:
        row = atom.dense(H.dim)
        if atom.rel == LE:
            a_ub.append(row)
            b_ub.append(atom.rhs)
        elif atom.rel == LT:
            a_lt.append(row)
            b_lt.append(atom.rhs)
        else:
            a_eq.append(row)
            b_eq.append(atom.rhs)
    return a_ub, b_ub, a_lt, b_lt, a_eq, b_eq


def _check_linear(P: Polyhedron, atoms: Sequence[LinAtom], u: AffineUpdate, Q: Polyhedron,
                  fragment: str = "L") -> TransitionCheck:
    H = to_h(P)
    d = H.dim
    a_ub, b_ub, a_lt, b_lt, a_eq, b_eq = _linear_rows(H, atoms)
    a, c = u.matrix(d)
    for qc in to_h(Q).constraints:
        for half in qc.halfspaces():
            # half violated at the image: coeffs.(A x + c) > rhs
            pulled = [-sum((half.coeffs[i] * a[i][j] for i in range(d)), Fraction(0)) for j in range(d)]
            bound = dot(half.coeffs, c) - half.rhs
            x = strict_feasible_point(d, a_ub, b_ub, a_lt + [pulled], b_lt + [bound], a_eq, b_eq)
            if x is not None:
                return TransitionCheck(False, fragment, x, apply_update(u, x))
    return _pass(fragment)


def _check_below(V: VPolytope, atoms: Sequence[LinAtom], shape: ConvexShape,
                 u: AffineUpdate, Q: Polyhedron) -> TransitionCheck:
    interior = None
    if atoms:
        H = to_h(V)
        a_ub, b_ub, a_lt, b_lt, a_eq, b_eq = _linear_rows(H, atoms)
        interior = strict_feasible_point(V.dim, a_ub, b_ub, a_lt, b_lt, a_eq, b_eq)
        if interior is None:
            return _pass("PS")
        # vertices of the closure; convex gap is maximized at one of them
        closed = H.intersect(_closed(atom, V.dim) for atom in atoms)
        candidates = hrep_to_vrep(closed).points
    else:
        candidates = V.points
    below = [p for p in candidates if shape.gap(p) < 0]
    if not below:
        return _pass("PS")
    witnesses = [_pull_inside(p, interior, atoms, shape) for p in below]
    for w in witnesses:
        img = apply_update(u, w)
        if not contains(Q, img):
            return TransitionCheck(False, "PS", w, img)
    raise UnsupportedGuard(
        "points strictly below the curve are guarded into a nonempty target; "
        "inclusion of that nonconvex set is not decided")


def _closed(atom: LinAtom, dim: int) -> Constraint:
    return Constraint(atom.dense(dim), EQ if atom.rel == EQ else LE, atom.rhs)


def _pull_inside(p: Vector, interior: Vector | None, atoms, shape: ConvexShape) -> Vector:
    """Move a closure point toward ``interior`` until the strict atoms hold, staying below the curve."""
    if interior is None or all(a.holds(p) for a in atoms):
        return p
    step = Fraction(1, 2)
    while True:
        q = tuple(x + step * (z - x) for x, z in zip(p, interior))
        if shape.gap(q) < 0 and all(a.holds(q) for a in atoms):
            return q
        step /= 2


def check_transition(P: Polyhedron, t: Transition, Q: Polyhedron) -> TransitionCheck:
    """Decide ``update(P & guard) <= Q`` exactly for one transition."""
    if P.dim != Q.dim:
        raise InputError(f"dimension mismatch between source ({P.dim}) and target ({Q.dim})")
    used = t.guard.variables() | t.update.variables()
    if used and max(used) >= P.dim:
        raise InputError(f"transition {t.label()} mentions a variable beyond dimension {P.dim}")
    if is_empty(P):
        return _pass("vacuous")
    if not t.guard.poly:
        return _check_linear(P, t.guard.lin, t.update, Q)
    if len(t.guard.poly) > 1:
        raise UnsupportedGuard("at most one polynomial atom per guard is supported")
    shape = convex_shape(t.guard.poly[0])
    V = to_v(P)
    if shape.rel == LT:
        return _check_below(V, t.guard.lin, shape, t.update, Q)
    for group in on_curve_groups(V, shape):
        res = _check_linear(group, t.guard.lin, t.update, Q, "PE")
        if not res.passed:
            return res
    return _pass("PE")


@dataclass
class TransitionOutcome:
    index: int
    transition: Transition
    status: str
    fragment: str = ""
    witness: Vector | None = None
    image: Vector | None = None
    note: str = ""


@dataclass
class CheckReport:
    verdict: str
    initial_ok: bool
    bad_empty: bool
    outcomes: list[TransitionOutcome] = field(default_factory=list)

    @property
    def failures(self) -> list[TransitionOutcome]:
        return [o for o in self.outcomes if o.status == FAIL]

    @property
    def ok(self) -> bool:
        return self.verdict == SEPARATING_INDUCTIVE


def label_of(I: Labeling, name: str) -> Polyhedron:
    try:
        return I[name]
    except KeyError:
        raise InputError(f"labeling has no entry for control state {name!r}") from None


def check_separating(s: TransitionSystem, I: Labeling) -> CheckReport:
    for st in s.states:
        P = label_of(I, st.name)
        if P.dim != s.dim:
            raise InputError(f"label of {st.name!r} has dimension {P.dim}, system has {s.dim}")
    initial_ok = contains(I[s.initial_state.name], s.initial_values)
    bad_empty = is_empty(I[s.bad_state.name])
    outcomes = []
    undecided: list[Exception] = []
    for k, t in enumerate(s.transitions):
        try:
            res = check_transition(I[t.source.name], t, I[t.target.name])
        except (UnsupportedGuard, PreconditionViolated, UnboundedPolyhedron) as exc:
            undecided.append(exc)
            outcomes.append(TransitionOutcome(k, t, UNDECIDED, note=str(exc)))
            continue
        note = ""
        if not res.passed:
            note = f"{_fmt(res.witness)} maps to {_fmt(res.image)}, outside the label of {t.target.name}"
        outcomes.append(TransitionOutcome(
            k, t, PASS if res.passed else FAIL, res.fragment, res.witness, res.image, note))
    failed = any(o.status == FAIL for o in outcomes)
    if not initial_ok:
        verdict = INITIAL_VIOLATED
    elif not bad_empty:
        verdict = NOT_SEPARATING
    elif failed:
        verdict = NOT_INDUCTIVE
    elif undecided:
        # no definite counterexample, and some transition could not be decided
        raise undecided[0]
    else:
        verdict = SEPARATING_INDUCTIVE
    return CheckReport(verdict, initial_ok, bad_empty, outcomes)


def _fmt(p: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(x) for x in p) + ")"
