"""Exact convex polyhedra over the rationals.

Two representations are used side by side:

* ``HPolyhedron``: a conjunction of closed constraints ``a.x <= b`` / ``a.x = b``.
* ``VPolytope``: the convex hull of finitely many points (bounded sets only).

Emptiness, entailment and hull membership go through the exact simplex in
:mod:`polyinv.lp`; conversion between the two forms uses the double
description method.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import lp
from .dd import extreme_rays
from .errors import InputError, UnboundedPolyhedron
from .linalg import dot, nullspace, primitive, rref, solve
from .model import EQ, LE, AffineUpdate, Vector, as_vector

ZERO = Fraction(0)


@dataclass(frozen=True)
class Constraint:
    coeffs: Vector
    rel: str
    rhs: Fraction

    def __init__(self, coeffs: Iterable, rel: str, rhs) -> None:
        if rel not in (LE, EQ):
            raise InputError(f"polyhedron constraints are closed: got relation {rel!r}")
        object.__setattr__(self, "coeffs", as_vector(coeffs))
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "rhs", Fraction(rhs))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def lhs(self, p: Sequence[Fraction]) -> Fraction:
        return dot(self.coeffs, p)

    def holds(self, p: Sequence[Fraction]) -> bool:
        v = self.lhs(p)
        return v <= self.rhs if self.rel == LE else v == self.rhs

    def is_trivial(self) -> bool:
        """No variable occurs: the constraint is either always or never true."""
        return all(c == 0 for c in self.coeffs)

    def normalized(self) -> Constraint:
        vec = primitive(list(self.coeffs) + [self.rhs])
        if self.rel == EQ:
            lead = next((x for x in vec if x != 0), ZERO)
            if lead < 0:
                vec = tuple(-x for x in vec)
        return Constraint(vec[:-1], self.rel, vec[-1])

    def halfspaces(self) -> list[Constraint]:
        if self.rel == LE:
            return [self]
        return [Constraint(self.coeffs, LE, self.rhs),
                Constraint([-c for c in self.coeffs], LE, -self.rhs)]

    def __str__(self) -> str:
        terms = [f"{c}*x{i}" for i, c in enumerate(self.coeffs) if c != 0] or ["0"]
        return f"{' + '.join(terms)} {self.rel} {self.rhs}"


def le(coeffs: Iterable, rhs) -> Constraint:
    return Constraint(coeffs, LE, rhs)


def eq(coeffs: Iterable, rhs) -> Constraint:
    return Constraint(coeffs, EQ, rhs)


@dataclass(frozen=True)
class HPolyhedron:
    dim: int
    constraints: tuple[Constraint, ...]

    def __init__(self, dim: int, constraints: Iterable[Constraint] = ()) -> None:
        cons = tuple(constraints)
        for c in cons:
            if c.dim != dim:
                raise InputError(f"constraint of length {c.dim} in a polyhedron of dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "constraints", cons)

    @classmethod
    def universe(cls, dim: int) -> HPolyhedron:
        return cls(dim, ())

    @classmethod
    def empty(cls, dim: int) -> HPolyhedron:
        return cls(dim, (le([0] * dim, -1),))

    def intersect(self, other: HPolyhedron | Iterable[Constraint]) -> HPolyhedron:
        extra = other.constraints if isinstance(other, HPolyhedron) else tuple(other)
        return HPolyhedron(self.dim, self.constraints + extra)

    def lp_rows(self):
        """``(A_ub, b_ub, A_eq, b_eq)`` for the LP routines."""
        a_ub = [c.coeffs for c in self.constraints if c.rel == LE]
        b_ub = [c.rhs for c in self.constraints if c.rel == LE]
        a_eq = [c.coeffs for c in self.constraints if c.rel == EQ]
        b_eq = [c.rhs for c in self.constraints if c.rel == EQ]
        return a_ub, b_ub, a_eq, b_eq


@dataclass(frozen=True)
class VPolytope:
    dim: int
    points: tuple[Vector, ...]

    def __init__(self, dim: int, points: Iterable[Iterable] = ()) -> None:
        pts = tuple(as_vector(p) for p in points)
        for p in pts:
            if len(p) != dim:
                raise InputError(f"point of length {len(p)} in a polytope of dimension {dim}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "points", pts)

    @classmethod
    def empty(cls, dim: int) -> VPolytope:
        return cls(dim, ())

    def distinct_points(self) -> list[Vector]:
        return list(dict.fromkeys(self.points))


Polyhedron = Union[HPolyhedron, VPolytope]


def _check_dim(dim: int, p: Sequence) -> None:
    if len(p) != dim:
        raise InputError(f"dimension mismatch: expected {dim}, got {len(p)}")


def contains_point_h(P: HPolyhedron, p: Sequence[Fraction]) -> bool:
    _check_dim(P.dim, p)
    p = as_vector(p)
    return all(c.holds(p) for c in P.constraints)


def member_of_hull(V: VPolytope, p: Sequence[Fraction]) -> bool:
    """Exact test for ``p`` in conv(V.points) via lambda-feasibility."""
    _check_dim(V.dim, p)
    pts = V.distinct_points()
    if not pts:
        return False
    p = as_vector(p)
    if p in pts:
        return True
    k = len(pts)
    a_eq = [[q[i] for q in pts] for i in range(V.dim)] + [[Fraction(1)] * k]
    b_eq = list(p) + [Fraction(1)]
    return lp.feasible_point(k, A_eq=a_eq, b_eq=b_eq, nonneg=True) is not None


def is_vertex(V: VPolytope, i: int) -> bool:
    p = V.points[i]
    others = [q for q in V.points if q != p]
    return not member_of_hull(VPolytope(V.dim, others), p)


def h_feasible_point(P: HPolyhedron) -> Vector | None:
    if P.dim == 0:
        return () if all(c.holds(()) for c in P.constraints) else None
    return lp.feasible_point(P.dim, *P.lp_rows())


def h_is_empty(P: HPolyhedron) -> bool:
    return h_feasible_point(P) is None


def _violation_le(P: HPolyhedron, c: Constraint) -> Vector | None:
    if P.dim == 0:
        if h_feasible_point(P) is None:
            return None
        return None if c.holds(()) else ()
    res = lp.maximize(c.coeffs, *P.lp_rows())
    if res.status == lp.INFEASIBLE:
        return None
    if res.status == lp.OPTIMAL:
        return res.x if res.value > c.rhs else None
    slope = dot(c.coeffs, res.ray)
    step = max(ZERO, (c.rhs - dot(c.coeffs, res.x)) / slope) + 1
    return tuple(x + step * r for x, r in zip(res.x, res.ray))


def h_violation(P: HPolyhedron, c: Constraint) -> Vector | None:
    """A point of ``P`` violating ``c``, or None if ``P`` entails ``c``."""
    _check_dim(P.dim, c.coeffs)
    for half in c.halfspaces():
        w = _violation_le(P, half)
        if w is not None:
            return w
    return None


def h_entails(P: HPolyhedron, c: Constraint) -> bool:
    return h_violation(P, c) is None


def is_bounded(P: HPolyhedron) -> bool:
    """True for empty or bounded ``P``."""
    if P.dim == 0:
        return True
    rows = P.lp_rows()
    for i in range(P.dim):
        for sign in (1, -1):
            obj = [Fraction(0)] * P.dim
            obj[i] = Fraction(sign)
            res = lp.maximize(obj, *rows)
            if res.status == lp.INFEASIBLE:
                return True
            if res.status == lp.UNBOUNDED:
                return False
    return True


def _cleanup(dim: int, constraints: Iterable[Constraint]) -> HPolyhedron:
    seen: dict[Constraint, None] = {}
    for c in constraints:
        c = c.normalized()
        if c.is_trivial():
            if c.holds([ZERO] * dim):
                continue
            return HPolyhedron.empty(dim)
        seen.setdefault(c, None)
    return HPolyhedron(dim, seen)


def remove_redundant(P: HPolyhedron) -> HPolyhedron:
    """Drop constraints entailed by the remaining ones (one greedy pass)."""
    if h_is_empty(P):
        return HPolyhedron.empty(P.dim)
    kept = list(_cleanup(P.dim, P.constraints).constraints)
    i = 0
    while i < len(kept):
        rest = HPolyhedron(P.dim, kept[:i] + kept[i + 1:])
        if h_entails(rest, kept[i]):
            del kept[i]
        else:
            i += 1
    return HPolyhedron(P.dim, kept)


def fm_eliminate(P: HPolyhedron, v: int) -> HPolyhedron:
    """Project ``P`` along coordinate ``v``; the result lives in dimension ``dim - 1``.

    Equalities mentioning ``v`` are used for substitution; otherwise every lower
    bound on ``v`` is combined with every upper bound.
    """
    if not 0 <= v < P.dim:
        raise InputError(f"cannot eliminate coordinate {v} of a {P.dim}-dimensional polyhedron")
    cons = [c for c in P.constraints]
    pivot = next((c for c in cons if c.rel == EQ and c.coeffs[v] != 0), None)
    out: list[Constraint] = []
    if pivot is not None:
        for c in cons:
            if c is pivot:
                continue
            if c.coeffs[v] == 0:
                out.append(c)
                continue
            f = c.coeffs[v] / pivot.coeffs[v]
            out.append(Constraint(
                [a - f * b for a, b in zip(c.coeffs, pivot.coeffs)], c.rel, c.rhs - f * pivot.rhs))
    else:
        lower, upper = [], []
        for c in cons:
            k = c.coeffs[v]
            if k == 0:
                out.append(c)
            elif k > 0:
                upper.append(c)
            else:
                lower.append(c)
        for lo in lower:
            for up in upper:
                a, b = up.coeffs[v], -lo.coeffs[v]
                out.append(le([a * x + b * y for x, y in zip(lo.coeffs, up.coeffs)],
                              a * lo.rhs + b * up.rhs))
    dropped = (Constraint(c.coeffs[:v] + c.coeffs[v + 1:], c.rel, c.rhs) for c in out)
    return _cleanup(P.dim - 1, dropped)


def affine_image_h(P: HPolyhedron, u: AffineUpdate) -> HPolyhedron:
    """Exact image ``{A x + c | x in P}`` by elimination over the pair ``(x', x)``."""
    d = P.dim
    if u.variables() and max(u.variables()) >= d:
        raise InputError("update mentions a variable outside the polyhedron's dimension")
    a, c = u.matrix(d)
    zeros = [ZERO] * d
    system = [Constraint(zeros + list(k.coeffs), k.rel, k.rhs) for k in P.constraints]
    for i in range(d):
        row = [Fraction(int(i == j)) for j in range(d)] + [-x for x in a[i]]
        system.append(eq(row, c[i]))
    res = HPolyhedron(2 * d, system)
    for v in range(2 * d - 1, d - 1, -1):
        res = fm_eliminate(res, v)
    return res


def affine_image_v(V: VPolytope, u: AffineUpdate) -> VPolytope:
    from .model import apply_update

    return VPolytope(V.dim, [apply_update(u, p, V.dim) for p in V.points])


def substitute(P: HPolyhedron, assignment: Mapping[int, Fraction]) -> HPolyhedron:
    """Fix the given coordinates to constants and drop them."""
    fixed = {int(k): Fraction(v) for k, v in assignment.items()}
    if any(not 0 <= k < P.dim for k in fixed):
        raise InputError("substitution for a coordinate outside the polyhedron")
    keep = [i for i in range(P.dim) if i not in fixed]
    out = []
    for c in P.constraints:
        rhs = c.rhs - sum((c.coeffs[k] * val for k, val in fixed.items()), ZERO)
        out.append(Constraint([c.coeffs[i] for i in keep], c.rel, rhs))
    return _cleanup(len(keep), out)


def hrep_to_vrep(P: HPolyhedron) -> VPolytope:
    """Vertices of a bounded ``P``; raises ``UnboundedPolyhedron`` otherwise."""
    d = P.dim
    if d == 0:
        return VPolytope(0, [()] if h_feasible_point(P) is not None else [])
    if h_feasible_point(P) is None:
        return VPolytope.empty(d)
    a_ub, b_ub, a_eq, b_eq = P.lp_rows()
    x0 = solve(a_eq, b_eq, d) if a_eq else [ZERO] * d
    basis = nullspace(a_eq, d) if a_eq else [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    r = len(basis)
    if r == 0:
        return VPolytope(d, [x0])
    # x = x0 + sum z_j basis_j; inequalities become G z <= h
    g = [[dot(row, b) for b in basis] for row in a_ub]
    h = [bi - dot(row, x0) for row, bi in zip(a_ub, b_ub)]
    # homogenize: (lam, z) with lam >= 0 and lam*h - G z >= 0
    cone = [[hi] + [-x for x in gi] for gi, hi in zip(g, h)]
    cone.append([Fraction(1)] + [ZERO] * r)
    verts = []
    try:
        rays = extreme_rays(cone, r + 1)
    except ValueError:
        # the cone contains a line, so P does
        raise UnboundedPolyhedron("polyhedron contains a line") from None
    for ray in rays:
        lam = ray[0]
        if lam <= 0:
            raise UnboundedPolyhedron("recession direction found during vertex enumeration")
        z = [x / lam for x in ray[1:]]
        verts.append(tuple(x0[i] + sum((z[j] * basis[j][i] for j in range(r)), ZERO) for i in range(d)))
    return VPolytope(d, sorted(set(verts)))


def vrep_to_hrep(V: VPolytope) -> HPolyhedron:
    """Facets and affine-hull equalities of conv(V.points)."""
    d = V.dim
    pts = V.distinct_points()
    if not pts:
        return HPolyhedron.empty(d)
    if d == 0:
        return HPolyhedron.universe(0)
    lifted = [[Fraction(1)] + list(p) for p in pts]
    out: list[Constraint] = []
    # w = (beta, alpha) with beta + alpha.p == 0 on every point: alpha.x = -beta
    for w in nullspace(lifted, d + 1):
        out.append(eq(w[1:], -w[0]))
    rowspace, _ = rref(lifted, d + 1)
    if len(rowspace) > 1:
        reduced = [[dot(m, r) for r in rowspace] for m in lifted]
        for v in extreme_rays(reduced, len(rowspace)):
            w = [sum((v[j] * rowspace[j][i] for j in range(len(rowspace))), ZERO) for i in range(d + 1)]
            # beta + alpha.x >= 0
            out.append(le([-x for x in w[1:]], w[0]))
    return _cleanup(d, out)


def to_h(P: Polyhedron) -> HPolyhedron:
    return P if isinstance(P, HPolyhedron) else vrep_to_hrep(P)


def to_v(P: Polyhedron) -> VPolytope:
    return P if isinstance(P, VPolytope) else hrep_to_vrep(P)


def contains(P: Polyhedron, p: Sequence[Fraction]) -> bool:
    if isinstance(P, HPolyhedron):
        return contains_point_h(P, p)
    return member_of_hull(P, p)


def is_empty(P: Polyhedron) -> bool:
    if isinstance(P, VPolytope):
        return not P.points
    return h_is_empty(P)


def included(P: Polyhedron, Q: Polyhedron) -> bool:
    """Set inclusion ``P <= Q`` for any mix of representations."""
    if P.dim != Q.dim:
        raise InputError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    if isinstance(P, VPolytope):
        return all(contains(Q, p) for p in P.points)
    if isinstance(Q, HPolyhedron):
        return all(h_entails(P, c) for c in Q.constraints)
    if h_is_empty(P):
        return True
    if not is_bounded(P):
        return False
    return all(member_of_hull(Q, p) for p in hrep_to_vrep(P).points)


def same_set(P: Polyhedron, Q: Polyhedron) -> bool:
    return included(P, Q) and included(Q, P)
