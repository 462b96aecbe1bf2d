"""Transition systems over exact rationals.

Registers are referred to by their integer index into ``TransitionSystem.vars``;
the names are for display and serialization only. Control is explicit: a
system has a list of control states and guarded affine transitions between
them, so guards never mention the control location.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError

Rational = Fraction
Vector = tuple[Fraction, ...]

LE = "<="
LT = "<"
EQ = "="
RELATIONS = (LE, LT, EQ)

INITIAL = "initial"
ORDINARY = "ordinary"
BAD = "bad"
STATE_KINDS = (INITIAL, ORDINARY, BAD)

_RATIONAL = re.compile(r"(-?[0-9]+)(?:/([0-9]+))?")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` with ``q > 0``; surrounding whitespace is not allowed."""
    if not isinstance(text, str):
        raise InputError(f"rational must be a string, got {type(text).__name__}")
    m = _RATIONAL.fullmatch(text)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise InputError(f"not a rational: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def render_rational(r: Fraction) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def as_vector(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def _sparse(coeffs: Mapping[int, object] | Iterable[tuple[int, object]]) -> tuple[tuple[int, Fraction], ...]:
    items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
    merged: dict[int, Fraction] = {}
    for var, c in items:
        merged[int(var)] = merged.get(int(var), Fraction(0)) + Fraction(c)
    return tuple(sorted((v, c) for v, c in merged.items() if c != 0))


def _check_rel(rel: str) -> None:
    if rel not in RELATIONS:
        raise InputError(f"unknown relation {rel!r}")


def _holds(lhs: Fraction, rel: str, rhs: Fraction) -> bool:
    if rel == LE:
        return lhs <= rhs
    if rel == LT:
        return lhs < rhs
    return lhs == rhs


def _dim_check(max_var: int, p: Sequence, dim: int | None) -> None:
    if dim is not None and len(p) != dim:
        raise InputError(f"point has length {len(p)}, expected {dim}")
    if max_var >= len(p):
        raise InputError(f"variable index {max_var} out of range for point of length {len(p)}")


@dataclass(frozen=True)
class LinAtom:
    """``sum(coeffs[v] * x[v]) rel rhs``."""

    coeffs: tuple[tuple[int, Fraction], ...]
    rel: str
    rhs: Fraction

    def __init__(self, coeffs, rel: str, rhs) -> None:
        _check_rel(rel)
        object.__setattr__(self, "coeffs", _sparse(coeffs))
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "rhs", Fraction(rhs))

    def variables(self) -> set[int]:
        return {v for v, _ in self.coeffs}

    def lhs(self, p: Sequence[Fraction]) -> Fraction:
        return sum((c * p[v] for v, c in self.coeffs), Fraction(0))

    def holds(self, p: Sequence[Fraction]) -> bool:
        return _holds(self.lhs(p), self.rel, self.rhs)

    def dense(self, dim: int) -> list[Fraction]:
        row = [Fraction(0)] * dim
        for v, c in self.coeffs:
            row[v] = c
        return row


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    exponents: tuple[tuple[int, int], ...]

    def __init__(self, coeff, exponents) -> None:
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        exps: dict[int, int] = {}
        for v, e in items:
            if int(e) <= 0:
                raise InputError(f"exponent must be positive, got {e}")
            exps[int(v)] = exps.get(int(v), 0) + int(e)
        object.__setattr__(self, "coeff", Fraction(coeff))
        object.__setattr__(self, "exponents", tuple(sorted(exps.items())))

    @property
    def degree(self) -> int:
        return sum(e for _, e in self.exponents)

    def value(self, p: Sequence[Fraction]) -> Fraction:
        out = self.coeff
        for v, e in self.exponents:
            out *= p[v] ** e
        return out


@dataclass(frozen=True)
class PolyAtom:
    """``sum(monomials) rel rhs`` with at least one monomial of degree >= 2."""

    monomials: tuple[Monomial, ...]
    rel: str
    rhs: Fraction

    def __init__(self, monomials: Iterable[Monomial], rel: str, rhs) -> None:
        _check_rel(rel)
        merged: dict[tuple[tuple[int, int], ...], Fraction] = {}
        for m in monomials:
            merged[m.exponents] = merged.get(m.exponents, Fraction(0)) + m.coeff
        monos = tuple(Monomial(c, e) for e, c in sorted(merged.items()) if c != 0)
        if not any(m.degree >= 2 for m in monos):
            raise InputError("polynomial atom needs a monomial of degree >= 2")
        object.__setattr__(self, "monomials", monos)
        object.__setattr__(self, "rel", rel)
        object.__setattr__(self, "rhs", Fraction(rhs))

    def variables(self) -> set[int]:
        return {v for m in self.monomials for v, _ in m.exponents}

    def lhs(self, p: Sequence[Fraction]) -> Fraction:
        return sum((m.value(p) for m in self.monomials), Fraction(0))

    def holds(self, p: Sequence[Fraction]) -> bool:
        return _holds(self.lhs(p), self.rel, self.rhs)


@dataclass(frozen=True)
class Guard:
    """Conjunction of atoms; the empty guard is ``true``."""

    lin: tuple[LinAtom, ...] = ()
    poly: tuple[PolyAtom, ...] = ()

    def __init__(self, lin: Iterable[LinAtom] = (), poly: Iterable[PolyAtom] = ()) -> None:
        object.__setattr__(self, "lin", tuple(lin))
        object.__setattr__(self, "poly", tuple(poly))

    def is_true(self) -> bool:
        return not self.lin and not self.poly

    def variables(self) -> set[int]:
        out: set[int] = set()
        for a in (*self.lin, *self.poly):
            out |= a.variables()
        return out

    def conjoin(self, other: Guard) -> Guard:
        return Guard(self.lin + other.lin, self.poly + other.poly)


TRUE = Guard()


@dataclass(frozen=True)
class AffineExpr:
    coeffs: tuple[tuple[int, Fraction], ...]
    offset: Fraction

    def __init__(self, coeffs=(), offset=0) -> None:
        object.__setattr__(self, "coeffs", _sparse(coeffs))
        object.__setattr__(self, "offset", Fraction(offset))

    def value(self, p: Sequence[Fraction]) -> Fraction:
        return self.offset + sum((c * p[v] for v, c in self.coeffs), Fraction(0))


@dataclass(frozen=True)
class AffineUpdate:
    """Simultaneous assignment ``x' = A x + c``; unassigned registers keep their value."""

    assign: tuple[tuple[int, AffineExpr], ...] = ()

    def __init__(self, assign: Mapping[int, AffineExpr] | Iterable[tuple[int, AffineExpr]] = ()) -> None:
        items = assign.items() if isinstance(assign, Mapping) else assign
        table = dict(items)
        # x := x is the same as leaving x alone
        table = {
            v: e for v, e in table.items()
            if not (e.offset == 0 and e.coeffs == ((v, Fraction(1)),))
        }
        object.__setattr__(self, "assign", tuple(sorted(table.items())))

    def variables(self) -> set[int]:
        out = set()
        for v, e in self.assign:
            out.add(v)
            out |= {w for w, _ in e.coeffs}
        return out

    def matrix(self, dim: int) -> tuple[list[list[Fraction]], list[Fraction]]:
        """Dense ``(A, c)`` with identity rows for unassigned registers."""
        a = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
        c = [Fraction(0)] * dim
        for v, e in self.assign:
            a[v] = [Fraction(0)] * dim
            for w, k in e.coeffs:
                a[v][w] = k
            c[v] = e.offset
        return a, c


IDENTITY = AffineUpdate()


@dataclass(frozen=True)
class ControlState:
    index: int
    name: str
    kind: str = ORDINARY


@dataclass(frozen=True)
class Transition:
    source: ControlState
    target: ControlState
    guard: Guard = TRUE
    update: AffineUpdate = IDENTITY

    def label(self) -> str:
        return f"{self.source.name}->{self.target.name}"


@dataclass(frozen=True)
class TransitionSystem:
    vars: tuple[str, ...]
    states: tuple[ControlState, ...]
    transitions: tuple[Transition, ...]
    initial_values: Vector = field(default=())

    def __init__(self, vars, states, transitions, initial_values=None) -> None:
        vars = tuple(vars)
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "states", tuple(states))
        object.__setattr__(self, "transitions", tuple(transitions))
        if initial_values is None:
            initial_values = (0,) * len(vars)
        object.__setattr__(self, "initial_values", as_vector(initial_values))

    @property
    def dim(self) -> int:
        return len(self.vars)

    def _of_kind(self, kind: str) -> ControlState:
        found = [s for s in self.states if s.kind == kind]
        if len(found) != 1:
            raise InputError(f"expected exactly one {kind} state, found {len(found)}")
        return found[0]

    @property
    def initial_state(self) -> ControlState:
        return self._of_kind(INITIAL)

    @property
    def bad_state(self) -> ControlState:
        return self._of_kind(BAD)

    def state(self, name: str) -> ControlState:
        for s in self.states:
            if s.name == name:
                return s
        raise InputError(f"unknown control state {name!r}")

    def var_index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r}") from None

    def outgoing(self, state: ControlState) -> list[Transition]:
        return [t for t in self.transitions if t.source == state]

    @property
    def initial_config(self) -> Config:
        return Config(self.initial_state, self.initial_values)


@dataclass(frozen=True)
class Config:
    state: ControlState
    values: Vector

    def __init__(self, state: ControlState, values) -> None:
        object.__setattr__(self, "state", state)
        object.__setattr__(self, "values", as_vector(values))


def eval_guard(g: Guard, p: Sequence[Fraction], dim: int | None = None) -> bool:
    vars_ = g.variables()
    _dim_check(max(vars_, default=-1), p, dim)
    return all(a.holds(p) for a in g.lin) and all(a.holds(p) for a in g.poly)


def apply_update(u: AffineUpdate, p: Sequence[Fraction], dim: int | None = None) -> Vector:
    _dim_check(max(u.variables(), default=-1), p, dim)
    out = list(as_vector(p))
    for v, e in u.assign:
        out[v] = e.value(p)
    return tuple(out)


def validate_system(s: TransitionSystem) -> list[str]:
    """Return human-readable violations; an empty list means well-formed."""
    problems: list[str] = []
    if len(set(s.vars)) != len(s.vars):
        problems.append("variable names are not unique")
    names = [st.name for st in s.states]
    if len(set(names)) != len(names):
        problems.append("state names are not unique")
    for i, st in enumerate(s.states):
        if st.index != i:
            problems.append(f"state {st.name!r} has index {st.index}, expected {i}")
        if st.kind not in STATE_KINDS:
            problems.append(f"state {st.name!r} has unknown kind {st.kind!r}")
    for kind in (INITIAL, BAD):
        n = sum(st.kind == kind for st in s.states)
        if n != 1:
            problems.append(f"expected exactly one {kind} state, found {n}")
    if len(s.initial_values) != s.dim:
        problems.append(
            f"initial values have length {len(s.initial_values)}, dimension is {s.dim}"
        )
    known = set(s.states)
    for i, t in enumerate(s.transitions):
        where = f"transition {i} ({t.label()})"
        if t.source not in known or t.target not in known:
            problems.append(f"{where} refers to a state not in the system")
        if t.source.kind == BAD:
            problems.append(f"{where} leaves the bad state")
        used = t.guard.variables() | t.update.variables()
        if used and max(used) >= s.dim:
            problems.append(f"{where} uses variable index {max(used)} >= dimension {s.dim}")
    return problems
