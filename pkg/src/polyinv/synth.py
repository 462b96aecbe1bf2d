"""Bounded-template invariant existence.

Two routes for labelings with at most ``k`` constraints per control state:

* ``encode_bounded_existence`` writes the exists-forall question as an
  SMT-LIB 2 script over nonlinear real arithmetic, for an external solver;
* ``search_bounded`` enumerates integer templates with entries in
  ``[-B, B]`` and returns the first labeling the checker certifies. Failing
  to find one proves nothing.
"""
from __future__ import annotations

import itertools
import re
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

from .checker import check_separating, check_transition
from .errors import InputError, PreconditionViolated, UnboundedPolyhedron, UnsupportedGuard
from .model import BAD, EQ, LE, LT, Guard, TransitionSystem, validate_system
from .polyhedra import Constraint, HPolyhedron, Polyhedron

NOT_FOUND_NOTE = "not found: the bounded search is incomplete, this is not a proof that no invariant exists"


@dataclass(frozen=True)
class TemplateSpec:
    k: int
    coeff_bound: int = 1

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InputError("template needs at least one constraint per state (k >= 1)")
        if self.coeff_bound < 0:
            raise InputError("coefficient bound must be nonnegative")


# --- SMT-LIB emission -------------------------------------------------------

_SIMPLE = re.compile(r"^[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*$")


def smt_symbol(name: str) -> str:
    if _SIMPLE.match(name):
        return name
    if "|" in name or "\\" in name:
        raise InputError(f"name {name!r} cannot be written as an SMT-LIB symbol")
    return f"|{name}|"


def smt_rational(r: Fraction) -> str:
    r = Fraction(r)
    mag = abs(r)
    if mag.denominator == 1:
        body = f"{mag.numerator}.0"
    else:
        body = f"(/ {mag.numerator}.0 {mag.denominator}.0)"
    return f"(- {body})" if r < 0 else body


def coeff_name(state: str, c: int, var: str) -> str:
    return f"a_{state}_{c}_{var}"


def offset_name(state: str, c: int) -> str:
    return f"b_{state}_{c}"


def coeff_symbol(state: str, c: int, var: str) -> str:
    return smt_symbol(coeff_name(state, c, var))


def offset_symbol(state: str, c: int) -> str:
    return smt_symbol(offset_name(state, c))


def _sum(terms: Sequence[str]) -> str:
    if not terms:
        return "0.0"
    if len(terms) == 1:
        return terms[0]
    return f"(+ {' '.join(terms)})"


def _and(parts: Sequence[str]) -> str:
    if not parts:
        return "true"
    if len(parts) == 1:
        return parts[0]
    return f"(and {' '.join(parts)})"


_REL = {LE: "<=", LT: "<", EQ: "="}


class _Emitter:
    def __init__(self, s: TransitionSystem, k: int):
        self.s = s
        self.k = k
        self.xs = [smt_symbol(f"x_{v}") for v in s.vars]

    def template(self, state: str, point: Sequence[str]) -> str:
        """Conjunction of the state's k template constraints at the given coordinate terms."""
        parts = []
        for c in range(self.k):
            lhs = _sum([f"(* {coeff_symbol(state, c, v)} {e})" for v, e in zip(self.s.vars, point)])
            parts.append(f"(<= {lhs} {offset_symbol(state, c)})")
        return _and(parts)

    def linear(self, coeffs, offset: Fraction) -> str:
        terms = [f"(* {smt_rational(c)} {self.xs[v]})" for v, c in coeffs]
        if offset != 0 or not terms:
            terms.append(smt_rational(offset))
        return _sum(terms)

    def guard(self, g: Guard) -> str:
        parts = []
        for atom in g.lin:
            parts.append(f"({_REL[atom.rel]} {self.linear(atom.coeffs, Fraction(0))} {smt_rational(atom.rhs)})")
        for atom in g.poly:
            terms = []
            for m in atom.monomials:
                factors = [smt_rational(m.coeff)]
                for v, e in m.exponents:
                    factors += [self.xs[v]] * e
                terms.append(f"(* {' '.join(factors)})")
            parts.append(f"({_REL[atom.rel]} {_sum(terms)} {smt_rational(atom.rhs)})")
        return _and(parts)

    def forall(self, body: str) -> str:
        if not self.xs:
            return body
        binders = " ".join(f"({x} Real)" for x in self.xs)
        return f"(forall ({binders}) {body})"


def encode_bounded_existence(s: TransitionSystem, spec: TemplateSpec) -> str:
    """SMT-LIB 2 script whose satisfiability is the existence of a k-constraint separating invariant."""
    problems = validate_system(s)
    if problems:
        raise InputError("invalid transition system: " + "; ".join(problems))
    em = _Emitter(s, spec.k)
    out = [
        f"; separating inductive invariant, k = {spec.k} template constraints per control state",
        f"; registers: {' '.join(s.vars)}",
        "(set-logic NRA)",
    ]
    for st in s.states:
        for c in range(spec.k):
            for v in s.vars:
                out.append(f"(declare-const {coeff_symbol(st.name, c, v)} Real)")
            out.append(f"(declare-const {offset_symbol(st.name, c)} Real)")
    init = s.initial_state
    out.append(f"; initial values lie in {init.name}")
    out.append(f"(assert {em.template(init.name, [smt_rational(x) for x in s.initial_values])})")
    for i, t in enumerate(s.transitions):
        a, c = t.update.matrix(s.dim)
        post = [em.linear([(j, a[r][j]) for j in range(s.dim) if a[r][j] != 0], c[r]) for r in range(s.dim)]
        pre = _and([em.template(t.source.name, em.xs)] + ([em.guard(t.guard)] if not t.guard.is_true() else []))
        out.append(f"; transition {i}: {t.label()}")
        out.append(f"(assert {em.forall(f'(=> {pre} {em.template(t.target.name, post)})')})")
    bad = s.bad_state
    out.append(f"; {bad.name} is labeled with an empty polyhedron")
    out.append(f"(assert {em.forall(f'(=> {em.template(bad.name, em.xs)} false)')})")
    out.append("(check-sat)")
    out.append("(get-model)")
    return "\n".join(out) + "\n"


def template_model(s: TransitionSystem, labeling: Mapping[str, HPolyhedron], k: int) -> dict[str, Fraction]:
    """Coefficient values realizing ``labeling`` in the emitted encoding.

    Missing constraints are padded with ``0 <= 0``; the bad state gets ``0 <= -1``.
    """
    model: dict[str, Fraction] = {}
    for st in s.states:
        if st.kind == BAD:
            cons = [Constraint([0] * s.dim, LE, -1)]
        else:
            cons = [c for c in labeling[st.name].constraints]
            if any(c.rel != LE for c in cons):
                cons = [h for c in cons for h in c.halfspaces()]
        if len(cons) > k:
            raise InputError(f"state {st.name!r} needs {len(cons)} constraints, template allows {k}")
        cons += [Constraint([0] * s.dim, LE, 0)] * (k - len(cons))
        for ci, con in enumerate(cons):
            for v, a in zip(s.vars, con.coeffs):
                model[coeff_name(st.name, ci, v)] = a
            model[offset_name(st.name, ci)] = con.rhs
    return model


# --- bounded enumeration ----------------------------------------------------

def template_constraints(dim: int, bound: int) -> list[Constraint]:
    """All ``a.x <= b`` with integer entries in ``[-bound, bound]``, lexicographic in ``(a, b)``."""
    rng = range(-bound, bound + 1)
    return [Constraint(v[:-1], LE, v[-1]) for v in itertools.product(rng, repeat=dim + 1)]


def _labels(dim: int, spec: TemplateSpec) -> list[tuple[Constraint, ...]]:
    return list(itertools.combinations_with_replacement(template_constraints(dim, spec.coeff_bound), spec.k))


def _candidates(s: TransitionSystem, spec: TemplateSpec) -> Iterator[dict[str, HPolyhedron]]:
    """Every labeling in enumeration order, pruning partial labelings that already fail.

    States are assigned in index order; a transition is checked as soon as both
    of its endpoints are labeled, so pruning never reorders the survivors.
    """
    bad = s.bad_state
    order = [st for st in s.states if st.kind != BAD]
    pool = _labels(s.dim, spec)
    init = s.initial_state
    init_pool = [cs for cs in pool if all(c.holds(s.initial_values) for c in cs)]
    fixed = {bad.name: HPolyhedron.empty(s.dim)}

    def ok(t, labels) -> bool:
        try:
            return check_transition(labels[t.source.name], t, labels[t.target.name]).passed
        except (UnsupportedGuard, PreconditionViolated, UnboundedPolyhedron):
            return False

    def extend(i: int, labels: dict[str, HPolyhedron]) -> Iterator[dict[str, HPolyhedron]]:
        if i == len(order):
            yield dict(labels)
            return
        st = order[i]
        done = {o.name for o in order[:i + 1]} | {bad.name}
        fresh = [t for t in s.transitions
                 if st.name in (t.source.name, t.target.name)
                 and t.source.name in done and t.target.name in done]
        for cs in (init_pool if st == init else pool):
            labels[st.name] = HPolyhedron(s.dim, cs)
            if all(ok(t, labels) for t in fresh):
                yield from extend(i + 1, labels)
        labels.pop(st.name, None)

    yield from extend(0, dict(fixed))


def search_bounded(s: TransitionSystem, spec: TemplateSpec) -> dict[str, Polyhedron] | None:
    """First certified labeling in enumeration order, or None (see ``NOT_FOUND_NOTE``)."""
    problems = validate_system(s)
    if problems:
        raise InputError("invalid transition system: " + "; ".join(problems))
    for labels in _candidates(s, spec):
        try:
            if check_separating(s, labels).ok:
                return labels
        except (UnsupportedGuard, PreconditionViolated, UnboundedPolyhedron):
            continue
    return None
