"""Exact rational linear programming.

A dense two-phase tableau simplex with Bland's rule, so it terminates on
degenerate problems. Problem sizes here are tiny (tens of variables), which
makes a dense Fraction tableau perfectly adequate.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Rows = Sequence[Sequence[Fraction]]


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    # improving direction when status is UNBOUNDED; x is then a feasible point
    ray: tuple[Fraction, ...] | None = None


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], ncols: int):
        self.m = len(rows)
        self.ncols = ncols
        # artificial columns follow the structural ones
        self.t = []
        for i, (r, b) in enumerate(zip(rows, rhs)):
            if b < 0:
                r = [-x for x in r]
                b = -b
            art = [Fraction(int(i == j)) for j in range(self.m)]
            self.t.append(list(r) + art + [b])
        self.basis = [ncols + i for i in range(self.m)]

    @property
    def width(self) -> int:
        return len(self.t[0]) - 1 if self.t else self.ncols

    def pivot(self, r: int, c: int, extra: list[list[Fraction]] = ()) -> None:
        row = self.t[r]
        inv = 1 / row[c]
        row = [x * inv if x else x for x in row]
        self.t[r] = row
        nz = [j for j, y in enumerate(row) if y]
        for other in [self.t[i] for i in range(self.m) if i != r] + list(extra):
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
        self.basis[r] = c

    def run(self, cost: list[Fraction], allowed: range) -> int | None:
        """Minimize ``cost``; return None at optimum, or the entering column of an unbounded ray."""
        # reduced costs, kept up to date across pivots
        red = list(cost[:self.width]) + [Fraction(0)]
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                red = [x - cb * y if y else x for x, y in zip(red, self.t[i])]
        while True:
            basic = set(self.basis)
            entering = next((j for j in allowed if j not in basic and red[j] < 0), None)
            if entering is None:
                return None
            best = None
            for i in range(self.m):
                a = self.t[i][entering]
                if a > 0:
                    ratio = self.t[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return entering
            self.pivot(best[1], entering, [red])

    def solution(self) -> list[Fraction]:
        z = [Fraction(0)] * self.width
        for i, b in enumerate(self.basis):
            z[b] = self.t[i][-1]
        return z


def _standard_form(n, A_ub, b_ub, A_eq, b_eq, nonneg):
    """Rows over columns [x+ (n), x- (n unless nonneg), slacks]."""
    n_split = n if nonneg else 2 * n
    n_slack = len(A_ub)
    ncols = n_split + n_slack
    rows, rhs = [], []
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        a = [Fraction(x) for x in a]
        row = a + ([] if nonneg else [-x for x in a])
        row += [Fraction(int(j == k)) for j in range(n_slack)]
        rows.append(row)
        rhs.append(Fraction(b))
    for a, b in zip(A_eq, b_eq):
        a = [Fraction(x) for x in a]
        row = a + ([] if nonneg else [-x for x in a]) + [Fraction(0)] * n_slack
        rows.append(row)
        rhs.append(Fraction(b))
    return rows, rhs, ncols


def _to_x(z: Sequence[Fraction], n: int, nonneg: bool) -> tuple[Fraction, ...]:
    if nonneg:
        return tuple(z[:n])
    return tuple(z[i] - z[n + i] for i in range(n))


def maximize(
    c: Sequence[Fraction],
    A_ub: Rows = (),
    b_ub: Sequence[Fraction] = (),
    A_eq: Rows = (),
    b_eq: Sequence[Fraction] = (),
    *,
    nonneg: bool = False,
) -> LPResult:
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    Variables are free unless ``nonneg``. The returned point is exact.
    """
    n = len(c)
    rows, rhs, ncols = _standard_form(n, A_ub, b_ub, A_eq, b_eq, nonneg)
    if not rows:
        origin = (Fraction(0),) * n
        ray = tuple(max(Fraction(x), Fraction(0)) if nonneg else Fraction(x) for x in c)
        if any(r != 0 for r in ray):
            return LPResult(UNBOUNDED, x=origin, ray=ray)
        return LPResult(OPTIMAL, x=origin, value=Fraction(0))
    tab = _Tableau(rows, rhs, ncols)
    m = tab.m

    phase1 = [Fraction(0)] * ncols + [Fraction(1)] * m
    tab.run(phase1, range(ncols + m))
    if sum((tab.t[i][-1] for i, b in enumerate(tab.basis) if b >= ncols), Fraction(0)) > 0:
        return LPResult(INFEASIBLE)

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if tab.basis[i] >= ncols:
            col = next((j for j in range(ncols) if tab.t[i][j] != 0), None)
            if col is None:
                continue
            tab.pivot(i, col)
        keep.append(i)
    tab.t = [tab.t[i][:ncols] + [tab.t[i][-1]] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    tab.m = len(keep)

    lift = [-Fraction(x) for x in c]
    cost = lift + ([] if nonneg else [-x for x in lift]) + [Fraction(0)] * (ncols - (n if nonneg else 2 * n))
    entering = tab.run(cost, range(ncols))
    z = tab.solution()
    x = _to_x(z, n, nonneg)
    if entering is not None:
        dz = [Fraction(0)] * ncols
        dz[entering] = Fraction(1)
        for i, b in enumerate(tab.basis):
            dz[b] = -tab.t[i][entering]
        return LPResult(UNBOUNDED, x=x, ray=_to_x(dz, n, nonneg))
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x=x, value=value)


def feasible_point(
    n: int,
    A_ub: Rows = (),
    b_ub: Sequence[Fraction] = (),
    A_eq: Rows = (),
    b_eq: Sequence[Fraction] = (),
    *,
    nonneg: bool = False,
) -> tuple[Fraction, ...] | None:
    res = maximize([Fraction(0)] * n, A_ub, b_ub, A_eq, b_eq, nonneg=nonneg)
    return res.x if res.status == OPTIMAL else None


def strict_feasible_point(
    n: int,
    A_ub: Rows = (),
    b_ub: Sequence[Fraction] = (),
    A_lt: Rows = (),
    b_lt: Sequence[Fraction] = (),
    A_eq: Rows = (),
    b_eq: Sequence[Fraction] = (),
) -> tuple[Fraction, ...] | None:
    """A point with ``A_ub x <= b_ub``, ``A_lt x < b_lt``, ``A_eq x = b_eq``, or None."""
    if not A_lt:
        return feasible_point(n, A_ub, b_ub, A_eq, b_eq)
    # maximize a slack eps shared by the strict rows, capped at 1
    z = Fraction(0)
    ub = [list(r) + [z] for r in A_ub] + [list(r) + [Fraction(1)] for r in A_lt]
    ub.append([z] * n + [Fraction(1)])
    bub = list(b_ub) + list(b_lt) + [Fraction(1)]
    eq = [list(r) + [z] for r in A_eq]
    res = maximize([z] * n + [Fraction(1)], ub, bub, eq, b_eq)
    if res.status != OPTIMAL or res.value <= 0:
        return None
    return res.x[:n]
