"""Double description method for pointed polyhedral cones.

Given rows ``a_1..a_m`` spanning ``Q^n``, ``extreme_rays`` returns the
extreme rays of ``{w : a_i . w >= 0 for all i}``. Rays are reported as
primitive integer vectors (as Fractions), deduplicated and sorted.
"""
from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from .linalg import dot, inverse, primitive, rref


def _independent_rows(rows: Sequence[Sequence[Fraction]], n: int) -> list[int]:
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    for i, r in enumerate(rows):
        trial = basis + [list(r)]
        if len(rref(trial, n)[1]) == len(trial):
            basis = trial
            chosen.append(i)
            if len(chosen) == n:
                break
    return chosen


def extreme_rays(rows: Sequence[Sequence[Fraction]], n: int) -> list[tuple[Fraction, ...]]:
    rows = [tuple(Fraction(x) for x in r) for r in rows]
    if n == 0:
        return []
    start = _independent_rows(rows, n)
    if len(start) < n:
        raise ValueError("cone is not pointed: constraint rows do not span the space")
    inv = inverse([rows[i] for i in start])
    # columns of the inverse: tight on all start rows but one
    rays: list[tuple[tuple[Fraction, ...], frozenset[int]]] = []
    for j in range(n):
        vec = primitive([inv[i][j] for i in range(n)])
        zeros = frozenset(start[k] for k in range(n) if k != j)
        rays.append((vec, zeros))

    chosen = set(start)
    for i, row in enumerate(rows):
        if i in chosen:
            continue
        vals = [dot(row, r) for r, _ in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        new = [(r, z) for (r, z), v in zip(rays, vals) if v > 0]
        new += [(r, z | {i}) for (r, z), v in zip(rays, vals) if v == 0]
        for p in pos:
            rp, zp = rays[p]
            for q in neg:
                rq, zq = rays[q]
                common = zp & zq
                if len(common) < n - 2:
                    continue
                # combinatorial adjacency: no third ray is tight on all of `common`
                if any(k != p and k != q and common <= z for k, (_, z) in enumerate(rays)):
                    continue
                w = [vals[p] * b - vals[q] * a for a, b in zip(rp, rq)]
                new.append((primitive(w), common | {i}))
        rays = list(dict(new).items())
        chosen.add(i)

    return sorted({r for r, _ in rays})
