"""Smith normal form over Z.

``smith_normal_form(A)`` returns ``(U, D, V)`` with ``U @ A @ V == D``, ``U``
and ``V`` unimodular and the diagonal of ``D`` a divisibility chain of
non-negative integers. Two pivot strategies are provided so callers can
cross-check invariant factors.
"""

from __future__ import annotations

from typing import Sequence

from .lattice import Matrix, identity

STRATEGIES = ("min", "first")


def _pick_pivot(a: Matrix, t: int, strategy: str) -> tuple[int, int] | None:
    m, n = len(a), len(a[0]) if a else 0
    best = None
    if strategy == "first":
        for j in range(t, n):
            for i in range(t, m):
                if a[i][j]:
                    return i, j
        return None
    for i in range(t, m):
        row = a[i]
        for j in range(t, n):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return i, j
    return None if best is None else (best[1], best[2])


def _diagonalize(a: Matrix, u: Matrix | None, v: Matrix | None, strategy: str) -> None:
    """In-place elimination; ``u``/``v`` track row/column operations if given."""
    m = len(a)
    n = len(a[0]) if m else 0
    for t in range(min(m, n)):
        pv = _pick_pivot(a, t, strategy)
        if pv is None:
            return
        while True:
            i, j = pv
            _swap_rows(a, u, t, i)
            _swap_cols(a, v, t, j)
            piv = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    _add_row(a, u, i, t, -(a[i][t] // piv))
            for j in range(t + 1, n):
                if a[t][j]:
                    _add_col(a, v, j, t, -(a[t][j] // piv))
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
            if rest:
                # remainders are smaller than the pivot: recurse on the least
                if strategy == "min":
                    pv = _pick_pivot(a, t, strategy)
                else:
                    pv = min(rest)[1:]
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(a[i][j] % piv for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            # fold the offending row into row t and keep reducing
            _add_row(a, u, t, bad, 1)
            pv = (t, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]


def _swap_rows(a, u, i, j):
    if i != j:
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]


def _swap_cols(a, v, i, j):
    if i != j:
        for row in a:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]


def _add_row(a, u, dst, src, c):
    """row[dst] += c * row[src]"""
    a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
    if u is not None:
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]


def _add_col(a, v, dst, src, c):
    for row in a:
        row[dst] += c * row[src]
    if v is not None:
        for row in v:
            row[dst] += c * row[src]


def smith_normal_form(a: Sequence[Sequence[int]], strategy: str = "min") -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D``.

    >>> smith_normal_form([[2, 0], [0, 3]])[1]
    [[1, 0], [0, 6]]
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown pivot strategy {strategy!r}")
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u = identity(m)
    v = identity(n)
    _diagonalize(d, u, v, strategy)
    return u, d, v


def invariant_factors(a: Sequence[Sequence[int]], strategy: str = "min") -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    d = [list(map(int, row)) for row in a if any(row)]
    if not d:
        return []
    _diagonalize(d, None, None, strategy)
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


def unimodular_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(m)
    a = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] in (1, -1)), None)
        if p is None:
            # reduce the column by gcd steps until a unit shows up
            p = _unit_pivot(a, c, n)
        a[c], a[p] = a[p], a[c]
        if a[c][c] == -1:
            a[c] = [-x for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def _unit_pivot(a: Matrix, c: int, n: int) -> int:
    rows = [r for r in range(c, n) if a[r][c]]
    while True:
        rows.sort(key=lambda r: abs(a[r][c]))
        if not rows:
            raise ValueError("matrix is not unimodular")
        p = rows[0]
        if abs(a[p][c]) == 1:
            return p
        for r in rows[1:]:
            q = a[r][c] // a[p][c]
            a[r] = [x - q * y for x, y in zip(a[r], a[p])]
        rows = [r for r in rows if a[r][c]]
        if len(rows) == 1 and abs(a[rows[0]][c]) != 1:
            raise ValueError("matrix is not unimodular")
