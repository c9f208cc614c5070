"""Truncated simplicial sets with involutions and cyclic operators.

A :class:`TruncatedDihedralSet` stores, for each degree ``q <= max_degree``,
a finite tuple of cells together with operator formulas. The involution
comes in two flavours:

``"real"``
    ``w`` reverses simplices: ``d_i w = w d_{q-i}`` and ``s_i w = w s_{q-i}``.
``"action"``
    ``w`` is a simplicial map: ``d_i w = w d_i``. Segal subdivision turns
    the first kind into the second, which is what makes fixed points a
    simplicial set.

Infinite objects are cut down either to a weight piece (cells with a fixed
total sum in a sharp monoid) or to an l1 window (cells whose coordinates
have total absolute value at most ``W``). Merging entries never increases
the l1 norm and inserting zeros keeps it, so windows are closed under faces
and degeneracies; they are closed under ``w`` whenever ``w`` permutes
coordinates up to sign.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

from . import lattice as lat
from .monoid import AffineMonoid
from .report import FAIL, PASS, CheckReport

Cell = Hashable
REAL = "real"
ACTION = "action"
BASEPOINT = ("+",)


@dataclass(frozen=True)
class WeightWindow:
    """Restricts nerve cells to a total sum and/or an l1 radius."""

    weight: tuple[int, ...] | None = None
    radius: int | None = None

    def __post_init__(self):
        if self.weight is None and self.radius is None:
            raise ValueError("a window needs a weight or a radius")
        if self.radius is not None and self.radius < 0:
            raise ValueError("window radius must be non-negative")
        if self.weight is not None:
            object.__setattr__(self, "weight", tuple(int(v) for v in self.weight))


def _norm(cell: Iterable[Sequence[int]]) -> int:
    return sum(abs(c) for v in cell for c in v)


class TruncatedDihedralSet:
    """Finite degreewise cell tables with operator formulas up to ``max_degree``.

    ``face(q, i, x)`` and ``degen(q, i, x)`` take a cell of degree ``q``;
    ``w(q, x)`` and ``t(q, x)`` are optional. ``member(q, x)`` decides
    membership in the (possibly infinite) ambient object, defaulting to the
    tabulated cells. ``closed`` records whether the tables are closed under
    every operator present.
    """

    def __init__(
        self,
        max_degree: int,
        cells: Sequence[Sequence[Cell]],
        face: Callable[[int, int, Cell], Cell],
        degen: Callable[[int, int, Cell], Cell],
        w: Callable[[int, Cell], Cell] | None = None,
        t: Callable[[int, Cell], Cell] | None = None,
        *,
        w_kind: str = REAL,
        member: Callable[[int, Cell], bool] | None = None,
        closed: bool = True,
        basepoint: Cell | None = None,
        name: str = "",
        meta: dict | None = None,
    ):
        if len(cells) != max_degree + 1:
            raise ValueError("need one cell table per degree")
        if w_kind not in (REAL, ACTION):
            raise ValueError(f"unknown involution kind {w_kind!r}")
        self.max_degree = max_degree
        self._cells = tuple(tuple(c) for c in cells)
        self._index = [None] * (max_degree + 1)
        self.face = face
        self.degen = degen
        self.w = w
        self.t = t
        self.w_kind = w_kind
        self._member = member
        self.closed = closed
        self.basepoint = basepoint
        self.name = name
        self.meta = dict(meta or {})

    def cells(self, q: int) -> tuple:
        return self._cells[q]

    def index(self, q: int) -> dict:
        if self._index[q] is None:
            self._index[q] = {c: k for k, c in enumerate(self._cells[q])}
        return self._index[q]

    def member(self, q: int, x: Cell) -> bool:
        if self._member is not None:
            return self._member(q, x)
        return x in self.index(q)

    def tabulated(self, q: int, x: Cell) -> bool:
        return x in self.index(q)

    def counts(self) -> list[int]:
        return [len(c) for c in self._cells]

    @property
    def has_w(self) -> bool:
        return self.w is not None

    @property
    def has_t(self) -> bool:
        return self.t is not None

    def is_degenerate(self, q: int, x: Cell) -> bool:
        """``x`` is degenerate iff ``x == s_i d_i x`` for some ``i``."""
        return q > 0 and any(self.degen(q - 1, i, self.face(q, i, x)) == x for i in range(q))

    def __repr__(self):
        return f"TruncatedDihedralSet({self.name or '?'}, N={self.max_degree}, cells={self.counts()})"

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        """Per-degree cells and operator tables (as indices where tabulated)."""
        out = {"name": self.name, "max_degree": self.max_degree, "w_kind": self.w_kind, "degrees": []}
        for q in range(self.max_degree + 1):
            cells = self.cells(q)
            entry: dict[str, Any] = {"cells": [_plain(c) for c in cells]}
            if q > 0:
                entry["faces"] = [[self._ref(q - 1, self.face(q, i, c)) for i in range(q + 1)] for c in cells]
            if q < self.max_degree:
                entry["degeneracies"] = [[self._ref(q + 1, self.degen(q, i, c)) for i in range(q + 1)] for c in cells]
            if self.w is not None:
                entry["w"] = [self._ref(q, self.w(q, c)) for c in cells]
            if self.t is not None:
                entry["t"] = [self._ref(q, self.t(q, c)) for c in cells]
            out["degrees"].append(entry)
        return out

    def _ref(self, q: int, x: Cell):
        k = self.index(q).get(x)
        return k if k is not None else {"outside": _plain(x)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _plain(x):
    if isinstance(x, tuple):
        return [_plain(v) for v in x]
    return x


# -- relation checking ---------------------------------------------------------


def relation_violations(x_set: TruncatedDihedralSet, limit: int = 10) -> list[dict]:
    """Every failing crossed-simplicial identity, up to ``limit`` entries."""
    X = x_set
    N = X.max_degree
    d, s, w, t = X.face, X.degen, X.w, X.t
    out: list[dict] = []

    def bad(name: str, q: int, x: Cell):
        out.append({"relation": name, "degree": q, "cell": _plain(x)})
        return len(out) >= limit

    def closed_ok(q: int, y: Cell) -> bool:
        return X.tabulated(q, y) if X.closed else X.member(q, y)

    for q in range(N + 1):
        for x in X.cells(q):
            if q >= 1:
                faces = [d(q, i, x) for i in range(q + 1)]
                for i, y in enumerate(faces):
                    if not closed_ok(q - 1, y) and bad(f"d{i} closure", q, x):
                        return out
            if q >= 2:
                for j in range(q + 1):
                    for i in range(j):
                        if d(q - 1, i, faces[j]) != d(q - 1, j - 1, faces[i]) and bad(f"d{i}d{j}", q, x):
                            return out
            if q + 1 <= N:
                degs = [s(q, j, x) for j in range(q + 1)]
                for j, y in enumerate(degs):
                    if not closed_ok(q + 1, y) and bad(f"s{j} closure", q, x):
                        return out
                    for i in range(q + 2):
                        lhs = d(q + 1, i, y)
                        if i < j:
                            rhs = s(q - 1, j - 1, d(q, i, x))
                        elif i in (j, j + 1):
                            rhs = x
                        else:
                            rhs = s(q - 1, j, d(q, i - 1, x))
                        if lhs != rhs and bad(f"d{i}s{j}", q, x):
                            return out
                if q + 2 <= N:
                    for j in range(q + 1):
                        for i in range(j + 1):
                            if s(q + 1, i, degs[j]) != s(q + 1, j + 1, degs[i]) and bad(f"s{i}s{j}", q, x):
                                return out
            if w is not None:
                wx = w(q, x)
                if not closed_ok(q, wx) and bad("w closure", q, x):
                    return out
                if w(q, wx) != x and bad("w^2", q, x):
                    return out
                mirror = (lambda i: q - i) if X.w_kind == REAL else (lambda i: i)
                for i in range(q + 1 if q >= 1 else 0):
                    if d(q, i, wx) != w(q - 1, d(q, mirror(i), x)) and bad(f"d{i}w", q, x):
                        return out
                if q + 1 <= N:
                    for i in range(q + 1):
                        if s(q, i, wx) != w(q + 1, s(q, mirror(i), x)) and bad(f"s{i}w", q, x):
                            return out
            if t is not None:
                tx = t(q, x)
                if not closed_ok(q, tx) and bad("t closure", q, x):
                    return out
                y = x
                for _ in range(q + 1):
                    y = t(q, y)
                if y != x and bad("t^(q+1)", q, x):
                    return out
                if q >= 1:
                    if d(q, 0, tx) != d(q, q, x) and bad("d0t", q, x):
                        return out
                    for i in range(1, q + 1):
                        if d(q, i, tx) != t(q - 1, d(q, i - 1, x)) and bad(f"d{i}t", q, x):
                            return out
                if q + 1 <= N:
                    if s(q, 0, tx) != t(q + 1, t(q + 1, s(q, q, x))) and bad("s0t", q, x):
                        return out
                    for i in range(1, q + 1):
                        if s(q, i, tx) != t(q + 1, s(q, i - 1, x)) and bad(f"s{i}t", q, x):
                            return out
                if w is not None and t(q, w(q, tx)) != w(q, x) and bad("twt", q, x):
                    return out
    return out


def verify_relations(x_set: TruncatedDihedralSet, limit: int = 10) -> CheckReport:
    """Check every simplicial, real/action and cyclic identity on all cells."""
    problems = relation_violations(x_set, limit)
    details = {"object": x_set.name, "cells": x_set.counts()}
    if problems:
        return CheckReport("relations", FAIL, problems, details)
    return CheckReport("relations", PASS, None, details)


# -- maps ---------------------------------------------------------------------


@dataclass
class SimplicialMap:
    source: TruncatedDihedralSet
    target: TruncatedDihedralSet
    f: Callable[[int, Cell], Cell]
    name: str = ""

    def __call__(self, q: int, x: Cell) -> Cell:
        return self.f(q, x)

    def violations(self, limit: int = 10, check_t: bool = True) -> list[dict]:
        """Cells where the map leaves the target or fails to commute."""
        src, tgt = self.source, self.target
        out = []
        top = min(src.max_degree, tgt.max_degree)
        for q in range(top + 1):
            for x in src.cells(q):
                fx = self.f(q, x)
                issue = None
                if not tgt.member(q, fx):
                    issue = "image outside target"
                elif q >= 1 and any(self.f(q - 1, src.face(q, i, x)) != tgt.face(q, i, fx) for i in range(q + 1)):
                    issue = "faces"
                elif q < top and any(self.f(q + 1, src.degen(q, i, x)) != tgt.degen(q, i, fx) for i in range(q + 1)):
                    issue = "degeneracies"
                elif src.w is not None and tgt.w is not None and self.f(q, src.w(q, x)) != tgt.w(q, fx):
                    issue = "involution"
                elif check_t and src.t is not None and tgt.t is not None and self.f(q, src.t(q, x)) != tgt.t(q, fx):
                    issue = "cyclic operator"
                if issue:
                    out.append({"degree": q, "cell": _plain(x), "issue": issue})
                    if len(out) >= limit:
                        return out
        return out


# -- cell enumeration -----------------------------------------------------------


def _entries(points: Iterable[Sequence[int]]) -> list[tuple[tuple[int, ...], int]]:
    return sorted(((tuple(p), sum(abs(c) for c in p)) for p in points), key=lambda e: (e[1], e[0]))


def _tuples(length: int, entries: list[tuple[tuple[int, ...], int]], budget: int) -> Iterable[tuple]:
    """All tuples of the given length drawn from ``entries`` with total norm <= budget."""
    if length == 0:
        yield ()
        return
    for v, n in entries:
        if n > budget:
            break
        for rest in _tuples(length - 1, entries, budget - n):
            yield (v,) + rest


def _compositions(m: AffineMonoid, weight: Sequence[int], parts: int, divisors: list[tuple[int, ...]]) -> Iterable[tuple]:
    if parts == 1:
        yield (tuple(weight),)
        return
    for a in divisors:
        rest = lat.sub(weight, a)
        if m.contains(rest):
            for tail in _compositions(m, rest, parts - 1, divisors):
                yield (a,) + tail


def _is_signed_permutation(mat) -> bool:
    if mat is None:
        return True
    for row in list(mat) + [list(c) for c in zip(*mat)]:
        if sorted(abs(v) for v in row)[-1:] != [1] or sum(abs(v) for v in row) != 1:
            return False
    return True


def _resolve_window(weight, window) -> WeightWindow | None:
    if isinstance(weight, WeightWindow):
        return weight
    if isinstance(window, WeightWindow):
        return window
    if weight is None and window is None:
        return None
    return WeightWindow(None if weight is None else tuple(weight), window)


def _monoid_cells(m: AffineMonoid, N: int, extra: int, win: WeightWindow | None, entry_points, accept) -> list[list]:
    """Cells of length ``q + extra`` for q = 0..N.

    ``entry_points(budget)`` lists candidate entries; ``accept(cell)``
    filters whole cells.
    """
    d = m.ambient_rank
    out = []
    if win.radius is None:
        weight = win.weight
        if not m.is_sharp:
            raise ValueError("weight pieces of a non-sharp monoid are infinite; give a window radius")
        divisors = m.divisors(weight)
        for q in range(N + 1):
            out.append([c for c in _compositions(m, weight, q + extra, divisors) if accept(c)])
        return out
    entries = _entries(entry_points(win.radius))
    for q in range(N + 1):
        cells = []
        for c in _tuples(q + extra, entries, win.radius):
            if win.weight is not None and _sum(c, d) != win.weight:
                continue
            if accept(c):
                cells.append(c)
        out.append(cells)
    return out


def _sum(cell: Sequence[Sequence[int]], d: int) -> tuple[int, ...]:
    acc = [0] * d
    for v in cell:
        for k, c in enumerate(v):
            acc[k] += c
    return tuple(acc)


# -- nerve operators ------------------------------------------------------------


def _cyclic_face(q: int, i: int, x: tuple) -> tuple:
    if i < q:
        return x[:i] + (lat.add(x[i], x[i + 1]),) + x[i + 2 :]
    return (lat.add(x[q], x[0]),) + x[1:q]


def _cyclic_degen(q: int, i: int, x: tuple) -> tuple:
    z = (0,) * len(x[0])
    return x[: i + 1] + (z,) + x[i + 1 :]


def _cyclic_t(q: int, x: tuple) -> tuple:
    return (x[-1],) + x[:-1]


def _dihedral_w(m: AffineMonoid):
    def w(q: int, x: tuple) -> tuple:
        return (m.w(x[0]),) + tuple(m.w(v) for v in reversed(x[1:]))

    return w


def dihedral_nerve(m: AffineMonoid, max_degree: int, weight=None, window: int | None = None) -> TruncatedDihedralSet:
    """Cells ``(x_0, ..., x_q)`` in M with the cyclic bar operators.

    ``d_i`` adds ``x_i`` and ``x_{i+1}`` (``d_q`` wraps ``x_q`` onto
    ``x_0``), ``s_i`` inserts a zero after ``x_i``, ``t`` rotates the last
    entry to the front and ``w(x_0, ..., x_q) = (w x_0, w x_q, ..., w x_1)``.
    """
    win = _resolve_window(weight, window)
    if win is None:
        raise ValueError("dihedral nerve needs a weight or a window")
    d = m.ambient_rank
    if win.weight is not None and len(win.weight) != d:
        raise ValueError("weight has the wrong length")

    def in_m(c):
        return all(m.contains(v) for v in c)

    def pts(r):
        return [p for p in lat.l1_ball(d, r) if m.contains(p)]

    cells = _monoid_cells(m, max_degree, 1, win, pts, in_m)

    def member(q, x):
        return (
            len(x) == q + 1
            and in_m(x)
            and (win.weight is None or _sum(x, d) == win.weight)
            and (win.radius is None or _norm(x) <= win.radius)
        )

    closed = win.radius is None or _is_signed_permutation(m.involution)
    return TruncatedDihedralSet(
        max_degree, cells, _cyclic_face, _cyclic_degen, _dihedral_w(m), _cyclic_t,
        member=member, closed=closed, name="dihedral nerve",
        meta={"monoid": m, "window": win, "kind": "dihedral"},
    )


def replete_nerve(m: AffineMonoid, max_degree: int, window: int | None = None, weight=None) -> TruncatedDihedralSet:
    """Cells ``(x_0, ..., x_q)`` in M^gp whose sum lies in M, within an l1 window."""
    if window is None and not isinstance(weight, WeightWindow):
        raise ValueError("the replete nerve is infinite in every weight; a window radius is required")
    win = _resolve_window(weight, window)
    if win.radius is None:
        raise ValueError("the replete nerve is infinite in every weight; a window radius is required")
    d = m.ambient_rank

    def accept(c):
        return m.contains(_sum(c, d))

    def pts(r):
        return [p for p in lat.l1_ball(d, r) if m.coords(p) is not None]

    cells = _monoid_cells(m, max_degree, 1, win, pts, accept)

    def member(q, x):
        return (
            len(x) == q + 1
            and all(m.coords(v) is not None for v in x)
            and accept(x)
            and (win.weight is None or _sum(x, d) == win.weight)
            and _norm(x) <= win.radius
        )

    return TruncatedDihedralSet(
        max_degree, cells, _cyclic_face, _cyclic_degen, _dihedral_w(m), _cyclic_t,
        member=member, closed=_is_signed_permutation(m.involution), name="replete nerve",
        meta={"monoid": m, "window": win, "kind": "replete"},
    )


def _bar_face(q: int, i: int, x: tuple) -> tuple:
    if i == 0:
        return x[1:]
    if i == q:
        return x[:-1]
    return x[: i - 1] + (lat.add(x[i - 1], x[i]),) + x[i + 1 :]


def _bar_degen(d: int):
    z = (0,) * d

    def degen(q: int, i: int, x: tuple) -> tuple:
        return x[:i] + (z,) + x[i:]

    return degen


def real_nerve(g: AffineMonoid, max_degree: int, window: int | None = None) -> TruncatedDihedralSet:
    """Bar construction of G^gp: cells ``(g_1, ..., g_q)``, reversal involution.

    ``w(g_1, ..., g_q) = (w g_q, ..., w g_1)``. No cyclic operator.
    """
    d = g.ambient_rank
    if window is None:
        if g.rank != 0:
            raise ValueError("the real nerve of a nonzero group needs a window radius")
        window = 0
    entries = _entries(p for p in lat.l1_ball(d, window) if g.coords(p) is not None)
    cells = [list(_tuples(q, entries, window)) for q in range(max_degree + 1)]

    def w(q, x):
        return tuple(g.w(v) for v in reversed(x))

    def member(q, x):
        return len(x) == q and all(g.coords(v) is not None for v in x) and _norm(x) <= window

    return TruncatedDihedralSet(
        max_degree, cells, _bar_face, _bar_degen(d), w, None,
        member=member, closed=_is_signed_permutation(g.involution), name="real nerve",
        meta={"monoid": g, "window": WeightWindow(None, window), "kind": "real"},
    )


def tensor_interval(m: AffineMonoid, max_degree: int, weight=None, window: int | None = None) -> TruncatedDihedralSet:
    """``M (x) Delta^1_sigma``: cells ``(x_0, ..., x_{q+1})`` indexed by the q-simplices of Delta^1.

    Entry ``k`` sits on the simplex with ``k`` ones. ``d_i`` adds entries
    ``q-i`` and ``q-i+1``; ``s_i`` inserts a zero at position ``q-i+1``;
    ``w`` reverses the tuple and applies the involution of M.
    """
    win = _resolve_window(weight, window)
    if win is None:
        raise ValueError("tensor with the interval needs a weight or a window")
    d = m.ambient_rank
    z = (0,) * d

    def face(q, i, x):
        k = q - i
        return x[:k] + (lat.add(x[k], x[k + 1]),) + x[k + 2 :]

    def degen(q, i, x):
        k = q - i + 1
        return x[:k] + (z,) + x[k:]

    def w(q, x):
        return tuple(m.w(v) for v in reversed(x))

    def in_m(c):
        return all(m.contains(v) for v in c)

    def pts(r):
        return [p for p in lat.l1_ball(d, r) if m.contains(p)]

    cells = _monoid_cells(m, max_degree, 2, win, pts, in_m)

    def member(q, x):
        return (
            len(x) == q + 2
            and in_m(x)
            and (win.weight is None or _sum(x, d) == win.weight)
            and (win.radius is None or _norm(x) <= win.radius)
        )

    closed = win.radius is None or _is_signed_permutation(m.involution)
    return TruncatedDihedralSet(
        max_degree, cells, face, degen, w, None,
        member=member, closed=closed, name="tensor interval",
        meta={"monoid": m, "window": win, "kind": "tensor"},
    )


def constant(elements: Sequence[Cell], max_degree: int, involution: Callable[[Cell], Cell] | None = None,
             name: str = "constant") -> TruncatedDihedralSet:
    """Every degree is ``elements``; all structure maps are identities."""
    elements = tuple(elements)
    inv = (lambda q, x: involution(x)) if involution is not None else (lambda q, x: x)
    return TruncatedDihedralSet(
        max_degree, [elements] * (max_degree + 1),
        lambda q, i, x: x, lambda q, i, x: x, inv, lambda q, x: x,
        name=name,
    )


def sum_map(x_set: TruncatedDihedralSet) -> SimplicialMap:
    """Total sum of the entries, into the constant set of attained sums."""
    m: AffineMonoid = x_set.meta["monoid"]
    d = m.ambient_rank
    sums = sorted({_sum(c, d) for q in range(x_set.max_degree + 1) for c in x_set.cells(q)})
    tgt = constant(sums, x_set.max_degree, m.w, name="sums")
    if x_set.meta.get("kind") == "tensor" or x_set.w_kind != REAL:
        tgt.t = None
    return SimplicialMap(x_set, tgt, lambda q, c: _sum(c, d), "sum")


# -- subdivision, fixed points, products ----------------------------------------


def segal_subdivide(x_set: TruncatedDihedralSet, max_degree: int | None = None) -> TruncatedDihedralSet:
    """Edgewise subdivision with the middle-out ordering ``[q]^op * [q]``.

    Degree ``q`` is ``X_{2q+1}``; ``d_i`` deletes the vertices ``q-i`` and
    ``q+1+i``, ``s_i`` doubles them, and the involution is ``w_{2q+1}``,
    which now commutes with faces.
    """
    top = (x_set.max_degree - 1) // 2
    if max_degree is None:
        max_degree = top
    if max_degree > top or max_degree < 0:
        raise ValueError(f"subdividing to degree {max_degree} needs the source truncated at {2 * max_degree + 1}")
    X = x_set

    def face(q, i, x):
        return X.face(2 * q, q - i, X.face(2 * q + 1, q + 1 + i, x))

    def degen(q, i, x):
        return X.degen(2 * q + 2, q - i, X.degen(2 * q + 1, q + 1 + i, x))

    w = (lambda q, x: X.w(2 * q + 1, x)) if X.w is not None else None
    member = lambda q, x: X.member(2 * q + 1, x)
    base = X.basepoint
    return TruncatedDihedralSet(
        max_degree, [X.cells(2 * q + 1) for q in range(max_degree + 1)], face, degen, w, None,
        w_kind=ACTION, member=member, closed=X.closed, basepoint=base,
        name=f"sd({X.name})", meta=dict(X.meta, subdivided=True),
    )


def fixed_points(x_set: TruncatedDihedralSet) -> TruncatedDihedralSet:
    """Degreewise cells fixed by the involution (all cells if there is none)."""
    X = x_set
    if X.w is None:
        cells = [X.cells(q) for q in range(X.max_degree + 1)]
    else:
        cells = [[c for c in X.cells(q) if X.w(q, c) == c] for q in range(X.max_degree + 1)]
    fixed = [set(c) for c in cells]
    closed = X.closed
    if closed:
        for q in range(1, X.max_degree + 1):
            if any(X.face(q, i, c) not in fixed[q - 1] for c in cells[q] for i in range(q + 1)):
                closed = False
                break

    def member(q, x):
        return X.member(q, x) and (X.w is None or X.w(q, x) == x)

    return TruncatedDihedralSet(
        X.max_degree, cells, X.face, X.degen, None, None,
        member=member, closed=closed, basepoint=X.basepoint,
        name=f"fix({X.name})", meta=dict(X.meta),
    )


def product(x_set: TruncatedDihedralSet, y_set: TruncatedDihedralSet,
            budget: int | None = None, norm: Callable[[Cell], int] | None = None) -> TruncatedDihedralSet:
    """Degreewise cartesian product with diagonal operators.

    With ``budget`` only pairs with ``norm(a) + norm(b) <= budget`` are kept
    (``norm`` defaults to the l1 norm of nerve cells).
    """
    X, Y = x_set, y_set
    if X.max_degree != Y.max_degree:
        raise ValueError("factors must share max_degree")
    if X.has_w and Y.has_w and X.w_kind != Y.w_kind:
        raise ValueError("factors have different involution kinds")
    N = X.max_degree
    if budget is None:
        cells = [[(a, b) for a in X.cells(q) for b in Y.cells(q)] for q in range(N + 1)]
    else:
        norm = norm or _norm
        cells = []
        for q in range(N + 1):
            ys = sorted(((norm(b), k, b) for k, b in enumerate(Y.cells(q))), key=lambda e: e[:2])
            layer = []
            for a in X.cells(q):
                room = budget - norm(a)
                for n, _, b in ys:
                    if n > room:
                        break
                    layer.append((a, b))
            cells.append(layer)
    w = (lambda q, c: (X.w(q, c[0]), Y.w(q, c[1]))) if X.has_w and Y.has_w else None
    t = (lambda q, c: (X.t(q, c[0]), Y.t(q, c[1]))) if X.has_t and Y.has_t else None
    base = (X.basepoint, Y.basepoint) if X.basepoint is not None and Y.basepoint is not None else None
    return TruncatedDihedralSet(
        N, cells,
        lambda q, i, c: (X.face(q, i, c[0]), Y.face(q, i, c[1])),
        lambda q, i, c: (X.degen(q, i, c[0]), Y.degen(q, i, c[1])),
        w, t, w_kind=X.w_kind if X.has_w else Y.w_kind,
        member=lambda q, c: X.member(q, c[0]) and Y.member(q, c[1])
        and (budget is None or norm(c[0]) + norm(c[1]) <= budget),
        closed=X.closed and Y.closed, basepoint=base,
        name=f"{X.name} x {Y.name}",
    )


def with_basepoint(x_set: TruncatedDihedralSet) -> TruncatedDihedralSet:
    """``X_+``: adjoin a disjoint basepoint fixed by every operator."""
    X = x_set
    B = BASEPOINT

    def lift(op):
        return lambda q, i, c: c if c == B else op(q, i, c)

    def lift1(op):
        return None if op is None else (lambda q, c: c if c == B else op(q, c))

    return TruncatedDihedralSet(
        X.max_degree, [(B,) + X.cells(q) for q in range(X.max_degree + 1)],
        lift(X.face), lift(X.degen), lift1(X.w), lift1(X.t), w_kind=X.w_kind,
        member=lambda q, c: c == B or X.member(q, c), closed=X.closed, basepoint=B,
        name=f"{X.name}+", meta=dict(X.meta),
    )


def repletion_resolution(m: AffineMonoid, max_degree: int, window: int) -> TruncatedDihedralSet:
    """Cells ``(x, g_0, ..., g_q)`` with ``x`` in M and ``g_i`` in M^gp.

    Faces delete ``g_i``, degeneracies repeat it, and the involution is
    ``(x, g_0, ..., g_q) -> (w x, w x - w g_q, ..., w x - w g_0)``. The
    involution does not preserve l1 windows, so the tables are not closed.
    """
    d = m.ambient_rank
    xs = _entries(p for p in lat.l1_ball(d, window) if m.contains(p))
    gs = _entries(p for p in lat.l1_ball(d, window) if m.coords(p) is not None)
    cells = []
    for q in range(max_degree + 1):
        layer = []
        for x, n in xs:
            for g in _tuples(q + 1, gs, window - n):
                layer.append((x,) + g)
        cells.append(layer)

    def face(q, i, c):
        return c[: i + 1] + c[i + 2 :]

    def degen(q, i, c):
        return c[: i + 2] + c[i + 1 :]

    def w(q, c):
        wx = m.w(c[0])
        return (wx,) + tuple(lat.sub(wx, m.w(g)) for g in reversed(c[1:]))

    def member(q, c):
        return len(c) == q + 2 and m.contains(c[0]) and all(m.coords(g) is not None for g in c[1:])

    return TruncatedDihedralSet(
        max_degree, cells, face, degen, w, None, member=member, closed=False,
        name="repletion resolution", meta={"monoid": m, "window": WeightWindow(None, window), "kind": "resolution"},
    )


# -- small models ----------------------------------------------------------------


def point(max_degree: int) -> TruncatedDihedralSet:
    x = ("pt",)
    return TruncatedDihedralSet(
        max_degree, [(x,)] * (max_degree + 1),
        lambda q, i, c: c, lambda q, i, c: c, lambda q, c: c, lambda q, c: c, name="point",
    )


def empty(max_degree: int) -> TruncatedDihedralSet:
    return TruncatedDihedralSet(
        max_degree, [()] * (max_degree + 1),
        lambda q, i, c: c, lambda q, i, c: c, lambda q, c: c, None, name="empty",
    )


_EDGES = {"E1": ("A", "B"), "E2": ("B", "A")}


def two_gon(max_degree: int) -> TruncatedDihedralSet:
    """The circle with two vertices A, B and edges E1: A->B, E2: B->A.

    The reflection fixes both vertices and exchanges the edges, reversing
    orientation. Cells are ``("A",)``, ``("B",)`` and ``(edge, k)`` where
    the first ``k`` of the ``q+1`` vertices sit at the edge's source.
    """

    def face(q, i, c):
        if len(c) == 1:
            return c
        e, k = c
        src, dst = _EDGES[e]
        if i < k:
            k -= 1
            return (e, k) if k >= 1 else (dst,)
        return (e, k) if k <= q - 1 else (src,)

    def degen(q, i, c):
        if len(c) == 1:
            return c
        e, k = c
        return (e, k + 1) if i < k else (e, k)

    def w(q, c):
        if len(c) == 1:
            return c
        e, k = c
        return ("E2" if e == "E1" else "E1", q + 1 - k)

    cells = [[("A",), ("B",)] + [(e, k) for e in ("E1", "E2") for k in range(1, q + 1)] for q in range(max_degree + 1)]
    return TruncatedDihedralSet(max_degree, cells, face, degen, w, None, name="two-gon")


def _delta1_cells(q: int) -> list[tuple[int, ...]]:
    return [tuple([0] * (q + 1 - k) + [1] * k) for k in range(q + 2)]


def _delete(x: tuple, i: int) -> tuple:
    return x[:i] + x[i + 1 :]


def _double(x: tuple, i: int) -> tuple:
    return x[: i + 1] + x[i:]


def delta1_sigma(max_degree: int) -> TruncatedDihedralSet:
    """Delta^1 with the reflection ``a_0 ... a_q -> (1 - a_q) ... (1 - a_0)``."""
    return TruncatedDihedralSet(
        max_degree, [_delta1_cells(q) for q in range(max_degree + 1)],
        lambda q, i, x: _delete(x, i), lambda q, i, x: _double(x, i),
        lambda q, x: tuple(1 - a for a in reversed(x)), None, name="Delta1_sigma",
    )


def glued_intervals(max_degree: int) -> TruncatedDihedralSet:
    """Two copies of Delta^1 glued at the vertex 1; the action swaps copies.

    Cells are ``(copy, a)`` with ``copy`` in ``{"L", "R"}``; the constant
    sequence of ones is shared and labelled ``("glue", a)``.
    """

    def norm(copy, a):
        return ("glue", a) if all(a) else (copy, a)

    cells = []
    for q in range(max_degree + 1):
        layer = [norm(c, a) for c in ("L", "R") for a in _delta1_cells(q)]
        cells.append(list(dict.fromkeys(layer)))

    def swap(c):
        return {"L": "R", "R": "L", "glue": "glue"}[c]

    return TruncatedDihedralSet(
        max_degree, cells,
        lambda q, i, x: norm(x[0], _delete(x[1], i)),
        lambda q, i, x: norm(x[0], _double(x[1], i)),
        lambda q, x: (swap(x[0]), x[1]), None, w_kind=ACTION, name="Delta1 v_1 Delta1",
    )


def union(*pieces: TruncatedDihedralSet) -> TruncatedDihedralSet:
    """Disjoint union of pieces built by the same construction.

    Used to pair a weight piece with its mirror image when the involution
    moves the weight; the operator formulas of the first piece are used.
    """
    if not pieces:
        raise ValueError("union of nothing")
    first = pieces[0]
    N = first.max_degree
    if any(p.max_degree != N for p in pieces):
        raise ValueError("pieces must share max_degree")
    cells = [list(dict.fromkeys(c for p in pieces for c in p.cells(q))) for q in range(N + 1)]
    return TruncatedDihedralSet(
        N, cells, first.face, first.degen, first.w, first.t, w_kind=first.w_kind,
        member=lambda q, x: any(p.member(q, x) for p in pieces),
        closed=all(p.closed for p in pieces), basepoint=first.basepoint,
        name=first.name, meta=dict(first.meta),
    )


def weight_orbit(m: AffineMonoid, weight: Sequence[int]) -> list[tuple[int, ...]]:
    """``[weight]`` or ``[weight, w(weight)]`` when the involution moves it."""
    weight = tuple(weight)
    other = tuple(m.w(weight))
    return [weight] if other == weight else [weight, other]


def restrict(x_set: TruncatedDihedralSet, keep: Callable[[int, Cell], bool], name: str | None = None) -> TruncatedDihedralSet:
    """Sub-table of cells satisfying ``keep``; membership tightens accordingly."""
    X = x_set
    return TruncatedDihedralSet(
        X.max_degree, [[c for c in X.cells(q) if keep(q, c)] for q in range(X.max_degree + 1)],
        X.face, X.degen, X.w, X.t, w_kind=X.w_kind,
        member=lambda q, c: keep(q, c) and X.member(q, c),
        closed=X.closed, basepoint=X.basepoint, name=name or X.name, meta=dict(X.meta),
    )


def with_cyclic(x_set: TruncatedDihedralSet, t: Callable[[int, Cell], Cell] | None) -> TruncatedDihedralSet:
    """Same set with the cyclic operator replaced (``None`` forgets it)."""
    X = x_set
    return TruncatedDihedralSet(
        X.max_degree, [X.cells(q) for q in range(X.max_degree + 1)], X.face, X.degen, X.w, t,
        w_kind=X.w_kind, member=X.member, closed=X.closed, basepoint=X.basepoint,
        name=X.name, meta=dict(X.meta),
    )


def without_involution(x_set: TruncatedDihedralSet) -> TruncatedDihedralSet:
    X = x_set
    return TruncatedDihedralSet(
        X.max_degree, [X.cells(q) for q in range(X.max_degree + 1)], X.face, X.degen, None, X.t,
        member=X.member, closed=X.closed, basepoint=X.basepoint, name=X.name, meta=dict(X.meta),
    )
