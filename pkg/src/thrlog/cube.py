"""Cubes of pointed simplicial objects and chain complexes.

A cube over an index tuple ``I`` assigns an object to every subset and a map
to every edge ``J -> J + {i}``. Total cofibers are computed as total
complexes: vertex ``J`` sits shifted up by ``|I| - |J|``, with differential
``(-1)^{|I|-|J|} d`` on each vertex plus ``(-1)^{#{j not in J : j < i}} f``
along each edge. The total fiber is the same complex shifted down by
``|I|``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import simplicial as S
from .homology import ChainComplex, ChainMap, HomologyTable, induced_chain_map, normalized_chains
from .report import FAIL, PASS, CheckReport
from .simplicial import BASEPOINT, SimplicialMap, TruncatedDihedralSet


def subsets(indices: Sequence) -> list[frozenset]:
    return [frozenset(c) for k in range(len(indices) + 1) for c in itertools.combinations(indices, k)]


@dataclass
class Cube:
    """``vertices[J]`` for every subset ``J``; ``edges[(J, i)]`` maps ``J`` to ``J + {i}``."""

    indices: tuple
    vertices: dict
    edges: dict
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for J in subsets(self.indices):
            if J not in self.vertices:
                raise ValueError(f"missing vertex {sorted(J)}")
            for i in self.indices:
                if i not in J and (J, i) not in self.edges:
                    raise ValueError(f"missing edge {sorted(J)} + {i}")

    @property
    def size(self) -> int:
        return len(self.indices)

    def squares(self):
        for J in subsets(self.indices):
            free = [i for i in self.indices if i not in J]
            for a, b in itertools.combinations(free, 2):
                yield J, a, b

    def functoriality_violations(self, limit: int = 5) -> list[dict]:
        """Squares whose two composites differ, cell by cell or column by column."""
        out = []
        for J, a, b in self.squares():
            fa, fb = self.edges[(J, a)], self.edges[(J, b)]
            ga, gb = self.edges[(J | {a}, b)], self.edges[(J | {b}, a)]
            src = self.vertices[J]
            if isinstance(src, ChainComplex):
                for q in range(src.base, src.top + 1):
                    if _compose(ga.component(q), fa.component(q)) != _compose(gb.component(q), fb.component(q)):
                        out.append({"square": [sorted(J), a, b], "degree": q})
                        break
            else:
                for q in range(src.max_degree + 1):
                    bad = next((c for c in src.cells(q) if ga(q, fa(q, c)) != gb(q, fb(q, c))), None)
                    if bad is not None:
                        out.append({"square": [sorted(J), a, b], "degree": q, "cell": S._plain(bad)})
                        break
            if len(out) >= limit:
                break
        return out

    def map_chains(self, pointed: bool = True, top: int | None = None, fixed: bool = False) -> "Cube":
        """Apply normalized chains (optionally of ``(sd X)^{Z/2}``) vertexwise."""
        objs, maps = {}, {}
        if fixed:
            depth = min(X.max_degree for X in self.vertices.values())
            half = (depth - 1) // 2 if top is None else top
            sets = {J: S.fixed_points(S.segal_subdivide(X, half)) for J, X in self.vertices.items()}
            edge = {k: SimplicialMap(sets[k[0]], sets[k[0] | {k[1]}], _odd(f)) for k, f in self.edges.items()}
        else:
            sets = dict(self.vertices)
            edge = dict(self.edges)
        for J, X in sets.items():
            objs[J] = normalized_chains(X, pointed, top)
        for (J, i), f in edge.items():
            maps[(J, i)] = induced_chain_map(f, objs[J], objs[J | {i}])
        return Cube(self.indices, objs, maps, dict(self.meta, chains="fixed" if fixed else "underlying"))


def _odd(f):
    return lambda q, c: f(2 * q + 1, c)


def _compose(g: list, f: list) -> list:
    out = []
    for col in f:
        acc: dict = {}
        for i, c in col.items():
            for k, v in g[i].items():
                acc[k] = acc.get(k, 0) + c * v
        out.append({k: v for k, v in acc.items() if v})
    return out


def total_cofiber(cube: Cube) -> ChainComplex:
    """Total complex of a cube of chain complexes, terminal vertex unshifted.

    Valid through the smallest vertex truncation, so homology is certified
    below ``min(top)``.
    """
    n = cube.size
    verts = subsets(cube.indices)
    for J in verts:
        if not isinstance(cube.vertices[J], ChainComplex):
            raise TypeError("total_cofiber needs a cube of chain complexes")
    order = {i: k for k, i in enumerate(cube.indices)}
    c = {J: n - len(J) for J in verts}
    base = min(cube.vertices[J].base for J in verts)
    top = min(cube.vertices[J].top for J in verts)
    layout: dict[int, dict] = {}
    dims = []
    for k in range(base, top + 1):
        off, pos = 0, {}
        for J in verts:
            pos[J] = off
            off += cube.vertices[J].dim(k - c[J])
        layout[k] = pos
        dims.append(off)
    d = {}
    for k in range(base + 1, top + 1):
        cols = []
        for J in verts:
            C = cube.vertices[J]
            q = k - c[J]
            sign = -1 if c[J] % 2 else 1
            inner = C.boundary(q) if q > C.base else [{} for _ in range(C.dim(q))]
            edges = []
            for i in cube.indices:
                if i in J:
                    continue
                eps = -1 if sum(1 for j in cube.indices if j not in J and order[j] < order[i]) % 2 else 1
                edges.append((J | {i}, eps, cube.edges[(J, i)].component(q)))
            for j in range(C.dim(q)):
                col = {layout[k - 1][J] + r: sign * v for r, v in inner[j].items()}
                for K, eps, comp in edges:
                    for r, v in comp[j].items():
                        key = layout[k - 1][K] + r
                        col[key] = col.get(key, 0) + eps * v
                cols.append({r: v for r, v in col.items() if v})
        d[k] = cols
    out = ChainComplex(base, dims, d)
    bad = out.check_d2()
    if bad:
        raise AssertionError(f"total complex fails d^2 = 0 at {bad[0]}")
    return out


def total_fiber(cube: Cube) -> ChainComplex:
    """Total complex with the initial vertex unshifted."""
    return total_cofiber(cube).shift(-cube.size)


# -- the Phi cube ----------------------------------------------------------------


def in_p(j: int, x: Sequence[int]) -> bool:
    """``x`` in ``P_0 = {sum <= 0}`` or ``P_j = {x_j >= 0}``."""
    return sum(x) <= 0 if j == 0 else x[j - 1] >= 0


@dataclass(frozen=True)
class PhiCell:
    """Cell ``Phi(I; x)``: empty, or a product of circles and points."""

    subset: frozenset
    x: tuple
    n: int

    @property
    def nonempty(self) -> bool:
        return all(in_p(j, self.x) for j in range(self.n + 1) if j not in self.subset)

    @property
    def factors(self) -> tuple[str, ...]:
        return tuple("point" if (self.x[i - 1] == 0 and i in self.subset) else "circle" for i in range(1, self.n + 1))

    def to_dict(self) -> dict:
        return {"subset": sorted(self.subset), "x": list(self.x), "nonempty": self.nonempty, "factors": list(self.factors)}


def _factor_product(factors: Sequence[TruncatedDihedralSet], N: int) -> TruncatedDihedralSet:
    cells = [list(itertools.product(*(f.cells(q) for f in factors))) for q in range(N + 1)]
    return TruncatedDihedralSet(
        N, cells,
        lambda q, i, c: tuple(f.face(q, i, a) for f, a in zip(factors, c)),
        lambda q, i, c: tuple(f.degen(q, i, a) for f, a in zip(factors, c)),
        lambda q, c: tuple(f.w(q, a) for f, a in zip(factors, c)), None,
        name=" x ".join(f.name for f in factors) or "point",
    )


def _phi_vertex(cell: PhiCell, N: int) -> TruncatedDihedralSet:
    if not cell.nonempty:
        return S.with_basepoint(S.empty(N))
    models = {"point": S.point(N), "circle": S.two_gon(N)}
    return S.with_basepoint(_factor_product([models[f] for f in cell.factors], N))


def _phi_edge(src: PhiCell, dst: PhiCell, collapse: bool):
    if collapse or not src.nonempty:
        return lambda q, c: BASEPOINT
    kinds = list(zip(src.factors, dst.factors))

    def f(q, c):
        if c == BASEPOINT:
            return c
        return tuple(("pt",) if b == "point" else a for (_, b), a in zip(kinds, c))

    return f


def build_phi_cube(n: int, x: Sequence[int], max_degree: int, negative_control: bool = False) -> Cube:
    """Cube ``I -> Phi(I; x)_+`` over ``{0, ..., n}``; with ``negative_control`` the 0-direction maps collapse."""
    if n not in (1, 2):
        raise ValueError("the Phi cube is built for n = 1 or 2")
    x = tuple(int(v) for v in x)
    if len(x) != n:
        raise ValueError(f"x must have {n} coordinates")
    indices = tuple(range(n + 1))
    cells = {J: PhiCell(J, x, n) for J in subsets(indices)}
    vertices = {J: _phi_vertex(c, max_degree) for J, c in cells.items()}
    edges = {}
    for J in cells:
        for i in indices:
            if i not in J:
                K = J | {i}
                f = _phi_edge(cells[J], cells[K], negative_control and i == 0)
                edges[(J, i)] = SimplicialMap(vertices[J], vertices[K], f, f"{sorted(J)}+{i}")
    return Cube(indices, vertices, edges, {"x": list(x), "n": n, "negative_control": negative_control,
                                            "cells": {",".join(map(str, sorted(J))): c.to_dict() for J, c in cells.items()}})


def phi_weight_report(n: int, x: Sequence[int], degree: int, negative_control: bool = False) -> dict:
    """Homology of the total cofibers of one Phi cube, underlying and fixed."""
    cube = build_phi_cube(n, x, 2 * degree + 3, negative_control)
    bad = cube.functoriality_violations(1)
    if bad:
        return {"x": list(x), "status": FAIL, "issue": {"not functorial": bad[0]}}
    out: dict[str, Any] = {"x": list(x)}
    ok = True
    for part, fixed in (("underlying", False), ("fixed", True)):
        chains = cube.map_chains(pointed=True, top=degree + 1, fixed=fixed)
        table = total_cofiber(chains).table(degree)
        out[part] = table.to_dict()
        if not table.is_zero():
            ok = False
            q = next(q for q, g in zip(table.degrees, table.groups) if g != (0, ()))
            out.setdefault("first_nonzero", {"part": part, "degree": q, "group": HomologyTable.group_str(*table[q])})
    out["status"] = PASS if ok else FAIL
    return out


def pn_invariance_check(n: int, window: int, degree: int, negative_control: bool = False,
                        points: Sequence[Sequence[int]] | None = None, threads: int = 1) -> CheckReport:
    """Every Phi cube with ``|x_i| <= window`` has acyclic total cofibers through ``degree``."""
    if points is None:
        points = list(itertools.product(range(-window, window + 1), repeat=n))
    points = [tuple(p) for p in points]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(lambda p: phi_weight_report(n, p, degree, negative_control), points))
    else:
        rows = [phi_weight_report(n, p, degree, negative_control) for p in points]
    name = f"mot.1-n{n}" + ("-control" if negative_control else "")
    details = {"n": n, "window": window, "degree": degree, "weights": rows,
               "method": "total complex of pointed normalized chains"}
    failed = [r for r in rows if r["status"] != PASS]
    if failed:
        return CheckReport(name, FAIL, {"x": failed[0]["x"], **({"first_nonzero": failed[0]["first_nonzero"]}
                                                                if "first_nonzero" in failed[0] else failed[0].get("issue", {}))}, details)
    return CheckReport(name, PASS, None, details)


# -- small cubes for tests and examples ---------------------------------------------------


def chain_cube_1(source: ChainComplex, target: ChainComplex, f: ChainMap) -> Cube:
    """The 1-cube ``source -> target``."""
    e, one = frozenset(), frozenset({0})
    return Cube((0,), {e: source, one: target}, {(e, 0): f})


def identity_map(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, {q: [{j: 1} for j in range(C.dim(q))] for q in range(C.base, C.top + 1)})


def zero_complex_like(C: ChainComplex) -> ChainComplex:
    return ChainComplex(C.base, [0] * len(C.dims), {})


def zero_map(C: ChainComplex, D: ChainComplex) -> ChainMap:
    return ChainMap(C, D, {q: [{} for _ in range(C.dim(q))] for q in range(C.base, C.top + 1)})
