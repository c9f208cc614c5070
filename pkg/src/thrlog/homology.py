"""Integer chain complexes and their homology.

Boundary maps are stored sparsely, column by column: ``d[q][j]`` is a dict
``{i: coeff}`` giving the boundary of the ``j``-th basis element of degree
``q`` in the basis of degree ``q - 1``. Invariant factors come from unit-pivot
elimination followed by a dense Smith form of whatever is left, so the
large, mostly +-1 matrices of simplicial chains stay cheap.

A complex built from a set truncated at degree ``top`` only certifies
homology strictly below ``top``; asking for more raises ``ValueError``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .report import FAIL, PASS, CheckReport
from .simplicial import SimplicialMap, TruncatedDihedralSet, fixed_points, segal_subdivide
from .snf import invariant_factors

Sparse = list  # list[dict[int, int]], one dict per source basis element


def sparse_invariant_factors(columns: Sequence[dict], nrows: int | None = None) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix."""
    rows = [dict(c) for c in columns if c]
    where: dict[int, set[int]] = {}
    for r, row in enumerate(rows):
        for k in row:
            where.setdefault(k, set()).add(r)
    alive = set(range(len(rows)))
    units = 0
    progress = True
    while progress:
        progress = False
        for r in sorted(alive, key=lambda r: len(rows[r])):
            if r not in alive:
                continue
            row = rows[r]
            cands = [k for k, v in row.items() if v in (1, -1)]
            if not cands:
                continue
            k = min(cands, key=lambda k: len(where[k]))
            piv = row[k]
            for r2 in list(where[k]):
                if r2 == r:
                    continue
                row2 = rows[r2]
                f = row2[k] * piv
                for kk, v in row.items():
                    nv = row2.get(kk, 0) - f * v
                    if nv:
                        if kk not in row2:
                            where[kk].add(r2)
                        row2[kk] = nv
                    elif kk in row2:
                        del row2[kk]
                        where[kk].discard(r2)
                if not row2:
                    alive.discard(r2)
            for kk in row:
                where[kk].discard(r)
            alive.discard(r)
            units += 1
            progress = True
    left = [rows[r] for r in sorted(alive) if rows[r]]
    if not left:
        return [1] * units
    keys = sorted({k for row in left for k in row})
    pos = {k: i for i, k in enumerate(keys)}
    dense = [[0] * len(keys) for _ in left]
    for i, row in enumerate(left):
        for k, v in row.items():
            dense[i][pos[k]] = v
    return [1] * units + invariant_factors(dense)


@dataclass(frozen=True)
class HomologyTable:
    """Betti number and torsion coefficients per degree, starting at ``base``."""

    base: int
    groups: tuple[tuple[int, tuple[int, ...]], ...]

    def __getitem__(self, q: int) -> tuple[int, tuple[int, ...]]:
        return self.groups[q - self.base]

    @property
    def degrees(self) -> range:
        return range(self.base, self.base + len(self.groups))

    def betti(self) -> list[int]:
        return [b for b, _ in self.groups]

    def is_zero(self) -> bool:
        return all(b == 0 and not t for b, t in self.groups)

    def to_dict(self) -> dict:
        return {str(q): {"betti": b, "torsion": list(t)} for q, (b, t) in zip(self.degrees, self.groups)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{'q':>3}  {'rank':>4}  torsion"]
        for q, (b, t) in zip(self.degrees, self.groups):
            tor = " ".join(f"Z/{c}" for c in t) or "-"
            lines.append(f"{q:>3}  {b:>4}  {tor}")
        return "\n".join(lines)

    @staticmethod
    def group_str(b: int, t: Sequence[int]) -> str:
        parts = ([f"Z^{b}" if b > 1 else "Z"] if b else []) + [f"Z/{c}" for c in t]
        return " + ".join(parts) or "0"


@dataclass
class ChainComplex:
    """Free chain complex in degrees ``base..top`` with sparse boundaries.

    ``dims[k]`` is the rank in degree ``base + k``; ``d[q]`` maps degree
    ``q`` to ``q - 1`` and is present for ``base < q <= top``.
    """

    base: int
    dims: list[int]
    d: dict[int, Sparse]
    labels: dict[int, list] = field(default_factory=dict, repr=False)

    @property
    def top(self) -> int:
        return self.base + len(self.dims) - 1

    def dim(self, q: int) -> int:
        k = q - self.base
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def boundary(self, q: int) -> Sparse:
        return self.d.get(q) or [{} for _ in range(self.dim(q))]

    def check_d2(self) -> list[tuple[int, int]]:
        """``(q, j)`` for basis elements with ``d d e_j != 0``."""
        bad = []
        for q in range(self.base + 2, self.top + 1):
            outer, inner = self.boundary(q - 1), self.boundary(q)
            for j, col in enumerate(inner):
                acc: dict[int, int] = {}
                for i, c in col.items():
                    for k, v in outer[i].items():
                        acc[k] = acc.get(k, 0) + c * v
                if any(acc.values()):
                    bad.append((q, j))
        return bad

    def _factors(self, q: int) -> list[int]:
        cache = self.__dict__.setdefault("_factor_cache", {})
        if q not in cache:
            cache[q] = sparse_invariant_factors(self.boundary(q)) if self.base < q <= self.top else []
        return cache[q]

    def homology(self, q: int) -> tuple[int, tuple[int, ...]]:
        """``(betti, torsion)`` of ``H_q``; needs chains through ``q + 1``."""
        if q >= self.top:
            raise ValueError(f"H_{q} is not certified by chains truncated at degree {self.top}")
        if q < self.base:
            return 0, ()
        out_rank = len(self._factors(q))
        into = self._factors(q + 1)
        betti = self.dim(q) - out_rank - len(into)
        return betti, tuple(c for c in into if c > 1)

    def table(self, top: int | None = None) -> HomologyTable:
        """Homology in degrees ``base..top`` (default: every certified degree)."""
        top = self.top - 1 if top is None else top
        return HomologyTable(self.base, tuple(self.homology(q) for q in range(self.base, top + 1)))

    def shift(self, k: int) -> "ChainComplex":
        """Same complex with every degree raised by ``k``."""
        return ChainComplex(self.base + k, list(self.dims), {q + k: v for q, v in self.d.items()},
                            {q + k: v for q, v in self.labels.items()})

    def truncate(self, top: int) -> "ChainComplex":
        keep = max(0, top - self.base + 1)
        return ChainComplex(self.base, self.dims[:keep], {q: v for q, v in self.d.items() if q <= top},
                            {q: v for q, v in self.labels.items() if q <= top})


def direct_sum(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    base = min(a.base, b.base)
    top = min(a.top, b.top)
    dims, d = [], {}
    for q in range(base, top + 1):
        na = a.dim(q)
        dims.append(na + b.dim(q))
        if q > base:
            ma = a.dim(q - 1)
            d[q] = list(a.boundary(q)) + [{i + ma: v for i, v in col.items()} for col in b.boundary(q)]
    return ChainComplex(base, dims, d)


# -- chains of simplicial sets ----------------------------------------------------


def _basis(X: TruncatedDihedralSet, q: int, pointed: bool) -> list:
    base = X.basepoint if pointed else None
    return [c for c in X.cells(q) if c != base and not X.is_degenerate(q, c)]


def normalized_chains(X: TruncatedDihedralSet, pointed: bool = False, top: int | None = None) -> ChainComplex:
    """Chains on nondegenerate cells; with ``pointed`` the basepoint is killed."""
    if pointed and X.basepoint is None:
        raise ValueError(f"{X.name} has no basepoint")
    top = X.max_degree if top is None else min(top, X.max_degree)
    bases = [_basis(X, q, pointed) for q in range(top + 1)]
    index = [{c: i for i, c in enumerate(b)} for b in bases]
    d = {}
    for q in range(1, top + 1):
        cols = []
        for c in bases[q]:
            col: dict[int, int] = {}
            for i in range(q + 1):
                k = index[q - 1].get(X.face(q, i, c))
                if k is not None:
                    v = col.get(k, 0) + (-1 if i % 2 else 1)
                    if v:
                        col[k] = v
                    else:
                        del col[k]
            cols.append(col)
        d[q] = cols
    return ChainComplex(0, [len(b) for b in bases], d, {q: b for q, b in enumerate(bases)})


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    f: dict[int, Sparse]

    def component(self, q: int) -> Sparse:
        return self.f.get(q) or [{} for _ in range(self.source.dim(q))]

    def violations(self) -> list[tuple[int, int]]:
        """Basis elements where ``f d != d f``."""
        bad = []
        lo = max(self.source.base, self.target.base) + 1
        hi = min(self.source.top, self.target.top)
        for q in range(lo, hi + 1):
            fq, fq1 = self.component(q), self.component(q - 1)
            dt, ds = self.target.boundary(q), self.source.boundary(q)
            for j in range(self.source.dim(q)):
                acc: dict[int, int] = {}
                for i, c in fq[j].items():
                    for k, v in dt[i].items():
                        acc[k] = acc.get(k, 0) + c * v
                for i, c in ds[j].items():
                    for k, v in fq1[i].items():
                        acc[k] = acc.get(k, 0) - c * v
                if any(acc.values()):
                    bad.append((q, j))
        return bad


def induced_chain_map(f: SimplicialMap, src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    """Chain map of ``f`` between complexes built by :func:`normalized_chains`."""
    comps = {}
    for q in range(min(src.top, tgt.top) + 1):
        idx = {c: i for i, c in enumerate(tgt.labels[q])}
        cols = []
        for c in src.labels[q]:
            k = idx.get(f(q, c))
            cols.append({k: 1} if k is not None else {})
        comps[q] = cols
    return ChainMap(src, tgt, comps)


def mapping_cone(m: ChainMap) -> ChainComplex:
    """``Cone_q = C_{q-1} + D_q`` with ``d(c, e) = (-dc, f c + d e)``."""
    C, D = m.source, m.target
    base = min(C.base + 1, D.base)
    top = min(C.top + 1, D.top)
    dims, d = [], {}
    for q in range(base, top + 1):
        dims.append(C.dim(q - 1) + D.dim(q))
        if q == base:
            continue
        shift = C.dim(q - 2)
        cols = []
        dc = C.boundary(q - 1) if q - 1 > C.base else [{} for _ in range(C.dim(q - 1))]
        fc = m.component(q - 1)
        for j in range(C.dim(q - 1)):
            col = {i: -v for i, v in dc[j].items()}
            for i, v in fc[j].items():
                col[shift + i] = col.get(shift + i, 0) + v
            cols.append({k: v for k, v in col.items() if v})
        for col in D.boundary(q):
            cols.append({shift + i: v for i, v in col.items()})
        d[q] = cols
    return ChainComplex(base, dims, d)


def homology_iso_through(m: ChainMap, top: int) -> int | None:
    """First degree ``<= top`` where ``m`` fails to induce an isomorphism.

    Uses the cone: ``H_q(Cone) = 0`` for ``q <= top`` gives isomorphisms
    below ``top`` and a surjection in degree ``top``; a surjection between
    isomorphic finitely generated abelian groups is an isomorphism, so
    comparing the two degree-``top`` groups finishes the job.
    """
    cone = mapping_cone(m)
    for q in range(top + 1):
        if cone.homology(q) != (0, ()):
            return q
    if m.source.homology(top) != m.target.homology(top):
        return top
    return None


# -- the Z/2 certificate ---------------------------------------------------------


def _fixed_sd_map(f: SimplicialMap, N: int) -> SimplicialMap:
    src = fixed_points(segal_subdivide(f.source, N))
    tgt = fixed_points(segal_subdivide(f.target, N))
    return SimplicialMap(src, tgt, lambda q, c: f(2 * q + 1, c), f"fix sd {f.name}")


def z2_equivalence_certificate(f: SimplicialMap, N: int, pointed: bool = False) -> CheckReport:
    """Homology isomorphisms through degree ``N`` underlying and on ``(sd X)^Z/2``.

    Genuine Z/2-weak equivalences pass; passing is evidence, not proof, of
    the converse. Needs both sides truncated at ``2N + 3``.
    """
    need = 2 * N + 3
    depth = min(f.source.max_degree, f.target.max_degree)
    if depth < need:
        raise ValueError(f"certificate through degree {N} needs truncation depth {need}, got {depth}")
    details = {"degree": N, "note": "homology isomorphisms underlying and on fixed points of the subdivision"}
    for label, g in (("underlying", f), ("fixed points", _fixed_sd_map(f, N + 1))):
        bad = g.violations(limit=1, check_t=False)
        if bad:
            return CheckReport("z2-equivalence", FAIL, {"part": label, "not simplicial": bad[0]}, details)
        cs = normalized_chains(g.source, pointed, N + 1)
        ct = normalized_chains(g.target, pointed, N + 1)
        q = homology_iso_through(induced_chain_map(g, cs, ct), N)
        if q is not None:
            return CheckReport(
                "z2-equivalence", FAIL,
                {"part": label, "degree": q,
                 "source": HomologyTable.group_str(*cs.homology(q)),
                 "target": HomologyTable.group_str(*ct.homology(q))},
                details,
            )
    return CheckReport("z2-equivalence", PASS, None, details)
