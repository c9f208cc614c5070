"""Finitely generated commutative monoids with involution inside Z^d.

A monoid is stored as a list of generators in an ambient lattice Z^d,
optionally with an integer matrix of order two acting on Z^d. Integrality
is automatic in this representation. Membership is decided exactly: the
generators are split into units and non-units via the facets of the cone
they span, a grading that vanishes on units and is positive on non-units
bounds the coefficients, and the unit part is settled by a lattice
membership test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from . import lattice as lat
from .cones import cone_lattice_generators, facet_normals, parallelepiped_points
from .lattice import Matrix, Vector
from .snf import smith_normal_form

DEFAULT_RANK_CAP = 4


class DimensionCapError(ValueError):
    """Raised when an exponential routine is asked to run above its rank cap."""


class TorsionError(ValueError):
    """Raised when a quotient lattice would carry torsion."""


def _as_matrix(m) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in m)


@dataclass(frozen=True)
class AffineMonoid:
    ambient_rank: int
    generators: tuple[Vector, ...] = ()
    involution: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        d = self.ambient_rank
        if d < 0:
            raise ValueError("ambient rank must be non-negative")
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if len(g) != d:
                raise ValueError(f"generator {g} does not have length {d}")
        object.__setattr__(self, "generators", gens)
        if self.involution is not None:
            w = _as_matrix(self.involution)
            if len(w) != d or any(len(row) != d for row in w):
                raise ValueError("involution must be a d x d matrix")
            if lat.matmul(w, w) != lat.identity(d):
                raise ValueError("involution does not square to the identity")
            object.__setattr__(self, "involution", w)
            for g in gens:
                if not self.contains(self.w(g)):
                    raise ValueError(f"involution sends generator {g} outside the monoid")

    # -- basic structure ------------------------------------------------

    def w(self, x: Sequence[int]) -> Vector:
        """Apply the involution (identity when absent)."""
        if self.involution is None:
            return tuple(x)
        return lat.apply(self.involution, x)

    @property
    def involution_matrix(self) -> Matrix:
        return [list(r) for r in self.involution] if self.involution is not None else lat.identity(self.ambient_rank)

    @cached_property
    def gp_basis(self) -> Matrix:
        """HNF basis of the group completion inside Z^d."""
        return lat.lattice_basis(self.generators, self.ambient_rank)

    @property
    def rank(self) -> int:
        return len(self.gp_basis)

    def coords(self, x: Sequence[int]) -> Vector | None:
        """Coordinates of ``x`` in ``gp_basis``, or None if ``x`` is not in M^gp."""
        return lat.solve_in_lattice(self.gp_basis, x)

    def from_coords(self, c: Sequence[int]) -> Vector:
        d = self.ambient_rank
        return tuple(sum(ci * row[j] for ci, row in zip(c, self.gp_basis)) for j in range(d))

    @cached_property
    def _gen_coords(self) -> list[Vector]:
        return [self.coords(g) for g in self.generators if any(g)]

    @cached_property
    def facets(self) -> list[Vector]:
        """Inner facet normals of cone(M), in gp-basis coordinates."""
        return facet_normals(self._gen_coords, self.rank)

    def _is_unit_coords(self, c: Sequence[int]) -> bool:
        return all(sum(a * b for a, b in zip(n, c)) == 0 for n in self.facets)

    @cached_property
    def unit_generators(self) -> tuple[Vector, ...]:
        # g is a unit iff it lies on every facet; such g generate M^* as a group
        return tuple(g for g, c in zip(self._nonzero, self._gen_coords) if self._is_unit_coords(c))

    @cached_property
    def nonunit_generators(self) -> tuple[Vector, ...]:
        return tuple(g for g, c in zip(self._nonzero, self._gen_coords) if not self._is_unit_coords(c))

    @cached_property
    def _nonzero(self) -> tuple[Vector, ...]:
        return tuple(g for g in self.generators if any(g))

    @cached_property
    def unit_basis(self) -> Matrix:
        return lat.lattice_basis(self.unit_generators, self.ambient_rank)

    @property
    def is_sharp(self) -> bool:
        return not self.unit_generators

    @property
    def is_group(self) -> bool:
        return not self.nonunit_generators

    @cached_property
    def _grading_coords(self) -> Vector:
        r = self.rank
        return tuple(sum(n[i] for n in self.facets) for i in range(r))

    def grading(self, x: Sequence[int]) -> int | None:
        """A linear form, zero on units and >= 1 on non-unit generators."""
        c = self.coords(x)
        if c is None:
            return None
        return sum(a * b for a, b in zip(self._grading_coords, c))

    # -- membership -----------------------------------------------------

    def contains(self, x: Sequence[int]) -> bool:
        x = tuple(int(v) for v in x)
        if len(x) != self.ambient_rank:
            raise ValueError(f"vector {x} does not have length {self.ambient_rank}")
        cache = self.__dict__.setdefault("_member_cache", {})
        hit = cache.get(x)
        if hit is None:
            hit = cache[x] = self._decide(x)
        return hit

    __contains__ = contains

    @cached_property
    def _search_data(self):
        gens = [self.coords(g) for g in self.nonunit_generators]
        degs = [sum(a * b for a, b in zip(self._grading_coords, c)) for c in gens]
        units = lat.lattice_basis([self.coords(u) for u in self.unit_generators], self.rank)
        return gens, degs, units

    def _decide(self, x: Vector) -> bool:
        c = self.coords(x)
        if c is None:
            return False
        # cone test first: cheap and rules out most non-members
        if any(sum(a * b for a, b in zip(n, c)) < 0 for n in self.facets):
            return False
        gens, degs, units = self._search_data
        grade = self._grading_coords
        seen: dict[tuple[int, Vector], bool] = {}

        def reach(j: int, rest: Vector) -> bool:
            key = (j, rest)
            if key in seen:
                return seen[key]
            if j == len(gens):
                ok = lat.in_lattice(units, rest)
            else:
                budget = sum(a * b for a, b in zip(grade, rest))
                ok = False
                if budget >= 0:
                    g = gens[j]
                    cur = rest
                    for _ in range(budget // degs[j] + 1):
                        if reach(j + 1, cur):
                            ok = True
                            break
                        cur = tuple(a - b for a, b in zip(cur, g))
            seen[key] = ok
            return ok

        return reach(0, c)

    def elements(self, radius: int, norm: str = "box") -> list[Vector]:
        """Elements of M with coordinates bounded by ``radius``.

        ``norm`` is ``"box"`` (max-norm) or ``"l1"``.
        """
        pts = lat.box(self.ambient_rank, radius) if norm == "box" else lat.l1_ball(self.ambient_rank, radius)
        return [p for p in pts if self.contains(p)]

    def gp_elements(self, radius: int, norm: str = "box") -> list[Vector]:
        pts = lat.box(self.ambient_rank, radius) if norm == "box" else lat.l1_ball(self.ambient_rank, radius)
        return [p for p in pts if self.coords(p) is not None]

    def divisors(self, x: Sequence[int]) -> list[Vector]:
        """All m in M with x - m in M. Requires M sharp."""
        if not self.is_sharp:
            raise ValueError("divisors are only finite for sharp monoids")
        x = tuple(x)
        if not self.contains(x):
            return []
        top = self.grading(x)
        frontier = {lat.zero(self.ambient_rank)}
        found = set(frontier)
        while frontier:
            nxt = set()
            for m in frontier:
                for g in self.nonunit_generators:
                    y = lat.add(m, g)
                    if y not in found and self.grading(y) <= top:
                        found.add(y)
                        nxt.add(y)
            frontier = nxt
        return sorted(m for m in found if self.contains(lat.sub(x, m)))

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "ambient_rank": self.ambient_rank,
            "generators": [list(g) for g in self.generators],
            "involution": [list(r) for r in self.involution] if self.involution is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AffineMonoid":
        try:
            d = int(data["ambient_rank"])
            gens = [tuple(g) for g in data.get("generators", [])]
            inv = data.get("involution")
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed monoid description: {exc}") from exc
        return cls(d, tuple(gens), inv)

    @classmethod
    def from_json(cls, text: str) -> "AffineMonoid":
        return cls.from_dict(json.loads(text))

    def __str__(self):
        gens = ", ".join(str(g) for g in self.generators) or "-"
        inv = "" if self.involution is None else f", involution={[list(r) for r in self.involution]}"
        return f"AffineMonoid(Z^{self.ambient_rank}; {gens}{inv})"


@dataclass(frozen=True)
class MonoidHom:
    source: AffineMonoid
    target: AffineMonoid
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = _as_matrix(self.matrix) if self.matrix else tuple(() for _ in range(self.target.ambient_rank))
        if len(m) != self.target.ambient_rank or any(len(r) != self.source.ambient_rank for r in m):
            raise ValueError("matrix shape does not match the ambient ranks")
        object.__setattr__(self, "matrix", m)

    def __call__(self, x: Sequence[int]) -> Vector:
        return lat.apply(self.matrix, x)

    def validate(self) -> list[str]:
        """Violated invariants, empty when the hom is well defined."""
        problems = []
        for g in self.source.generators:
            if not self.target.contains(self(g)):
                problems.append(f"generator {g} maps outside the target")
        if self.source.involution is not None or self.target.involution is not None:
            a = lat.matmul(self.matrix, self.source.involution_matrix)
            b = lat.matmul(self.target.involution_matrix, self.matrix)
            # only the action on the source group completion matters
            for row in self.source.gp_basis:
                if lat.apply(a, row) != lat.apply(b, row):
                    problems.append("hom does not commute with the involutions")
                    break
        return problems

    def compose(self, other: "MonoidHom") -> "MonoidHom":
        """``self o other``."""
        rows, cols = self.target.ambient_rank, other.source.ambient_rank
        m = [[sum(self.matrix[i][k] * other.matrix[k][j] for k in range(len(other.matrix))) for j in range(cols)] for i in range(rows)]
        return MonoidHom(other.source, self.target, m)


def _zero_matrix(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity_hom(m: AffineMonoid) -> MonoidHom:
    return MonoidHom(m, m, lat.identity(m.ambient_rank))


def inclusion(sub: AffineMonoid, m: AffineMonoid) -> MonoidHom:
    if sub.ambient_rank != m.ambient_rank:
        raise ValueError("inclusion needs a common ambient lattice")
    return MonoidHom(sub, m, lat.identity(m.ambient_rank))


# -- constructions -----------------------------------------------------------


def natural_numbers(d: int = 1, involution=None) -> AffineMonoid:
    return AffineMonoid(d, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), involution)


def integers(d: int = 1, involution=None) -> AffineMonoid:
    gens = []
    for i in range(d):
        e = tuple(int(i == j) for j in range(d))
        gens += [e, lat.neg(e)]
    return AffineMonoid(d, tuple(gens), involution)


def swap_matrix(d: int = 2) -> Matrix:
    """Matrix exchanging the two halves of Z^(2k)."""
    k = d // 2
    return [[int(j == (i + k) % d) for j in range(d)] for i in range(d)]


def group_completion(m: AffineMonoid) -> Matrix:
    return m.gp_basis


def group(m: AffineMonoid) -> AffineMonoid:
    """M^gp as an AffineMonoid on the same ambient lattice."""
    gens = []
    for b in m.gp_basis:
        gens += [tuple(b), lat.neg(b)]
    return AffineMonoid(m.ambient_rank, tuple(gens), m.involution)


def units(m: AffineMonoid) -> AffineMonoid:
    gens = []
    for b in m.unit_basis:
        gens += [tuple(b), lat.neg(b)]
    return AffineMonoid(m.ambient_rank, tuple(gens), m.involution)


def _section(y: Matrix) -> Matrix:
    """Integer right inverse ``S`` of a surjective ``Y : Z^d -> Z^r``."""
    r = len(y)
    if r == 0:
        return []
    d = len(y[0])
    u, dm, v = smith_normal_form(y)
    if any(dm[i][i] != 1 for i in range(r)):
        raise TorsionError("projection is not surjective")
    # Y = U^-1 [I 0] V^-1  =>  S = V [I;0] U
    vi = [row[:r] for row in v]
    return lat.matmul(vi, u) if d else []


def _induced_involution(y: Matrix, m: AffineMonoid) -> Matrix | None:
    if m.involution is None:
        return None
    if not y:
        return []
    s = _section(y)
    wbar = lat.matmul(lat.matmul(y, m.involution_matrix), s)
    # well defined on the image of M^gp
    for b in m.gp_basis:
        if lat.apply(wbar, lat.apply(y, b)) != lat.apply(y, m.w(b)):
            raise ValueError("involution does not descend to the quotient")
    return wbar


def sharpen(m: AffineMonoid) -> tuple[AffineMonoid, MonoidHom]:
    """M / M^* realized on Z^(d - rank M^*), with the projection."""
    d = m.ambient_rank
    if not lat.is_saturated_in(m.unit_basis, m.gp_basis, d):
        raise TorsionError("M^gp / M^* has torsion; sharpening is not a lattice monoid")
    y = lat.annihilator(m.unit_basis, d) if m.unit_basis else lat.identity(d)
    r = len(y)
    gens = tuple(dict.fromkeys(lat.apply(y, g) for g in m.nonunit_generators))
    wbar = _induced_involution(y, m)
    sharp = AffineMonoid(r, gens, wbar)
    return sharp, MonoidHom(m, sharp, y)


def is_saturated(m: AffineMonoid, rank_cap: int = DEFAULT_RANK_CAP) -> bool:
    """Whether M == cone(M) cap M^gp.

    Every lattice point of the cone lies in some simplicial subcone spanned
    by independent generators, and differs from a point of that subcone's
    half-open parallelepiped by an element of M. So M is saturated iff all
    those parallelepiped points are in M.
    """
    if m.ambient_rank > rank_cap:
        raise DimensionCapError(f"dimension cap: ambient rank {m.ambient_rank} > {rank_cap}")
    r = m.rank
    gc = m._gen_coords
    for subset in combinations(range(len(gc)), r):
        vecs = [gc[i] for i in subset]
        if lat.rank(vecs, r) < r:
            continue
        for pt in parallelepiped_points(vecs, r):
            if not m.contains(m.from_coords(pt)):
                return False
    return True


def saturate(m: AffineMonoid) -> AffineMonoid:
    """cone(M) cap M^gp, with the same involution."""
    ineqs = m.facets
    gens = cone_lattice_generators(ineqs, m.rank)
    return AffineMonoid(m.ambient_rank, tuple(m.from_coords(c) for c in gens), m.involution)


def direct_sum(a: AffineMonoid, b: AffineMonoid) -> AffineMonoid:
    da, db = a.ambient_rank, b.ambient_rank
    gens = [tuple(g) + (0,) * db for g in a.generators] + [(0,) * da + tuple(g) for g in b.generators]
    inv = None
    if a.involution is not None or b.involution is not None:
        inv = block_diag(a.involution_matrix, b.involution_matrix)
    out = AffineMonoid(da + db, tuple(gens), inv)
    # the HNF basis of a block sum is the block sum of HNF bases, so the
    # facets are those of the summands; seeding them skips the subset search
    ra, rb = a.rank, b.rank
    out.__dict__["facets"] = sorted(
        [tuple(n) + (0,) * rb for n in a.facets] + [(0,) * ra + tuple(n) for n in b.facets]
    )
    return out


def block_diag(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    na, nb = len(a), len(b)
    return [list(r) + [0] * nb for r in a] + [[0] * na + list(r) for r in b]


def double(m: AffineMonoid) -> AffineMonoid:
    """M x M with the coordinate switch; any involution on M is ignored."""
    d = m.ambient_rank
    plain = AffineMonoid(d, m.generators)
    return AffineMonoid(2 * d, direct_sum(plain, plain).generators, swap_matrix(2 * d) if d else [])


def induced_free(m: AffineMonoid) -> AffineMonoid:
    """The free Z/2-monoid on M: M x M with (x, y) -> (w y, w x).

    Isomorphic to :func:`double` of M via (x, y) -> (x, w y); this form makes
    the sum map (x, y) -> x + y equivariant.
    """
    d = m.ambient_rank
    w = m.involution_matrix
    inv = [[0] * d + list(r) for r in w] + [list(r) + [0] * d for r in w]
    plain = AffineMonoid(d, m.generators)
    return AffineMonoid(2 * d, direct_sum(plain, plain).generators, inv)


def face_localization(m: AffineMonoid, face: Iterable[Sequence[int]]) -> AffineMonoid:
    """M_F: adjoin the negatives of the generators of the face spanned by F."""
    face = [tuple(f) for f in face]
    for f in face:
        if f not in m.generators:
            raise ValueError(f"{f} is not a generator")
    if not face:
        return m
    fc = [m.coords(f) for f in face if any(f)]
    normals = _face_functional(m, fc)
    if normals is None:
        raise ValueError("F does not span a face")
    extra = [lat.neg(g) for g in m._nonzero if sum(a * b for a, b in zip(normals, m.coords(g))) == 0]
    return AffineMonoid(m.ambient_rank, m.generators + tuple(extra), m.involution)


def _face_functional(m: AffineMonoid, fc: list[Vector]) -> Vector | None:
    """A functional >= 0 on cone(M) whose zero set on generators spans span(F)."""
    r = m.rank
    span_f = lat.lattice_basis(fc, r) if fc else []
    support = [n for n in m.facets if all(sum(a * b for a, b in zip(n, c)) == 0 for c in fc)]
    phi = tuple(sum(n[i] for n in support) for i in range(r)) if support else (0,) * r
    for c in m._gen_coords:
        val = sum(a * b for a, b in zip(phi, c))
        in_span = lat.rank(span_f + [list(c)], r) == len(span_f)
        if val == 0 and not in_span:
            return None
    return phi


def exactify(m: AffineMonoid) -> "ExactifiedMonoid":
    d = m.ambient_rank
    w = m.involution_matrix
    gens = [tuple(g) + (0,) * d for g in m.generators]
    for b in m.gp_basis:
        gens += [(0,) * d + tuple(b), (0,) * d + lat.neg(b)]
    # (x, y) -> (w x, w x - w y)
    inv = [list(r) + [0] * d for r in w] + [list(r) + [-v for v in r] for r in w]
    carrier = AffineMonoid(2 * d, tuple(gens), inv)
    free = induced_free(m)
    eye = lat.identity(d)
    zero = _zero_matrix(d, d)
    theta = MonoidHom(free, m, [a + b for a, b in zip(eye, eye)])
    theta_ex = MonoidHom(carrier, m, [a + b for a, b in zip(eye, zero)])
    eta = MonoidHom(free, carrier, [a + b for a, b in zip(eye, eye)] + [a + b for a, b in zip(zero, eye)])
    return ExactifiedMonoid(m, carrier, theta, theta_ex, eta)


@dataclass(frozen=True)
class ExactifiedMonoid:
    base: AffineMonoid
    carrier: AffineMonoid
    theta: MonoidHom
    theta_ex: MonoidHom
    eta: MonoidHom

    def triangle_commutes(self, x: Sequence[int]) -> bool:
        return self.theta_ex(self.eta(x)) == self.theta(x)


def integral_pushout(f: MonoidHom, g: MonoidHom) -> tuple[AffineMonoid, MonoidHom, MonoidHom]:
    """Pushout of ``P <-f- R -g-> Q`` in integral monoids.

    Realized as the image of P + Q in (P^gp + Q^gp) / R^gp, which is
    identified with a lattice by projecting away the saturation of the
    relation lattice. Returns the pushout and its two structure maps.
    """
    if f.source is not g.source and f.source != g.source:
        raise ValueError("maps must share a source")
    p, q = f.target, g.target
    dp, dq = p.ambient_rank, q.ambient_rank
    rel = [lat.add(f(r) + (0,) * dq, (0,) * dp + lat.neg(g(r))) for r in f.source.generators]
    rel = [r for r in rel if any(r)]
    amb = [tuple(x) + (0,) * dq for x in p.generators] + [(0,) * dp + tuple(x) for x in q.generators]
    n = dp + dq
    if rel and not lat.is_saturated_in(rel, amb + rel, n):
        raise TorsionError("pushout group has torsion")
    y = lat.annihilator(rel, n) if rel else lat.identity(n)
    gens = tuple(lat.apply(y, v) for v in amb)
    inv = None
    if p.involution is not None or q.involution is not None:
        both = direct_sum(p, q)
        inv = _induced_involution(y, both)
    out = AffineMonoid(len(y), gens, inv)
    left = MonoidHom(p, out, [row[:dp] for row in y])
    right = MonoidHom(q, out, [row[dp:] for row in y])
    return out, left, right


def induced_map(source: AffineMonoid, target: AffineMonoid, pieces: list[tuple[MonoidHom, Matrix]]) -> MonoidHom:
    """The map ``source -> target`` determined on the images of structure maps.

    ``pieces`` pairs each structure map ``s_k : A_k -> source`` with the
    matrix of the desired composite ``A_k -> target``. The result is solved
    on the lattice spanned by the images and checked on every generator.
    """
    d = source.ambient_rank
    rows_src, rows_tgt = [], []
    for s, mat in pieces:
        for b in lat.identity(s.source.ambient_rank):
            rows_src.append(list(s(b)))
            rows_tgt.append(list(lat.apply(mat, b)))
    # solve E @ src_col == tgt_col on the span of the images
    basis = lat.lattice_basis(rows_src, d) if d else []
    if len(basis) < d:
        raise ValueError("structure maps do not span the ambient lattice")
    sec = _section(lat.transpose(rows_src)) if rows_src else []
    # columns of rows_src span Z^d: E = T @ sec where T has the target images as columns
    t = lat.transpose(rows_tgt) if rows_tgt else [[] for _ in range(target.ambient_rank)]
    e = lat.matmul(t, sec) if sec else _zero_matrix(target.ambient_rank, d)
    for s_row, t_row in zip(rows_src, rows_tgt):
        if lat.apply(e, s_row) != tuple(t_row):
            raise ValueError("the pieces do not glue to a well-defined map")
    return MonoidHom(source, target, e)


def conjugation_fixed_monoid(q: AffineMonoid, rank_cap: int = DEFAULT_RANK_CAP) -> AffineMonoid:
    """{y in Q^gp : y + w(y) in Q}, returned on the ambient lattice of Q.

    Exact when Q is saturated: the set is then the lattice points of the
    cone cut out by the facet inequalities of Q pulled back along
    ``1 + w``. For non-saturated Q a generating set is assembled from the
    lattice points of that cone that pass the membership test.
    """
    if q.rank > rank_cap:
        raise DimensionCapError(f"dimension cap: rank {q.rank} > {rank_cap}")
    r = q.rank
    sigma = [q.coords(q.w(b)) for b in q.gp_basis]
    mplus = [[int(i == j) + sigma[i][j] for j in range(r)] for i in range(r)]
    ineqs = [tuple(sum(mplus[i][j] * n[j] for j in range(r)) for i in range(r)) for n in q.facets]
    gens = cone_lattice_generators(ineqs, r)
    vecs = [q.from_coords(c) for c in gens]
    if not is_saturated(q, rank_cap=max(rank_cap, q.ambient_rank)):
        vecs = [v for v in vecs if q.contains(lat.add(v, q.w(v)))]
    return AffineMonoid(q.ambient_rank, tuple(vecs), q.involution)


# -- monoid sets -------------------------------------------------------------


@dataclass(frozen=True)
class MonoidSet:
    """A disjoint union of free orbits ``M . e`` of a monoid with involution.

    ``swaps`` lists pairs of orbit labels exchanged by the involution; the
    remaining orbits are carried to themselves, acted on by ``w``. An
    element is a pair ``(label, m)``.
    """

    monoid: AffineMonoid
    orbits: tuple = ()
    swaps: tuple = ()

    def __post_init__(self):
        labels = set(self.orbits)
        for a, b in self.swaps:
            if a not in labels or b not in labels or a == b:
                raise ValueError(f"bad swap pair {(a, b)}")

    @cached_property
    def _partner(self) -> dict:
        out = {}
        for a, b in self.swaps:
            out[a], out[b] = b, a
        return out

    @property
    def free_orbit_count(self) -> int:
        return len(self.orbits)

    def act(self, m: Sequence[int], element):
        label, x = element
        return label, lat.add(x, m)

    def involve(self, element):
        label, x = element
        return self._partner.get(label, label), self.monoid.w(x)

    def base_change(self, h: MonoidHom) -> "MonoidSet":
        """``S (+)_M N`` along ``h : M -> N``: free orbits stay free."""
        if h.source != self.monoid:
            raise ValueError("hom source is not the acting monoid")
        return MonoidSet(h.target, self.orbits, self.swaps)

    def base_change_element(self, h: MonoidHom, element):
        label, x = element
        return label, h(x)


def switching_pair(m: AffineMonoid) -> MonoidSet:
    """M amalg M with the involution exchanging the two copies."""
    return MonoidSet(m, (0, 1), ((0, 1),))


def load_monoid(path: str) -> AffineMonoid:
    with open(path, encoding="utf-8") as fh:
        return AffineMonoid.from_json(fh.read())


@dataclass(frozen=True)
class Instance:
    """A named monoid, used by the check registry and tests."""

    name: str
    monoid: AffineMonoid = field(compare=False)


def standard_monoids() -> dict[str, AffineMonoid]:
    return {
        "N": natural_numbers(1),
        "Z": integers(1),
        "N2-swap": natural_numbers(2, swap_matrix(2)),
        "zero": AffineMonoid(0, ()),
    }


def p_zero(n: int) -> AffineMonoid:
    """{x in Z^n : x_1 + ... + x_n <= 0}."""
    gens = [tuple(-int(i == j) for j in range(n)) for i in range(n)]
    for i in range(n - 1):
        e = [0] * n
        e[i], e[i + 1] = 1, -1
        gens += [tuple(e), lat.neg(e)]
    return AffineMonoid(n, tuple(gens))


def f_zero(n: int) -> AffineMonoid:
    """{x in Z^n : x_1 + ... + x_n == 0}."""
    gens = []
    for i in range(n - 1):
        e = [0] * n
        e[i], e[i + 1] = 1, -1
        gens += [tuple(e), lat.neg(e)]
    return AffineMonoid(n, tuple(gens))
