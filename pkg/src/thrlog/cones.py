"""Rational polyhedral cones in coordinate lattices Z^r.

Facets and extreme rays are found by brute force over subsets, which is
fine at the ranks this package targets (r <= 4 or so) and keeps every
answer exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import floor, gcd
from typing import Iterable, Sequence

from . import lattice as lat
from .snf import smith_normal_form, unimodular_inverse


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, (abs(x) for x in v), 0)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def facet_normals(gens: Sequence[Sequence[int]], r: int) -> list[tuple[int, ...]]:
    """Primitive inner normals of the facets of ``cone(gens)`` in Q^r.

    ``gens`` must span Q^r. A cone that is a linear subspace has no facets.
    """
    gens = [tuple(g) for g in gens if any(g)]
    if r == 0:
        return []
    found = set()
    for subset in combinations(range(len(gens)), r - 1):
        kern = lat.right_kernel([gens[i] for i in subset], r) if subset else lat.identity(r)
        if len(kern) != 1:
            continue
        n = primitive(kern[0])
        vals = [sum(a * b for a, b in zip(n, g)) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            n = tuple(-x for x in n)
        else:
            continue
        if any(vals):
            found.add(n)
    return sorted(found)


def lineality(ineqs: Sequence[Sequence[int]], r: int) -> lat.Matrix:
    """Lattice basis of ``{c : h . c == 0 for all h}``."""
    if not ineqs:
        return lat.identity(r)
    return lat.lattice_basis(lat.right_kernel([list(h) for h in ineqs], r), r)


def extreme_rays(ineqs: Sequence[Sequence[int]], r: int) -> list[tuple[int, ...]]:
    """Primitive ray generators of ``{c : H c >= 0}`` modulo its lineality.

    One representative per ray; lineality is returned separately by
    :func:`lineality`.
    """
    ineqs = [tuple(h) for h in ineqs if any(h)]
    lin = lineality(ineqs, r)
    s = r - len(lin)
    if s == 0:
        return []
    seen = {}
    for subset in combinations(range(len(ineqs)), s - 1):
        rows = [ineqs[i] for i in subset]
        kern = lat.right_kernel(rows, r) if rows else lat.identity(r)
        if len(kern) != len(lin) + 1:
            continue
        v = next((k for k in kern if lat.rank(lin + [k], r) > len(lin)), None)
        if v is None:
            continue
        for cand in (tuple(v), lat.neg(v)):
            vals = tuple(sum(a * b for a, b in zip(h, cand)) for h in ineqs)
            if all(x >= 0 for x in vals) and any(vals):
                key = primitive(vals)
                seen.setdefault(key, primitive(cand))
    return [seen[k] for k in sorted(seen)]


def parallelepiped_points(vectors: Sequence[Sequence[int]], r: int) -> Iterable[tuple[int, ...]]:
    """Nonzero points of Z^r in ``{sum l_i v_i : 0 <= l_i < 1}``.

    ``vectors`` must be r linearly independent vectors of Z^r.
    """
    a = [list(v) for v in vectors]
    _, d, v = smith_normal_form(a)
    vinv = unimodular_inverse(v)
    diag = [d[i][i] for i in range(r)]
    for w in product(*(range(x) for x in diag)):
        if not any(w):
            continue
        z = [sum(w[i] * vinv[i][j] for i in range(r)) for j in range(r)]
        lam = lat.rational_solve(a, z)
        frac = [x - floor(x) for x in lam]
        pt = [sum(frac[i] * a[i][j] for i in range(r)) for j in range(r)]
        assert all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for x in pt)
        yield tuple(int(x) for x in pt)


def cone_lattice_generators(ineqs: Sequence[Sequence[int]], r: int) -> list[tuple[int, ...]]:
    """The Hilbert basis of the monoid ``{c in Z^r : H c >= 0}``.

    Starts from a symmetric basis of the lineality lattice, the primitive
    extreme rays, and every parallelepiped point of every simplicial
    subcone spanned by those vectors; this set generates. It is then
    reduced to one representative per irreducible class modulo units.
    """
    ineqs = [tuple(h) for h in ineqs if any(h)]
    lin = [tuple(v) for v in lineality(ineqs, r)]
    rays = extreme_rays(ineqs, r)
    spanning = lin + rays
    cand = dict.fromkeys(rays)
    for subset in combinations(range(len(spanning)), r):
        vecs = [spanning[i] for i in subset]
        if lat.rank(vecs, r) < r:
            continue
        for pt in parallelepiped_points(vecs, r):
            cand.setdefault(pt)
    return lin + [lat.neg(v) for v in lin] + hilbert_reduce(list(cand), ineqs)


def hilbert_reduce(vectors: Sequence[Sequence[int]], ineqs: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Irreducible members of ``vectors`` in the saturated monoid ``H c >= 0``.

    Units (``H c == 0``) are dropped. An element is kept unless it differs
    from an already kept element of no larger degree by a member of the
    cone. Scanning by increasing degree makes this exact: any reducible
    element is a kept irreducible plus something in the monoid.
    """
    def values(v):
        return [sum(a * b for a, b in zip(h, v)) for h in ineqs]

    scored = []
    for v in dict.fromkeys(tuple(v) for v in vectors):
        vals = values(v)
        if any(vals):
            scored.append((sum(vals), v, vals))
    scored.sort()
    kept: list[tuple[tuple[int, ...], list[int]]] = []
    for _, v, vals in scored:
        if any(all(x >= y for x, y in zip(vals, hv)) for _, hv in kept):
            continue
        kept.append((v, vals))
    return [v for v, _ in kept]
