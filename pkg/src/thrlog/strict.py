"""Unit base change and fixed-point pushout checks for strict monoid maps.

For a map ``theta: P -> Q`` whose sharpening is an isomorphism, the checks
here certify that

* ``P (+)_{P*} Q* -> Q`` is an isomorphism,
* the squares built from ``P* (+) P* -> P (+) P`` and its exactified
  variant are cocartesian in integral monoids,
* the conjugation-fixed monoids satisfy ``L (+)_P Q ~= M``.

Injectivity is certified on the whole group completion by a rank test.
Surjectivity is certified by finding a preimage of every target generator,
which makes the image a submonoid containing all generators. A window of
target elements is additionally swept as a witness search.
"""

from __future__ import annotations

import random
from typing import Sequence

from . import lattice as lat
from .monoid import (
    AffineMonoid,
    MonoidHom,
    TorsionError,
    conjugation_fixed_monoid,
    direct_sum,
    exactify,
    induced_map,
    integral_pushout,
    saturate,
    sharpen,
    units,
)
from .report import FAIL, PASS, PRECONDITION_FAILED, CheckReport

DEFAULT_WINDOW = 5
_WINDOW_BUDGET = 3000


def window_points(d: int, radius: int) -> list[tuple[int, ...]]:
    """Box of the given radius, or an l1 ball when the box is too large.

    The l1 radius shrinks until the point count fits the sweep budget, so
    high-rank targets get a thinner but still symmetric sample.
    """
    if (2 * radius + 1) ** d <= _WINDOW_BUDGET:
        return list(lat.box(d, radius))
    for r in range(radius, -1, -1):
        pts = list(lat.l1_ball(d, r))
        if len(pts) <= _WINDOW_BUDGET:
            return pts
    return [lat.zero(d)]


class Preimages:
    """Preimages under a map that is injective on the source group completion."""

    def __init__(self, h: MonoidHom):
        self.h = h
        self.basis = h.source.gp_basis
        images = [list(h(b)) for b in self.basis]
        hmat, u = lat.hnf(images, h.target.ambient_rank) if images else ([], [])
        self.k = sum(1 for row in hmat if any(row))
        self.echelon = hmat[: self.k]
        self.transform = u

    def __call__(self, y: Sequence[int]) -> tuple[int, ...] | None:
        """The ``v`` in the source monoid with ``h(v) == y``, or None."""
        src = self.h.source
        if not self.basis:
            return None if any(y) else lat.zero(src.ambient_rank)
        c = lat.solve_in_lattice(self.echelon, y)
        if c is None:
            return None
        n = len(self.basis)
        coeffs = [sum(c[i] * self.transform[i][j] for i in range(self.k)) for j in range(n)]
        v = tuple(sum(coeffs[i] * self.basis[i][j] for i in range(n)) for j in range(src.ambient_rank))
        return v if src.contains(v) else None


def preimage(h: MonoidHom, y: Sequence[int]) -> tuple[int, ...] | None:
    return Preimages(h)(y)


def injective_on_gp(h: MonoidHom) -> bool:
    images = [h(b) for b in h.source.gp_basis]
    return lat.rank(images, h.target.ambient_rank) == len(images)


def iso_witness(h: MonoidHom, window: int = DEFAULT_WINDOW) -> dict | None:
    """None if ``h`` is an isomorphism of monoids, else a description of why not."""
    problems = h.validate()
    if problems:
        return {"reason": "not a homomorphism", "problems": problems}
    if not injective_on_gp(h):
        return {"reason": "not injective on the group completion"}
    pre = Preimages(h)
    for g in h.target.generators:
        if pre(g) is None:
            return {"reason": "target generator not hit", "element": list(g)}
    for y in window_points(h.target.ambient_rank, window):
        if h.target.contains(y) and pre(y) is None:
            return {"reason": "window element not hit", "element": list(y)}
    return None


def sharpened(theta: MonoidHom) -> MonoidHom:
    """The map ``P/P* -> Q/Q*`` induced by ``theta``."""
    pbar, ppr = sharpen(theta.source)
    qbar, qpr = sharpen(theta.target)
    comp = qpr.compose(theta)
    return induced_map(pbar, qbar, [(ppr, comp.matrix)])


def _precondition(theta: MonoidHom, window: int) -> dict | None:
    problems = theta.validate()
    if problems:
        return {"reason": "theta is not a homomorphism", "problems": problems}
    try:
        bar = sharpened(theta)
    except (TorsionError, ValueError) as exc:
        return {"reason": f"sharpening unavailable: {exc}"}
    why = iso_witness(bar, window)
    if why is not None:
        return {"reason": "sharpened map is not an isomorphism", "detail": why}
    return None


def pushout_iso(
    f: MonoidHom,
    g: MonoidHom,
    target: AffineMonoid,
    via_left: MonoidHom,
    via_right: MonoidHom,
    window: int = DEFAULT_WINDOW,
) -> dict | None:
    """None if the pushout of ``f`` and ``g`` maps isomorphically onto ``target``.

    ``via_left`` and ``via_right`` are the maps from the targets of ``f``
    and ``g`` into ``target`` that induce the comparison.
    """
    a, b = via_left.compose(f), via_right.compose(g)
    for r in f.source.generators:
        if a(r) != b(r):
            return {"reason": "square does not commute", "element": list(r)}
    try:
        out, left, right = integral_pushout(f, g)
        e = induced_map(out, target, [(left, via_left.matrix), (right, via_right.matrix)])
    except (TorsionError, ValueError) as exc:
        return {"reason": str(exc)}
    return iso_witness(e, window)


def check_unit_base_change(theta: MonoidHom, window: int = DEFAULT_WINDOW) -> CheckReport:
    """``P (+)_{P*} Q* -> Q`` is an isomorphism when the sharpened map is."""
    name = "unit-base-change"
    pre = _precondition(theta, window)
    if pre is not None:
        return CheckReport(name, PRECONDITION_FAILED, pre)
    p, q = theta.source, theta.target
    pu, qu = units(p), units(q)
    f = MonoidHom(pu, p, lat.identity(p.ambient_rank))
    g = MonoidHom(pu, qu, theta.matrix)
    why = pushout_iso(f, g, q, theta, MonoidHom(qu, q, lat.identity(q.ambient_rank)), window)
    if why is not None:
        return CheckReport(name, FAIL, why)
    return CheckReport(name, PASS, None, {"window": window})


def _shear(d: int) -> list[list[int]]:
    """Matrix of ``(a, b) -> (a + b, b)`` on Z^d (+) Z^d."""
    eye = lat.identity(d)
    return [r + s for r, s in zip(eye, eye)] + [[0] * d + list(r) for r in eye]


def _sum_hom(f: MonoidHom, g: MonoidHom) -> MonoidHom:
    fa, ga = f.source.ambient_rank, g.source.ambient_rank
    m = [list(r) + [0] * ga for r in f.matrix] + [[0] * fa + list(r) for r in g.matrix]
    return MonoidHom(direct_sum(f.source, g.source), direct_sum(f.target, g.target), m)


def _plain(m: AffineMonoid) -> AffineMonoid:
    return AffineMonoid(m.ambient_rank, m.generators)


def check_strict3_squares(theta: MonoidHom, window: int = DEFAULT_WINDOW, rank_cap: int = 6) -> CheckReport:
    """Cocartesian squares for the exactified base change along ``theta``.

    Checks, in integral monoids with involutions forgotten:

    * ``(P (+) P) (+)_{P* (+) P*} (Q* (+) Q*) ~= Q (+) Q``,
    * ``(P (+) P^gp) (+)_{P* (+) P*} (Q* (+) Q*) ~= Q (+) Q^gp``, where
      ``P* (+) P* -> P (+) P^gp`` is ``(u, v) -> (u + v, v)``,
    * ``L (+)_P Q ~= M``, ``L (+)_{P*} Q* ~= M`` and ``P (+)_{P*} Q* ~= Q``
      for the conjugation-fixed monoids ``L`` of P and ``M`` of Q,

    and that ``L`` and ``M`` are the fixed points of the exactifications.
    """
    name = "strict-squares"
    pre = _precondition(theta, window)
    if pre is not None:
        return CheckReport(name, PRECONDITION_FAILED, pre)
    p, q = theta.source, theta.target
    dp, dq = p.ambient_rank, q.ambient_rank
    pp, qq = _plain(p), _plain(q)
    pu, qu = _plain(units(p)), _plain(units(q))
    pgp = AffineMonoid(dp, tuple(b for row in p.gp_basis for b in (tuple(row), lat.neg(row))))
    qgp = AffineMonoid(dq, tuple(b for row in q.gp_basis for b in (tuple(row), lat.neg(row))))
    th = MonoidHom(pp, qq, theta.matrix)
    th_u = MonoidHom(pu, qu, theta.matrix)
    inc_p = MonoidHom(pu, pp, lat.identity(dp))
    inc_q = MonoidHom(qu, qq, lat.identity(dq))
    witness = {}

    # left square of the first diagram
    f = _sum_hom(inc_p, inc_p)
    g = _sum_hom(th_u, th_u)
    why = pushout_iso(f, g, direct_sum(qq, qq), _sum_hom(th, th), _sum_hom(inc_q, inc_q), window)
    if why:
        witness["left"] = why

    # outer square: P* + P* -> P + P^gp through the shear
    src = direct_sum(pu, pu)
    top = MonoidHom(src, direct_sum(pp, pgp), _shear(dp))
    corner = direct_sum(qq, qgp)
    down = MonoidHom(direct_sum(qu, qu), corner, _shear(dq))
    th_gp = MonoidHom(pgp, qgp, theta.matrix)
    why = pushout_iso(top, g, corner, _sum_hom(th, th_gp), down, window)
    if why:
        witness["outer"] = why

    # fixed-point monoids
    try:
        l_mon = _plain(conjugation_fixed_monoid(p, rank_cap))
        m_mon = _plain(conjugation_fixed_monoid(q, rank_cap))
    except ValueError as exc:
        return CheckReport(name, FAIL, {"fixed": str(exc)})
    for mon, base in ((l_mon, p), (m_mon, q)):
        carrier = exactify(base).carrier
        for y in window_points(base.ambient_rank, min(window, 3)):
            fixed = tuple(a + b for a, b in zip(y, base.w(y))) + tuple(y)
            if base.coords(y) is not None and carrier.contains(fixed) != mon.contains(y):
                witness["fixed-points"] = {"element": list(y)}
                break
    p_in_l = MonoidHom(pp, l_mon, lat.identity(dp))
    q_in_m = MonoidHom(qq, m_mon, lat.identity(dq))
    l_to_m = MonoidHom(l_mon, m_mon, theta.matrix)
    for key, (ff, gg, vl, vr) in {
        "fixed-right": (p_in_l, th, l_to_m, q_in_m),
        "fixed-left": (inc_p, th_u, th, inc_q),
        "fixed-outer": (p_in_l.compose(inc_p), th_u, l_to_m, q_in_m.compose(inc_q)),
    }.items():
        why = pushout_iso(ff, gg, vl.target, vl, vr, window)
        if why:
            witness[key] = why
    if witness:
        return CheckReport(name, FAIL, witness)
    return CheckReport(name, PASS, None, {"window": window})


def is_chart_surjective(p: AffineMonoid, restrictions: Sequence[MonoidHom]) -> bool:
    """Whether ``P -> M_U / M_U*`` is surjective for every restriction ``P -> M_U``."""
    for h in restrictions:
        if h.source != p:
            raise ValueError("restriction does not start at the chart")
        bar, proj = sharpen(h.target)
        comp = proj.compose(h)
        image = AffineMonoid(bar.ambient_rank, tuple(comp(g) for g in p.generators))
        if not all(image.contains(g) for g in bar.generators):
            return False
    return True


# -- instances ---------------------------------------------------------------


def _random_involution(rng: random.Random, d: int) -> list[list[int]]:
    perm = list(range(d))
    idx = list(range(d))
    rng.shuffle(idx)
    for a, b in zip(idx[::2], idx[1::2]):
        if rng.random() < 0.5:
            perm[a], perm[b] = b, a
    return [[int(perm[i] == j) for j in range(d)] for i in range(d)]


def random_sharp_monoid(rng: random.Random, max_rank: int = 3) -> AffineMonoid:
    """A saturated sharp monoid in Z^d, d <= max_rank, stable under a permutation involution."""
    d = rng.randint(1, max_rank)
    w = _random_involution(rng, d)
    gens = set()
    for _ in range(rng.randint(1, d + 1)):
        v = tuple(rng.randint(0, 2) for _ in range(d))
        if any(v):
            gens.add(v)
            gens.add(lat.apply(w, v))
    if not gens:
        gens.add((1,) * d)
    return saturate(AffineMonoid(d, tuple(sorted(gens)), w))


def random_unit_extension(rng: random.Random, max_rank: int = 3) -> MonoidHom:
    """``P -> P (+) Z^k`` for random sharp P with involution; k in 0..2."""
    p = random_sharp_monoid(rng, max_rank)
    k = rng.randint(0, 2)
    choices = [lat.identity(k), [[-int(i == j) for j in range(k)] for i in range(k)]]
    if k == 2:
        choices.append([[0, 1], [1, 0]])
    tau = rng.choice(choices)
    free = AffineMonoid(k, tuple(v for i in range(k) for v in (tuple(int(i == j) for j in range(k)), tuple(-int(i == j) for j in range(k)))), tau)
    q = direct_sum(p, free)
    d = p.ambient_rank
    matrix = [list(r) for r in lat.identity(d)] + [[0] * d for _ in range(k)]
    return MonoidHom(p, q, matrix)


def listed_instances() -> dict[str, MonoidHom]:
    from .monoid import integers, natural_numbers

    n = natural_numbers(1)
    nz = direct_sum(n, integers(1))
    return {
        "N->N+Z": MonoidHom(n, nz, [[1], [0]]),
        "N-id": MonoidHom(n, n, [[1]]),
        "N-times-2": MonoidHom(n, n, [[2]]),
    }


def random_instances(seed: int, count: int = 20, max_rank: int = 3) -> list[MonoidHom]:
    rng = random.Random(seed)
    return [random_unit_extension(rng, max_rank) for _ in range(count)]
