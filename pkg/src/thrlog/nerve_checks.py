"""Cellwise checks of the nerve-level isomorphisms and equivalences.

Each check builds both sides on a window, then compares them through an
explicit cell map: the map must be injective, land in the target, hit every
target cell of the window and commute with every operator present on both
sides. A target cell whose preimage exists but falls outside the source
window makes the result inconclusive rather than failed.
"""

from __future__ import annotations

from typing import Callable, Sequence

from . import lattice as lat
from . import simplicial as S
from .homology import normalized_chains, z2_equivalence_certificate
from .monoid import AffineMonoid, MonoidSet, direct_sum, group, induced_free, switching_pair
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, combine
from .simplicial import TruncatedDihedralSet, _plain, _sum

CellMap = Callable[[int, object], object]


def cell_bijection(check: str, X: TruncatedDihedralSet, Y: TruncatedDihedralSet, f: CellMap,
                   inverse: CellMap | None = None, ops: Sequence[str] = ("d", "s", "w", "t")) -> CheckReport:
    """Injectivity, windowed surjectivity and operator compatibility of ``f``."""
    N = min(X.max_degree, Y.max_degree)
    use_w = "w" in ops and X.has_w and Y.has_w
    use_t = "t" in ops and X.has_t and Y.has_t
    missing = []
    for q in range(N + 1):
        seen: dict = {}
        for x in X.cells(q):
            y = f(q, x)
            problem = None
            if not Y.member(q, y):
                problem = "image outside target"
            elif y in seen:
                problem = "not injective"
            elif "d" in ops and q >= 1 and any(f(q - 1, X.face(q, i, x)) != Y.face(q, i, y) for i in range(q + 1)):
                problem = "faces"
            elif "s" in ops and q < N and any(f(q + 1, X.degen(q, i, x)) != Y.degen(q, i, y) for i in range(q + 1)):
                problem = "degeneracies"
            elif use_w and f(q, X.w(q, x)) != Y.w(q, y):
                problem = "involution"
            elif use_t and f(q, X.t(q, x)) != Y.t(q, y):
                problem = "cyclic operator"
            if problem:
                return CheckReport(check, FAIL, {"degree": q, "cell": _plain(x), "issue": problem})
            seen[y] = x
        for y in Y.cells(q):
            if y in seen:
                continue
            x = inverse(q, y) if inverse is not None else None
            if x is not None and f(q, x) == y:
                missing.append({"degree": q, "cell": _plain(y)})
            else:
                return CheckReport(check, FAIL, {"degree": q, "cell": _plain(y), "issue": "no preimage"})
    details = {"source": X.counts(), "target": Y.counts(),
               "operators": [o for o in ops if o in ("d", "s") or (o == "w" and use_w) or (o == "t" and use_t)]}
    if missing:
        return CheckReport(check, INCONCLUSIVE, {"preimage outside window": missing[0]}, details)
    return CheckReport(check, PASS, None, details)


def _norm(c) -> int:
    return sum(abs(v) for vec in c for v in vec)


# -- products ------------------------------------------------------------------


def _splitter(d1: int):
    def f(q, cell):
        return tuple(v[:d1] for v in cell), tuple(v[d1:] for v in cell)

    def g(q, pair):
        a, b = pair
        return tuple(tuple(x) + tuple(y) for x, y in zip(a, b))

    return f, g


def check_drep4(p: AffineMonoid, r: AffineMonoid, max_degree: int, window: int) -> CheckReport:
    """Replete nerve of a sum against the product of replete nerves."""
    X = S.replete_nerve(direct_sum(p, r), max_degree, window)
    Y = S.product(S.replete_nerve(p, max_degree, window), S.replete_nerve(r, max_degree, window), window)
    f, g = _splitter(p.ambient_rank)
    return cell_bijection("drep.4", X, Y, f, g)


def check_thrlog8(p: AffineMonoid, r: AffineMonoid, max_degree: int, window: int) -> CheckReport:
    """Dihedral nerve of a sum against the product, by weight or by window."""
    f, g = _splitter(p.ambient_rank)
    pr = direct_sum(p, r)
    if p.is_sharp and r.is_sharp:
        parts = []
        wa = [a for a in p.elements(window, "l1")]
        wb = [b for b in r.elements(window, "l1")]
        for a in wa:
            for b in wb:
                if sum(map(abs, a)) + sum(map(abs, b)) > window:
                    continue
                X = S.dihedral_nerve(pr, max_degree, weight=tuple(a) + tuple(b))
                Y = S.product(S.dihedral_nerve(p, max_degree, weight=a), S.dihedral_nerve(r, max_degree, weight=b))
                parts.append(cell_bijection("thrlog.8", X, Y, f, g, ops=("d", "s", "t")))
        return combine("thrlog.8", parts, {"weights": len(parts), "mode": "weight pieces"})
    X = S.dihedral_nerve(pr, max_degree, window=window)
    Y = S.product(S.dihedral_nerve(p, max_degree, window=window), S.dihedral_nerve(r, max_degree, window=window), window)
    return cell_bijection("thrlog.8", X, Y, f, g)


# -- replete nerve as P x real nerve ---------------------------------------------


def split_replete(m: AffineMonoid, max_degree: int, window: int) -> TruncatedDihedralSet:
    """``P x N^sigma P^gp`` with the cyclic operator carried over from the replete nerve.

    A cell ``(s, (h_1, ..., h_q))`` stands for ``(s - sum h, h_1, ..., h_q)``,
    so ``t(s; h) = (s; s - sum h, h_1, ..., h_{q-1})``.
    """
    d = m.ambient_rank
    elems = [tuple(e) for e in m.elements(window, "l1")]
    base = S.constant(elems, max_degree, m.w, name="P")
    base.t = None
    gp = group(m)
    prod = S.product(base, S.real_nerve(gp, max_degree, window))

    def keep(q, c):
        s, h = c
        head = lat.sub(s, _sum(h, d))
        return sum(map(abs, head)) + _norm(h) <= window

    def t(q, c):
        s, h = c
        if q == 0:
            return c
        return s, (lat.sub(s, _sum(h, d)),) + h[:-1]

    out = S.with_cyclic(S.restrict(prod, keep, "P x real nerve"), t)
    return out


def check_dih25(m: AffineMonoid, max_degree: int, window: int) -> CheckReport:
    d = m.ambient_rank
    X = S.replete_nerve(m, max_degree, window)
    Y = split_replete(m, max_degree, window)
    rel = S.verify_relations(Y)
    if not rel.ok:
        return CheckReport("dih.25", FAIL, {"transported structure": rel.witness})

    def f(q, x):
        return _sum(x, d), x[1:]

    def g(q, y):
        s, h = y
        return (lat.sub(s, _sum(h, d)),) + h

    return cell_bijection("dih.25", X, Y, f, g)


# -- the pushout (P (x) Delta^1) (+)_{i# i* P} P ------------------------------------


def tensor_as_monoid_set(m: AffineMonoid, cells: Sequence[tuple]) -> tuple[MonoidSet, dict]:
    """Degree-q cells as elements of a free ``i_* P``-set.

    The orbit label is the middle block ``(x_1, ..., x_q)``; the acting
    coordinates are ``(x_0, x_{q+1})``.
    """
    free = induced_free(m)
    labels = sorted({c[1:-1] for c in cells})
    present = set(labels)
    swaps = []
    for lab in labels:
        other = tuple(m.w(v) for v in reversed(lab))
        if other != lab and other in present and lab < other:
            swaps.append((lab, other))
    elements = {c: (c[1:-1], tuple(c[0]) + tuple(c[-1])) for c in cells}
    return MonoidSet(free, tuple(labels), tuple(swaps)), elements


def check_drep22(m: AffineMonoid, max_degree: int, window: int) -> CheckReport:
    """Degreewise base change of ``P (x) Delta^1_sigma`` along the counit is the dihedral nerve."""
    from .monoid import exactify

    d = m.ambient_rank
    counit = exactify(m).theta
    T = S.tensor_interval(m, max_degree, window=window)
    nerve = S.dihedral_nerve(m, max_degree, window=window)

    def pushed(q, x):
        return (x[1:-1], tuple(lat.add(x[0], x[-1])))

    def to_nerve(q, e):
        lab, s = e
        return (tuple(s),) + tuple(reversed(lab))

    for q in range(max_degree + 1):
        mset, elems = tensor_as_monoid_set(m, T.cells(q))
        based = mset.base_change(counit)
        for x, e in elems.items():
            wx = T.w(q, x)
            if wx in elems and mset.involve(e) != elems[wx]:
                return CheckReport("drep.2.2", FAIL, {"degree": q, "cell": _plain(x), "issue": "not an equivariant i_*P-set"})
            be = mset.base_change_element(counit, e)
            if be != pushed(q, x):
                return CheckReport("drep.2.2", FAIL, {"degree": q, "cell": _plain(x), "issue": "base change"})
            if based.involve(be) != mset.base_change_element(counit, mset.involve(e)):
                return CheckReport("drep.2.2", FAIL, {"degree": q, "cell": _plain(x), "issue": "base change not equivariant"})

    # the quotient map itself must be a real simplicial map onto the nerve formulas
    bad = S.SimplicialMap(T, nerve, lambda q, x: to_nerve(q, pushed(q, x))).violations(limit=1, check_t=False)
    if bad:
        return CheckReport("drep.2.2", FAIL, bad[0])

    pushout_cells = []
    for q in range(max_degree + 1):
        seen = {}
        for x in T.cells(q):
            seen.setdefault(pushed(q, x), x)
        pushout_cells.append(seen)

    def rep(q, e):
        return pushout_cells[q].get(e)

    P = S.TruncatedDihedralSet(
        max_degree, [list(c) for c in pushout_cells],
        lambda q, i, e: pushed(q - 1, T.face(q, i, rep(q, e))),
        lambda q, i, e: pushed(q + 1, T.degen(q, i, rep(q, e))),
        lambda q, e: pushed(q, T.w(q, rep(q, e))),
        None, name="pushout",
    )
    for q in range(max_degree + 1):
        for x in T.cells(q):
            e = pushed(q, x)
            if q >= 1 and any(pushed(q - 1, T.face(q, i, x)) != P.face(q, i, e) for i in range(q + 1)):
                return CheckReport("drep.2.2", FAIL, {"degree": q, "cell": _plain(x), "issue": "faces not well defined on the pushout"})
            if P.w(q, e) != pushed(q, T.w(q, x)):
                return CheckReport("drep.2.2", FAIL, {"degree": q, "cell": _plain(x), "issue": "involution not well defined"})

    def back(q, y):
        return (y[1:][::-1], y[0])

    out = cell_bijection("drep.2.2", P, nerve, to_nerve, back, ops=("d", "s", "w"))
    return CheckReport(out.check, out.status, out.witness, dict(out.details, pushout_cells=P.counts()))


# -- the monoid-set identity (P amalg P) (+)_P Q = Q amalg Q -------------------------


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def check_drep6(h, window: int) -> CheckReport:
    """``(P amalg P) (+)_P Q -> Q amalg Q`` on a window, via union-find on ``(P amalg P) x Q``."""
    p, q = h.source, h.target
    left = switching_pair(p)
    based = left.base_change(h)
    if based.orbits != switching_pair(q).orbits or based.swaps != switching_pair(q).swaps:
        return CheckReport("drep.6", FAIL, {"issue": "orbit structure changed"})
    ps = [tuple(x) for x in p.elements(window, "l1")]
    qs = [tuple(y) for y in q.elements(window, "l1")]
    pset, qset = set(ps), set(qs)
    uf = _UnionFind()
    size = {x: sum(map(abs, x)) for x in ps + qs}
    nodes = [((lab, a), b) for lab in left.orbits for a in ps for b in qs if size[a] + size[b] <= window]
    node_set = set(nodes)
    for (lab, a), b in nodes:
        uf.find(((lab, a), b))
        for g in p.nonunit_generators + p.unit_generators:
            moved = ((lab, tuple(lat.add(a, g))), b)
            # (a + g, b) ~ (a, b + h(g))
            if moved in node_set and ((lab, a), tuple(lat.add(b, h(g)))) in node_set:
                uf.union(moved, ((lab, a), tuple(lat.add(b, h(g)))))

    def image(node):
        (lab, a), b = node
        return lab, tuple(lat.add(h(a), b))

    classes: dict = {}
    for node in nodes:
        classes.setdefault(uf.find(node), set()).add(image(node))
        # equivariance of the comparison map
        lab, a = node[0]
        inv = (left._partner.get(lab, lab), tuple(p.w(a)))
        if image((inv, tuple(q.w(node[1])))) != (based._partner.get(lab, lab), tuple(q.w(image(node)[1]))):
            return CheckReport("drep.6", FAIL, {"node": _plain(node), "issue": "not equivariant"})
    by_image: dict = {}
    for root, imgs in classes.items():
        if len(imgs) != 1:
            return CheckReport("drep.6", FAIL, {"class": _plain(root), "issue": "map not constant on a class"})
        by_image.setdefault(next(iter(imgs)), []).append(root)
    hit = set(by_image)
    for lab in based.orbits:
        for y in qs:
            if size[y] <= window and (lab, y) not in hit:
                return CheckReport("drep.6", FAIL, {"element": _plain((lab, y)), "issue": "not hit"})
    split = [k for k, v in by_image.items() if len(v) > 1]
    details = {"classes": len(classes), "orbits": based.free_orbit_count}
    if split:
        return CheckReport("drep.6", INCONCLUSIVE, {"unjoined in window": _plain(split[0])}, details)
    return CheckReport("drep.6", PASS, None, details)


# -- the repletion resolution --------------------------------------------------------


def check_dih15(m: AffineMonoid, max_degree: int, window: int) -> CheckReport:
    """Maps out of the resolution, and the fixed points of its subdivision."""
    d = m.ambient_rank
    z = (0,) * d
    Q = S.repletion_resolution(m, max_degree, window)
    ex_cells = sorted({(c[0], c[1]) for c in Q.cells(0)})
    ex_w = lambda c: (tuple(m.w(c[0])), tuple(lat.sub(m.w(c[0]), m.w(c[1]))))
    E = S.constant(ex_cells, max_degree, ex_w, name="exactification")
    E.t = None
    gp = group(m)
    bar_degen = S._bar_degen(d)
    target = S.TruncatedDihedralSet(
        max_degree, [[] for _ in range(max_degree + 1)],
        lambda q, i, c: (c[0], S._bar_face(q, i, c[1])),
        lambda q, i, c: (c[0], bar_degen(q, i, c[1])),
        lambda q, c: (tuple(m.w(c[0])), tuple(tuple(m.w(v)) for v in reversed(c[1]))),
        member=lambda q, c: m.contains(c[0]) and len(c[1]) == q and all(gp.coords(v) is not None for v in c[1]),
        closed=False, name="P x real nerve",
    )

    into = S.SimplicialMap(E, Q, lambda q, c: (c[0],) + (c[1],) * (q + 1), "diagonal")
    out = S.SimplicialMap(Q, target, lambda q, c: (c[0], tuple(lat.sub(c[k + 2], c[k + 1]) for k in range(q))), "differences")
    for label, f in (("into resolution", into), ("to P x real nerve", out)):
        bad = f.violations(limit=1, check_t=False)
        if bad:
            return CheckReport("dih.15", FAIL, {"map": label, **bad[0]})
    for q in range(max_degree + 1):
        for c in E.cells(q):
            if out(q, into(q, c)) != (c[0], (z,) * q):
                return CheckReport("dih.15", FAIL, {"map": "composite", "cell": _plain(c)})

    half = (max_degree - 1) // 2
    F = S.fixed_points(S.segal_subdivide(Q, half))
    fixed_x = [tuple(x) for x in m.elements(window, "l1") if tuple(m.w(x)) == tuple(x)]
    gs = S._entries(p for p in lat.l1_ball(d, window) if m.coords(p) is not None)
    for q in range(half + 1):
        described = set()
        for x in fixed_x:
            for g in S._tuples(q + 1, gs, window):
                wx = m.w(x)
                cell = (x,) + g + tuple(lat.sub(wx, m.w(v)) for v in reversed(g))
                if _norm(cell) <= window:
                    described.add(cell)
        if described != set(F.cells(q)):
            extra = sorted(described ^ set(F.cells(q)))[:1]
            return CheckReport("dih.15", FAIL, {"degree": q, "fixed-point description differs at": _plain(extra)})

    # fixed cells are (x, g_q, ..., g_0) in P^{Z/2} x E P^gp, read off the first half
    EP = S.TruncatedDihedralSet(
        half, [sorted({(c[0],) + tuple(reversed(c[1 : q + 2])) for c in F.cells(q)}) for q in range(half + 1)],
        Q.face, Q.degen, None, None, name="fixed x E P^gp",
    )
    proj = S.SimplicialMap(F, EP, lambda q, c: (c[0],) + tuple(reversed(c[1 : q + 2])))
    bad = proj.violations(limit=1)
    if bad:
        return CheckReport("dih.15", FAIL, {"map": "fixed points to P x E P^gp", **bad[0]})
    if len(set(proj(q, c) for q in range(half + 1) for c in F.cells(q))) != sum(F.counts()):
        return CheckReport("dih.15", FAIL, {"map": "fixed points to P x E P^gp", "issue": "not injective"})
    return CheckReport("dih.15", PASS, None, {"resolution": Q.counts(), "fixed": F.counts()})


# -- forgetting the involution ------------------------------------------------------


def _loday_cyclic(q: int, x: tuple, op: str, i: int = 0):
    """Reference cyclic bar operators, written from scratch."""
    if op == "d":
        if i == q:
            return (tuple(a + b for a, b in zip(x[q], x[0])),) + x[1:q]
        return x[:i] + (tuple(a + b for a, b in zip(x[i], x[i + 1])),) + x[i + 2 :]
    if op == "s":
        return x[: i + 1] + (tuple(0 for _ in x[0]),) + x[i + 1 :]
    return (x[q],) + x[:q]


def check_drep3(m: AffineMonoid, max_degree: int, window: int) -> CheckReport:
    """Without ``w`` the dihedral (replete) nerve is the cyclic (replete) nerve."""
    d = m.ambient_rank
    gp = group(m)
    parts = []
    for name, X, ref_cells in (
        ("dihedral", S.dihedral_nerve(m, max_degree, window=window),
         lambda q: [c for c in S._tuples(q + 1, S._entries(p for p in lat.l1_ball(d, window) if m.contains(p)), window)]),
        ("replete", S.replete_nerve(m, max_degree, window),
         lambda q: [c for c in S.dihedral_nerve(gp, max_degree, window=window).cells(q) if m.contains(_sum(c, d))]),
    ):
        plain = S.without_involution(X)
        rel = S.verify_relations(plain)
        if not rel.ok:
            return CheckReport("drep.3", FAIL, {"nerve": name, "relations": rel.witness})
        for q in range(max_degree + 1):
            if set(X.cells(q)) != set(ref_cells(q)):
                return CheckReport("drep.3", FAIL, {"nerve": name, "degree": q, "issue": "cells differ"})
            for x in X.cells(q):
                ok = all(X.face(q, i, x) == _loday_cyclic(q, x, "d", i) for i in range(q + 1) if q)
                ok = ok and all(X.degen(q, i, x) == _loday_cyclic(q, x, "s", i) for i in range(q + 1))
                ok = ok and X.t(q, x) == _loday_cyclic(q, x, "t")
                if not ok:
                    return CheckReport("drep.3", FAIL, {"nerve": name, "degree": q, "cell": _plain(x)})
        parts.append(CheckReport("drep.3", PASS))
    return combine("drep.3", parts, {"window": window})


# -- subdivision of the interval ------------------------------------------------------


def sd_interval_map(q: int, a: tuple) -> tuple:
    """``sd(Delta^1_sigma)_q -> (Delta^1 v_1 Delta^1)_q`` via vertex pairs ``(a_{q-j}, a_{q+1+j})``."""
    pairs = [(a[q - j], a[q + 1 + j]) for j in range(q + 1)]
    seq = tuple(int(p == (0, 1)) for p in pairs)
    if all(seq):
        return ("glue", seq)
    return ("L" if (0, 0) in pairs else "R", seq)


def check_sd_interval(max_degree: int) -> CheckReport:
    X = S.segal_subdivide(S.delta1_sigma(2 * max_degree + 1))
    Y = S.glued_intervals(max_degree)
    return cell_bijection("drep.1-sd", X, Y, sd_interval_map, ops=("d", "s", "w"))


# -- sum maps and the Z/2 certificate ---------------------------------------------------


def check_sum_maps(m: AffineMonoid, max_degree: int, window: int) -> CheckReport:
    parts = []
    for X in (S.dihedral_nerve(m, max_degree, window=window), S.replete_nerve(m, max_degree, window),
              S.tensor_interval(m, max_degree, window=window)):
        f = S.sum_map(X)
        bad = f.violations(limit=1)
        parts.append(CheckReport("drep.2.1", FAIL, {"nerve": X.name, **bad[0]}) if bad else CheckReport("drep.2.1", PASS))
    return combine("drep.2.1", parts, {"nerves": 3})


def weight_orbits(m: AffineMonoid, bound: int) -> list[list[tuple[int, ...]]]:
    """Weights of l1 norm <= bound, grouped into involution orbits."""
    seen, out = set(), []
    for x in sorted(m.elements(bound, "l1"), key=lambda v: (sum(map(abs, v)), v)):
        x = tuple(x)
        if x in seen:
            continue
        orbit = S.weight_orbit(m, x)
        seen.update(orbit)
        out.append(orbit)
    return out


def check_drep1(m: AffineMonoid, max_weight: int, degree: int) -> CheckReport:
    """Sum collapse ``P (x) Delta^1_sigma -> P`` per weight orbit."""
    depth = 2 * degree + 3
    parts = []
    for orbit in weight_orbits(m, max_weight):
        X = S.union(*(S.tensor_interval(m, depth, weight=wt) for wt in orbit))
        r = z2_equivalence_certificate(S.sum_map(X), degree)
        parts.append(CheckReport("drep.1", r.status, {"weight": list(orbit), **(r.witness or {})} if r.witness else None))
    return combine("drep.1", parts, {"weights": len(parts), "degree": degree})


def thrlog10_tables(max_weight: int, degree: int) -> list[dict]:
    from .monoid import natural_numbers

    n = natural_numbers(1)
    out = []
    for wt in range(max_weight + 1):
        X = S.dihedral_nerve(n, 2 * degree + 3, weight=(wt,))
        under = normalized_chains(X, top=degree + 1).table(degree)
        fixed = normalized_chains(S.fixed_points(S.segal_subdivide(X, degree + 1))).table(degree)
        out.append({"weight": wt, "underlying": under, "fixed": fixed})
    return out


def check_thrlog10(max_weight: int = 4, degree: int = 3) -> CheckReport:
    """Weight ``d`` pieces of the dihedral nerve of N: a point for d = 0, else a circle with S^0 fixed points."""
    tables = thrlog10_tables(max_weight, degree)
    for t in tables:
        circle = t["weight"] > 0
        want_u = [(1, ())] + [(1 if (circle and q == 1) else 0, ()) for q in range(1, degree + 1)]
        want_f = [(2 if circle else 1, ())] + [(0, ())] * degree
        if list(t["underlying"].groups) != want_u or list(t["fixed"].groups) != want_f:
            return CheckReport("thrlog.10", FAIL, {"weight": t["weight"], "underlying": t["underlying"].to_dict(),
                                                   "fixed": t["fixed"].to_dict()})
    return CheckReport("thrlog.10", PASS, None, {
        str(t["weight"]): {"underlying": t["underlying"].betti(), "fixed": t["fixed"].betti()} for t in tables
    })
