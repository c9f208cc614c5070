"""Registry of verification checks and a deterministic runner."""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

from . import lattice as lat
from . import nerve_checks as NC
from . import simplicial as S
from .cube import pn_invariance_check
from .monoid import (
    AffineMonoid,
    MonoidHom,
    direct_sum,
    exactify,
    face_localization,
    identity_hom,
    integers,
    natural_numbers,
    p_zero,
    swap_matrix,
)
from .report import FAIL, INCONCLUSIVE, PASS, PRECONDITION_FAILED, CheckReport, combine
from .strict import check_strict3_squares, check_unit_base_change, is_chart_surjective, listed_instances, random_instances

FORMATS = ("json", "table")


@dataclass(frozen=True)
class Config:
    max_degree: int = 4
    weight_window: int = 3
    coord_window: int = 5
    rank_cap: int = 4
    seed: int = 0
    format: str = "json"
    threads: int = 1
    random_instances: int = 20

    def __post_init__(self):
        for name in ("max_degree", "weight_window", "coord_window", "rank_cap", "threads"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.random_instances < 0:
            raise ValueError("random_instances must be non-negative")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("format")
        out.pop("threads")
        return out


@dataclass(frozen=True)
class CheckDescriptor:
    id: str
    anchor: str
    params: str
    expected: str
    run: Callable[[Config], CheckReport]


def _monoids() -> dict[str, AffineMonoid]:
    return {"N": natural_numbers(1), "Z": integers(1), "N2-swap": natural_numbers(2, swap_matrix(2))}


def _named(check: str, parts: dict[str, CheckReport], extra: dict | None = None) -> CheckReport:
    rep = combine(check, list(parts.values()), dict(extra or {}, instances={k: v.status for k, v in parts.items()}))
    if rep.status != PASS:
        bad = next(k for k, v in parts.items() if v.status == rep.status)
        return CheckReport(check, rep.status, {"instance": bad, **(parts[bad].witness or {})}, rep.details)
    return rep


# -- individual runners --------------------------------------------------------------


def run_relations_nerves(cfg: Config) -> CheckReport:
    n, n2 = natural_numbers(1), natural_numbers(2, swap_matrix(2))
    top = 2 * cfg.max_degree + 1
    parts = {}
    for d in range(cfg.max_degree + 1):
        parts[f"dihedral N weight {d}"] = S.verify_relations(S.dihedral_nerve(n, top, weight=(d,)))
    parts["replete N"] = S.verify_relations(S.replete_nerve(n, cfg.max_degree + 1, cfg.weight_window))
    parts["replete Z"] = S.verify_relations(S.replete_nerve(integers(1), cfg.max_degree, cfg.weight_window))
    parts["replete N2-swap"] = S.verify_relations(S.replete_nerve(n2, cfg.max_degree, cfg.weight_window - 1))
    for orbit in NC.weight_orbits(n2, 2):
        parts[f"dihedral N2-swap weight {orbit}"] = S.verify_relations(
            S.union(*(S.dihedral_nerve(n2, cfg.max_degree + 1, weight=w) for w in orbit)))
    return _named("dih.13", parts)


def run_relations_tensor(cfg: Config) -> CheckReport:
    n, n2 = natural_numbers(1), natural_numbers(2, swap_matrix(2))
    parts = {}
    for d in range(min(cfg.weight_window, 3) + 1):
        parts[f"N weight {d}"] = S.verify_relations(S.tensor_interval(n, 2 * cfg.max_degree + 1, weight=(d,)))
    for orbit in NC.weight_orbits(n2, 2):
        parts[f"N2-swap weight {orbit}"] = S.verify_relations(
            S.union(*(S.tensor_interval(n2, cfg.max_degree + 1, weight=w) for w in orbit)))
    parts["Delta1_sigma"] = S.verify_relations(S.delta1_sigma(cfg.max_degree + 1))
    return _named("drep.5", parts)


def run_drep1(cfg: Config) -> CheckReport:
    deg = max(cfg.max_degree - 1, 1)
    weights = min(cfg.weight_window, 3)
    ms = _monoids()
    parts = {k: NC.check_drep1(ms[k], weights, deg) for k in ("N", "N2-swap")}
    return _named("drep.1", parts, {"degree": deg, "max_weight": weights})


def run_sd_interval(cfg: Config) -> CheckReport:
    return NC.check_sd_interval(cfg.max_degree)


def _per_monoid(check: str, fn, cfg: Config, names=("N", "Z", "N2-swap"), zero: bool = False) -> CheckReport:
    ms = _monoids()
    if zero:
        ms["zero"] = AffineMonoid(0, ())
        names = tuple(names) + ("zero",)
    return _named(check, {k: fn(ms[k], cfg.max_degree, cfg.weight_window) for k in names},
                  {"window": cfg.weight_window, "degree": cfg.max_degree})


def run_sum_maps(cfg: Config) -> CheckReport:
    return _per_monoid("drep.2.1", NC.check_sum_maps, cfg)


def run_drep22(cfg: Config) -> CheckReport:
    return _per_monoid("drep.2.2", NC.check_drep22, cfg, zero=True)


def run_drep3(cfg: Config) -> CheckReport:
    return _per_monoid("drep.3", NC.check_drep3, cfg)


def run_dih15(cfg: Config) -> CheckReport:
    return _per_monoid("dih.15", NC.check_dih15, cfg)


def run_dih25(cfg: Config) -> CheckReport:
    return _per_monoid("dih.25", NC.check_dih25, cfg)


def _pairs():
    ms = _monoids()
    return {f"{a} x {b}": (ms[a], ms[b]) for a, b in itertools.combinations_with_replacement(("N", "N2-swap"), 2)}


def run_drep4(cfg: Config) -> CheckReport:
    parts = {k: NC.check_drep4(a, b, cfg.max_degree, cfg.weight_window) for k, (a, b) in _pairs().items()}
    return _named("drep.4", parts, {"window": cfg.weight_window, "degree": cfg.max_degree})


def run_thrlog8(cfg: Config) -> CheckReport:
    pairs = dict(_pairs())
    ms = _monoids()
    pairs["Z x N"] = (ms["Z"], ms["N"])
    parts = {k: NC.check_thrlog8(a, b, cfg.max_degree, cfg.weight_window) for k, (a, b) in pairs.items()}
    return _named("thrlog.8", parts, {"window": cfg.weight_window, "degree": cfg.max_degree})


def run_drep6(cfg: Config) -> CheckReport:
    ms = _monoids()
    n = ms["N"]
    nz = direct_sum(n, ms["Z"])
    homs = {
        "N id": identity_hom(n),
        "N -> N + Z": MonoidHom(n, nz, [[1], [0]]),
        "N2-swap id": identity_hom(ms["N2-swap"]),
    }
    return _named("drep.6", {k: NC.check_drep6(h, cfg.weight_window) for k, h in homs.items()},
                  {"window": cfg.weight_window})


def run_thrlog10(cfg: Config) -> CheckReport:
    return NC.check_thrlog10(4, max(cfg.max_degree - 1, 1))


def exactification_samples(m: AffineMonoid, count: int, rng: random.Random, radius: int = 6) -> CheckReport:
    """``w^2 = id`` on the carrier and ``theta^ex . eta = theta`` on random samples."""
    ex = exactify(m)
    d = m.ambient_rank
    elems = m.elements(radius, "l1")
    gp = [v for v in lat.l1_ball(d, radius) if m.coords(v) is not None]
    wmat = ex.carrier.involution_matrix
    if lat.matmul(wmat, wmat) != lat.identity(2 * d):
        return CheckReport("dih.14", FAIL, {"issue": "carrier involution is not of order 2"})
    for _ in range(count):
        x, y = rng.choice(elems), rng.choice(gp)
        c = tuple(x) + tuple(y)
        if ex.carrier.w(ex.carrier.w(c)) != c:
            return CheckReport("dih.14", FAIL, {"carrier element": list(c)})
        if not ex.carrier.contains(ex.carrier.w(c)):
            return CheckReport("dih.14", FAIL, {"involution leaves carrier at": list(c)})
        a, b = rng.choice(elems), rng.choice(elems)
        pair = tuple(a) + tuple(b)
        if not ex.triangle_commutes(pair):
            return CheckReport("dih.14", FAIL, {"triangle fails at": list(pair)})
    return CheckReport("dih.14", PASS, None, {"samples": count})


def run_dih14(cfg: Config) -> CheckReport:
    rng = random.Random(cfg.seed)
    return _named("dih.14", {k: exactification_samples(m, 100, rng) for k, m in _monoids().items()}, {"seed": cfg.seed})


def _strict_instances(cfg: Config) -> dict[str, MonoidHom]:
    out = dict(listed_instances())
    for k, h in enumerate(random_instances(cfg.seed, cfg.random_instances)):
        out[f"random-{k}"] = h
    return out


def _strict_run(check: str, fn, cfg: Config) -> CheckReport:
    parts, excluded = {}, []
    for name, theta in _strict_instances(cfg).items():
        r = fn(theta, cfg.coord_window)
        if r.status == PRECONDITION_FAILED:
            excluded.append(name)
            continue
        parts[name] = CheckReport(check, r.status, r.witness, r.details)
    return _named(check, parts, {"excluded (precondition failed)": excluded, "seed": cfg.seed,
                                 "window": cfg.coord_window})


def run_strict2(cfg: Config) -> CheckReport:
    return _strict_run("strict.2", check_unit_base_change, cfg)


def run_strict3(cfg: Config) -> CheckReport:
    return _strict_run("strict.3", lambda t, w: check_strict3_squares(t, w, max(cfg.rank_cap, 6)), cfg)


def faces(m: AffineMonoid) -> list[tuple]:
    """Generator sets of all faces of M, from intersections of facets."""
    gens = list(zip(m.generators, m._gen_coords))
    found = set()
    for k in range(len(m.facets) + 1):
        for sub in itertools.combinations(m.facets, k):
            found.add(tuple(g for g, c in gens if all(sum(a * b for a, b in zip(n, c)) == 0 for n in sub)))
    return sorted(found)


def run_descent3(cfg: Config) -> CheckReport:
    """Charts restrict surjectively to every face localization; a doubling map does not."""
    parts = {}
    for name, p in (("N", natural_numbers(1)), ("N2", natural_numbers(2)), ("P0(2)", p_zero(2))):
        homs = []
        for face in faces(p):
            loc = face_localization(p, face)
            homs.append(MonoidHom(p, loc, lat.identity(p.ambient_rank)))
        ok = is_chart_surjective(p, homs)
        parts[name] = CheckReport("descent.3", PASS if ok else FAIL, None if ok else {"chart": name})
    n = natural_numbers(1)
    doubled = is_chart_surjective(n, [MonoidHom(n, n, [[2]])])
    parts["N times 2 (must fail)"] = CheckReport("descent.3", FAIL if doubled else PASS)
    return _named("descent.3", parts)


def run_mot1_n1(cfg: Config) -> CheckReport:
    return pn_invariance_check(1, 2, cfg.max_degree, threads=1)


def run_mot1_n2(cfg: Config) -> CheckReport:
    return pn_invariance_check(2, 1, max(cfg.max_degree - 1, 1), threads=1)


def run_mot1_control(cfg: Config) -> CheckReport:
    inner = pn_invariance_check(1, 0, cfg.max_degree, negative_control=True)
    status = PASS if inner.status == FAIL else FAIL
    return CheckReport("mot.1-control", status, {"control outcome": inner.status, **(inner.witness or {})})


REGISTRY: dict[str, CheckDescriptor] = {
    d.id: d
    for d in (
        CheckDescriptor("dih.13", "N^drep P = N^di P^gp x_{P^gp} P; dihedral relations on nerve cells",
                        "N weights 0..N, replete N/Z/N2-swap on a window", PASS, run_relations_nerves),
        CheckDescriptor("drep.5", "(P (x) Delta^1)_q = (+)_{i in Delta^1_q} P, w(x_0..x_{q+1}) = (w x_{q+1}..w x_0)",
                        "N weights 0..3, N2-swap", PASS, run_relations_tensor),
        CheckDescriptor("drep.1", "P (x) Delta^1_sigma -> P, (x_0..x_q) -> x_0+..+x_q, is a Z/2-weak equivalence",
                        "N, N2-swap; weights <= 3", PASS, run_drep1),
        CheckDescriptor("drep.1-sd", "sd_sigma(Delta^1_sigma) = Delta^1 v_{1} Delta^1, switching involution",
                        "degrees <= N", PASS, run_sd_interval),
        CheckDescriptor("drep.2.1", "N^di P -> P, (x_0..x_q) -> x_0+..+x_q, is a map of dihedral sets",
                        "N, Z, N2-swap", PASS, run_sum_maps),
        CheckDescriptor("drep.2.2", "(P (x) Delta^1_sigma) (+)_{i# i* P} P = N^di P via (x,y) -> (x,0,..,0,y)",
                        "N, Z, N2-swap, 0", PASS, run_drep22),
        CheckDescriptor("drep.3", "forgetting w: N^di P is the cyclic nerve, N^drep P the replete cyclic nerve",
                        "N, Z, N2-swap", PASS, run_drep3),
        CheckDescriptor("drep.4", "N^drep(P x Q) = N^drep P x N^drep Q", "pairs from N, N2-swap", PASS, run_drep4),
        CheckDescriptor("drep.6", "(P amalg P) (+)_P Q = Q amalg Q, switching involution",
                        "N id, N -> N+Z, N2-swap id", PASS, run_drep6),
        CheckDescriptor("dih.14", "w(x,y) = (w x, w x - w y); theta^ex . eta = theta",
                        "N, Z, N2-swap; 100 samples", PASS, run_dih14),
        CheckDescriptor("dih.15", "Q = P x E P^gp, (x,g_0..g_q) -> (w x, w x - w g_q, .., w x - w g_0); fixed points of sd Q",
                        "N, Z, N2-swap", PASS, run_dih15),
        CheckDescriptor("dih.25", "N^drep P = P x N^sigma P^gp", "N, Z, N2-swap", PASS, run_dih25),
        CheckDescriptor("thrlog.8", "N^di(P (+) Q) = N^di P x N^di Q", "pairs from N, N2-swap; Z x N", PASS, run_thrlog8),
        CheckDescriptor("thrlog.10", "weight d pieces of N^di N: point for d = 0, S^sigma for d >= 1",
                        "weights 0..4", PASS, run_thrlog10),
        CheckDescriptor("strict.2", "P (+)_{P*} Q* -> Q is an isomorphism when P/P* -> Q/Q* is",
                        "listed + seeded random instances", PASS, run_strict2),
        CheckDescriptor("strict.3", "cocartesian squares for exactified base change; L (+)_{i*P} i*Q = M",
                        "listed + seeded random instances", PASS, run_strict3),
        CheckDescriptor("descent.3", "P -> Gamma(U, M_U)/Gamma(U, O_U^*) surjective for every open U",
                        "face localizations of N, N2, P0(2)", PASS, run_descent3),
        CheckDescriptor("mot.1-n1", "tcofib(Phi(-; x)) = 0 for every x", "n = 1, |x| <= 2", PASS, run_mot1_n1),
        CheckDescriptor("mot.1-n2", "tcofib(Phi(-; x)) = 0 for every x", "n = 2, |x_i| <= 1", PASS, run_mot1_n2),
        CheckDescriptor("mot.1-control", "collapsing the 0-direction breaks tcofib(Phi(-; 0)) = 0",
                        "n = 1, x = 0, negative control", PASS, run_mot1_control),
    )
}


def _run_one(check_id: str, cfg: Config) -> dict:
    desc = REGISTRY[check_id]
    rep = desc.run(cfg)
    out = rep.to_dict()
    out["check"] = desc.id
    out["anchor"] = desc.anchor
    out["params"] = desc.params
    out["expected"] = desc.expected
    return out


def resolve(ids) -> list[str]:
    if isinstance(ids, str):
        ids = [ids]
    if not ids or "all" in ids:
        return sorted(REGISTRY)
    unknown = [i for i in ids if i not in REGISTRY]
    if unknown:
        raise KeyError(f"unknown check id(s): {', '.join(unknown)}")
    return sorted(set(ids))


def run(ids="all", config: Config | None = None) -> list[dict]:
    """Run checks and return their report entries ordered by id."""
    cfg = config or Config()
    chosen = resolve(ids)
    if cfg.threads > 1 and len(chosen) > 1:
        with ProcessPoolExecutor(cfg.threads) as pool:
            rows = list(pool.map(_run_one, chosen, [cfg] * len(chosen)))
    else:
        rows = [_run_one(i, cfg) for i in chosen]
    return sorted(rows, key=lambda r: r["check"])


def summary(rows: list[dict]) -> dict:
    counts = {s: 0 for s in (PASS, FAIL, INCONCLUSIVE, PRECONDITION_FAILED)}
    for r in rows:
        counts[r["status"]] += 1
    return counts


def report_json(rows: list[dict], config: Config) -> str:
    return json.dumps({"config": config.to_dict(), "checks": rows, "summary": summary(rows)}, sort_keys=True, indent=2)


def report_table(rows: list[dict]) -> str:
    width = max([len(r["check"]) for r in rows] + [5])
    lines = [f"{'check':<{width}}  {'status':<19}  anchor"]
    for r in rows:
        lines.append(f"{r['check']:<{width}}  {r['status']:<19}  {r['anchor']}")
    s = summary(rows)
    lines.append(", ".join(f"{k}: {v}" for k, v in s.items()))
    return "\n".join(lines)
