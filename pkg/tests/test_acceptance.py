"""Acceptance criteria, one test each; the summary lists a verdict line per criterion."""

import random
import subprocess
import sys
import time

from conftest import ACCEPTANCE

from thrlog import lattice as lat
from thrlog import nerve_checks as NC
from thrlog import simplicial as S
from thrlog.cube import pn_invariance_check
from thrlog.monoid import integers, natural_numbers, swap_matrix
from thrlog.report import PASS
from thrlog.snf import invariant_factors, smith_normal_form, unimodular_inverse
from thrlog.suite import Config, run_dih14, run_strict2, run_strict3

N1, Z1, N2S = natural_numbers(1), integers(1), natural_numbers(2, swap_matrix(2))


def record(n, title, ok, note=""):
    ACCEPTANCE[n] = (title, bool(ok), note)
    print(f"[{'PASS' if ok else 'FAIL'}] {n}. {title} {note}".rstrip())
    assert ok, note


def test_1_relations():
    t = time.perf_counter()
    reports = [S.verify_relations(S.dihedral_nerve(N1, 9, weight=(d,))) for d in range(5)]
    reports.append(S.verify_relations(S.replete_nerve(N1, 5, 3)))
    reports += [S.verify_relations(S.tensor_interval(N1, 9, weight=(d,))) for d in range(4)]
    elapsed = time.perf_counter() - t
    bad = [r.to_dict() for r in reports if r.status != PASS]
    record(1, "dihedral relations on nerves", not bad and elapsed < 30, f"{elapsed:.1f}s" + (f" {bad[0]}" if bad else ""))


def test_2_weight_pieces_of_n():
    t = time.perf_counter()
    rows = NC.thrlog10_tables(4, 3)
    ok = True
    for r in rows:
        circle = r["weight"] > 0
        ok &= r["underlying"].betti() == ([1, 1, 0, 0] if circle else [1, 0, 0, 0])
        ok &= r["fixed"].betti() == ([2, 0, 0, 0] if circle else [1, 0, 0, 0])
        ok &= all(not tors for _, tors in r["underlying"].groups + r["fixed"].groups)
    elapsed = time.perf_counter() - t
    record(2, "weight pieces: point, then circle with two fixed points", ok and elapsed < 60, f"{elapsed:.1f}s")


def test_3_sum_collapse_certificate():
    reps = {name: NC.check_drep1(m, 3, 3) for name, m in (("N", N1), ("N2-swap", N2S))}
    bad = {k: r.witness for k, r in reps.items() if r.status != PASS}
    record(3, "sum collapse is certified through degree 3", not bad, str(bad) if bad else "weights <= 3")


def test_4_cellwise_isomorphisms():
    results = {}
    for name, m in (("N", N1), ("Z", Z1), ("N2-swap", N2S)):
        results[f"product {name} x N"] = NC.check_drep4(m, N1, 5, 4)
        results[f"split replete {name}"] = NC.check_dih25(m, 5, 4)
        results[f"pushout {name}"] = NC.check_drep22(m, 5, 4)
    bad = {k: r.status for k, r in results.items() if r.status != PASS}
    record(4, "cellwise bijections commuting with d, s, w, t", not bad, str(bad) if bad else "window 4, degree 5")


def test_5_unit_base_change_and_squares():
    cfg = Config()
    reps = [run_strict2(cfg), run_strict3(cfg)]
    excluded = sorted({n for r in reps for n in r.details["excluded (precondition failed)"]})
    bad = [r.to_dict() for r in reps if r.status != PASS]
    record(5, "unit base change and exactified squares", not bad,
           f"excluded: {excluded}" + (f" {bad[0]}" if bad else ""))


def test_6_phi_cubes():
    t = time.perf_counter()
    one, two = pn_invariance_check(1, 2, 4), pn_invariance_check(2, 1, 3)
    control = pn_invariance_check(1, 0, 4, negative_control=True)
    elapsed = time.perf_counter() - t
    ok = one.status == PASS and two.status == PASS and control.status != PASS and elapsed < 300
    record(6, "Phi cubes acyclic; collapsed control is not", ok,
           f"{elapsed:.1f}s, control witness {control.witness}")


def test_7_exactification():
    rep = run_dih14(Config(seed=0))
    record(7, "exactification: w^2 = id and the triangle commutes", rep.status == PASS, "100 samples per monoid")


def test_8_smith_normal_form():
    rng = random.Random(20261019)
    failures = []
    for k in range(200):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        a = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)]
        u, d, v = smith_normal_form(a)
        diag = [d[i][i] for i in range(min(r, c)) if d[i][i]]
        if lat.matmul(lat.matmul(unimodular_inverse(u), d), unimodular_inverse(v)) != a \
                or any(diag[i + 1] % diag[i] for i in range(len(diag) - 1)) \
                or invariant_factors(a, "min") != invariant_factors(a, "first"):
            failures.append(k)
    record(8, "SNF recomposes, divides, and is strategy independent", not failures, f"failures {failures}" if failures else "200 matrices")


def test_9_determinism():
    cmd = [sys.executable, "-m", "thrlog.cli", "verify", "all", "--seed", "7"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    ok = first.stdout == second.stdout and first.returncode == 0 and first.stdout
    record(9, "verify all is byte-identical across runs", ok, f"exit {first.returncode}, {len(first.stdout)} bytes")
