"""The ten acceptance criteria, one test each.

Every test records a PASS/FAIL line; conftest prints them at the end of the
session (also visible inline with ``pytest -s``).
"""

import gc
import json
import time
from fractions import Fraction
from pathlib import Path

from nagraded.asymptotics import spectrum_at, theorem_c_experiment
from nagraded.cli import _spec
from nagraded.field import FieldElem
from nagraded.fixtures import (
    degree_one_pair,
    floor_fixture,
    identity_fixture,
    random_unit_matrix,
    random_weights,
    scrambled_pair,
    sub_rng,
)
from nagraded.linalg import Matrix, column_reduce
from nagraded.norms import DiagNorm, d1, dinf, ext_power, quotient_norm, relative_spectrum, vol, vol_det
from nagraded.okounkov import (
    PhiData,
    corner_deleted_semigroup,
    equidistribution_check,
    fujita_check,
    gamma_slice,
    mu_measure,
    superlevel_ratio,
)
from nagraded.potential_p1 import (
    fs_from_weights,
    sup_abs_diff,
    supnorm_weights,
    theorem_b_experiment,
)
from nagraded.section_ring import Truncated, submultiplicativity_check, zero_weights

F = Fraction
SEED = 20261018
CONFIGS = Path(__file__).resolve().parent.parent / "configs"
RESULTS: dict = {}


def report(n: int, ok: bool, detail: str):
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print("\n" + line)
    assert ok, line


def test_criterion_01_spectrum_recovery():
    t0 = time.perf_counter()
    pairs = []
    for d in range(2, 7):
        rng = sub_rng(SEED, f"c1:{d}")
        pairs.extend((d, i, scrambled_pair(rng, d)) for i in range(100))
    build = time.perf_counter() - t0
    gc.collect()
    t0 = time.perf_counter()
    bad = [(d, i) for d, i, (a, b, lam) in pairs if relative_spectrum(a, b).lambdas != lam]
    dt = time.perf_counter() - t0
    report(1, not bad and dt < 10,
           f"500 pairs d=2..6, mismatches={len(bad)}, spectra {dt:.2f}s (< 10s), construction {build:.2f}s")


def test_criterion_02_determinant_identity():
    bad = 0
    for i in range(200):
        rng = sub_rng(SEED, f"c2:{i}")
        d = 2 + i % 5
        a, b, lam = scrambled_pair(rng, d)
        top = relative_spectrum(ext_power(a, d), ext_power(b, d)).lambdas
        s = sum(relative_spectrum(a, b).lambdas, F(0))
        if not (len(top) == 1 and top[0] == s == d * vol_det(a, b) == d * vol(a, b)):
            bad += 1
    report(2, bad == 0, f"200 pairs, sum(lambda) = d*vol via top exterior power, violations={bad}")


def _third(rng, d):
    return DiagNorm(random_unit_matrix(rng, d), random_weights(rng, d))


def _surjection(rng, d):
    """Random integer (d-1) x d matrix of full rank."""
    while True:
        rows = [[FieldElem.const(rng.randint(-2, 2)) for _ in range(d)] for _ in range(d - 1)]
        A = Matrix(rows)
        if len(column_reduce(A, [0] * d)[0]) == d - 1:
            return A


def test_criterion_03_cocycle_lipschitz_quotient():
    bad = {"cocycle": 0, "lipschitz": 0, "quotient": 0}
    for i in range(200):
        rng = sub_rng(SEED, f"c3:{i}")
        d = 2 + i % 4
        a, b, _ = scrambled_pair(rng, d)
        c = _third(rng, d)
        if vol(a, b) + vol(b, c) != vol(a, c):
            bad["cocycle"] += 1
        if not abs(vol(a, c) - vol(b, c)) <= d1(a, b) <= dinf(a, b):
            bad["lipschitz"] += 1
        A = _surjection(rng, d)
        if dinf(quotient_norm(a, A), quotient_norm(b, A)) > dinf(a, b):
            bad["quotient"] += 1
    report(3, not any(bad.values()), f"200 instances each, violations={bad}")


def test_criterion_04_theorem_b():
    t0 = time.perf_counter()
    a, b = degree_one_pair(F(3, 2))
    rows = theorem_b_experiment(a, b, range(1, 65))
    dt = time.perf_counter() - t0
    ok = all(r.energy == r.vol_over_m == F(-3, 4) for r in rows) and len(rows) == 64 and dt < 5
    report(4, ok, f"E_m = vol_m/m = -3/4 for m=1..64: {ok}, {dt:.2f}s (< 5s)")


def test_criterion_05_theorem_c():
    t0 = time.perf_counter()
    rows = theorem_c_experiment(floor_fixture(), zero_weights(1), [1, 2, 4, 8, 16], range(1, 65))
    dt = time.perf_counter() - t0
    gaps = [r.gap for r in rows]
    ok = all(x >= y for x, y in zip(gaps, gaps[1:])) and gaps[-1] < F(1, 20) and dt < 60
    report(5, ok, f"gaps k=1,2,4,8,16: {[str(g) for g in gaps]}, {dt:.2f}s (< 60s)")


def test_criterion_06_equidistribution():
    rows = equidistribution_check(identity_fixture(), list(range(1, 65)))
    lin = all(r.distance <= F(1, r.k + 1) for r in rows)
    fl = equidistribution_check(floor_fixture(), [64])[0].distance
    report(6, lin and fl < F(1, 10), f"w=j: distance <= 1/(k+1) for k<=64: {lin}; floor fixture k=64: {fl} (< 1/10)")


def test_criterion_07_okounkov_counts():
    counts = all(len(gamma_slice(1, m)) == m + 1 and len(gamma_slice(2, m)) == (m + 1) * (m + 2) // 2
                 for m in range(101))
    spec = identity_fixture()
    sup = True
    for k in range(1, 17):
        mu = mu_measure(spec, k)
        levels = [F(i, 2 * k) for i in range(-1, 2 * k + 2)]
        sup &= all(superlevel_ratio(spec, t, k) == mu.mass_at_least(t) for t in levels)
    report(7, counts and sup, f"|Gamma_m| exact for m<=100: {counts}; superlevel ratios = mu masses: {sup}")


def test_criterion_08_fujita():
    rows = fujita_check(corner_deleted_semigroup(48), [1, 2, 4, 8, 16], 48)
    est = [r.estimate for r in rows]
    ok = (all(x <= y for x, y in zip(est, est[1:])) and rows[-1].gap < F(1, 20)
          and all(r.inclusion_ok for r in rows))
    report(8, ok, f"N=48 estimates {[str(e) for e in est]}, gap at k=16: {rows[-1].gap} (< 1/20)")


def _shipped_specs():
    specs = {"floor": floor_fixture(), "identity": identity_fixture(), "zero1": zero_weights(1),
             "zero2": zero_weights(2)}
    a, b = degree_one_pair()
    specs.update({"deg1_a": a, "deg1_b": b})
    for k in (1, 2, 4, 8, 16):
        specs[f"floor_trunc{k}"] = Truncated(floor_fixture(), k)
    for f in sorted(CONFIGS.glob("*.json")):
        cfg = json.loads(f.read_text())
        if "variant" in cfg:
            specs[f.stem] = _spec({"s": cfg}, "s", CONFIGS)
        for key in ("a", "b", "spec"):
            if key in cfg:
                specs[f"{f.stem}.{key}"] = _spec(cfg, key, CONFIGS)
    return specs


def test_criterion_09_superadditivity_submultiplicativity():
    bad = []
    specs = _shipped_specs()
    for name, spec in specs.items():
        N = 16 if spec.n == 1 else 6
        if PhiData.build(spec, N).superadditivity_violation() is not None:
            bad.append(("phi", name))
        if not submultiplicativity_check(spec, N).ok:
            bad.append(("submult", name))
    report(9, not bad, f"{len(specs)} fixtures, violations={bad}")


def test_criterion_10_fs_n():
    bad = 0
    for i in range(100):
        rng = sub_rng(SEED, f"c10:{i}")
        m = rng.randint(1, 16)
        wa = random_weights(rng, m + 1)
        wb = random_weights(rng, m + 1)
        ua, ub = fs_from_weights(wa, m), fs_from_weights(wb, m)
        na, nb = supnorm_weights(ua, m), supnorm_weights(ub, m)
        # norm >= N(FS(norm)): weights can only grow
        ok = all(x >= y for x, y in zip(na, wa))
        # FS o N o FS = FS
        ok &= fs_from_weights(na, m) == ua
        # FS is 1/m-Lipschitz for d_inf, N is m-Lipschitz for sup|u - v|
        da = dinf(DiagNorm.monomial(wa), DiagNorm.monomial(wb))
        ok &= sup_abs_diff(ua, ub) <= da / m
        ok &= dinf(DiagNorm.monomial(na), DiagNorm.monomial(nb)) <= m * sup_abs_diff(ua, ub)
        bad += not ok
    report(10, bad == 0, f"100 seeded toric norms m<=16, violations={bad}")
