"""Acceptance suite: one test (and one printed pass/fail line) per criterion.

Criterion 1 carries two comparisons that are expected to fail honestly:
the published eigenvalue table misprints the Y20 p=5 aggregate (a dropped
factor of 521) and duplicates alpha_1 into the alpha_2 cell of the Y26b
p=2 row of the parameter table; both defects are provable from the inputs
alone (see the dataset annotations and README).  Everything else passes.
"""

import cmath
import math
import random
import time
from fractions import Fraction as F

import pytest

from satake.datasets import bundled_path, load_dataset
from satake.eliminate import (algorithm_A, canonicalize, enumerate_solutions,
                              primary_solve, symbolic_elimination)
from satake.hecke import (build_system, constants_from_record, genus2_constants,
                          t0p2_from_identity)
from satake.krieg import (b_vector, omega_matrix, spherical_image,
                          spherical_image_t0p)
from satake.pipeline import Tolerances, match_parameters, run_compute
from satake.polynomials import MultiPoly, evaluate, sym_sum, wn_symmetrize

TOL = Tolerances()

# Published 4-decimal parameter values, genus 2 (alpha_1 re/im, alpha_2 re/im).
TABLE2 = {
    ("Y20", 2): (0.6480, 0.7616, -0.2194, 0.9756),
    ("Y20", 3): (0.4600, 0.8879, -0.9542, 0.2990),
    ("Y20", 5): (0.6889, 0.7248, -0.9443, 0.3290),
    ("Y20", 7): (0.1871, 0.9823, -0.922, 0.3865),   # alpha_2 re per documented erratum
    ("Y22", 2): (0.2346, 0.9720, -0.5479, 0.8364),
    ("Y22", 3): (-0.1459, 0.9892, -0.9281, 0.3721),
    ("Y22", 5): (-0.0257, 0.9996, -0.9532, 0.3022),
    ("Y24a", 2): (0.0757, 0.9971, -0.7957, 0.6055),
    ("Y24a", 3): (0.1368, 0.9905, -0.7907, 0.6121),
    ("Y24b", 2): (0.8652, 0.5013, -0.8407, 0.5413),
    ("Y24b", 3): (0.3534, 0.9354, -0.9884, 0.1514),
    ("Y24b", 5): (0.2143, 0.9767, -0.6417, 0.7668),
    ("Y26a", 2): (0.4266, 0.9044, -0.8984, 0.4391),
    ("Y26a", 3): (0.7854, 0.6189, -0.9805, 0.1962),
    ("Y26a", 5): (0.1757, 0.9844, -0.9034, 0.4287),
    ("Y26b", 2): (-0.1533, 0.9881, -0.1533, 0.9881),
    ("Y26b", 3): (0.5703, 0.8213, -0.2998, 0.9539),
    ("Y26b", 5): (0.4852, 0.8743, -0.8548, 0.5189),
}

# Published 4-decimal parameter values, genus 4 (two +/- conjugate pairs).
TABLE4 = {
    2: (-0.1875, 0.6817, -0.7500, 2.7271),
    3: (0.5185, 1.6526, 0.0576, 0.1836),
    5: (0.1545, 0.4196, 0.0309, 0.0839),
    7: (-0.4981, 2.5984, -0.0101, 0.0530),
}


def _report(criterion: str, ok: bool, detail: str = ""):
    print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'}"
          + (f" -- {detail}" if detail else ""))


@pytest.fixture(scope="module")
def genus2_run():
    dataset = load_dataset(bundled_path("skoruppa_genus2"))
    start = time.perf_counter()
    rows = run_compute(dataset, tolerances=TOL)
    elapsed = time.perf_counter() - start
    return dataset, rows, elapsed


@pytest.fixture(scope="module")
def genus4_run():
    dataset = load_dataset(bundled_path("schottky_genus4"))
    start = time.perf_counter()
    rows = run_compute(dataset, tolerances=TOL)
    elapsed = time.perf_counter() - start
    return dataset, rows, elapsed


def test_criterion_1_genus2_table_reproduction(genus2_run):
    dataset, rows, elapsed = genus2_run
    by_key = {(r.label, r.p): r for r in rows}

    excluded = by_key[("Y24a", 5)]
    assert excluded.excluded, "Y24a p=5 must stay excluded per the dataset erratum"

    failures = []
    for (label, p), printed in TABLE2.items():
        row = by_key[(label, p)]
        if row.error is not None:
            failures.append(f"{label} p={p}: {row.error}")
            continue
        computed = row.satake.parameters
        try:
            if (label, p) == ("Y20", 7):
                a1, a2 = computed
                assert abs(a1.real - printed[0]) < 5e-4 and abs(a1.imag - printed[1]) < 5e-4
                assert abs(abs(a2) - 1.0) < 1e-6
                assert abs(a2.imag - printed[3]) < 5e-4
                assert abs(a2.real - printed[2]) < 5e-3
            else:
                expected = [complex(printed[0], printed[1]), complex(printed[2], printed[3])]
                match_parameters(computed, expected, tol=TOL.table_comparison)
        except AssertionError:
            got = "  ".join(f"{z.real:+.4f}{z.imag:+.4f}i" for z in computed)
            failures.append(f"{label} p={p}: computed [{got}] vs printed {printed}")

    ok = not failures and elapsed < 1.0
    detail = f"{18 - len(failures)}/18 rows within 5e-4, batch time {elapsed:.3f}s"
    if failures:
        detail += " | known upstream-table misprints: " + " ; ".join(failures)
    _report("criterion 1 (genus-2 table)", ok, detail)
    assert elapsed < 1.0, f"genus-2 batch took {elapsed:.3f}s"
    assert not failures, (
        "Documented upstream-table misprints (see decisions ledger / README):\n  "
        + "\n  ".join(failures))


def test_criterion_2_genus4_table_reproduction(genus4_run):
    dataset, rows, elapsed = genus4_run
    failures = []
    for row in rows:
        printed = TABLE4[row.p]
        expected = [complex(printed[0], printed[1]), complex(printed[0], -printed[1]),
                    complex(printed[2], printed[3]), complex(printed[2], -printed[3])]
        if row.error is not None:
            failures.append(f"p={row.p}: {row.error}")
            continue
        try:
            match_parameters(row.satake.parameters, expected, tol=TOL.table_comparison)
        except AssertionError as exc:
            failures.append(f"p={row.p}: {exc}")
    ok = not failures and elapsed < 1.0
    _report("criterion 2 (genus-4 table)", ok,
            f"{4 - len(failures)}/4 rows within 5e-4, batch time {elapsed:.3f}s")
    assert elapsed < 1.0, f"genus-4 batch took {elapsed:.3f}s"
    assert not failures, failures


def test_criterion_3_rp_verdicts(genus2_run, genus4_run):
    _, rows2, _ = genus2_run
    _, rows4, _ = genus4_run
    problems = []
    for row in rows2:
        if row.excluded:
            continue
        if row.verdict != "unimodular" or row.max_deviation >= 1e-6:
            problems.append(f"{row.label} p={row.p}: {row.verdict} dev={row.max_deviation}")
    for row in rows4:
        if row.verdict != "violated":
            problems.append(f"J p={row.p}: {row.verdict}")
    p2 = next(r for r in rows4 if r.p == 2)
    if not p2.max_deviation > 0.25:
        problems.append(f"J p=2 deviation {p2.max_deviation} not > 0.25")
    for z in p2.satake.parameters:
        pair_moduli = {abs(z), 1 / abs(z)}
        if not any(abs(m - target) < 5e-3 for m in pair_moduli for target in (0.707, 2.828)):
            problems.append(f"J p=2 parameter {z} has pair moduli {sorted(pair_moduli)}")
    ok = not problems
    _report("criterion 3 (unimodularity verdicts)", ok, "; ".join(problems))
    assert ok, problems


def test_criterion_4_symbolic_goldens():
    import test_eliminate as golden

    sym2 = symbolic_elimination(2)
    p2_expected = [
        MultiPoly(2, {(0, 0): F(1)}),
        MultiPoly(2, {(0, 1): F(-1)}),
        MultiPoly(2, {(0, 0): F(2), (1, 0): F(1)}),
        MultiPoly(2, {(0, 1): F(-1)}),
        MultiPoly(2, {(0, 0): F(1)}),
    ]
    ok_p2 = list(sym2.p_coeffs) == p2_expected

    sym3 = symbolic_elimination(3)
    chain_expected = [golden.GOLDEN_F4, golden.GOLDEN_F5, golden.GOLDEN_F6,
                      golden.GOLDEN_F7, golden.GOLDEN_F8]
    ok_chain = all(got == MultiPoly(6, {e: F(c) for e, c in want.items()})
                   for got, want in zip(sym3.chain, chain_expected))
    p3_expected = [
        MultiPoly(3, {(0, 0, 0): F(-1)}),
        MultiPoly(3, {(0, 0, 1): F(1)}),
        MultiPoly(3, {(0, 1, 0): F(-1), (0, 0, 0): F(-3)}),
        MultiPoly(3, {(0, 0, 1): F(2), (1, 0, 0): F(1)}),
        MultiPoly(3, {(0, 1, 0): F(-1), (0, 0, 0): F(-3)}),
        MultiPoly(3, {(0, 0, 1): F(1)}),
        MultiPoly(3, {(0, 0, 0): F(-1)}),
    ]
    ok_p3 = list(sym3.p_coeffs) == p3_expected
    ok = ok_p2 and ok_chain and ok_p3
    _report("criterion 4 (symbolic goldens)", ok,
            f"quartic {ok_p2}, chain {ok_chain}, sextic {ok_p3}")
    assert ok


def test_criterion_5a_orbit_sum_identity():
    ok = True
    for n in range(1, 7):
        for j in range(n + 1):
            lhs = wn_symmetrize(n, 2, b_vector(n, j))
            rhs = MultiPoly.zero(n + 1)
            for k in range(n - j + 1):
                rhs = rhs + sym_sum(n, k, j, nvars=n + 1, offset=1).mul_monomial(
                    (2,) + (0,) * n)
            ok = ok and lhs == rhs
    _report("criterion 5a (orbit-sum identity, n <= 6)", ok)
    assert ok


def test_criterion_5b_orbit_term_counts():
    ok = True
    for n in range(1, 13):
        for j in range(n + 1):
            binom = sum(math.comb(n, k) * math.comb(n - k, j) for k in range(n - j + 1))
            ok = ok and binom == math.comb(n, j) * 2 ** (n - j)
            orbit = wn_symmetrize(n, 2, b_vector(n, j))
            ok = ok and len(orbit.terms) == binom
        if not ok:
            break
    _report("criterion 5b (orbit/term-count identity, n <= 12)", ok)
    assert ok


def test_criterion_5c_palindromicity_and_degree():
    rng = random.Random(2024)
    counts = {2: 35, 3: 30, 4: 20, 5: 15}
    checked = 0
    for n, how_many in counts.items():
        for _ in range(how_many):
            consts = [F(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(n)]
            system = build_system(consts)
            g_poly, coeffs = algorithm_A(system)  # degree/divisibility asserted inside
            assert g_poly.leading_exponents(n) == (1,) * (n - 1) + (2 * n,)
            assert all(all(e[t] >= 1 for t in range(n - 1)) for e in g_poly.terms)
            assert all(coeffs[l] == coeffs[2 * n - l] for l in range(2 * n + 1))
            checked += 1
    ok = checked == 100
    _report("criterion 5c (palindromicity/degree, 100 systems)", ok, f"{checked} systems")
    assert ok


def test_criterion_5d_exhaustive_solution_counts():
    rng = random.Random(77)
    counts = {1: 10, 2: 20, 3: 20}
    checked = 0
    for n, how_many in counts.items():
        target = 2 ** n * math.factorial(n)
        for _ in range(how_many):
            consts = [F(rng.randint(-9, 9), rng.randint(1, 5)) + F(1, 97)
                      for _ in range(n)]
            sols = enumerate_solutions(consts)
            assert len(sols) == target
            distinct = {tuple((round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0)
                              for z in s) for s in sols}
            assert len(distinct) == target
            canon = {tuple((round(z.real, 6) + 0.0, round(z.imag, 6) + 0.0)
                           for z in canonicalize((1.0, *s)).parameters) for s in sols}
            assert len(canon) == 1, "solutions must form a single orbit"
            checked += 1
    ok = checked == 50
    _report("criterion 5d (exhaustive counts, 50 systems)", ok, f"{checked} systems")
    assert ok


def test_criterion_5e_square_identity_and_redundancy(genus2_run, genus4_run):
    ok = True
    for n in range(1, 6):
        lhs = spherical_image_t0p(n) * spherical_image_t0p(n)
        rhs = MultiPoly.zero(n + 1)
        for i in range(n + 1):
            rhs = rhs + wn_symmetrize(n, 2, b_vector(n, i)).scale(2 ** i)
        ok = ok and lhs == rhs

    dataset2, _, _ = genus2_run
    for rec in dataset2.clean_records():
        derived = constants_from_record(rec, genus2_convention="spherical-map")
        value = t0p2_from_identity(rec.lambda_t0p, derived.kvec,
                                   omega_matrix(rec.n, rec.k, rec.p))
        ok = ok and isinstance(value, int)
    dataset4, _, _ = genus4_run
    for rec in dataset4.records:
        matrix = omega_matrix(rec.n, rec.k, rec.p)
        derived = constants_from_record(rec, matrix)
        value = t0p2_from_identity(rec.lambda_t0p, derived.kvec, matrix)
        ok = ok and isinstance(value, int)
    _report("criterion 5e (square identity n<=5; T0(p^2) integrality)", ok)
    assert ok


def _generic_unimodular(n, rng):
    while True:
        zs = [cmath.exp(2j * math.pi * rng.random()) for _ in range(n)]
        if min(abs(z * z + 1) for z in zs) < 0.1:
            continue
        if all(abs(zs[i] - zs[j]) > 0.05 and abs(zs[i] - 1 / zs[j]) > 0.05
               for i in range(n) for j in range(i + 1, n)):
            return zs


def test_criterion_5f_forward_synthesis_round_trips():
    rng = random.Random(4242)
    worst_residual = 0.0
    worst_recovery = 0.0
    cases = 0
    for n in (1, 2, 3, 4):
        k, p = {1: 12, 2: 20, 3: 12, 4: 8}[n], {1: 2, 2: 3, 3: 5, 4: 2}[n]
        images = [spherical_image(i, n, k, p) for i in range(n + 1)]
        t0p_image = spherical_image_t0p(n)
        matrix = omega_matrix(n, k, p)
        for _ in range(50):
            alphas = _generic_unimodular(n, rng)
            k1 = float(p) ** (n * k - n * (n + 1) / 2)
            alpha0 = cmath.sqrt(k1 / math.prod(alphas))
            full = (alpha0, *alphas)
            lam_t0p = evaluate(t0p_image, full)
            lams = {i: evaluate(images[i], full) for i in range(n + 1)}
            # complex k-chain through the exact matrix
            kv = [None] * (n + 2)
            for j in range(1, n + 1):
                row = n - j + 1
                acc = lams[row]
                for col in range(row + 1, n + 1):
                    acc -= float(matrix.entry(row, col)) * kv[n - col + 1]
                kv[j] = acc / float(matrix.entry(row, row))
            kv[n + 1] = lam_t0p ** 2 - sum(2 ** (n + 1 - j) * kv[j] for j in range(1, n + 1))
            consts = [kv[n + 2 - j] / kv[1] for j in range(1, n + 1)]
            recovered = primary_solve(consts)
            alpha0_rec = lam_t0p / math.prod(1 + z for z in recovered)
            rec_full = (alpha0_rec, *recovered)
            # residual against the synthesized eigenvalues
            res = abs(evaluate(t0p_image, rec_full) - lam_t0p) / abs(lam_t0p)
            for i in range(n + 1):
                res = max(res, abs(evaluate(images[i], rec_full) - lams[i]) / abs(lams[i]))
            worst_residual = max(worst_residual, res)
            want = canonicalize((1.0, *alphas)).parameters
            got = canonicalize((1.0, *recovered)).parameters
            worst_recovery = max(worst_recovery,
                                 max(abs(a - b) for a, b in zip(got, want)))
            cases += 1
    ok = cases == 200 and worst_residual < 1e-9 and worst_recovery < 1e-8
    _report("criterion 5f (forward synthesis, 200 cases)", ok,
            f"worst residual {worst_residual:.2e}, worst recovery {worst_recovery:.2e}")
    assert ok, (worst_residual, worst_recovery)


def test_criterion_6_path_equivalence(genus2_run, genus4_run):
    dataset2, rows2, _ = genus2_run
    _, rows4, _ = genus4_run

    # closed-form quadratic route vs the library's recursive route, genus 2
    worst_closed = 0.0
    for rec in dataset2.clean_records():
        c1, c2 = genus2_constants(rec.lambda_t0p, rec.aggregate_tp2, rec.k, rec.p)
        # closed form: gamma = roots of y^2 - c2 y + c1, then z^2 - gamma z + 1
        disc = cmath.sqrt(complex(c2) ** 2 - 4 * complex(c1))
        closed = []
        for gamma in ((complex(c2) + disc) / 2, (complex(c2) - disc) / 2):
            d2 = cmath.sqrt(gamma * gamma - 4)
            z = (gamma + d2) / 2 if abs(gamma + d2) >= abs(gamma - d2) else (gamma - d2) / 2
            closed.append(z)
        generic = primary_solve((c1, c2))
        a = canonicalize((1.0, *closed)).parameters
        b = canonicalize((1.0, *generic)).parameters
        worst_closed = max(worst_closed, max(abs(x - y) for x, y in zip(a, b)))

    # pairing shortcut vs recursive hat reduction, every dataset row
    worst_paths = 0.0
    for row in rows2 + rows4:
        if row.excluded or row.error:
            continue
        worst_paths = max(worst_paths, row.path_agreement)

    ok = worst_closed < 1e-8 and worst_paths < 1e-8
    _report("criterion 6 (path equivalence)", ok,
            f"closed-form vs generic {worst_closed:.2e}; pairing vs recursive {worst_paths:.2e}")
    assert ok, (worst_closed, worst_paths)
