"""Acceptance suite: eight gates the package must clear, one line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
pass/fail lines.  Every tolerance is pinned here, not computed; the big
Monte Carlo case uses base seed 1, frozen after verifying the run clears
its gates deterministically (Philox streams make the rerun bitwise
identical, so these are fixed facts, not probabilistic hopes).
"""

import time

import numpy as np

from dpaf import (McConfig, TheoryInputs, avg_grid_fast, avg_grid_general,
                  avg_mainlobe, avg_sidelobe, avg_zero_delay, avg_zero_doppler,
                  basis_afdm, basis_haar, basis_ofdm, basis_otfs, basis_sc,
                  compare_grids, dense_shift_matrix, dft_matrix, dpaf_grid_fft,
                  dpaf_grid_naive, dpaf_values, eisl, estimate_avg_grid,
                  exact_avg_grid, make_psk, make_qam, modulate, s_matrix_terms,
                  sample_symbols, sidelobe_bounds, trial_seed)

MU4_SET = (1.0, 1.32, 2.0)
HAAR_SEED = 7


def _report(num, ok, detail):
    print("criterion %d: %s  [%s]" % (num, "PASS" if ok else "FAIL", detail))
    assert ok, "criterion %d failed: %s" % (num, detail)


def _bases(n):
    return [
        basis_sc(n),
        basis_ofdm(n),
        basis_otfs(4, n // 4),
        basis_afdm(n, 1.0 / (2 * n), 0.0),
        basis_haar(n, seed=HAAR_SEED),
    ]


def test_criterion_1_monte_carlo_reproduction():
    # N=128, 16-QAM, 1000 trials, OFDM and SC, base seed 1 (frozen):
    # every cell within 4 stderr of the closed form, zero-Doppler slice
    # averages within 3 stderr of 40.96 (OFDM) and 128 (SC), under 2 min
    started = time.monotonic()
    n, trials, seed = 128, 1000, 1
    q16 = make_qam(16)
    results = []
    for basis, slice_target in ((basis_ofdm(n), 40.96), (basis_sc(n), 128.0)):
        theory = avg_grid_fast(TheoryInputs.from_constellation(basis, q16))
        est = estimate_avg_grid(McConfig(basis, q16, trials, seed))
        cmp = compare_grids(est, theory)
        # per-trial slice averages, same draws as the estimator
        slice_avgs = np.empty(trials)
        for t in range(trials):
            s = sample_symbols(q16, n, trial_seed(seed, t))
            sq = np.abs(dpaf_values(basis.matrix @ s)) ** 2
            slice_avgs[t] = sq[1:, 0].mean()
        slice_mean = slice_avgs.mean()
        slice_err = slice_avgs.std(ddof=1) / np.sqrt(trials)
        results.append((basis.family, cmp.max_z, slice_mean, slice_err, slice_target))
    elapsed = time.monotonic() - started
    ok = elapsed < 120.0
    detail_parts = ["%.1fs" % elapsed]
    for family, max_z, s_mean, s_err, target in results:
        ok = ok and max_z <= 4.0 and abs(s_mean - target) <= 3.0 * s_err
        detail_parts.append("%s max|z|=%.2f slice=%.3f(target %.2f, 3se=%.3f)"
                            % (family, max_z, s_mean, target, 3.0 * s_err))
    _report(1, ok, "; ".join(detail_parts))


def test_criterion_2_eisl_invariance():
    # normalized EISL from the summed closed-form grid equals N-1 to 1e-8
    # relative, for six lengths, five bases, three kurtosis values
    worst = 0.0
    for n in (4, 8, 16, 32, 64, 128):
        for basis in _bases(n):
            for mu4 in MU4_SET:
                t = TheoryInputs(basis, mu4)
                grid = avg_grid_fast(t).values
                normalized = (grid.sum() - grid[0, 0]) / grid[0, 0]
                rel = abs(normalized - (n - 1)) / (n - 1)
                worst = max(worst, rel)
                rep = eisl(t)
                worst = max(worst, abs(rep.normalized - (n - 1)) / (n - 1))
    _report(2, worst <= 1e-8, "max rel deviation from N-1: %.3e (tol 1e-8)" % worst)


def test_criterion_3_exact_enumeration():
    # all-vector enumeration against the closed-form grid, QPSK, N=3 and 4
    worst_abs = 0.0
    worst_main = 0.0
    for n in (3, 4):
        for make_basis in (basis_sc, basis_ofdm):
            basis = make_basis(n)
            exact = exact_avg_grid(basis, make_psk(4))
            closed = avg_grid_general(TheoryInputs.from_constellation(basis, make_psk(4)))
            worst_abs = max(worst_abs, float(np.max(np.abs(exact.values - closed.values))))
            worst_main = max(worst_main, abs(exact.values[0, 0] - closed.values[0, 0])
                             / closed.values[0, 0])
    ok = worst_abs <= 1e-10 and worst_main <= 1e-12
    _report(3, ok, "max abs %.2e (tol 1e-10), mainlobe rel %.2e (tol 1e-12)"
            % (worst_abs, worst_main))


def test_criterion_4_slice_consistency():
    # the three sidelobe formulas against the corresponding cells of the
    # full grid, 1e-9 relative
    worst = 0.0
    for n in (4, 8, 16):
        for basis in _bases(n):
            for mu4 in MU4_SET:
                t = TheoryInputs(basis, mu4)
                grid = avg_grid_general(t).values
                for k in range(1, n):
                    v = avg_zero_doppler(t, k)
                    worst = max(worst, abs(v - grid[k, 0]) / max(abs(v), 1.0))
                for q in range(1, n):
                    v = avg_zero_delay(t, q)
                    worst = max(worst, abs(v - grid[0, q]) / max(abs(v), 1.0))
                for k in range(n):
                    for q in range(n):
                        if (k, q) != (0, 0):
                            v = avg_sidelobe(t, k, q)
                            worst = max(worst, abs(v - grid[k, q]) / max(abs(v), 1.0))
    _report(4, worst <= 1e-9, "max rel deviation %.3e (tol 1e-9)" % worst)


def test_criterion_5_structural_identities():
    # dense shift decomposition through the DFT, then the S-matrix
    # bilinear forms reducing to exact Kronecker deltas
    worst_shift = 0.0
    for n in range(1, 17):
        f = dft_matrix(n)
        for k in range(n):
            lhs = dense_shift_matrix(n, k)
            rhs = np.sqrt(n) * f.conj().T @ np.diag(f[:, k]) @ f
            worst_shift = max(worst_shift, float(np.max(np.abs(lhs - rhs))))
    worst_delta = 0.0
    for n in (2, 3, 4):
        t = TheoryInputs(basis_haar(n, seed=30 + n), 1.32)
        for k in range(n):
            for q in range(n):
                for m in range(n):
                    for j in range(n):
                        t1, _, t3 = s_matrix_terms(t, k, q, m, j)
                        worst_delta = max(worst_delta, abs(t1 - (1.0 if m == j else 0.0)))
                        worst_delta = max(worst_delta, abs(t3 - (1.0 if q == 0 else 0.0)))
    ok = worst_shift <= 1e-10 and worst_delta <= 1e-12
    _report(5, ok, "shift decomposition %.2e (tol 1e-10), S-matrix deltas %.2e (tol 1e-12)"
            % (worst_shift, worst_delta))


def test_criterion_6_fft_vs_naive_grids():
    # 50 randomized (basis, symbols) cases across three lengths
    families = ("sc", "ofdm", "otfs", "afdm", "haar")
    sizes = (8, 16, 32)
    worst = 0.0
    for case in range(50):
        n = sizes[case % len(sizes)]
        fam = families[case % len(families)]
        if fam == "sc":
            basis = basis_sc(n)
        elif fam == "ofdm":
            basis = basis_ofdm(n)
        elif fam == "otfs":
            basis = basis_otfs(4, n // 4)
        elif fam == "afdm":
            basis = basis_afdm(n, 1.0 / (2 * n), 0.01)
        else:
            basis = basis_haar(n, seed=1000 + case)
        const = make_qam(16) if case % 2 else make_psk(4)
        w = modulate(basis, sample_symbols(const, n, seed=case))
        diff = np.max(np.abs(dpaf_grid_fft(w).values - dpaf_grid_naive(w).values))
        worst = max(worst, float(diff))
    _report(6, worst <= 1e-9, "50 cases, max abs deviation %.3e (tol 1e-9)" % worst)


def test_criterion_7_haar_sidelobes_inside_bounds():
    # 200 random unitaries at N=16: every expected sidelobe inside the
    # Cauchy-Schwarz interval [(mu4-1)N, N]
    n = 16
    worst_violation = -np.inf
    for idx in range(200):
        basis = basis_haar(n, seed=5000 + idx)
        for mu4 in MU4_SET:
            lo, hi = sidelobe_bounds(n, mu4)
            grid = avg_grid_fast(TheoryInputs(basis, mu4)).values
            side = np.delete(grid.ravel(), 0)
            worst_violation = max(worst_violation,
                                  float(lo - side.min()), float(side.max() - hi))
    _report(7, worst_violation <= 1e-9,
            "200 unitaries, worst bound violation %.3e (tol 1e-9)" % worst_violation)


def test_criterion_8_structural_zeros_and_mainlobe():
    # realized grids: OFDM+QPSK kills the zero-Doppler axis, SC+QPSK the
    # zero-delay axis; enumeration reproduces the mainlobe formula
    n = 64
    worst_axis = 0.0
    for seed in range(5):
        s = sample_symbols(make_psk(4), n, seed=seed)
        ofdm_sq = np.abs(dpaf_values(basis_ofdm(n).matrix @ s)) ** 2
        sc_sq = np.abs(dpaf_values(basis_sc(n).matrix @ s)) ** 2
        worst_axis = max(worst_axis,
                         float(ofdm_sq[1:, 0].max()) / (n * n),
                         float(sc_sq[0, 1:].max()) / (n * n))
    worst_main = 0.0
    for size, const, mu4 in ((2, make_qam(16), 1.32), (2, make_psk(4), 1.0),
                             (3, make_psk(4), 1.0), (4, make_psk(4), 1.0)):
        exact = exact_avg_grid(basis_sc(size), const)
        worst_main = max(worst_main, abs(exact.values[0, 0] - avg_mainlobe(size, mu4)))
    ok = worst_axis <= 1e-8 and worst_main <= 1e-10
    _report(8, ok, "axis zeros %.2e of N^2 (tol 1e-8), mainlobe vs enumeration %.2e (tol 1e-10)"
            % (worst_axis, worst_main))
