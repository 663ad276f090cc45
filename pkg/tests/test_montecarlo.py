"""Monte Carlo estimation, exact enumeration, and grid comparison."""

import numpy as np
import pytest

from dpaf import (McConfig, TheoryInputs, avg_grid_fast, avg_grid_general,
                  avg_mainlobe, basis_ofdm, basis_sc, compare_grids,
                  dpaf_grid_fft, estimate_avg_grid, estimate_eisl, exact_avg_grid,
                  make_psk, make_qam, modulate, sample_symbols, trial_seed)


def test_trial_seed_matches_documented_scheme():
    # independent reimplementation of the SplitMix64 derivation
    mask = (1 << 64) - 1

    def mix(z):
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    for base in (0, 1, 42, 2 ** 63):
        for t in (0, 1, 2, 999):
            expected = mix((base + (t + 1) * 0x9E3779B97F4A7C15) & mask)
            assert trial_seed(base, t) == expected


def test_trial_seeds_distinct():
    keys = {trial_seed(1, t) for t in range(2000)}
    assert len(keys) == 2000
    assert trial_seed(1, 0) != trial_seed(2, 0)
    with pytest.raises(ValueError):
        trial_seed(1, -1)


def test_estimate_bitwise_deterministic():
    cfg = McConfig(basis_ofdm(8), make_qam(16), trials=50, base_seed=9)
    a = estimate_avg_grid(cfg)
    b = estimate_avg_grid(cfg)
    assert np.array_equal(a.values, b.values)
    assert np.array_equal(a.stderr, b.stderr)
    assert a.provenance == "monte_carlo"


def test_single_trial_equals_one_grid():
    cfg = McConfig(basis_ofdm(8), make_psk(4), trials=1, base_seed=4)
    est = estimate_avg_grid(cfg)
    s = sample_symbols(make_psk(4), 8, trial_seed(4, 0))
    direct = dpaf_grid_fft(modulate(basis_ofdm(8), s)).sq
    assert np.array_equal(est.values, direct)
    assert est.stderr is None


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(basis_sc(4), make_psk(4), trials=0, base_seed=1)


def test_estimate_agrees_with_closed_form():
    # pinned seed; verified max |z| well under the 4-sigma acceptance gate
    cfg = McConfig(basis_ofdm(16), make_qam(16), trials=200, base_seed=5)
    est = estimate_avg_grid(cfg)
    th = avg_grid_fast(TheoryInputs.from_constellation(cfg.basis, cfg.constellation))
    cmp = compare_grids(est, th)
    assert cmp.max_z < 4.0
    assert cmp.zscores.shape == (16, 16)


def test_deterministic_cells_have_zero_spread():
    # single carrier + PSK: zero-delay Doppler sidelobes vanish per trial
    cfg = McConfig(basis_sc(16), make_psk(4), trials=50, base_seed=2)
    est = estimate_avg_grid(cfg)
    assert np.max(est.values[0, 1:]) < 1e-8
    assert np.max(est.stderr[0, 1:]) < 1e-10


def test_rms_error_shrinks_like_root_trials():
    # doubling trials should shrink the rms deviation by about 1/sqrt(2);
    # averaged over five pinned seed pairs the ratio lands near 0.73
    b = basis_ofdm(8)
    c = make_psk(4)
    th = avg_grid_fast(TheoryInputs(b, 1.0)).values

    def rms(trials, seed):
        est = estimate_avg_grid(McConfig(b, c, trials, seed))
        return float(np.sqrt(np.mean((est.values - th) ** 2)))

    ratios = [rms(1000, seed + 50) / rms(500, seed) for seed in range(1, 6)]
    assert 0.5 <= np.mean(ratios) <= 0.9


def test_exact_bpsk_hand_computed():
    # N=2 single carrier, symbols in {+-1}: X(0,0)=X(1,0)=2, Doppler
    # column cancels, so the squared grid averages to [[4,0],[4,0]]
    grid = exact_avg_grid(basis_sc(2), make_psk(2))
    assert np.allclose(grid.values, [[4.0, 0.0], [4.0, 0.0]], atol=1e-12)
    assert grid.provenance == "exact_enumeration"


def test_exact_matches_closed_form_qpsk():
    for n in (2, 3, 4):
        for make_basis in (basis_sc, basis_ofdm):
            b = make_basis(n)
            exact = exact_avg_grid(b, make_psk(4))
            t = TheoryInputs.from_constellation(b, make_psk(4))
            assert np.max(np.abs(exact.values - avg_grid_general(t).values)) < 1e-10
            assert np.max(np.abs(exact.values - avg_grid_fast(t).values)) < 1e-10


def test_exact_matches_closed_form_16qam():
    # 16^3 = 4096 vectors, exercises the mu4 = 1.32 path exactly
    b = basis_ofdm(3)
    exact = exact_avg_grid(b, make_qam(16))
    t = TheoryInputs.from_constellation(b, make_qam(16))
    assert np.max(np.abs(exact.values - avg_grid_general(t).values)) < 1e-10


def test_exact_mainlobe_formula():
    for n, const in ((2, make_qam(16)), (3, make_psk(4)), (4, make_psk(4))):
        exact = exact_avg_grid(basis_sc(n), const)
        mu4 = 1.32 if const.order == 16 else 1.0
        assert abs(exact.values[0, 0] - avg_mainlobe(n, mu4)) < 1e-10


def test_exact_normalized_eisl():
    grid = exact_avg_grid(basis_ofdm(4), make_psk(4)).values
    normalized = (grid.sum() - grid[0, 0]) / grid[0, 0]
    assert abs(normalized - 3.0) < 1e-10


def test_exact_budget_limits():
    with pytest.raises(ValueError):
        exact_avg_grid(basis_sc(5), make_psk(4))  # N cap
    with pytest.raises(ValueError):
        exact_avg_grid(basis_sc(4), make_psk(64))  # 64^4 vectors


def test_exact_exposes_bpsk_mismatch():
    # the closed form assumes zero pseudo-variance; BPSK breaks it and
    # enumeration shows by how much
    import warnings
    b = basis_sc(2)
    exact = exact_avg_grid(b, make_psk(2))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        t = TheoryInputs.from_constellation(b, make_psk(2), force=True)
    closed = avg_grid_general(t)
    assert np.max(np.abs(exact.values - closed.values)) > 0.5


def test_estimate_eisl_nearly_exact():
    # total = N * mainlobe holds per realization, so the ratio estimator
    # has only rounding-level spread
    cfg = McConfig(basis_ofdm(16), make_qam(16), trials=100, base_seed=3)
    est = estimate_eisl(cfg)
    assert abs(est.normalized - 15.0) < 1e-9
    assert 0.0 <= est.stderr < 1e-6
    assert abs(est.total_mean - 16.0 * est.mainlobe_mean) < 1e-6 * est.total_mean


def test_compare_grids_reports():
    a = np.ones((4, 4))
    cmp_same = compare_grids(a, a.copy())
    assert cmp_same.max_abs_error == 0.0
    assert cmp_same.rms_error == 0.0
    b = a.copy()
    b[2, 3] += 0.5
    cmp_diff = compare_grids(b, a)
    assert abs(cmp_diff.max_abs_error - 0.5) < 1e-15
    assert cmp_diff.zscores is None
    with pytest.raises(ValueError):
        cmp_diff.max_z


def test_compare_grids_relative_floor():
    ref = np.array([[100.0, 1e-9], [50.0, 25.0]])
    est = ref + np.array([[1.0, 5e-10], [0.0, 0.0]])
    cmp = compare_grids(est, ref, floor=1.0)
    # the 1e-9 cell is below the floor and must not drive the rel error
    assert abs(cmp.max_rel_error - 0.01) < 1e-12


def test_compare_grids_shape_mismatch():
    with pytest.raises(ValueError):
        compare_grids(np.ones((3, 3)), np.ones((4, 4)))


def test_compare_grids_z_from_stderr():
    from dpaf import ExpectationGrid
    values = np.full((2, 2), 10.0)
    ref = np.full((2, 2), 10.0)
    ref[1, 1] = 9.0
    err = np.full((2, 2), 0.5)
    est = ExpectationGrid(n=2, values=values, provenance="monte_carlo", stderr=err)
    cmp = compare_grids(est, ref)
    assert abs(cmp.max_z - 2.0) < 1e-12
