"""Delay-Doppler sidelobe statistics of randomly modulated waveforms.

The package computes discrete periodic ambiguity grids of frames x = U s
built from a unitary modulation basis U and random symbols s, evaluates
the closed-form expectations of the squared grid, and checks the two
against Monte Carlo sampling and exact symbol enumeration.  The headline
identity it verifies: the expected sidelobe energy relative to the
expected mainlobe is exactly N - 1 for every unitary basis and every
zero-mean, unit-power, zero-pseudo-variance alphabet.
"""

from .ambiguity import (DpafGrid, Waveform, dpaf_grid_fft, dpaf_grid_naive,
                        dpaf_point, dpaf_values, mainlobe_sq, modulate)
from .basis import (UnitaryBasis, apply_shift, basis_afdm, basis_haar, basis_ofdm,
                    basis_otfs, basis_sc, custom_basis, dense_shift_matrix,
                    dft_matrix, load_basis_matrix, load_custom_basis, verify_unitary)
from .constellation import (Constellation, MomentReport, load_constellation,
                            make_psk, make_qam, moments, sample_symbols)
from .montecarlo import (EislEstimate, GridComparison, McConfig, compare_grids,
                         estimate_avg_grid, estimate_eisl, exact_avg_grid)
from .seeding import philox, trial_seed
from .theory import (EislReport, ExpectationGrid, TheoryInputs, avg_grid_fast,
                     avg_grid_general, avg_mainlobe, avg_sidelobe, avg_zero_delay,
                     avg_zero_doppler, eisl, s_matrix_terms, sidelobe_bounds)

__version__ = "0.1.0"

__all__ = [
    "Constellation", "MomentReport", "make_psk", "make_qam", "moments",
    "sample_symbols", "load_constellation",
    "UnitaryBasis", "dft_matrix", "apply_shift", "dense_shift_matrix",
    "verify_unitary", "basis_sc", "basis_ofdm", "basis_otfs", "basis_afdm",
    "basis_haar", "custom_basis", "load_basis_matrix", "load_custom_basis",
    "Waveform", "DpafGrid", "modulate", "dpaf_point", "dpaf_values",
    "dpaf_grid_fft", "dpaf_grid_naive", "mainlobe_sq",
    "TheoryInputs", "ExpectationGrid", "EislReport", "avg_mainlobe",
    "avg_zero_doppler", "avg_zero_delay", "avg_sidelobe", "avg_grid_general",
    "avg_grid_fast", "eisl", "sidelobe_bounds", "s_matrix_terms",
    "McConfig", "EislEstimate", "GridComparison", "estimate_avg_grid",
    "estimate_eisl", "exact_avg_grid", "compare_grids",
    "philox", "trial_seed",
]
