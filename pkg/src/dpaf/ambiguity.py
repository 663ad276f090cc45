"""Discrete periodic ambiguity grids of realized waveforms.

For a frame x of length N the grid entry at delay k and Doppler bin q is

    X(k, q) = sqrt(N) (J_k x)^H Diag(conj(f_q)) x
            = sum_i x[i] conj(x[(i - k) mod N]) e^(+j 2 pi i q / N)

with J_k the cyclic shift from :mod:`dpaf.basis` and f_q column q of the
normalized DFT matrix.  Rows index delay, columns index Doppler, both
0-based, and X(0, 0) = ||x||^2.

Two evaluation paths are provided on purpose: an O(N) per-entry sum and
an FFT path that computes row k as N * ifft(x * conj(roll(x, k))).  They
follow different code and different rounding, so their agreement is a
meaningful cross-check rather than a tautology.
"""

import dataclasses

import numpy as np

from .basis import UnitaryBasis, apply_shift


@dataclasses.dataclass(frozen=True)
class Waveform:
    """A modulated frame together with the ingredients that built it."""

    basis: UnitaryBasis
    symbols: np.ndarray
    signal: np.ndarray

    def __post_init__(self) -> None:
        for field in ("symbols", "signal"):
            arr = np.asarray(getattr(self, field), dtype=complex).copy()
            arr.setflags(write=False)
            object.__setattr__(self, field, arr)

    @property
    def n(self) -> int:
        return self.signal.size


@dataclasses.dataclass(frozen=True)
class DpafGrid:
    """Complex ambiguity grid of one realization.

    `values[k, q]` is X(k, q); `sq` is the squared magnitude grid,
    computed on demand.
    """

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.n, self.n):
            raise ValueError("grid shape %r does not match n=%d" % (vals.shape, self.n))
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def sq(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def modulate(basis: UnitaryBasis, symbols: np.ndarray) -> Waveform:
    """Map a symbol vector through the basis, x = U s.

    Energy is preserved exactly up to the unitarity defect of U, so
    ||x||^2 tracks ||s||^2.
    """
    s = np.asarray(symbols, dtype=complex)
    if s.ndim != 1 or s.size != basis.n:
        raise ValueError("expected %d symbols, got shape %r" % (basis.n, s.shape))
    return Waveform(basis=basis, symbols=s, signal=basis.matrix @ s)


def dpaf_point(waveform: Waveform, k: int, q: int) -> complex:
    """Single grid entry X(k, q), evaluated as the O(N) definition sum."""
    x = waveform.signal
    n = x.size
    if not 0 <= q < n:
        raise ValueError("Doppler index %d outside [0, %d)" % (q, n))
    shifted = apply_shift(x, k)
    fq_conj = np.exp(2j * np.pi * q * np.arange(n) / n) / np.sqrt(n)
    return complex(np.sqrt(n) * np.sum(shifted.conj() * fq_conj * x))


def dpaf_values(signal: np.ndarray) -> np.ndarray:
    """Full complex grid of a raw signal vector via the FFT path.

    Row k is N * ifft(y_k) with y_k[i] = x[i] * conj(x[(i - k) mod N]);
    the inverse FFT supplies the e^(+j 2 pi i q / N) Doppler phases for
    all q at once.  O(N^2 log N) total.
    """
    x = np.asarray(signal, dtype=complex)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("expected a non-empty 1-D signal")
    n = x.size
    i = np.arange(n)
    lag = (i[None, :] - i[:, None]) % n
    y = x[None, :] * x.conj()[lag]
    return n * np.fft.ifft(y, axis=1)


def dpaf_grid_fft(waveform: Waveform) -> DpafGrid:
    """Full grid of a waveform via the FFT path."""
    return DpafGrid(n=waveform.n, values=dpaf_values(waveform.signal))


def dpaf_grid_naive(waveform: Waveform) -> DpafGrid:
    """Full grid by N^2 independent definition sums.  O(N^3).

    Slow by design; exists as the reference the FFT path is checked
    against.
    """
    n = waveform.n
    vals = np.empty((n, n), dtype=complex)
    for k in range(n):
        for q in range(n):
            vals[k, q] = dpaf_point(waveform, k, q)
    return DpafGrid(n=n, values=vals)


def mainlobe_sq(waveform: Waveform) -> float:
    """Squared mainlobe |X(0, 0)|^2 = ||x||^4, without building a grid."""
    return float(np.linalg.norm(waveform.signal) ** 4)
