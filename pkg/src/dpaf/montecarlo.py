"""Monte Carlo and exact-enumeration checks of the grid expectations.

Estimators here are deliberately free of the closed forms they test:
they draw symbols, modulate, build realized grids with
:mod:`dpaf.ambiguity` and average.  Runs are reproducible bit for bit;
trial t of an experiment with base seed b draws its symbols from the
Philox key ``trial_seed(b, t)``, and accumulation always walks trials in
index order.
"""

import dataclasses

import numpy as np

from .ambiguity import dpaf_values
from .basis import UnitaryBasis
from .constellation import Constellation, sample_symbols
from .seeding import trial_seed
from .theory import ExpectationGrid

#: enumeration budget: at most this many symbol vectors
ENUMERATION_MAX_VECTORS = 65536

#: enumeration frame-length cap; M^N explodes immediately beyond this
ENUMERATION_MAX_N = 4

_ENUM_CHUNK = 4096


@dataclasses.dataclass(frozen=True)
class McConfig:
    """One Monte Carlo experiment: what to modulate and how many draws."""

    basis: UnitaryBasis
    constellation: Constellation
    trials: int
    base_seed: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1, got %d" % self.trials)

    @property
    def n(self) -> int:
        return self.basis.n


@dataclasses.dataclass(frozen=True)
class EislEstimate:
    """Sample normalized integrated sidelobe level with its stderr."""

    n: int
    trials: int
    normalized: float
    stderr: float
    mainlobe_mean: float
    total_mean: float


@dataclasses.dataclass(frozen=True)
class GridComparison:
    """Elementwise discrepancy summary between two grids.

    `max_rel_error` is taken only over entries whose reference magnitude
    clears `floor`; relative error against a near-zero reference is
    noise.  `zscores` is present when the first grid carries stderr.
    """

    max_abs_error: float
    max_rel_error: float
    rms_error: float
    floor: float
    zscores: np.ndarray | None = None

    @property
    def max_z(self) -> float:
        if self.zscores is None:
            raise ValueError("no stderr available, z-scores undefined")
        return float(np.max(self.zscores))


def _trial_sq_grid(cfg: McConfig, trial: int) -> np.ndarray:
    symbols = sample_symbols(cfg.constellation, cfg.n, trial_seed(cfg.base_seed, trial))
    signal = cfg.basis.matrix @ symbols
    return np.abs(dpaf_values(signal)) ** 2


def estimate_avg_grid(cfg: McConfig):
    """Sample mean of the squared grid over `cfg.trials` realizations.

    Returns an ExpectationGrid with provenance "monte_carlo".  The
    stderr field holds sqrt(sample variance / trials) per cell (ddof 1)
    and is None for a single trial.
    """
    n = cfg.n
    acc = np.zeros((n, n), dtype=float)
    acc_sq = np.zeros((n, n), dtype=float)
    for t in range(cfg.trials):
        sq = _trial_sq_grid(cfg, t)
        acc += sq
        acc_sq += sq * sq
    mean = acc / cfg.trials
    if cfg.trials > 1:
        var = (acc_sq / cfg.trials - mean * mean) * (cfg.trials / (cfg.trials - 1.0))
        stderr = np.sqrt(np.maximum(var, 0.0) / cfg.trials)
    else:
        stderr = None
    return ExpectationGrid(n=n, values=mean, provenance="monte_carlo", stderr=stderr)


def estimate_eisl(cfg: McConfig) -> EislEstimate:
    """Sample normalized integrated sidelobe level, sidelobes over mainlobe.

    Averages grid total and mainlobe separately across trials, forms
    (total - mainlobe) / mainlobe, and propagates the stderr of the
    ratio through the delta method with the sample covariance.  The
    per-realization identity total = N ||x||^4 makes the ratio nearly
    deterministic, so the stderr is typically at rounding level.
    """
    totals = np.empty(cfg.trials)
    mains = np.empty(cfg.trials)
    for t in range(cfg.trials):
        sq = _trial_sq_grid(cfg, t)
        totals[t] = sq.sum()
        mains[t] = sq[0, 0]
    tbar = float(totals.mean())
    mbar = float(mains.mean())
    normalized = (tbar - mbar) / mbar
    if cfg.trials > 1:
        cov = np.cov(totals, mains, ddof=1)
        # d(ratio)/d(tbar) = 1/mbar, d(ratio)/d(mbar) = -tbar/mbar^2
        grad = np.array([1.0 / mbar, -tbar / mbar ** 2])
        var = float(grad @ cov @ grad) / cfg.trials
        stderr = float(np.sqrt(max(var, 0.0)))
    else:
        stderr = float("nan")
    return EislEstimate(n=cfg.n, trials=cfg.trials, normalized=normalized,
                        stderr=stderr, mainlobe_mean=mbar, total_mean=tbar)


def exact_avg_grid(basis: UnitaryBasis, constellation: Constellation):
    """Exact E|X(k, q)|^2 by enumerating all M^N symbol vectors.

    The uniform average over the full alphabet product is the
    expectation with no sampling error, which makes this the ground
    truth the closed forms are held to.  Cost is M^N grids, so both N
    and the vector count are capped; exceeding either raises.
    """
    n = basis.n
    m = constellation.order
    if n > ENUMERATION_MAX_N:
        raise ValueError("enumeration is capped at N = %d, got %d" % (ENUMERATION_MAX_N, n))
    vectors = m ** n
    if vectors > ENUMERATION_MAX_VECTORS:
        raise ValueError("enumeration budget exceeded: %d^%d = %d vectors (cap %d)"
                         % (m, n, vectors, ENUMERATION_MAX_VECTORS))
    idx = np.arange(n)
    lag = (idx[None, :] - idx[:, None]) % n
    acc = np.zeros((n, n), dtype=float)
    all_idx = np.stack(np.unravel_index(np.arange(vectors), (m,) * n), axis=1)
    for start in range(0, vectors, _ENUM_CHUNK):
        chunk = constellation.points[all_idx[start:start + _ENUM_CHUNK]]
        x = chunk @ basis.matrix.T
        y = x[:, None, :] * x.conj()[:, lag]
        grids = n * np.fft.ifft(y, axis=2)
        acc += np.sum(np.abs(grids) ** 2, axis=0)
    return ExpectationGrid(n=n, values=acc / vectors, provenance="exact_enumeration")


def compare_grids(estimate, reference, floor: float | None = None) -> GridComparison:
    """Summarize elementwise discrepancy of `estimate` against `reference`.

    Both arguments are ExpectationGrids or plain arrays of equal shape.
    `floor` defaults to 1e-6 * N^2, a scale below which reference cells
    are treated as zero for relative error.  When `estimate` carries
    stderr, per-cell z-scores |est - ref| / stderr are included.  Cells
    that agree to within rounding (1e-9 of the grid peak) get z = 0
    outright: deterministically-zero sidelobes carry stderr at rounding
    level too, and a ratio of two roundoffs says nothing.
    """
    est = np.asarray(getattr(estimate, "values", estimate), dtype=float)
    ref = np.asarray(getattr(reference, "values", reference), dtype=float)
    if est.shape != ref.shape:
        raise ValueError("grid shapes differ: %r vs %r" % (est.shape, ref.shape))
    if floor is None:
        floor = 1e-6 * est.shape[0] * est.shape[1] if est.ndim == 2 else 1e-6
    diff = np.abs(est - ref)
    max_abs = float(diff.max())
    big = np.abs(ref) >= floor
    max_rel = float((diff[big] / np.abs(ref[big])).max()) if big.any() else 0.0
    rms = float(np.sqrt(np.mean((est - ref) ** 2)))
    stderr = getattr(estimate, "stderr", None)
    zscores = None
    if stderr is not None:
        stderr = np.asarray(stderr, dtype=float)
        rounding = 1e-9 * max(float(np.abs(ref).max()), 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            zscores = np.where(stderr > 0, diff / stderr,
                               np.where(diff == 0, 0.0, np.inf))
        zscores = np.where(diff <= rounding, 0.0, zscores)
    return GridComparison(max_abs_error=max_abs, max_rel_error=max_rel,
                          rms_error=rms, floor=float(floor), zscores=zscores)
