"""Symbol alphabets and their exact statistical moments.

The statistical predictions in :mod:`dpaf.theory` hold for symbols drawn
i.i.d. and uniformly from an alphabet with zero mean, unit average power
and zero pseudo-variance (E s^2 = 0).  The only alphabet statistic that
then survives into the predictions is the fourth-moment ratio

    mu4 = E|s - E s|^4 / (E|s - E s|^2)^2

which equals E|s|^4 under the constraints above.  All PSK alphabets have
mu4 = 1, square QAM grids land in [1, 2], and mu4 = 2 is the circular
complex Gaussian value.  BPSK fails the pseudo-variance condition (its
points are real, so E s^2 = 1) and is rejected by the theory layer unless
explicitly forced.
"""

import dataclasses
import math

import numpy as np

from .seeding import philox

DEFAULT_MOMENT_TOL = 1e-9


@dataclasses.dataclass(frozen=True)
class Constellation:
    """A finite symbol alphabet sampled uniformly.

    Parameters
    ----------
    points : np.ndarray
        Complex alphabet points, shape (M,).  Must be non-empty and free
        of duplicates.  The array is frozen after construction.
    name : str
        Short label used in reports and output manifests.
    """

    points: np.ndarray
    name: str = "custom"

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=complex)
        if pts.ndim != 1 or pts.size == 0:
            raise ValueError("alphabet must be a non-empty 1-D array")
        if np.unique(pts).size != pts.size:
            raise ValueError("alphabet contains duplicate points")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def order(self) -> int:
        """Number of alphabet points."""
        return self.points.size


@dataclasses.dataclass(frozen=True)
class MomentReport:
    """Exact moments of a uniformly sampled alphabet.

    Attributes
    ----------
    mean : complex
        E s.
    power : float
        E|s|^2.
    pseudo_variance : complex
        E s^2.
    kurtosis : float
        Centered fourth-moment ratio mu4.  NaN for a single-point
        alphabet, whose centered power vanishes.
    assumption_ok : bool
        True when |mean|, |power - 1| and |pseudo_variance| are all
        within `tol`, i.e. the alphabet qualifies for the closed-form
        statistics.
    tol : float
        Tolerance the check was run with.
    """

    mean: complex
    power: float
    pseudo_variance: complex
    kurtosis: float
    assumption_ok: bool
    tol: float


def moments(constellation: Constellation, tol: float = DEFAULT_MOMENT_TOL) -> MomentReport:
    """Compute exact alphabet moments by direct enumeration.

    All expectations are plain averages over the alphabet (uniform
    symbol distribution), so the report is exact up to floating point.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    pts = constellation.points
    mean = complex(np.mean(pts))
    power = float(np.mean(np.abs(pts) ** 2))
    pseudo = complex(np.mean(pts ** 2))
    centered = pts - mean
    second = float(np.mean(np.abs(centered) ** 2))
    if second > 0:
        kurtosis = float(np.mean(np.abs(centered) ** 4) / second ** 2)
    else:
        kurtosis = float("nan")
    ok = abs(mean) <= tol and abs(power - 1.0) <= tol and abs(pseudo) <= tol
    return MomentReport(mean=mean, power=power, pseudo_variance=pseudo,
                        kurtosis=kurtosis, assumption_ok=ok, tol=tol)


def make_psk(order: int) -> Constellation:
    """Build an `order`-ary PSK alphabet.

    Points are e^(j 2 pi m / order) for m = 0 .. order-1.  Unit power by
    construction; mu4 = 1 for every order.  Note order 2 (BPSK) has
    pseudo-variance 1 and therefore does not qualify for the closed-form
    statistics, even though it is a perfectly valid alphabet.
    """
    if order < 2:
        raise ValueError("PSK order must be >= 2, got %r" % (order,))
    m = np.arange(order)
    pts = np.exp(2j * np.pi * m / order)
    return Constellation(points=pts, name="psk%d" % order)


def make_qam(order: int) -> Constellation:
    """Build a square-grid QAM alphabet normalized to unit average power.

    The grid has side sqrt(order); for the usual even side lengths
    (order 4, 16, 64, 256, ...) the unnormalized coordinates are the odd
    integers -(L-1), ..., -1, +1, ..., +(L-1) on both axes.  The whole
    grid is scaled by the exact second moment of the integer lattice, so
    E|s|^2 = 1 holds to machine precision and the kurtosis is the exact
    lattice value (1.32 for 16-QAM, 29/21 for 64-QAM).
    """
    side = math.isqrt(int(order))
    if side * side != order or order < 4:
        raise ValueError("QAM order must be a perfect square >= 4, got %r" % (order,))
    coords = 2 * np.arange(side) - (side - 1)
    re, im = np.meshgrid(coords, coords, indexing="ij")
    pts = (re + 1j * im).ravel()
    scale = math.sqrt(np.mean(np.abs(pts) ** 2))
    return Constellation(points=pts / scale, name="qam%d" % order)


def sample_symbols(constellation: Constellation, n: int, seed: int) -> np.ndarray:
    """Draw `n` i.i.d. uniform symbols from the alphabet.

    The draw is a vectorized `Generator.integers(0, M, n)` index lookup
    on a Philox generator keyed with `seed` (see :mod:`dpaf.seeding`),
    so equal arguments give bitwise-equal symbol vectors.
    """
    if n < 1:
        raise ValueError("symbol count must be >= 1, got %d" % n)
    rng = philox(seed)
    idx = rng.integers(0, constellation.order, size=n)
    return constellation.points[idx]


def load_constellation(path: str, normalize: bool = False, name: str | None = None) -> Constellation:
    """Read an alphabet from a text file of "re im" pairs.

    Blank lines and lines starting with '#' are skipped.  Points are
    taken verbatim unless `normalize` is set, in which case the whole
    alphabet is rescaled to unit average power.  Duplicate points are
    rejected.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise ValueError("%s:%d: expected 're im', got %r" % (path, lineno, raw.rstrip()))
            rows.append(complex(float(parts[0]), float(parts[1])))
    if not rows:
        raise ValueError("%s: no alphabet points found" % path)
    pts = np.array(rows, dtype=complex)
    if normalize:
        power = np.mean(np.abs(pts) ** 2)
        if power == 0:
            raise ValueError("%s: cannot normalize an all-zero alphabet" % path)
        pts = pts / math.sqrt(power)
    return Constellation(points=pts, name=name if name is not None else "file")
