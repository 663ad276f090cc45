"""Closed-form expectations of the squared ambiguity grid.

For x = U s with i.i.d. uniform symbols of zero mean, unit power and zero
pseudo-variance, the expected squared grid depends on the alphabet only
through the kurtosis mu4 = E|s|^4:

    E|X(k, q)|^2 = N + (mu4 - 2) * T(k, q) + N^2 [k = 0][q = 0]

where T(k, q) = sum_i |X_{u_i}(k, q)|^2 accumulates the deterministic
ambiguity grids of the basis columns.  Useful specializations:

* mainlobe       E|X(0, 0)|^2 = N^2 + (mu4 - 1) N
* zero Doppler   N + (mu4 - 2) sum_i |u_i^H J_k u_i|^2,          k != 0
* zero delay     N + (mu4 - 2) N sum_i |u_i^H D_q u_i|^2,        q != 0
* general cell   N + (mu4 - 2) N sum_i |u_i^H D_q J_k u_i|^2
* total          sum over the grid = N^3 + (mu4 - 1) N^2

with D_q = Diag of column q of the normalized DFT.  The total gives a
normalized integrated sidelobe level of exactly N - 1 for every unitary
basis and every qualifying alphabet: sidelobe energy relative to the
mainlobe cannot be shaped away by the modulation, only moved.

Two independent grid evaluators are shipped: `avg_grid_general` works
from the V = U^H F^H matrix of the underlying covariance computation and
costs O(N^4); `avg_grid_fast` reuses the per-column grids from
:mod:`dpaf.ambiguity` at O(N^3 log N).  Tests hold them together at
1e-9.  Everything here is pure: inputs are frozen dataclasses and no
function keeps state between calls.
"""

import dataclasses
import warnings

import numpy as np

from . import ambiguity
from .basis import UnitaryBasis, apply_shift, dft_matrix
from .constellation import Constellation, moments, DEFAULT_MOMENT_TOL

PROVENANCES = ("closed_form_general", "closed_form_fast", "monte_carlo", "exact_enumeration")

#: s_matrix_terms builds N^2-by-N^2 intermediates; keep them small
S_MATRIX_MAX_N = 16


class TheoryInputs:
    """Basis plus kurtosis, with the derived V matrix cached.

    V = U^H F^H is the only basis-dependent object the expectation
    formulas need.  `mu4` is accepted as a bare number so hypothetical
    kurtosis values can be explored, but must be >= 1 (the floor forced
    by the power-mean inequality for any unit-power alphabet).
    """

    def __init__(self, basis: UnitaryBasis, mu4: float):
        if not mu4 >= 1.0:
            raise ValueError("kurtosis must be >= 1, got %r" % (mu4,))
        self.basis = basis
        self.mu4 = float(mu4)
        self.n = basis.n
        self.v = basis.matrix.conj().T @ dft_matrix(basis.n).conj().T
        self.v.setflags(write=False)

    @classmethod
    def from_constellation(cls, basis: UnitaryBasis, constellation: Constellation,
                           tol: float = DEFAULT_MOMENT_TOL, force: bool = False) -> "TheoryInputs":
        """Build inputs from an alphabet, gating on its moment report.

        Alphabets with nonzero mean, non-unit power or nonzero
        pseudo-variance fall outside the closed forms; they are rejected
        here unless `force` is set, in which case a warning is issued
        and the formulas are evaluated anyway (they will generally not
        match simulation).
        """
        report = moments(constellation, tol=tol)
        if not report.assumption_ok:
            msg = ("alphabet %r violates the symmetry conditions "
                   "(mean %.3g, power %.6g, pseudo-variance %.3g)"
                   % (constellation.name, abs(report.mean), report.power,
                      abs(report.pseudo_variance)))
            if not force:
                raise ValueError(msg + "; pass force=True to evaluate anyway")
            warnings.warn(msg + "; closed forms evaluated on request", stacklevel=2)
        return cls(basis, report.kurtosis)


@dataclasses.dataclass(frozen=True)
class ExpectationGrid:
    """An N-by-N grid of E|X(k, q)|^2 values with its provenance.

    `stderr` is present only for Monte Carlo estimates.
    """

    n: int
    values: np.ndarray
    provenance: str
    stderr: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.provenance not in PROVENANCES:
            raise ValueError("unknown provenance %r" % (self.provenance,))
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.n, self.n):
            raise ValueError("grid shape %r does not match n=%d" % (vals.shape, self.n))
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.stderr is not None:
            err = np.asarray(self.stderr, dtype=float).copy()
            if err.shape != (self.n, self.n):
                raise ValueError("stderr shape %r does not match n=%d" % (err.shape, self.n))
            err.setflags(write=False)
            object.__setattr__(self, "stderr", err)


@dataclasses.dataclass(frozen=True)
class EislReport:
    """Integrated sidelobe energy of an expected grid.

    total = mainlobe + eisl;  normalized = eisl / mainlobe = N - 1 for
    every basis and kurtosis (N >= 1; degenerate N = 1 gives 0).
    """

    n: int
    mu4: float
    total: float
    mainlobe: float
    eisl: float
    normalized: float


def avg_mainlobe(n: int, mu4: float) -> float:
    """Expected squared mainlobe, E|X(0, 0)|^2 = N^2 + (mu4 - 1) N."""
    if n < 1:
        raise ValueError("size must be >= 1, got %d" % n)
    if not mu4 >= 1.0:
        raise ValueError("kurtosis must be >= 1, got %r" % (mu4,))
    return float(n * n + (mu4 - 1.0) * n)


def avg_zero_doppler(t: TheoryInputs, k: int) -> float:
    """Expected squared sidelobe on the zero-Doppler axis, k = 1 .. N-1.

    N + (mu4 - 2) sum_i |u_i^H J_k u_i|^2, evaluated in O(N^2) by
    applying the shift to each column.  k = 0 is the mainlobe and is
    refused; use avg_mainlobe.
    """
    if k == 0:
        raise ValueError("k = 0 is the mainlobe cell; use avg_mainlobe")
    if not 0 < k < t.n:
        raise ValueError("delay index %d outside [1, %d)" % (k, t.n))
    u = t.basis.matrix
    shifted = np.roll(u, k, axis=0)
    d = np.sum(u.conj() * shifted, axis=0)
    return float(t.n + (t.mu4 - 2.0) * np.sum(np.abs(d) ** 2))


def avg_zero_delay(t: TheoryInputs, q: int) -> float:
    """Expected squared sidelobe on the zero-delay axis, q = 1 .. N-1.

    N + (mu4 - 2) N sum_i |u_i^H D_q u_i|^2 with D_q the diagonal of
    DFT column q.
    """
    if q == 0:
        raise ValueError("q = 0 is the mainlobe cell; use avg_mainlobe")
    if not 0 < q < t.n:
        raise ValueError("Doppler index %d outside [1, %d)" % (q, t.n))
    u = t.basis.matrix
    fq = dft_matrix(t.n)[:, q]
    d = np.sum(np.abs(u) ** 2 * fq[:, None], axis=0)
    return float(t.n + (t.mu4 - 2.0) * t.n * np.sum(np.abs(d) ** 2))


def avg_sidelobe(t: TheoryInputs, k: int, q: int) -> float:
    """Expected squared sidelobe at any (k, q) != (0, 0).

    N + (mu4 - 2) N sum_i |u_i^H D_q J_k u_i|^2; reduces to the two
    axis formulas when k or q vanishes.
    """
    if (k, q) == (0, 0):
        raise ValueError("(0, 0) is the mainlobe cell; use avg_mainlobe")
    if not 0 <= k < t.n or not 0 <= q < t.n:
        raise ValueError("indices (%d, %d) outside the %d-point grid" % (k, q, t.n))
    u = t.basis.matrix
    fq = dft_matrix(t.n)[:, q]
    shifted = np.roll(u, k, axis=0)
    d = np.sum(u.conj() * (fq[:, None] * shifted), axis=0)
    return float(t.n + (t.mu4 - 2.0) * t.n * np.sum(np.abs(d) ** 2))


def avg_grid_general(t: TheoryInputs) -> ExpectationGrid:
    """Full expected grid from the covariance route.  O(N^4) reference.

    Works column-wise in Doppler: with V = U^H F^H and rows v_i,

        T(k, q) = sum_i | sum_n V[i, n-q] conj(V[i, n]) e^(-j 2 pi k n / N) |^2

    evaluated as a dense matrix product against the unnormalized DFT
    kernel.  Kept deliberately close to the derivation as the slow
    cross-check for `avg_grid_fast`.
    """
    n = t.n
    v = t.v
    idx = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(idx, idx) / n)
    out = np.empty((n, n), dtype=float)
    for q in range(n):
        a = v[:, (idx - q) % n] * v.conj()
        t2 = np.sum(np.abs(a @ kernel) ** 2, axis=0)
        out[:, q] = n + (t.mu4 - 2.0) * t2
    out[0, 0] += float(n) * n
    return ExpectationGrid(n=n, values=out, provenance="closed_form_general")


def avg_grid_fast(t: TheoryInputs) -> ExpectationGrid:
    """Full expected grid by accumulating per-column ambiguity grids.

    T(k, q) = sum_i |X_{u_i}(k, q)|^2 uses the FFT grid of each basis
    column, O(N^3 log N) total.  The accumulator is kurtosis-free, so
    the same basis could serve any mu4; the dependence enters only in
    the final linear combination.
    """
    n = t.n
    acc = np.zeros((n, n), dtype=float)
    for i in range(n):
        acc += np.abs(ambiguity.dpaf_values(t.basis.matrix[:, i])) ** 2
    out = n + (t.mu4 - 2.0) * acc
    out[0, 0] = avg_mainlobe(n, t.mu4)
    return ExpectationGrid(n=n, values=out, provenance="closed_form_fast")


def eisl(t: TheoryInputs) -> EislReport:
    """Expected integrated sidelobe energy and its mainlobe-normalized value.

    total = N^3 + (mu4 - 1) N^2 comes from summing the closed form over
    the grid; subtracting the mainlobe and dividing by it collapses to
    N - 1 independent of basis and kurtosis.
    """
    n = t.n
    total = float(n) ** 3 + (t.mu4 - 1.0) * float(n) ** 2
    mainlobe = avg_mainlobe(n, t.mu4)
    side = total - mainlobe
    return EislReport(n=n, mu4=t.mu4, total=total, mainlobe=mainlobe,
                      eisl=side, normalized=side / mainlobe)


def sidelobe_bounds(n: int, mu4: float) -> tuple[float, float]:
    """Range the expected squared sidelobes can occupy, for 1 <= mu4 <= 2.

    Cauchy-Schwarz pins every cross term |u^H D_q J_k u|^2 inside
    [0, 1/N], giving [(mu4 - 1) N, N] for sub-Gaussian kurtosis.  Above
    mu4 = 2 the sign of (mu4 - 2) flips the role of the endpoints and
    uniform alphabets never reach there, so such inputs are refused
    rather than extrapolated.
    """
    if n < 1:
        raise ValueError("size must be >= 1, got %d" % n)
    if not 1.0 <= mu4 <= 2.0:
        raise ValueError("bounds are stated for 1 <= mu4 <= 2, got %r" % (mu4,))
    return ((mu4 - 1.0) * n, float(n))


def s_matrix_terms(t: TheoryInputs, k: int, q: int, m: int, n: int) -> tuple[complex, complex, complex]:
    """Bilinear forms behind one covariance entry of the grid expectation.

    With s~ = conj(s) kron s, the fourth-moment matrix S = E[s~ s~^H]
    of a qualifying alphabet splits as S = I + S1 + S2, where S1 puts
    (mu4 - 2) on the vec-diagonal positions a (N+1) and S2 is the outer
    product g g^T of the indicator of those positions (at the all-equal
    cell I and S2 overlap, which is exactly what makes the entry mu4).
    Sandwiched between Kronecker products of columns v_n of V = U^H F^H
    shifted by q, the pieces evaluate to

        term1 = delta[m == n]
        term2 = (mu4 - 2) * 1^T (v_{n-q} o conj(v_n) o conj(v_{m-q}) o v_m)
        term3 = delta[q == 0]

    (o is the elementwise product; column indices mod N), and the grid
    expectation is recovered as

        E|X(k, q)|^2 = sum_{m,n} e^(-j 2 pi k (n - m) / N) (term1 + term2 + term3).

    The delay k enters only through that exterior phase, so the returned
    terms are k-independent; k is still validated against the grid.
    Dense N^2-by-N^2 matrices are built on purpose, mirroring the
    derivation, and sizes above S_MATRIX_MAX_N are refused.
    """
    size = t.n
    if size > S_MATRIX_MAX_N:
        raise ValueError("dense S-matrix route is capped at N = %d, got %d" % (S_MATRIX_MAX_N, size))
    for namei, i in (("k", k), ("q", q), ("m", m), ("n", n)):
        if not 0 <= i < size:
            raise ValueError("index %s = %d outside [0, %d)" % (namei, i, size))
    v = t.v
    diag_pos = np.arange(size) * (size + 1)
    s1 = np.zeros((size * size, size * size), dtype=float)
    s1[diag_pos, diag_pos] = t.mu4 - 2.0
    g = np.zeros(size * size, dtype=float)
    g[diag_pos] = 1.0
    s2 = np.outer(g, g)
    left = np.kron(v[:, (n - q) % size], v[:, n].conj())
    right = np.kron(v[:, (m - q) % size].conj(), v[:, m])
    term1 = complex(left @ right)
    term2 = complex(left @ s1 @ right)
    term3 = complex(left @ s2 @ right)
    return term1, term2, term3
