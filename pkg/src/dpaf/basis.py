"""Orthonormal modulation bases, the normalized DFT, and periodic shifts.

A transmitted frame is x = U s where the columns u_0 .. u_{N-1} of the
unitary matrix U carry one random symbol each.  Shipped families:

* ``sc``    single carrier, U = I;
* ``ofdm``  U = F^H with F the normalized DFT below;
* ``otfs``  U = F_C^H kron I_L for a C-by-L delay-Doppler grid (N = C*L);
* ``afdm``  U = L1^H F^H L2^H with Lc = Diag(e^(-j 2 pi c n^2)) chirps;
* Haar-random unitaries, drawn once from a seeded generator, as a
  structure-free reference point.

DFT convention used everywhere in this package:

    F[m, n] = exp(-j 2 pi m n / N) / sqrt(N),   m, n = 0 .. N-1,

so F x equals np.fft.fft(x) / sqrt(N).  Under this convention the cyclic
shift J_k (x -> np.roll(x, k)) factors as J_k = sqrt(N) F^H D_k F with
D_k = Diag of column k of F, an identity the tests pin down exactly.
"""

import dataclasses
from typing import NamedTuple

import numpy as np

from .seeding import philox

FAMILIES = ("sc", "ofdm", "otfs", "afdm", "custom")

#: unitarity defect allowed for matrices built by this module, scaled by N
CONSTRUCTION_TOL = 1e-10

#: looser gate for matrices imported from text files (round-trip loss)
IMPORT_TOL = 1e-8


class UnitaryCheck(NamedTuple):
    ok: bool
    defect: float


@dataclasses.dataclass(frozen=True)
class UnitaryBasis:
    """A unitary modulation basis.

    Attributes
    ----------
    family : str
        One of FAMILIES.
    n : int
        Frame length; `matrix` is n-by-n.
    matrix : np.ndarray
        The unitary matrix U, frozen after construction.
    params : dict
        Family parameters (OTFS grid split, AFDM chirp rates, Haar seed).
    """

    family: str
    n: int
    matrix: np.ndarray
    params: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError("unknown basis family %r" % (self.family,))
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("basis matrix must be square, got shape %r" % (mat.shape,))
        if self.n != mat.shape[0]:
            raise ValueError("declared size %d does not match matrix shape %r" % (self.n, mat.shape))
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def dft_matrix(n: int) -> np.ndarray:
    """Normalized DFT matrix, F[m, k] = e^(-j 2 pi m k / n) / sqrt(n)."""
    if n < 1:
        raise ValueError("size must be >= 1, got %d" % n)
    m = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(m, m) / n) / np.sqrt(n)


def apply_shift(x: np.ndarray, k: int) -> np.ndarray:
    """Apply the cyclic delay J_k to a vector: sample i moves to i + k mod N.

    Runs in O(N) without forming the permutation matrix.  The shift index
    must already be reduced to 0 <= k < N; out-of-range values raise
    instead of being wrapped silently.
    """
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError("expected a 1-D vector")
    if not 0 <= k < x.size:
        raise ValueError("shift index %d outside [0, %d)" % (k, x.size))
    return np.roll(x, k)


def dense_shift_matrix(n: int, k: int) -> np.ndarray:
    """Dense J_k with J_k[a, b] = 1 iff a - b = k (mod n).  Test helper."""
    if not 0 <= k < n:
        raise ValueError("shift index %d outside [0, %d)" % (k, n))
    return np.roll(np.eye(n), k, axis=0)


def verify_unitary(matrix: np.ndarray, tol: float) -> UnitaryCheck:
    """Check U^H U = I in Frobenius norm.

    Returns (ok, defect) with defect = ||U^H U - I||_F, so callers can
    report how far a matrix is from unitary rather than just reject it.
    """
    mat = np.asarray(matrix, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix, got shape %r" % (mat.shape,))
    gram = mat.conj().T @ mat
    defect = float(np.linalg.norm(gram - np.eye(mat.shape[0])))
    return UnitaryCheck(ok=defect <= tol, defect=defect)


def _checked(family: str, n: int, matrix: np.ndarray, params: dict) -> UnitaryBasis:
    check = verify_unitary(matrix, CONSTRUCTION_TOL * n)
    if not check.ok:
        raise ValueError("constructed %s basis fails unitarity, defect %.3e" % (family, check.defect))
    return UnitaryBasis(family=family, n=n, matrix=matrix, params=params)


def basis_sc(n: int) -> UnitaryBasis:
    """Single carrier: symbols map straight to time samples."""
    if n < 1:
        raise ValueError("size must be >= 1, got %d" % n)
    return _checked("sc", n, np.eye(n, dtype=complex), {})


def basis_ofdm(n: int) -> UnitaryBasis:
    """OFDM: U = F^H, each symbol rides one subcarrier."""
    return _checked("ofdm", n, dft_matrix(n).conj().T, {})


def basis_otfs(c: int, l: int) -> UnitaryBasis:
    """OTFS over a c-by-l delay-Doppler grid, U = F_c^H kron I_l.

    Built structurally: the (a, b) block entry of the Kronecker product
    is (F_c^H)[a, b] I_l, which the reshaped view below fills without
    forming intermediate products.  Frame length is c * l.
    """
    if c < 1 or l < 1:
        raise ValueError("grid split must be positive, got c=%r l=%r" % (c, l))
    n = c * l
    fch = dft_matrix(c).conj().T
    out = np.zeros((n, n), dtype=complex)
    view = out.reshape(c, l, c, l)
    for b in range(l):
        view[:, b, :, b] = fch
    return _checked("otfs", n, out, {"c": c, "l": l})


def basis_afdm(n: int, c1: float, c2: float) -> UnitaryBasis:
    """AFDM: U = L1^H F^H L2^H with Lc = Diag(e^(-j 2 pi c i^2)).

    Periodicity of the first chirp requires n even and 2*n*c1 integral;
    both are validated (the integrality within 1e-9).  c1 = p / (2 n)
    for integer p is the natural parameterization.  No default chirp
    rates are assumed; callers pass both explicitly.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError("AFDM size must be even and >= 2, got %d" % n)
    p = 2.0 * n * c1
    if abs(p - round(p)) > 1e-9:
        raise ValueError("2*n*c1 must be an integer, got %.12g" % p)
    i = np.arange(n)
    lam1 = np.exp(2j * np.pi * c1 * i ** 2)      # L1^H diagonal
    lam2 = np.exp(2j * np.pi * c2 * i ** 2)      # L2^H diagonal
    mat = lam1[:, None] * dft_matrix(n).conj().T * lam2[None, :]
    return _checked("afdm", n, mat, {"c1": float(c1), "c2": float(c2)})


def basis_haar(n: int, seed: int) -> UnitaryBasis:
    """Haar-random unitary from a seeded Philox stream.

    QR of a complex Gaussian matrix with the R diagonal phase folded
    back into Q, which makes the distribution exactly Haar instead of
    QR-convention dependent.  Same (n, seed) gives the same matrix.
    """
    if n < 1:
        raise ValueError("size must be >= 1, got %d" % n)
    rng = philox(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d)).conj()
    return _checked("custom", n, q, {"kind": "haar", "seed": int(seed)})


def custom_basis(matrix: np.ndarray, params: dict | None = None,
                 tol: float = CONSTRUCTION_TOL) -> UnitaryBasis:
    """Wrap a caller-supplied matrix after a unitarity check at tol * n."""
    mat = np.asarray(matrix, dtype=complex)
    check = verify_unitary(mat, tol * mat.shape[0])
    if not check.ok:
        raise ValueError("matrix is not unitary, defect %.3e" % check.defect)
    return UnitaryBasis(family="custom", n=mat.shape[0], matrix=mat,
                        params=dict(params) if params else {})


def load_basis_matrix(path: str) -> np.ndarray:
    """Read a complex square matrix from a text file.

    One matrix row per line; entries are whitespace separated and each
    entry is either "re" or "re,im".  Blank lines and '#' comments are
    skipped.
    """
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            entries = []
            for tok in line.split():
                parts = tok.split(",")
                if len(parts) == 1:
                    entries.append(complex(float(parts[0]), 0.0))
                elif len(parts) == 2:
                    entries.append(complex(float(parts[0]), float(parts[1])))
                else:
                    raise ValueError("%s:%d: bad entry %r" % (path, lineno, tok))
            rows.append(entries)
    if not rows:
        raise ValueError("%s: no matrix rows found" % path)
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("%s: matrix is not square" % path)
    return np.array(rows, dtype=complex)


def load_custom_basis(path: str) -> UnitaryBasis:
    """Load a basis matrix from `path`, gated at the import tolerance.

    File round-trips lose a few digits, so imports are accepted at
    IMPORT_TOL * n instead of the construction tolerance.
    """
    mat = load_basis_matrix(path)
    return custom_basis(mat, params={"path": str(path)}, tol=IMPORT_TOL)
