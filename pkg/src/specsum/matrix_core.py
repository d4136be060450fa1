"""Dense symmetric matrices, spectra, norms, and synthetic SPD generation.

Provides the matrix representation shared by every estimator, the exact
eigendecomposition oracle used as ground truth, the encoding
normalization mu(A), condition-number-controlled SPD test matrices, and
Matrix Market I/O.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.io
import scipy.sparse

from .rng import stream

__all__ = [
    "SymmetricMatrix",
    "SpectralData",
    "MatrixStats",
    "load_matrix_market",
    "save_matrix_market",
    "generate_spd",
    "spectral_decompose",
    "compute_mu",
    "compute_stats",
    "condition_number",
    "exact_spectral_sum",
    "scale_to_contraction",
    "SYMMETRY_TOL",
]

# Absolute tolerance under which asymmetric input is silently symmetrized.
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class SymmetricMatrix:
    """Dense real symmetric matrix with a lazily cached eigendecomposition.

    Attributes:
        n: Dimension.
        entries: (n, n) float array, exactly symmetric, read-only.
        spd_flag: Whether positive-definiteness is asserted.
    """

    n: int
    entries: np.ndarray
    spd_flag: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("entries must be a square matrix")
        if a.shape[0] != self.n:
            raise ValueError("dimension mismatch between n and entries")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def spectral(self) -> "SpectralData":
        """Cached spectral decomposition of this matrix."""
        if "spectral" not in self._cache:
            self._cache["spectral"] = spectral_decompose(self)
        return self._cache["spectral"]

    @property
    def stats(self) -> "MatrixStats":
        """Cached norm/condition/mu statistics."""
        if "stats" not in self._cache:
            self._cache["stats"] = compute_stats(self)
        return self._cache["stats"]


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition of a symmetric matrix.

    Attributes:
        eigenvalues: n reals sorted descending.
        eigenvectors: (n, n) orthogonal matrix whose columns match
            eigenvalues.
        singular_values: |eigenvalues| sorted descending.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    singular_values: np.ndarray


@dataclass(frozen=True)
class MatrixStats:
    """Norms, condition number, and encoding normalization of a matrix.

    Attributes:
        spectral_norm: Largest singular value.
        frobenius_norm: Frobenius norm.
        kappa: Ratio of largest to smallest nonzero singular value.
        mu: Encoding normalization, min over the Frobenius norm and the
            sqrt(s_{2p} * s_{2(1-p)}) candidates on a p-grid.
        s_p_values: Map from sampled exponent p to s_p(A).
    """

    spectral_norm: float
    frobenius_norm: float
    kappa: float
    mu: float
    s_p_values: dict


def load_matrix_market(path) -> SymmetricMatrix:
    """Read a Matrix Market file (coordinate or array) as a SymmetricMatrix.

    Asymmetry within ``SYMMETRY_TOL`` is repaired as (A + A^T)/2; larger
    asymmetry is an error.

    Args:
        path: Path to a .mtx file.

    Returns:
        SymmetricMatrix with the file contents.

    Raises:
        ValueError: On non-square input or asymmetry beyond tolerance.
    """
    m = scipy.io.mmread(path)
    if scipy.sparse.issparse(m):
        m = m.toarray()
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix market file is not square")
    gap = np.max(np.abs(m - m.T)) if m.size else 0.0
    if gap > SYMMETRY_TOL:
        raise ValueError(
            f"asymmetric beyond tolerance: max |a_ij - a_ji| = {gap:.3e} > {SYMMETRY_TOL:.0e}"
        )
    return SymmetricMatrix(n=m.shape[0], entries=m)


def save_matrix_market(path, A: SymmetricMatrix) -> None:
    """Write a SymmetricMatrix to a Matrix Market array file."""
    scipy.io.mmwrite(path, np.asarray(A.entries), symmetry="symmetric")


def generate_spd(n: int, kappa: float, profile: str, norm_cap: float, seed: int) -> SymmetricMatrix:
    """Generate a random SPD matrix with an exactly pinned condition number.

    The eigenvalues live on [norm_cap/kappa, norm_cap] with both
    endpoints always included, so the condition number equals kappa
    exactly.  The eigenbasis is Haar-random orthogonal.

    Args:
        n: Dimension, at least 2.
        kappa: Target condition number, at least 1.
        profile: One of "log_uniform", "uniform", "clustered" for the
            interior eigenvalues.
        norm_cap: Spectral norm of the result, in (0, 1].
        seed: RNG seed.

    Returns:
        SymmetricMatrix with spd_flag set.

    Raises:
        ValueError: On kappa < 1, n < 2, or an unknown profile.
    """
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    if n < 2:
        raise ValueError("n must be >= 2")
    if not (0 < norm_cap <= 1):
        raise ValueError("norm_cap must lie in (0, 1]")
    rng = stream(seed, 0)
    lo, hi = norm_cap / kappa, norm_cap
    k = n - 2
    if profile == "log_uniform":
        interior = np.exp(rng.uniform(math.log(lo), math.log(hi), size=k))
    elif profile == "uniform":
        interior = rng.uniform(lo, hi, size=k)
    elif profile == "clustered":
        pick = rng.random(k) < 0.5
        spread = 0.05 * (hi - lo)
        interior = np.where(
            pick,
            np.minimum(hi, lo + spread * rng.random(k)),
            np.maximum(lo, hi - spread * rng.random(k)),
        )
    else:
        raise ValueError(f"unknown profile: {profile!r}")
    eigs = np.concatenate([[hi, lo], interior])
    q = _haar_orthogonal(n, stream(seed, 1))
    a = (q * eigs) @ q.T
    m = SymmetricMatrix(n=n, entries=a, spd_flag=True)
    return m


def _haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix via QR with sign fixing."""
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def spectral_decompose(A: SymmetricMatrix) -> SpectralData:
    """Eigendecompose a symmetric matrix with eigenvalues sorted descending.

    Returns:
        SpectralData; eigenvector columns are orthonormal and
        reconstruct A to high accuracy.

    Raises:
        np.linalg.LinAlgError: If the eigensolver fails to converge.
    """
    w, v = np.linalg.eigh(np.asarray(A.entries))
    order = np.argsort(w)[::-1]
    w = w[order]
    v = v[:, order]
    w.setflags(write=False)
    v.setflags(write=False)
    sv = np.sort(np.abs(w))[::-1]
    sv.setflags(write=False)
    return SpectralData(eigenvalues=w, eigenvectors=v, singular_values=sv)


def _row_power_sum_max(absA: np.ndarray, p: float) -> float:
    """s_p(A) = max_i sum_j |a_ij|^p, with 0^0 treated as 0."""
    with np.errstate(divide="ignore"):
        powd = np.where(absA > 0, absA**p, 0.0)
    return float(np.max(np.sum(powd, axis=1)))


def compute_mu(A: SymmetricMatrix, grid_points: int = 101) -> float:
    """Encoding normalization mu(A).

    Minimum of the Frobenius norm and sqrt(s_{2p}(A) * s_{2(1-p)}(A^T))
    over a uniform p-grid in [0, 1].

    Args:
        A: Input matrix.
        grid_points: Number of grid values of p, at least 2.

    Returns:
        The minimized normalization; never exceeds the Frobenius norm.
    """
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    absA = np.abs(np.asarray(A.entries))
    best = float(np.linalg.norm(absA))
    for p in np.linspace(0.0, 1.0, grid_points):
        cand = math.sqrt(_row_power_sum_max(absA, 2 * p) * _row_power_sum_max(absA.T, 2 * (1 - p)))
        best = min(best, cand)
    return best


def condition_number(A: SymmetricMatrix) -> float:
    """Ratio of largest to smallest nonzero singular value."""
    sv = A.spectral.singular_values
    nz = sv[sv > sv[0] * 1e-14] if sv[0] > 0 else sv[:0]
    if nz.size == 0:
        raise ValueError("zero matrix has no condition number")
    return float(nz[0] / nz[-1])


def compute_stats(A: SymmetricMatrix, grid_points: int = 101) -> MatrixStats:
    """Assemble norms, condition number, mu, and sample s_p values."""
    sv = A.spectral.singular_values
    absA = np.abs(np.asarray(A.entries))
    s_p = {p: _row_power_sum_max(absA, p) for p in (0.5, 1.0, 1.5, 2.0)}
    return MatrixStats(
        spectral_norm=float(sv[0]),
        frobenius_norm=float(np.linalg.norm(absA)),
        kappa=condition_number(A),
        mu=compute_mu(A, grid_points),
        s_p_values=s_p,
    )


def exact_spectral_sum(A: SymmetricMatrix, f: str, p: float | None = None) -> float:
    """Ground-truth spectral sum Tr f(A) = sum_j f(lambda_j).

    Args:
        A: Input matrix.
        f: One of "log", "inverse", "x_pow_p", "neg_xlogx", "exp".
        p: Exponent, required for f="x_pow_p".

    Returns:
        The exact spectral sum from the eigendecomposition.

    Raises:
        ValueError: On domain violations (log/inverse of a nonpositive
            eigenvalue, neg_xlogx outside (0, 1]) or a missing p.
    """
    w = A.spectral.eigenvalues
    if f == "log":
        if np.any(w <= 0):
            raise ValueError("log requires strictly positive eigenvalues")
        return float(np.sum(np.log(w)))
    if f == "inverse":
        if np.any(w <= 0):
            raise ValueError("inverse requires strictly positive eigenvalues")
        return float(np.sum(1.0 / w))
    if f == "x_pow_p":
        if p is None:
            raise ValueError("x_pow_p requires the exponent p")
        return float(np.sum(np.abs(w) ** p))
    if f == "neg_xlogx":
        if np.any(w < 0) or np.any(w > 1):
            raise ValueError("neg_xlogx requires eigenvalues in [0, 1]")
        pos = w[w > 0]
        return float(-np.sum(pos * np.log(pos)))
    if f == "exp":
        return float(np.sum(np.exp(w)))
    raise ValueError(f"unknown spectral function: {f!r}")


def scale_to_contraction(A: SymmetricMatrix, target: float):
    """Scale A so its spectral norm equals target.

    Args:
        A: Input matrix, nonzero.
        target: Desired spectral norm in (0, 1).

    Returns:
        Tuple (A/alpha as SymmetricMatrix, alpha) with
        ||A/alpha|| == target; callers undo via the n*log(alpha)
        correction.

    Raises:
        ValueError: For the zero matrix or target outside (0, 1).
    """
    if not (0 < target < 1):
        raise ValueError("target must lie in (0, 1)")
    norm = float(A.spectral.singular_values[0])
    if norm == 0:
        raise ValueError("cannot scale the zero matrix")
    alpha = norm / target
    scaled = SymmetricMatrix(n=A.n, entries=np.asarray(A.entries) / alpha, spd_flag=A.spd_flag)
    return scaled, alpha
