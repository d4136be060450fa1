"""Emulated block-encodings and their algebra.

A block-encoding is represented by its exact encoded block (payload),
the normalization alpha, an ancilla count, an error budget eps, and an
abstract per-use query cost.  Perturbations are injected explicitly
(exact, adversarial, or stochastic mode) and compositions propagate
parameters exactly as the corresponding lemmas prescribe, so the cost
ledger of any composite equals the lemma cost expression evaluated on
its inputs.

Cost convention: one application of the matrix-access unitary costs one
query unit; polylog(n) factors are fixed to ceil(log2 n)^2 uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .matrix_core import SymmetricMatrix, SpectralData, compute_mu
from .polyapprox import ChebyshevSeries
from .rng import stream

__all__ = [
    "BlockEncoding",
    "SveOracle",
    "CostLedger",
    "polylog",
    "qram_block_encoding",
    "unit_block_encoding",
    "apply_svt",
    "product_plain",
    "product_preamplified",
    "matrix_power",
    "density_block_encoding",
    "sve_estimate",
    "sve_all",
]


def polylog(n: int) -> float:
    """The fixed polylog(n) convention: ceil(log2 n)^2, at least 1."""
    return float(max(1, math.ceil(math.log2(max(2, n)))) ** 2)


@dataclass
class CostLedger:
    """Accumulated abstract query costs of one estimator run.

    Attributes:
        be_uses: Number of block-encoding applications.
        sve_calls: Number of singular-value-estimation invocations.
        ae_rounds: Number of amplitude-estimation reflection rounds.
        total_queries: Total query units charged.
    """

    be_uses: float = 0.0
    sve_calls: float = 0.0
    ae_rounds: float = 0.0
    total_queries: float = 0.0

    def charge(self, queries: float, be_uses: float = 0.0, sve_calls: float = 0.0,
               ae_rounds: float = 0.0) -> None:
        self.total_queries += queries
        self.be_uses += be_uses
        self.sve_calls += sve_calls
        self.ae_rounds += ae_rounds

    def as_dict(self) -> dict:
        return {
            "be_uses": self.be_uses,
            "sve_calls": self.sve_calls,
            "ae_rounds": self.ae_rounds,
            "total_queries": self.total_queries,
        }


def _symmetric_direction(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random symmetric matrix of unit spectral norm."""
    g = rng.standard_normal((n, n))
    g = 0.5 * (g + g.T)
    norm = np.linalg.norm(g, 2)
    return g / norm if norm > 0 else g


def _draw_perturbation(target: np.ndarray, eps: float, mode: str, seed: int) -> np.ndarray:
    """Perturbation E with ||E|| <= eps for the requested mode.

    Adversarial mode saturates the budget along the top eigenvector of
    the target; stochastic mode scales a random symmetric direction by
    a uniform fraction of the budget.
    """
    n = target.shape[0]
    if mode == "exact" or eps == 0.0:
        return np.zeros_like(target)
    if mode == "adversarial":
        w, v = np.linalg.eigh(target)
        top = v[:, np.argmax(np.abs(w))]
        return eps * np.outer(top, top)
    if mode == "stochastic":
        rng = stream(seed, 0xE)
        return eps * rng.uniform(0.0, 1.0) * _symmetric_direction(n, rng)
    raise ValueError(f"unknown perturbation mode: {mode!r}")


@dataclass(frozen=True)
class BlockEncoding:
    """An emulated (alpha, q, eps)-block-encoding.

    Attributes:
        payload: Exact encoded block (the target divided by alpha).
        alpha: Normalization, at least the target's spectral norm.
        ancillas: Ancilla qubit count q.
        eps: Encoding error budget; the effective payload deviates from
            the exact one by at most eps/alpha in spectral norm.
        use_cost: Query units charged per application.
        perturbation_mode: "exact", "adversarial", or "stochastic".
        seed: Perturbation stream seed.
        perturbation: The drawn payload-level perturbation (fixed at
            construction; includes noise inherited from inputs).
    """

    payload: np.ndarray
    alpha: float
    ancillas: int
    eps: float
    use_cost: float
    perturbation_mode: str
    seed: int
    perturbation: np.ndarray = None

    def __post_init__(self):
        p = np.array(self.payload, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "payload", p)
        if self.perturbation is None:
            object.__setattr__(self, "perturbation", np.zeros_like(p))
        else:
            e = np.array(self.perturbation, dtype=float)
            e.setflags(write=False)
            object.__setattr__(self, "perturbation", e)
        if self.use_cost <= 0:
            raise ValueError("use_cost must be positive")

    @property
    def n(self) -> int:
        return self.payload.shape[0]

    @property
    def target(self) -> np.ndarray:
        """The exactly encoded matrix alpha * payload."""
        return self.alpha * self.payload

    @property
    def payload_effective(self) -> np.ndarray:
        """Payload plus the drawn perturbation."""
        return self.payload + self.perturbation

    def encoding_defect(self) -> float:
        """Measured ||alpha * payload_effective - target||."""
        return float(self.alpha * np.linalg.norm(self.perturbation, 2))


def qram_block_encoding(A: SymmetricMatrix, mode: str = "exact", seed: int = 0) -> BlockEncoding:
    """(mu, log n, 0)-block-encoding of A from quantum-access structures.

    Args:
        A: Symmetric matrix with spectral norm at most 1.
        mode: Perturbation mode (a zero budget makes all modes exact).
        seed: Perturbation stream seed.

    Returns:
        Exact encoding with alpha = mu(A) and use_cost = polylog(n).

    Raises:
        ValueError: If ||A|| > 1.
    """
    if A.stats.spectral_norm > 1 + 1e-12:
        raise ValueError("qram encoding requires ||A|| <= 1")
    mu = A.stats.mu
    return BlockEncoding(
        payload=np.asarray(A.entries) / mu,
        alpha=mu,
        ancillas=max(1, math.ceil(math.log2(A.n))),
        eps=0.0,
        use_cost=polylog(A.n),
        perturbation_mode=mode,
        seed=seed,
    )


def unit_block_encoding(A: SymmetricMatrix, eps: float, mode: str = "exact",
                        seed: int = 0) -> BlockEncoding:
    """(1, 1 + log(n/eps), eps)-block-encoding of an SPD contraction.

    Args:
        A: SPD matrix with spectral norm at most 1.
        eps: Encoding error, positive.
        mode: Perturbation mode.
        seed: Perturbation stream seed.

    Returns:
        Encoding with alpha = 1 and use_cost mu(A)/eps * polylog(n).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if A.stats.spectral_norm > 1 + 1e-12:
        raise ValueError("unit encoding requires ||A|| <= 1")
    if not A.spd_flag:
        raise ValueError("unit encoding is restricted to SPD input")
    payload = np.asarray(A.entries, dtype=float)
    pert = _draw_perturbation(payload, eps, mode, seed)
    return BlockEncoding(
        payload=payload,
        alpha=1.0,
        ancillas=1 + math.ceil(math.log2(A.n / eps)),
        eps=eps,
        use_cost=(A.stats.mu / eps) * polylog(A.n),
        perturbation_mode=mode,
        seed=seed,
        perturbation=pert,
    )


def density_block_encoding(rho: SymmetricMatrix) -> BlockEncoding:
    """(1, 2 log n, 0)-block-encoding of a density matrix.

    Args:
        rho: PSD matrix with unit trace (within 1e-10).

    Returns:
        Exact encoding with alpha = 1 and unit use cost.

    Raises:
        ValueError: If the trace deviates from 1.
    """
    tr = float(np.trace(np.asarray(rho.entries)))
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"density encoding requires unit trace, got {tr!r}")
    logn = max(1, math.ceil(math.log2(rho.n)))
    return BlockEncoding(
        payload=np.asarray(rho.entries),
        alpha=1.0,
        ancillas=2 * logn,
        eps=0.0,
        use_cost=1.0,
        perturbation_mode="exact",
        seed=0,
    )


def _matfun(sym: np.ndarray, fn) -> np.ndarray:
    """Apply a scalar function to a symmetric matrix via eigh."""
    w, v = np.linalg.eigh(sym)
    return (v * fn(w)) @ v.T


def apply_svt(be: BlockEncoding, p: ChebyshevSeries, nu: float = 1e-12) -> BlockEncoding:
    """Singular-value transformation by a 1/2-bounded polynomial.

    Produces a (1, q+2, 4 d sqrt(eps/alpha) + nu)-encoding of
    P(A/alpha) using d applications of the input encoding plus one
    controlled application.

    Args:
        be: Input encoding of a symmetric target.
        p: Polynomial with global bound at most 1/2.
        nu: Additional implementation error injected per the input's
            perturbation mode.

    Returns:
        Transformed encoding.

    Raises:
        ValueError: If the polynomial's certified global bound
            exceeds 1/2.
    """
    if p.global_bound > 0.5 + 1e-12:
        raise ValueError("SVT polynomial must satisfy |P| <= 1/2 on [-1, 1]")
    d = p.degree
    exact = _matfun(np.asarray(be.payload), lambda w: _cheb.chebval(np.clip(w, -1, 1), p.coefficients))
    effective = _matfun(np.asarray(be.payload_effective),
                        lambda w: _cheb.chebval(np.clip(w, -1, 1), p.coefficients))
    new_seed = (be.seed * 1000003 + 1) & 0x7FFFFFFF
    extra = _draw_perturbation(exact, nu, be.perturbation_mode, new_seed)
    eps_out = 4 * d * math.sqrt(max(be.eps, 0.0) / be.alpha) + nu
    return BlockEncoding(
        payload=exact,
        alpha=1.0,
        ancillas=be.ancillas + 2,
        eps=eps_out,
        use_cost=(d + 1) * be.use_cost,
        perturbation_mode=be.perturbation_mode,
        seed=new_seed,
        perturbation=(effective - exact) + extra,
    )


def product_plain(be1: BlockEncoding, be2: BlockEncoding) -> BlockEncoding:
    """Plain product combinator: (alpha*beta, a+b, alpha*eps2 + beta*eps1).

    Used only for composition tests; the mainline pipelines use the
    preamplified product.
    """
    payload = be1.payload @ be2.payload
    eff = be1.payload_effective @ be2.payload_effective
    return BlockEncoding(
        payload=payload,
        alpha=be1.alpha * be2.alpha,
        ancillas=be1.ancillas + be2.ancillas,
        eps=be1.alpha * be2.eps + be2.alpha * be1.eps,
        use_cost=be1.use_cost + be2.use_cost,
        perturbation_mode=be1.perturbation_mode,
        seed=(be1.seed * 1000003 + be2.seed) & 0x7FFFFFFF,
        perturbation=eff - payload,
    )


def product_preamplified(be1: BlockEncoding, be2: BlockEncoding) -> BlockEncoding:
    """Preamplified product: a (1, a1+a2+2, eps1+eps2)-encoding of A1*A2/2.

    Requires both encoded targets to be contractions.  The use cost is
    alpha1*(q1+T1) + alpha2*(q2+T2).
    """
    for be in (be1, be2):
        if np.linalg.norm(be.target, 2) > 1 + 1e-10:
            raise ValueError("preamplified product requires ||target|| <= 1")
    a1 = be1.alpha * be1.payload_effective
    a2 = be2.alpha * be2.payload_effective
    payload = (be1.target @ be2.target) / 2.0
    eff = (a1 @ a2) / 2.0
    return BlockEncoding(
        payload=payload,
        alpha=1.0,
        ancillas=be1.ancillas + be2.ancillas + 2,
        eps=be1.eps + be2.eps,
        use_cost=be1.alpha * (be1.ancillas + be1.use_cost) + be2.alpha * (be2.ancillas + be2.use_cost),
        perturbation_mode=be1.perturbation_mode,
        seed=(be1.seed * 1000003 + be2.seed + 1) & 0x7FFFFFFF,
        perturbation=eff - payload,
    )


def matrix_power(be: BlockEncoding, c: float, kappa: float, eps: float) -> BlockEncoding:
    """Fractional power combinator: a (1, a + O(log log 1/eps), eps)-encoding of H^c/2.

    Args:
        be: Encoding of a symmetric H with I/kappa <= H <= I.
        c: Exponent in (0, 1].
        kappa: Conditioning parameter, at least 2.
        eps: Output error budget; the input must satisfy
            be.eps <= eps / (10 kappa log^3(kappa/eps)).

    Returns:
        Encoding of H^c / 2.

    Raises:
        ValueError: On precondition violations.
    """
    if not (0 < c <= 1):
        raise ValueError("c must lie in (0, 1]")
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    budget = eps / (10.0 * kappa * math.log(kappa / eps) ** 3)
    if be.eps > budget + 1e-15:
        raise ValueError(
            f"input encoding error {be.eps:.3e} exceeds matrix power budget {budget:.3e}; "
            "tighten the input encoding"
        )
    w = np.linalg.eigvalsh(be.target)
    if np.min(w) < 1.0 / kappa - 1e-9 or np.max(w) > 1.0 + 1e-9:
        raise ValueError("matrix power requires I/kappa <= H <= I")
    power = lambda vals: np.clip(vals, 1e-300, None) ** c / 2.0
    payload = _matfun(be.target, power)
    eff = _matfun(be.alpha * be.payload_effective, power)
    return BlockEncoding(
        payload=payload,
        alpha=1.0,
        ancillas=be.ancillas + max(1, math.ceil(math.log2(max(2.0, math.log2(1.0 / eps))))) + 2,
        eps=eps,
        use_cost=be.alpha * kappa * (be.ancillas + be.use_cost) * math.log(kappa / eps) ** 2,
        perturbation_mode=be.perturbation_mode,
        seed=(be.seed * 1000003 + 7) & 0x7FFFFFFF,
        perturbation=eff - payload,
    )


@dataclass(frozen=True)
class SveOracle:
    """Emulated singular-value estimation with additive precision.

    Attributes:
        source: Spectral data supplying the true singular values.
        precision: Additive error bound eps1.
        mode: "exact", "grid_round" (deterministic rounding to a grid
            of spacing eps1), or "stochastic" (bounded uniform noise).
        seed: Noise stream seed.
        mu: Encoding normalization of the underlying matrix; each call
            charges mu/eps1 * polylog(n) query units.
    """

    source: SpectralData
    precision: float
    mode: str
    seed: int
    mu: float

    @property
    def n(self) -> int:
        return len(self.source.singular_values)

    @property
    def cost_per_call(self) -> float:
        return (self.mu / self.precision) * polylog(self.n)


def sve_estimate(oracle: SveOracle, j: int) -> float:
    """Estimate the j-th singular value within the oracle's precision.

    Args:
        oracle: SVE oracle.
        j: Index into the descending singular values.

    Returns:
        sigma_tilde with |sigma_tilde - sigma_j| <= precision.

    Raises:
        IndexError: If j is out of range.
    """
    if not (0 <= j < oracle.n):
        raise IndexError(f"singular value index {j} out of range")
    sigma = float(oracle.source.singular_values[j])
    eps1 = oracle.precision
    if oracle.mode == "exact":
        return sigma
    if oracle.mode == "grid_round":
        return round(sigma / eps1) * eps1
    if oracle.mode == "stochastic":
        u = stream(oracle.seed, j).uniform(-1.0, 1.0)
        return sigma + eps1 * u
    raise ValueError(f"unknown SVE mode: {oracle.mode!r}")


def sve_all(oracle: SveOracle) -> np.ndarray:
    """All singular-value estimates as an array (one call per index)."""
    return np.array([sve_estimate(oracle, j) for j in range(oracle.n)])
