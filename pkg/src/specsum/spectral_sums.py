"""Quantum-model spectral-sum estimators.

Eight estimator pipelines assembled from the block-encoding algebra,
the certified polynomial constructions, and the measurement
primitives: the SVT log-determinant, Schatten-p norm, von Neumann
entropy, and trace of inverse, plus four appendix log-determinant
variants (SVE-based, Taylor, Chebyshev, quantum Monte Carlo).  Each
run returns a report with the estimate, the exact oracle value, the
guarantee form and bound, every derived parameter, and the query
ledger.

The analysis underlying the parameter choices normalizes ||A|| = 1; at
desk scale inputs are strict contractions, so cutoffs are placed at
the true lower spectral edge (beta = lambda_min / alpha rather than
1/(kappa*alpha)) and the matching rescale factor log(2/beta) is used
throughout.  Cutoffs and construction tolerances are rounded down onto
a geometric grid so polynomial constructions cache across runs;
reports record both the formula value and the value used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .matrix_core import SymmetricMatrix, exact_spectral_sum
from .polyapprox import (
    approx_inverse,
    approx_log,
    approx_monomial,
    chebyshev_logdet_setup,
    entropy_poly,
)
from .qmodel import (
    BlockEncoding,
    CostLedger,
    SveOracle,
    apply_svt,
    matrix_power,
    polylog,
    product_preamplified,
    qram_block_encoding,
    sve_all,
)
from .measurement import (
    Estimate,
    ae_rounds_for,
    amplitude_estimate,
    hadamard_test_estimate,
    inner_product_estimate,
    median_reps,
    qmc_mean_estimate,
    trace_estimate_abs,
    trace_product_estimate,
)
from .rng import stream

__all__ = [
    "AlgoConfig",
    "SpectralSumReport",
    "logdet_svt",
    "logdet_edge_cases",
    "schatten_p",
    "vn_entropy",
    "trace_inverse",
    "logdet_sve",
    "logdet_taylor",
    "logdet_chebyshev",
    "logdet_qmc",
    "run_algorithm",
    "ALGORITHMS",
]

# Implementation error injected by each SVT application.
_NU = 1e-12

# Geometric grid factor for rounding cutoffs/tolerances down (caching).
_GRID = 2.0 ** 0.25


def _floor_grid(x: float) -> float:
    """Round x down onto the geometric caching grid."""
    return _GRID ** math.floor(math.log(x) / math.log(_GRID))


@dataclass(frozen=True)
class AlgoConfig:
    """Configuration of one estimator run.

    Attributes:
        eps: Target error in (0, 1).
        delta: Failure probability in (0, 1/2).
        mode: Noise mode: "exact", "stochastic", or "adversarial".
        seed: Base RNG seed.
        algorithm: Estimator name (see ALGORITHMS).
        p: Schatten exponent (positive integer), used by schatten_p.
        use_monomial_approx: Whether schatten_p replaces the exact
            monomial with its truncated Chebyshev expansion.
    """

    eps: float = 0.1
    delta: float = 0.05
    mode: str = "exact"
    seed: int = 0
    algorithm: str = "logdet_svt"
    p: int = 1
    use_monomial_approx: bool = False

    def __post_init__(self):
        if not (0 < self.eps < 1):
            raise ValueError("eps must lie in (0, 1)")
        if not (0 < self.delta < 0.5):
            raise ValueError("delta must lie in (0, 1/2)")


@dataclass
class SpectralSumReport:
    """Result of one estimator run.

    Attributes:
        algorithm: Estimator name.
        estimate: The Estimate (value, bound, success, queries, seed).
        exact: Exact oracle value (None above the exact-oracle cap).
        guarantee: "relative" or "absolute".
        guarantee_bound: Absolute bound implied by the guarantee.
        parameters: All derived tolerances, degrees, and round counts.
        ledger: Accumulated query costs.
        warnings: Degenerate-regime notes.
    """

    algorithm: str
    estimate: Estimate
    exact: float | None
    guarantee: str
    guarantee_bound: float
    parameters: dict
    ledger: CostLedger
    warnings: list = field(default_factory=list)

    @property
    def passed(self) -> bool | None:
        """Whether |estimate - exact| <= guarantee_bound (None if no oracle)."""
        if self.exact is None:
            return None
        return abs(self.estimate.value - self.exact) <= self.guarantee_bound


def _require_spd_contraction(A: SymmetricMatrix, strict: bool = True) -> None:
    if not A.spd_flag or A.spectral.eigenvalues[-1] <= 0:
        raise ValueError("estimator requires an SPD matrix")
    norm = A.stats.spectral_norm
    if strict and norm >= 1:
        raise ValueError("||A|| >= 1: use the edge-case handler")
    if not strict and norm > 1 + 1e-12:
        raise ValueError("estimator requires ||A|| <= 1")


def _relative_bound(eps: float, exact: float | None, n: int, norm: float, warnings: list):
    """Absolute bound for a relative-eps guarantee on a log-determinant."""
    if exact is not None:
        return eps * abs(exact)
    if norm > 1 - 1e-6:
        warnings.append("||A|| within 1e-6 of 1: relative bound degenerates, absolute fallback")
        return eps * n
    return eps * n * math.log(1.0 / norm)


def logdet_svt(A: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Log-determinant via SVT of a certified log polynomial.

    Applies the bounded series for log(x)/(2 log(2/beta)) to the
    mu-normalized encoding of A, estimates the normalized trace as a
    state overlap, and rescales.  Relative eps guarantee for SPD
    contractions.
    """
    _require_spd_contraction(A)
    st = A.stats
    n, alpha, kappa, norm = A.n, st.mu, st.kappa, st.spectral_norm
    lam_min = norm / kappa
    beta_formula = 1.0 / (kappa * alpha)
    beta = min(_floor_grid(lam_min / alpha), 0.5)
    big_l = math.log(2.0 / beta)
    eps23_formula = cfg.eps * math.log(1.0 / norm) / (6.0 * math.log(2.0 * kappa * alpha))
    eps2 = cfg.eps * math.log(1.0 / norm) / (6.0 * big_l)
    eps3 = _floor_grid(eps2)
    series = approx_log(beta, eps3)
    be = qram_block_encoding(A, cfg.mode, cfg.seed)
    sv = apply_svt(be, series, _NU)
    overlap = float(np.trace(sv.payload_effective)) / n
    ipe = inner_product_estimate(overlap, eps2, cfg.delta, unit_cost=sv.use_cost,
                                 seed=cfg.seed, mode=cfg.mode)
    value = 2.0 * n * big_l * ipe.value + n * math.log(alpha)
    exact = exact_spectral_sum(A, "log")
    warnings: list = []
    bound = _relative_bound(cfg.eps, exact, n, norm, warnings)
    ledger = CostLedger()
    reps = median_reps(cfg.delta)
    t = ae_rounds_for(eps2)
    ledger.charge(ipe.queries_charged, be_uses=reps * t * (series.degree + 1), ae_rounds=reps * t)
    est = Estimate(value=value, abs_error_bound=bound, success_prob=1.0 - 2.0 * cfg.delta,
                   queries_charged=ledger.total_queries, seed=cfg.seed, failed=ipe.failed)
    return SpectralSumReport(
        algorithm="logdet_svt",
        estimate=est,
        exact=exact,
        guarantee="relative",
        guarantee_bound=bound,
        parameters={
            "eps": cfg.eps, "delta": cfg.delta, "mode": cfg.mode,
            "alpha": alpha, "kappa": kappa, "spectral_norm": norm,
            "beta_formula": beta_formula, "beta_used": beta,
            "eps2_formula": eps23_formula, "eps2_used": eps2,
            "eps3_formula": eps23_formula, "eps3_used": eps3,
            "rescale_log": big_l, "degree": series.degree,
            "poly_sup_error": series.certified_sup_error,
            "ae_rounds": t, "reps": reps,
        },
        ledger=ledger,
        warnings=warnings,
    )


def logdet_edge_cases(A: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Log-determinant for ||A|| >= 1 via deflation or rescaling.

    With ||A|| = 1, unit singular values are deflated and the SVT
    estimator runs on the remaining spectrum with a relative guarantee
    on the deflated part.  With ||A|| > 1 the matrix is rescaled to a
    contraction and the n log(alpha) shift is undone; the guarantee is
    absolute (n eps) because the shifted terms carry mixed signs.
    """
    if not A.spd_flag:
        raise ValueError("edge-case handler requires an SPD matrix")
    st = A.stats
    n, norm = A.n, st.spectral_norm
    if norm < 1 - 1e-10:
        raise ValueError("||A|| < 1: use logdet_svt directly")
    w = A.spectral.eigenvalues
    warnings: list = []
    ledger = CostLedger()
    if abs(norm - 1.0) <= 1e-10:
        unit_mask = np.abs(w - 1.0) <= 1e-10
        m = int(np.sum(unit_mask))
        rest = np.asarray(w[~unit_mask])
        exact = exact_spectral_sum(A, "log")
        if rest.size == 0:
            est = Estimate(value=0.0, abs_error_bound=0.0, success_prob=1.0,
                           queries_charged=1.0, seed=cfg.seed)
            ledger.charge(1.0)
            return SpectralSumReport(
                algorithm="logdet_edge_cases", estimate=est, exact=exact,
                guarantee="relative", guarantee_bound=cfg.eps,
                parameters={"branch": "unit_norm", "multiplicity": m},
                ledger=ledger, warnings=["identity spectrum: log-determinant is exactly 0"],
            )
        deflated = SymmetricMatrix(rest.size, np.diag(rest), spd_flag=True)
        sub = logdet_svt(deflated, cfg)
        bound = cfg.eps * abs(sub.exact) if sub.exact is not None else sub.guarantee_bound
        est = Estimate(value=sub.estimate.value, abs_error_bound=bound,
                       success_prob=sub.estimate.success_prob,
                       queries_charged=sub.estimate.queries_charged,
                       seed=cfg.seed, failed=sub.estimate.failed)
        sub.parameters.update({"branch": "unit_norm", "multiplicity": m,
                               "sigma_next": float(rest.max())})
        return SpectralSumReport(
            algorithm="logdet_edge_cases", estimate=est, exact=exact,
            guarantee="relative", guarantee_bound=bound,
            parameters=sub.parameters, ledger=sub.ledger, warnings=warnings,
        )
    # ||A|| > 1: rescale to a contraction and undo the shift.
    alpha_shift = norm / 0.5
    scaled = SymmetricMatrix(n, np.asarray(A.entries) / alpha_shift, spd_flag=True)
    if w[-1] < 1 < w[0]:
        warnings.append("mixed-sign log terms: absolute guarantee only")
    eps_inner = cfg.eps / math.log(2.0 * st.kappa)
    sub = logdet_svt(scaled, AlgoConfig(eps=eps_inner, delta=cfg.delta, mode=cfg.mode,
                                        seed=cfg.seed, algorithm="logdet_svt"))
    value = sub.estimate.value + n * math.log(alpha_shift)
    exact = exact_spectral_sum(A, "log")
    bound = n * cfg.eps
    est = Estimate(value=value, abs_error_bound=bound,
                   success_prob=sub.estimate.success_prob,
                   queries_charged=sub.estimate.queries_charged,
                   seed=cfg.seed, failed=sub.estimate.failed)
    sub.parameters.update({"branch": "rescale", "alpha_shift": alpha_shift,
                           "eps_inner": eps_inner})
    return SpectralSumReport(
        algorithm="logdet_edge_cases", estimate=est, exact=exact,
        guarantee="absolute", guarantee_bound=bound,
        parameters=sub.parameters, ledger=sub.ledger, warnings=warnings,
    )


def schatten_p(A: SymmetricMatrix, p: int, cfg: AlgoConfig) -> SpectralSumReport:
    """Schatten-p norm via powered block-encodings and product-trace estimation.

    Decomposes p = 4q + r, raises the preamplified encoding of
    B/2 = A^T A / 2 to the q-th power by SVT and to the r/4-th power by
    the fractional-power combinator, and estimates Tr[B^{p/2}]
    multiplicatively.  Relative eps guarantee.
    """
    if p < 1:
        raise ValueError("p must be a positive integer")
    _require_spd_contraction(A)
    st = A.stats
    n, kappa, norm = A.n, st.kappa, st.spectral_norm
    q, r = divmod(p, 4)
    be = qram_block_encoding(A, cfg.mode, cfg.seed)
    prod = product_preamplified(be, be)  # encodes B/2 with B = A^T A
    parameters = {"eps": cfg.eps, "delta": cfg.delta, "mode": cfg.mode,
                  "p": p, "q": q, "r": r, "kappa": kappa}
    enc = None
    gamma2 = None
    if q >= 1:
        if cfg.use_monomial_approx:
            eps_mono = cfg.eps * norm ** (2 * p) / (8.0 * n)
            d_mono = max(1, math.ceil(math.sqrt(2.0 * q * math.log(1.0 / eps_mono))))
            mono = approx_monomial(q, d_mono)
        else:
            mono = approx_monomial(q, q)
        half = type(mono)(
            degree=mono.degree,
            coefficients=np.asarray(mono.coefficients) / (2.0 * max(1.0, mono.global_bound)),
            target=f"x^{q}/2",
            certified_sup_error=mono.certified_sup_error / 2.0,
            certified_on=mono.certified_on,
            global_bound=mono.global_bound / (2.0 * max(1.0, mono.global_bound)),
        )
        enc = apply_svt(prod, half, _NU)  # encodes (B/2)^q / 2
        gamma2 = 2.0
        parameters["monomial_degree"] = half.degree
    if r >= 1:
        kappa_mp = max(2.0, 2.0 * kappa**2 / norm**2)
        tr_floor = norm ** (2 * p) / 2 ** (p / 2.0)
        eps_mp = cfg.eps * tr_floor / (64.0 * n)
        mp = matrix_power(prod, r / 4.0, kappa_mp, eps_mp)  # encodes (B/2)^{r/4} / 2
        parameters.update({"kappa_matrix_power": kappa_mp, "eps_matrix_power": eps_mp})
        if enc is None:
            enc, gamma2 = mp, 2.0
        else:
            enc = product_preamplified(enc, mp)
            gamma2 = 8.0
    scale = 2 ** (p / 2.0) * gamma2**2
    tp = trace_product_estimate(enc, cfg.eps, seed=cfg.seed, delta=cfg.delta)
    value = (max(tp.value, 0.0) * scale) ** (1.0 / p)
    exact = exact_spectral_sum(A, "x_pow_p", p=p) ** (1.0 / p)
    bound = cfg.eps * exact
    ledger = CostLedger()
    ledger.charge(tp.queries_charged, be_uses=tp.queries_charged / max(be.use_cost, 1.0))
    parameters.update({"payload_scale": scale, "trace_eps": cfg.eps})
    est = Estimate(value=value, abs_error_bound=bound, success_prob=tp.success_prob,
                   queries_charged=ledger.total_queries, seed=cfg.seed, failed=tp.failed)
    return SpectralSumReport(
        algorithm=f"schatten_{p}",
        estimate=est,
        exact=exact,
        guarantee="relative",
        guarantee_bound=bound,
        parameters=parameters,
        ledger=ledger,
    )


def vn_entropy(rho: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Von Neumann entropy via SVT of the -x log x series.

    Requires unit trace and nonzero eigenvalues above the certified
    cutoff.  Absolute eps guarantee.
    """
    tr = float(np.trace(np.asarray(rho.entries)))
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"density input requires unit trace, got {tr!r}")
    w = rho.spectral.eigenvalues
    if w[-1] <= 0:
        raise ValueError(
            f"eigenvalue {float(w[-1]):.3e} below the certified domain cutoff"
        )
    st = rho.stats
    n, mu, kappa, norm = rho.n, st.mu, st.kappa, st.spectral_norm
    beta_formula = 1.0 / (mu * kappa)
    beta = min(_floor_grid(float(w[-1]) / mu), 0.5)
    big_l = math.log(2.0 / beta)
    eps1 = cfg.eps / (4.0 * big_l)
    eps1_used = _floor_grid(eps1)
    series = entropy_poly(beta, eps1_used)
    be = qram_block_encoding(rho, cfg.mode, cfg.seed)
    sv = apply_svt(be, series, _NU)
    eps_t = cfg.eps / (4.0 * n * mu * big_l)
    tr_est = trace_estimate_abs(sv, eps_t, seed=cfg.seed, delta=cfg.delta)
    value = 2.0 * mu * big_l * tr_est.value - math.log(mu)
    exact = exact_spectral_sum(rho, "neg_xlogx")
    bound = cfg.eps
    ledger = CostLedger()
    t = math.ceil(8.0 * math.pi / eps_t)
    reps = median_reps(cfg.delta)
    ledger.charge(tr_est.queries_charged, be_uses=reps * t * (series.degree + 1),
                  ae_rounds=reps * t)
    est = Estimate(value=value, abs_error_bound=bound, success_prob=1.0 - cfg.delta,
                   queries_charged=ledger.total_queries, seed=cfg.seed, failed=tr_est.failed)
    return SpectralSumReport(
        algorithm="vn_entropy",
        estimate=est,
        exact=exact,
        guarantee="absolute",
        guarantee_bound=bound,
        parameters={
            "eps": cfg.eps, "delta": cfg.delta, "mode": cfg.mode,
            "mu": mu, "kappa": kappa, "spectral_norm": norm,
            "beta_formula": beta_formula, "beta_used": beta,
            "eps1_formula": eps1, "eps1_used": eps1_used,
            "trace_eps": eps_t, "degree": series.degree,
            "rescale_log": big_l, "ae_rounds": t, "reps": reps,
        },
        ledger=ledger,
    )


def trace_inverse(A: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Trace of the inverse via SVT of the bounded inverse series.

    Relative eps guarantee for SPD contractions, using
    Tr[A^{-1}] >= n when ||A|| <= 1.
    """
    _require_spd_contraction(A, strict=False)
    st = A.stats
    n, mu, kappa, norm = A.n, st.mu, st.kappa, st.spectral_norm
    lam_min = float(A.spectral.eigenvalues[-1])
    delta_formula = 1.0 / (mu * kappa)
    delta_v = min(_floor_grid(lam_min / mu), 0.5)
    eps_formula = 3.0 * cfg.eps / (16.0 * mu * kappa)
    # Budget split so (8/(3 delta mu)) * n * (eps1 + eps2) <= eps * n <= eps * Tr.
    eps_i = 3.0 * cfg.eps * delta_v * mu / 16.0
    eps1 = _floor_grid(eps_i)
    series = approx_inverse(delta_v, eps1)
    be = qram_block_encoding(A, cfg.mode, cfg.seed)
    sv = apply_svt(be, series, _NU)
    tr_est = trace_estimate_abs(sv, eps_i, seed=cfg.seed, delta=cfg.delta)
    value = 8.0 * tr_est.value / (3.0 * delta_v * mu)
    exact = exact_spectral_sum(A, "inverse")
    bound = cfg.eps * exact
    ledger = CostLedger()
    t = math.ceil(8.0 * math.pi / eps_i)
    reps = median_reps(cfg.delta)
    ledger.charge(tr_est.queries_charged, be_uses=reps * t * (series.degree + 1),
                  ae_rounds=reps * t)
    est = Estimate(value=value, abs_error_bound=bound, success_prob=1.0 - cfg.delta,
                   queries_charged=ledger.total_queries, seed=cfg.seed, failed=tr_est.failed)
    return SpectralSumReport(
        algorithm="trace_inverse",
        estimate=est,
        exact=exact,
        guarantee="relative",
        guarantee_bound=bound,
        parameters={
            "eps": cfg.eps, "delta": cfg.delta, "mode": cfg.mode,
            "mu": mu, "kappa": kappa, "spectral_norm": norm,
            "delta_formula": delta_formula, "delta_used": delta_v,
            "eps12_formula": eps_formula, "eps1_used": eps1, "eps2_used": eps_i,
            "degree": series.degree, "ae_rounds": t, "reps": reps,
        },
        ledger=ledger,
    )


def _sve_mode(mode: str) -> str:
    return {"exact": "exact", "stochastic": "stochastic", "adversarial": "grid_round"}[mode]


def logdet_sve(A: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Log-determinant via singular-value estimation and amplitude estimation.

    Emulates the conditional-rotation probability
    P = (C^2/||A||_F^2) sum_j (sigma_j/sigma~_j)^2 |log sigma~_j| with
    C = min_j sigma~_j / sqrt(|log sigma~_j|) and inverts it.
    """
    _require_spd_contraction(A)
    st = A.stats
    n, mu, kappa, norm, fro = A.n, st.mu, st.kappa, st.spectral_norm, st.frobenius_norm
    kappa_eff = kappa / norm
    log_k = math.log(max(kappa_eff, math.e))
    eps1 = cfg.eps / (kappa_eff * log_k)
    eps2 = cfg.eps / (kappa_eff**2 * log_k)
    oracle = SveOracle(A.spectral, eps1, _sve_mode(cfg.mode), cfg.seed, mu)
    sig = np.asarray(A.spectral.singular_values)
    sig_t = np.clip(sve_all(oracle), None, 1.0 - 1e-15)
    if np.any(sig_t <= 0):
        raise ValueError("SVE precision too coarse: a singular value rounded to zero")
    logs = np.abs(np.log(sig_t))
    with np.errstate(divide="ignore"):
        c_vals = np.where(logs > 0, sig_t / np.sqrt(logs), np.inf)
    c_const = float(np.min(c_vals))
    prob = float(c_const**2 / fro**2 * np.sum(sig**2 / sig_t**2 * logs))
    prob = min(1.0, max(0.0, prob))
    t = ae_rounds_for(eps2)
    reps = median_reps(cfg.delta)
    vals, n_failed = [], 0
    for rep in range(reps):
        ae = amplitude_estimate(prob, t, cfg.mode, (cfg.seed * 1000003 + rep) & 0x7FFFFFFF)
        vals.append(ae.value)
        n_failed += ae.failed
    p_hat = float(np.median(vals))
    value = -(fro**2 / c_const**2) * p_hat
    exact = exact_spectral_sum(A, "log")
    warnings: list = []
    bound = _relative_bound(cfg.eps, exact, n, norm, warnings)
    per_round = oracle.cost_per_call
    ledger = CostLedger()
    ledger.charge(reps * t * per_round, sve_calls=reps * t, ae_rounds=reps * t)
    est = Estimate(value=value, abs_error_bound=bound, success_prob=1.0 - cfg.delta,
                   queries_charged=ledger.total_queries, seed=cfg.seed,
                   failed=n_failed * 2 > reps)
    return SpectralSumReport(
        algorithm="logdet_sve",
        estimate=est,
        exact=exact,
        guarantee="relative",
        guarantee_bound=bound,
        parameters={
            "eps": cfg.eps, "delta": cfg.delta, "mode": cfg.mode,
            "mu": mu, "kappa": kappa, "kappa_eff": kappa_eff,
            "eps1": eps1, "eps2": eps2, "C": c_const,
            "C_formula": 1.0 / (kappa_eff * math.sqrt(log_k)),
            "ae_rounds": t, "reps": reps,
        },
        ledger=ledger,
        warnings=warnings,
    )


def logdet_taylor(A: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Log-determinant via the truncated Taylor series of -log(1-x).

    Emulates the amplitude
    L = (1/mn) sum_{k<=m} sum_j (1 - sigma~_j)^k / k with SVE-rounded
    singular values, estimates it, and returns -m n L.
    """
    _require_spd_contraction(A, strict=False)
    st = A.stats
    n, mu, kappa, norm = A.n, st.mu, st.kappa, st.spectral_norm
    kappa_eff = kappa / norm
    m = math.ceil(kappa_eff * math.log(1.0 / cfg.eps))
    eps1 = cfg.eps / m
    eps2 = cfg.eps / m
    oracle = SveOracle(A.spectral, eps1, _sve_mode(cfg.mode), cfg.seed, mu)
    sig_t = np.clip(sve_all(oracle), 1e-12, 1.0)
    x = 1.0 - sig_t
    ks = np.arange(1, m + 1)
    big_l = float(np.sum(x[None, :] ** ks[:, None] / ks[:, None]) / (m * n))
    big_l = min(1.0, max(0.0, big_l))
    t = ae_rounds_for(eps2)
    reps = median_reps(cfg.delta)
    vals, n_failed = [], 0
    for rep in range(reps):
        ae = amplitude_estimate(big_l, t, cfg.mode, (cfg.seed * 1000003 + rep) & 0x7FFFFFFF)
        vals.append(ae.value)
        n_failed += ae.failed
    l_hat = float(np.median(vals))
    value = -m * n * l_hat
    exact = exact_spectral_sum(A, "log")
    lam_min = norm / kappa
    xmax = 1.0 - lam_min
    trunc = n * xmax ** (m + 1) / ((m + 1) * (1.0 - xmax))
    bound = 2.0 * n * cfg.eps + trunc
    per_round = oracle.cost_per_call
    ledger = CostLedger()
    ledger.charge(reps * t * per_round, sve_calls=reps * t, ae_rounds=reps * t)
    est = Estimate(value=value, abs_error_bound=bound, success_prob=1.0 - cfg.delta,
                   queries_charged=ledger.total_queries, seed=cfg.seed,
                   failed=n_failed * 2 > reps)
    return SpectralSumReport(
        algorithm="logdet_taylor",
        estimate=est,
        exact=exact,
        guarantee="absolute",
        guarantee_bound=bound,
        parameters={
            "eps": cfg.eps, "delta": cfg.delta, "mode": cfg.mode,
            "kappa": kappa, "kappa_eff": kappa_eff, "m": m,
            "eps1": eps1, "eps2": eps2, "truncation_bound": trunc,
            "ae_rounds": t, "reps": reps,
        },
        ledger=ledger,
    )


def logdet_chebyshev(A: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Log-determinant via the Chebyshev expansion of log on [delta, 1-delta].

    Uses the mapped-interval log coefficients and the truncation degree
    from the certified per-dimension bound; the normalized overlap
    -(1/nC) sum_j sum_i c_i T_i(y_j) at y_j = (2 lambda_j - 1)/(1 - 2 delta)
    is estimated by Hadamard-test sampling at precision eps/log d, whose
    1/eps_1^2 repetition count gives this variant its quadratic
    precision cost.
    """
    _require_spd_contraction(A)
    st = A.stats
    n, mu, kappa, norm = A.n, st.mu, st.kappa, st.spectral_norm
    lam_min = float(A.spectral.eigenvalues[-1])
    delta_c = min(lam_min, 1.0 - norm)
    if delta_c <= 0:
        raise ValueError("spectrum outside [delta, 1 - delta]")
    coeffs, d, trunc_per_n = chebyshev_logdet_setup(delta_c, cfg.eps)
    eps1 = cfg.eps / max(math.log(d), 1.0)
    c_const = float(np.sum(np.abs(coeffs)))
    y = (2.0 * np.asarray(A.spectral.eigenvalues) - 1.0) / (1.0 - 2.0 * delta_c)
    prob = -float(np.sum(_cheb.chebval(y, coeffs))) / (n * c_const)
    prob = min(1.0, max(0.0, prob))
    kappa_b = (1.0 - lam_min) / max(1.0 - norm, 1e-15)
    per_state = (d * (d + 1) / 2.0) * (
        math.ceil(math.log2(max(2, n))) + math.log(kappa_b * mu / cfg.eps) ** 2.5
    )
    ht = hadamard_test_estimate(prob, eps1, cfg.delta, unit_cost=per_state,
                                seed=cfg.seed, mode=cfg.mode)
    value = -n * c_const * ht.value
    exact = exact_spectral_sum(A, "log")
    bound = n * c_const * eps1 + n * trunc_per_n
    n_samp = math.ceil(2.0 * math.log(2.0 / cfg.delta) / eps1**2)
    ledger = CostLedger()
    ledger.charge(ht.queries_charged, be_uses=2 * n_samp)
    est = Estimate(value=value, abs_error_bound=bound, success_prob=1.0 - cfg.delta,
                   queries_charged=ledger.total_queries, seed=cfg.seed, failed=ht.failed)
    return SpectralSumReport(
        algorithm="logdet_chebyshev",
        estimate=est,
        exact=exact,
        guarantee="absolute",
        guarantee_bound=bound,
        parameters={
            "eps": cfg.eps, "delta": cfg.delta, "mode": cfg.mode,
            "kappa": kappa, "delta_margin": delta_c, "d": d,
            "eps1": eps1, "C": c_const, "truncation_per_n": trunc_per_n,
            "kappa_B": kappa_b, "per_state_cost": per_state,
            "samples": n_samp,
        },
        ledger=ledger,
    )


def logdet_qmc(A: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Log-determinant via quantum Monte Carlo mean estimation.

    SVE rounds the spectrum, then the uniform mean of log(1/sigma~_j)
    is estimated with relative precision and scaled by n.  Requires
    the spectrum inside [1/kappa_eff, 1/2].
    """
    _require_spd_contraction(A)
    st = A.stats
    n, mu, kappa, norm = A.n, st.mu, st.kappa, st.spectral_norm
    if norm > 0.5 + 1e-12:
        raise ValueError("spectrum outside [1/kappa, 1/2]: rescale first")
    kappa_eff = kappa / norm
    eps1_formula = cfg.eps / kappa_eff
    eps1 = cfg.eps / (2.2 * kappa_eff)
    oracle = SveOracle(A.spectral, eps1, _sve_mode(cfg.mode), cfg.seed, mu)
    sig_t = np.clip(sve_all(oracle), 1e-12, 1.0 - 1e-15)
    values = np.log(1.0 / sig_t)
    b_bound = max(math.log(kappa_eff) ** 2 - 1.0, 1.0)
    eps_rel = cfg.eps / (2.0 * float(np.max(values)))
    reps = median_reps(cfg.delta)
    vals, n_failed, queries = [], 0, 0.0
    for rep in range(reps):
        qmc = qmc_mean_estimate(values, b_bound, eps_rel,
                                seed=(cfg.seed * 1000003 + rep) & 0x7FFFFFFF,
                                mode=cfg.mode, sampler_cost=oracle.cost_per_call)
        vals.append(qmc.value)
        n_failed += qmc.failed
        queries += qmc.queries_charged
    value = -n * float(np.median(vals))
    exact = exact_spectral_sum(A, "log")
    bound = n * cfg.eps
    ledger = CostLedger()
    ledger.charge(queries, sve_calls=queries / oracle.cost_per_call)
    est = Estimate(value=value, abs_error_bound=bound, success_prob=1.0 - cfg.delta,
                   queries_charged=ledger.total_queries, seed=cfg.seed,
                   failed=n_failed * 2 > reps)
    return SpectralSumReport(
        algorithm="logdet_qmc",
        estimate=est,
        exact=exact,
        guarantee="absolute",
        guarantee_bound=bound,
        parameters={
            "eps": cfg.eps, "delta": cfg.delta, "mode": cfg.mode,
            "kappa": kappa, "kappa_eff": kappa_eff,
            "eps1_formula": eps1_formula, "eps1_used": eps1,
            "variance_bound": b_bound, "qmc_relative_eps": eps_rel, "reps": reps,
        },
        ledger=ledger,
    )


ALGORITHMS = {
    "logdet_svt": logdet_svt,
    "logdet_sve": logdet_sve,
    "logdet_taylor": logdet_taylor,
    "logdet_chebyshev": logdet_chebyshev,
    "logdet_qmc": logdet_qmc,
    "vn_entropy": vn_entropy,
    "trace_inverse": trace_inverse,
}


def run_algorithm(A: SymmetricMatrix, cfg: AlgoConfig) -> SpectralSumReport:
    """Dispatch a configured estimator run on a matrix."""
    name = cfg.algorithm
    if name.startswith("schatten"):
        return schatten_p(A, cfg.p, cfg)
    if name == "logdet_edge_cases":
        return logdet_edge_cases(A, cfg)
    if name not in ALGORITHMS:
        raise ValueError(f"unknown algorithm: {name!r}")
    return ALGORITHMS[name](A, cfg)
