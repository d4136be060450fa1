"""Emulated quantum estimation primitives.

Amplitude estimation, Hadamard-test trace estimation (absolute and
relative), product-trace estimation, inner-product estimation, and
quantum Monte Carlo mean estimation.  Each primitive reproduces its
error/success-probability contract and charges abstract query units;
stochastic draws come from counter-based streams so repeated runs with
the same seed are bit-identical.

Success amplification uses the median of ceil(18 ln(1/delta))
independent repetitions of the base primitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmodel import BlockEncoding, polylog
from .rng import stream

__all__ = [
    "Estimate",
    "BRASSARD_SUCCESS",
    "amplitude_estimate",
    "ae_rounds_for",
    "median_reps",
    "trace_estimate_abs",
    "trace_estimate_rel",
    "trace_product_estimate",
    "inner_product_estimate",
    "hadamard_test_estimate",
    "qmc_mean_estimate",
]

# Success probability of a single amplitude-estimation shot.
BRASSARD_SUCCESS = 8.0 / math.pi**2

# Repetition constant for Chernoff-median amplification.
_MEDIAN_C = 18.0

# Query constant for quantum Monte Carlo mean estimation.
_QMC_C = 16.0


@dataclass(frozen=True)
class Estimate:
    """Result of one emulated estimation primitive or estimator run.

    Attributes:
        value: The estimate.
        abs_error_bound: Absolute error bound claimed on success.
        success_prob: Probability the bound holds.
        queries_charged: Abstract query units consumed.
        seed: Stream seed the draw was keyed by.
        failed: Whether a failure branch was taken (stochastic mode
            bookkeeping; the returned value then carries no guarantee).
    """

    value: float
    abs_error_bound: float
    success_prob: float
    queries_charged: float
    seed: int
    failed: bool = False


def median_reps(delta: float) -> int:
    """Repetitions for median amplification to failure probability delta."""
    if not (0 < delta < 0.5):
        raise ValueError("delta must lie in (0, 1/2)")
    return math.ceil(_MEDIAN_C * math.log(1.0 / delta))


def ae_rounds_for(eps: float) -> int:
    """Smallest round count t with pi/t + pi^2/t^2 <= eps.

    This is the worst-case (a = 1/2) inversion of the amplitude
    estimation error bound, so t rounds suffice for precision eps at
    any amplitude.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    t = math.pi * (1.0 + math.sqrt(1.0 + 4.0 * eps)) / (2.0 * eps)
    t = math.ceil(t)
    while math.pi / t + math.pi**2 / t**2 > eps:
        t += 1
    return t


def ae_error_bound(a: float, t: int) -> float:
    """The amplitude estimation error bound 2 pi sqrt(a(1-a))/t + pi^2/t^2."""
    return 2 * math.pi * math.sqrt(max(a * (1 - a), 0.0)) / t + math.pi**2 / t**2


def amplitude_estimate(a: float, t: int, mode: str = "exact", seed: int = 0,
                       unit_cost: float = 1.0) -> Estimate:
    """Estimate an amplitude with t reflection rounds.

    In stochastic mode the estimate lands on the sine grid
    sin^2(pi m / t): with the standard success probability it is one of
    the two grid points bracketing the true phase (both of which
    satisfy the error bound), otherwise a uniformly random grid value
    is returned and flagged.

    Args:
        a: True amplitude in [0, 1].
        t: Number of reflection rounds, positive.
        mode: "exact", "stochastic", or "adversarial".
        seed: Stream seed.
        unit_cost: Query units per reflection round.

    Returns:
        Estimate with abs_error_bound = 2 pi sqrt(a(1-a))/t + pi^2/t^2
        and success_prob = 8/pi^2.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if not (0 <= a <= 1):
        raise ValueError("a must lie in [0, 1]")
    bound = ae_error_bound(a, t)
    failed = False
    if mode == "exact":
        a_hat = a
    elif mode == "adversarial":
        a_hat = min(1.0, max(0.0, a + bound))
    elif mode == "stochastic":
        rng = stream(seed, 0xA)
        theta = math.asin(math.sqrt(a))
        grid_pos = t * theta / math.pi
        if rng.random() < BRASSARD_SUCCESS:
            m = math.floor(grid_pos) if rng.random() < 0.5 else math.ceil(grid_pos)
        else:
            m = int(rng.integers(0, t + 1))
            failed = True
        m = min(max(m, 0), t)
        a_hat = math.sin(math.pi * m / t) ** 2
    else:
        raise ValueError(f"unknown mode: {mode!r}")
    return Estimate(
        value=a_hat,
        abs_error_bound=bound,
        success_prob=BRASSARD_SUCCESS,
        queries_charged=t * unit_cost,
        seed=seed,
        failed=failed,
    )


def trace_estimate_abs(be: BlockEncoding, eps: float, seed: int = 0,
                       delta: float | None = None) -> Estimate:
    """Hadamard-test trace estimation with absolute guarantee n*eps.

    The test amplitude is a = (1 + Tr[payload]/n)/2; with
    t = ceil(8 alpha pi / eps) rounds the returned
    n * alpha * (2 a_hat - 1) deviates from the encoded trace by at
    most n*eps (plus the encoding defect, which the caller budgets).

    Args:
        be: Block-encoding of a symmetric contraction.
        eps: Target per-dimension absolute error, positive.
        seed: Stream seed.
        delta: Optional failure probability; median amplification over
            ceil(18 ln(1/delta)) repetitions when given.

    Returns:
        Estimate of the encoded trace.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = be.n
    t = math.ceil(8.0 * be.alpha * math.pi / eps)
    a = (1.0 + float(np.trace(be.payload_effective)) / n) / 2.0
    a = min(1.0, max(0.0, a))
    reps = 1 if delta is None else median_reps(delta)
    vals = []
    n_failed = 0
    for r in range(reps):
        est = amplitude_estimate(a, t, be.perturbation_mode, (seed * 1000003 + r) & 0x7FFFFFFF,
                                 unit_cost=be.use_cost)
        vals.append(n * be.alpha * (2.0 * est.value - 1.0))
        n_failed += est.failed
    value = float(np.median(vals))
    bound = n * (2.0 * be.alpha * (math.pi / t + math.pi**2 / t**2) + be.eps)
    return Estimate(
        value=value,
        abs_error_bound=bound,
        success_prob=BRASSARD_SUCCESS if delta is None else 1.0 - delta,
        queries_charged=reps * t * be.use_cost,
        seed=seed,
        failed=n_failed * 2 > reps,
    )


def trace_estimate_rel(be: BlockEncoding, eps: float, seed: int = 0,
                       tr_lower_bound: float | None = None,
                       kappa: float | None = None,
                       delta: float | None = None) -> Estimate:
    """Trace estimation with relative guarantee eps * Tr.

    Reduces to the absolute estimator at precision
    eps * tr_lower_bound / n; the lower bound defaults to n/kappa for
    SPD contractions.

    Args:
        be: Block-encoding of an SPD contraction.
        eps: Relative error target.
        seed: Stream seed.
        tr_lower_bound: Known lower bound on the trace; overrides the
            n/kappa default.
        kappa: Condition number used for the default lower bound.
        delta: Optional failure probability for median amplification.

    Returns:
        Estimate with abs_error_bound = eps * tr_lower_bound scaled to
        the actual guarantee form.
    """
    n = be.n
    if tr_lower_bound is None:
        if kappa is None:
            raise ValueError("need tr_lower_bound or kappa")
        tr_lower_bound = n / kappa
    eps_abs = eps * tr_lower_bound / n
    est = trace_estimate_abs(be, eps_abs, seed=seed, delta=delta)
    return Estimate(
        value=est.value,
        abs_error_bound=est.abs_error_bound,
        success_prob=est.success_prob,
        queries_charged=est.queries_charged,
        seed=seed,
        failed=est.failed,
    )


def trace_product_estimate(be: BlockEncoding, eps: float, seed: int = 0,
                           delta: float | None = None) -> Estimate:
    """Multiplicative estimate of Tr[B^T B] for the encoded block B.

    Requires the encoding error to satisfy
    be.eps <= eps * Tr[B^T B] / (4 n).

    Args:
        be: (1, q, delta)-style encoding of B.
        eps: Relative error target.
        seed: Stream seed.
        delta: Optional failure probability for median amplification.

    Returns:
        Estimate with queries be.use_cost * sqrt(n)/eps * polylog(n)
        per repetition.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    n = be.n
    b_eff = be.alpha * be.payload_effective
    true_val = float(np.sum(b_eff * b_eff))
    exact_block = be.alpha * be.payload
    exact_val = float(np.sum(exact_block * exact_block))
    if be.eps > eps * exact_val / (4.0 * n) + 1e-15:
        raise ValueError(
            f"encoding error {be.eps:.3e} exceeds the product-trace budget "
            f"{eps * exact_val / (4.0 * n):.3e}"
        )
    reps = 1 if delta is None else median_reps(delta)
    vals = []
    n_failed = 0
    for r in range(reps):
        rng = stream(seed, 0xB, r)
        if be.perturbation_mode == "exact":
            vals.append(true_val)
        elif be.perturbation_mode == "adversarial":
            vals.append(true_val * (1.0 + eps))
        else:
            if rng.random() < 2.0 / 3.0:
                vals.append(true_val * (1.0 + eps * rng.uniform(-1.0, 1.0)))
            else:
                sign = 1.0 if rng.random() < 0.5 else -1.0
                vals.append(true_val * (1.0 + sign * eps * rng.uniform(1.0, 2.0)))
                n_failed += 1
    value = float(np.median(vals))
    per_rep = be.use_cost * math.sqrt(n) / eps * polylog(n)
    return Estimate(
        value=value,
        abs_error_bound=eps * exact_val + 2.0 * be.eps * n,
        success_prob=2.0 / 3.0 if delta is None else 1.0 - delta,
        queries_charged=reps * per_rep,
        seed=seed,
        failed=n_failed * 2 > reps,
    )


def inner_product_estimate(psi_amp: float, eps: float, delta: float,
                           unit_cost: float, seed: int = 0,
                           mode: str = "exact") -> Estimate:
    """Estimate a scalar overlap within eps with probability >= 1 - 2 delta.

    Emulated at the amplitude level: the true overlap is perturbed per
    the base amplitude-estimation success model and the median of
    ceil(18 ln(1/delta)) repetitions is returned.

    Args:
        psi_amp: True overlap value.
        eps: Absolute precision target, positive.
        delta: Per-side failure probability in (0, 1/2).
        unit_cost: Query cost of one state-preparation unitary.
        seed: Stream seed.
        mode: "exact", "stochastic", or "adversarial".

    Returns:
        Estimate of the overlap.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    reps = median_reps(delta)
    t = ae_rounds_for(eps)
    vals = []
    n_failed = 0
    for r in range(reps):
        rng = stream(seed, 0xC, r)
        if mode == "exact":
            vals.append(psi_amp)
        elif mode == "adversarial":
            vals.append(psi_amp + eps)
        elif mode == "stochastic":
            if rng.random() < BRASSARD_SUCCESS:
                vals.append(psi_amp + eps * rng.uniform(-1.0, 1.0))
            else:
                sign = 1.0 if rng.random() < 0.5 else -1.0
                vals.append(psi_amp + sign * eps * rng.uniform(1.0, 3.0))
                n_failed += 1
        else:
            raise ValueError(f"unknown mode: {mode!r}")
    return Estimate(
        value=float(np.median(vals)),
        abs_error_bound=eps,
        success_prob=1.0 - 2.0 * delta,
        queries_charged=reps * t * unit_cost,
        seed=seed,
        failed=n_failed * 2 > reps,
    )



def hadamard_test_estimate(
    overlap: float,
    eps: float,
    delta: float,
    unit_cost: float,
    seed: int,
    mode: str = "exact",
) -> Estimate:
    """Sampling (Hadamard-test) estimate of a real overlap in [-1, 1].

    Each repetition prepares both states once and measures a bit whose
    bias encodes the overlap; N = ceil(2 ln(2/delta) / eps^2)
    repetitions put the empirical mean within eps of the overlap with
    probability >= 1 - delta (Hoeffding).

    Args:
        overlap: True overlap, in [-1, 1].
        eps: Target absolute error.
        delta: Failure probability.
        unit_cost: Query cost of one state preparation.
        seed: RNG seed (stochastic mode).
        mode: "exact", "stochastic", or "adversarial".

    Returns:
        Estimate with queries_charged = 2 N unit_cost.
    """
    if not (-1.0 <= overlap <= 1.0):
        raise ValueError("overlap must lie in [-1, 1]")
    if not (0 < eps <= 2.0):
        raise ValueError("eps must lie in (0, 2]")
    n_samp = math.ceil(2.0 * math.log(2.0 / delta) / eps**2)
    queries = 2.0 * n_samp * unit_cost
    if mode == "exact":
        value, failed = overlap, False
    elif mode == "adversarial":
        value, failed = max(-1.0, min(1.0, overlap + 0.99 * eps)), False
    elif mode == "stochastic":
        rng = stream(seed, 23)
        k = rng.binomial(n_samp, (1.0 + overlap) / 2.0)
        value = 2.0 * k / n_samp - 1.0
        failed = abs(value - overlap) > eps
    else:
        raise ValueError(f"unknown mode: {mode!r}")
    return Estimate(
        value=value,
        abs_error_bound=eps,
        success_prob=1.0 - delta,
        queries_charged=queries,
        seed=seed,
        failed=failed,
    )


def qmc_mean_estimate(values, B: float, eps: float, seed: int = 0,
                      mode: str = "exact", sampler_cost: float = 1.0) -> Estimate:
    """Relative-eps estimate of the uniform mean of nonnegative values.

    Models quantum Monte Carlo mean estimation for distributions with
    Var/E^2 <= B: success probability 3/4 and query cost
    proportional to B/eps per sampler invocation cost.

    Args:
        values: Sequence of nonnegative reals.
        B: Claimed bound on Var/E^2 (checked against the data).
        eps: Relative error target.
        seed: Stream seed.
        mode: "exact", "stochastic", or "adversarial".
        sampler_cost: Query cost of one sampler invocation.

    Returns:
        Estimate of the mean.

    Raises:
        ValueError: If the variance precondition fails.
    """
    v = np.asarray(values, dtype=float)
    if np.any(v < 0):
        raise ValueError("values must be nonnegative")
    mean = float(np.mean(v))
    if mean <= 0:
        raise ValueError("mean must be positive")
    ratio = float(np.var(v)) / mean**2
    if ratio > B + 1e-12:
        raise ValueError(f"Var/E^2 = {ratio:.4f} exceeds the claimed bound B = {B:.4f}")
    failed = False
    if mode == "exact":
        value = mean
    elif mode == "adversarial":
        value = mean * (1.0 + eps)
    elif mode == "stochastic":
        rng = stream(seed, 0xD)
        if rng.random() < 0.75:
            value = mean * (1.0 + eps * rng.uniform(-1.0, 1.0))
        else:
            sign = 1.0 if rng.random() < 0.5 else -1.0
            value = mean * (1.0 + sign * eps * rng.uniform(1.0, 2.0))
            failed = True
    else:
        raise ValueError(f"unknown mode: {mode!r}")
    return Estimate(
        value=value,
        abs_error_bound=eps * mean,
        success_prob=0.75,
        queries_charged=_QMC_C * B / eps * sampler_cost,
        seed=seed,
        failed=failed,
    )
