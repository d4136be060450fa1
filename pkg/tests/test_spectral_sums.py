"""Tests for the quantum-model spectral-sum estimators."""

import math

import numpy as np
import pytest

from specsum.matrix_core import SymmetricMatrix, exact_spectral_sum, generate_spd
from specsum.spectral_sums import (
    ALGORITHMS,
    AlgoConfig,
    logdet_chebyshev,
    logdet_edge_cases,
    logdet_qmc,
    logdet_sve,
    logdet_svt,
    logdet_taylor,
    run_algorithm,
    schatten_p,
    trace_inverse,
    vn_entropy,
)


def _matrix(n=32, kappa=10.0, seed=1, norm=0.5):
    return generate_spd(n, kappa, "log_uniform", norm, seed)


def _density(n=32, kappa=10.0, seed=1):
    A = _matrix(n, kappa, seed)
    rho = np.asarray(A.entries) / np.trace(A.entries)
    return SymmetricMatrix(n, rho, spd_flag=True)


class TestAlgoConfig:
    def test_defaults_valid(self):
        cfg = AlgoConfig()
        assert cfg.eps == 0.1 and cfg.mode == "exact"

    @pytest.mark.parametrize("kwargs", [dict(eps=0.0), dict(eps=1.0),
                                        dict(delta=0.0), dict(delta=0.5)])
    def test_invalid_ranges(self, kwargs):
        with pytest.raises(ValueError):
            AlgoConfig(**kwargs)


class TestLogdetSvt:
    def test_exact_mode_within_guarantee(self):
        A = _matrix()
        rep = logdet_svt(A, AlgoConfig(eps=0.05))
        assert rep.guarantee == "relative"
        assert rep.guarantee_bound == pytest.approx(0.05 * abs(rep.exact))
        assert rep.passed

    def test_rejects_norm_one(self):
        A = SymmetricMatrix(4, np.eye(4), spd_flag=True)
        with pytest.raises(ValueError, match="edge-case"):
            logdet_svt(A, AlgoConfig())

    def test_rejects_indefinite(self):
        m = SymmetricMatrix(2, np.diag([0.5, -0.1]))
        with pytest.raises(ValueError, match="SPD"):
            logdet_svt(m, AlgoConfig())

    def test_ledger_populated(self):
        rep = logdet_svt(_matrix(), AlgoConfig())
        assert rep.ledger.total_queries > 0
        assert rep.ledger.be_uses > 0

    def test_stochastic_same_seed_reproducible(self):
        A = _matrix()
        cfg = AlgoConfig(mode="stochastic", seed=7)
        a = logdet_svt(A, cfg)
        b = logdet_svt(A, cfg)
        assert a.estimate.value == b.estimate.value

    def test_adversarial_still_passes(self):
        rep = logdet_svt(_matrix(), AlgoConfig(eps=0.1, mode="adversarial", seed=3))
        assert rep.passed


class TestLogdetEdgeCases:
    def test_identity_spectrum_is_zero(self):
        A = SymmetricMatrix(8, np.eye(8), spd_flag=True)
        rep = logdet_edge_cases(A, AlgoConfig())
        assert rep.estimate.value == 0.0
        assert rep.exact == 0.0
        assert any("identity" in w for w in rep.warnings)

    def test_unit_norm_deflation(self):
        w = np.concatenate([[1.0, 1.0], np.linspace(0.1, 0.5, 6)])
        A = SymmetricMatrix(8, np.diag(w), spd_flag=True)
        rep = logdet_edge_cases(A, AlgoConfig(eps=0.05))
        assert rep.parameters["branch"] == "unit_norm"
        assert rep.parameters["multiplicity"] == 2
        assert rep.passed

    def test_rescale_branch(self):
        A = SymmetricMatrix(6, np.diag(np.linspace(1.2, 3.0, 6)), spd_flag=True)
        rep = logdet_edge_cases(A, AlgoConfig(eps=0.05))
        assert rep.parameters["branch"] == "rescale"
        assert rep.guarantee == "absolute"
        assert rep.guarantee_bound == pytest.approx(6 * 0.05)
        assert rep.passed

    def test_mixed_sign_warning(self):
        A = SymmetricMatrix(4, np.diag([2.0, 1.5, 0.8, 0.4]), spd_flag=True)
        rep = logdet_edge_cases(A, AlgoConfig(eps=0.05))
        assert any("mixed-sign" in w for w in rep.warnings)

    def test_rejects_strict_contraction(self):
        with pytest.raises(ValueError, match="logdet_svt"):
            logdet_edge_cases(_matrix(), AlgoConfig())


class TestSchattenP:
    @pytest.mark.parametrize("p", [1, 2, 3, 4, 5, 8])
    def test_relative_guarantee(self, p):
        A = _matrix(seed=p)
        rep = schatten_p(A, p, AlgoConfig(eps=0.1))
        exact = exact_spectral_sum(A, "x_pow_p", p=p) ** (1.0 / p)
        assert rep.exact == pytest.approx(exact)
        assert rep.passed

    def test_monomial_approx_path(self):
        A = _matrix()
        rep = schatten_p(A, 8, AlgoConfig(eps=0.1, use_monomial_approx=True))
        assert "monomial_degree" in rep.parameters
        assert rep.passed

    def test_rejects_nonpositive_p(self):
        with pytest.raises(ValueError, match="positive"):
            schatten_p(_matrix(), 0, AlgoConfig())


class TestVnEntropy:
    def test_absolute_guarantee(self):
        rho = _density()
        rep = vn_entropy(rho, AlgoConfig(eps=0.1))
        assert rep.guarantee == "absolute"
        assert rep.guarantee_bound == 0.1
        assert rep.passed

    def test_requires_unit_trace(self):
        with pytest.raises(ValueError, match="unit trace"):
            vn_entropy(_matrix(), AlgoConfig())

    def test_identity_density(self):
        n = 16
        rho = SymmetricMatrix(n, np.eye(n) / n, spd_flag=True)
        rep = vn_entropy(rho, AlgoConfig(eps=0.1))
        assert rep.exact == pytest.approx(math.log(n))
        assert rep.passed


class TestTraceInverse:
    def test_relative_guarantee(self):
        A = _matrix()
        rep = trace_inverse(A, AlgoConfig(eps=0.05))
        assert rep.exact == pytest.approx(exact_spectral_sum(A, "inverse"))
        assert rep.passed

    def test_scaled_identity(self):
        A = SymmetricMatrix(8, 0.5 * np.eye(8), spd_flag=True)
        rep = trace_inverse(A, AlgoConfig(eps=0.05))
        assert rep.exact == pytest.approx(16.0)
        assert rep.passed


class TestAppendixVariants:
    @pytest.mark.parametrize("fn", [logdet_sve, logdet_taylor,
                                    logdet_chebyshev, logdet_qmc])
    def test_exact_mode_passes(self, fn):
        rep = fn(_matrix(), AlgoConfig(eps=0.1))
        assert rep.passed
        assert rep.ledger.total_queries > 0

    @pytest.mark.parametrize("fn", [logdet_sve, logdet_taylor,
                                    logdet_chebyshev, logdet_qmc])
    def test_stochastic_mode_passes(self, fn):
        rep = fn(_matrix(), AlgoConfig(eps=0.1, mode="stochastic", seed=5))
        assert rep.passed

    def test_qmc_rejects_norm_above_half(self):
        A = generate_spd(16, 10.0, "log_uniform", 0.9, 1)
        with pytest.raises(ValueError, match="rescale"):
            logdet_qmc(A, AlgoConfig())

    def test_chebyshev_tracks_margin(self):
        rep = logdet_chebyshev(_matrix(), AlgoConfig(eps=0.1))
        assert rep.parameters["delta_margin"] <= 0.5
        assert rep.parameters["d"] >= 1


class TestRunAlgorithm:
    def test_dispatch_table_covers_names(self):
        A = _matrix()
        for name in ALGORITHMS:
            rep = run_algorithm(A, AlgoConfig(algorithm=name)) if name != "vn_entropy" \
                else run_algorithm(_density(), AlgoConfig(algorithm=name))
            assert rep.algorithm == name

    def test_schatten_dispatch(self):
        rep = run_algorithm(_matrix(), AlgoConfig(algorithm="schatten_p", p=3))
        assert rep.algorithm == "schatten_3"

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown"):
            run_algorithm(_matrix(), AlgoConfig(algorithm="logdet_magic"))
