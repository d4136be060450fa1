"""Tests for the block-encoding emulation layer."""

import math

import numpy as np
import pytest

from specsum.matrix_core import SymmetricMatrix, generate_spd
from specsum.polyapprox import ChebyshevSeries, approx_monomial
from specsum.qmodel import (
    BlockEncoding,
    CostLedger,
    SveOracle,
    apply_svt,
    density_block_encoding,
    matrix_power,
    polylog,
    product_plain,
    product_preamplified,
    qram_block_encoding,
    sve_all,
    sve_estimate,
    unit_block_encoding,
)


def _contraction(n=16, kappa=10.0, seed=1):
    return generate_spd(n, kappa, "log_uniform", 0.5, seed)


class TestPolylog:
    def test_values(self):
        assert polylog(2) == 1.0
        assert polylog(64) == 36.0
        assert polylog(100) == 49.0

    def test_floor_at_one(self):
        assert polylog(1) >= 1.0


class TestCostLedger:
    def test_accumulates(self):
        led = CostLedger()
        led.charge(10.0, be_uses=2, ae_rounds=5)
        led.charge(3.0, sve_calls=7)
        assert led.total_queries == 13.0
        assert led.be_uses == 2
        assert led.sve_calls == 7
        assert led.ae_rounds == 5

    def test_as_dict_keys(self):
        assert set(CostLedger().as_dict()) == {
            "be_uses", "sve_calls", "ae_rounds", "total_queries"
        }


class TestEncodings:
    def test_qram_normalization(self):
        A = _contraction()
        be = qram_block_encoding(A)
        assert be.alpha == pytest.approx(A.stats.mu)
        assert np.allclose(be.target, A.entries, atol=1e-12)
        assert be.use_cost == polylog(A.n)
        assert be.eps == 0.0

    def test_qram_rejects_expansion(self):
        big = SymmetricMatrix(4, 2.0 * np.eye(4), spd_flag=True)
        with pytest.raises(ValueError, match="<= 1"):
            qram_block_encoding(big)

    def test_unit_encoding_perturbation_within_budget(self):
        A = _contraction()
        for mode in ("stochastic", "adversarial"):
            be = unit_block_encoding(A, 1e-3, mode=mode, seed=5)
            assert np.linalg.norm(be.perturbation, 2) <= 1e-3 + 1e-12

    def test_unit_encoding_exact_mode_is_exact(self):
        be = unit_block_encoding(_contraction(), 1e-3, mode="exact")
        assert be.encoding_defect() == 0.0

    def test_unit_encoding_requires_positive_eps(self):
        with pytest.raises(ValueError, match="positive"):
            unit_block_encoding(_contraction(), 0.0)

    def test_density_requires_unit_trace(self):
        with pytest.raises(ValueError, match="unit trace"):
            density_block_encoding(_contraction())

    def test_density_encoding(self):
        A = _contraction()
        rho = SymmetricMatrix(A.n, np.asarray(A.entries) / np.trace(A.entries),
                              spd_flag=True)
        be = density_block_encoding(rho)
        assert be.alpha == 1.0
        assert be.use_cost == 1.0


class TestApplySvt:
    def test_polynomial_applied_to_eigenvalues(self):
        A = _contraction()
        be = qram_block_encoding(A)
        mono = approx_monomial(3, 3)
        half = ChebyshevSeries(
            degree=3, coefficients=np.asarray(mono.coefficients) / 2.0,
            target="x^3/2", certified_sup_error=0.0,
            certified_on=(-1.0, 1.0), global_bound=0.5,
        )
        out = apply_svt(be, half)
        expected = np.linalg.matrix_power(np.asarray(be.payload), 3) / 2.0
        assert np.allclose(out.payload, expected, atol=1e-10)
        assert out.use_cost == (3 + 1) * be.use_cost

    def test_rejects_unbounded_polynomial(self):
        be = qram_block_encoding(_contraction())
        loud = ChebyshevSeries(degree=1, coefficients=np.array([0.0, 0.9]),
                               target="x", certified_sup_error=0.0,
                               certified_on=(-1.0, 1.0), global_bound=0.9)
        with pytest.raises(ValueError, match="1/2"):
            apply_svt(be, loud)


class TestProducts:
    def test_plain_product_algebra(self):
        A = _contraction(seed=2)
        be = qram_block_encoding(A)
        out = product_plain(be, be)
        assert out.alpha == pytest.approx(be.alpha**2)
        assert np.allclose(out.target, np.asarray(A.entries) @ np.asarray(A.entries),
                           atol=1e-12)

    def test_preamplified_product_halves(self):
        A = _contraction(seed=2)
        be = qram_block_encoding(A)
        out = product_preamplified(be, be)
        expected = (np.asarray(A.entries) @ np.asarray(A.entries)) / 2.0
        assert out.alpha == 1.0
        assert np.allclose(out.payload, expected, atol=1e-12)

    def test_preamplified_requires_contractions(self):
        big = BlockEncoding(payload=np.eye(2), alpha=2.0, ancillas=1, eps=0.0,
                            use_cost=1.0, perturbation_mode="exact", seed=0)
        with pytest.raises(ValueError, match="contraction|<= 1"):
            product_preamplified(big, big)


class TestMatrixPower:
    def _half_encoding(self):
        # I/kappa <= H <= I with H = diag spectrum, encoded exactly.
        h = np.diag(np.linspace(0.25, 1.0, 8))
        return BlockEncoding(payload=h, alpha=1.0, ancillas=2, eps=0.0,
                             use_cost=1.0, perturbation_mode="exact", seed=0)

    def test_fractional_power_payload(self):
        be = self._half_encoding()
        out = matrix_power(be, 0.5, 4.0, 1e-6)
        expected = np.diag(np.sqrt(np.linspace(0.25, 1.0, 8))) / 2.0
        assert np.allclose(out.payload, expected, atol=1e-12)

    def test_rejects_noisy_input(self):
        h = np.diag(np.linspace(0.25, 1.0, 8))
        noisy = BlockEncoding(payload=h, alpha=1.0, ancillas=2, eps=1e-2,
                              use_cost=1.0, perturbation_mode="exact", seed=0)
        with pytest.raises(ValueError, match="budget"):
            matrix_power(noisy, 0.5, 4.0, 1e-6)

    def test_rejects_out_of_range_spectrum(self):
        h = np.diag(np.linspace(0.01, 1.0, 8))
        be = BlockEncoding(payload=h, alpha=1.0, ancillas=2, eps=0.0,
                           use_cost=1.0, perturbation_mode="exact", seed=0)
        with pytest.raises(ValueError, match="kappa"):
            matrix_power(be, 0.5, 4.0, 1e-6)

    def test_rejects_bad_exponent(self):
        with pytest.raises(ValueError, match="c must"):
            matrix_power(self._half_encoding(), 1.5, 4.0, 1e-6)


class TestSveOracle:
    def _oracle(self, mode, precision=1e-3, seed=0):
        A = _contraction()
        return SveOracle(A.spectral, precision, mode, seed, A.stats.mu), A

    def test_exact_mode(self):
        oracle, A = self._oracle("exact")
        assert sve_estimate(oracle, 0) == pytest.approx(A.stats.spectral_norm)

    def test_grid_round_within_precision(self):
        oracle, A = self._oracle("grid_round")
        sv = A.spectral.singular_values
        est = sve_all(oracle)
        assert np.all(np.abs(est - sv) <= oracle.precision / 2 + 1e-15)

    def test_stochastic_within_precision_and_deterministic(self):
        oracle, A = self._oracle("stochastic", seed=9)
        est1 = sve_all(oracle)
        est2 = sve_all(oracle)
        assert np.array_equal(est1, est2)
        assert np.all(np.abs(est1 - A.spectral.singular_values) <= oracle.precision)

    def test_cost_per_call(self):
        oracle, A = self._oracle("exact", precision=1e-4)
        assert oracle.cost_per_call == pytest.approx(A.stats.mu / 1e-4 * polylog(A.n))

    def test_index_out_of_range(self):
        oracle, _ = self._oracle("exact")
        with pytest.raises(IndexError):
            sve_estimate(oracle, oracle.n)
