"""Tests for matrix generation, decomposition, and exact oracles."""

import math

import numpy as np
import pytest

from specsum.matrix_core import (
    SymmetricMatrix,
    compute_mu,
    condition_number,
    exact_spectral_sum,
    generate_spd,
    load_matrix_market,
    save_matrix_market,
    scale_to_contraction,
    spectral_decompose,
)


class TestSymmetricMatrix:
    def test_symmetrizes_input(self):
        a = np.array([[1.0, 2.0 + 1e-14], [2.0, 3.0]])
        m = SymmetricMatrix(2, a)
        assert np.array_equal(m.entries, m.entries.T)

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError, match="square"):
            SymmetricMatrix(2, np.ones((2, 3)))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            SymmetricMatrix(3, np.eye(2))

    def test_entries_read_only(self):
        m = SymmetricMatrix(2, np.eye(2))
        with pytest.raises(ValueError):
            m.entries[0, 0] = 5.0


class TestGenerateSpd:
    @pytest.mark.parametrize("kappa", [1.0, 5.0, 50.0])
    def test_condition_number_pinned_exactly(self, kappa):
        A = generate_spd(32, kappa, "log_uniform", 0.5, 3)
        assert A.stats.kappa == pytest.approx(kappa, rel=1e-10)

    @pytest.mark.parametrize("norm_cap", [0.25, 0.5, 1.0])
    def test_spectral_norm_pinned(self, norm_cap):
        A = generate_spd(16, 10.0, "uniform", norm_cap, 0)
        assert A.stats.spectral_norm == pytest.approx(norm_cap, rel=1e-10)

    @pytest.mark.parametrize("profile", ["log_uniform", "uniform", "clustered"])
    def test_profiles_stay_in_range(self, profile):
        A = generate_spd(64, 20.0, profile, 0.5, 7)
        w = A.spectral.eigenvalues
        assert w[0] == pytest.approx(0.5)
        assert w[-1] == pytest.approx(0.025)
        assert np.all(w >= 0.025 - 1e-12) and np.all(w <= 0.5 + 1e-12)

    def test_deterministic_given_seed(self):
        a = generate_spd(16, 10.0, "log_uniform", 0.5, 11)
        b = generate_spd(16, 10.0, "log_uniform", 0.5, 11)
        assert np.array_equal(a.entries, b.entries)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=1, kappa=2.0),
            dict(n=4, kappa=0.5),
            dict(n=4, kappa=2.0, norm_cap=1.5),
            dict(n=4, kappa=2.0, profile="bogus"),
        ],
    )
    def test_invalid_arguments(self, kwargs):
        args = dict(n=4, kappa=2.0, profile="uniform", norm_cap=0.5, seed=0)
        args.update(kwargs)
        with pytest.raises(ValueError):
            generate_spd(args["n"], args["kappa"], args["profile"], args["norm_cap"], args["seed"])


class TestSpectralDecompose:
    def test_reconstruction(self):
        A = generate_spd(24, 10.0, "uniform", 0.5, 5)
        sd = spectral_decompose(A)
        rebuilt = (sd.eigenvectors * sd.eigenvalues) @ sd.eigenvectors.T
        assert np.allclose(rebuilt, A.entries, atol=1e-12)

    def test_descending_order(self):
        A = generate_spd(24, 10.0, "uniform", 0.5, 5)
        w = A.spectral.eigenvalues
        assert np.all(np.diff(w) <= 0)

    def test_singular_values_are_absolute_eigenvalues(self):
        m = SymmetricMatrix(2, np.diag([0.5, -0.7]))
        sd = spectral_decompose(m)
        assert list(sd.singular_values) == pytest.approx([0.7, 0.5])


class TestMatrixMarketIO:
    def test_roundtrip(self, tmp_path):
        A = generate_spd(12, 5.0, "uniform", 0.5, 2)
        path = tmp_path / "a.mtx"
        save_matrix_market(path, A)
        B = load_matrix_market(path)
        assert np.allclose(B.entries, A.entries, atol=1e-12)

    def test_rejects_gross_asymmetry(self, tmp_path):
        path = tmp_path / "bad.mtx"
        with open(path, "w") as fh:
            fh.write("%%MatrixMarket matrix array real general\n2 2\n1.0\n0.5\n0.9\n1.0\n")
        with pytest.raises(ValueError, match="asymmetric"):
            load_matrix_market(path)


class TestExactSpectralSum:
    def setup_method(self):
        self.m = SymmetricMatrix(3, np.diag([0.1, 0.2, 0.4]), spd_flag=True)

    def test_log(self):
        expected = math.log(0.1) + math.log(0.2) + math.log(0.4)
        assert exact_spectral_sum(self.m, "log") == pytest.approx(expected)

    def test_inverse(self):
        assert exact_spectral_sum(self.m, "inverse") == pytest.approx(10 + 5 + 2.5)

    def test_power(self):
        assert exact_spectral_sum(self.m, "x_pow_p", 2.0) == pytest.approx(0.01 + 0.04 + 0.16)

    def test_neg_xlogx(self):
        expected = -sum(x * math.log(x) for x in (0.1, 0.2, 0.4))
        assert exact_spectral_sum(self.m, "neg_xlogx") == pytest.approx(expected)

    def test_exp(self):
        expected = sum(math.exp(x) for x in (0.1, 0.2, 0.4))
        assert exact_spectral_sum(self.m, "exp") == pytest.approx(expected)

    def test_log_of_singular_matrix_fails(self):
        sing = SymmetricMatrix(2, np.diag([0.5, 0.0]))
        with pytest.raises(ValueError, match="positive"):
            exact_spectral_sum(sing, "log")

    def test_power_requires_exponent(self):
        with pytest.raises(ValueError, match="exponent"):
            exact_spectral_sum(self.m, "x_pow_p")

    def test_unknown_function(self):
        with pytest.raises(ValueError, match="unknown"):
            exact_spectral_sum(self.m, "tanh")


class TestMuAndConditioning:
    def test_mu_at_most_frobenius(self):
        A = generate_spd(32, 10.0, "log_uniform", 0.5, 9)
        assert A.stats.mu <= A.stats.frobenius_norm + 1e-12

    def test_mu_at_least_spectral_norm(self):
        A = generate_spd(32, 10.0, "log_uniform", 0.5, 9)
        assert A.stats.mu >= A.stats.spectral_norm - 1e-10

    def test_mu_improves_on_nested_grids(self):
        A = generate_spd(32, 10.0, "log_uniform", 0.5, 9)
        coarse = compute_mu(A, grid_points=51)
        fine = compute_mu(A, grid_points=101)
        assert fine <= coarse + 1e-12

    def test_condition_number_diag(self):
        m = SymmetricMatrix(2, np.diag([0.5, 0.05]), spd_flag=True)
        assert condition_number(m) == pytest.approx(10.0)

    def test_scale_to_contraction(self):
        A = generate_spd(16, 5.0, "uniform", 1.0, 4)
        B, factor = scale_to_contraction(A, 0.5)
        assert B.stats.spectral_norm == pytest.approx(0.5)
        assert factor == pytest.approx(2.0)
