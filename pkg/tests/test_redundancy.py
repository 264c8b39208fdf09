import numpy as np
import pytest

from nidf.data import DataMatrix
from nidf.errors import InputError
from nidf.redundancy import RedundancyMatrix, abs_correlation, psd_repair, redundancy_matrix


class TestAbsCorrelation:
    def test_duplicate_and_negated_columns(self, rng):
        f = rng.normal(size=20)
        A = abs_correlation(DataMatrix(np.column_stack([f, f, -3 * f, rng.normal(size=20)]))).values
        assert A[0, 1] == pytest.approx(1.0, abs=1e-12)
        assert A[0, 2] == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_array_equal(np.diag(A), 1.0)

    def test_constant_column_uncorrelated(self, rng):
        A = abs_correlation(DataMatrix(np.column_stack([np.full(10, 2.0), rng.normal(size=10)]))).values
        assert A[0, 1] == A[1, 0] == 0.0
        assert A[0, 0] == 1.0

    def test_matches_numpy_corrcoef(self, rng):
        F = rng.normal(size=(30, 6))
        np.testing.assert_allclose(abs_correlation(DataMatrix(F)).values, np.abs(np.corrcoef(F.T)), atol=1e-12)

    def test_affine_invariance(self, rng):
        F = rng.normal(size=(25, 5))
        a = rng.uniform(0.5, 3, size=5) * rng.choice([-1, 1], size=5)
        b = rng.normal(size=5) * 10
        A1 = abs_correlation(DataMatrix(F)).values
        A2 = abs_correlation(DataMatrix(F * a + b)).values
        np.testing.assert_allclose(A1, A2, atol=1e-10)

    def test_entries_in_unit_interval(self, rng):
        A = abs_correlation(DataMatrix(rng.normal(size=(12, 9)))).values
        assert A.min() >= 0 and A.max() <= 1
        np.testing.assert_array_equal(A, A.T)


class TestPsdRepair:
    def test_psd_input_only_gains_ridge(self, rng):
        B = rng.normal(size=(5, 5))
        A = B @ B.T
        out = psd_repair(RedundancyMatrix(A), eps=1e-8)
        np.testing.assert_allclose(out.values, A + 1e-8 * np.eye(5), atol=1e-9)
        assert out.psd_repaired

    def test_rank_one_ones(self):
        out = psd_repair(RedundancyMatrix(np.ones((2, 2))))
        np.testing.assert_allclose(out.values, np.ones((2, 2)) + 1e-8 * np.eye(2), atol=1e-12)

    def test_known_negative_eigenvalue(self):
        # [[1,b,c],[b,1,b],[c,b,1]] has smallest eigenvalue (2 + c - sqrt(c^2 + 8 b^2)) / 2;
        # b = 0.9 and c = (8 b^2 - 4.41) / 4.2 put it at exactly -0.05
        b = 0.9
        c = (8 * b * b - 4.41) / 4.2
        A = np.array([[1, b, c], [b, 1, b], [c, b, 1]])
        assert np.linalg.eigvalsh(A)[0] == pytest.approx(-0.05, abs=1e-12)
        eps = 1e-8
        out = psd_repair(RedundancyMatrix(A), eps)
        assert out.min_eig_before == pytest.approx(-0.05, abs=1e-12)
        lam_min = np.linalg.eigvalsh(out.values)[0]
        assert eps - 1e-10 <= lam_min <= eps + 1e-10
        assert np.linalg.norm(out.values - A, 2) <= 0.05 + eps + 1e-12

    def test_rejects_asymmetric(self):
        with pytest.raises(InputError):
            psd_repair(RedundancyMatrix(np.array([[1.0, 0.2], [0.3, 1.0]])))

    @pytest.mark.parametrize("seed", range(5))
    def test_random_correlation_matrices(self, seed):
        r = np.random.default_rng(seed)
        d = int(r.integers(5, 200))
        F = r.normal(size=(max(3, d // 4), d))
        R = redundancy_matrix(DataMatrix(F))
        assert np.linalg.eigvalsh(R.values)[0] >= -1e-8
        np.testing.assert_allclose(R.values, R.values.T, atol=1e-10)
        z = r.dirichlet(np.ones(d))
        assert z @ R.values @ z >= 0
