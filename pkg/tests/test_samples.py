"""
Tests for the shared data model: sample sets, projections and seeded streams
"""

import numpy as np
import pytest

from pwtest.core import (
    DegenerateDataError,
    DimensionError,
    EmptyInputError,
    GroundMetric,
    ProjectionMatrix,
    RankError,
    RngSeed,
    SampleSet,
    canonical_signs,
    orthogonality_defect,
    orthonormalize,
    project,
    random_projection,
)


# ============================================================
# SampleSet
# ============================================================

class TestSampleSet:
    def test_shape(self, rng):
        X = SampleSet(rng.normal(size=(7, 3)))
        assert (X.n, X.d) == (7, 3)
        assert len(X) == 7

    def test_flat_input_is_one_column(self):
        X = SampleSet([1.0, 2.0, 3.0])
        assert (X.n, X.d) == (3, 1)

    def test_data_is_read_only(self, rng):
        X = SampleSet(rng.normal(size=(4, 2)))
        with pytest.raises(ValueError):
            X.data[0, 0] = 1.0

    def test_source_array_is_copied(self):
        source = np.zeros((3, 2))
        X = SampleSet(source)
        source[0, 0] = 5.0
        assert X.data[0, 0] == 0.0

    @pytest.mark.parametrize("values", [[], np.zeros((0, 2))])
    def test_empty_raises(self, values):
        with pytest.raises(EmptyInputError):
            SampleSet(values)

    def test_non_finite_raises(self):
        with pytest.raises(DegenerateDataError):
            SampleSet([[0.0, np.nan]])

    def test_three_dimensional_input_raises(self):
        with pytest.raises(DimensionError):
            SampleSet(np.zeros((2, 2, 2)))

    def test_second_moment(self):
        X = SampleSet([[0.0, 0.0], [3.0, 4.0]])
        assert X.second_moment() == pytest.approx(12.5)

    def test_rows_subsample(self, rng):
        X = SampleSet(rng.normal(size=(6, 2)))
        sub = X.rows([0, 2])
        np.testing.assert_array_equal(sub.data, X.data[[0, 2]])


# ============================================================
# ProjectionMatrix / project / orthonormalize
# ============================================================

class TestProjection:
    def test_identity_projection_is_noop(self, rng):
        X = SampleSet(rng.normal(size=(5, 2)))
        Z = project(ProjectionMatrix.identity(2), X)
        np.testing.assert_array_equal(Z.data, X.data)

    def test_projection_shape(self, rng):
        X = SampleSet(rng.normal(size=(5, 4)))
        A = random_projection(4, 2, RngSeed(1))
        assert project(A, X).data.shape == (5, 2)

    def test_diagonal_direction(self):
        A = ProjectionMatrix(np.array([[1.0], [1.0]]) / np.sqrt(2.0))
        Z = project(A, SampleSet([[1.0, 1.0]]))
        assert Z.data[0, 0] == pytest.approx(np.sqrt(2.0))

    def test_dimension_mismatch(self, rng):
        X = SampleSet(rng.normal(size=(5, 2)))
        A = ProjectionMatrix(np.eye(3)[:, :1])
        with pytest.raises(DimensionError):
            project(A, X)

    def test_k_larger_than_d_rejected(self):
        with pytest.raises(DimensionError):
            ProjectionMatrix(np.ones((2, 3)))

    def test_direction_needs_k_one(self):
        with pytest.raises(DimensionError):
            ProjectionMatrix.identity(2).direction()

    def test_linear(self, rng):
        A = random_projection(4, 2, RngSeed(6))
        U, V = rng.normal(size=(7, 4)), rng.normal(size=(7, 4))
        combined = project(A, SampleSet(2.5 * U - 0.5 * V)).data
        expected = 2.5 * project(A, SampleSet(U)).data - 0.5 * project(A, SampleSet(V)).data
        np.testing.assert_allclose(combined, expected, atol=1e-12)

    def test_orthonormal_projection_is_one_lipschitz(self, rng):
        A = random_projection(6, 3, RngSeed(2))
        U, V = rng.normal(size=(50, 6)), rng.normal(size=(50, 6))
        projected = np.linalg.norm(project(A, SampleSet(U)).data - project(A, SampleSet(V)).data, axis=1)
        assert np.all(projected <= np.linalg.norm(U - V, axis=1) + 1e-12)


class TestOrthonormalize:
    def test_result_is_orthonormal(self, rng):
        A = orthonormalize(rng.normal(size=(5, 3)))
        assert A.defect() < 1e-12
        assert A.is_orthonormal()

    def test_column_space_is_preserved(self, rng):
        M = rng.normal(size=(5, 2))
        A = orthonormalize(M)
        # M lies in span(A)
        residual = M - A.entries @ (A.entries.T @ M)
        assert np.linalg.norm(residual) < 1e-10

    def test_defect_of_repeated_column(self):
        # A^T A = diag(2, 1)
        assert orthogonality_defect(ProjectionMatrix([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])) == pytest.approx(1.0)

    def test_idempotent_up_to_sign(self, rng):
        A = orthonormalize(rng.normal(size=(5, 3)))
        B = orthonormalize(A.entries)
        np.testing.assert_allclose(np.abs(A.entries.T @ B.entries), np.eye(3), atol=1e-12)
        np.testing.assert_allclose(np.abs(B.entries), np.abs(A.entries), atol=1e-12)

    def test_canonical_sign(self):
        A = orthonormalize([[0.0], [-2.0]])
        np.testing.assert_allclose(A.direction(), [0.0, 1.0], atol=1e-15)

    def test_canonical_signs_flip_columns(self):
        M = canonical_signs(np.array([[1.0, -3.0], [-2.0, 1.0]]))
        np.testing.assert_array_equal(M, [[-1.0, 3.0], [2.0, -1.0]])

    def test_rank_deficient(self):
        with pytest.raises(RankError):
            orthonormalize([[1.0, 2.0], [2.0, 4.0]])

    def test_wide_matrix(self):
        with pytest.raises(RankError):
            orthonormalize(np.ones((2, 3)))

    def test_defect_of_scaled_identity(self):
        assert orthogonality_defect(ProjectionMatrix(2.0 * np.eye(2))) == pytest.approx(3.0 * np.sqrt(2.0))

    def test_random_projection_is_seeded(self):
        a = random_projection(6, 2, RngSeed(3))
        b = random_projection(6, 2, RngSeed(3))
        np.testing.assert_array_equal(a.entries, b.entries)


# ============================================================
# GroundMetric
# ============================================================

class TestGroundMetric:
    def test_distance(self):
        assert GroundMetric.EUCLIDEAN.distance([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)

    def test_pairwise(self):
        C = GroundMetric.EUCLIDEAN.pairwise([[0.0], [1.0]], [[3.0]])
        np.testing.assert_allclose(C, [[3.0], [2.0]])

    def test_pairwise_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            GroundMetric.EUCLIDEAN.pairwise(np.zeros((2, 2)), np.zeros((2, 3)))


# ============================================================
# RngSeed
# ============================================================

class TestRngSeed:
    def test_same_pair_same_stream(self):
        a = RngSeed(7, 3).generator().random(5)
        b = RngSeed(7, 3).generator().random(5)
        np.testing.assert_array_equal(a, b)

    def test_different_stream_differs(self):
        a = RngSeed(7, 3).generator().random(5)
        b = RngSeed(7, 4).generator().random(5)
        assert not np.array_equal(a, b)

    def test_derive_is_deterministic(self):
        assert RngSeed(1).derive("x") == RngSeed(1).derive("x")
        assert RngSeed(1).derive("x") != RngSeed(1).derive("y")
        assert RngSeed(1).derive(0) != RngSeed(1).derive(1)

    def test_derive_keeps_master_seed(self):
        assert RngSeed(11).derive("a").seed == 11

    @pytest.mark.parametrize("seed", [-1, 2 ** 64])
    def test_out_of_range_seed(self, seed):
        with pytest.raises(ValueError):
            RngSeed(seed)
