"""PSD matrix primitives: frozen small cases plus randomized properties."""

import math

import numpy as np
import pytest
from scipy.linalg import sqrtm

from gmmot import InvalidMatrix, NotPSD, eigh_sym, pinv_psd, sqrt_psd, symmetrize

from conftest import random_psd

# Hand-derived 2x2 case: eigenvalues of [[2,1],[1,2]] solve l^2 - 4l + 3 = 0.
TWO_ONE = np.array([[2.0, 1.0], [1.0, 2.0]])
TWO_ONE_EIGS = np.array([1.0, 3.0])
SQ3 = math.sqrt(3.0)
TWO_ONE_SQRT = 0.5 * np.array([[1.0 + SQ3, SQ3 - 1.0], [SQ3 - 1.0, 1.0 + SQ3]])
TWO_ONE_PINV = np.array([[2.0, -1.0], [-1.0, 2.0]]) / 3.0


class TestEigh:
    def test_identity(self):
        w, _ = eigh_sym(np.eye(2))
        np.testing.assert_allclose(w, [1.0, 1.0])

    def test_diagonal(self):
        w, v = eigh_sym(np.diag([4.0, 9.0]))
        np.testing.assert_allclose(w, [4.0, 9.0])
        np.testing.assert_allclose(np.abs(v), np.eye(2), atol=1e-14)

    def test_hand_derived(self):
        w, _ = eigh_sym(TWO_ONE)
        np.testing.assert_allclose(w, TWO_ONE_EIGS, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    def test_reconstruction_and_orthonormality(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(20):
            m = random_psd(rng, n)
            w, v = eigh_sym(m)
            np.testing.assert_allclose(
                v @ np.diag(w) @ v.T, m, atol=1e-10 * max(np.linalg.norm(m), 1)
            )
            np.testing.assert_allclose(v.T @ v, np.eye(n), atol=1e-10)

    def test_nonfinite_rejected(self):
        with pytest.raises(InvalidMatrix):
            eigh_sym(np.array([[1.0, np.nan], [np.nan, 1.0]]))

    def test_nonsquare_rejected(self):
        with pytest.raises(InvalidMatrix):
            eigh_sym(np.ones((2, 3)))


class TestSqrt:
    def test_diagonal(self):
        np.testing.assert_allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))

    def test_zero(self):
        np.testing.assert_allclose(sqrt_psd(np.zeros((3, 3))), np.zeros((3, 3)))

    def test_hand_derived(self):
        np.testing.assert_allclose(sqrt_psd(TWO_ONE), TWO_ONE_SQRT, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 3, 8])
    def test_square_recovers_input(self, n):
        rng = np.random.default_rng(200 + n)
        for _ in range(25):
            m = random_psd(rng, n)
            r = sqrt_psd(m)
            np.testing.assert_allclose(
                r @ r, m, atol=1e-8 * (1 + np.linalg.norm(m))
            )

    def test_matches_scipy_on_nonsingular(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            m = random_psd(rng, 4) + 0.1 * np.eye(4)
            np.testing.assert_allclose(sqrt_psd(m), np.real(sqrtm(m)), atol=1e-9)

    def test_small_negative_noise_clipped(self):
        m = np.array([[1.0, 0.0], [0.0, -1e-14]])
        r = sqrt_psd(m)
        assert r[1, 1] == 0.0

    def test_indefinite_rejected(self):
        with pytest.raises(NotPSD):
            sqrt_psd(np.diag([1.0, -0.5]))


class TestPinv:
    def test_rank_deficient_diagonal(self):
        np.testing.assert_allclose(
            pinv_psd(np.diag([4.0, 0.0])), np.diag([0.25, 0.0])
        )

    def test_identity(self):
        np.testing.assert_allclose(pinv_psd(np.eye(3)), np.eye(3))

    def test_hand_derived(self):
        np.testing.assert_allclose(pinv_psd(TWO_ONE), TWO_ONE_PINV, atol=1e-12)

    @pytest.mark.parametrize("singular", [False, True])
    def test_moore_penrose_identities(self, singular):
        rng = np.random.default_rng(31 if singular else 13)
        for _ in range(25):
            m = random_psd(rng, 4, singular=singular)
            r = pinv_psd(m)
            np.testing.assert_allclose(m @ r @ m, m, atol=1e-9 * (1 + np.linalg.norm(m)))
            np.testing.assert_allclose(r @ m @ r, r, atol=1e-9 * (1 + np.linalg.norm(r)))

    def test_double_pinv_on_range(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            m = random_psd(rng, 5, singular=True)
            mm = pinv_psd(pinv_psd(m))
            # Equality holds on the range of m: project both sides onto it.
            proj = m @ pinv_psd(m)
            np.testing.assert_allclose(
                proj @ mm @ proj, proj @ m @ proj, atol=1e-8 * (1 + np.linalg.norm(m))
            )


def test_symmetrize_averages_triangles():
    m = np.array([[1.0, 2.0], [0.0, 1.0]])
    s = symmetrize(m)
    np.testing.assert_allclose(s, [[1.0, 1.0], [1.0, 1.0]])
    assert np.array_equal(s, s.T)
