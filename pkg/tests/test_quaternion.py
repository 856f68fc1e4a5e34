"""Quaternion algebra: pinned products plus algebraic laws under hypothesis."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkq import quaternion as qt

finite = st.floats(min_value=-10.0, max_value=10.0,
                   allow_nan=False, allow_infinity=False)
quats = st.tuples(finite, finite, finite, finite).map(
    lambda t: np.array(t, dtype=float))


def test_unit_table():
    i = qt.quat(0, 1, 0, 0)
    j = qt.quat(0, 0, 1, 0)
    k = qt.quat(0, 0, 0, 1)
    np.testing.assert_array_equal(qt.qmul(i, j), k)
    np.testing.assert_array_equal(qt.qmul(j, k), i)
    np.testing.assert_array_equal(qt.qmul(k, i), j)
    np.testing.assert_array_equal(qt.qmul(i, i), qt.quat(-1))
    np.testing.assert_array_equal(qt.qmul(j, j), qt.quat(-1))
    np.testing.assert_array_equal(qt.qmul(k, k), qt.quat(-1))


def test_pinned_product():
    a = qt.quat(1.0, 2.0, 3.0, 4.0)
    b = qt.quat(5.0, 6.0, 7.0, 8.0)
    # (1+2i+3j+4k)(5+6i+7j+8k) worked out by hand
    np.testing.assert_allclose(qt.qmul(a, b),
                               qt.quat(-60.0, 12.0, 30.0, 24.0))
    np.testing.assert_allclose(qt.qmul(b, a),
                               qt.quat(-60.0, 20.0, 14.0, 32.0))


@given(quats, quats, quats)
def test_associative(a, b, c):
    left = qt.qmul(qt.qmul(a, b), c)
    right = qt.qmul(a, qt.qmul(b, c))
    np.testing.assert_allclose(left, right, atol=1e-9)


@given(quats, quats)
def test_norm_multiplicative(a, b):
    np.testing.assert_allclose(qt.qnorm2(qt.qmul(a, b)),
                               qt.qnorm2(a) * qt.qnorm2(b),
                               rtol=1e-9, atol=1e-9)


@given(quats, quats)
def test_conj_antihomomorphism(a, b):
    np.testing.assert_allclose(qt.qconj(qt.qmul(a, b)),
                               qt.qmul(qt.qconj(b), qt.qconj(a)),
                               atol=1e-9)


@given(quats)
def test_inverse(q):
    if qt.qnorm2(q) < 1e-8:
        return
    np.testing.assert_allclose(qt.qmul(q, qt.qinv(q)), qt.quat(1.0),
                               atol=1e-9)
    np.testing.assert_allclose(qt.qmul(qt.qinv(q), q), qt.quat(1.0),
                               atol=1e-9)


@given(quats)
def test_real_imag_split(q):
    rebuilt = np.concatenate(([qt.qreal(q)], qt.qimag(q)))
    np.testing.assert_allclose(rebuilt, q, atol=0)


@given(quats)
def test_zw_roundtrip(q):
    z, w = qt.to_zw(q)
    np.testing.assert_allclose(qt.from_zw(z, w), q, atol=0)


@given(quats)
def test_jsplit_roundtrip(q):
    Z, W = qt.to_jsplit(q)
    np.testing.assert_allclose(qt.from_jsplit(Z, W), q, atol=1e-12)


def test_qinv_zero_is_non_finite():
    with np.errstate(invalid="ignore"):
        out = qt.qinv(qt.quat(0.0))
    assert not np.isfinite(out).any()


class TestMatrixOps:
    """Quaternion-entry matrices against their complex 2n x 2n images."""

    rng = np.random.default_rng(7)

    def _random_qmat(self, n, m):
        return self.rng.normal(size=(n, m, 4))

    def test_qmatmul_via_complexify(self):
        # the complex image is only defined for square matrices
        A = self._random_qmat(3, 3)
        B = self._random_qmat(3, 3)
        AB = qt.qmatmul(A, B)
        CA, CB = qt.complexify_matrix(A), qt.complexify_matrix(B)
        np.testing.assert_allclose(qt.complexify_matrix(AB), CA @ CB,
                                   atol=1e-12)

    def test_qmatvec_matches_qmatmul(self):
        A = self._random_qmat(3, 3)
        v = self._random_qmat(3, 1)
        np.testing.assert_allclose(qt.qmatvec(A, v[:, 0]), qt.qmatmul(A, v)[:, 0],
                                   atol=1e-12)

    def test_dagger_involution(self):
        A = self._random_qmat(3, 3)
        np.testing.assert_allclose(qt.qdagger(qt.qdagger(A)), A, atol=0)

    def test_dagger_antihomomorphism(self):
        A = self._random_qmat(3, 3)
        B = self._random_qmat(3, 3)
        np.testing.assert_allclose(qt.qdagger(qt.qmatmul(A, B)),
                                   qt.qmatmul(qt.qdagger(B), qt.qdagger(A)),
                                   atol=1e-12)

    def test_decomplexify_roundtrip(self):
        A = self._random_qmat(3, 3)
        np.testing.assert_allclose(
            qt.decomplexify_matrix(qt.complexify_matrix(A)), A, atol=1e-12)

    def test_decomplexify_rejects_non_quaternionic(self):
        C = np.arange(16, dtype=complex).reshape(4, 4)
        with pytest.raises(ValueError):
            qt.decomplexify_matrix(C)


@settings(max_examples=25)
@given(quats, quats)
def test_batched_mul_matches_scalar(a, b):
    batch_a = np.stack([a, b, a])
    batch_b = np.stack([b, a, a])
    out = qt.qmul(batch_a, batch_b)
    np.testing.assert_allclose(out[0], qt.qmul(a, b), atol=0)
    np.testing.assert_allclose(out[1], qt.qmul(b, a), atol=0)
    np.testing.assert_allclose(out[2], qt.qmul(a, a), atol=0)
