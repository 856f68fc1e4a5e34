"""Quaternion arrays on the last axis.

A quaternion w + x*i + y*j + z*k is a length-4 slice (w, x, y, z) on the last
axis of a float64 ndarray; every function broadcasts over leading axes, so a
single quaternion is shape (4,), a vector of n of them (n, 4), a matrix
(m, n, 4).

Two complex splittings of a quaternion show up in the geometry and both are
provided:

    right split   q = z + w*j        (z, w) = (q0 + i*q1, q2 + i*q3)
    left split    q = Z + j*W        (Z, W) = (q0 + i*q1, q2 - i*q3)

Left multiplication by a quaternionic matrix commutes with scalar
multiplication by i on the right, which in the left split acts as the complex
scalar i on (Z, W).  That makes the left split the right tool for the 6x6
complex image of a 3x3 quaternionic matrix (see complexify_matrix).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ONE", "I", "J", "K",
    "qmul", "qconj", "qnorm2", "qabs", "qinv", "qreal", "qimag",
    "quat", "from_zw", "to_zw", "from_jsplit", "to_jsplit",
    "qmatvec", "qmatmul", "qdagger",
    "complexify_matrix", "decomplexify_matrix",
]

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])


def quat(w=0.0, x=0.0, y=0.0, z=0.0):
    """Build a single quaternion from real components."""
    return np.array([w, x, y, z], dtype=float)


def qmul(a, b):
    """Hamilton product, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj(q):
    q = np.asarray(q, dtype=float)
    out = q.copy()
    out[..., 1:] = -out[..., 1:]
    return out


def qnorm2(q):
    q = np.asarray(q, dtype=float)
    return np.sum(q * q, axis=-1)


def qabs(q):
    return np.sqrt(qnorm2(q))


def qinv(q):
    q = np.asarray(q, dtype=float)
    n2 = qnorm2(q)[..., None]
    return qconj(q) / n2


def qreal(q):
    return np.asarray(q, dtype=float)[..., 0]


def qimag(q):
    """Imaginary part as a 3-vector (i, j, k components)."""
    return np.asarray(q, dtype=float)[..., 1:]


def from_zw(z, w):
    """q = z + w*j from two complex arrays."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.stack([z.real, z.imag, w.real, w.imag], axis=-1)


def to_zw(q):
    """Inverse of from_zw: (z, w) with q = z + w*j."""
    q = np.asarray(q, dtype=float)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] + 1j * q[..., 3]


def from_jsplit(Z, W):
    """q = Z + j*W from two complex arrays (left split)."""
    Z = np.asarray(Z, dtype=complex)
    W = np.asarray(W, dtype=complex)
    return np.stack([Z.real, Z.imag, W.real, -W.imag], axis=-1)


def to_jsplit(q):
    """Inverse of from_jsplit: (Z, W) with q = Z + j*W."""
    q = np.asarray(q, dtype=float)
    return q[..., 0] + 1j * q[..., 1], q[..., 2] - 1j * q[..., 3]


def qmatvec(M, v):
    """Left action of a quaternionic matrix: (..., m, n, 4) x (..., n, 4)."""
    M = np.asarray(M, dtype=float)
    v = np.asarray(v, dtype=float)
    prod = qmul(M, v[..., None, :, :])
    return np.sum(prod, axis=-2)


def qmatmul(A, B):
    """Product of quaternionic matrices (..., m, n, 4) x (..., n, p, 4)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    prod = qmul(A[..., :, :, None, :], B[..., None, :, :, :])
    return np.sum(prod, axis=-3)


def qdagger(M):
    """Conjugate transpose of a quaternionic matrix."""
    M = np.asarray(M, dtype=float)
    return qconj(np.swapaxes(M, -2, -3))


def complexify_matrix(M):
    """Complex 2n x 2n image of an n x n quaternionic matrix.

    Entry q = Z + j*W maps to the 2x2 complex block [[Z, -conj(W)], [W,
    conj(Z)]]; blocks are interleaved, so row/column 2a, 2a+1 belong to
    quaternionic index a.  The map is an algebra homomorphism:
    complexify(AB) = complexify(A) complexify(B).
    """
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    Z, W = to_jsplit(M)
    C = np.zeros((2 * n, 2 * n), dtype=complex)
    C[0::2, 0::2] = Z
    C[0::2, 1::2] = -np.conj(W)
    C[1::2, 0::2] = W
    C[1::2, 1::2] = np.conj(Z)
    return C


def decomplexify_matrix(C, tol=1e-9):
    """Inverse of complexify_matrix, checking the block structure.

    Raises ValueError if C is not (within tol) in the image of the
    complexification, i.e. does not commute with the quaternionic structure.
    """
    C = np.asarray(C, dtype=complex)
    n = C.shape[0] // 2
    Z = C[0::2, 0::2]
    W = C[1::2, 0::2]
    resid = max(
        np.max(np.abs(C[1::2, 1::2] - np.conj(Z))),
        np.max(np.abs(C[0::2, 1::2] + np.conj(W))),
    )
    scale = max(1.0, np.max(np.abs(C)))
    if resid > tol * scale:
        raise ValueError(
            "matrix is not in the image of the quaternionic complexification "
            f"(block residual {resid:.3e})"
        )
    return from_jsplit(Z, W)
