"""Indefinite quaternionic Hermitian forms and the hyperboloid geometry.

The form of signature (k, l) on H^{k+l} is

    F(u, v) = - sum_{a < k} conj(u_a) v_a + sum_{a >= k} conj(u_a) v_a .

Points with F(u, u) < 0 make up the negative hyperboloid region; affine
charts u_beta = 1 on a negative slot beta carry the induced quaternion
Kaehler metric of the open ball F_red(x, x) < 1, where F_red is the form with
slot beta removed.  Everything here is generic in (k, l); the rest of the
package only ever needs (1, 2) and its mirror (2, 1).

Matrices act on column vectors from the left.  The stabilizer algebra of F
consists of quaternionic matrices Y with Phi Y + Y^dagger Phi = 0, where Phi
is the diagonal sign matrix of the form; see sp_check.

A second basis shows up for signature (1, 2): the "split" basis related to
the standard one by the orthogonal change

    v0 = (u0 + u1)/sqrt(2),  v1 = (-u0 + u1)/sqrt(2),  v2 = u2,

in which the form becomes conj(v0) v1 + conj(v1) v0 + conj(v2) v2.  Chart
coordinates in that basis live on v0 = 1 and are mapped to the standard chart
by a Cayley-type fractional linear map (split_chart_to_ball).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import quaternion as qt

__all__ = [
    "Region", "HVector", "ChartPoint", "form_signs", "form_F", "region",
    "coordinate_reversal", "to_chart", "from_chart",
    "SPLIT_BASIS_CHANGE", "basis_change_to_split", "basis_change_from_split",
    "split_chart_to_ball", "ball_chart_to_split",
    "phi_matrix", "split_phi_matrix", "sp_check", "form_preservation_defect",
    "ambient_gram", "ambient_metric", "mat_exp",
]

NULL_BAND = 1e-9


class Region(enum.Enum):
    """Sign class of F(u, u), with a relative null band of width 1e-9."""

    MINUS = "Minus"
    NULL = "Null"
    PLUS = "Plus"


def form_signs(k, l):
    """Diagonal signs (-1,)*k + (+1,)*l of the form of signature (k, l)."""
    if k < 0 or l < 0 or k + l == 0:
        raise ValueError(f"bad signature ({k}, {l})")
    return np.concatenate([-np.ones(k), np.ones(l)])


@dataclass(frozen=True)
class HVector:
    """A point of H^{k+l}, components shape (k+l, 4).

    basis is "standard" for the diagonal form or "split" for the mixed form
    of signature (1, 2); the split tag is only legal for (k, l) = (1, 2).
    """

    k: int
    l: int
    components: np.ndarray
    basis: str = "standard"

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=float)
        if comp.shape != (self.k + self.l, 4):
            raise ValueError(
                f"components shape {comp.shape} does not match signature "
                f"({self.k}, {self.l})"
            )
        if self.basis not in ("standard", "split"):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.basis == "split" and (self.k, self.l) != (1, 2):
            raise ValueError("the split basis only exists for signature (1, 2)")
        object.__setattr__(self, "components", comp)

    def _standard_components(self):
        if self.basis == "standard":
            return self.components
        return basis_change_from_split(self.components)

    def form(self, other=None):
        other = self if other is None else other
        if other.basis != self.basis and (self.k, self.l) != (other.k, other.l):
            raise ValueError("operands live in different spaces")
        return form_F(
            self.k, self.l,
            self._standard_components(), other._standard_components(),
        )

    def region(self):
        return region(self.k, self.l, self._standard_components())

    def to_split(self):
        if self.basis == "split":
            return self
        return HVector(1, 2, basis_change_to_split(self.components), "split")

    def to_standard(self):
        if self.basis == "standard":
            return self
        return HVector(1, 2, basis_change_from_split(self.components), "standard")


@dataclass(frozen=True)
class ChartPoint:
    """Inhomogeneous coordinates on the slice u_beta = 1 (or v_0 = 1).

    For the standard basis the defining inequality of the F < 0 region is
    F_red(x, x) < 1; for the split basis of signature (1, 2) it reads
    y1 + conj(y1) + |y2|^2 < 0.  Construction enforces it.
    """

    beta: int
    coords: np.ndarray
    basis: str = "standard"
    k: int = 1
    l: int = 2

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        n = self.k + self.l - 1
        if coords.shape != (n, 4):
            raise ValueError(f"chart coordinates must have shape ({n}, 4)")
        object.__setattr__(self, "coords", coords)
        if self.basis == "standard":
            if not 0 <= self.beta < self.k:
                raise ValueError(f"chart slot {self.beta} is not a negative slot")
            signs = np.delete(form_signs(self.k, self.l), self.beta)
            S = float(np.sum(signs[:, None] * coords * coords))
            if S >= 1.0:
                raise ValueError(
                    f"chart inequality violated: reduced form {S:.6g} >= 1"
                )
        elif self.basis == "split":
            if (self.k, self.l) != (1, 2) or self.beta != 0:
                raise ValueError("split charts exist only on slot 0 of (1, 2)")
            y1, y2 = coords[0], coords[1]
            m = 2.0 * y1[0] + float(np.sum(y2 * y2))
            if m >= 0.0:
                raise ValueError(
                    "chart inequality violated: "
                    f"y1 + conj(y1) + |y2|^2 = {m:.6g} >= 0"
                )
        else:
            raise ValueError(f"unknown basis {self.basis!r}")

    def homogeneous(self):
        """HVector with the chart slot set to 1."""
        if self.basis == "standard":
            comp = from_chart(self.k, self.l, self.coords, beta=self.beta)
            return HVector(self.k, self.l, comp, "standard")
        comp = np.zeros((3, 4))
        comp[0, 0] = 1.0
        comp[1] = self.coords[0]
        comp[2] = self.coords[1]
        return HVector(1, 2, comp, "split")


def form_F(k, l, u, v):
    """F(u, v) as a quaternion (4,), broadcasting over leading axes."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    signs = form_signs(k, l)
    terms = qt.qmul(qt.qconj(u), v)
    return np.sum(signs[..., None] * terms, axis=-2)


def region(k, l, u):
    """Region of a point, relative to the null band |F| < 1e-9 * |u|^2."""
    u = np.asarray(u, dtype=float)
    val = form_F(k, l, u, u)[..., 0]
    scale = np.sum(u * u, axis=(-2, -1))
    if scale == 0:
        raise ValueError("region of the zero vector is undefined")
    if abs(val) < NULL_BAND * scale:
        return Region.NULL
    return Region.MINUS if val < 0 else Region.PLUS


def coordinate_reversal(u):
    """Reverse the slot order; an anti-isometry from (k, l) to (l, k)."""
    return np.asarray(u, dtype=float)[..., ::-1, :]


def to_chart(k, l, u, beta=0):
    """Affine chart on u_beta = 1: x_a = u_a * u_beta^{-1}, slot beta dropped.

    Requires beta < k (a negative slot) so that the chart covers a piece of
    the F < 0 region.  Works on batched arrays.
    """
    if not 0 <= beta < k:
        raise ValueError(f"chart slot {beta} is not a negative slot of ({k}, {l})")
    u = np.asarray(u, dtype=float)
    pivot = u[..., beta, :]
    if np.any(qt.qnorm2(pivot) < 1e-30):
        raise ValueError(f"point has u_{beta} = 0 and is outside the chart")
    inv = qt.qinv(pivot)
    x = qt.qmul(u, inv[..., None, :])
    idx = [a for a in range(k + l) if a != beta]
    return x[..., idx, :]


def from_chart(k, l, x, beta=0):
    """Homogeneous representative with u_beta = 1 from chart coordinates."""
    if not 0 <= beta < k:
        raise ValueError(f"chart slot {beta} is not a negative slot of ({k}, {l})")
    x = np.asarray(x, dtype=float)
    shape = x.shape[:-2] + (k + l, 4)
    u = np.zeros(shape)
    u[..., beta, 0] = 1.0
    idx = [a for a in range(k + l) if a != beta]
    u[..., idx, :] = x
    return u


# Orthogonal change to the split basis of signature (1, 2).
_S = 1.0 / np.sqrt(2.0)
SPLIT_BASIS_CHANGE = np.array([[_S, _S, 0.0], [-_S, _S, 0.0], [0.0, 0.0, 1.0]])


def _real_matvec(P, u):
    u = np.asarray(u, dtype=float)
    return np.einsum("ab,...bc->...ac", P, u)


def basis_change_to_split(u):
    """Standard-basis components to split-basis components, v = P u."""
    return _real_matvec(SPLIT_BASIS_CHANGE, u)


def basis_change_from_split(v):
    return _real_matvec(SPLIT_BASIS_CHANGE.T, v)


def split_chart_to_ball(y):
    """Map split-basis chart coordinates (y1, y2) to ball chart (x1, x2).

    The split chart lives on v0 = 1; membership in the F < 0 region reads
    y1 + conj(y1) + |y2|^2 < 0, which forces 1 - y1 to be invertible.  The
    image satisfies |x1|^2 + |x2|^2 < 1.  Shape (..., 2, 4) either side.
    """
    y = np.asarray(y, dtype=float)
    y1, y2 = y[..., 0, :], y[..., 1, :]
    inv = qt.qinv(qt.quat(1.0) - y1)
    x1 = qt.qmul(qt.quat(1.0) + y1, inv)
    x2 = np.sqrt(2.0) * qt.qmul(y2, inv)
    return np.stack([x1, x2], axis=-2)


def ball_chart_to_split(x):
    """Inverse of split_chart_to_ball; requires 1 + x1 invertible."""
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0, :], x[..., 1, :]
    inv = qt.qinv(qt.quat(1.0) + x1)
    y1 = qt.qmul(x1 - qt.quat(1.0), inv)
    y2 = np.sqrt(2.0) * qt.qmul(x2, inv)
    return np.stack([y1, y2], axis=-2)


def phi_matrix(k, l):
    """Sign matrix Phi of the form as a quaternionic (k+l, k+l, 4) array."""
    n = k + l
    M = np.zeros((n, n, 4))
    M[np.arange(n), np.arange(n), 0] = form_signs(k, l)
    return M


def split_phi_matrix():
    """Form matrix in the split basis of signature (1, 2)."""
    M = np.zeros((3, 3, 4))
    M[0, 1, 0] = 1.0
    M[1, 0, 0] = 1.0
    M[2, 2, 0] = 1.0
    return M


def sp_check(Y, k=1, l=2, basis="standard", tol=1e-12):
    """Defect of the stabilizer equation Phi Y + Y^dagger Phi = 0.

    Returns the max-abs defect; raises ValueError above tol.  basis selects
    which form matrix is used ("standard" or "split").
    """
    Y = np.asarray(Y, dtype=float)
    Phi = phi_matrix(k, l) if basis == "standard" else split_phi_matrix()
    defect = qt.qmatmul(Phi, Y) + qt.qmatmul(qt.qdagger(Y), Phi)
    worst = float(np.max(np.abs(defect)))
    scale = max(1.0, float(np.max(np.abs(Y))))
    if worst > tol * scale:
        raise ValueError(
            f"matrix is not in the stabilizer algebra (defect {worst:.3e})"
        )
    return worst


def form_preservation_defect(g, k=1, l=2, basis="standard"):
    """Max-abs defect of g^dagger Phi g = Phi for a group element g."""
    g = np.asarray(g, dtype=float)
    Phi = phi_matrix(k, l) if basis == "standard" else split_phi_matrix()
    defect = qt.qmatmul(qt.qdagger(g), qt.qmatmul(Phi, g)) - Phi
    return float(np.max(np.abs(defect)))


def ambient_gram(k, l, x, beta=0):
    """Gram matrix of the hyperboloid metric in an affine chart, batched.

    x has shape (..., n, 4) with n = k + l - 1 chart coordinates (slot beta
    removed); the result has shape (..., 4n, 4n) over the real coordinate
    basis, ordered slot-major then component (w, x, y, z).

    With S = F_red(x, x) and real tangent vectors t, s the metric is

        g(t, s) = Re F_red(t, s)/(1 - S)
                + Re[ F_red(t, x) * conj(F_red(s, x)) ] / (1 - S)^2,

    which is assembled as a diagonal part plus B B^T where row (a, c) of B
    holds the components of eps_a * conj(e_c) x_a.
    """
    if not 0 <= beta < k:
        raise ValueError(f"chart slot {beta} is not a negative slot of ({k}, {l})")
    x = np.asarray(x, dtype=float)
    n = k + l - 1
    if x.shape[-2:] != (n, 4):
        raise ValueError(f"chart point must have shape (..., {n}, 4)")
    signs = np.delete(form_signs(k, l), beta)

    S = np.sum(signs[:, None] * x * x, axis=(-2, -1))
    if np.any(S >= 1.0 - 1e-12):
        raise ValueError("chart point is outside the F < 0 region")
    denom = 1.0 - S

    batch = x.shape[:-2]
    eye4 = np.eye(4)
    E = np.zeros(batch + (4 * n, 4 * n))
    for a in range(n):
        E[..., 4 * a:4 * a + 4, 4 * a:4 * a + 4] = signs[a] * eye4

    # B[..., (a, c), :] = components of eps_a * qmul(conj(e_c), x_a).
    basis = np.zeros((4, 4))
    np.fill_diagonal(basis, 1.0)
    conj_basis = qt.qconj(basis)  # (4, 4)
    rows = qt.qmul(conj_basis[None, :, :], x[..., :, None, :])  # (..., n, 4, 4)
    rows = signs[:, None, None] * rows
    B = rows.reshape(batch + (4 * n, 4))

    G = E / denom[..., None, None]
    G = G + np.einsum("...ic,...jc->...ij", B, B) / (denom ** 2)[..., None, None]
    return G


def ambient_metric(k, l, x, t1, t2, beta=0):
    """Metric value g_x(t1, t2) for chart tangents of shape (..., n, 4)."""
    x = np.asarray(x, dtype=float)
    G = ambient_gram(k, l, x, beta=beta)
    v1 = np.asarray(t1, dtype=float).reshape(x.shape[:-2] + (-1,))
    v2 = np.asarray(t2, dtype=float).reshape(x.shape[:-2] + (-1,))
    return np.einsum("...i,...ij,...j->...", v1, G, v2)


def mat_exp(Y, t=1.0, k=1, l=2, basis="standard", check=True):
    """exp(t Y) for a stabilizer-algebra element, via the complex image.

    The 6x6 complexification is exponentiated with scipy and mapped back.
    check=True enforces membership of Y in the stabilizer algebra first.
    """
    Y = np.asarray(Y, dtype=float)
    if check:
        sp_check(Y, k=k, l=l, basis=basis)
    C = qt.complexify_matrix(Y)
    return qt.decomplexify_matrix(scipy.linalg.expm(t * C))
