"""Hyperbolic half-plane eigenfunctions attached to the circle reductions.

Each reduced metric corresponds to an eigenfunction F of the hyperbolic
Laplacian with eigenvalue 3/4,

    rho^2 (F_rhorho + F_etaeta) = (3/4) F,

built from a small catalog of pole terms: signed monopoles, a dipole, a
tripole, and a conjugate pair of poles at eta = -i and eta = +i.  The
bridge back to the quotient data goes through moment coordinates: the
(3, 4) array of torus momenta at a zero-set sample factors through a
rank-two Gram matrix, and the eigenfunction pulled back through that
Gram matrix reproduces the defining quadratic up to one overall
constant.  `pullback_check` measures how constant.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import hnum
from . import quaternion as qt

__all__ = [
    "MOMENT_FAMILIES",
    "BranchProximityWarning",
    "SampleInconsistencyError",
    "HalfPlanePoint",
    "PoleSet",
    "GramPair",
    "grammian",
    "halfplane_from_gram",
    "eval_F",
    "laplace_check",
    "torus_moment_coords",
    "quadratic_in_moments",
    "family_kernel_vectors",
    "eigenfunction_of_quotient",
    "lift_eval",
    "pullback_check",
    "PullbackResult",
    "field_table",
]

MOMENT_FAMILIES = ("Diagonal", "HeightOne", "HeightTwo")

_BRANCH_PROXIMITY = 1e-2


class BranchProximityWarning(UserWarning):
    """Evaluation point close to the branch locus of the pole pair."""


class SampleInconsistencyError(RuntimeError):
    """Moment coordinates of a sample do not factor through rank two."""


@dataclass(frozen=True)
class HalfPlanePoint:
    """Point (rho, eta) of the upper half plane, rho > 0."""

    rho: float
    eta: float

    def __post_init__(self):
        rho = float(self.rho)
        if not rho > 0.0:
            raise ValueError(f"half-plane point needs rho > 0, got {rho}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "eta", float(self.eta))


@dataclass(frozen=True)
class PoleSet:
    """Pole data of one eigenfunction.

    real_poles is a tuple of (a, b, charge) triples, each contributing
    charge * sqrt(a^2 rho^2 + (a eta - b)^2) / sqrt(rho).  complex_pair
    is (a, b, c) for the conjugate pair of poles at eta = -i, +i.
    dipole and tripole are plain coefficients.  At least one term must
    be present.
    """

    real_poles: tuple = ()
    complex_pair: tuple = None
    dipole: float = 0.0
    tripole: float = 0.0

    def __post_init__(self):
        poles = []
        for entry in self.real_poles:
            a, b, charge = entry
            if int(charge) not in (-1, 1):
                raise ValueError(f"monopole charge must be +1 or -1, got {charge}")
            poles.append((float(a), float(b), int(charge)))
        object.__setattr__(self, "real_poles", tuple(poles))
        if self.complex_pair is not None:
            a, b, c = self.complex_pair
            object.__setattr__(self, "complex_pair",
                               (float(a), float(b), float(c)))
        object.__setattr__(self, "dipole", float(self.dipole))
        object.__setattr__(self, "tripole", float(self.tripole))
        if (not self.real_poles and self.complex_pair is None
                and self.dipole == 0.0 and self.tripole == 0.0):
            raise ValueError("pole set has no terms")

    def to_dict(self):
        return {
            "realPoles": [list(p) for p in self.real_poles],
            "complexPair": (None if self.complex_pair is None
                            else list(self.complex_pair)),
            "dipoleCoeff": self.dipole,
            "tripoleCoeff": self.tripole,
        }


def _imag_part(x, name):
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise ValueError(f"{name} must be a quaternion component array of shape (4,)")
    if abs(x[0]) > 1e-10 * max(1.0, float(np.max(np.abs(x)))):
        raise ValueError(f"{name} must be imaginary, got real part {x[0]}")
    return x


@dataclass(frozen=True)
class GramPair:
    """Two imaginary quaternions spanning a plane, |x1 wedge x2| > 0."""

    x1: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        x1 = _imag_part(self.x1, "x1")
        x2 = _imag_part(self.x2, "x2")
        if self.wedge_norm(x1, x2) <= 1e-12:
            raise ValueError("pair is degenerate: |x1 wedge x2| ~ 0")
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)

    @staticmethod
    def wedge_norm(x1, x2):
        n1 = float(np.dot(x1, x1))
        n2 = float(np.dot(x2, x2))
        d = float(np.dot(x1, x2))
        return np.sqrt(max(n1 * n2 - d * d, 0.0))


def grammian(pair):
    """Unit-determinant Gram matrix of the pair.

    Divides the raw inner products by the wedge norm, so the result has
    determinant one and encodes only the conformal class of the pair.
    """
    w = GramPair.wedge_norm(pair.x1, pair.x2)
    n1 = float(np.dot(pair.x1, pair.x1))
    n2 = float(np.dot(pair.x2, pair.x2))
    d = float(np.dot(pair.x1, pair.x2))
    return np.array([[n1, d], [d, n2]]) / w


def halfplane_from_gram(A):
    """Half-plane point of a symmetric unit-determinant 2x2 matrix."""
    A = np.asarray(A, dtype=float)
    if A.shape != (2, 2):
        raise ValueError("Gram matrix must be 2x2")
    if abs(A[0, 1] - A[1, 0]) > 1e-10 * max(1.0, float(np.max(np.abs(A)))):
        raise ValueError("Gram matrix must be symmetric")
    det = float(np.linalg.det(A))
    if abs(det - 1.0) > 1e-8:
        raise ValueError(f"Gram matrix must have determinant 1, got {det}")
    if A[0, 0] <= 0.0:
        raise ValueError("Gram matrix must be positive definite")
    return HalfPlanePoint(rho=1.0 / A[0, 0], eta=A[0, 1] / A[0, 0])


def _branch_distance(rho, eta):
    # Branch locus of sqrt(rho^2 + (eta + i)^2): the segment eta = 0,
    # 0 < rho <= 1.
    if rho <= 1.0:
        return abs(eta)
    return float(np.hypot(rho - 1.0, eta))


def eval_F(poles, point):
    """Value of the eigenfunction at a half-plane point."""
    rho, eta = point.rho, point.eta
    sq = np.sqrt(rho)
    total = 0.0
    for a, b, charge in poles.real_poles:
        total += charge * np.sqrt(a * a * rho * rho + (a * eta - b) ** 2) / sq
    if poles.dipole != 0.0:
        total += poles.dipole * eta / (sq * np.sqrt(rho * rho + eta * eta))
    if poles.tripole != 0.0:
        total += 0.5 * poles.tripole * rho ** 1.5 / (rho * rho + eta * eta) ** 1.5
    if poles.complex_pair is not None:
        a, b, c = poles.complex_pair
        dist = _branch_distance(rho, eta)
        if dist < _BRANCH_PROXIMITY:
            warnings.warn(
                f"evaluation point ({rho}, {eta}) is {dist:.3e} from the "
                "branch locus of the pole pair",
                BranchProximityWarning, stacklevel=2)
        t1 = 0.5 * (b + 1j * c) * np.sqrt(rho * rho + (eta + 1j) ** 2 + 0j)
        t2 = 0.5 * (b - 1j * c) * np.sqrt(rho * rho + (eta - 1j) ** 2 + 0j)
        pair = t1 + t2
        scale = max(1.0, abs(pair))
        assert abs(pair.imag) < 1e-12 * scale, "conjugate pole pair lost symmetry"
        total += (a + pair.real) / sq
    return float(total)


def laplace_check(poles, point, step=3e-3):
    """Eigen-equation residual |rho^2 (F_rr + F_ee) - (3/4) F|.

    Fourth-order central second differences in each variable.  The step
    is measured relative to rho, which keeps both truncation and
    roundoff uniform across the half plane; the stencil leaves the
    half plane only when step >= 1/2, which raises a domain error.
    """
    rho, eta = point.rho, point.eta
    h = step * rho
    if rho - 2.0 * h <= 0.0:
        raise ValueError(
            f"stencil of width 2*{h} leaves the half plane at rho={rho}")
    w = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
    offs = (-2, -1, 0, 1, 2)
    frr = sum(wi * eval_F(poles, HalfPlanePoint(rho + m * h, eta))
              for wi, m in zip(w, offs)) / h ** 2
    fee = sum(wi * eval_F(poles, HalfPlanePoint(rho, eta + m * h))
              for wi, m in zip(w, offs)) / h ** 2
    F = eval_F(poles, point)
    return float(abs(rho * rho * (frr + fee) - 0.75 * F))


def _split_components(u):
    u = np.asarray(u, dtype=float)
    if u.shape != (3, 4):
        raise ValueError("expected homogeneous coordinates of shape (3, 4)")
    return u[0], u[1], u[2]


def _qdot(a, b):
    return float(np.dot(np.asarray(a)[1:], np.asarray(b)[1:]))


def torus_moment_coords(family, u):
    """Momenta (y0, y1, y2) of the family's ambient torus at a sample.

    Diagonal wants standard-basis samples and returns the unsigned slot
    momenta conj(u_j) i u_j; the form sign of the negative slot is
    applied downstream.  The height families want split-basis samples.
    Accepts an HVector (basis checked) or a raw (3, 4) array assumed to
    be in the right basis.
    """
    if family not in MOMENT_FAMILIES:
        raise ValueError(f"unknown moment family {family!r}")
    want = "standard" if family == "Diagonal" else "split"
    if isinstance(u, hnum.HVector):
        if u.basis != want:
            raise ValueError(
                f"{family} moment coordinates want {want}-basis samples, "
                f"got {u.basis}")
        u = u.components
    v0, v1, v2 = _split_components(u)
    i_quat = np.array([0.0, 1.0, 0.0, 0.0])

    def sandwich(a, b):
        return qt.qmul(qt.qconj(a), qt.qmul(i_quat, b))

    if family == "Diagonal":
        y = np.stack([sandwich(v0, v0), sandwich(v1, v1), sandwich(v2, v2)])
    elif family == "HeightOne":
        y0 = sandwich(v1, v0) + sandwich(v0, v1)
        y = np.stack([y0, -sandwich(v0, v0), sandwich(v2, v2)])
    else:
        y0 = sandwich(v1, v0) + sandwich(v0, v1) + sandwich(v2, v2)
        y1 = sandwich(v2, v0) + sandwich(v0, v2)
        y = np.stack([y0, y1, -sandwich(v0, v0)])
    y[:, 0] = 0.0
    return y


def quadratic_in_moments(family, y):
    """The defining quadratic expressed through the torus momenta.

    Equals the ambient form evaluated on the sample, so it is negative
    exactly on the relevant region.  The height-one expression needs
    |y1| > 0 and the height-two expression |y2| > 0.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (3, 4):
        raise ValueError("moment coordinates must have shape (3, 4)")
    n = [float(np.linalg.norm(row[1:])) for row in y]
    if family == "Diagonal":
        return -n[0] + n[1] + n[2]
    if family == "HeightOne":
        if n[1] < 1e-14:
            raise ValueError("height-one quadratic needs |y1| > 0")
        return -_qdot(y[0], y[1]) / n[1] + n[2]
    if family == "HeightTwo":
        if n[2] < 1e-14:
            raise ValueError("height-two quadratic needs |y2| > 0")
        cross = n[1] ** 2 * n[2] ** 2 - _qdot(y[1], y[2]) ** 2
        return (cross - 2.0 * _qdot(y[0], y[2]) * n[2] ** 2) / (2.0 * n[2] ** 3)
    raise ValueError(f"unknown moment family {family!r}")


def family_kernel_vectors(family, params):
    """Two covectors a, b annihilating the family generator's momenta.

    The generator's momentum is a fixed combination sum_j g_j y_j of the
    torus momenta (with the Diagonal slot sign folded in), and the zero
    set is parameterized by y_j = -b_j x1 + a_j x2 with a, b in the
    kernel of g.  Returns the pair used throughout the pole catalog.
    """
    if family == "Diagonal":
        p0, p1, p2 = (float(v) for v in params)
        if p0 == 0.0:
            raise ValueError("diagonal weights need p0 != 0")
        a = np.array([p1, -p0, 0.0])
        b = np.array([p2, 0.0, -p0])
    elif family == "HeightOne":
        p, q = (float(v) for v in params)
        if q != 0.0:
            a = np.array([0.0, q, -1.0])
            b = np.array([q, 0.0, -p])
        elif p != 0.0:
            a = np.array([1.0, -p, 0.0])
            b = np.array([0.0, 0.0, 1.0])
        else:
            raise ValueError("height-one kernel needs p or q nonzero")
    elif family == "HeightTwo":
        a0, a1 = _height_two_coeffs(params)
        if a0 == 0.0 and a1 == 0.0:
            raise ValueError("height-two kernel needs a nonzero coefficient")
        a = np.array([0.0, 0.0, 1.0])
        b = np.array([-a0, -a1, 0.0])
    else:
        raise ValueError(f"unknown moment family {family!r}")
    return a, b


def _height_two_coeffs(params):
    params = tuple(float(v) for v in params)
    if len(params) == 1:
        return -1.0, params[0]
    if len(params) == 2:
        return params
    raise ValueError("height-two parameters are (p,) or (a0, a1)")


def eigenfunction_of_quotient(family, params):
    """Pole data of the eigenfunction attached to one circle reduction.

    Diagonal weights give three signed monopoles built from the kernel
    covectors; height one gives a dipole plus a monopole (or a signed
    monopole pair when q = 0); height two gives dipole and tripole
    coefficients (-a0, a1^2), pure tripole at a0 = 0 and pure dipole at
    a1 = 0.
    """
    if family == "Diagonal":
        a, b = family_kernel_vectors(family, params)
        charges = (-1, 1, 1)
        return PoleSet(real_poles=tuple(
            (a[j], b[j], charges[j]) for j in range(3)))
    if family == "HeightOne":
        p, q = (float(v) for v in params)
        if q != 0.0:
            return PoleSet(dipole=abs(q), real_poles=((1.0, p, 1),))
        if p == 0.0:
            raise ValueError("height-one eigenfunction needs p or q nonzero")
        sign = 1 if p > 0 else -1
        return PoleSet(real_poles=((1.0, 0.0, sign), (0.0, 1.0, 1)))
    if family == "HeightTwo":
        a0, a1 = _height_two_coeffs(params)
        if a0 == 0.0 and a1 == 0.0:
            raise ValueError("height-two eigenfunction needs a nonzero coefficient")
        return PoleSet(dipole=-a0, tripole=a1 * a1)
    raise ValueError(f"no closed pole data for family {family!r}")


def lift_eval(poles, A):
    """Homogeneous lift of the eigenfunction to raw Gram matrices.

    Scales like the square root of the matrix: lift(c A) equals
    sqrt(c) * lift(A).
    """
    A = np.asarray(A, dtype=float)
    det = float(np.linalg.det(A))
    if det <= 1e-20:
        raise ValueError("Gram matrix must be positive definite")
    return det ** 0.25 * eval_F(poles, halfplane_from_gram(A / np.sqrt(det)))


@dataclass(frozen=True)
class PullbackResult:
    """Outcome of comparing the pulled-back eigenfunction to the form."""

    constant: float
    max_rel_dev: float
    n_used: int
    poles: PoleSet = field(repr=False)
    ratios: tuple = field(repr=False, default=())


def _form_value(u):
    if isinstance(u, hnum.HVector):
        return float(u.form()[0])
    comps = np.asarray(u, dtype=float)
    return float(hnum.form_F(1, 2, comps, comps)[0])


def _signed_moments(family, u):
    y = torus_moment_coords(family, u)
    if family == "Diagonal":
        y = y.copy()
        y[0] = -y[0]
    return y


def pullback_check(family, params, samples):
    """Constancy of eigenfunction pullback against the ambient form.

    For each zero-set sample the momenta are factored through a rank-two
    Gram matrix by least squares (residual above 1e-8 of the momentum
    scale raises SampleInconsistencyError), the eigenfunction is lifted
    by the quarter power of the Gram determinant, and the ratio to the
    form value is recorded.  Samples with |form| < 1e-6 are skipped.
    Returns the mean ratio and the largest relative deviation from it.
    """
    a, b = family_kernel_vectors(family, params)
    poles = eigenfunction_of_quotient(family, params)
    ratios = []
    for u in samples:
        y = _signed_moments(family, u)
        rows = np.zeros((9, 6))
        rhs = np.zeros(9)
        for j in range(3):
            for c in range(3):
                r = 3 * j + c
                rows[r, c] = -b[j]
                rows[r, 3 + c] = a[j]
                rhs[r] = y[j, 1 + c]
        sol, _, _, _ = np.linalg.lstsq(rows, rhs, rcond=None)
        resid = float(np.linalg.norm(rows @ sol - rhs))
        scale = max(1.0, float(np.linalg.norm(rhs)))
        if resid > 1e-8 * scale:
            raise SampleInconsistencyError(
                f"momenta do not factor through the kernel pair "
                f"(residual {resid:.3e})")
        x1, x2 = sol[:3], sol[3:]
        A = np.array([[np.dot(x1, x1), np.dot(x1, x2)],
                      [np.dot(x1, x2), np.dot(x2, x2)]])
        if float(np.linalg.det(A)) <= 1e-20:
            raise SampleInconsistencyError("Gram matrix is degenerate")
        lifted = lift_eval(poles, A)
        form = _form_value(u)
        if abs(form) < 1e-6:
            continue
        ratios.append(lifted / form)
    if not ratios:
        raise ValueError("no usable samples (all had |form| < 1e-6)")
    ratios = np.asarray(ratios)
    const = float(np.mean(ratios))
    dev = float(np.max(np.abs(ratios - const)) / max(abs(const), 1e-30))
    return PullbackResult(constant=const, max_rel_dev=dev,
                          n_used=len(ratios), poles=poles,
                          ratios=tuple(float(r) for r in ratios))


def field_table(poles, points, step=3e-3):
    """Rows of (rho, eta, F, laplace_residual) for reporting."""
    rows = []
    for pt in points:
        if not isinstance(pt, HalfPlanePoint):
            pt = HalfPlanePoint(*pt)
        rows.append({
            "rho": pt.rho,
            "eta": pt.eta,
            "F": eval_F(poles, pt),
            "laplace_residual": laplace_check(poles, pt, step=step),
        })
    return rows
