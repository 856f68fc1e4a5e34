"""Moment maps of the circle actions and their zero sets.

Every one-parameter subgroup generated by T has moment map
mu_T(u) = u^dagger Phi T u, an imaginary quaternion.  In an affine chart the
same zero set is cut out by an inhomogeneous quadratic f (one per generator
family), which is what the numerical search below works with:

    Diagonal   (ball chart)   f = -i p0 + p1 x1* i x1 + p2 x2* i x2
    GenPedersen (split chart) f = y1* - y1 + p (y1* i + i y1) + q y2* i y2
    HeightOne  (split chart)  f = -i + p (i y1 + y1* i) + q y2* i y2
    HeightTwo  (split chart)  f = i y2 + y2* i + p (i y1 + y1* i) + p y2* i y2

(* marks quaternion conjugation.)  f itself is not invariant under the
action, but its zero set is, and zero sets coincide with those of mu through
the chart.

For integer weight triples acting diagonally on the ball the existence and
freeness of the quotient are decided analytically (zeroset_nonempty,
action_free); for the mirror signature (2, 1) the quotient is compact and
bergman_smooth reports the isotropy verdict with an explicit witness circle.
zeroset_sample searches for zero-set points by damped Gauss-Newton from
seeded random starts and is the numerical cross-check for all of these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import hnum
from . import orbits
from . import quaternion as qt

__all__ = [
    "MomentValue", "WeightTriple", "BergmanVerdict",
    "EmptyZeroSetError", "SearchFailedError",
    "mu_general", "f_inhomog", "family_generator",
    "zeroset_nonempty", "action_free", "bergman_smooth", "zeroset_sample",
    "family_nonempty", "FAMILIES",
]

FAMILIES = ("Diagonal", "GenPedersen", "HeightOne", "HeightTwo")


class EmptyZeroSetError(ValueError):
    """The zero set is empty by an analytic criterion."""


class SearchFailedError(RuntimeError):
    """No zero-set point found after the configured number of starts."""


@dataclass(frozen=True)
class MomentValue:
    """An imaginary quaternion; construction rejects a real part."""

    value: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.value, dtype=float)
        if v.shape != (4,):
            raise ValueError("moment values are single quaternions")
        scale = max(1.0, float(np.max(np.abs(v))))
        if abs(v[0]) > 1e-10 * scale:
            raise ValueError(f"moment value has a real part ({v[0]:.3e})")
        object.__setattr__(self, "value", v)

    @property
    def imag(self):
        return self.value[1:]

    def norm(self):
        return float(np.sqrt(np.sum(self.value * self.value)))


@dataclass(frozen=True)
class WeightTriple:
    """Integer weights with gcd 1.

    When all three weights are odd the effective circle parameter is halved;
    all_odd records that convention for consumers.
    """

    p0: int
    p1: int
    p2: int

    def __post_init__(self):
        for p in (self.p0, self.p1, self.p2):
            if not float(p).is_integer():
                raise ValueError("weights must be integers")
        g = math.gcd(math.gcd(abs(self.p0), abs(self.p1)), abs(self.p2))
        if g != 1:
            raise ValueError(f"weights must have gcd 1, got gcd {g}")

    @classmethod
    def reduced(cls, p0, p1, p2):
        g = math.gcd(math.gcd(abs(int(p0)), abs(int(p1))), abs(int(p2)))
        if g == 0:
            raise ValueError("weights cannot all vanish")
        return cls(int(p0) // g, int(p1) // g, int(p2) // g)

    def as_tuple(self):
        return (self.p0, self.p1, self.p2)

    @property
    def all_odd(self):
        return all(p % 2 != 0 for p in self.as_tuple())


def mu_general(T, u, basis="standard", k=1, l=2):
    """Moment value u^dagger Phi T u of a stabilizer generator at u.

    u may be an HVector (its basis tag must match) or a raw (k+l, 4) array
    interpreted in the given basis.
    """
    T = np.asarray(T, dtype=float)
    if isinstance(u, hnum.HVector):
        if u.basis != basis:
            raise ValueError(
                f"point carries basis {u.basis!r} but the generator is "
                f"given in {basis!r}"
            )
        comp = u.components
    else:
        comp = np.asarray(u, dtype=float)
    hnum.sp_check(T, k=k, l=l, basis=basis)
    Phi = hnum.phi_matrix(k, l) if basis == "standard" else hnum.split_phi_matrix()
    w = qt.qmatvec(Phi, qt.qmatvec(T, comp))
    val = np.sum(qt.qmul(qt.qconj(comp), w), axis=0)
    return MomentValue(val)


def family_generator(family, params, basis="split"):
    """Matrix of the generator whose moment map matches the family's f.

    These are fixed representatives, not the normalized forms of the orbit
    classification: the nilpotent parts of HeightOne and HeightTwo are
    scaled so that mu at (1, y1, y2) reproduces f_inhomog exactly.
    """
    if family == "Diagonal":
        form = orbits.GeneratorForm("T0Diag", None, tuple(params))
        return orbits.make_normal_form(form, basis=basis)
    if family == "GenPedersen":
        p, q = params
        form = orbits.GeneratorForm("T0Split", 1.0, (p, q))
        return orbits.make_normal_form(form, basis=basis)
    Y = np.zeros((3, 3, 4))
    if family == "HeightOne":
        p, q = params
        Y[0, 0, 1] = Y[1, 1, 1] = p
        Y[2, 2, 1] = q
        Y[1, 0, 1] = -1.0
    elif family == "HeightTwo":
        p, = params
        Y[0, 0, 1] = Y[1, 1, 1] = Y[2, 2, 1] = p
        Y[1, 2, 1] = Y[2, 0, 1] = 1.0
    else:
        raise ValueError(f"unknown family {family!r}")
    if basis == "split":
        return Y
    return orbits._to_standard(Y, "split")


I4 = np.eye(4)


def _imag3(q):
    return q[..., 1:]


def _f_diagonal(x, params):
    p0, p1, p2 = params
    t1 = qt.qmul(qt.qconj(x[..., 0, :]), qt.qmul(qt.I, x[..., 0, :]))
    t2 = qt.qmul(qt.qconj(x[..., 1, :]), qt.qmul(qt.I, x[..., 1, :]))
    out = p1 * t1 + p2 * t2
    out = out.copy()
    out[..., 1] -= p0
    return out


def _jac_diagonal(x, params):
    # column (a, c): p_a (e_c* i x_a + x_a* i e_c), imaginary components
    _, p1, p2 = params
    batch = x.shape[:-2]
    J = np.zeros(batch + (3, 8))
    for a, pa in enumerate((p1, p2)):
        xa = x[..., a, :]
        left = qt.qmul(qt.qconj(I4), qt.qmul(qt.I, xa[..., None, :]))
        right = qt.qmul(qt.qconj(xa)[..., None, :], qt.qmul(qt.I, I4))
        cols = pa * (left + right)
        J[..., :, 4 * a:4 * a + 4] = np.swapaxes(_imag3(cols), -1, -2)
    return J


def _comm_i(t):
    """t* i + i t  (equivalently i t + t* i), an imaginary quaternion."""
    return qt.qmul(qt.qconj(t), qt.I) + qt.qmul(qt.I, t)


def _f_gen_pedersen(y, params):
    p, q = params
    y1, y2 = y[..., 0, :], y[..., 1, :]
    out = qt.qconj(y1) - y1 + p * _comm_i(y1)
    out = out + q * qt.qmul(qt.qconj(y2), qt.qmul(qt.I, y2))
    return out


def _jac_gen_pedersen(y, params):
    p, q = params
    batch = y.shape[:-2]
    J = np.zeros(batch + (3, 8))
    cols1 = qt.qconj(I4) - I4 + p * _comm_i(I4)
    J[..., :, 0:4] = np.broadcast_to(
        _imag3(cols1).T, batch + (3, 4)
    )
    y2 = y[..., 1, :]
    left = qt.qmul(qt.qconj(I4), qt.qmul(qt.I, y2[..., None, :]))
    right = qt.qmul(qt.qconj(y2)[..., None, :], qt.qmul(qt.I, I4))
    J[..., :, 4:8] = np.swapaxes(_imag3(q * (left + right)), -1, -2)
    return J


def _f_height_one(y, params):
    p, q = params
    y1, y2 = y[..., 0, :], y[..., 1, :]
    out = p * _comm_i(y1) + q * qt.qmul(qt.qconj(y2), qt.qmul(qt.I, y2))
    out = out.copy()
    out[..., 1] -= 1.0
    return out


def _jac_height_one(y, params):
    p, q = params
    batch = y.shape[:-2]
    J = np.zeros(batch + (3, 8))
    J[..., :, 0:4] = np.broadcast_to(_imag3(p * _comm_i(I4)).T, batch + (3, 4))
    y2 = y[..., 1, :]
    left = qt.qmul(qt.qconj(I4), qt.qmul(qt.I, y2[..., None, :]))
    right = qt.qmul(qt.qconj(y2)[..., None, :], qt.qmul(qt.I, I4))
    J[..., :, 4:8] = np.swapaxes(_imag3(q * (left + right)), -1, -2)
    return J


def _f_height_two(y, params):
    p, = params
    y1, y2 = y[..., 0, :], y[..., 1, :]
    out = _comm_i(y2) + p * _comm_i(y1)
    out = out + p * qt.qmul(qt.qconj(y2), qt.qmul(qt.I, y2))
    return out


def _jac_height_two(y, params):
    p, = params
    batch = y.shape[:-2]
    J = np.zeros(batch + (3, 8))
    J[..., :, 0:4] = np.broadcast_to(_imag3(p * _comm_i(I4)).T, batch + (3, 4))
    y2 = y[..., 1, :]
    left = qt.qmul(qt.qconj(I4), qt.qmul(qt.I, y2[..., None, :]))
    right = qt.qmul(qt.qconj(y2)[..., None, :], qt.qmul(qt.I, I4))
    cols = _comm_i(I4) + p * (left + right)
    J[..., :, 4:8] = np.swapaxes(_imag3(cols), -1, -2)
    return J


_F_TABLE = {
    "Diagonal": (_f_diagonal, _jac_diagonal, "standard"),
    "GenPedersen": (_f_gen_pedersen, _jac_gen_pedersen, "split"),
    "HeightOne": (_f_height_one, _jac_height_one, "split"),
    "HeightTwo": (_f_height_two, _jac_height_two, "split"),
}


def f_inhomog(family, params, point):
    """Inhomogeneous moment quadratic of a family at a chart point.

    point may be a ChartPoint (basis tag checked) or a raw (2, 4) array of
    chart coordinates.
    """
    if family not in _F_TABLE:
        raise ValueError(f"unknown family {family!r}")
    f, _, basis = _F_TABLE[family]
    if isinstance(point, hnum.ChartPoint):
        if point.basis != basis:
            raise ValueError(
                f"family {family} works in the {basis} chart, point is "
                f"{point.basis}"
            )
        coords = point.coords
    else:
        coords = np.asarray(point, dtype=float)
    val = f(coords, tuple(float(p) for p in params))
    return MomentValue(val)


def zeroset_nonempty(w):
    """Whether the diagonal-action moment zero set meets the F < 0 region.

    True iff some ratio |p1/p0| or |p2/p0| exceeds 1; a vanishing p0 leaves
    the negative slot unweighted and is rejected as degenerate.
    """
    p0, p1, p2 = w.as_tuple() if isinstance(w, WeightTriple) else w
    if p0 == 0:
        raise ValueError("weight on the negative slot must not vanish")
    return max(abs(p1 / p0), abs(p2 / p0)) > 1


def action_free(w):
    """Freeness of the diagonal circle action on its zero set.

    Convention: all weights positive and p1 > p0 (relabel the positive slots
    so the larger ratio comes first).  Free iff p1 = p0 + 1 with
    0 < p2 <= p0 + 1, or all weights odd and p1 = p0 + 2 with
    0 < p2 <= p0 + 2.
    """
    p0, p1, p2 = w.as_tuple() if isinstance(w, WeightTriple) else w
    if min(p0, p1, p2) <= 0:
        raise ValueError("freeness test expects positive weights")
    if p1 <= p0:
        raise ValueError("freeness test expects p1 > p0")
    if p1 == p0 + 1 and 0 < p2 <= p0 + 1:
        return True
    all_odd = all(p % 2 != 0 for p in (p0, p1, p2))
    if all_odd and p1 == p0 + 2 and 0 < p2 <= p0 + 2:
        return True
    return False


@dataclass(frozen=True)
class BergmanVerdict:
    """Isotropy verdict for the compact mirror quotient.

    witness_circle is "w1" (the circle |w1|^2 = p0/p1 in the first chart)
    or "z2" (the circle at z2 != 0 with the other coordinates zero), with
    witness_order the cyclic isotropy order there; both None when smooth.
    """

    smooth: bool
    witness_circle: str | None = None
    witness_order: int | None = None


def bergman_smooth(w):
    """Smoothness of the mirror-signature quotient for positive weights.

    The circle through |w1|^2 = p0/p1 is fixed by a cyclic group of order
    (p0 + p1)/d where d = 2 when all weights are odd (the effective
    parameter is halved) and 1 otherwise; if that order is trivial the
    z2 circle still carries isotropy of order (p2 + p0)/2.  Smooth exactly
    at weights (1, 1, 1).
    """
    if not isinstance(w, WeightTriple):
        w = WeightTriple(*w)
    p0, p1, p2 = w.as_tuple()
    if min(p0, p1, p2) <= 0:
        raise ValueError("smoothness test expects positive weights")
    d = 2 if w.all_odd else 1
    order1 = (p0 + p1) // d
    if order1 > 1:
        return BergmanVerdict(False, "w1", order1)
    order2 = (p2 + p0) // 2
    if order2 > 1:
        return BergmanVerdict(False, "z2", order2)
    return BergmanVerdict(True)


def _height_one_empty(p, q):
    return p >= abs(q)


def family_nonempty(family, params):
    """Whether a family's moment zero set meets the negative region.

    Wraps the per-family analytic criteria: the diagonal ratio test,
    the height-one bound p < |q|, and the always-nonempty families.
    """
    if family == "Diagonal":
        return zeroset_nonempty(params)
    if family == "HeightOne":
        p, q = (float(v) for v in params)
        return not _height_one_empty(p, q)
    if family in ("GenPedersen", "HeightTwo"):
        return True
    raise ValueError(f"unknown family {family!r}")


def zeroset_sample(family, params, seed=0, n_starts=200, max_iter=50,
                   force_search=False, keep=8):
    """Zero-set points of a family's moment quadratic, by damped Gauss-Newton.

    Searches from n_starts seeded random chart points, iterating the
    minimum-norm Gauss-Newton step with step halving, and returns up to keep
    converged points (|f| < 1e-10) as HVectors in the family's basis.

    Families with an analytic emptiness criterion raise EmptyZeroSetError
    up front when it applies; force_search=True runs the numerical search
    anyway, so that an independent failure can corroborate the criterion.
    Raises SearchFailedError when nothing converges.
    """
    if family not in _F_TABLE:
        raise ValueError(f"unknown family {family!r}")
    params = tuple(float(p) for p in params)
    if not force_search:
        if family == "Diagonal" and not zeroset_nonempty(params):
            raise EmptyZeroSetError(
                f"diagonal weights {params} admit no zero-set point in the "
                "F < 0 region (no weight ratio exceeds 1)"
            )
        if family == "HeightOne" and _height_one_empty(*params):
            raise EmptyZeroSetError(
                f"height-one parameters {params} give an empty zero set "
                "(p >= |q|)"
            )

    f_eval, jac_eval, basis = _F_TABLE[family]
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n_starts, 2, 4)) * 0.4
    if basis == "split":
        # push starts into the chart region y1 + y1* + |y2|^2 < 0
        x[:, 0, 0] = -0.8 - np.abs(x[:, 0, 0])

    def clamp(pts):
        if basis == "standard":
            n2 = np.sum(pts * pts, axis=(-2, -1))
            bad = n2 > 0.98
            if np.any(bad):
                pts[bad] *= np.sqrt(0.97 / n2[bad])[:, None, None]
        else:
            margin = 2 * pts[:, 0, 0] + np.sum(pts[:, 1] ** 2, axis=-1)
            bad = margin > -1e-3
            if np.any(bad):
                pts[bad, 0, 0] -= 0.5 * (margin[bad] + 1e-3)
        return pts

    x = clamp(x)
    for _ in range(max_iter):
        fv = f_eval(x, params)[:, 1:]
        J = jac_eval(x, params)
        JJt = J @ np.swapaxes(J, -1, -2) + 1e-14 * np.eye(3)
        lam = np.linalg.solve(JJt, fv[..., None])
        step = -(np.swapaxes(J, -1, -2) @ lam)[..., 0].reshape(x.shape)
        base = np.sum(fv * fv, axis=-1)
        eta = np.ones(n_starts)
        cand = clamp(x + eta[:, None, None] * step)
        for _ in range(6):
            fc = f_eval(cand, params)[:, 1:]
            worse = np.sum(fc * fc, axis=-1) > base
            if not np.any(worse):
                break
            eta[worse] *= 0.5
            cand = clamp(x + eta[:, None, None] * step)
        x = cand

    fv = f_eval(x, params)[:, 1:]
    resid = np.sqrt(np.sum(fv * fv, axis=-1))
    good = resid < 1e-10
    if not np.any(good):
        raise SearchFailedError(
            f"no zero-set point found for {family}{params} after "
            f"{n_starts} starts (best residual {np.min(resid):.3e})"
        )
    out = []
    for pt in x[good][:keep]:
        if basis == "standard":
            comp = hnum.from_chart(1, 2, pt)
        else:
            comp = np.zeros((3, 4))
            comp[0, 0] = 1.0
            comp[1] = pt[0]
            comp[2] = pt[1]
        vec = hnum.HVector(1, 2, comp, basis)
        if vec.region() != hnum.Region.MINUS:
            continue
        out.append(vec)
    if not out:
        raise SearchFailedError(
            f"converged points for {family}{params} all fell outside the "
            "F < 0 region"
        )
    return out
