"""Global slices of the quotient 4-manifolds and Killing fields.

Each quotient carries a 4-parameter slice: a map from xi in R^4 into the
moment zero set that meets every circle orbit once, fixed by a gauge
normalization (Re y1 = -1/2 for the generalized Pedersen family,
Re(i y1) = 0 at height one, Re(i y2) = 0 at height two, a real positive
coordinate for the diagonal families).  A QuotientChart packages the
embedding, the domain predicate on xi, and the circle generator; the
curvature pipeline consumes exactly that.

Slice coordinates by family:

    PL_equalWeights  xi = (Re c, Im c, Re alpha, Im alpha), fiber coordinate
                     alpha over the c-chart of the sphere of first slots
    PL_unequal       xi = (Re z2, Im z2, Re alpha, Im alpha)
    GenPedersen      xi = the quaternion y2, |y2| < 1
    HeightOne        xi = (Re z2, Im z2, Re w2, Im w2) with y2 = w2 + j z2;
                     for p = 0, xi = (a1, c1, d1, s) with y2 = e^{is}/sqrt(q)
    HeightTwo        xi = (s2, Re w2, Im w2, r) with y2 = s2 + j w2 and the
                     free component r = i-part of y1; for p = 0,
                     xi = y1 with Re y1 < 0 and y2 = 0
    Bergman          xi = (Re z2, Im z2, Re w2, Im w2), all of R^4
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import hnum
from . import moments
from . import quaternion as qt

__all__ = [
    "SLICE_FAMILIES", "QuotientChart", "KillingSample", "DomainError",
    "slice_gen_pedersen", "slice_height_one", "slice_height_two",
    "slice_pl", "slice_bergman", "quotient_chart",
    "killing_field", "killing_sample", "transversality",
]

SLICE_FAMILIES = (
    "PL_equalWeights", "PL_unequal", "GenPedersen",
    "HeightOne", "HeightTwo", "Bergman",
)


class DomainError(ValueError):
    """A slice parameter lies outside the chart domain."""


@dataclass(frozen=True)
class QuotientChart:
    """A global slice of one quotient: embedding, domain, and generator.

    embed maps xi in R^4 to a validated ChartPoint; coords_fn is the same
    map on raw batched arrays (..., 4) -> (..., 2, 4) without validation,
    which is what finite differencing wants.  generator is the circle
    generator in the chart's basis, so the Killing field of the reduction
    is killing_field(generator, point).
    """

    family: str
    params: tuple
    embed: Callable = field(repr=False)
    domain: Callable = field(repr=False)
    coords_fn: Callable = field(repr=False)
    generator: np.ndarray = field(repr=False)
    basis: str = "standard"
    k: int = 1
    l: int = 2

    def moment_residual(self, xi):
        """|f| at embed(xi), all three imaginary components."""
        point = self.embed(xi)
        u = point.homogeneous()
        m = moments.mu_general(self.generator, u.components,
                               basis=self.basis, k=self.k, l=self.l)
        return m.norm() / max(1.0, float(np.sum(u.components ** 2)))


@dataclass(frozen=True)
class KillingSample:
    """A chart point together with the generator's velocity there."""

    point: hnum.ChartPoint
    V: np.ndarray


def _quat(w=0.0, x=0.0, y=0.0, z=0.0):
    return np.array([w, x, y, z], dtype=float)


def _split_point(y1, y2):
    coords = np.stack([np.asarray(y1, dtype=float),
                       np.asarray(y2, dtype=float)], axis=-2)
    return coords


# -- generalized Pedersen family ------------------------------------------

def _gen_pedersen_coords(p, q, y2):
    """Solve for y1 with Re y1 = -1/2 on the zero set, batched over y2."""
    y2 = np.asarray(y2, dtype=float)
    R = q * qt.qmul(qt.qconj(y2), qt.qmul(qt.I, y2))
    a = (R[..., 1] - p) / 2.0
    # [[-2, -2p], [2p, -2]] (b, c) = (-R_j, -R_k), determinant 4(1 + p^2)
    det = 4.0 * (1.0 + p * p)
    b = (2.0 * R[..., 2] - 2.0 * p * R[..., 3]) / det
    c = (2.0 * p * R[..., 2] + 2.0 * R[..., 3]) / det
    y1 = np.stack([np.full_like(a, -0.5), a, b, c], axis=-1)
    return _split_point(y1, y2)


def slice_gen_pedersen(p, q, y2):
    """Slice point of the generalized Pedersen quotient over y2, |y2| < 1.

    The gauge Re y1 = -1/2 fixes the orbit parameter; the three imaginary
    components of y1 solve a linear system that is never singular.
    """
    y2 = np.asarray(y2, dtype=float)
    n2 = float(np.sum(y2 * y2))
    if n2 >= 1.0:
        raise DomainError(f"|y2|^2 = {n2:.6g} must be < 1")
    coords = _gen_pedersen_coords(float(p), float(q), y2)
    return hnum.ChartPoint(0, coords, "split")


# -- height one ------------------------------------------------------------

def _height_one_domain_value(p, q, z2, w2):
    return (p + q) * abs(z2) ** 2 + (p - q) * abs(w2) ** 2


def _height_one_coords(p, q, xi):
    xi = np.asarray(xi, dtype=float)
    if p == 0.0:
        a1, c1, d1, s = np.moveaxis(xi, -1, 0)
        y1 = np.stack([a1, np.zeros_like(a1), c1, d1], axis=-1)
        r = 1.0 / np.sqrt(q)
        y2 = np.stack([r * np.cos(s), r * np.sin(s),
                       np.zeros_like(s), np.zeros_like(s)], axis=-1)
        return _split_point(y1, y2)
    rz, iz, rw, iw = np.moveaxis(xi, -1, 0)
    # y2 = w2 + j z2 has components (Re w2, Im w2, Re z2, -Im z2)
    y2 = np.stack([rw, iw, rz, -iz], axis=-1)
    h = qt.qmul(qt.qconj(y2), qt.qmul(qt.I, y2))
    a1 = (1.0 - q * h[..., 1]) / (2.0 * p)
    c1 = -q * h[..., 3] / (2.0 * p)
    d1 = q * h[..., 2] / (2.0 * p)
    y1 = np.stack([a1, np.zeros_like(a1), c1, d1], axis=-1)
    return _split_point(y1, y2)


def slice_height_one(p, q, z2, w2, extra=0.0):
    """Slice point of a height-one quotient, gauge Re(i y1) = 0.

    For p != 0 the slice coordinates are (z2, w2) with y2 = w2 + j z2 and
    y1 determined; the domain is (p+q)|z2|^2 + (p-q)|w2|^2 on the side of
    -1 selected by the sign of p.  For p = 0 (needs q > 0) y2 runs over the
    circle of radius 1/sqrt(q) with phase arg(w2), y1 = extra + j z2 with
    the real part extra below -1/(2q).
    """
    p, q = float(p), float(q)
    z2, w2 = complex(z2), complex(w2)
    if p == 0.0:
        if q <= 0.0:
            raise DomainError("p = 0 needs q > 0 for a nonempty zero set")
        if w2 == 0:
            raise DomainError("p = 0 takes the circle phase from arg(w2)")
        if float(extra) >= -1.0 / (2.0 * q):
            raise DomainError(
                f"real part {float(extra):.6g} must lie below -1/(2q) = "
                f"{-1.0 / (2.0 * q):.6g}"
            )
        xi = np.array([float(extra), z2.real, z2.imag,
                       float(np.angle(w2))])
        coords = _height_one_coords(p, q, xi)
        return hnum.ChartPoint(0, coords, "split")
    val = _height_one_domain_value(p, q, z2, w2)
    if p > 0 and not val < -1.0:
        raise DomainError(
            f"(p+q)|z2|^2 + (p-q)|w2|^2 = {val:.6g} must be < -1 for p > 0"
        )
    if p < 0 and not val > -1.0:
        raise DomainError(
            f"(p+q)|z2|^2 + (p-q)|w2|^2 = {val:.6g} must be > -1 for p < 0"
        )
    xi = np.array([z2.real, z2.imag, w2.real, w2.imag])
    coords = _height_one_coords(p, q, xi)
    return hnum.ChartPoint(0, coords, "split")


# -- height two ------------------------------------------------------------

def _height_two_coords(p, xi):
    xi = np.asarray(xi, dtype=float)
    if p == 0.0:
        y1 = xi
        y2 = np.zeros_like(xi)
        return _split_point(y1, y2)
    s2, u, v, r = np.moveaxis(xi, -1, 0)
    # y2 = s2 + j w2, w2 = u + iv, components (s2, 0, u, -v)
    y2 = np.stack([s2, np.zeros_like(s2), u, -v], axis=-1)
    w2n2 = u * u + v * v
    a1 = (-2.0 * s2 / p - s2 * s2 + w2n2) / 2.0
    c1 = -u * (1.0 + p * s2) / p
    d1 = v * (1.0 + p * s2) / p
    y1 = np.stack([a1, r, c1, d1], axis=-1)
    return _split_point(y1, y2)


def slice_height_two(p, s2, w2, r):
    """Slice point of a height-two quotient, gauge Re(i y2) = 0.

    y2 = s2 + j w2 with s2/p > |w2|^2 (the open paraboloid), y1 determined
    up to its free i-component r.  For p = 0 the chart is y2 = 0 with y1
    free over Re y1 < 0: then (s2, w2, r) are the four components of y1.
    """
    p = float(p)
    w2 = complex(w2)
    if p == 0.0:
        if float(s2) >= 0.0:
            raise DomainError(f"Re y1 = {float(s2):.6g} must be < 0")
        xi = np.array([float(s2), float(r), w2.real, w2.imag])
        coords = _height_two_coords(p, xi)
        return hnum.ChartPoint(0, coords, "split")
    if not float(s2) / p > abs(w2) ** 2:
        raise DomainError(
            f"s2/p = {float(s2) / p:.6g} must exceed |w2|^2 = "
            f"{abs(w2) ** 2:.6g}"
        )
    xi = np.array([float(s2), w2.real, w2.imag, float(r)])
    coords = _height_two_coords(p, xi)
    return hnum.ChartPoint(0, coords, "split")


# -- diagonal weights: unit-ball slices ------------------------------------

def _pl_unequal_coords(p0, p1, p2, xi, phase=None):
    xi = np.asarray(xi, dtype=float)
    rz, iz, ra, ia = np.moveaxis(xi, -1, 0)
    z2n2 = rz * rz + iz * iz
    an2 = ra * ra + ia * ia
    s = p1 * p2 * an2
    z1n2 = (p0 / (1.0 - s) - p2 * z2n2) / p1
    z1abs = np.sqrt(np.maximum(z1n2, 0.0))
    if phase is None:
        z1 = np.stack([z1abs, np.zeros_like(z1abs)], axis=-1)
    else:
        z1 = z1abs[..., None] * np.stack(
            [np.full_like(z1abs, phase.real),
             np.full_like(z1abs, phase.imag)], axis=-1)
    # (w1, w2) = alpha (-p2 conj(z2), p1 conj(z1)), complex products
    w1 = np.stack([-p2 * (ra * rz + ia * iz), -p2 * (ia * rz - ra * iz)],
                  axis=-1)
    w2r = p1 * (ra * z1[..., 0] + ia * z1[..., 1])
    w2i = p1 * (ia * z1[..., 0] - ra * z1[..., 1])
    w2 = np.stack([w2r, w2i], axis=-1)
    # x_a = z_a + w_a j: components (Re z, Im z, Re w, Im w)
    x1 = np.stack([z1[..., 0], z1[..., 1], w1[..., 0], w1[..., 1]], axis=-1)
    x2 = np.stack([rz, iz, w2[..., 0], w2[..., 1]], axis=-1)
    return np.stack([x1, x2], axis=-2), z1n2


def _pl_domain_value(p0, p1, p2, z2n2, an2):
    """The unit-ball condition reduced to the (z2, alpha) coordinates.

    Negative exactly when the reconstructed point lies in the open ball:
    (p1-p2)(1-s)^2 |z2|^2 + p0 (1 + p1^2 |a|^2) - p1 + p1^2 p2 |a|^2
    with s = p1 p2 |a|^2 (and s < 1 required).
    """
    s = p1 * p2 * an2
    return ((p1 - p2) * (1.0 - s) ** 2 * z2n2
            + p0 * (1.0 + p1 * p1 * an2) - p1 + p1 * p1 * p2 * an2)


def slice_pl(p, z2, alpha, phase=1.0 + 0.0j):
    """Level-set point of a diagonal-weight quotient over (z2, alpha).

    The complex moment equation is solved by (w1, w2) =
    alpha(-p2 conj(z2), p1 conj(z1)) and the real one gives |z1|^2; phase
    fixes the remaining circle coordinate z1/|z1| (the slice gauge is
    phase = 1).  Requires a free action and the ball-membership domain.
    """
    if not isinstance(p, moments.WeightTriple):
        p = moments.WeightTriple(*p)
    if not moments.action_free(p):
        raise DomainError(f"weights {p.as_tuple()} do not act freely")
    p0, p1, p2 = (float(v) for v in p.as_tuple())
    z2, alpha, phase = complex(z2), complex(alpha), complex(phase)
    if abs(abs(phase) - 1.0) > 1e-12:
        raise ValueError("phase must lie on the unit circle")
    an2 = abs(alpha) ** 2
    if p1 * p2 * an2 >= 1.0:
        raise DomainError(
            f"|alpha|^2 = {an2:.6g} must be below 1/(p1 p2) = "
            f"{1.0 / (p1 * p2):.6g}"
        )
    dom = _pl_domain_value(p0, p1, p2, abs(z2) ** 2, an2)
    if not dom < 0.0:
        raise DomainError(
            f"ball condition violated: domain value {dom:.6g} must be < 0"
        )
    xi = np.array([z2.real, z2.imag, alpha.real, alpha.imag])
    coords, z1n2 = _pl_unequal_coords(p0, p1, p2, xi, phase)
    if not z1n2 > 0.0:
        raise RuntimeError(
            "contradiction: |z1|^2 <= 0 inside the stated domain"
        )
    return hnum.ChartPoint(0, coords)


def _pl_equal_coords(p0, p1, xi):
    """Equal positive weights (p0, p, p): fiber coordinate over the sphere.

    v = (1, c)/|(1, c)| on the sphere of first complex slots, w = the
    alpha-multiple of the orthogonal frame vector, z = scaled v.
    """
    xi = np.asarray(xi, dtype=float)
    rc, ic, ra, ia = np.moveaxis(xi, -1, 0)
    nv = np.sqrt(1.0 + rc * rc + ic * ic)
    v1 = np.stack([1.0 / nv, np.zeros_like(nv)], axis=-1)
    v2 = np.stack([rc / nv, ic / nv], axis=-1)
    an2 = ra * ra + ia * ia
    scale = np.sqrt(p0 / p1 + an2 / (2.0 * p1))
    # v-perp = (-conj(v2), conj(v1)); w = alpha v-perp / sqrt(2 p1)
    rt = 1.0 / np.sqrt(2.0 * p1)
    w1 = rt * np.stack([-(ra * v2[..., 0] + ia * v2[..., 1]),
                        -(ia * v2[..., 0] - ra * v2[..., 1])], axis=-1)
    w2 = rt * np.stack([ra * v1[..., 0] + ia * v1[..., 1],
                        ia * v1[..., 0] - ra * v1[..., 1]], axis=-1)
    x1 = np.stack([scale * v1[..., 0], scale * v1[..., 1],
                   w1[..., 0], w1[..., 1]], axis=-1)
    x2 = np.stack([scale * v2[..., 0], scale * v2[..., 1],
                   w2[..., 0], w2[..., 1]], axis=-1)
    return np.stack([x1, x2], axis=-2)


# -- mirror signature: the Bergman chart ------------------------------------

def _bergman_coords(xi):
    xi = np.asarray(xi, dtype=float)
    rz, iz, rw, iw = np.moveaxis(xi, -1, 0)
    z2n2 = rz * rz + iz * iz
    w2n2 = rw * rw + iw * iw
    c = np.sqrt(1.0 + w2n2)
    a = np.sqrt((1.0 + z2n2 + w2n2) / (1.0 + w2n2))
    # b = z2 conj(w2) / c
    br = (rz * rw + iz * iw) / c
    bi = (iz * rw - rz * iw) / c
    # u1 = b + j c: components (Re b, Im b, c, 0); u2 = z2 + j conj(w2)
    u1 = np.stack([br, bi, c, np.zeros_like(c)], axis=-1)
    u2 = np.stack([rz, iz, rw, iw], axis=-1)
    return np.stack([u1, u2], axis=-2) / a[..., None, None]


def slice_bergman(xi):
    """Gauge section of the mirror quotient at weights (1, 1, 1).

    The first homogeneous coordinate is gauged real positive; the two
    remaining complex slice coordinates (z2, w2) range over all of C^2 and
    the moment of the scalar circle vanishes identically on the section.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (4,):
        raise ValueError("xi must have four components")
    return hnum.ChartPoint(0, _bergman_coords(xi), "standard", 2, 1)


# -- chart factory -----------------------------------------------------------

def _bergman_generator():
    Y = np.zeros((3, 3, 4))
    Y[0, 0, 1] = Y[1, 1, 1] = Y[2, 2, 1] = 1.0
    return Y


def quotient_chart(family, params=()):
    """The QuotientChart of a family at given parameters."""
    if family == "GenPedersen":
        p, q = (float(v) for v in params)

        def dom(xi):
            return float(np.sum(np.square(xi))) < 1.0

        return QuotientChart(
            family, (p, q),
            embed=lambda xi: slice_gen_pedersen(p, q, xi),
            domain=dom,
            coords_fn=lambda xi: _gen_pedersen_coords(p, q, xi),
            generator=moments.family_generator("GenPedersen", (p, q)),
            basis="split",
        )
    if family == "HeightOne":
        p, q = (float(v) for v in params)
        gen = moments.family_generator("HeightOne", (p, q))
        if p == 0.0:
            if q <= 0.0:
                raise DomainError("p = 0 needs q > 0")

            def dom0(xi):
                return float(xi[0]) < -1.0 / (2.0 * q)

            return QuotientChart(
                family, (p, q),
                embed=lambda xi: hnum.ChartPoint(
                    0, _height_one_coords(p, q, xi), "split"),
                domain=dom0,
                coords_fn=lambda xi: _height_one_coords(p, q, xi),
                generator=gen, basis="split",
            )
        if p >= abs(q):
            raise DomainError(
                f"height-one domain is empty for p >= |q| ({p} >= {abs(q)})"
            )

        def dom(xi):
            val = ((p + q) * (xi[0] ** 2 + xi[1] ** 2)
                   + (p - q) * (xi[2] ** 2 + xi[3] ** 2))
            return val < -1.0 if p > 0 else val > -1.0

        return QuotientChart(
            family, (p, q),
            embed=lambda xi: hnum.ChartPoint(
                0, _height_one_coords(p, q, xi), "split"),
            domain=dom,
            coords_fn=lambda xi: _height_one_coords(p, q, xi),
            generator=gen, basis="split",
        )
    if family == "HeightTwo":
        p, = (float(v) for v in params)
        gen = moments.family_generator("HeightTwo", (p,))
        if p == 0.0:
            def dom0(xi):
                return float(xi[0]) < 0.0
        else:
            def dom0(xi):
                return float(xi[0]) / p > xi[1] ** 2 + xi[2] ** 2
        return QuotientChart(
            family, (p,),
            embed=lambda xi: hnum.ChartPoint(
                0, _height_two_coords(p, xi), "split"),
            domain=dom0,
            coords_fn=lambda xi: _height_two_coords(p, xi),
            generator=gen, basis="split",
        )
    if family in ("PL_unequal", "PL_equalWeights"):
        w = params if isinstance(params, moments.WeightTriple) \
            else moments.WeightTriple(*params)
        if not moments.action_free(w):
            raise DomainError(f"weights {w.as_tuple()} do not act freely")
        p0, p1, p2 = (float(v) for v in w.as_tuple())
        gen = moments.family_generator(
            "Diagonal", w.as_tuple(), basis="standard")
        if family == "PL_equalWeights":
            if p1 != p2:
                raise DomainError("equal-weights chart needs p1 = p2")
            amax2 = p1 - p0

            def dome(xi):
                return xi[2] ** 2 + xi[3] ** 2 < amax2

            return QuotientChart(
                family, w.as_tuple(),
                embed=lambda xi: hnum.ChartPoint(
                    0, _pl_equal_coords(p0, p1, xi)),
                domain=dome,
                coords_fn=lambda xi: _pl_equal_coords(p0, p1, xi),
                generator=gen,
            )
        if p2 >= p1:
            raise DomainError("unequal-weights chart needs p2 < p1")

        def domu(xi):
            an2 = xi[2] ** 2 + xi[3] ** 2
            if p1 * p2 * an2 >= 1.0:
                return False
            return _pl_domain_value(
                p0, p1, p2, xi[0] ** 2 + xi[1] ** 2, an2) < 0.0

        return QuotientChart(
            family, w.as_tuple(),
            embed=lambda xi: slice_pl(
                w, complex(xi[0], xi[1]), complex(xi[2], xi[3])),
            domain=domu,
            coords_fn=lambda xi: _pl_unequal_coords(p0, p1, p2, xi)[0],
            generator=gen,
        )
    if family == "Bergman":
        if tuple(params) not in ((), (1, 1, 1)):
            raise DomainError("the mirror chart is built at weights (1,1,1)")
        return QuotientChart(
            family, (1, 1, 1),
            embed=slice_bergman,
            domain=lambda xi: True,
            coords_fn=_bergman_coords,
            generator=_bergman_generator(),
            k=2, l=1,
        )
    raise ValueError(f"unknown family {family!r}")


# -- Killing fields ----------------------------------------------------------

def killing_field(delta, point):
    """Velocity of the one-parameter action in chart coordinates.

    Differentiates x_a(t) = (e^{t delta} u)_a (e^{t delta} u)_beta^{-1} at
    t = 0, giving V_a = (delta u)_a - x_a (delta u)_beta with quaternion
    products.  delta = 0 gives 0.
    """
    if not isinstance(point, hnum.ChartPoint):
        raise TypeError("killing_field expects a ChartPoint")
    u = point.homogeneous().components
    du = qt.qmatvec(np.asarray(delta, dtype=float), u)
    rows = [a for a in range(u.shape[0]) if a != point.beta]
    V = np.empty_like(point.coords)
    for i, a in enumerate(rows):
        V[i] = du[a] - qt.qmul(point.coords[i], du[point.beta])
    return V


def killing_sample(delta, point):
    return KillingSample(point, killing_field(delta, point))


def _slice_tangents(chart, xi, h=1e-6):
    xi = np.asarray(xi, dtype=float)
    T = np.empty((4, 2, 4))
    for c in range(4):
        e = np.zeros(4)
        e[c] = h
        T[c] = (chart.coords_fn(xi + e) - chart.coords_fn(xi - e)) / (2 * h)
    return T


def transversality(chart, xi):
    """Smallest singular value of the slice tangents stacked with V.

    Positive (well above zero) means the four slice directions and the
    orbit direction together span a 5-dimensional subspace of the chart
    tangent space.
    """
    point = chart.embed(xi)
    V = killing_field(chart.generator, point)
    T = _slice_tangents(chart, xi)
    M = np.vstack([T.reshape(4, 8), V.reshape(1, 8)])
    return float(np.linalg.svd(M, compute_uv=False)[-1])
