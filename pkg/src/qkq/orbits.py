"""One-parameter subgroups of the stabilizer group of the (1, 2) form.

Every generator Y (a quaternionic 3x3 matrix with Phi Y + Y^dagger Phi = 0)
is conjugate to exactly one normal form out of four families, distinguished
by the nilpotent height of its additive Jordan decomposition Y = S + N:

    T0Diag(p0, p1, p2)   diag(i p0, i p1, i p2)                    height 0
    T0Split(lam, p, q)   [[i p, lam, 0], [lam, i p, 0], [0, 0, i q]]  height 0
    T1(lam, p, q)        diag(ip, ip, iq) + lam*i*[[1,1,0],[-1,-1,0],[0,0,0]]
                                                                    height 1
    T2(lam, p)           ip*I + lam*[[0,0,-i],[0,0,i],[i,i,0]]      height 2

Parameter normalizations realized by conjugations in the group: T0Diag
weights are nonnegative with the first one sitting on the negative slot of
the form and the other two sorted ascending; T0Split has lam > 0 and p, q >=
0; T1 has lam in {+1, -1} (lam = 1 when p = 0) and p, q >= 0; T2 has lam = 1
and p >= 0.  For T1 with p > 0 the sign of lam separates two distinct
conjugacy classes that share every spectral invariant computed here, so
classify only resolves it when the input is literally a normal form matrix
and reports it as unresolved otherwise.

The same data in the split basis (see hnum.SPLIT_BASIS_CHANGE) is lower
triangular, which is where the closed form exponentials are easiest to read
off; exp_normal_form provides them in both bases.

Each family determines a pair of characteristic/minimal polynomials of an
associated traceless complex 4x4 matrix, whose root patterns sort the
quotient constructions into cohomogeneity classes (bryant_case).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hnum
from . import quaternion as qt

__all__ = [
    "GeneratorForm", "BryantCase", "make_normal_form", "exp_normal_form",
    "exp_mixing_pair", "decompose", "classify", "bryant_case",
]

FAMILIES = ("T0Diag", "T0Split", "T1", "T2")

_P = hnum.SPLIT_BASIS_CHANGE


@dataclass(frozen=True)
class GeneratorForm:
    """Normal form tag: family name, lam, and the remaining parameters.

    params holds (p0, p1, p2) for T0Diag, (p, q) for T0Split and T1, (p,)
    for T2.  lam is None for T0Diag always, and None for a T1 whose sign
    could not be resolved.
    """

    family: str
    lam: float | None
    params: tuple

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        want = {"T0Diag": 3, "T0Split": 2, "T1": 2, "T2": 1}[self.family]
        if len(self.params) != want:
            raise ValueError(
                f"{self.family} takes {want} parameters, got {len(self.params)}"
            )
        if self.family == "T0Diag":
            if self.lam is not None:
                raise ValueError("T0Diag has no lam parameter")
        elif self.family == "T0Split":
            if self.lam is None or self.lam <= 0:
                raise ValueError("T0Split requires lam > 0")
            object.__setattr__(self, "lam", float(self.lam))
        elif self.family == "T1":
            if self.lam is not None:
                if self.lam not in (1.0, -1.0, 1, -1):
                    raise ValueError("T1 requires lam in {+1, -1} or None")
                object.__setattr__(self, "lam", float(self.lam))
        else:  # T2
            if self.lam != 1:
                raise ValueError("T2 is normalized to lam = 1")
            object.__setattr__(self, "lam", 1.0)

    def resolved(self):
        return self.family != "T1" or self.lam is not None


def _diag_imag(values):
    M = np.zeros((3, 3, 4))
    for a, p in enumerate(values):
        M[a, a, 1] = p
    return M


def make_normal_form(form, basis="standard", lam=None):
    """Matrix of a normal form in the requested basis.

    lam overrides form.lam, which is how an unresolved T1 gets a concrete
    representative; without an override an unresolved T1 is an error.
    """
    lam = form.lam if lam is None else float(lam)
    fam = form.family
    if fam == "T0Diag":
        M = _diag_imag(form.params)
    elif fam == "T0Split":
        p, q = form.params
        M = _diag_imag((p, p, q))
        M[0, 1, 0] = lam
        M[1, 0, 0] = lam
    elif fam == "T1":
        if lam is None:
            raise ValueError("cannot build a T1 matrix with unresolved lam")
        p, q = form.params
        M = _diag_imag((p, p, q))
        M[0, 0, 1] += lam
        M[0, 1, 1] = lam
        M[1, 0, 1] = -lam
        M[1, 1, 1] -= lam
    else:  # T2
        p, = form.params
        M = _diag_imag((p, p, p))
        M[0, 2, 1] = -lam
        M[1, 2, 1] = lam
        M[2, 0, 1] = lam
        M[2, 1, 1] = lam
    if basis == "standard":
        return M
    if basis == "split":
        return _conj_real(_P, M, _P.T)
    raise ValueError(f"unknown basis {basis!r}")


def _conj_real(A, M, B):
    """A M B for real matrices A, B acting slotwise on a quaternionic M."""
    return np.einsum("ab,bcq,cd->adq", A, M, B)


def _unit_complex(theta):
    """Quaternion cos(theta) + i sin(theta)."""
    return np.array([np.cos(theta), np.sin(theta), 0.0, 0.0])


def exp_normal_form(form, t, basis="standard", lam=None):
    """Closed form exp(t Y) for a normal form matrix Y.

    Matches the generic exponential (hnum.mat_exp) to machine precision;
    tests pin the agreement at 1e-9.
    """
    lam = form.lam if lam is None else float(lam)
    t = float(t)
    fam = form.family
    out = np.zeros((3, 3, 4))
    if fam == "T0Diag":
        p0, p1, p2 = form.params
        for a, p in enumerate((p0, p1, p2)):
            out[a, a] = _unit_complex(p * t)
    elif fam == "T0Split":
        p, q = form.params
        e = _unit_complex(p * t)
        ch, sh = np.cosh(lam * t), np.sinh(lam * t)
        out[0, 0] = ch * e
        out[1, 1] = ch * e
        out[0, 1] = sh * e
        out[1, 0] = sh * e
        out[2, 2] = _unit_complex(q * t)
    elif fam == "T1":
        if lam is None:
            raise ValueError("cannot exponentiate a T1 with unresolved lam")
        p, q = form.params
        e = _unit_complex(p * t)
        s = np.array([0.0, lam * t, 0.0, 0.0])  # i lam t
        out[0, 0] = qt.qmul(e, qt.quat(1.0) + s)
        out[0, 1] = qt.qmul(e, s)
        out[1, 0] = -qt.qmul(e, s)
        out[1, 1] = qt.qmul(e, qt.quat(1.0) - s)
        out[2, 2] = _unit_complex(q * t)
    else:  # T2: nilpotent part K with K^3 = 0
        p, = form.params
        e = _unit_complex(p * t)
        c = lam * t
        h = 0.5 * c * c
        # I + c K + h K^2 with K = [[0,0,-i],[0,0,i],[i,i,0]],
        # K^2 = [[1,1,0],[-1,-1,0],[0,0,0]].
        out[0, 0] = qt.qmul(e, qt.quat(1.0 + h))
        out[0, 1] = qt.qmul(e, qt.quat(h))
        out[0, 2] = qt.qmul(e, np.array([0.0, -c, 0.0, 0.0]))
        out[1, 0] = qt.qmul(e, qt.quat(-h))
        out[1, 1] = qt.qmul(e, qt.quat(1.0 - h))
        out[1, 2] = qt.qmul(e, np.array([0.0, c, 0.0, 0.0]))
        out[2, 0] = qt.qmul(e, np.array([0.0, c, 0.0, 0.0]))
        out[2, 1] = qt.qmul(e, np.array([0.0, c, 0.0, 0.0]))
        out[2, 2] = e
    if basis == "standard":
        return out
    if basis == "split":
        return _conj_real(_P, out, _P.T)
    raise ValueError(f"unknown basis {basis!r}")


def exp_mixing_pair(p0, p1, p2, lam, t, branch="auto"):
    """exp(t Y) for Y = [[i p0, lam, 0], [lam, i p1, 0], [0, 0, i p2]].

    The upper block mixes a rotation with a boost; with a = (p0 - p1)/2 and
    b = (p0 + p1)/2 the closed form depends on the sign of lam^2 - a^2
    (boost-like, rotation-like, or the degenerate shear in between).  branch
    "degenerate" forces the shear formula, which is the t-linear limit the
    other two branches approach as lam^2 - a^2 -> 0.
    """
    a = 0.5 * (p0 - p1)
    b = 0.5 * (p0 + p1)
    disc = lam * lam - a * a
    e = _unit_complex(b * t)
    # mix = [[i a, lam], [lam, -i a]] as a quaternionic 2x2
    mix = np.zeros((2, 2, 4))
    mix[0, 0, 1] = a
    mix[1, 1, 1] = -a
    mix[0, 1, 0] = lam
    mix[1, 0, 0] = lam
    if branch == "degenerate" or (branch == "auto" and disc == 0.0):
        c0, c1 = 1.0, t
    elif branch == "auto" and disc > 0:
        g = np.sqrt(disc)
        c0, c1 = np.cosh(g * t), np.sinh(g * t) / g
    elif branch == "auto":
        g = np.sqrt(-disc)
        c0, c1 = np.cos(g * t), np.sin(g * t) / g
    else:
        raise ValueError(f"unknown branch {branch!r}")
    out = np.zeros((3, 3, 4))
    block = c0 * np.eye(2)[..., None] * qt.quat(1.0) + c1 * mix
    out[:2, :2] = qt.qmul(e, block)
    out[2, 2] = _unit_complex(p2 * t)
    return out


CLUSTER_TOL = 1e-7
# Eigenvalues sitting in a Jordan block of size m are only computable to
# about eps^(1/m); size 3 blocks scatter near 5e-6, so once a matrix looks
# defective the merge radius has to widen well past that.
DEFECTIVE_CLUSTER_TOL = 5e-5


def _cluster(values, tol):
    """Greedy clustering of complex values; returns (centers, counts).

    If two distinct cluster centers still end up closer than the merge
    radius the Jordan structure is numerically ambiguous and we refuse to
    guess.
    """
    order = np.lexsort((values.imag, values.real))
    vals = values[order]
    centers, counts = [], []
    for v in vals:
        hit = None
        for i, c in enumerate(centers):
            if abs(v - c) <= tol:
                hit = i
                break
        if hit is None:
            centers.append(v)
            counts.append(1)
        else:
            n = counts[hit]
            centers[hit] = (centers[hit] * n + v) / (n + 1)
            counts[hit] = n + 1
    centers = np.array(centers)
    for i in range(len(centers)):
        for j in range(i + 1, len(centers)):
            gap = abs(centers[i] - centers[j])
            if gap < tol:
                raise ValueError(
                    "eigenvalue clusters are too close to separate "
                    f"(gap {gap:.3e}, threshold {tol:.3e})"
                )
    return centers, np.array(counts)


def decompose(Y, basis="standard"):
    """Additive Jordan decomposition Y = S + N inside the stabilizer algebra.

    Returns (S, N, height) with S semisimple, N nilpotent, [S, N] = 0 and
    height the largest h with N^h != 0 (so 0, 1 or 2).  S is obtained as a
    polynomial in Y, evaluated on the complex image: the unique interpolating
    polynomial congruent to each eigenvalue modulo the corresponding power of
    (z - eigenvalue).
    """
    Y = np.asarray(Y, dtype=float)
    hnum.sp_check(Y, basis={"standard": "standard", "split": "split"}[basis])
    A = qt.complexify_matrix(Y)
    eigs, vecs = np.linalg.eig(A)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    # A well-conditioned eigenvector basis certifies the matrix as
    # numerically diagonalizable; a badly conditioned one signals Jordan
    # blocks, whose eigenvalue clouds need a wider merge radius.  Cloud
    # diameters grow with the conditioning of whatever conjugation produced
    # Y, so on validation failure the radius escalates once more.
    kappa = np.linalg.cond(vecs)
    if kappa < 1e6:
        radii = [CLUSTER_TOL, DEFECTIVE_CLUSTER_TOL]
    else:
        radii = [DEFECTIVE_CLUSTER_TOL, 1e-3]
    err = None
    for radius in radii:
        try:
            S, N, height = _decompose_at_radius(Y, A, eigs, scale, radius)
            return S, N, height
        except ValueError as exc:
            err = exc
    raise err


def _decompose_at_radius(Y, A, eigs, scale, radius):
    centers, counts = _cluster(eigs, radius * scale)

    if np.all(counts == 1):
        S = Y.copy()
    else:
        # Hermite interpolation: p(c_i) = c_i, derivatives up to the cluster
        # multiplicity vanish.  Degree is five at most, so a confluent
        # Vandermonde solve in the monomial basis is accurate enough here.
        n = int(np.sum(counts))
        rows, rhs = [], []
        for c, m in zip(centers, counts):
            for r in range(m):
                row = np.zeros(n, dtype=complex)
                for kk in range(r, n):
                    coef = 1.0
                    for jj in range(r):
                        coef *= kk - jj
                    row[kk] = coef * c ** (kk - r)
                rows.append(row)
                rhs.append(c if r == 0 else 0.0)
        coeffs = np.linalg.solve(np.array(rows), np.array(rhs))
        Sc = np.zeros_like(A)
        for kk in range(n - 1, -1, -1):
            Sc = Sc @ A + coeffs[kk] * np.eye(A.shape[0])
        S = qt.decomplexify_matrix(Sc, tol=1e-7)
        # The candidate must be semisimple with the cluster centers as its
        # spectrum; a miscounted cluster sends the interpolant far off.
        s_eigs = np.linalg.eigvals(Sc)
        for se in s_eigs:
            if np.min(np.abs(centers - se)) > 10 * radius * scale:
                raise ValueError(
                    "semisimple candidate strays from the eigenvalue clusters"
                )

    N = Y - S
    htol = 1e-8 * max(1.0, float(np.max(np.abs(Y))))
    power = N
    height = 0
    while np.max(np.abs(power)) > htol:
        height += 1
        if height > 2:
            raise ValueError("nilpotent part has order above three")
        power = qt.qmatmul(power, N)
    if height == 0:
        N = np.zeros_like(N)
        S = Y.copy()
    return S, N, height


def _to_standard(Y, basis):
    if basis == "standard":
        return np.asarray(Y, dtype=float)
    if basis == "split":
        return _conj_real(_P.T, np.asarray(Y, dtype=float), _P)
    raise ValueError(f"unknown basis {basis!r}")


def _quat_vector_from_complex(col):
    """Map an interleaved C^6 eigenvector back to a quaternionic 3-vector."""
    Z = col[0::2]
    W = col[1::2]
    return qt.from_jsplit(Z, W)


def _complex_columns(v):
    """Complex images of v and v*j as C^6 columns, for rank bookkeeping."""
    Z, W = qt.to_jsplit(v)
    c1 = np.empty(6, dtype=complex)
    c1[0::2], c1[1::2] = Z, W
    c2 = np.empty(6, dtype=complex)
    c2[0::2], c2[1::2] = -np.conj(W), np.conj(Z)
    return c1, c2


def _eigenspace_signature(cols):
    """Quaternionic eigenvectors for one eigenvalue cluster and the signature
    of the form restricted to their span.  Returns (quat_dim, neg_dim)."""
    basis_cols = []
    quat_vecs = []
    for c in cols.T:
        v = _quat_vector_from_complex(c)
        c1, c2 = _complex_columns(v)
        trial = basis_cols + [c1, c2]
        if np.linalg.matrix_rank(np.array(trial).T, tol=1e-8) == len(trial):
            basis_cols.extend([c1, c2])
            quat_vecs.append(v)
    m = len(quat_vecs)
    H = np.zeros((m, m, 4))
    for i in range(m):
        for j in range(m):
            H[i, j] = hnum.form_F(1, 2, quat_vecs[i], quat_vecs[j])
    Hc = qt.complexify_matrix(H)
    Hc = 0.5 * (Hc + Hc.conj().T)
    ev = np.linalg.eigvalsh(Hc)
    tol = 1e-8 * max(1.0, float(np.max(np.abs(ev))))
    neg = int(np.sum(ev < -tol))
    pos = int(np.sum(ev > tol))
    if neg + pos != 2 * m or neg % 2 != 0:
        raise ValueError("degenerate form restriction on an eigenspace")
    return m, neg // 2


def _classify_diag_weights(Y):
    """Weights (p0; p1 <= p2) of a semisimple purely-imaginary generator.

    p0 is the weight whose eigenspace carries the negative direction of the
    form; equal weights can straddle both kinds of slot, which is why the
    bookkeeping runs over eigenspaces rather than matrix entries.
    """
    A = qt.complexify_matrix(Y)
    eigs, vecs = np.linalg.eig(A)
    scale = max(1.0, float(np.max(np.abs(eigs))))
    centers, _ = _cluster(eigs, CLUSTER_TOL * scale)
    weights = []
    for c in centers:
        w = abs(c.imag)
        if not any(abs(w - seen) <= CLUSTER_TOL * scale for seen in weights):
            weights.append(w)
    neg_weight = None
    positives = []
    for w in sorted(weights):
        target = 1j * w if w > CLUSTER_TOL * scale else 0.0
        sel = np.abs(eigs - target) < CLUSTER_TOL * scale
        m, neg = _eigenspace_signature(vecs[:, sel])
        if neg > 1:
            raise ValueError("form restriction has too many negative directions")
        if neg == 1:
            neg_weight = w
        positives.extend([w] * (m - neg))
    if neg_weight is None:
        raise ValueError("no eigenspace carries the negative slot")
    p1, p2 = sorted(positives)
    return float(neg_weight), float(p1), float(p2)


def _match_literal_t1(Y, p, q):
    """Resolve the sign of lam for a T1 input given literally as a normal
    form matrix in either basis; returns +1.0, -1.0 or None."""
    scale = max(1.0, float(np.max(np.abs(Y))))
    for basis in ("standard", "split"):
        for lam in (1.0, -1.0):
            for ps in (p, -p):
                for qs in (q, -q):
                    cand = make_normal_form(
                        GeneratorForm("T1", lam, (ps, qs)), basis=basis
                    )
                    ref = _to_standard(cand, basis)
                    if np.max(np.abs(_to_standard(Y, "standard") - ref)) < 1e-10 * scale:
                        # (lam, -p) and (-lam, p) tag the same class
                        return lam if ps >= 0 else -lam
    return None


def classify(Y, basis="standard"):
    """Normal form tag of a stabilizer-algebra element (conjugacy invariant).

    Dispatches on the nilpotent height, then reads the parameters off the
    complex spectrum plus, for the diagonal family, the signs of the form on
    eigenspaces.  See GeneratorForm for the normalizations.
    """
    Ystd = _to_standard(Y, basis)
    if np.max(np.abs(Ystd)) == 0.0:
        raise ValueError("cannot classify the zero matrix")
    S, N, height = decompose(Ystd)
    # Parameters are read off the semisimple part: its complex image is
    # diagonalizable, so the eigenvalues cluster tightly even when Y itself
    # carries Jordan blocks.
    Sc = qt.complexify_matrix(S)
    eigs = np.linalg.eigvals(Sc)
    scale = max(1.0, float(np.max(np.abs(eigs))), float(np.max(np.abs(Ystd))))
    centers, _ = _cluster(eigs, CLUSTER_TOL * scale)
    retol = CLUSTER_TOL * scale

    if height == 0:
        if np.all(np.abs(centers.real) < retol):
            return GeneratorForm("T0Diag", None, _classify_diag_weights(S))
        quartet = centers[np.abs(centers.real) >= retol]
        rest = centers[np.abs(centers.real) < retol]
        lam = float(np.mean(np.abs(quartet.real)))
        p = float(np.mean(np.abs(quartet.imag)))
        if rest.size == 0:
            raise ValueError("spectrum does not match any height-0 form")
        q = float(np.mean(np.abs(rest.imag)))
        return GeneratorForm("T0Split", lam, (p, q))

    if height == 1:
        # The blocked eigenvalue is the one the nilpotent part acts on.  N
        # commutes with S, so in an eigenbasis of S it is block diagonal
        # over the distinct eigenvalues; the nonzero block marks p.
        Nc = qt.complexify_matrix(N)
        w, V = np.linalg.eig(Sc)
        Nt = np.linalg.solve(V, Nc @ V)
        best, blocked = -1.0, None
        for c in centers:
            idx = np.abs(w - c) < retol
            size = float(np.max(np.abs(Nt[np.ix_(idx, idx)]), initial=0.0))
            if size > best:
                best, blocked = size, c
        p = abs(float(blocked.imag))
        q = None
        for c in centers:
            if abs(abs(c.imag) - p) >= retol:
                q = abs(float(c.imag))
        if q is None:
            q = p  # all eigenvalues share one magnitude: T1(lam, p, +-p)
        lam = _match_literal_t1(Ystd, p, q) if p > retol else 1.0
        return GeneratorForm("T1", lam, (p, q))

    # height 2
    p = float(np.mean(np.abs(centers.imag)))
    return GeneratorForm("T2", 1.0, (p,))


@dataclass(frozen=True)
class BryantCase:
    """Cohomogeneity class with the two root multisets that encode it.

    pc_roots always has four entries summing to zero; pm_roots is a
    sub-multiset.  case_id is one of Case1..Case4 (cohomogeneity two),
    CohomOne, Homogeneous, or Exceptional (quotient conformally flat or
    otherwise outside the generic families).
    """

    case_id: str
    pc_roots: tuple
    pm_roots: tuple

    def degree_drop(self):
        return len(self.pc_roots) - len(self.pm_roots)


def _sorted_roots(roots):
    return tuple(sorted((complex(r) for r in roots), key=lambda z: (z.real, z.imag)))


def bryant_case(form, tol=1e-12):
    """Cohomogeneity case of the quotient attached to a normal form.

    The four pc roots are exact rational combinations of the parameters;
    their coincidence pattern (together with vanishing weights) picks the
    case.  Works for an unresolved T1 since the pattern ignores the sign of
    lam.
    """
    fam = form.family
    if fam == "T0Diag":
        p0, p1, p2 = form.params
        roots = [
            0.5 * (p0 - p1 - p2),
            0.5 * (p0 + p1 + p2),
            0.5 * (-p0 - p1 + p2),
            0.5 * (-p0 + p1 - p2),
        ]
        distinct, counts = _root_pattern(roots, tol)
        if any(abs(p) <= tol for p in (p0, p1, p2)):
            case = "Exceptional"
        elif len(distinct) == 4:
            case = "Case4"
        elif sorted(counts) == [1, 1, 2]:
            case = "CohomOne"
        elif sorted(counts) == [1, 3]:
            case = "Homogeneous"
        else:
            case = "Exceptional"
        return BryantCase(case, _sorted_roots(roots), _sorted_roots(distinct))

    if fam == "T0Split":
        p, q = form.params
        lam = form.lam
        roots = [p + 0.5 * q, -p + 0.5 * q,
                 complex(-0.5 * q, lam), complex(-0.5 * q, -lam)]
        distinct, _ = _root_pattern(roots, tol)
        if abs(q) <= tol:
            case = "Exceptional"
        elif abs(p) <= tol:
            case = "CohomOne"
        else:
            case = "Case1"
        return BryantCase(case, _sorted_roots(roots), _sorted_roots(distinct))

    if fam == "T1":
        p, q = form.params
        double = -0.5 * q
        roots = [p + 0.5 * q, -p + 0.5 * q, double, double]
        distinct, _ = _root_pattern(roots, tol)
        if abs(q) <= tol and abs(p) <= tol:
            case = "Exceptional"
            pm = [0.0, 0.0]
        else:
            pm = list(distinct) + [double]
            if abs(q) <= tol:
                case = "Exceptional"
            elif abs(p) <= tol or abs(abs(p) - abs(q)) <= tol:
                case = "CohomOne"
            else:
                case = "Case3"
        return BryantCase(case, _sorted_roots(roots), _sorted_roots(pm))

    # T2
    p, = form.params
    triple = -0.5 * p
    roots = [1.5 * p, triple, triple, triple]
    distinct, _ = _root_pattern(roots, tol)
    pm = list(distinct) + [triple, triple]
    case = "Exceptional" if abs(p) <= tol else "Case2"
    return BryantCase(case, _sorted_roots(roots), _sorted_roots(pm))


def _root_pattern(roots, tol):
    """Distinct values and multiplicities of a small root list."""
    distinct, counts = [], []
    for r in roots:
        for i, d in enumerate(distinct):
            if abs(complex(r) - complex(d)) <= 10 * tol + tol * abs(complex(r)):
                counts[i] += 1
                break
        else:
            distinct.append(r)
            counts.append(1)
    return distinct, counts
