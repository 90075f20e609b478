"""Rational parameterization of the conic {Q = 0} and binary-form root finding.

The projective conic in CP^2 cut out by a nondegenerate quadratic form is a
rational curve; composing the standard parameterization of the sphere conic
with the inverse reduction matrix gives one for any Q.  Restricting a degree-d
polynomial to the conic produces a binary form of degree 2d whose projective
roots (with multiplicity) are the intersection divisor that all the
factorization machinery consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .algebra import HomogPoly, QuadForm, monomials
from .errors import Degenerate, NotOnConic, ZeroForm

EPS_CLUSTER = 1e-6
# A leading coefficient below this (relative) threshold counts as a root at [1:0].
INF_COEFF_TOL = 1e-10
TOL_ON_CONIC = 1e-9


def _normalize(coords, size: int) -> np.ndarray:
    v = np.asarray(coords, dtype=complex).ravel()
    if v.size != size:
        raise ValueError("expected %d homogeneous coordinates" % size)
    mags = np.abs(v)
    j = int(np.argmax(mags))
    if mags[j] == 0.0:
        raise ValueError("zero vector does not define a projective point")
    return v / v[j]


class ProjPoint1:
    """Point of CP^1, normalized so the max-modulus coordinate is exactly 1."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = _normalize(coords, 2)

    def conj(self) -> "ProjPoint1":
        return ProjPoint1(np.conj(self.coords))

    def key(self) -> Tuple[float, ...]:
        return tuple(float(p) for c in self.coords for p in (c.real, c.imag))

    def __repr__(self) -> str:
        return "ProjPoint1[%s : %s]" % (self.coords[0], self.coords[1])


class ProjPoint2:
    """Point of CP^2, normalized so the max-modulus coordinate is exactly 1."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = _normalize(coords, 3)

    def conj(self) -> "ProjPoint2":
        return ProjPoint2(np.conj(self.coords))

    def key(self) -> Tuple[float, ...]:
        return tuple(float(p) for c in self.coords for p in (c.real, c.imag))

    def __repr__(self) -> str:
        return "ProjPoint2[%s : %s : %s]" % tuple(self.coords)


def conj_point(p):
    """Coordinate-wise complex conjugate, renormalized."""
    return p.conj()


def chordal(p, q) -> float:
    """Scale-invariant distance between projective points of the same dimension."""
    u, v = p.coords, q.coords
    if u.size == 2:
        num = abs(u[0] * v[1] - u[1] * v[0])
    else:
        num = float(np.linalg.norm(np.cross(u, v)))
    return num / (float(np.linalg.norm(u)) * float(np.linalg.norm(v)))


class BinaryForm:
    """Homogeneous form in (u0, u1); coeffs[k] multiplies u0^k u1^(degree-k)."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs):
        self.degree = int(degree)
        arr = np.asarray(coeffs, dtype=complex).ravel()
        if arr.size != degree + 1:
            raise ValueError("binary form of degree %d needs %d coefficients"
                             % (degree, degree + 1))
        self.coeffs = arr.copy()

    def eval_uv(self, u0: complex, u1: complex) -> complex:
        total = 0.0 + 0.0j
        p0 = 1.0 + 0.0j
        pows1 = np.empty(self.degree + 1, dtype=complex)
        pows1[self.degree] = 1.0
        for k in range(self.degree - 1, -1, -1):
            pows1[k] = pows1[k + 1] * u1
        for k, c in enumerate(self.coeffs):
            total += c * p0 * pows1[k]
            p0 *= u0
        return complex(total)

    def eval_point(self, u: ProjPoint1) -> complex:
        return self.eval_uv(u.coords[0], u.coords[1])

    def deriv_u0(self) -> "BinaryForm":
        if self.degree == 0:
            return BinaryForm(0, [0.0])
        d = np.arange(1, self.degree + 1) * self.coeffs[1:]
        return BinaryForm(self.degree - 1, d)

    def deriv_u1(self) -> "BinaryForm":
        if self.degree == 0:
            return BinaryForm(0, [0.0])
        d = np.arange(self.degree, 0, -1) * self.coeffs[:-1]
        return BinaryForm(self.degree - 1, d)

    def mul(self, other: "BinaryForm") -> "BinaryForm":
        return BinaryForm(self.degree + other.degree,
                          np.convolve(self.coeffs, other.coeffs))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __repr__(self) -> str:
        return "BinaryForm(%d, %s)" % (self.degree, self.coeffs.tolist())


@dataclass(frozen=True)
class RootCluster:
    """One projective root with the multiplicity of its merged cluster."""

    point: ProjPoint1
    multiplicity: int


@dataclass(frozen=True)
class ConicParam:
    """Degree-2 parameterization u -> alpha(u) of the conic {Q = 0}."""

    alphas: Tuple[BinaryForm, BinaryForm, BinaryForm]
    matrix: np.ndarray
    quad: QuadForm

    def point(self, u: ProjPoint1) -> ProjPoint2:
        vals = [a.eval_point(u) for a in self.alphas]
        return ProjPoint2(vals)


_SPHERE_ALPHAS = (
    np.array([-1j, 0.0, 1j]),   # i*(u0^2 - u1^2)
    np.array([0.0, 2j, 0.0]),   # 2i*u0*u1
    np.array([1.0, 0.0, 1.0]),  # u0^2 + u1^2
)


def conic_param(Q: QuadForm) -> ConicParam:
    """Sphere-conic parameterization pushed through the reduction of Q.

    The component forms alpha_j satisfy Q(alpha(u)) = 0 identically; the
    constructor verifies all five quartic coefficients vanish.
    """
    a_inv = Q.a_inv
    alphas = []
    for j in range(3):
        coeffs = sum(_SPHERE_ALPHAS[i] * a_inv[i, j] for i in range(3))
        alphas.append(BinaryForm(2, coeffs))
    quartic = np.zeros(5, dtype=complex)
    B = Q.B
    for i in range(3):
        for j in range(3):
            if B[i, j] != 0:
                quartic += B[i, j] * np.convolve(alphas[i].coeffs, alphas[j].coeffs)
    scale = max(float(np.max(np.abs(B))), 1.0)
    if np.max(np.abs(quartic)) > 1e-10 * scale:
        raise Degenerate("parameterization does not satisfy Q(alpha(u)) = 0")
    return ConicParam(tuple(alphas), Q.reduction(), Q)


def restrict_to_conic(p: HomogPoly, param: ConicParam) -> BinaryForm:
    """Binary form of degree 2*deg(p) obtained by substituting alpha(u) into p."""
    d = p.degree
    pows = []
    for a in param.alphas:
        chain = [np.array([1.0 + 0j])]
        for _ in range(d):
            chain.append(np.convolve(chain[-1], a.coeffs))
        pows.append(chain)
    out = np.zeros(2 * d + 1, dtype=complex)
    for (a, b, c), coeff in zip(monomials(d), p.coeffs):
        if coeff == 0:
            continue
        term = np.convolve(np.convolve(pows[0][a], pows[1][b]), pows[2][c])
        out += coeff * term
    return BinaryForm(2 * d, out)


def _newton_polish(coeffs_desc: np.ndarray, root: complex, multiplicity: int) -> complex:
    """Newton refinement of one root of known multiplicity.

    A root of multiplicity m is a simple root of the (m-1)st derivative, so
    polishing there restores quadratic convergence; steps are kept only while
    the residual improves.
    """
    poly = coeffs_desc
    for _ in range(multiplicity - 1):
        poly = np.polyder(poly)
    deriv = np.polyder(poly)
    best = cur = complex(root)
    best_val = abs(np.polyval(poly, cur))
    for _ in range(12):
        dv = np.polyval(deriv, cur)
        if dv == 0:
            break
        step = np.polyval(poly, cur) / dv
        cur = cur - step
        val = abs(np.polyval(poly, cur))
        if val < best_val:
            best, best_val = cur, val
        if abs(step) < 1e-14 * (1 + abs(cur)):
            break
    return best


def roots_projective(p: BinaryForm, eps_cluster: float = EPS_CLUSTER) -> List[RootCluster]:
    """Projective roots of p with multiplicities from cluster merging.

    Roots at [1:0] are detected by counting vanishing leading coefficients;
    affine roots come from the companion matrix, get a Newton polish, and are
    merged when within eps_cluster * (1 + |root|) of each other.  Clusters are
    returned sorted by the canonical key of their normalized parameter, so the
    ordering is reproducible and shared by every caller.
    """
    c = p.coeffs
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        raise ZeroForm("binary form is identically zero")
    n = p.degree
    m_inf = 0
    while m_inf < n and abs(c[n - m_inf]) <= INF_COEFF_TOL * scale:
        m_inf += 1
    clusters: List[RootCluster] = []
    if m_inf > 0:
        clusters.append(RootCluster(ProjPoint1([1.0, 0.0]), m_inf))
    trimmed = c[: n - m_inf + 1]
    if trimmed.size > 1:
        desc = trimmed[::-1]
        roots = np.roots(desc)
        k = roots.size
        parent = list(range(k))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(k):
            for j in range(i + 1, k):
                tol = eps_cluster * (1.0 + max(abs(roots[i]), abs(roots[j])))
                if abs(roots[i] - roots[j]) <= tol:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[rj] = ri
        groups = {}
        for i in range(k):
            groups.setdefault(find(i), []).append(roots[i])
        for members in groups.values():
            rep = _newton_polish(desc, complex(np.mean(members)), len(members))
            clusters.append(RootCluster(ProjPoint1([rep, 1.0]), len(members)))
    clusters.sort(key=lambda cl: cl.point.key())
    return clusters


def line_through(pa: ProjPoint2, pb: ProjPoint2, Q: QuadForm,
                 tol_on_conic: float = TOL_ON_CONIC) -> HomogPoly:
    """Linear form vanishing on the line through two conic points.

    Distinct points give the secant (cross product of coordinates); coincident
    points give the tangent line, whose coefficients are B @ p.
    """
    scale = max(float(np.max(np.abs(Q.B))), 1e-300)
    for p in (pa, pb):
        r = float(np.linalg.norm(p.coords)) ** 2
        if abs(Q(p.coords)) > tol_on_conic * scale * r:
            raise NotOnConic("point %r is off the conic" % p)
    if chordal(pa, pb) < 1e-9:
        w = Q.B @ pa.coords
    else:
        w = np.cross(pa.coords, pb.coords)
    return HomogPoly(1, w)


def _sylvester(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Sylvester matrix from descending coefficient vectors."""
    m = f.size - 1
    l = g.size - 1
    size = m + l
    S = np.zeros((size, size), dtype=complex)
    for i in range(l):
        S[i, i:i + m + 1] = f
    for i in range(m):
        S[l + i, i:i + l + 1] = g
    return S


def binary_discriminant(p: BinaryForm) -> complex:
    """Resultant of the two partial derivatives of p, via the Sylvester determinant.

    By the Euler identity a common projective zero of both partials is a
    multiple root of p (including at [1:0]), and conversely, so the value
    vanishes exactly on forms with a multiple root.
    """
    if p.degree < 1:
        raise ZeroForm("discriminant needs degree >= 1")
    if p.degree == 1:
        return 1.0 + 0.0j
    fx = p.deriv_u0().coeffs[::-1]
    fy = p.deriv_u1().coeffs[::-1]
    return complex(np.linalg.det(_sylvester(fx, fy)))


def discriminant_scale(p: BinaryForm) -> float:
    """Hadamard bound of the discriminant's Sylvester matrix, for relative tests."""
    if p.degree <= 1:
        return 1.0
    fx = p.deriv_u0().coeffs[::-1]
    fy = p.deriv_u1().coeffs[::-1]
    S = _sylvester(fx, fy)
    rows = np.linalg.norm(S, axis=1)
    rows = np.where(rows == 0, 1.0, rows)
    return float(np.prod(rows))
