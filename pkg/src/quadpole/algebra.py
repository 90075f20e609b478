"""Dense arithmetic for complex polynomials in three variables.

A homogeneous grade of degree d is stored as one coefficient vector over the
full monomial basis x^a y^b z^c (a+b+c = d) in lexicographic order, so every
operator in the package can be a dense matrix.  General polynomials keep one
grade per degree.  Quadratic forms are symmetric 3x3 matrices B acting as
Q(v) = v B v^T.  Degrees stay small (at most ~24), double precision is used
throughout, and exactness is always checked by residuals, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Tuple

import numpy as np

from .errors import Degenerate, InsufficientQuadrature, MixedParity, NotDivisible

# Default tolerances; every operation that uses one takes it as a keyword.
TOL_DIV = 1e-9
TOL_DET = 1e-12

Monomial = Tuple[int, int, int]


@lru_cache(maxsize=None)
def monomials(degree: int) -> Tuple[Monomial, ...]:
    """Exponent triples (a, b, c) with a+b+c = degree, lexicographically descending."""
    out = []
    for a in range(degree, -1, -1):
        for b in range(degree - a, -1, -1):
            out.append((a, b, degree - a - b))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(degree: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials(degree))}


def grade_dim(degree: int) -> int:
    return (degree + 1) * (degree + 2) // 2


def _monomial_values(degree: int, pts: np.ndarray) -> np.ndarray:
    """Matrix of monomial values, one row per point, one column per monomial."""
    n = pts.shape[0]
    pows = []
    for k in range(3):
        col = [np.ones(n, dtype=complex)]
        for _ in range(degree):
            col.append(col[-1] * pts[:, k])
        pows.append(col)
    vals = np.empty((n, grade_dim(degree)), dtype=complex)
    for i, (a, b, c) in enumerate(monomials(degree)):
        vals[:, i] = pows[0][a] * pows[1][b] * pows[2][c]
    return vals


class HomogPoly:
    """Homogeneous polynomial of a fixed degree with dense complex coefficients."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs=None):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        self.degree = int(degree)
        if coeffs is None:
            self.coeffs = np.zeros(grade_dim(degree), dtype=complex)
        else:
            arr = np.asarray(coeffs, dtype=complex)
            if arr.shape != (grade_dim(degree),):
                raise ValueError("coefficient vector has length %d, expected %d"
                                 % (arr.size, grade_dim(degree)))
            self.coeffs = arr.copy()

    @classmethod
    def zero(cls, degree: int) -> "HomogPoly":
        return cls(degree)

    @classmethod
    def from_terms(cls, degree: int, terms: Dict[Monomial, complex]) -> "HomogPoly":
        p = cls(degree)
        idx = monomial_index(degree)
        for exp, c in terms.items():
            p.coeffs[idx[tuple(exp)]] += c
        return p

    @classmethod
    def variable(cls, axis: int) -> "HomogPoly":
        coeffs = np.zeros(3, dtype=complex)
        coeffs[axis] = 1.0
        return cls(1, coeffs)

    def term(self, exp: Monomial) -> complex:
        return complex(self.coeffs[monomial_index(self.degree)[tuple(exp)]])

    def terms(self) -> Dict[Monomial, complex]:
        return {m: complex(c) for m, c in zip(monomials(self.degree), self.coeffs)
                if c != 0}

    def copy(self) -> "HomogPoly":
        return HomogPoly(self.degree, self.coeffs)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.coeffs), initial=0.0) <= tol)

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        if self.degree != other.degree:
            raise ValueError("degree mismatch in addition")
        return HomogPoly(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        if self.degree != other.degree:
            raise ValueError("degree mismatch in subtraction")
        return HomogPoly(self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> "HomogPoly":
        return HomogPoly(self.degree, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, HomogPoly):
            return poly_mul(self, other)
        return HomogPoly(self.degree, self.coeffs * complex(other))

    def __rmul__(self, other):
        return HomogPoly(self.degree, self.coeffs * complex(other))

    def __truediv__(self, other):
        return HomogPoly(self.degree, self.coeffs / complex(other))

    def eval_many(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        return _monomial_values(self.degree, pts) @ self.coeffs

    def __call__(self, v) -> complex:
        pts = np.asarray(v, dtype=complex).reshape(1, 3)
        return complex(self.eval_many(pts)[0])

    def deriv(self, axis: int) -> "HomogPoly":
        if self.degree == 0:
            return HomogPoly.zero(0)
        out = HomogPoly.zero(self.degree - 1)
        idx = monomial_index(self.degree - 1)
        for m, c in zip(monomials(self.degree), self.coeffs):
            if c != 0 and m[axis] > 0:
                lowered = list(m)
                lowered[axis] -= 1
                out.coeffs[idx[tuple(lowered)]] += m[axis] * c
        return out

    def conjugate(self) -> "HomogPoly":
        return HomogPoly(self.degree, np.conj(self.coeffs))

    def compose_linear(self, U) -> "HomogPoly":
        """Polynomial v -> P(v @ U) for a 3x3 matrix U."""
        U = np.asarray(U, dtype=complex)
        if self.degree == 0:
            return self.copy()
        lins = [HomogPoly(1, U[:, k]) for k in range(3)]
        pows = []
        for lin in lins:
            chain = [HomogPoly(0, [1.0])]
            for _ in range(self.degree):
                chain.append(poly_mul(chain[-1], lin))
            pows.append(chain)
        out = HomogPoly.zero(self.degree)
        for (a, b, c), coeff in zip(monomials(self.degree), self.coeffs):
            if coeff == 0:
                continue
            term = poly_mul(poly_mul(pows[0][a], pows[1][b]), pows[2][c])
            out = out + coeff * term
        return out

    def as_poly(self) -> "Poly":
        return Poly.from_homog(self)

    def __repr__(self) -> str:
        parts = []
        for m, c in zip(monomials(self.degree), self.coeffs):
            if c != 0:
                parts.append("(%s)*x%dy%dz%d" % (complex(c), *m))
        return "HomogPoly(%d: %s)" % (self.degree, " + ".join(parts) or "0")


@lru_cache(maxsize=None)
def _mul_table(d1: int, d2: int) -> np.ndarray:
    idx_out = monomial_index(d1 + d2)
    table = np.empty(grade_dim(d1) * grade_dim(d2), dtype=np.intp)
    k = 0
    for a, b, c in monomials(d1):
        for e, f, g in monomials(d2):
            table[k] = idx_out[(a + e, b + f, c + g)]
            k += 1
    return table


def poly_mul(p: HomogPoly, q: HomogPoly) -> HomogPoly:
    """Product of homogeneous polynomials; degrees add."""
    table = _mul_table(p.degree, q.degree)
    prods = np.outer(p.coeffs, q.coeffs).ravel()
    dim = grade_dim(p.degree + q.degree)
    out = (np.bincount(table, weights=prods.real, minlength=dim)
           + 1j * np.bincount(table, weights=prods.imag, minlength=dim))
    return HomogPoly(p.degree + q.degree, out)


def poly_eval(p, v) -> complex:
    """Value of a HomogPoly or Poly at one point of C^3."""
    return p(v)


class Poly:
    """General polynomial stored as one homogeneous grade per degree."""

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[HomogPoly]):
        parts = list(parts)
        for k, p in enumerate(parts):
            if p.degree != k:
                raise ValueError("grade %d has degree %d" % (k, p.degree))
        while len(parts) > 1 and parts[-1].is_zero():
            parts.pop()
        if not parts:
            parts = [HomogPoly.zero(0)]
        self.parts = tuple(parts)

    @classmethod
    def zero(cls) -> "Poly":
        return cls([HomogPoly.zero(0)])

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([HomogPoly(0, [c])])

    @classmethod
    def from_homog(cls, h: HomogPoly) -> "Poly":
        parts = [HomogPoly.zero(k) for k in range(h.degree)] + [h.copy()]
        return cls(parts)

    @classmethod
    def from_grades(cls, grades: Dict[int, HomogPoly]) -> "Poly":
        top = max(grades) if grades else 0
        parts = [grades.get(k, HomogPoly.zero(k)).copy() if k in grades
                 else HomogPoly.zero(k) for k in range(top + 1)]
        return cls(parts)

    @property
    def degree(self) -> int:
        return len(self.parts) - 1

    def part(self, k: int) -> HomogPoly:
        if 0 <= k < len(self.parts):
            return self.parts[k]
        return HomogPoly.zero(k)

    def norm(self) -> float:
        return float(math.sqrt(sum(p.norm() ** 2 for p in self.parts)))

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(p.is_zero(tol) for p in self.parts)

    def _padded(self, other: "Poly"):
        top = max(self.degree, other.degree)
        return ([self.part(k) for k in range(top + 1)],
                [other.part(k) for k in range(top + 1)])

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self._padded(other)
        return Poly([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        a, b = self._padded(other)
        return Poly([x - y for x, y in zip(a, b)])

    def __neg__(self) -> "Poly":
        return Poly([-p for p in self.parts])

    def __mul__(self, other):
        return Poly([p * complex(other) for p in self.parts])

    __rmul__ = __mul__

    def eval_many(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        vals = np.zeros(pts.shape[0], dtype=complex)
        for p in self.parts:
            vals += p.eval_many(pts)
        return vals

    def __call__(self, v) -> complex:
        pts = np.asarray(v, dtype=complex).reshape(1, 3)
        return complex(self.eval_many(pts)[0])

    def __repr__(self) -> str:
        return "Poly[%s]" % "; ".join(repr(p) for p in self.parts if not p.is_zero())


def grade_split(p: Poly) -> Tuple[Poly, Poly]:
    """Split into the even-degree and odd-degree parts; they sum back to p."""
    even = [part.copy() if k % 2 == 0 else HomogPoly.zero(k)
            for k, part in enumerate(p.parts)]
    odd = [part.copy() if k % 2 == 1 else HomogPoly.zero(k)
           for k, part in enumerate(p.parts)]
    return Poly(even), Poly(odd)


class QuadForm:
    """Nondegenerate complex symmetric quadratic form Q(v) = v B v^T on C^3."""

    def __init__(self, B):
        B = np.asarray(B, dtype=complex)
        if B.shape != (3, 3):
            raise ValueError("B must be a 3x3 matrix")
        scale = float(np.max(np.abs(B)))
        if scale > 0 and np.max(np.abs(B - B.T)) > 1e-12 * scale:
            raise ValueError("B must be symmetric")
        self.B = 0.5 * (B + B.T)
        self.is_real = bool(np.all(self.B.imag == 0))
        if self.is_real:
            eig = np.linalg.eigvalsh(self.B.real)
            self.signature = int(np.sum(eig > 0) - np.sum(eig < 0))
        else:
            self.signature = None
        self._poly = None
        self._b_inv = None
        self._reduction = None
        self._a_inv = None

    @classmethod
    def sphere(cls) -> "QuadForm":
        return cls(np.eye(3))

    @classmethod
    def hyperboloid(cls) -> "QuadForm":
        return cls(np.diag([1.0, 1.0, -1.0]))

    @property
    def key(self) -> bytes:
        return self.B.tobytes()

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.B))

    @property
    def b_inv(self) -> np.ndarray:
        if self._b_inv is None:
            self._b_inv = np.linalg.inv(self.B)
        return self._b_inv

    def poly(self) -> HomogPoly:
        if self._poly is None:
            B = self.B
            self._poly = HomogPoly(2, [B[0, 0], 2 * B[0, 1], 2 * B[0, 2],
                                       B[1, 1], 2 * B[1, 2], B[2, 2]])
        return self._poly.copy()

    def __call__(self, v) -> complex:
        v = np.asarray(v, dtype=complex)
        return complex(v @ self.B @ v)

    def polar(self, u, v) -> complex:
        """Symmetric bilinear form with polar(v, v) = Q(v)."""
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        return complex(u @ self.B @ v)

    def reduction(self, tol_det: float = TOL_DET) -> np.ndarray:
        if self._reduction is None:
            self._reduction = quad_reduce(self, tol_det=tol_det)
        return self._reduction

    @property
    def a_inv(self) -> np.ndarray:
        if self._a_inv is None:
            self._a_inv = np.linalg.inv(self.reduction())
        return self._a_inv

    def __repr__(self) -> str:
        return "QuadForm(%r)" % (self.B.tolist(),)


def _sqrt_factor_2x2(T: np.ndarray) -> np.ndarray:
    """W with W @ W.T = T for symmetric complex 2x2 T."""
    t00, t01, t11 = T[0, 0], T[0, 1], T[1, 1]
    scale = max(abs(t00), abs(t01), abs(t11))
    if abs(t00) > 1e-13 * scale:
        w1 = np.array([t00, t01], dtype=complex) / np.sqrt(t00)
        w2 = np.array([0.0, np.sqrt(t11 - w1[1] ** 2)], dtype=complex)
        return np.column_stack([w1, w2])
    if abs(t11) > 1e-13 * scale:
        w1 = np.array([t01, t11], dtype=complex) / np.sqrt(t11)
        w2 = np.array([np.sqrt(t00 - w1[0] ** 2), 0.0], dtype=complex)
        return np.column_stack([w2, w1])
    s = np.sqrt(t01 / 2.0)
    return s * np.array([[1.0, 1j], [1.0, -1j]], dtype=complex)


def quad_reduce(Q: QuadForm, tol_det: float = TOL_DET) -> np.ndarray:
    """Matrix A with A @ A.T = B, so Q becomes a sum of three squares in v @ A.

    Symmetric elimination with largest-pivot selection; a 2x2 block step covers
    the case of a vanishing diagonal.  Complex square roots take the principal
    branch, so the result is deterministic.
    """
    B = Q.B
    scale = float(np.max(np.abs(B)))
    if scale == 0.0 or abs(np.linalg.det(B)) <= tol_det * scale ** 3:
        raise Degenerate("quadratic form is singular within tolerance")
    M = B.copy()
    piv_tol = 1e-13 * scale
    cols = []
    while len(cols) < 3:
        dvals = np.abs(np.diag(M))
        j = int(np.argmax(dvals))
        if dvals[j] > piv_tol:
            a = M[:, j] / np.sqrt(M[j, j])
            cols.append(a)
            M = M - np.outer(a, a)
            M[j, :] = 0.0
            M[:, j] = 0.0
            continue
        off = np.abs(M)
        np.fill_diagonal(off, 0.0)
        j, k = np.unravel_index(int(np.argmax(off)), off.shape)
        if off[j, k] <= piv_tol:
            raise Degenerate("rank-deficient form slipped past the determinant check")
        S = M[np.ix_([j, k], [j, k])]
        P2 = M[:, [j, k]]
        Tinv = np.linalg.inv(S)
        V = P2 @ _sqrt_factor_2x2(Tinv)
        cols.append(V[:, 0])
        cols.append(V[:, 1])
        M = M - P2 @ Tinv @ P2.T
        M[[j, k], :] = 0.0
        M[:, [j, k]] = 0.0
    if len(cols) != 3:
        raise Degenerate("elimination produced %d columns" % len(cols))
    return np.column_stack(cols)


_MULQ_CACHE: Dict[Tuple[bytes, int], np.ndarray] = {}


def mul_q_matrix(Q: QuadForm, degree_r: int) -> np.ndarray:
    """Dense matrix of multiplication by Q from grade degree_r to degree_r + 2."""
    key = (Q.key, degree_r)
    m = _MULQ_CACHE.get(key)
    if m is None:
        qp = Q.poly()
        idx_out = monomial_index(degree_r + 2)
        m = np.zeros((grade_dim(degree_r + 2), grade_dim(degree_r)), dtype=complex)
        for jcol, mr in enumerate(monomials(degree_r)):
            for qm, qc in zip(monomials(2), qp.coeffs):
                if qc != 0:
                    m[idx_out[(mr[0] + qm[0], mr[1] + qm[1], mr[2] + qm[2])], jcol] += qc
        _MULQ_CACHE[key] = m
    return m


def divide_by_quadric(p: HomogPoly, Q: QuadForm, tol_div: float = TOL_DIV) -> HomogPoly:
    """The R with p = Q * R, found by least squares on the dense grades.

    Raises NotDivisible when the fit residual exceeds tol_div * ||p||.
    """
    if p.degree < 2:
        raise ValueError("cannot divide a polynomial of degree < 2 by a quadric")
    M = mul_q_matrix(Q, p.degree - 2)
    r, *_ = np.linalg.lstsq(M, p.coeffs, rcond=None)
    residual = float(np.linalg.norm(M @ r - p.coeffs))
    if residual > tol_div * max(p.norm(), 1e-300):
        raise NotDivisible("division residual %.3e exceeds tolerance" % residual)
    return HomogPoly(p.degree - 2, r)


def homogenize_on_quadric(p: Poly, Q: QuadForm) -> HomogPoly:
    """Lift all grades to the top degree by multiplying with powers of Q.

    All present grades must share parity (else MixedParity); the result agrees
    with p on the surface {Q = 1}.
    """
    present = [k for k, part in enumerate(p.parts) if not part.is_zero()]
    if not present:
        return HomogPoly.zero(0)
    parities = {k % 2 for k in present}
    if len(parities) > 1:
        raise MixedParity("grades %s mix parities" % (present,))
    top = present[-1]
    qpow = HomogPoly(0, [1.0])
    qpowers = [qpow]
    for _ in range((top - present[0]) // 2):
        qpow = poly_mul(qpow, Q.poly())
        qpowers.append(qpow)
    out = HomogPoly.zero(top)
    for k in present:
        out = out + poly_mul(p.parts[k], qpowers[(top - k) // 2])
    return out


def double_factorial(n: int) -> int:
    """n!! with the empty-product convention (-1)!! = 0!! = 1."""
    return math.prod(range(n, 0, -2))


def monomial_sphere_integral(a: int, b: int, c: int) -> float:
    """Integral of x^a y^b z^c over the unit sphere with surface measure.

    Zero when any exponent is odd, else
    4*pi * (a-1)!!(b-1)!!(c-1)!! / (a+b+c+1)!!.
    """
    if a % 2 or b % 2 or c % 2:
        return 0.0
    num = (double_factorial(a - 1) * double_factorial(b - 1)
           * double_factorial(c - 1))
    return 4.0 * math.pi * num / double_factorial(a + b + c + 1)


class QuadratureRule:
    """Tensor rule on the sphere, exact for polynomials up to exact_degree.

    Uniform angles in theta (trapezoid on the circle) and Gauss-Legendre in
    cos(phi); nodes are stored as (theta, phi) rows with combined weights for
    the measure |sin phi| dtheta dphi.
    """

    def __init__(self, exact_degree: int):
        if exact_degree < 0:
            raise ValueError("exact_degree must be non-negative")
        self.exact_degree = int(exact_degree)
        n_theta = exact_degree + 1
        n_phi = (exact_degree + 2) // 2
        theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
        w_theta = np.full(n_theta, 2.0 * np.pi / n_theta)
        t, w_t = np.polynomial.legendre.leggauss(max(n_phi, 1))
        phi = np.arccos(t)
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        wt, wp = np.meshgrid(w_theta, w_t, indexing="ij")
        self.nodes = np.column_stack([th.ravel(), ph.ravel()])
        self.weights = (wt * wp).ravel()
        self._points = None

    def sphere_points(self) -> np.ndarray:
        if self._points is None:
            th = self.nodes[:, 0]
            ph = self.nodes[:, 1]
            sp = np.sin(ph)
            self._points = np.column_stack(
                [np.cos(th) * sp, np.sin(th) * sp, np.cos(ph)]).astype(complex)
        return self._points

    def integrate(self, values: np.ndarray) -> complex:
        return complex(np.dot(self.weights, values))


def inner_product(f, g, Q: QuadForm, rule: QuadratureRule) -> complex:
    """Hermitian product of f and g over the surface {Q = 1}.

    Points of the unit sphere are pulled back through the inverse of the
    reduction matrix A (so they satisfy Q = 1) and the sphere measure is used.
    Exact when exact_degree covers deg f + deg g; raises InsufficientQuadrature
    otherwise.
    """
    need = f.degree + g.degree
    if rule.exact_degree < need:
        raise InsufficientQuadrature(
            "rule exact to %d cannot integrate degree %d" % (rule.exact_degree, need))
    pts = rule.sphere_points() @ Q.a_inv
    fv = f.eval_many(pts)
    gv = g.eval_many(pts)
    return complex(np.dot(rule.weights, fv * np.conj(gv)))


def surface_samples(Q: QuadForm, n: int, rng: np.random.Generator,
                    real: bool = False) -> np.ndarray:
    """n points on {Q = 1}; complex in general, real when real=True."""
    pts = np.empty((n, 3), dtype=complex)
    got = 0
    while got < n:
        u = rng.normal(size=3).astype(complex)
        if not real:
            u = u + 1j * rng.normal(size=3)
        qu = Q(u)
        if real:
            if qu.real <= 1e-9:
                continue
            pts[got] = u / math.sqrt(qu.real)
        else:
            if abs(qu) <= 1e-9:
                continue
            pts[got] = u * qu ** -0.5
        got += 1
    return pts
