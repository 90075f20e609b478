"""Harmonic theory for the Laplacian attached to a quadratic form.

The operator is delta_Q = sum_jk (B^-1)_jk d_j d_k; its kernel on each grade
splits the grade as Ker(delta_Q) + Q*V(d-2), which iterates into the full
decomposition P = sum_k Q^k H_k with every H_k annihilated by delta_Q.  All
solves are dense: the matrix R -> delta_Q(Q*R) on a grade is square and
invertible, so projections reduce to one linear solve per grade.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .algebra import (
    HomogPoly,
    Poly,
    QuadForm,
    grade_dim,
    grade_split,
    homogenize_on_quadric,
    monomial_index,
    monomials,
    mul_q_matrix,
    poly_mul,
    surface_samples,
)
from .errors import SolveFailure

TOL_HARM = 1e-9

_DELTA_CACHE: Dict[Tuple[bytes, int], np.ndarray] = {}


def delta_matrix(Q: QuadForm, degree: int) -> np.ndarray:
    """Dense matrix of delta_Q from grade `degree` down to `degree - 2`."""
    key = (Q.key, degree)
    m = _DELTA_CACHE.get(key)
    if m is None:
        binv = Q.b_inv
        dim_in = grade_dim(degree)
        dim_out = grade_dim(degree - 2) if degree >= 2 else 0
        m = np.zeros((dim_out, dim_in), dtype=complex)
        if degree >= 2:
            idx_out = monomial_index(degree - 2)
            for col, mono in enumerate(monomials(degree)):
                for j in range(3):
                    for k in range(3):
                        c = binv[j, k]
                        if c == 0:
                            continue
                        e = list(mono)
                        if e[j] == 0:
                            continue
                        f1 = e[j]
                        e[j] -= 1
                        if e[k] == 0:
                            continue
                        f2 = e[k]
                        e[k] -= 1
                        m[idx_out[tuple(e)], col] += c * f1 * f2
        _DELTA_CACHE[key] = m
    return m


def apply_delta_q(p: HomogPoly, Q: QuadForm) -> HomogPoly:
    """delta_Q applied to a grade; degree drops by two (zero below degree 2)."""
    if p.degree < 2:
        return HomogPoly.zero(0)
    return HomogPoly(p.degree - 2, delta_matrix(Q, p.degree) @ p.coeffs)


def is_harmonic(p: HomogPoly, Q: QuadForm, tol: float = TOL_HARM) -> bool:
    if p.degree < 2:
        return True
    res = apply_delta_q(p, Q).norm()
    scale = max(1.0, p.degree ** 2 * float(np.max(np.abs(Q.b_inv))))
    return res <= tol * scale * max(p.norm(), 1e-300)


_TMAT_CACHE: Dict[Tuple[bytes, int], np.ndarray] = {}


def _t_matrix(Q: QuadForm, degree: int) -> np.ndarray:
    """Square matrix of R -> delta_Q(Q * R) on grade `degree - 2`."""
    key = (Q.key, degree)
    m = _TMAT_CACHE.get(key)
    if m is None:
        m = delta_matrix(Q, degree) @ mul_q_matrix(Q, degree - 2)
        _TMAT_CACHE[key] = m
    return m


def harmonic_project(p: HomogPoly, Q: QuadForm,
                     tol_harm: float = TOL_HARM) -> Tuple[HomogPoly, HomogPoly]:
    """Split p = H + Q*R with delta_Q(H) = 0; returns (H, R).

    Solves delta_Q(Q*R) = delta_Q(p) for R on the lower grade; the system
    matrix is invertible because the kernel of delta_Q meets Q*V(d-2) only
    in zero.
    """
    if p.degree < 2:
        return p.copy(), HomogPoly.zero(0)
    rhs = delta_matrix(Q, p.degree) @ p.coeffs
    tmat = _t_matrix(Q, p.degree)
    try:
        r = np.linalg.solve(tmat, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolveFailure("projection solve failed: %s" % exc) from None
    residual = float(np.linalg.norm(tmat @ r - rhs))
    if residual > max(tol_harm, 1e-12) * max(float(np.linalg.norm(rhs)), p.norm(), 1e-300):
        raise SolveFailure("projection residual %.3e too large" % residual)
    R = HomogPoly(p.degree - 2, r)
    H = p - poly_mul(Q.poly(), R)
    return H, R


@dataclass
class HarmonicDecomp:
    """Components H_k of P = sum_k Q^k H_k, k = 0 .. floor(degree / 2)."""

    degree: int
    components: List[HomogPoly]

    def reconstruct(self, Q: QuadForm) -> HomogPoly:
        out = HomogPoly.zero(self.degree)
        qpow = HomogPoly(0, [1.0])
        for k, comp in enumerate(self.components):
            if k > 0:
                qpow = poly_mul(qpow, Q.poly())
            out = out + poly_mul(qpow, comp)
        return out


def harmonic_decompose(p: HomogPoly, Q: QuadForm,
                       tol_harm: float = TOL_HARM) -> HarmonicDecomp:
    """Full splitting P = sum_k Q^k H_k by repeated projection.

    Grades 0 and 1 are harmonic as they stand, so the component list always
    has floor(degree/2) + 1 entries, indexed by the power of Q.
    """
    comps: List[HomogPoly] = []
    cur = p.copy()
    while True:
        if cur.degree < 2:
            comps.append(cur)
            break
        H, R = harmonic_project(cur, Q, tol_harm=tol_harm)
        comps.append(H)
        cur = R
    return HarmonicDecomp(p.degree, comps)


def dirichlet_solve(m: Poly, n: Poly, Q: QuadForm, tol_harm: float = TOL_HARM,
                    perturb_seed: Optional[int] = None) -> Poly:
    """The unique polynomial P with delta_Q(P) = m and P = n on {Q = 1}.

    Stage one lifts m grade by grade through a minimum-norm preimage T of
    delta_Q; stage two replaces the surface defect n - T by the harmonic
    polynomial with the same restriction to {Q = 1}.  With perturb_seed set,
    a random kernel element is added to T first; the output must not change,
    which makes the uniqueness statement directly testable.
    """
    rng = np.random.default_rng(perturb_seed) if perturb_seed is not None else None
    t_grades: Dict[int, HomogPoly] = {}
    for k in range(m.degree + 1):
        part = m.part(k)
        if part.is_zero():
            continue
        dmat = delta_matrix(Q, k + 2)
        sol, *_ = np.linalg.lstsq(dmat, part.coeffs, rcond=None)
        if rng is not None:
            noise = rng.normal(size=dmat.shape[1]) + 1j * rng.normal(size=dmat.shape[1])
            noise -= np.linalg.lstsq(dmat, dmat @ noise, rcond=None)[0]
            sol = sol + noise
        residual = float(np.linalg.norm(dmat @ sol - part.coeffs))
        if residual > max(tol_harm, 1e-12) * max(part.norm(), 1e-300):
            raise SolveFailure("no grade-%d preimage under delta_Q" % (k + 2))
        prev = t_grades.get(k + 2)
        t_grades[k + 2] = HomogPoly(k + 2, sol) if prev is None else prev + HomogPoly(k + 2, sol)
    T = Poly.from_grades(t_grades) if t_grades else Poly.zero()
    W = n - T
    G = Poly.zero()
    for parity_part in grade_split(W):
        if parity_part.is_zero():
            continue
        hom = homogenize_on_quadric(parity_part, Q)
        decomp = harmonic_decompose(hom, Q, tol_harm=tol_harm)
        grades: Dict[int, HomogPoly] = {}
        for k, comp in enumerate(decomp.components):
            if not comp.is_zero():
                grades[comp.degree] = comp
        if grades:
            G = G + Poly.from_grades(grades)
    P = T + G
    # residual checks: the operator equation exactly, the boundary match on samples
    for k in range(max(P.degree - 2, m.degree) + 1):
        lhs = apply_delta_q(P.part(k + 2), Q) if k + 2 <= P.degree else HomogPoly.zero(k)
        diff = lhs - m.part(k)
        if diff.norm() > 1e-7 * max(m.norm(), P.norm(), 1.0):
            raise SolveFailure("delta_Q(P) misses target at grade %d" % k)
    pts = surface_samples(Q, 200, np.random.default_rng(20200))
    gap = np.max(np.abs(P.eval_many(pts) - n.eval_many(pts)))
    scale = max(n.norm(), P.norm(), 1.0)
    if gap > 1e-6 * scale:
        raise SolveFailure("surface values miss the target by %.3e" % gap)
    return P
