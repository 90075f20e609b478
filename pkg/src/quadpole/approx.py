"""Least-squares approximation of sampled functions on the surface {Q = 1}.

A function known at quadrature nodes is split into its best-approximation
components from the harmonic space of each degree (its "bands").  Projection
happens in the discrete inner product of the rule, so the Pythagoras identity
between band norms and the residual is exact to roundoff, and any Parseval
defect measures only the tail beyond the cutoff degree.  Each band, being
harmonic, factors on the cone into a scale and lines, and the resulting
multipole reproduces the band exactly through the potential-derivative
construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from .algebra import (
    HomogPoly,
    QuadForm,
    QuadratureRule,
    TOL_DIV,
    grade_dim,
)
from .conic import EPS_CLUSTER
from .errors import (
    ConjugationPairingFailure,
    InsufficientQuadrature,
    NoEvaluationPoint,
    SolveFailure,
)
from .harmonic import delta_matrix
from .maxwell import maxwell_poly
from .sylvester import (
    Multipole,
    TOL_FACT,
    _FactorContext,
    canonical_parcelling,
    real_factor,
)

TOL_ZERO_BAND = 1e-12

_BASIS_CACHE: Dict[Tuple[bytes, int, int], Tuple[np.ndarray, np.ndarray]] = {}


def _surface_nodes(Q: QuadForm, rule: QuadratureRule) -> np.ndarray:
    return rule.sphere_points() @ Q.a_inv


def _band_basis(Q: QuadForm, k: int, rule: QuadratureRule
                ) -> Tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of the degree-k harmonic space at the rule's nodes.

    Returns (C, V): C holds coefficient columns, V the matching node-value
    columns, orthonormal in the weighted discrete inner product.  The kernel
    of the Laplacian matrix is orthonormalized by two QR passes on the
    weighted value columns; each column's phase is fixed so its largest
    coefficient entry is positive real, making the basis deterministic.
    """
    key = (Q.key, k, rule.exact_degree)
    cached = _BASIS_CACHE.get(key)
    if cached is not None:
        return cached
    dm = delta_matrix(Q, k)
    if dm.shape[0] == 0:
        kernel = np.eye(grade_dim(k), dtype=complex)
    else:
        _, s, vh = np.linalg.svd(dm)
        tol = max(dm.shape) * np.finfo(float).eps * (s[0] if s.size else 1.0)
        rank = int(np.sum(s > tol))
        kernel = vh[rank:].conj().T
    pts = _surface_nodes(Q, rule)
    vals = np.column_stack([
        HomogPoly(k, kernel[:, j]).eval_many(pts)
        for j in range(kernel.shape[1])
    ])
    sw = np.sqrt(rule.weights)
    q1, r1 = np.linalg.qr(vals * sw[:, None])
    q2, r2 = np.linalg.qr(q1)
    coeffs = np.linalg.solve((r2 @ r1).T, kernel.T).T
    values = q2 / sw[:, None]
    for j in range(coeffs.shape[1]):
        idx = int(np.argmax(np.abs(coeffs[:, j])))
        phase = coeffs[idx, j] / abs(coeffs[idx, j])
        coeffs[:, j] /= phase
        values[:, j] /= phase
    _BASIS_CACHE[key] = (coeffs, values)
    return coeffs, values


@dataclass(frozen=True, eq=False)
class BandDecomposition:
    """Best harmonic approximations per degree plus the residual they leave.

    bands[k] is the degree-k component; band_norms, residual_norm, and f_norm
    are all taken in the discrete inner product of the rule on {Q = 1}, so
    f_norm**2 == sum(band_norms**2) + residual_norm**2 to roundoff.
    """

    bands: Tuple[HomogPoly, ...]
    residual_norm: float
    band_norms: Tuple[float, ...]
    f_norm: float
    Q: QuadForm
    rule: QuadratureRule

    @property
    def d_max(self) -> int:
        return len(self.bands) - 1

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        out = np.zeros(pts.shape[0], dtype=complex)
        for band in self.bands:
            out = out + band.eval_many(pts)
        return out


def l2_project(f: Callable[[np.ndarray], np.ndarray], Q: QuadForm, d_max: int,
               rule: QuadratureRule) -> BandDecomposition:
    """Project a sampled function onto the harmonic bands of degree <= d_max.

    f is called once on the rule's nodes mapped to {Q = 1} and must return one
    value per node; no interpolation happens anywhere.  The rule must be exact
    to degree 2 * d_max so the band Gram matrices are exact.
    """
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    if rule.exact_degree < 2 * d_max:
        raise InsufficientQuadrature(
            "rule exact to %d cannot project up to degree %d"
            % (rule.exact_degree, d_max))
    pts = _surface_nodes(Q, rule)
    fvals = np.asarray(f(pts), dtype=complex).reshape(-1)
    if fvals.shape[0] != pts.shape[0]:
        raise ValueError("sampled function must return one value per node")
    w = rule.weights
    bands: List[HomogPoly] = []
    norms: List[float] = []
    acc = np.zeros_like(fvals)
    for k in range(d_max + 1):
        coeffs, values = _band_basis(Q, k, rule)
        comp = values.conj().T @ (w * fvals)
        bands.append(HomogPoly(k, coeffs @ comp))
        norms.append(float(np.linalg.norm(comp)))
        acc = acc + values @ comp
    resid = fvals - acc
    residual_norm = float(np.sqrt(max(np.real(np.dot(w, np.abs(resid) ** 2)),
                                      0.0)))
    f_norm = float(np.sqrt(max(np.real(np.dot(w, np.abs(fvals) ** 2)), 0.0)))
    return BandDecomposition(tuple(bands), residual_norm, tuple(norms), f_norm,
                             Q, rule)


def parseval_gap(f: Callable[[np.ndarray], np.ndarray],
                 decomp: BandDecomposition) -> float:
    """Energy of f not captured by the bands: <f, f> - sum of band norms^2.

    Non-negative up to roundoff, zero exactly when f lies in the projected
    space, and shrinking as d_max grows.
    """
    pts = _surface_nodes(decomp.Q, decomp.rule)
    fvals = np.asarray(f(pts), dtype=complex).reshape(-1)
    total = float(np.real(np.dot(decomp.rule.weights, np.abs(fvals) ** 2)))
    return total - float(sum(n * n for n in decomp.band_norms))


@dataclass(frozen=True, eq=False)
class SeriesMultipoles:
    """One multipole per band: a constant plus scaled line products.

    terms[k] is the band-k multipole (the zero multipole, with no lines and
    scale 0, when the band vanishes); scales[k] converts its potential-
    derivative polynomial back into the band; norms[k] is the ambient
    coefficient norm of the scaled line product, with norms[0] = |lam|.
    """

    lam: complex
    terms: Dict[int, Multipole]
    scales: Dict[int, complex]
    norms: Dict[int, float]

    @property
    def d_max(self) -> int:
        return max(self.norms) if self.norms else 0

    def band_poly(self, k: int, Q: QuadForm) -> HomogPoly:
        """The degree-k harmonic polynomial this band's multipole encodes."""
        if k == 0:
            return HomogPoly(0, [self.lam])
        w = self.terms[k]
        if w.degree == 0:
            return HomogPoly.zero(k)
        vectors = [np.asarray(line, dtype=complex) @ Q.b_inv
                   for line in w.lines]
        return maxwell_poly(Q, vectors) * self.scales[k]


def multipole_series(decomp: BandDecomposition, Q: QuadForm,
                     tol_zero: float = TOL_ZERO_BAND,
                     eps_cluster: float = EPS_CLUSTER,
                     tol_div: float = TOL_DIV,
                     tol_fact: float = TOL_FACT) -> SeriesMultipoles:
    """Factor every band of a decomposition into one multipole.

    Real bands over a definite real form go through the unique real
    factorization; otherwise the deterministic greedy parcelling is used.
    Bands below tol_zero * f_norm relative norm become the zero multipole.
    Each nonzero multipole is checked to reproduce its band through the
    potential-derivative construction before being returned.
    """
    scale_ref = max(decomp.f_norm, 1.0)
    imag_max = max((float(np.max(np.abs(b.coeffs.imag), initial=0.0))
                    for b in decomp.bands), default=0.0)
    real_route = (imag_max <= 1e-12 * scale_ref and Q.is_real
                  and Q.signature in (-3, 3))
    lam = complex(decomp.bands[0].coeffs[0])
    terms: Dict[int, Multipole] = {}
    scales: Dict[int, complex] = {}
    norms: Dict[int, float] = {0: abs(lam)}
    for k in range(1, decomp.d_max + 1):
        fk = decomp.bands[k]
        if decomp.band_norms[k] <= tol_zero * scale_ref:
            terms[k] = Multipole(0j, ())
            scales[k] = 0j
            norms[k] = 0.0
            continue
        # a band extracted from samples carries absolute noise at machine
        # precision relative to f_norm, so neither the cone division nor the
        # root clustering can be certified below that floor; an m-fold cone
        # root splits into a bunch of radius floor**(1/m), so the clustering
        # scale is escalated until the reproduction gate passes
        floor = np.finfo(float).eps * scale_ref / decomp.band_norms[k]
        band_tol_div = max(tol_div, 1e3 * floor)
        w, c, best = None, 0j, np.inf
        last_err = None
        eps = eps_cluster
        while eps <= 0.2:
            try:
                if real_route:
                    fact = real_factor(fk, Q, eps_cluster=eps,
                                       tol_div=band_tol_div,
                                       tol_fact=tol_fact)
                else:
                    ctx = _FactorContext(fk, Q, eps_cluster=eps,
                                         tol_div=band_tol_div)
                    fact = ctx.factor(
                        canonical_parcelling(ctx.multiplicities),
                        tol_fact=tol_fact)
                cand = fact.multipole()
                vectors = [np.asarray(line, dtype=complex) @ Q.b_inv
                           for line in cand.lines]
                model = maxwell_poly(Q, vectors)
                cc = complex(np.vdot(model.coeffs, fk.coeffs)
                             / np.vdot(model.coeffs, model.coeffs))
                defect = (fk - model * cc).norm()
                if defect < best:
                    w, c, best = cand, cc, defect
                if defect <= 1e-12 * fk.norm():
                    break
            except (SolveFailure, ConjugationPairingFailure,
                    NoEvaluationPoint) as exc:
                last_err = exc
            eps *= 10.0
        if w is None:
            raise last_err
        if best > 1e-7 * fk.norm():
            raise SolveFailure("band %d multipole deviates by %.3e relative"
                               % (k, best / fk.norm()))
        terms[k] = w
        scales[k] = c
        norms[k] = float(w.product_poly().norm())
    return SeriesMultipoles(lam, terms, scales, norms)


def corollary20_stat(s: SeriesMultipoles) -> List[float]:
    """Partial sums of the squared multipole norms, band by band.

    The sequence is the raw diagnostic a weighted summability bound would
    act on; for a polynomial input it becomes constant past the degree.
    """
    rho_sq = [s.norms[k] ** 2 for k in sorted(s.norms)]
    return [float(v) for v in np.cumsum(rho_sq)]
