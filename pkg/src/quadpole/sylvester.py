"""Factorization of polynomials on a quadric cone into products of lines.

A degree-d polynomial P that is not a multiple of Q meets the conic {Q = 0}
in a divisor of degree 2d.  Splitting that divisor into d pieces of weight 2
(a parcelling) selects d lines, secants for split pieces and tangents for
doubled points, and then P = lambda * prod(L) + Q * R holds with lambda fixed
by evaluation at any conic point away from the divisor and R unique for the
parcelling.  Real P with definite real Q admit exactly one parcelling that is
stable under conjugation, which yields the distinguished real factorization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .algebra import (
    HomogPoly,
    QuadForm,
    divide_by_quadric,
    double_factorial,
    poly_mul,
    TOL_DIV,
)
from .conic import (
    BinaryForm,
    ConicParam,
    EPS_CLUSTER,
    ProjPoint1,
    ProjPoint2,
    RootCluster,
    binary_discriminant,
    chordal,
    conic_param,
    discriminant_scale,
    line_through,
    restrict_to_conic,
    roots_projective,
)
from .errors import (
    ConjugationPairingFailure,
    DivisibleByQ,
    NoEvaluationPoint,
    NotDefinite,
    NotDivisible,
    NotReal,
    OddTotal,
    SolveFailure,
)

TOL_FACT = 1e-8
TOL_DISC = 1e-9

_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def count_parcellings(d: int) -> int:
    """Number of parcellings of 2d simple points into d pairs: (2d-1)!!."""
    if d < 0:
        raise ValueError("d must be non-negative")
    return double_factorial(2 * d - 1)


@dataclass(frozen=True)
class GeneralizedParcelling:
    """Multiset of weight-2 pieces over cluster indices; (i, i) doubles a point."""

    pieces: Tuple[Tuple[int, int], ...]

    @property
    def d(self) -> int:
        return len(self.pieces)

    def multiplicity_use(self, n_clusters: int) -> List[int]:
        use = [0] * n_clusters
        for i, j in self.pieces:
            use[i] += 1
            use[j] += 1
        return use


def enumerate_parcellings(multiplicities: Sequence[int]) -> List[GeneralizedParcelling]:
    """All splittings of the multiplicity vector into weight-2 pieces.

    Pieces are generated as a nondecreasing sequence of index pairs, so every
    multiset appears exactly once.  Raises OddTotal when the multiplicities
    sum to an odd number.
    """
    mults = [int(m) for m in multiplicities]
    if any(m < 0 for m in mults):
        raise ValueError("multiplicities must be non-negative")
    if sum(mults) % 2:
        raise OddTotal("multiplicities sum to %d" % sum(mults))
    out: List[GeneralizedParcelling] = []
    pieces: List[Tuple[int, int]] = []

    def rec(min_piece: Tuple[int, int]) -> None:
        i = next((a for a, m in enumerate(mults) if m > 0), None)
        if i is None:
            out.append(GeneralizedParcelling(tuple(pieces)))
            return
        cands: List[Tuple[int, int]] = []
        if mults[i] >= 2:
            cands.append((i, i))
        for j in range(i + 1, len(mults)):
            if mults[j] > 0:
                cands.append((i, j))
        for piece in cands:
            if piece < min_piece:
                continue
            mults[piece[0]] -= 1
            mults[piece[1]] -= 1
            pieces.append(piece)
            rec(piece)
            pieces.pop()
            mults[piece[0]] += 1
            mults[piece[1]] += 1

    rec((-1, -1))
    return out


def canonical_parcelling(multiplicities: Sequence[int]) -> GeneralizedParcelling:
    """Greedy pairing: repeatedly join the first two clusters with remaining weight.

    For simple roots this is the base pairing {{1,2},{3,4},...}; a cluster
    doubles with itself only when it is the last one left.
    """
    rem = [int(m) for m in multiplicities]
    if sum(rem) % 2:
        raise OddTotal("multiplicities sum to %d" % sum(rem))
    pieces: List[Tuple[int, int]] = []
    while True:
        live = [i for i, m in enumerate(rem) if m > 0]
        if not live:
            break
        if len(live) == 1:
            pieces.append((live[0], live[0]))
            rem[live[0]] -= 2
        else:
            i, j = live[0], live[1]
            pieces.append((i, j))
            rem[i] -= 1
            rem[j] -= 1
    return GeneralizedParcelling(tuple(sorted(pieces)))


def _line_key(coeffs) -> Tuple[float, ...]:
    return tuple(float(v) for c in coeffs for v in (c.real, c.imag))


@dataclass(frozen=True)
class Multipole:
    """Scale and normalized, canonically ordered line coefficients.

    Two factorizations whose lines agree up to order and scaling produce the
    same Multipole: each line is scaled so its max-modulus coefficient is 1,
    the freed scalars are absorbed into the scale, and lines are sorted.
    """

    scale: complex
    lines: Tuple[Tuple[complex, complex, complex], ...]

    @classmethod
    def from_parts(cls, lam: complex, line_polys: Sequence[HomogPoly]) -> "Multipole":
        scale = complex(lam)
        vecs = []
        for L in line_polys:
            w = np.asarray(L.coeffs, dtype=complex)
            j = int(np.argmax(np.abs(w)))
            scale *= w[j]
            vecs.append(tuple(complex(v) for v in w / w[j]))
        vecs.sort(key=_line_key)
        return cls(scale, tuple(vecs))

    @property
    def degree(self) -> int:
        return len(self.lines)

    def product_poly(self) -> HomogPoly:
        out = HomogPoly(0, [self.scale])
        for w in self.lines:
            out = poly_mul(out, HomogPoly(1, w))
        return out

    def isclose(self, other: "Multipole", tol: float = 1e-8) -> bool:
        if self.degree != other.degree:
            return False
        if abs(self.scale - other.scale) > tol * (1.0 + abs(self.scale)):
            return False
        for a, b in zip(self.lines, other.lines):
            if max(abs(x - y) for x, y in zip(a, b)) > tol:
                return False
        return True


@dataclass
class MultipoleFactorization:
    """One parcelling's factorization P = lambda * prod(lines) + Q * remainder."""

    lam: complex
    lines: List[HomogPoly]
    remainder: HomogPoly
    parcelling: GeneralizedParcelling
    ill_conditioned: bool = False

    @property
    def degree(self) -> int:
        return len(self.lines)

    def product(self) -> HomogPoly:
        out = HomogPoly(0, [self.lam])
        for L in self.lines:
            out = poly_mul(out, L)
        return out

    def reconstruct(self, Q: QuadForm) -> HomogPoly:
        out = self.product()
        if self.remainder.degree == self.degree - 2 and not self.remainder.is_zero():
            out = out + poly_mul(Q.poly(), self.remainder)
        return out

    def multipole(self) -> Multipole:
        return Multipole.from_parts(self.lam, self.lines)

    def is_real(self, tol: float = 1e-9) -> bool:
        vals = [abs(self.lam.imag)]
        vals.extend(float(np.max(np.abs(L.coeffs.imag), initial=0.0)) for L in self.lines)
        vals.append(float(np.max(np.abs(self.remainder.coeffs.imag), initial=0.0)))
        scale = max(abs(self.lam), 1.0)
        return max(vals) <= tol * scale


class _FactorContext:
    """Shared data for factoring one P on one quadric: restriction, roots, lines."""

    def __init__(self, P: HomogPoly, Q: QuadForm, eps_cluster: float = EPS_CLUSTER,
                 tol_div: float = TOL_DIV):
        if P.degree < 1:
            raise ValueError("degree must be at least 1")
        if P.is_zero():
            raise ValueError("cannot factor the zero polynomial")
        self.P = P
        self.Q = Q
        self.eps_cluster = eps_cluster
        self.tol_div = tol_div
        if P.degree >= 2:
            try:
                divide_by_quadric(P, Q, tol_div=tol_div)
            except NotDivisible:
                pass
            else:
                raise DivisibleByQ("input is a multiple of the quadratic form")
        self.param: ConicParam = conic_param(Q)
        self.b: BinaryForm = restrict_to_conic(P, self.param)
        self.clusters: List[RootCluster] = roots_projective(self.b, eps_cluster=eps_cluster)
        self.points: List[ProjPoint2] = [self.param.point(c.point) for c in self.clusters]
        self.ill_conditioned = False
        for i in range(len(self.clusters)):
            for j in range(i + 1, len(self.clusters)):
                if chordal(self.clusters[i].point, self.clusters[j].point) < 10 * eps_cluster:
                    self.ill_conditioned = True
        self._eval_u: Optional[ProjPoint1] = None

    @property
    def multiplicities(self) -> List[int]:
        return [c.multiplicity for c in self.clusters]

    def evaluation_point(self) -> ProjPoint1:
        """First golden-ratio trial point clear of the divisor with |b| not small."""
        if self._eval_u is not None:
            return self._eval_u
        max_c = float(np.max(np.abs(self.b.coeffs)))
        power = 1.0
        for _ in range(64):
            u = ProjPoint1([1.0, power])
            power *= _GOLDEN
            if min((chordal(u, c.point) for c in self.clusters), default=1.0) \
                    <= 10 * self.eps_cluster:
                continue
            if abs(self.b.eval_point(u)) <= 1e-4 * max_c:
                continue
            self._eval_u = u
            return u
        raise NoEvaluationPoint("no conic evaluation point cleared the thresholds")

    def lines_for(self, parcelling: GeneralizedParcelling) -> List[HomogPoly]:
        use = parcelling.multiplicity_use(len(self.clusters))
        if use != self.multiplicities:
            raise ValueError("parcelling does not match the root multiplicities")
        lines = []
        for i, j in parcelling.pieces:
            raw = line_through(self.points[i], self.points[j], self.Q)
            w = raw.coeffs
            w = w / w[int(np.argmax(np.abs(w)))]
            lines.append(HomogPoly(1, w))
        return lines

    def factor(self, parcelling: GeneralizedParcelling,
               tol_fact: float = TOL_FACT) -> MultipoleFactorization:
        lines = self.lines_for(parcelling)
        u = self.evaluation_point()
        q = self.param.point(u).coords
        denom = 1.0 + 0.0j
        for L in lines:
            denom *= L(q)
        if denom == 0:
            raise NoEvaluationPoint("evaluation point lies on a factor line")
        lam = self.P(q) / denom
        prod = HomogPoly(0, [lam])
        for L in lines:
            prod = poly_mul(prod, L)
        diff = self.P - prod
        pnorm = self.P.norm()
        if self.P.degree >= 2:
            if diff.norm() <= self.tol_div * pnorm:
                remainder = HomogPoly.zero(self.P.degree - 2)
            else:
                div_tol = self.tol_div if not self.ill_conditioned else 1e-4
                try:
                    remainder = divide_by_quadric(diff, self.Q, tol_div=div_tol)
                except NotDivisible as exc:
                    raise SolveFailure("factorization defect is not a multiple of Q: %s"
                                       % exc) from None
        else:
            remainder = HomogPoly.zero(0)
            if diff.norm() > tol_fact * pnorm:
                raise SolveFailure("linear input is not proportional to its line")
        fact = MultipoleFactorization(lam, lines, remainder, parcelling,
                                      ill_conditioned=self.ill_conditioned)
        if not self.ill_conditioned:
            res = (fact.reconstruct(self.Q) - self.P).norm()
            if res > tol_fact * pnorm:
                raise SolveFailure("factorization residual %.3e exceeds %.3e"
                                   % (res, tol_fact * pnorm))
        return fact

    def conjugation(self, require_free: bool) -> List[int]:
        """Index map pairing each cluster with the conjugate conic point's cluster.

        Conjugation acts on the surface points, not the parameter coordinates:
        the partner of a cluster is the one whose conic point is proportional
        to the componentwise conjugate.
        """
        tol = 10 * self.eps_cluster
        sigma: List[int] = []
        for i, cl in enumerate(self.clusters):
            target = self.points[i].conj()
            dists = [chordal(target, pt) for pt in self.points]
            j = int(np.argmin(dists))
            if dists[j] > tol:
                raise ConjugationPairingFailure(
                    "cluster %d has no conjugate partner within tolerance" % i)
            if self.clusters[j].multiplicity != cl.multiplicity:
                raise ConjugationPairingFailure(
                    "conjugate clusters %d, %d have different multiplicities" % (i, j))
            sigma.append(j)
        for i, j in enumerate(sigma):
            if sigma[j] != i:
                raise ConjugationPairingFailure("conjugation map is not an involution")
            if require_free and j == i:
                raise ConjugationPairingFailure(
                    "cluster %d is real; conjugation must act freely" % i)
        return sigma


def _check_real_input(P: HomogPoly, tol: float = 1e-12) -> None:
    if float(np.max(np.abs(P.coeffs.imag), initial=0.0)) > tol * max(P.norm(), 1e-300):
        raise NotReal("polynomial has non-real coefficients")


def _realified(fact: MultipoleFactorization, P: HomogPoly, Q: QuadForm,
               tol_fact: float) -> MultipoleFactorization:
    """Drop imaginary round-off from a factorization that must be real."""
    scale = max(abs(fact.lam), 1.0)
    drift = [abs(fact.lam.imag) / scale]
    drift.extend(float(np.max(np.abs(L.coeffs.imag), initial=0.0)) for L in fact.lines)
    drift.append(float(np.max(np.abs(fact.remainder.coeffs.imag), initial=0.0))
                 / max(fact.remainder.norm(), 1.0))
    if max(drift) > 1e-6:
        raise ConjugationPairingFailure(
            "factorization expected to be real has imaginary drift %.3e" % max(drift))
    real_fact = MultipoleFactorization(
        complex(fact.lam.real),
        [HomogPoly(1, L.coeffs.real.astype(complex)) for L in fact.lines],
        HomogPoly(fact.remainder.degree, fact.remainder.coeffs.real.astype(complex)),
        fact.parcelling,
        ill_conditioned=fact.ill_conditioned,
    )
    if not fact.ill_conditioned:
        res = (real_fact.reconstruct(Q) - P).norm()
        if res > tol_fact * P.norm():
            raise SolveFailure("real factorization residual %.3e too large" % res)
    return real_fact


def factor_on_quadric(P: HomogPoly, Q: QuadForm, parcelling: GeneralizedParcelling,
                      eps_cluster: float = EPS_CLUSTER, tol_div: float = TOL_DIV,
                      tol_fact: float = TOL_FACT) -> MultipoleFactorization:
    """Factor P as lambda * prod(lines) + Q * R for one chosen parcelling."""
    ctx = _FactorContext(P, Q, eps_cluster=eps_cluster, tol_div=tol_div)
    return ctx.factor(parcelling, tol_fact=tol_fact)


def all_factorizations(P: HomogPoly, Q: QuadForm, eps_cluster: float = EPS_CLUSTER,
                       tol_div: float = TOL_DIV,
                       tol_fact: float = TOL_FACT) -> List[MultipoleFactorization]:
    """Factorizations for every parcelling, in enumeration order."""
    ctx = _FactorContext(P, Q, eps_cluster=eps_cluster, tol_div=tol_div)
    return [ctx.factor(par, tol_fact=tol_fact)
            for par in enumerate_parcellings(ctx.multiplicities)]


def real_factor(P: HomogPoly, Q: QuadForm, eps_cluster: float = EPS_CLUSTER,
                tol_div: float = TOL_DIV,
                tol_fact: float = TOL_FACT) -> MultipoleFactorization:
    """The unique real factorization of real P over a definite real Q.

    The conic of a definite form has no real points, so conjugation acts
    freely on the intersection divisor and pairing every cluster with its
    conjugate is the only conjugation-stable parcelling.
    """
    _check_real_input(P)
    if not Q.is_real or Q.signature not in (-3, 3):
        raise NotDefinite("real factorization needs a definite real form")
    ctx = _FactorContext(P, Q, eps_cluster=eps_cluster, tol_div=tol_div)
    sigma = ctx.conjugation(require_free=True)
    pieces: List[Tuple[int, int]] = []
    for i, j in enumerate(sigma):
        if i < j:
            pieces.extend([(i, j)] * ctx.clusters[i].multiplicity)
    parcelling = GeneralizedParcelling(tuple(sorted(pieces)))
    fact = ctx.factor(parcelling, tol_fact=tol_fact)
    return _realified(fact, P, Q, tol_fact)


def real_factorizations(P: HomogPoly, Q: QuadForm, eps_cluster: float = EPS_CLUSTER,
                        tol_div: float = TOL_DIV,
                        tol_fact: float = TOL_FACT) -> List[MultipoleFactorization]:
    """All factorizations with real lines: one per conjugation-stable parcelling.

    Conjugate cluster pairs are forced together; only the clusters at real
    parameters leave freedom, so the count is the parcelling count of the
    multiplicity vector restricted to the real clusters.
    """
    _check_real_input(P)
    if not Q.is_real:
        raise NotReal("quadratic form must be real")
    ctx = _FactorContext(P, Q, eps_cluster=eps_cluster, tol_div=tol_div)
    sigma = ctx.conjugation(require_free=False)
    out = []
    for par in enumerate_parcellings(ctx.multiplicities):
        stable = all(tuple(sorted((sigma[i], sigma[j]))) == (i, j)
                     for i, j in par.pieces)
        if stable:
            fact = ctx.factor(par, tol_fact=tol_fact)
            out.append(_realified(fact, P, Q, tol_fact))
    return out


def intersection_clusters(P: HomogPoly, Q: QuadForm,
                          eps_cluster: float = EPS_CLUSTER) -> List[RootCluster]:
    """Clusters of the divisor P meets on {Q = 0}, in canonical order."""
    param = conic_param(Q)
    b = restrict_to_conic(P, param)
    if not np.any(b.coeffs):
        raise DivisibleByQ("restriction to the conic vanishes identically")
    return roots_projective(b, eps_cluster=eps_cluster)


def in_discriminant(P: HomogPoly, Q: QuadForm, tol_disc: float = TOL_DISC,
                    eps_cluster: float = EPS_CLUSTER,
                    tol_div: float = TOL_DIV) -> bool:
    """Whether the intersection divisor of P on {Q = 0} has a multiple point.

    The divisor has a multiple point exactly when the discriminant resultant
    of the conic restriction vanishes.  Numerically the decision is made by
    root clustering at resolution max(10 * eps_cluster, 1e-5), which stays
    reliable at every degree; the normalized resultant magnitude corroborates
    it at moderate degree but its scale collapses as the degree grows, so a
    disagreement is resolved in favor of the clusters.
    """
    if P.degree >= 2:
        try:
            divide_by_quadric(P, Q, tol_div=tol_div)
        except NotDivisible:
            pass
        else:
            raise DivisibleByQ("discriminant test needs P not divisible by Q")
    b = restrict_to_conic(P, conic_param(Q))
    max_c = float(np.max(np.abs(b.coeffs)))
    if max_c == 0.0:
        raise DivisibleByQ("restriction to the conic vanishes identically")
    eps_mult = max(10.0 * eps_cluster, 1e-5)
    clusters = roots_projective(b, eps_cluster=eps_mult)
    multiple = any(c.multiplicity >= 2 for c in clusters)
    bn = BinaryForm(b.degree, b.coeffs / max_c)
    small = abs(binary_discriminant(bn)) <= tol_disc * discriminant_scale(bn)
    if multiple and not small and b.degree <= 8:
        raise SolveFailure("cluster and resultant discriminant signals disagree")
    return multiple
