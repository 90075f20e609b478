"""Full multipole decomposition of polynomial functions on {Q = 1}.

After splitting off parities and homogenizing with powers of Q (free on the
surface, where Q = 1), the top homogeneous part factors into a scaled line
product plus Q times a remainder, and the remainder recurses two degrees
lower.  The result is a constant plus one multipole per degree.  A generic
degree-d input admits up to prod_{k=1..d} (2k-1)!! distinct sequences; real
inputs over a positive definite form have exactly one with all pieces real.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import (
    HomogPoly,
    Poly,
    QuadForm,
    divide_by_quadric,
    double_factorial,
    grade_split,
    homogenize_on_quadric,
    TOL_DIV,
)
from .conic import EPS_CLUSTER
from .errors import (
    EnumerationLimit,
    InvalidPartition,
    NotDivisible,
    StrategyMismatch,
)
from .sylvester import (
    Multipole,
    TOL_FACT,
    _FactorContext,
    canonical_parcelling,
    enumerate_parcellings,
    real_factor,
)

ENUMERATION_CAP = 10 ** 6

Strategy = ("canonical", "enumerate", "real_unique")


@dataclass
class MultipoleSequence:
    """Constant plus one multipole per degree: f = lam + sum_k prod_l L_{k,l}."""

    lam: complex
    terms: Dict[int, Multipole] = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return max(self.terms, default=0)

    def is_real(self, tol: float = 1e-9) -> bool:
        worst = abs(self.lam.imag)
        for mp in self.terms.values():
            worst = max(worst, abs(mp.scale.imag))
            for w in mp.lines:
                worst = max(worst, max(abs(c.imag) for c in w))
        return worst <= tol * max(1.0, abs(self.lam))


@dataclass(frozen=True)
class RepresentationCount:
    d: int
    bound: int


def representation_bound(d: int) -> RepresentationCount:
    """Upper bound prod_{k=1..d} (2k-1)!! on the number of sequences."""
    if d < 0:
        raise ValueError("d must be non-negative")
    bound = 1
    for k in range(1, d + 1):
        bound *= double_factorial(2 * k - 1)
    return RepresentationCount(d, bound)


def _strip_q_powers(h: HomogPoly, Q: QuadForm,
                    tol_div: float) -> Tuple[HomogPoly, int]:
    power = 0
    while h.degree >= 2 and not h.is_zero():
        try:
            h = divide_by_quadric(h, Q, tol_div=tol_div)
        except NotDivisible:
            break
        power += 1
    return h, power


def _parity_input(P: Poly, Q: QuadForm, parity: int) -> Optional[HomogPoly]:
    part = grade_split(P)[parity]
    if part.is_zero():
        return None
    return homogenize_on_quadric(part, Q)


def _chain_once(h: HomogPoly, Q: QuadForm, strategy: str, eps_cluster: float,
                tol_div: float, tol_fact: float
                ) -> Tuple[complex, Dict[int, Multipole]]:
    lam = 0j
    terms: Dict[int, Multipole] = {}
    cur = h
    while not cur.is_zero():
        cur, _ = _strip_q_powers(cur, Q, tol_div)
        if cur.is_zero():
            break
        if cur.degree == 0:
            lam += complex(cur.coeffs[0])
            break
        if strategy == "real_unique":
            fact = real_factor(cur, Q, eps_cluster=eps_cluster,
                               tol_div=tol_div, tol_fact=tol_fact)
        else:
            ctx = _FactorContext(cur, Q, eps_cluster=eps_cluster,
                                 tol_div=tol_div)
            fact = ctx.factor(canonical_parcelling(ctx.multiplicities),
                              tol_fact=tol_fact)
        terms[cur.degree] = Multipole.from_parts(fact.lam, fact.lines)
        cur = fact.remainder
    return lam, terms


def _chain_all(h: HomogPoly, Q: QuadForm, eps_cluster: float, tol_div: float,
               tol_fact: float, budget: List[int]
               ) -> List[Tuple[complex, Dict[int, Multipole]]]:
    cur, _ = _strip_q_powers(h, Q, tol_div)
    if cur.is_zero():
        return [(0j, {})]
    if cur.degree == 0:
        return [(complex(cur.coeffs[0]), {})]
    ctx = _FactorContext(cur, Q, eps_cluster=eps_cluster, tol_div=tol_div)
    out: List[Tuple[complex, Dict[int, Multipole]]] = []
    for par in enumerate_parcellings(ctx.multiplicities):
        fact = ctx.factor(par, tol_fact=tol_fact)
        mp = Multipole.from_parts(fact.lam, fact.lines)
        for lam, terms in _chain_all(fact.remainder, Q, eps_cluster, tol_div,
                                     tol_fact, budget):
            out.append((lam, {cur.degree: mp, **terms}))
            budget[0] -= 1
            if budget[0] < 0:
                raise EnumerationLimit("more than %d sequences" %
                                       ENUMERATION_CAP)
    return out


def full_decompose(P: Union[Poly, HomogPoly], Q: QuadForm,
                   strategy: str = "canonical",
                   eps_cluster: float = EPS_CLUSTER, tol_div: float = TOL_DIV,
                   tol_fact: float = TOL_FACT
                   ) -> Union[MultipoleSequence, List[MultipoleSequence]]:
    """Decompose a polynomial function on {Q = 1} into multipole terms.

    canonical picks one deterministic parcelling per level (greedy pairing of
    the sorted root clusters), enumerate fans out over every parcelling at
    every level and returns the full list, and real_unique forces the
    conjugation-stable choice, which exists and is unique for real input over
    a positive definite real form.
    """
    if isinstance(P, HomogPoly):
        P = Poly.from_homog(P)
    if strategy not in Strategy:
        raise ValueError("unknown strategy %r" % (strategy,))
    if strategy == "real_unique":
        if not Q.is_real or Q.signature != 3:
            raise StrategyMismatch(
                "real_unique needs a positive definite real form")
        worst = max((float(np.max(np.abs(g.coeffs.imag), initial=0.0))
                     for g in P.parts), default=0.0)
        if worst > 1e-12 * max(P.norm(), 1e-300):
            raise StrategyMismatch("real_unique needs real coefficients")
    parts = [_parity_input(P, Q, parity) for parity in (0, 1)]
    if strategy in ("canonical", "real_unique"):
        lam = 0j
        terms: Dict[int, Multipole] = {}
        for h in parts:
            if h is None:
                continue
            lam_h, terms_h = _chain_once(h, Q, strategy, eps_cluster, tol_div,
                                         tol_fact)
            lam += lam_h
            terms.update(terms_h)
        return MultipoleSequence(lam, terms)
    budget = [ENUMERATION_CAP]
    chains = []
    for h in parts:
        if h is None:
            chains.append([(0j, {})])
        else:
            chains.append(_chain_all(h, Q, eps_cluster, tol_div, tol_fact,
                                     budget))
    if len(chains[0]) * len(chains[1]) > ENUMERATION_CAP:
        raise EnumerationLimit("more than %d sequences" % ENUMERATION_CAP)
    out = []
    for lam_e, terms_e in chains[0]:
        for lam_o, terms_o in chains[1]:
            out.append(MultipoleSequence(lam_e + lam_o,
                                         {**terms_e, **terms_o}))
    return out


def reconstruct(seq: MultipoleSequence, Q: QuadForm):
    """Surface evaluator and expanded Poly for a multipole sequence.

    The callable evaluates lam + sum_k prod_l L_{k,l} literally at point rows;
    the Poly is the expanded sum of the line products.  They agree everywhere,
    and match the decomposed input on {Q = 1}.
    """
    rep = Poly.constant(seq.lam)
    for mp in seq.terms.values():
        rep = rep + Poly.from_homog(mp.product_poly())

    def evaluate(points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=complex))
        vals = np.full(pts.shape[0], complex(seq.lam))
        for mp in seq.terms.values():
            prod = np.full(pts.shape[0], complex(mp.scale))
            for w in mp.lines:
                prod = prod * (pts @ np.asarray(w, dtype=complex))
            vals = vals + prod
        return vals

    return evaluate, rep


def lemma9_gap(l: int, degrees: Sequence[int]) -> int:
    """Dimension gap between degree-d functions on a degree-l surface and
    products with factor degrees `degrees`.

    Each term is the dimension of degree-k polynomials restricted to the
    surface: (l/2)(2k - l + 3) once k >= l, and the unrestricted count
    (k+1)(k+2)/2 below that (no multiple of the defining form exists in
    degree < l, so restriction is injective there).  The gap is zero for
    every split when l <= 2 and conjecturally positive whenever l >= 3 and
    there are at least two factors.
    """
    ds = [int(x) for x in degrees]
    if l < 1 or not ds or any(x < 1 for x in ds):
        raise InvalidPartition("need l >= 1 and positive factor degrees")

    def dim(k: int) -> int:
        if k < l:
            return (k + 1) * (k + 2) // 2
        return l * (2 * k - l + 3) // 2

    d = sum(ds)
    s = len(ds)
    return dim(d) - sum(dim(x) for x in ds) + (s - 1)
