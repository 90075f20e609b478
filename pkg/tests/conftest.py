"""Shared fixtures and numeric helpers for the test suite."""

import numpy as np
import pytest

from quadpole import HomogPoly, Poly, QuadForm, poly_mul
from quadpole.algebra import grade_dim


@pytest.fixture(scope="session")
def sphere():
    return QuadForm(np.eye(3))


@pytest.fixture(scope="session")
def hyperboloid():
    return QuadForm(np.diag([1.0, 1.0, -1.0]))


def random_homog(d, rng, real=False):
    """Random homogeneous polynomial with standard-normal coefficients."""
    n = grade_dim(d)
    c = rng.standard_normal(n)
    if not real:
        c = c + 1j * rng.standard_normal(n)
    return HomogPoly(d, c)


def random_poly(d, rng, real=False):
    """Random inhomogeneous polynomial of degree d."""
    return Poly.from_grades({k: random_homog(k, rng, real=real)
                             for k in range(d + 1)})


def compose_linear(P, U):
    """The polynomial x -> P(x @ U), built by expanding each monomial."""
    U = np.asarray(U, dtype=complex)
    lins = [HomogPoly(1, U[:, i]) for i in range(3)]

    def _homog(h):
        from quadpole.algebra import monomials
        out = HomogPoly.zero(h.degree)
        for (a, b, c), coeff in zip(monomials(h.degree), h.coeffs):
            if coeff == 0:
                continue
            term = HomogPoly(0, [coeff])
            for lin, e in zip(lins, (a, b, c)):
                for _ in range(e):
                    term = poly_mul(term, lin)
            out = out + term
        return out

    if isinstance(P, HomogPoly):
        return _homog(P)
    return Poly([_homog(h) for h in P.parts])


def q_orthogonal(Q, rng, real=False, scale=0.5):
    """Random U with U @ B @ U.T = B, via the exponential of K @ inv(B)."""
    from scipy.linalg import expm
    k = rng.standard_normal((3, 3))
    if not real:
        k = k + 1j * rng.standard_normal((3, 3))
    k = scale * (k - k.T)
    U = expm(k @ np.linalg.inv(Q.B))
    assert np.linalg.norm(U @ Q.B @ U.T - Q.B) < 1e-9
    return U
