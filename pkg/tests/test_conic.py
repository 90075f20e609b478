"""Conic parameterization, binary forms, and projective root clustering."""

import numpy as np
import pytest

from quadpole import (
    BinaryForm,
    HomogPoly,
    ProjPoint1,
    ProjPoint2,
    QuadForm,
    ZeroForm,
    chordal,
    conic_param,
    line_through,
    poly_eval,
    restrict_to_conic,
    roots_projective,
)
from quadpole.conic import binary_discriminant, conj_point

from conftest import random_homog


def form_from_roots(root_pairs, degree=None):
    """Binary form with prescribed projective roots (u0:u1)."""
    out = BinaryForm(0, [1.0])
    for (a0, a1), m in root_pairs:
        lin = BinaryForm(1, [-a0, a1])
        for _ in range(m):
            out = out.mul(lin)
    return out


class TestProjPoints:
    def test_normalization(self):
        p = ProjPoint1([2j, 4])
        assert np.max(np.abs(p.coords)) == pytest.approx(1)
        idx = int(np.argmax(np.abs(p.coords)))
        assert p.coords[idx] == pytest.approx(1)

    def test_normalization_idempotent(self):
        p = ProjPoint2([3, -2j, 1 + 1j])
        q = ProjPoint2(p.coords)
        assert np.allclose(p.coords, q.coords)

    def test_conj_involution(self):
        rng = np.random.default_rng(0)
        for _ in range(5):
            p = ProjPoint2(rng.standard_normal(3)
                           + 1j * rng.standard_normal(3))
            assert np.allclose(p.conj().conj().coords, p.coords)

    def test_conj_point_examples(self):
        p = conj_point(ProjPoint2([1j, 0, 1]))
        assert np.allclose(p.coords, ProjPoint2([-1j, 0, 1]).coords)
        real = ProjPoint2([1, 2, 3])
        assert np.allclose(conj_point(real).coords, real.coords)

    def test_chordal_metric(self):
        a = ProjPoint1([1, 0])
        b = ProjPoint1([0, 1])
        assert chordal(a, b) == pytest.approx(1.0)
        assert chordal(a, a) == pytest.approx(0.0)
        # scale invariance
        c = ProjPoint1([5j, 5j])
        d = ProjPoint1([1, 1])
        assert chordal(c, d) < 1e-12


class TestConicParam:
    def test_sphere_alphas(self, sphere):
        param = conic_param(sphere)
        pt = param.point(ProjPoint1([1, 1]))
        # alpha([1:1]) = (0, 2i, 2) up to normalization
        expect = ProjPoint2([0, 2j, 2])
        assert np.allclose(pt.coords, expect.coords, atol=1e-12)

    def test_points_on_conic(self, sphere, hyperboloid):
        rng = np.random.default_rng(1)
        for Q in (sphere, hyperboloid):
            param = conic_param(Q)
            for _ in range(20):
                u = ProjPoint1(rng.standard_normal(2)
                               + 1j * rng.standard_normal(2))
                pt = param.point(u)
                assert abs(Q(pt.coords)) < 1e-10

    def test_random_complex_form(self):
        rng = np.random.default_rng(2)
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        b = b + b.T
        Q = QuadForm(b)
        param = conic_param(Q)
        for _ in range(10):
            u = ProjPoint1(rng.standard_normal(2)
                           + 1j * rng.standard_normal(2))
            pt = param.point(u)
            assert abs(Q(pt.coords)) < 1e-9 * np.linalg.norm(b)


class TestRestrictToConic:
    def test_x_restricts_to_difference_of_squares(self, sphere):
        param = conic_param(sphere)
        x = HomogPoly(1, [1, 0, 0])
        b = restrict_to_conic(x, param)
        # i(u0^2 - u1^2): coeffs[k] multiplies u0^k u1^(2-k)
        expect = np.array([-1j, 0, 1j])
        scale = b.coeffs[0] / expect[0]
        assert np.allclose(b.coeffs, expect * scale)
        assert abs(scale - 1) < 1e-12

    def test_xy_roots(self, sphere):
        param = conic_param(sphere)
        from quadpole import poly_mul
        xy = poly_mul(HomogPoly(1, [1, 0, 0]), HomogPoly(1, [0, 1, 0]))
        b = restrict_to_conic(xy, param)
        roots = roots_projective(b)
        keys = sorted(tuple(np.round(c.point.coords, 6)) for c in roots)
        want = sorted(tuple(np.round(ProjPoint1(v).coords, 6))
                      for v in ([0, 1], [1, 0], [1, 1], [1, -1]))
        assert keys == want

    def test_value_agreement(self, sphere, hyperboloid):
        rng = np.random.default_rng(3)
        for Q in (sphere, hyperboloid):
            param = conic_param(Q)
            p = random_homog(4, rng)
            b = restrict_to_conic(p, param)
            assert b.degree == 8
            for _ in range(10):
                u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
                lhs = b.eval_uv(u[0], u[1])
                pt = np.array([param.alphas[i].eval_uv(u[0], u[1])
                               for i in range(3)])
                assert lhs == pytest.approx(poly_eval(p, pt), rel=1e-9)

    def test_q_restricts_to_zero(self, hyperboloid):
        b = restrict_to_conic(hyperboloid.poly(), conic_param(hyperboloid))
        assert np.max(np.abs(b.coeffs)) < 1e-12


class TestRootsProjective:
    def test_u0_u1(self):
        roots = roots_projective(BinaryForm(2, [0, 1, 0]))
        assert len(roots) == 2
        assert sorted(c.multiplicity for c in roots) == [1, 1]
        pts = {tuple(map(complex, np.round(c.point.coords, 8)))
               for c in roots}
        assert pts == {(0j, (1 + 0j)), ((1 + 0j), 0j)}

    def test_double_root(self):
        # (u0 - u1)^2 = u0^2 - 2 u0 u1 + u1^2
        roots = roots_projective(BinaryForm(2, [1, -2, 1]))
        assert len(roots) == 1
        assert roots[0].multiplicity == 2
        assert np.allclose(roots[0].point.coords, [1, 1])

    def test_root_at_infinity_multiplicity(self):
        # u1^2 * (u0 - 2 u1): zero coefficients for u0^3, u0^2
        f = form_from_roots([((1, 0), 2), ((2, 1), 1)])
        roots = roots_projective(f)
        inf = [c for c in roots if abs(c.point.coords[1]) < 1e-9]
        assert len(inf) == 1 and inf[0].multiplicity == 2

    def test_sum_of_multiplicities(self):
        rng = np.random.default_rng(4)
        for d in (3, 5, 8):
            f = BinaryForm(d, rng.standard_normal(d + 1)
                           + 1j * rng.standard_normal(d + 1))
            roots = roots_projective(f)
            assert sum(c.multiplicity for c in roots) == d

    def test_round_trip_well_separated(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            vals = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            pairs = [((v, 1), 1) for v in vals]
            roots = roots_projective(form_from_roots(pairs))
            assert len(roots) == 4
            ckey = lambda z: (z.real, z.imag)
            got = sorted((complex(c.point.coords[0] / c.point.coords[1])
                          for c in roots if abs(c.point.coords[1]) > 0.1),
                         key=ckey)
            want = sorted((complex(v) for v in vals), key=ckey)
            for g, w in zip(got, want):
                assert abs(g - w) < 1e-8 * (1 + abs(w))

    def test_cluster_merging(self):
        # two roots within eps_cluster merge into one cluster of mult 2
        f = form_from_roots([((1.0, 1), 1), ((1.0 + 1e-9, 1), 1),
                             ((3.0, 1), 1)])
        roots = roots_projective(f, eps_cluster=1e-6)
        assert sorted(c.multiplicity for c in roots) == [1, 2]

    def test_polish_recovers_double_root(self):
        # companion eigenvalues of an m-fold root split O(eps^(1/m)); the
        # polish on the (m-1)th derivative must restore near-machine accuracy
        f = form_from_roots([((0.5, 1), 2), ((-2.0, 1), 1), ((1j, 1), 1)])
        roots = roots_projective(f)
        dbl = [c for c in roots if c.multiplicity == 2]
        assert len(dbl) == 1
        val = dbl[0].point.coords[0] / dbl[0].point.coords[1]
        assert abs(val - 0.5) < 1e-12

    def test_polish_recovers_triple_root(self):
        # the triple-root eigenvalue bunch has radius ~1e-6, so cluster at a
        # coarser resolution and check the polished location
        f = form_from_roots([((0.5, 1), 3), ((-2.0, 1), 1)])
        roots = roots_projective(f, eps_cluster=1e-5)
        tri = [c for c in roots if c.multiplicity == 3]
        assert len(tri) == 1
        val = tri[0].point.coords[0] / tri[0].point.coords[1]
        assert abs(val - 0.5) < 1e-10

    def test_zero_form_rejected(self):
        with pytest.raises(ZeroForm):
            roots_projective(BinaryForm(3, [0, 0, 0, 0]))


class TestBinaryForm:
    def test_mul_matches_numpy(self):
        rng = np.random.default_rng(6)
        a = BinaryForm(3, rng.standard_normal(4) + 1j * rng.standard_normal(4))
        b = BinaryForm(2, rng.standard_normal(3) + 1j * rng.standard_normal(3))
        prod = a.mul(b)
        # ascending powers of u0 multiply by convolution
        got = np.convolve(a.coeffs, b.coeffs)
        assert np.allclose(prod.coeffs, got)

    def test_eval_consistency(self):
        f = BinaryForm(2, [1, 2, 3])
        u = ProjPoint1([2, 1])
        assert f.eval_point(u) == pytest.approx(
            f.eval_uv(*u.coords), rel=1e-12)


class TestLineThrough:
    def test_secant_example(self, sphere):
        pa = ProjPoint2([-1j, 0, 1])
        pb = ProjPoint2([1j, 0, 1])
        L = line_through(pa, pb, sphere)
        c = np.asarray(L.coeffs)
        c = c / c[np.argmax(np.abs(c))]
        assert np.allclose(c, [0, 1, 0])  # the line y = 0

    def test_second_secant_example(self, sphere):
        L = line_through(ProjPoint2([0, 1j, 1]), ProjPoint2([0, -1j, 1]),
                         sphere)
        c = np.asarray(L.coeffs)
        c = c / c[np.argmax(np.abs(c))]
        assert np.allclose(c, [1, 0, 0])  # the line x = 0

    def test_tangent_example(self, sphere):
        p = ProjPoint2([1j, 0, 1])
        L = line_through(p, p, sphere)
        c = np.asarray(L.coeffs)
        # tangent at p has coefficients B @ p = (i, 0, 1)
        expect = np.array([1j, 0, 1])
        scale = c[2] / expect[2]
        assert np.allclose(c, expect * scale)
        # double intersection on the conic
        b = restrict_to_conic(L, conic_param(sphere))
        roots = roots_projective(b)
        assert len(roots) == 1 and roots[0].multiplicity == 2

    def test_vanishes_at_both_points(self, hyperboloid):
        rng = np.random.default_rng(7)
        param = conic_param(hyperboloid)
        for _ in range(10):
            ua = ProjPoint1(rng.standard_normal(2)
                            + 1j * rng.standard_normal(2))
            ub = ProjPoint1(rng.standard_normal(2)
                            + 1j * rng.standard_normal(2))
            pa, pb = param.point(ua), param.point(ub)
            L = line_through(pa, pb, hyperboloid)
            assert abs(poly_eval(L, pa.coords)) < 1e-9
            assert abs(poly_eval(L, pb.coords)) < 1e-9

    def test_secant_roots_match_parameters(self, sphere):
        rng = np.random.default_rng(8)
        param = conic_param(sphere)
        ua = ProjPoint1([1.5 + 0.5j, 1])
        ub = ProjPoint1([-0.25j, 1])
        L = line_through(param.point(ua), param.point(ub), sphere)
        roots = roots_projective(restrict_to_conic(L, param))
        got = sorted(c.point.key() for c in roots)
        want = sorted([ua.key(), ub.key()])
        for g, w in zip(got, want):
            assert np.allclose(g, w, atol=1e-7)


class TestBinaryDiscriminant:
    def test_simple_roots_nonzero(self):
        assert abs(binary_discriminant(BinaryForm(2, [0, 1, 0]))) > 1e-6

    def test_double_root_zero(self):
        assert abs(binary_discriminant(BinaryForm(2, [1, 0, 0]))) < 1e-12

    def test_restricted_square_zero(self, sphere):
        from quadpole import poly_mul
        x2 = poly_mul(HomogPoly(1, [1, 0, 0]), HomogPoly(1, [1, 0, 0]))
        b = restrict_to_conic(x2, conic_param(sphere))
        b = BinaryForm(b.degree, b.coeffs / np.max(np.abs(b.coeffs)))
        assert abs(binary_discriminant(b)) < 1e-10

    def test_matches_root_clustering(self):
        rng = np.random.default_rng(9)
        # constructed forms with known structure
        cases = [
            (form_from_roots([((1, 1), 1), ((2, 1), 1), ((3, 1), 1)]), False),
            (form_from_roots([((1, 1), 2), ((3, 1), 1)]), True),
            (form_from_roots([((1j, 1), 2), ((1, 0), 2)]), True),
            (form_from_roots([((0.3 - 2j, 1), 1), ((1, 0), 1),
                              ((5, 1), 1)]), False),
        ]
        for f, multiple in cases:
            fn = BinaryForm(f.degree, f.coeffs / np.max(np.abs(f.coeffs)))
            disc = abs(binary_discriminant(fn))
            roots = roots_projective(fn)
            has_mult = any(c.multiplicity >= 2 for c in roots)
            assert has_mult == multiple
            assert (disc < 1e-9) == multiple
