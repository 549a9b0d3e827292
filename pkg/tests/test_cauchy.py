"""Cauchy kernels, integrand routes, and reconstruction on disc products."""

import math
from fractions import Fraction as Q

import pytest

from hyperslice.algebra import invert, make_algebra
from hyperslice.cauchy import (BoundaryTorus, Circle, KernelPoint,
                               cauchy_integrand,
                               cauchy_integrand_product_form,
                               cauchy_kernel_1var, cauchy_reconstruct,
                               char_poly, kernel_stem_symbolic,
                               rational_stem_is_regular, slice_cauchy_kernel)
from hyperslice.errors import (AlgebraMismatch, NonAssociativeAlgebra,
                               NotInQuadraticCone, OnSingularSphere,
                               PointOutsideE, QuadratureSingularity)
from hyperslice.regularity import OrderedPolynomial, poly_to_stem
from hyperslice.slicefun import SlicePoint, representation_eval, slice_eval


def test_char_poly_vanishes_exactly_on_the_sphere(H):
    i, j = H.basis_named("i"), H.basis_named("j")
    one = H.one()
    assert char_poly(i, j).is_zero(0)
    assert char_poly(one + 2 * i, one + 2 * j).is_zero(0)
    assert char_poly(i, 2 * i) == H.from_real(-3)


def test_char_poly_rejects_nonreal_trace(CL03):
    e123 = CL03.basis_named("e123")
    with pytest.raises(NotInQuadraticCone):
        char_poly(e123, CL03.one())


def test_one_variable_kernel_examples(H):
    i, j = H.basis_named("i"), H.basis_named("j")
    y = H.from_real(Q(1, 2)) + 2 * i
    assert cauchy_kernel_1var(H.zero(), y) == invert(y)
    expected = (-2 * i - j) * Q(1, 3)
    assert cauchy_kernel_1var(j, 2 * i) == expected


def test_kernel_refuses_pairs_on_the_pole_sphere(H):
    i, j = H.basis_named("i"), H.basis_named("j")
    with pytest.raises(OnSingularSphere):
        cauchy_kernel_1var(2 * i, 2 * j)
    x = SlicePoint(H, [0.0, 0.0], [2.0, 0.5], [i, j])
    with pytest.raises(OnSingularSphere):
        KernelPoint(x, [2 * j, i])
    kp = KernelPoint(x, [3 * j, i])
    assert kp.min_abs_delta == pytest.approx(0.75)


def test_boundary_torus_shape_and_winding(H):
    torus = BoundaryTorus.discs(H, [1.5, 1.0], centers=[0.5, 0.0])
    assert torus.n == 2
    assert torus.J == H.basis_named("i")
    assert torus.contains_z(0.5, 1.2, 1)
    assert not torus.contains_z(0.5, 1.6, 1)
    assert len(torus.combos()) == 1
    ann = BoundaryTorus(H, [[(0.0, 2.0, 1), (0.0, 1.0, -1)]])
    assert ann.contains_z(0.0, 1.5, 1)
    assert not ann.contains_z(0.5, 0.0, 1)  # the hole
    assert not ann.contains_z(0.0, 2.5, 1)
    combos = ann.combos()
    assert sorted(orient for _, orient in combos) == [-1, 1]
    with pytest.raises(AlgebraMismatch):
        BoundaryTorus(H, [[(0.0, -1.0, 1)]])
    with pytest.raises(AlgebraMismatch):
        BoundaryTorus(H, [[Circle(0.0, 1.0, 2)]])
    with pytest.raises(AlgebraMismatch):
        BoundaryTorus(H, [[]])


def test_integrand_of_one_is_one_on_the_unit_circle(H):
    i = H.basis_named("i")
    torus = BoundaryTorus.discs(H, [1.0], samples_per_circle=8)
    x0 = SlicePoint(H, [0.0], [0.0], [i])
    f = OrderedPolynomial.constant(H.one(), 1)
    for t in (0.0, 0.7, 2.0, 3.9, 5.5):
        v = cauchy_integrand(f, x0, (t,), torus)
        assert (v - H.one()).is_zero(1e-14)


def test_closed_form_kernel_reduces_to_one_variable(H):
    i, j = H.basis_named("i"), H.basis_named("j")
    x = SlicePoint(H, [0.3], [0.2], [j])
    y = H.from_real(0.5) + 2 * i
    diff = slice_cauchy_kernel(x, [y]) - cauchy_kernel_1var(x.element(1), y)
    assert diff.is_zero(1e-14)


def test_closed_form_kernel_sign_pattern_on_the_plane(H):
    # on the slice plane everything commutes, so the subset expansion
    # must reduce to the four-term display with signs (+, -, -, +)
    i = H.basis_named("i")
    x = SlicePoint(H, [0.2, 0.1], [0.3, 0.4], [i, i])
    ys = [H.from_real(1.0) + 2 * i, H.from_real(-0.5) + 3 * i]
    x1, x2 = x.element(1), x.element(2)
    d1 = invert(char_poly(ys[0], x1))
    d2 = invert(char_poly(ys[1], x2))
    y1c, y2c = ys[0].conj(), ys[1].conj()
    display = (d1 * x1 * d2 * x2 - d1 * x1 * d2 * y2c
               - d1 * y1c * d2 * x2 + d1 * y1c * d2 * y2c)
    value = slice_cauchy_kernel(x, ys)
    assert (value - display).is_zero(1e-13)
    # any single sign flip breaks the identity
    flipped = (d1 * x1 * d2 * x2 + d1 * x1 * d2 * y2c
               - d1 * y1c * d2 * x2 + d1 * y1c * d2 * y2c)
    assert not (value - flipped).is_zero(1e-6)
    # and it multiplies out to the two one-variable kernels
    prod = (cauchy_kernel_1var(x1, ys[0]) * cauchy_kernel_1var(x2, ys[1]))
    assert (value - prod).is_zero(1e-13)


def test_closed_form_kernel_refuses_octonions(O):
    e1 = O.basis(1)
    x = SlicePoint(O, [0.1], [0.2], [e1])
    with pytest.raises(NonAssociativeAlgebra):
        slice_cauchy_kernel(x, [2 * e1])


def test_expanded_integrand_matches_product_form_on_the_plane(H, O):
    i = H.basis_named("i")
    f = OrderedPolynomial(2, H, {(1, 1): H.one()})
    torus = BoundaryTorus.discs(H, [1.5, 1.5], samples_per_circle=16)
    x = SlicePoint(H, [0.2, 0.1], [0.3, 0.4], [i, i])
    for t in ((0.3, 1.1), (2.0, 4.4), (5.9, 0.02), (3.14, 3.14)):
        diff = (cauchy_integrand(f, x, t, torus)
                - cauchy_integrand_product_form(f, x, t, torus))
        assert diff.is_zero(1e-12)
    e = [O.basis(idx) for idx in range(8)]
    fo = OrderedPolynomial(2, O, {(2, 1): e[5], (1, 0): e[2]})
    torus_o = BoundaryTorus.discs(O, [1.2, 1.2], J=e[1], samples_per_circle=16)
    xo = SlicePoint(O, [0.2, 0.1], [0.3, 0.4], [e[1], e[1]])
    for t in ((0.3, 1.1), (2.0, 4.4), (5.9, 0.02)):
        diff = (cauchy_integrand(fo, xo, t, torus_o)
                - cauchy_integrand_product_form(fo, xo, t, torus_o))
        assert diff.is_zero(1e-12)


def test_product_form_differs_off_the_plane(H):
    # the reduction needs all coordinates of x on the torus slice; a
    # mixed-unit point must expose the difference between the two routes
    i, j = H.basis_named("i"), H.basis_named("j")
    f = OrderedPolynomial(2, H, {(1, 1): H.one()})
    torus = BoundaryTorus.discs(H, [1.5, 1.5], samples_per_circle=16)
    x = SlicePoint(H, [0.2, 0.1], [0.3, 0.4], [i, j])
    diff = (cauchy_integrand(f, x, (0.3, 1.1), torus)
            - cauchy_integrand_product_form(f, x, (0.3, 1.1), torus))
    assert diff.euclid_norm() > 1e-3


def test_reconstruct_constant_is_exact_at_tiny_sample_counts(H):
    i, k = H.basis_named("i"), H.basis_named("k")
    a = H.one() + 2 * i - 3 * k
    f = OrderedPolynomial.constant(a, 1)
    x0 = SlicePoint(H, [0.0], [0.0], [i])
    for N in (2, 3, 4):
        torus = BoundaryTorus.discs(H, [1.0], samples_per_circle=N)
        val, diag = cauchy_reconstruct(f, torus, x0)
        assert (val - a).is_zero(1e-14)
        assert diag["N"] == N


def test_reconstruct_bidisc_quaternion_monomial(H):
    i, j = H.basis_named("i"), H.basis_named("j")
    f = OrderedPolynomial(2, H, {(1, 1): H.one()})
    x = SlicePoint(H, [0.2, 0.1], [0.3, 0.4], [i, j])
    ref = slice_eval(poly_to_stem(f), x)
    torus = BoundaryTorus.discs(H, [1.5, 1.5], samples_per_circle=128)
    val, diag = cauchy_reconstruct(f, torus, x)
    err128 = (val - ref).euclid_norm()
    assert err128 <= 1e-8
    torus2 = BoundaryTorus.discs(H, [1.5, 1.5], samples_per_circle=256)
    val2, _ = cauchy_reconstruct(f, torus2, x)
    err256 = (val2 - ref).euclid_norm()
    assert err256 <= max(0.5 * err128, 1e-12)
    assert diag["disagreement"] == err128
    assert diag["min_abs_delta"] >= 1e-3


def test_reconstruct_octonion_polynomial(O):
    e = [O.basis(idx) for idx in range(8)]
    f = OrderedPolynomial(2, O, {(2, 1): e[5], (1, 0): e[2]})
    x = SlicePoint(O, [0.2, 0.1], [0.3, 0.4], [e[1], e[4]])
    ref = slice_eval(poly_to_stem(f), x)
    torus = BoundaryTorus.discs(O, [1.5, 1.5], samples_per_circle=128)
    val, _ = cauchy_reconstruct(f, torus, x)
    assert (val - ref).euclid_norm() <= 1e-6


def test_reconstruction_is_independent_of_the_slice_unit(O):
    e = [O.basis(idx) for idx in range(8)]
    f = OrderedPolynomial(2, O, {(2, 1): e[5], (1, 0): e[2]})
    x = SlicePoint(O, [0.2, 0.1], [0.3, 0.4], [e[1], e[4]])
    units = [e[1], e[2], (e[1] + e[3]) * (1 / math.sqrt(2))]
    values = []
    for J in units:
        torus = BoundaryTorus.discs(O, [1.5, 1.5], J=J, samples_per_circle=64)
        values.append(cauchy_reconstruct(f, torus, x)[0])
    for v in values[1:]:
        assert (v - values[0]).is_zero(1e-8)


def test_error_halves_when_samples_double(H):
    # black-box data with geometric trapezoid error, visible at small N
    j = H.basis_named("j")

    def f(point):
        return invert(H.one() - point.element(1))

    x = SlicePoint(H, [0.1], [0.55], [j])
    ref = f(x)
    errs = {}
    for N in (8, 16, 32):
        torus = BoundaryTorus.discs(H, [0.75], samples_per_circle=N)
        val, _ = cauchy_reconstruct(f, torus, x)
        errs[N] = (val - ref).euclid_norm()
    assert errs[8] > 1e-3
    assert errs[16] <= 0.5 * errs[8]
    assert errs[32] <= 0.5 * errs[16]


def test_vectorized_and_pointwise_paths_agree(H):
    i, j = H.basis_named("i"), H.basis_named("j")
    f = OrderedPolynomial(2, H, {(1, 1): H.one(), (0, 2): j})
    stem = poly_to_stem(f)
    torus = BoundaryTorus.discs(H, [1.3, 1.4], samples_per_circle=8)
    x = SlicePoint(H, [0.2, 0.1], [0.3, 0.4], [i, j])
    fast, _ = cauchy_reconstruct(f, torus, x)
    slow, _ = cauchy_reconstruct(lambda p: slice_eval(stem, p), torus, x)
    assert (fast - slow).is_zero(1e-12)


def test_kernel_route_matches_expanded_route_in_quaternions(H):
    # associatively, integrating kernel * boundary data must agree with
    # the subset-expanded integrand route
    i, j = H.basis_named("i"), H.basis_named("j")
    f = OrderedPolynomial(2, H, {(1, 1): H.one(), (1, 0): i})
    stem = poly_to_stem(f)
    N = 32
    torus = BoundaryTorus.discs(H, [1.5, 1.5], samples_per_circle=N)
    x = SlicePoint(H, [0.2, 0.1], [0.3, 0.4], [i, j])
    J = torus.J
    total = H.zero()
    for a in range(N):
        for b in range(N):
            t = (2 * math.pi * a / N, 2 * math.pi * b / N)
            zs = torus.boundary_value([c[0] for c in torus.circles], t)
            ys = [H.from_real(w.real) + w.imag * J for w in zs]
            point = SlicePoint(H, [w.real for w in zs],
                               [w.imag for w in zs], [J, J])
            vel = 1 + 0j
            for c, ang in zip((c[0] for c in torus.circles), t):
                vel *= c.radius * complex(-math.sin(ang), math.cos(ang))
            q = vel * (-1j) ** 2
            qe = H.from_real(q.real) + q.imag * J
            total = total + slice_cauchy_kernel(x, ys) * (qe * slice_eval(stem, point))
    via_kernel = total * (1.0 / N ** 2)
    direct, _ = cauchy_reconstruct(f, torus, x)
    assert (via_kernel - direct).is_zero(1e-10)
    assert (direct - slice_eval(stem, x)).is_zero(1e-10)


def test_reconstructed_values_form_a_slice_function(H):
    # values reconstructed on one fiber transport by the averaging
    # formula to every other unit assignment on that fiber
    i, j, k = H.basis_named("i"), H.basis_named("j"), H.basis_named("k")
    f = OrderedPolynomial(2, H, {(1, 1): H.one(), (2, 0): k})
    stem = poly_to_stem(f)
    torus = BoundaryTorus.discs(H, [1.5, 1.5], samples_per_circle=32)

    def f_rec(point):
        return cauchy_reconstruct(f, torus, point)[0]

    source = SlicePoint(H, [0.2, 0.1], [0.3, 0.4], [i, j])
    target = source.with_units([j, k])
    transported = representation_eval(f_rec, source, target)
    assert (transported - slice_eval(stem, target)).is_zero(1e-8)


def test_domain_and_singularity_guards(H):
    i = H.basis_named("i")
    f = OrderedPolynomial(2, H, {(1, 1): H.one()})
    torus = BoundaryTorus.discs(H, [1.0, 1.0], samples_per_circle=8)
    with pytest.raises(PointOutsideE):
        cauchy_reconstruct(f, torus, SlicePoint(H, [0.0, 0.0], [1.2, 0.1],
                                                [i, i]))
    with pytest.raises(QuadratureSingularity):
        cauchy_reconstruct(f, torus, SlicePoint(H, [0.0, 0.0], [0.9999, 0.1],
                                                [i, i]))


def test_annulus_reconstruction_and_hole_refusal(H):
    i, j = H.basis_named("i"), H.basis_named("j")
    f = OrderedPolynomial(2, H, {(1, 1): H.one()})
    ann = BoundaryTorus(H, [[(0.0, 1.5, 1), (0.0, 0.5, -1)],
                            [(0.0, 1.5, 1)]], samples_per_circle=64)
    x = SlicePoint(H, [0.1, 0.2], [0.8, 0.3], [i, j])
    val, _ = cauchy_reconstruct(f, ann, x)
    assert (val - slice_eval(poly_to_stem(f), x)).is_zero(1e-10)
    with pytest.raises(PointOutsideE):
        cauchy_reconstruct(f, ann, SlicePoint(H, [0.0, 0.2], [0.2, 0.3],
                                              [i, j]))


def test_kernel_stem_is_slice_regular_symbolically(H):
    i, j, k = H.basis_named("i"), H.basis_named("j"), H.basis_named("k")
    ys_c = [(Q(1), Q(2)), (Q(-1, 2), Q(3))]
    numer, denom = kernel_stem_symbolic(H, ys_c, i)
    assert rational_stem_is_regular(numer, denom)
    # sanity: perturbing the numerator breaks the certificate
    broken = numer + poly_to_stem(OrderedPolynomial(2, H, {(0, 1): i}))
    assert not rational_stem_is_regular(broken, denom)
    # the rational stem evaluates to the closed-form kernel off the plane
    ys = [H.from_real(1) + 2 * i, H.from_real(Q(-1, 2)) + 3 * i]

    def denom_at(z):
        flat = [c for ab in z for c in ab]
        total = 0
        for exp, c in denom.items():
            term = c
            for v, e in zip(flat, exp):
                term *= v ** e
            total += term
        return total

    for units in ((j, k), (i, j)):
        x = SlicePoint(H, [0.2, -0.4], [0.7, 0.3], list(units))
        direct = slice_cauchy_kernel(x, ys)
        via_stem = slice_eval(numer, x) * (1.0 / float(denom_at(x.z())))
        assert (direct - via_stem).is_zero(1e-12)
