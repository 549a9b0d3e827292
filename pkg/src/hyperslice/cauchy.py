"""Cauchy kernels and reconstruction on products of discs and annuli.

The boundary torus is a product of real-centered circles on one slice,
parametrized by xi_h(t) = c_h + r_h e^{Jt}.  Reconstruction integrates the
non-associative integrand over the angle torus with the tensor trapezoid
rule; on one slice every kernel factor lives in a commutative plane, so
the grid evaluation reduces to complex arrays plus one left-multiplication
matrix per unit involved.  The pointwise integrand stays in exact Element
arithmetic and serves as the oracle for the vectorized path.
"""

import math
from typing import NamedTuple

import numpy as np

from .algebra import DEFAULT_TOL, invert, norm_sq, ordered_product, trace
from .errors import (
    AlgebraMismatch,
    NonAssociativeAlgebra,
    NotInQuadraticCone,
    OnSingularSphere,
    PointOutsideE,
    QuadratureSingularity,
)
from .regularity import OrderedPolynomial, poly_to_stem
from .slicefun import SlicePoint, slice_eval
from .stems import StemPoly, stem_product, sigma_tensor

MIN_DELTA = 1e-3


def char_poly(q, p, tol=DEFAULT_TOL):
    """Delta_q(p) = p^2 - 2 Re(q) p + n(q); zero exactly on the sphere of q."""
    t = trace(q)
    nq = norm_sq(q)
    if not t.is_real(tol) or not nq.is_real(tol):
        raise NotInQuadraticCone(
            "the sphere parameter needs real trace and norm")
    return p * p - p * t.real_coeff() + p.algebra.from_real(nq.real_coeff())


def cauchy_kernel_1var(x, y, tol=DEFAULT_TOL):
    """Delta_y(x)^{-1} (y^c - x); the slice-regular reciprocal of x - y."""
    delta = char_poly(y, x)
    if delta.euclid_norm() < MIN_DELTA:
        raise OnSingularSphere(
            f"point lies on or near the sphere of the pole "
            f"(|Delta| = {delta.euclid_norm():.2e})")
    return invert(delta, tol) * (y.conj() - x)


class Circle(NamedTuple):
    center: float
    radius: float
    orientation: int = 1


class BoundaryTorus:
    """Product of per-variable unions of oriented real-centered circles."""

    def __init__(self, algebra, circles, J=None, samples_per_circle=64):
        self.algebra = algebra
        norm_circles = []
        for var_circles in circles:
            row = []
            for c in var_circles:
                c = Circle(*c) if not isinstance(c, Circle) else c
                if c.radius <= 0:
                    raise AlgebraMismatch("circle radius must be positive")
                if c.orientation not in (1, -1):
                    raise AlgebraMismatch("orientation must be +1 or -1")
                row.append(c)
            if not row:
                raise AlgebraMismatch("each variable needs at least one circle")
            norm_circles.append(tuple(row))
        self.circles = tuple(norm_circles)
        self.J = J if J is not None else algebra.default_imaginary_unit()
        self.samples_per_circle = samples_per_circle

    @classmethod
    def discs(cls, algebra, radii, centers=None, J=None,
              samples_per_circle=64):
        centers = centers or [0.0] * len(radii)
        circles = [[Circle(c, r)] for c, r in zip(centers, radii)]
        return cls(algebra, circles, J, samples_per_circle)

    @property
    def n(self):
        return len(self.circles)

    def contains_z(self, alpha, beta, h):
        """Winding test in variable h; the region is even-odd by orientation."""
        z = complex(alpha, abs(beta))
        winding = sum(c.orientation for c in self.circles[h - 1]
                      if abs(z - c.center) < c.radius)
        return winding >= 1

    def contains_point(self, point):
        return all(self.contains_z(a, b, h + 1)
                   for h, (a, b) in enumerate(point.z()))

    def combos(self):
        """All circle choices, one per variable, with combined orientation."""
        out = [((), 1)]
        for var_circles in self.circles:
            out = [(chosen + (c,), sign * c.orientation)
                   for chosen, sign in out for c in var_circles]
        return out

    def boundary_value(self, combo, angles):
        """xi(t) for one circle choice, as complex numbers on the slice."""
        return [c.center + c.radius * complex(math.cos(t), math.sin(t))
                for c, t in zip(combo, angles)]


class KernelPoint:
    """Validated (x, y) pairing: every coordinate off the pole spheres."""

    def __init__(self, x, ys, tol=DEFAULT_TOL):
        ys = tuple(ys)
        if len(ys) != x.n:
            raise AlgebraMismatch(f"need {x.n} pole coordinates")
        self.x = x
        self.ys = ys
        self.deltas = tuple(char_poly(y, x.element(h + 1))
                            for h, y in enumerate(ys))
        self.min_abs_delta = min(d.euclid_norm() for d in self.deltas)
        if self.min_abs_delta < MIN_DELTA:
            raise OnSingularSphere(
                f"min |Delta| = {self.min_abs_delta:.2e} below "
                f"{MIN_DELTA}; the kernel degenerates on pole spheres")


def _complex_on_slice(algebra, w, J):
    return algebra.from_real(w.real) + w.imag * J


def _as_stem(f):
    if isinstance(f, OrderedPolynomial):
        return poly_to_stem(f)
    if isinstance(f, StemPoly):
        return f
    return None


def _boundary_function(f):
    stem = _as_stem(f)
    if stem is not None:
        return lambda point: slice_eval(stem, point)
    return f


def cauchy_integrand(f, x, t, torus, tol=DEFAULT_TOL):
    """The subset-expanded integrand at one angle tuple, exact Elements.

    Sums over all circle choices of the torus.  Each subset K contributes
    sign (-1)^(n-|K|), per-variable factors Delta^{-1} (h in K) or
    Delta^{-1} x_h (h outside K), and the right factor built from the
    conjugated boundary coordinates over K, the velocity product, the
    J power, and the boundary value of f.
    """
    algebra = torus.algebra
    n = torus.n
    if x.n != n:
        raise AlgebraMismatch(f"point has {x.n} variables, torus has {n}")
    J = torus.J
    fn = _boundary_function(f)
    total = algebra.zero()
    for combo, orient in torus.combos():
        zs = torus.boundary_value(combo, t)
        point = SlicePoint(algebra, [w.real for w in zs],
                           [w.imag for w in zs], [J] * n)
        fval = fn(point)
        # velocity product and J^{-n}, all complex on the slice
        vel = 1 + 0j
        for c, ang in zip(combo, t):
            vel *= c.radius * complex(-math.sin(ang), math.cos(ang))
        jpow = (-1j) ** n
        xs = [x.element(h) for h in range(1, n + 1)]
        deltas = []
        for h in range(n):
            d = char_poly(_complex_on_slice(algebra, zs[h], J), xs[h])
            if d.euclid_norm() < MIN_DELTA:
                raise OnSingularSphere(
                    f"boundary angle hits the sphere of variable {h + 1}")
            deltas.append(invert(d, tol))
        for kmask in range(1 << n):
            sign = (-1) ** (n - bin(kmask).count("1"))
            q = complex(sign, 0) * vel * jpow
            for h in range(n):
                if kmask >> h & 1:
                    q *= zs[h].conjugate()
            v = _complex_on_slice(algebra, q, J) * fval
            factors = [deltas[h] if kmask >> h & 1 else deltas[h] * xs[h]
                       for h in range(n)]
            total = total + orient * ordered_product(factors, v)
    return total


def cauchy_integrand_product_form(f, x, t, torus, tol=DEFAULT_TOL):
    """Nested one-variable kernels; valid when x lies inside the domain."""
    algebra = torus.algebra
    n = torus.n
    J = torus.J
    fn = _boundary_function(f)
    total = algebra.zero()
    for combo, orient in torus.combos():
        zs = torus.boundary_value(combo, t)
        point = SlicePoint(algebra, [w.real for w in zs],
                           [w.imag for w in zs], [J] * n)
        vel = 1 + 0j
        for c, ang in zip(combo, t):
            vel *= c.radius * complex(-math.sin(ang), math.cos(ang))
        q = vel * (-1j) ** n
        v = _complex_on_slice(algebra, q, J) * fn(point)
        kernels = [cauchy_kernel_1var(x.element(h + 1),
                                      _complex_on_slice(algebra, zs[h], J),
                                      tol)
                   for h in range(n)]
        total = total + orient * ordered_product(kernels, v)
    return total


def slice_cauchy_kernel(x, ys, tol=DEFAULT_TOL):
    """Closed-form kernel for associative algebras.

    ys are slice elements with real trace and norm (poles); the kernel is
    the unique slice regular function of x restoring f from boundary data.
    """
    algebra = x.algebra
    if not algebra.associative:
        raise NonAssociativeAlgebra(
            "the closed-form kernel needs an associative algebra; use the "
            "subset-expanded integrand instead")
    kp = KernelPoint(x, ys, tol)
    n = x.n
    xs = [x.element(h) for h in range(1, n + 1)]
    inv = [invert(d, tol) for d in kp.deltas]
    total = algebra.zero()
    for kmask in range(1 << n):
        sign = (-1) ** (n - bin(kmask).count("1"))
        right = algebra.one()
        for h in range(n):
            if kmask >> h & 1:
                right = right * ys[h].conj()
        factors = [inv[h] if kmask >> h & 1 else inv[h] * xs[h]
                   for h in range(n)]
        total = total + sign * ordered_product(factors, right)
    return total


# -- vectorized reconstruction --------------------------------------------


def _grid_angles(n, N):
    ts = 2.0 * np.pi * np.arange(N) / N
    grids = np.meshgrid(*([ts] * n), indexing="ij")
    return [g.reshape(-1) for g in grids]


def _stem_on_grid(stem, alphas, betas, J_mat, dim):
    """f(xi) over the grid: component values collapsed through powers of J."""
    G = alphas[0].shape[0]
    n = stem.n
    # per-variable power tables up to the needed degree
    max_deg = [0] * (2 * n)
    for poly in stem.components.values():
        for exp in poly:
            for v in range(2 * n):
                max_deg[v] = max(max_deg[v], exp[v])
    pows = []
    for h in range(n):
        pa = [np.ones(G)]
        for _ in range(max_deg[2 * h]):
            pa.append(pa[-1] * alphas[h])
        pb = [np.ones(G)]
        for _ in range(max_deg[2 * h + 1]):
            pb.append(pb[-1] * betas[h])
        pows.append((pa, pb))
    out = np.zeros((G, dim))
    eye = np.eye(dim)
    jp = [eye, J_mat, -eye, -J_mat]
    for mask, poly in stem.components.items():
        comp = np.zeros((G, dim))
        for exp, coeff in poly.items():
            scal = np.ones(G)
            for h in range(n):
                a, b = exp[2 * h], exp[2 * h + 1]
                if a:
                    scal = scal * pows[h][0][a]
                if b:
                    scal = scal * pows[h][1][b]
            comp += scal[:, None] * np.asarray(coeff.coeffs_float())[None, :]
        out += comp @ jp[mask.bit_count() % 4]
    return out


def _apply_complex_factor(vec, w, L):
    """Left-multiply the A-valued rows by w.real + w.imag * unit."""
    out = vec * w.real[:, None]
    imag_part = vec @ L
    return out + imag_part * w.imag[:, None]


def cauchy_reconstruct(f, torus, x, tol=DEFAULT_TOL):
    """Average the integrand over the angle torus; value plus diagnostics.

    Polynomial or stem inputs run on the vectorized slice engine; plain
    callables fall back to pointwise Element arithmetic on the same grid.
    Diagnostics report the sample count, the worst kernel conditioning,
    and the disagreement against direct evaluation when one is available.
    """
    algebra = torus.algebra
    n = torus.n
    if x.n != n:
        raise AlgebraMismatch(f"point has {x.n} variables, torus has {n}")
    if not torus.contains_point(x):
        raise PointOutsideE(
            "reconstruction point must lie inside the circularized domain")
    N = torus.samples_per_circle
    stem = _as_stem(f)
    if stem is None:
        value, min_delta = _reconstruct_pointwise(f, torus, x, tol)
    else:
        value, min_delta = _reconstruct_vectorized(stem, torus, x)
    diagnostics = {
        "N": N,
        "grid_points": N ** n * len(torus.combos()),
        "min_abs_delta": float(min_delta),
        "max_inv_delta": float(1.0 / min_delta),
    }
    if stem is not None:
        reference = slice_eval(stem, x)
        diagnostics["disagreement"] = float(
            (value - reference).euclid_norm())
    return value, diagnostics


def _reconstruct_vectorized(stem, torus, x):
    algebra = torus.algebra
    n = torus.n
    dim = algebra.dim
    N = torus.samples_per_circle
    J = torus.J
    LJ = algebra.left_mult_matrix(J)
    L_units = [algebra.left_mult_matrix(u) for u in x.units]
    w_x = [complex(float(a), float(b)) for a, b in x.z()]
    angles = _grid_angles(n, N)
    G = angles[0].shape[0]
    jpow = (-1j) ** n
    total = np.zeros((G, dim))
    min_delta = np.inf
    for combo, orient in torus.combos():
        zs = [c.center + c.radius * np.exp(1j * t)
              for c, t in zip(combo, angles)]
        vel = np.ones(G, dtype=complex)
        for c, t in zip(combo, angles):
            vel = vel * (c.radius * 1j * np.exp(1j * t))
        deltas = []
        for h in range(n):
            d = (w_x[h] * w_x[h] - 2.0 * zs[h].real * w_x[h]
                 + (zs[h].real ** 2 + zs[h].imag ** 2))
            deltas.append(d)
            min_delta = min(min_delta, float(np.abs(d).min()))
        if min_delta < MIN_DELTA:
            raise QuadratureSingularity(
                f"grid approaches a pole sphere: min |Delta| = "
                f"{min_delta:.2e} < {MIN_DELTA}")
        fvals = _stem_on_grid(stem, [z.real for z in zs],
                              [z.imag for z in zs], LJ, dim)
        inv = [1.0 / d for d in deltas]
        for kmask in range(1 << n):
            sign = (-1) ** (n - bin(kmask).count("1"))
            q = sign * vel * jpow
            for h in range(n):
                if kmask >> h & 1:
                    q = q * zs[h].conjugate()
            v = _apply_complex_factor(fvals, q, LJ)
            for h in range(n - 1, -1, -1):
                w = inv[h] if kmask >> h & 1 else inv[h] * w_x[h]
                v = _apply_complex_factor(v, w, L_units[h])
            total = total + orient * v
    coeffs = np.add.reduce(total, axis=0) / float(N ** n)
    return algebra.element([float(c) for c in coeffs]), min_delta


def _reconstruct_pointwise(f, torus, x, tol):
    n = torus.n
    N = torus.samples_per_circle
    algebra = torus.algebra
    angles_1d = [2.0 * math.pi * k / N for k in range(N)]
    total = algebra.zero()
    min_delta = math.inf
    idx = [0] * n
    while True:
        t = tuple(angles_1d[i] for i in idx)
        kp_deltas = []
        for combo, _ in torus.combos():
            zs = torus.boundary_value(combo, t)
            for h in range(n):
                w = complex(float(x.alphas[h]), float(x.betas[h]))
                d = (w * w - 2.0 * zs[h].real * w
                     + abs(zs[h]) ** 2)
                kp_deltas.append(abs(d))
        min_delta = min(min_delta, min(kp_deltas))
        if min_delta < MIN_DELTA:
            raise QuadratureSingularity(
                f"grid approaches a pole sphere: min |Delta| = "
                f"{min_delta:.2e} < {MIN_DELTA}")
        total = total + cauchy_integrand(f, x, t, torus, tol)
        for pos in range(n - 1, -1, -1):
            idx[pos] += 1
            if idx[pos] < N:
                break
            idx[pos] = 0
        else:
            break
    return total * (1.0 / N ** n), min_delta


# -- symbolic regularity of the closed-form kernel -------------------------


def kernel_stem_symbolic(algebra, ys_complex, J):
    """Stem of x -> C(x, y) as (numerator stem, real denominator).

    ys_complex are the poles as exact complex pairs (re, im) on the slice
    of J.  Every kernel component equals numerator / denominator with the
    denominator the product of the squared moduli of the characteristic
    factors, so the CR system can be checked by polynomial identities.
    """
    n = len(ys_complex)
    sigma = sigma_tensor(n)
    one = algebra.one()

    def var_stem(h, comps):
        full = {}
        for local_mask, poly in comps.items():
            mask = local_mask << (h - 1)
            lifted = {}
            for (ea, eb), c in poly.items():
                exp = [0] * (2 * n)
                exp[2 * (h - 1)] = ea
                exp[2 * (h - 1) + 1] = eb
                lifted[tuple(exp)] = c
            full[mask] = lifted
        return StemPoly(n, algebra, full)

    numer = StemPoly.zero(n, algebra)
    denom = {(0,) * (2 * n): 1}
    for h, (re, im) in enumerate(ys_complex, start=1):
        t = 2 * re
        nq = re * re + im * im
        # |delta_h|^2 as a real polynomial in (alpha_h, beta_h)
        dre = {(2, 0): 1, (0, 2): -1, (1, 0): -t, (0, 0): nq}
        dim_ = {(1, 1): 2, (0, 1): -t}
        sq = {}
        for p in (dre, dim_):
            for ea, ca in p.items():
                for eb, cb in p.items():
                    key = (ea[0] + eb[0], ea[1] + eb[1])
                    sq[key] = sq.get(key, 0) + ca * cb
        lifted = {}
        for (ea, eb), c in sq.items():
            exp = [0] * (2 * n)
            exp[2 * (h - 1)] = ea
            exp[2 * (h - 1) + 1] = eb
            lifted[tuple(exp)] = c
        denom = _real_poly_mul(denom, lifted)
    for kmask in range(1 << n):
        sign = (-1) ** (n - bin(kmask).count("1"))
        term = None
        for h, (re, im) in enumerate(ys_complex, start=1):
            t = 2 * re
            nq = re * re + im * im
            conj_delta = var_stem(h, {
                0: {(2, 0): one, (0, 2): -1 * one, (1, 0): -t * one,
                    (0, 0): nq * one},
                1: {(1, 1): -2 * one, (0, 1): t * one},
            })
            if not kmask >> (h - 1) & 1:
                xh = var_stem(h, {0: {(1, 0): one}, 1: {(0, 1): one}})
                conj_delta = stem_product(conj_delta, xh, sigma)
            term = conj_delta if term is None else \
                stem_product(term, conj_delta, sigma)
        yc = algebra.one()
        for h, (re, im) in enumerate(ys_complex, start=1):
            if kmask >> (h - 1) & 1:
                yc = yc * (algebra.from_real(re) - im * J)
        term = stem_product(term, StemPoly.constant(yc, n), sigma)
        numer = numer + sign * term
    return numer, denom


def _real_poly_mul(p, q):
    out = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            key = tuple(a + b for a, b in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return out


def rational_stem_is_regular(numer, denom):
    """CR system for numer/denom with a real scalar denominator, exactly.

    Checks, for every variable and component, the cleared identity
    (d/dz-bar numer) * denom = quotient-rule correction, so no rational
    arithmetic is needed.
    """
    from fractions import Fraction

    n = numer.n
    algebra = numer.algebra
    half = Fraction(1, 2)
    for h in range(1, n + 1):
        va, vb = 2 * (h - 1), 2 * (h - 1) + 1
        d_da = _real_poly_dx(denom, va)
        d_db = _real_poly_dx(denom, vb)
        bit = 1 << (h - 1)
        masks = set(numer.components) | {m ^ bit for m in numer.components}
        for mask in masks:
            sign = -1 if mask & bit else 1
            A = numer.components.get(mask, {})
            Ax = numer.components.get(mask ^ bit, {})
            # lhs: (cr-bar of the numerator stem)_mask times denom
            lhs = {}
            _elem_poly_add(lhs, _elem_poly_mul_real(
                _elem_poly_dx(A, va), denom), half)
            _elem_poly_add(lhs, _elem_poly_mul_real(
                _elem_poly_dx(Ax, vb), denom), -half * sign)
            # rhs: quotient-rule correction
            rhs = {}
            _elem_poly_add(rhs, _elem_poly_mul_real(A, d_da), half)
            _elem_poly_add(rhs, _elem_poly_mul_real(Ax, d_db), -half * sign)
            keys = set(lhs) | set(rhs)
            for key in keys:
                a = lhs.get(key)
                b = rhs.get(key)
                diff = (a - b) if (a is not None and b is not None) \
                    else (a if a is not None else b)
                if not diff.is_zero(0):
                    return False
    return True


def _real_poly_dx(p, var):
    out = {}
    for exp, c in p.items():
        k = exp[var]
        if k:
            ne = exp[:var] + (k - 1,) + exp[var + 1:]
            out[ne] = out.get(ne, 0) + k * c
    return out


def _elem_poly_dx(p, var):
    out = {}
    for exp, c in p.items():
        k = exp[var]
        if k:
            ne = exp[:var] + (k - 1,) + exp[var + 1:]
            out[ne] = out[ne] + k * c if ne in out else k * c
    return out


def _elem_poly_mul_real(p, q):
    out = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            key = tuple(a + b for a, b in zip(ea, eb))
            term = ca * cb
            out[key] = out[key] + term if key in out else term
    return out


def _elem_poly_add(target, source, scale):
    for exp, c in source.items():
        term = c * scale
        target[exp] = target[exp] + term if exp in target else term
