"""Real alternative *-algebras with monomial multiplication tables.

The central objects are :class:`AlgebraDef` (a validated table),efficient
:class:`Element` values over it, and :class:`ConeDecomposition`, the writing
x = alpha + beta*J of a quadratic-cone point with beta >= 0 and J an
imaginary unit (t(J) = 0, n(J) = 1).

Coefficients follow Python's numeric tower: ints and Fractions stay exact
through products, conjugation and cone decompositions, which the symbolic
stem machinery relies on; floats enter only where the caller brings them in
(or through square roots that are not exact).
"""

import json
import math
from fractions import Fraction

import numpy as np

from . import tables
from .errors import (
    AlgebraMismatch,
    DimensionTooLarge,
    EmptyUnitSphere,
    NotImaginaryUnit,
    NotInQuadraticCone,
    NotInvertible,
    SplittingFailed,
    UnsupportedKind,
)

DEFAULT_TOL = 1e-9


def encode_number(x):
    """JSON form of a coefficient: ints pass through, Fractions as 'p/q'."""
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return x
    raise TypeError(f"cannot serialize coefficient of type {type(x).__name__}")


def decode_number(v):
    """Inverse of encode_number."""
    if isinstance(v, str):
        num, _, den = v.partition("/")
        return Fraction(int(num), int(den) if den else 1)
    if isinstance(v, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(v, (int, float)):
        return v
    raise TypeError(f"cannot parse coefficient {v!r}")


class AlgebraDef:
    """A finite-dimensional real *-algebra given by its basis table.

    mul_index[i][j], mul_sign[i][j] encode e_i e_j = sign * e_index.
    conj_signs gives the diagonal anti-involution.  Instances are immutable
    by convention and safe to share between threads.
    """

    def __init__(self, kind, dim, basis_names, mul_index, mul_sign, conj_signs,
                 associative, norm_kind="euclidean"):
        if len(basis_names) != dim or len(conj_signs) != dim:
            raise UnsupportedKind("table sizes disagree with dim")
        self.kind = kind
        self.dim = dim
        self.basis_names = tuple(basis_names)
        self.mul_index = tuple(tuple(row) for row in mul_index)
        self.mul_sign = tuple(tuple(row) for row in mul_sign)
        self.conj_signs = tuple(conj_signs)
        self.associative = associative
        self.norm_kind = norm_kind
        self._name_to_index = {n: i for i, n in enumerate(self.basis_names)}
        self._dense = None
        self._default_unit = None
        if self.mul_index[0] != tuple(range(dim)) or any(
            self.mul_index[k][0] != k or self.mul_sign[k][0] != 1
            or self.mul_sign[0][k] != 1 for k in range(dim)
        ):
            raise UnsupportedKind("basis element 0 must act as unity")

    def __repr__(self):
        return f"AlgebraDef({self.kind}, dim={self.dim})"

    def __eq__(self, other):
        return self is other or (
            isinstance(other, AlgebraDef)
            and self.dim == other.dim
            and self.mul_index == other.mul_index
            and self.mul_sign == other.mul_sign
            and self.conj_signs == other.conj_signs
        )

    def __hash__(self):
        return hash((self.kind, self.dim))

    # -- element constructors -------------------------------------------------

    def element(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != self.dim:
            raise AlgebraMismatch(
                f"expected {self.dim} coefficients, got {len(coeffs)}")
        return Element(self, coeffs)

    def zero(self):
        return Element(self, (0,) * self.dim)

    def one(self):
        return self.from_real(1)

    def from_real(self, r):
        return Element(self, (r,) + (0,) * (self.dim - 1))

    def basis(self, i):
        coeffs = [0] * self.dim
        coeffs[i] = 1
        return Element(self, tuple(coeffs))

    def basis_index(self, name):
        if name not in self._name_to_index:
            raise AlgebraMismatch(
                f"no basis element named {name!r} in {self.kind}")
        return self._name_to_index[name]

    def basis_named(self, name):
        return self.basis(self.basis_index(name))

    def has_basis_name(self, name):
        return name in self._name_to_index

    def from_coeff_map(self, mapping):
        coeffs = [0] * self.dim
        for name, val in mapping.items():
            coeffs[self.basis_index(name)] = val
        return Element(self, tuple(coeffs))

    # -- numeric support ------------------------------------------------------

    def dense_tensor(self):
        """Structure constants as float64 tensor M[i,j,k]: e_i e_j = sum_k M[i,j,k] e_k."""
        if self._dense is None:
            M = np.zeros((self.dim, self.dim, self.dim))
            for i in range(self.dim):
                for j in range(self.dim):
                    M[i, j, self.mul_index[i][j]] = self.mul_sign[i][j]
            M.setflags(write=False)
            self._dense = M
        return self._dense

    def left_mult_matrix(self, x):
        """Matrix L with (x*v).coeffs == v.coeffs @ L for float work."""
        coeffs = x.coeffs_float() if isinstance(x, Element) else np.asarray(x, float)
        return np.tensordot(coeffs, self.dense_tensor(), axes=(0, 0))

    def right_mult_matrix(self, x):
        """Matrix R with (v*x).coeffs == v.coeffs @ R for float work."""
        coeffs = x.coeffs_float() if isinstance(x, Element) else np.asarray(x, float)
        return np.tensordot(self.dense_tensor(), coeffs, axes=(1, 0))

    def default_imaginary_unit(self):
        """First basis element lying in the unit sphere; the canonical J.

        Raises EmptyUnitSphere when no basis unit qualifies (Cl(p,0) with
        p >= 1 has none; the slice machinery must refuse such algebras).
        """
        if self._default_unit is None:
            for i in range(1, self.dim):
                b = self.basis(i)
                if trace(b).is_zero(0) and (norm_sq(b) - self.one()).is_zero(0):
                    self._default_unit = b
                    break
            else:
                raise EmptyUnitSphere(
                    f"{self.kind} has no imaginary basis unit")
        return self._default_unit


class Element:
    """A value in an AlgebraDef: a coefficient vector over the basis."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = coeffs

    def _check(self, other):
        if self.algebra != other.algebra:
            raise AlgebraMismatch(
                f"operands from {self.algebra.kind} and {other.algebra.kind}")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return Element(self.algebra,
                       tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return Element(self.algebra,
                       tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Element(self.algebra, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check(other)
            idx = self.algebra.mul_index
            sgn = self.algebra.mul_sign
            out = [0] * self.algebra.dim
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                row_i = idx[i]
                row_s = sgn[i]
                for j, b in enumerate(other.coeffs):
                    if b == 0:
                        continue
                    if row_s[j] == 1:
                        out[row_i[j]] += a * b
                    else:
                        out[row_i[j]] -= a * b
            return Element(self.algebra, tuple(out))
        if isinstance(other, (int, float, Fraction)):
            return Element(self.algebra, tuple(a * other for a in self.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        # real scalars commute with everything
        if isinstance(other, (int, float, Fraction)):
            return Element(self.algebra, tuple(other * a for a in self.coeffs))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Element(self.algebra,
                           tuple(Fraction(a) / other if isinstance(a, (int, Fraction))
                                 else a / other for a in self.coeffs))
        if isinstance(other, float):
            return Element(self.algebra, tuple(a / other for a in self.coeffs))
        return NotImplemented

    def __eq__(self, other):
        return (isinstance(other, Element) and self.algebra == other.algebra
                and all(a == b for a, b in zip(self.coeffs, other.coeffs)))

    def __repr__(self):
        return f"Element({self.format()})"

    def format(self):
        """Readable form like '2 + 3i - k'."""
        parts = []
        for name, c in zip(self.algebra.basis_names, self.coeffs):
            if c == 0:
                continue
            mag = c if c > 0 else -c
            sign = ("-" if c < 0 else "") if not parts \
                else (" + " if c > 0 else " - ")
            if name == "1":
                parts.append(f"{sign}{mag}")
            elif mag == 1:
                parts.append(f"{sign}{name}")
            else:
                parts.append(f"{sign}{mag}{name}")
        return "".join(parts) if parts else "0"

    def conj(self):
        return Element(self.algebra,
                       tuple(s * a for s, a in
                             zip(self.algebra.conj_signs, self.coeffs)))

    def real_coeff(self):
        return self.coeffs[0]

    def imag_part(self):
        """x - Re(x) as an element (the component off the unity axis)."""
        return Element(self.algebra, (0 * self.coeffs[0],) + self.coeffs[1:])

    def is_zero(self, tol=0.0):
        return all(abs(c) <= tol for c in self.coeffs)

    def is_real(self, tol=0.0):
        return all(abs(c) <= tol for c in self.coeffs[1:])

    def euclid_norm_sq(self):
        return sum(c * c for c in self.coeffs)

    def euclid_norm(self):
        return math.sqrt(float(self.euclid_norm_sq()))

    def coeffs_float(self):
        return np.array([float(c) for c in self.coeffs])

    def map_coeffs(self, fn):
        return Element(self.algebra, tuple(fn(c) for c in self.coeffs))


# -- basic operations ---------------------------------------------------------

def mul(a, b):
    """Table product a*b."""
    if not isinstance(a, Element) or not isinstance(b, Element):
        raise AlgebraMismatch("mul expects two Elements")
    return a * b


def conj(a):
    """Anti-involution a^c."""
    return a.conj()


def trace(a):
    """t(a) = a + a^c, an element (real iff a is trace-real)."""
    return a + a.conj()


def norm_sq(a):
    """n(a) = a * a^c, an element (real on the quadratic cone)."""
    return a * a.conj()


def approx_eq(a, b, tol=1e-12):
    return (a - b).is_zero(tol)


class ConeDecomposition:
    """x = alpha + beta*J with beta >= 0 and J an imaginary unit.

    At real points beta is 0 and J is the algebra's canonical unit; alpha and
    beta keep whatever exactness the input had (Fractions stay Fractions when
    the square root involved is exact).
    """

    __slots__ = ("algebra", "alpha", "beta", "unit")

    def __init__(self, algebra, alpha, beta, unit):
        self.algebra = algebra
        self.alpha = alpha
        self.beta = beta
        self.unit = unit

    def compose(self):
        return self.algebra.from_real(self.alpha) + self.beta * self.unit

    def conjugate(self):
        """The decomposition of x^c = alpha - beta*J, kept with beta >= 0."""
        return ConeDecomposition(self.algebra, self.alpha, self.beta,
                                 -self.unit)

    def z(self):
        """(alpha, beta) as floats, the point of the upper half plane."""
        return (float(self.alpha), float(self.beta))

    def __repr__(self):
        return (f"ConeDecomposition(alpha={self.alpha}, beta={self.beta}, "
                f"J={self.unit.format()})")


def _exact_sqrt(value):
    """Exact square root of an int/Fraction if one exists, else None."""
    fr = Fraction(value)
    if fr < 0:
        return None
    num = math.isqrt(fr.numerator)
    den = math.isqrt(fr.denominator)
    if num * num == fr.numerator and den * den == fr.denominator:
        return Fraction(num, den)
    return None


def cone_decompose(x, tol=DEFAULT_TOL):
    """Decompose a quadratic-cone point as alpha + beta*J.

    Membership requires t(x) real, n(x) real, and 4 n(x) >= t(x)^2 - tol;
    the violated condition is reported otherwise.  Exact coefficients give
    exact alpha, beta (when the root is exact) and exact J.
    """
    t = trace(x)
    if not t.is_real(tol):
        raise NotInQuadraticCone(
            f"trace not real: t(x) = {t.format()}")
    im = x.imag_part()
    # with t(x) real, Im(x)^c = -Im(x), so n(Im x) = -Im(x)^2
    n_im = -(im * im)
    if not n_im.is_real(tol):
        n = norm_sq(x)
        raise NotInQuadraticCone(f"norm not real: n(x) = {n.format()}")
    beta_sq = n_im.real_coeff()
    alpha = x.real_coeff()
    if im.is_zero(tol):
        return ConeDecomposition(x.algebra, alpha, 0,
                                 x.algebra.default_imaginary_unit())
    # 4 n(x) - t(x)^2 = 4 n(Im x); strictly positive off the real axis
    if beta_sq <= tol * tol:
        raise NotInQuadraticCone(
            f"4 n(x) - t(x)^2 = {float(4 * beta_sq)} not positive")
    beta = None
    if isinstance(beta_sq, (int, Fraction)):
        beta = _exact_sqrt(beta_sq)
    if beta is None:
        beta = math.sqrt(float(beta_sq))
    unit = im * (1 / beta if isinstance(beta, float) else Fraction(1) / beta)
    return ConeDecomposition(x.algebra, alpha, beta, unit)


def is_imaginary_unit(x, tol=DEFAULT_TOL):
    """True when t(x) = 0 and n(x) = 1 within tol."""
    return trace(x).is_zero(tol) and (norm_sq(x) - x.algebra.one()).is_zero(tol)


def invert(x, tol=DEFAULT_TOL):
    """Two-sided inverse.

    If t(x) and n(x) are real within tol (the cone case and a bit beyond),
    the inverse is conj(x)/n(x), exact for exact input.  Otherwise a linear
    solve against the left-multiplication matrix is attempted and the result
    is verified on both sides.
    """
    n = norm_sq(x)
    t = trace(x)
    if t.is_real(tol) and n.is_real(tol):
        n0 = n.real_coeff()
        if n0 == 0 or abs(n0) <= tol * tol:
            raise NotInvertible(f"n(x) = {float(n0)} too small")
        return x.conj() / n0
    A = x.algebra
    L = A.left_mult_matrix(x)
    e0 = np.zeros(A.dim)
    e0[0] = 1.0
    try:
        v = np.linalg.solve(L.T, e0)
    except np.linalg.LinAlgError as exc:
        raise NotInvertible("left multiplication is singular") from exc
    y = A.element(tuple(v))
    scale = max(1.0, x.euclid_norm() * y.euclid_norm())
    if not (x * y - A.one()).is_zero(1e-9 * scale) or \
       not (y * x - A.one()).is_zero(1e-9 * scale):
        raise NotInvertible("solve produced a one-sided candidate only")
    return y


def ordered_product(units, v):
    """[u, v] = u_1(u_2(...(u_m v)...)); [(), v] = v."""
    result = v
    for u in reversed(tuple(units)):
        result = u * result
    return result


def ordered_inverse_product(units, w, tol=DEFAULT_TOL):
    """Solve [u, v] = w for v: applies inverses innermost-first.

    Equals u_m^{-1}(...(u_1^{-1} w)...), the reversed-inverse ordered
    product; the round trip with ordered_product is exact in alternative
    algebras because each u_h, u_h^{-1} pair sits in one associative
    subalgebra.
    """
    result = w
    for u in tuple(units):
        result = invert(u, tol) * result
    return result


class _RowReducer:
    """Incremental Gaussian elimination used for basis completion."""

    def __init__(self, dim):
        self.dim = dim
        self.rows = []
        self.pivots = []

    def try_add(self, vec):
        v = np.array([float(c) for c in vec])
        norm_in = np.linalg.norm(v)
        for row, piv in zip(self.rows, self.pivots):
            v = v - v[piv] * row
        if np.linalg.norm(v) <= 1e-8 * max(1.0, norm_in):
            return False
        piv = int(np.argmax(np.abs(v)))
        v = v / v[piv]
        self.rows.append(v)
        self.pivots.append(piv)
        return True


def splitting_basis(J, tol=DEFAULT_TOL):
    """Real basis {1, J, J_1, J*J_1, ..., J_u, J*J_u} associated with J.

    Greedy completion: scan the basis elements, adding any vector (together
    with its left J-multiple) that enlarges the span.  Left multiplication
    by J squares to -1, so every added pair keeps the span J-stable and the
    process fills the algebra whenever dim is even.
    """
    A = J.algebra
    if not is_imaginary_unit(J, tol):
        raise NotImaginaryUnit(f"not an imaginary unit: {J.format()}")
    if A.dim % 2:
        raise SplittingFailed(f"dim {A.dim} is odd")
    reducer = _RowReducer(A.dim)
    basis = [A.one(), J]
    for v in basis:
        if not reducer.try_add(v.coeffs):
            raise SplittingFailed("1 and J are dependent")
    for i in range(A.dim):
        if len(basis) == A.dim:
            break
        cand = A.basis(i)
        if not reducer.try_add(cand.coeffs):
            continue
        jcand = J * cand
        if not reducer.try_add(jcand.coeffs):
            raise SplittingFailed(
                f"J*{A.basis_names[i]} fell into the current span")
        basis.append(cand)
        basis.append(jcand)
    if len(basis) != A.dim:
        raise SplittingFailed("basis scan exhausted before filling the span")
    return basis


# -- construction and serialization -------------------------------------------

def make_algebra(kind, params=None):
    """Build a supported algebra table.

    kind: 'quaternions', 'octonions', or 'clifford' with params=(p,q); the
    spellings 'clifford(p,q)', 'H', 'O' are accepted as conveniences.
    """
    name = kind.strip().lower() if isinstance(kind, str) else kind
    if name in ("h", "quaternions", "quaternion"):
        idx, sgn, conjs, _ = tables.clifford_table(0, 2)
        return AlgebraDef("quaternions", 4, tables.QUATERNION_NAMES,
                          idx, sgn, conjs, associative=True)
    if name in ("o", "octonions", "octonion"):
        idx, sgn, conjs = tables.octonion_table()
        names = ("1",) + tuple(f"e{i}" for i in range(1, 8))
        return AlgebraDef("octonions", 8, names, idx, sgn, conjs,
                          associative=False)
    if isinstance(name, str) and name.startswith("clifford"):
        rest = name[len("clifford"):].strip()
        if rest:
            rest = rest.strip("():").replace(",", " ")
            pieces = rest.split()
            if len(pieces) != 2 or not all(s.lstrip("-").isdigit() for s in pieces):
                raise UnsupportedKind(f"cannot parse Clifford signature in {kind!r}")
            params = (int(pieces[0]), int(pieces[1]))
        if params is None:
            raise UnsupportedKind("clifford requires a (p, q) signature")
        p, q = params
        idx, sgn, conjs, names = tables.clifford_table(p, q)
        return AlgebraDef(f"clifford({p},{q})", 1 << (p + q), names,
                          idx, sgn, conjs, associative=True)
    raise UnsupportedKind(f"unknown algebra kind {kind!r}")


def algebra_to_json(A):
    """Table dump: {dim, names, mul, conj_signs} with full coefficient vectors."""
    mul = []
    for i in range(A.dim):
        row = []
        for j in range(A.dim):
            vec = [0] * A.dim
            vec[A.mul_index[i][j]] = A.mul_sign[i][j]
            row.append(vec)
        mul.append(row)
    return {
        "dim": A.dim,
        "names": list(A.basis_names),
        "mul": mul,
        "conj_signs": list(A.conj_signs),
    }


def algebra_from_json(obj, kind="custom"):
    """Rebuild an AlgebraDef from a table dump.

    Only monomial tables (each product a signed basis element) are accepted;
    all tables this package writes are monomial.  Associativity is recomputed
    from the table.
    """
    dim = obj["dim"]
    if dim > 64:
        raise DimensionTooLarge(f"dim {dim} exceeds supported 64")
    mul_index = [[0] * dim for _ in range(dim)]
    mul_sign = [[1] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            vec = [decode_number(c) for c in obj["mul"][i][j]]
            nonzero = [(k, c) for k, c in enumerate(vec) if c != 0]
            if len(nonzero) != 1 or nonzero[0][1] not in (1, -1):
                raise UnsupportedKind(
                    "only monomial multiplication tables are supported")
            mul_index[i][j], mul_sign[i][j] = nonzero[0]
    associative = all(
        mul_index[mul_index[i][j]][k] == mul_index[i][mul_index[j][k]]
        and mul_sign[i][j] * mul_sign[mul_index[i][j]][k]
        == mul_sign[j][k] * mul_sign[i][mul_index[j][k]]
        for i in range(dim) for j in range(dim) for k in range(dim)
    )
    return AlgebraDef(kind, dim, obj["names"], mul_index, mul_sign,
                      [int(s) for s in obj["conj_signs"]], associative)


def algebra_to_json_str(A, indent=None):
    return json.dumps(algebra_to_json(A), indent=indent)
