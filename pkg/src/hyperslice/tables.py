"""Multiplication table builders for the supported algebras.

Tables are monomial: the product of two basis elements is +/- another basis
element, stored as (index, sign) pairs.  This keeps exact rational arithmetic
exact and makes the dense structure-constant tensor trivial to derive.

Octonion convention
-------------------
The Fano orientation is fixed once and for all by the oriented triples

    (1,2,3) (1,4,5) (2,4,6) (3,4,7) (2,5,7) (3,6,5) (1,7,6)

meaning e1*e2 = e3 and cyclically within each triple.  This is the table
obtained by Cayley-Dickson doubling of the quaternions with doubling unit e4,
so e1*e4 = e5, e2*e4 = e6, e3*e4 = e7.  Tests depend on this orientation;
changing it silently would flip signs in octonion examples.

Clifford convention
-------------------
Cl(p,q) has generators e_1..e_{p+q} with e_i^2 = +1 for i <= p and -1 for
i > p.  Basis blades are indexed by subset bitmask (bit i-1 set means the
blade contains e_i), so the basis order is 1, e1, e2, e12, e3, e13, ...
Conjugation is Clifford conjugation: sign (-1)^(g(g+1)/2) on grade g.
"""

from .errors import DimensionTooLarge, UnsupportedKind

OCTONION_TRIPLES = (
    (1, 2, 3),
    (1, 4, 5),
    (2, 4, 6),
    (3, 4, 7),
    (2, 5, 7),
    (3, 6, 5),
    (1, 7, 6),
)

MAX_CLIFFORD_GENERATORS = 6

QUATERNION_NAMES = ("1", "i", "j", "k")


def octonion_table():
    """(index, sign) table and conjugation signs for the octonions."""
    dim = 8
    idx = [[0] * dim for _ in range(dim)]
    sgn = [[1] * dim for _ in range(dim)]
    for a in range(dim):
        idx[0][a] = idx[a][0] = a
    for a in range(1, dim):
        idx[a][a] = 0
        sgn[a][a] = -1
    for a, b, c in OCTONION_TRIPLES:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            idx[x][y] = z
            sgn[x][y] = 1
            idx[y][x] = z
            sgn[y][x] = -1
    conj = [1] + [-1] * 7
    return idx, sgn, conj


def _blade_product(mask_a, mask_b, square_signs):
    """Multiply blades given as bitmasks; returns (mask, sign).

    Concatenates the two sorted generator lists, counts the transpositions of
    a bubble sort (each swap of distinct generators contributes -1), then
    cancels equal adjacent pairs using each generator's square sign.
    """
    gens = [i for i in range(len(square_signs)) if mask_a >> i & 1]
    gens += [i for i in range(len(square_signs)) if mask_b >> i & 1]
    sign = 1
    # bubble sort with swap counting; lists are tiny (<= 12 entries)
    changed = True
    while changed:
        changed = False
        for t in range(len(gens) - 1):
            if gens[t] > gens[t + 1]:
                gens[t], gens[t + 1] = gens[t + 1], gens[t]
                sign = -sign
                changed = True
    out = []
    t = 0
    while t < len(gens):
        if t + 1 < len(gens) and gens[t] == gens[t + 1]:
            sign *= square_signs[gens[t]]
            t += 2
        else:
            out.append(gens[t])
            t += 1
    mask = 0
    for g in out:
        mask |= 1 << g
    return mask, sign


def clifford_table(p, q):
    """(index, sign) table, conjugation signs and names for Cl(p,q)."""
    if p < 0 or q < 0:
        raise UnsupportedKind(f"invalid Clifford signature ({p},{q})")
    m = p + q
    if m > MAX_CLIFFORD_GENERATORS:
        raise DimensionTooLarge(
            f"Cl({p},{q}) needs a {2 ** m}-dimensional table; supported up to "
            f"{MAX_CLIFFORD_GENERATORS} generators"
        )
    square_signs = [1] * p + [-1] * q
    dim = 1 << m
    idx = [[0] * dim for _ in range(dim)]
    sgn = [[1] * dim for _ in range(dim)]
    for a in range(dim):
        for b in range(dim):
            mask, sign = _blade_product(a, b, square_signs)
            idx[a][b] = mask
            sgn[a][b] = sign
    conj = []
    for a in range(dim):
        g = a.bit_count()
        conj.append(-1 if (g * (g + 1) // 2) % 2 else 1)
    names = []
    for a in range(dim):
        if a == 0:
            names.append("1")
        else:
            names.append("e" + "".join(str(i + 1) for i in range(m) if a >> i & 1))
    return idx, sgn, conj, names
