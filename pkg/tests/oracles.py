"""Independent desk oracles used to freeze expected values.

Everything here works on labeled pairs/tuples with direct modular arithmetic
and brute-force searches, never through the library's group or loop engines,
so the two sides of every comparison stay independent.
"""

from itertools import product

# --- the order-21 split extension: pairs (h, k), h mod 7, k mod 3,
#     generator of the cyclic part acting by h -> 2h

P21 = [(h, k) for k in range(3) for h in range(7)]  # index order used by the library


def mul21(a, b):
    (h1, k1), (h2, k2) = a, b
    return ((h1 + pow(2, k1, 7) * h2) % 7, (k1 + k2) % 3)


def inv21(a):
    for b in P21:
        if mul21(a, b) == (0, 0) and mul21(b, a) == (0, 0):
            return b
    raise AssertionError(f"no inverse for {a}")


def sqrt21(a):
    roots = [b for b in P21 if mul21(b, b) == a]
    assert len(roots) == 1, f"square root of {a} not unique: {roots}"
    return roots[0]


def comm21(x, y):
    return mul21(mul21(mul21(inv21(x), inv21(y)), x), y)


def circ21(x, y):
    return mul21(mul21(x, y), sqrt21(comm21(y, x)))


def oplus21(x, y):
    return sqrt21(mul21(mul21(x, mul21(y, y)), x))


def idx21(a):
    return P21.index(a)


def least_nonassoc_triple_circ21():
    for x, y, z in product(P21, repeat=3):
        if circ21(circ21(x, y), z) != circ21(x, circ21(y, z)):
            return (x, y, z, circ21(circ21(x, y), z), circ21(x, circ21(y, z)))
    return None


# --- the order-81 wreath-style extension: pairs (v, k) with v in (Z3)^3 and
#     k mod 3 acting by cyclic coordinate shift

V3 = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
P81 = [(v, k) for k in range(3) for v in V3]


def shift(v, k):
    return tuple(v[(i - k) % 3] for i in range(3))


def mul81(a, b):
    (v, k), (w, m) = a, b
    wv = shift(w, k)
    return (tuple((v[i] + wv[i]) % 3 for i in range(3)), (k + m) % 3)


def inv81(a):
    for b in P81:
        if mul81(a, b) == ((0, 0, 0), 0) and mul81(b, a) == ((0, 0, 0), 0):
            return b
    raise AssertionError(f"no inverse for {a}")


def comm81(x, y):
    return mul81(mul81(mul81(inv81(x), inv81(y)), x), y)


def idx81(a):
    return P81.index(a)


def center81():
    e = ((0, 0, 0), 0)
    out = []
    for a in P81:
        if all(mul81(a, x) == mul81(x, a) for x in P81):
            out.append(a)
    return out


def second_center81():
    z1 = set(center81())
    out = []
    for a in P81:
        if all(comm81(a, x) in z1 for x in P81):
            out.append(a)
    return out
