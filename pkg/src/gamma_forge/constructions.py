"""Loop constructions on uniquely 2-divisible groups.

Two ways to deform a group product into a commutative loop:

  circ:   x o y = x y [y,x]^(1/2)        (square root of the commutator)
  oplus:  x (+) y = (x y^2 x)^(1/2)      (square root of a palindrome)

plus the translation between the two loop varieties in both directions, and
unambiguous powers in power-associative loops.  Everything is validated at
construction: loop-ness, commutativity, the automorphic inverse property, and
power coincidence with the source group.
"""

from __future__ import annotations

import math

import numpy as np

from .core import CayleyTable, ConstructionError, EvenOrderError, first_false
from .groups import AnyGroup, Group, is_uniquely_2_divisible, _require_table
from .loops import Loop, check_gamma_axioms, is_left_bruck, is_power_associative, powers_coincide


def _perm_order(a: np.ndarray) -> int:
    """Order of a permutation image array.

    Iterated composition wins for the small orders typical of translation
    commutators; pathological inputs fall back to exact cycle lengths.
    """
    n = len(a)
    ident = np.arange(n)
    c = a
    k = 1
    while not (c == ident).all():
        c = a[c]
        k += 1
        if k > 4 * n:
            lengths = set()
            seen = [False] * n
            for start in range(n):
                if seen[start]:
                    continue
                ln, j = 1, int(a[start])
                seen[start] = True
                while j != start:
                    seen[j] = True
                    j = int(a[j])
                    ln += 1
                lengths.add(ln)
            return math.lcm(*lengths)
    return k


def _perm_power(a: np.ndarray, k: int) -> np.ndarray:
    out = np.arange(len(a))
    base = a
    while k:
        if k & 1:
            out = base[out]
        base = base[base]
        k >>= 1
    return out


def _provenance(g: AnyGroup, construction: str) -> dict:
    return {"source": g.source_spec or g.name, "construction": construction}


def circ_loop(g: AnyGroup, check: bool = True) -> Loop:
    """The commutative loop with product x*y*sqrt([y,x]) on a uniquely
    2-divisible group.

    Validates on construction: the table is a loop with the group's identity,
    it is commutative, it has the automorphic inverse property, and powers
    coincide with group powers.
    """
    g = _require_table(g, "circ construction")
    if not is_uniquely_2_divisible(g):
        raise ConstructionError(f"{g.name} is not uniquely 2-divisible")
    t = g.tbl
    s = g.sqrt_table
    k = g.comm_table.T  # [y, x] at position (x, y)
    c = t[t, s[k]]
    table = CayleyTable(c, name=f"circ({g.name})", element_names=g.table.element_names)
    q = Loop(table, source=_provenance(g, "circ"))
    if check:
        _validate_constructed(g, q, require_commutative=True)
    return q


def oplus_loop(g: AnyGroup, check: bool = True) -> Loop:
    """The loop with product sqrt(x*y^2*x) on a uniquely 2-divisible group.

    The left Bruck identity is a property check left to callers; construction
    validates loop-ness and power coincidence.
    """
    g = _require_table(g, "oplus construction")
    if not is_uniquely_2_divisible(g):
        raise ConstructionError(f"{g.name} is not uniquely 2-divisible")
    t = g.tbl
    s = g.sqrt_table
    n = g.order
    a = t[:, g.squares]                       # [x, y] -> x * y^2
    b = t[a, np.arange(n)[:, None]]           # [x, y] -> (x * y^2) * x
    table = CayleyTable(s[b], name=f"oplus({g.name})", element_names=g.table.element_names)
    q = Loop(table, source=_provenance(g, "oplus"))
    if check:
        _validate_constructed(g, q, require_commutative=False)
    return q


def _validate_constructed(g: Group, q: Loop, require_commutative: bool):
    if q.mul(0, 0) != 0:
        raise ConstructionError("constructed loop lost the source identity")
    if require_commutative:
        w = first_false(q.tbl == q.tbl.T)
        if w is not None:
            raise ConstructionError(f"constructed table not commutative at {w}")
        inv = q.inverse
        if inv is None:
            raise ConstructionError("constructed loop lacks two-sided inverses")
        aip = inv[q.tbl] == q.tbl[inv[:, None], inv[None, :]]
        w = first_false(aip)
        if w is not None:
            raise ConstructionError(f"automorphic inverse property fails at {w}")
    ok, w = powers_coincide(g, q)
    if not ok:
        raise ConstructionError(f"powers disagree with the source group at {w}")


def loop_sqrt_table(q: Loop) -> np.ndarray:
    """Elementwise square roots x^((m+1)/2) in an odd-order power-associative loop."""
    ok, bad = is_power_associative(q)
    if not ok:
        raise ConstructionError(f"loop is not power-associative at element {q.label(bad)}")
    out = np.empty(q.n, dtype=np.int32)
    for x in range(q.n):
        m = q.order_of(x)
        if m == 0 or m % 2 == 0:
            raise EvenOrderError(f"element {q.label(x)} has no odd order (got {m})")
        out[x] = q.left_power(x, (m + 1) // 2)
    return out


def bruck_from_gamma(q: Loop, verify: bool = True) -> Loop:
    """Translate a commutative loop in the source variety to its left Bruck
    partner: x (+) y = (x^-1 \\ (y^2 x))^(1/2), everything computed in q.

    With ``verify`` the four variety axioms are checked first.
    """
    if q.n % 2 == 0:
        raise ConstructionError("translation requires odd order")
    if verify:
        verdict = check_gamma_axioms(q)
        if not verdict.all_hold:
            raise ConstructionError(f"input fails the variety axioms: {verdict}")
    inv = q.inverse
    if inv is None:
        raise ConstructionError("input lacks two-sided inverses")
    lsqrt = loop_sqrt_table(q)
    t = q.tbl
    n = q.n
    sq = np.array([q.left_power(y, 2) for y in range(n)], dtype=np.int32)
    d = t[sq[None, :], np.arange(n)[:, None]]   # [x, y] -> y^2 * x
    e = q.ldiv[inv[:, None], d]                 # [x, y] -> x^-1 \ (y^2 x)
    table = CayleyTable(lsqrt[e], name=f"bruck({q.name})",
                        element_names=q.table.element_names)
    return Loop(table, source={**q.source, "construction": "gamma->bruck"})


def gamma_from_bruck(q: Loop, verify: bool = True) -> Loop:
    """Translate a left Bruck loop of odd order back: the product of x and y is
    the image of the identity under L_x L_y [L_y, L_x]^(1/2).

    The commutator permutation [L_y, L_x] must have odd order for every pair;
    a violating pair is reported by name.
    """
    if q.n % 2 == 0:
        raise ConstructionError("translation requires odd order")
    if verify:
        ok, w = is_left_bruck(q)
        if not ok:
            raise ConstructionError(f"input is not a left Bruck loop, witness {w}")
    t = q.tbl
    ld = q.ldiv
    n = q.n
    out = np.empty((n, n), dtype=np.int32)
    for x in range(n):
        for y in range(n):
            a = ld[x][ld[y]]      # apply L_y^-1 then L_x^-1
            a = t[x][t[y][a]]     # then L_y, then L_x
            m = _perm_order(a)
            if m % 2 == 0:
                raise EvenOrderError(
                    f"translation commutator at ({q.label(x)},{q.label(y)}) has even order {m}")
            s = _perm_power(a, (m + 1) // 2)
            out[x, y] = s[t[y, x]]
    table = CayleyTable(out, name=f"gamma({q.name})", element_names=q.table.element_names)
    return Loop(table, source={**q.source, "construction": "bruck->gamma"})


def power(q: Loop, x: int, k: int) -> int:
    """The unambiguous k-th power of x; negative k through the two-sided inverse.

    Requires the submagma generated by x to be associative (checked), which
    is what makes the bracketing irrelevant.
    """
    members = _cyclic_members(q, x)
    idx = {v: i for i, v in enumerate(members)}
    m = len(members)
    sub = np.array([[idx[q.mul(a, b)] for b in members] for a in members], dtype=np.int32)
    for i in range(m):
        if not (sub[sub[i], :] == sub[i][sub]).all():
            raise ConstructionError(f"powers of {q.label(x)} are ambiguous "
                                    f"(generated submagma is not associative)")
    if k < 0:
        inv = q.inverse
        if inv is None:
            raise ConstructionError("negative powers need two-sided inverses")
        return power(q, int(inv[x]), -k)
    return q.left_power(x, k)


def _cyclic_members(q: Loop, x: int) -> list[int]:
    members = {x}
    frontier = [x]
    while frontier:
        new = []
        for a in frontier:
            for b in list(members):
                for c in (q.mul(a, b), q.mul(b, a)):
                    if c not in members:
                        members.add(c)
                        new.append(c)
        frontier = new
    return sorted(members)
