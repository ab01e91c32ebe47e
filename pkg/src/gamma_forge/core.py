"""Finite magmas as Cayley tables, permutations, and extensional permutation groups.

Elements are dense indices 0..n-1 throughout.  Tables are materialized numpy
arrays up to a configurable cap; permutation groups are stored extensionally
(every element), which keeps all downstream checks exhaustively testable at
desk scale.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

DEFAULT_TABLE_CAP = 3000
DEFAULT_CLOSURE_CAP = 2_000_000

TABLE_CAP_ENV = "GAMMA_FORGE_TABLE_CAP"


def table_cap() -> int:
    """Largest order for which multiplication tables are materialized."""
    raw = os.environ.get(TABLE_CAP_ENV)
    if raw is None:
        return DEFAULT_TABLE_CAP
    try:
        return int(raw)
    except ValueError:
        raise ConstructionError(f"bad {TABLE_CAP_ENV} value: {raw!r}")


class GammaForgeError(Exception):
    """Base class for errors raised by this package."""


class ConstructionError(GammaForgeError):
    """A table, group, or loop could not be built from the given data."""


class CapExceededError(GammaForgeError):
    """A closure or table exceeded its configured size cap."""

    def __init__(self, message: str, partial_size: int | None = None):
        super().__init__(message)
        self.partial_size = partial_size


class EvenOrderError(GammaForgeError):
    """A square root was requested of an element/permutation of even order."""


def first_false(mask: np.ndarray) -> tuple[int, ...] | None:
    """Lexicographically least index where a boolean array is False, or None."""
    flat = np.asarray(mask).reshape(-1)
    if flat.all():
        return None
    # argmin of a bool array returns the first False in C order
    idx = int(np.argmin(flat))
    return tuple(int(i) for i in np.unravel_index(idx, np.shape(mask)))


# ---------------------------------------------------------------------------
# Cayley tables


@dataclass(frozen=True)
class ClassifyResult:
    is_latin: bool
    has_identity: bool
    is_loop: bool
    identity_index: int | None
    witness: str | None


class CayleyTable:
    """An n x n multiplication table over elements 0..n-1.

    Immutable after construction; ``table[x, y]`` is the product x*y.
    """

    def __init__(self, table, name: str = "", element_names: Sequence[str] | None = None):
        arr = np.array(table, dtype=np.int32)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ConstructionError(f"table must be square, got shape {arr.shape}")
        n = arr.shape[0]
        if n < 1:
            raise ConstructionError("table must have at least one element")
        bad = first_false((arr >= 0) & (arr < n))
        if bad is not None:
            x, y = bad
            raise ConstructionError(
                f"entry at ({x},{y}) is {int(arr[x, y])}, outside 0..{n - 1}"
            )
        arr.setflags(write=False)
        self.n = n
        self.table = arr
        self.name = name
        self.element_names = list(element_names) if element_names is not None else None

    def product(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def label(self, x: int) -> str:
        if self.element_names is not None:
            return self.element_names[x]
        return str(x)

    def __repr__(self):
        name = f" {self.name!r}" if self.name else ""
        return f"<CayleyTable{name} n={self.n}>"

    @cached_property
    def classification(self) -> ClassifyResult:
        return classify(self)

    @cached_property
    def left_division(self) -> np.ndarray:
        """Array D with D[x, y] = x\\y, i.e. the z solving x*z = y."""
        if not self.classification.is_latin:
            raise ConstructionError(f"not a Latin square: {self.classification.witness}")
        div = np.argsort(self.table, axis=1).astype(np.int32)
        div.setflags(write=False)
        return div

    @cached_property
    def right_division(self) -> np.ndarray:
        """Array D with D[y, x] = y/x, i.e. the z solving z*x = y."""
        if not self.classification.is_latin:
            raise ConstructionError(f"not a Latin square: {self.classification.witness}")
        div = np.argsort(self.table, axis=0).astype(np.int32)
        div.setflags(write=False)
        return div


def build_table(
    n: int,
    product: Callable[[int, int], int],
    name: str = "",
    element_names: Sequence[str] | None = None,
) -> CayleyTable:
    """Materialize a table from a product rule, validating every entry."""
    if n < 1:
        raise ConstructionError(f"element count must be >= 1, got {n}")
    arr = np.empty((n, n), dtype=np.int32)
    for x in range(n):
        for y in range(n):
            v = product(x, y)
            if not 0 <= v < n:
                raise ConstructionError(f"product rule gave {v} at ({x},{y}), outside 0..{n - 1}")
            arr[x, y] = v
    return CayleyTable(arr, name=name, element_names=element_names)


def classify(t: CayleyTable) -> ClassifyResult:
    """Decide Latin-ness and loop-ness, with a witness for any failure."""
    arr = t.table
    n = t.n
    ref = np.arange(n, dtype=arr.dtype)
    rows_ok = (np.sort(arr, axis=1) == ref).all(axis=1)
    cols_ok = (np.sort(arr, axis=0) == ref[:, None]).all(axis=0)
    if not rows_ok.all():
        r = int(np.argmin(rows_ok))
        return ClassifyResult(False, False, False, None, f"row {r} is not a permutation")
    if not cols_ok.all():
        c = int(np.argmin(cols_ok))
        return ClassifyResult(False, False, False, None, f"column {c} is not a permutation")
    # two-sided identity: a row equal to 0..n-1 whose matching column also is
    left_ids = np.nonzero((arr == ref).all(axis=1))[0]
    for e in left_ids:
        if (arr[:, e] == ref).all():
            return ClassifyResult(True, True, True, int(e), None)
    return ClassifyResult(True, False, False, None, "no two-sided identity")


def translation(t: CayleyTable, x: int, side: str) -> "Permutation":
    """Left translation y -> x*y (row x) or right translation y -> y*x (column x)."""
    if side == "left":
        images, where = t.table[x, :], f"row {x}"
    elif side == "right":
        images, where = t.table[:, x], f"column {x}"
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if len(set(images.tolist())) != t.n:
        raise ConstructionError(f"{side} translation by {x} is not a bijection ({where} has repeats)")
    return Permutation(images)


def left_divide(t: CayleyTable, x: int, y: int) -> int:
    """The unique z with x*z = y (requires a loop)."""
    if not t.classification.is_loop:
        raise ConstructionError(f"division requires a loop: {t.classification.witness}")
    return int(t.left_division[x, y])


def right_divide(t: CayleyTable, y: int, x: int) -> int:
    """The unique z with z*x = y (requires a loop)."""
    if not t.classification.is_loop:
        raise ConstructionError(f"division requires a loop: {t.classification.witness}")
    return int(t.right_division[y, x])


# ---------------------------------------------------------------------------
# Permutations


class Permutation:
    """A bijection of 0..n-1, stored as the image tuple.

    Composition follows right-action order: ``p * q`` applies p first, then q,
    so translation chains read in the same order they act.
    """

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(i) for i in images)
        n = len(imgs)
        seen = [False] * n
        for i in imgs:
            if not 0 <= i < n or seen[i]:
                raise ConstructionError(f"not a permutation of 0..{n - 1}: {imgs}")
            seen[i] = True
        object.__setattr__(self, "images", imgs)

    def __setattr__(self, *a):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        o = other.images
        return Permutation(tuple(o[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[list[int]]:
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(cyc)
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()))

    def power(self, k: int) -> "Permutation":
        n = self.degree
        out = [0] * n
        for cyc in self.cycles():
            m = len(cyc)
            for i, v in enumerate(cyc):
                out[v] = cyc[(i + k) % m]
        return Permutation(out)

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        cyc = [c for c in self.cycles() if len(c) > 1]
        if not cyc:
            return f"Permutation(id, n={self.degree})"
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)
        return f"Permutation({body}, n={self.degree})"


def perm_sqrt_odd(p: Permutation) -> Permutation:
    """The square root p^((m+1)/2) of an odd-order permutation.

    Squaring the result gives back p, and the result is a power of p, hence
    lies in any group containing p.  Even order is an error: the root would
    not be unique in the intended setting.
    """
    m = p.order()
    if m % 2 == 0:
        raise EvenOrderError(f"permutation has even order {m}")
    return p.power((m + 1) // 2)


# ---------------------------------------------------------------------------
# Extensional permutation groups


class PermGroup:
    """A permutation group stored extensionally (all elements present)."""

    def __init__(self, degree: int, elements: Iterable[Permutation],
                 generators: Sequence[Permutation] = ()):
        self.degree = degree
        self.elements = frozenset(elements)
        self.generators = tuple(generators)
        if Permutation.identity(degree) not in self.elements:
            raise ConstructionError("element set does not contain the identity")

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Permutation) -> bool:
        return p in self.elements

    def __eq__(self, other):
        return (isinstance(other, PermGroup) and self.degree == other.degree
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.degree, self.elements))

    def __repr__(self):
        return f"<PermGroup degree={self.degree} order={len(self.elements)}>"


def close(generators: Sequence[Permutation], cap: int = DEFAULT_CLOSURE_CAP) -> PermGroup:
    """Extensional closure of permutations under composition.

    Frontier-based fixpoint; raises CapExceededError with the partial size if
    the closure grows past ``cap``.
    """
    gens = list(generators)
    if not gens:
        raise ConstructionError("need at least one generator")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise ConstructionError("generators have mixed degrees")
    ident = Permutation.identity(degree)
    elements = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for b in frontier:
            for a in gens:
                c = b * a
                if c not in elements:
                    elements.add(c)
                    new.append(c)
                    if len(elements) > cap:
                        raise CapExceededError(
                            f"closure exceeded cap {cap} (partial size {len(elements)})",
                            partial_size=len(elements),
                        )
        frontier = new
    return PermGroup(degree, elements, gens)


def stabilizer_of(g: PermGroup, point: int) -> PermGroup:
    """Subgroup of elements fixing the given point."""
    fixed = [p for p in g.elements if p.images[point] == point]
    return PermGroup(g.degree, fixed, tuple(fixed))
