"""Finite Coxeter groups as signed permutations of positive roots.

Every spherical type is realized by its root system over an exact ring
(integers for the crystallographic families, Z[2cos(pi/m)] for H and I_2).
A group element is stored as the images of the positive roots under the
element: ``images[r]`` is the code of ``w(alpha_r)``, where a non-negative
code ``j`` means ``+alpha_j`` and a negative code ``~j`` means ``-alpha_j``.

Generators are labelled 1..n in every public function.  Numbering follows
the diagrams used throughout the package:

* A_n: chain 1-2-...-n
* B_n: 1 =4= 2 - 3 - ... - n
* D_n: 1 and 2 both attached to 3, chain 3 - 4 - ... - n
* E_n: chain 2 - 3 - ... - n, with 1 attached to 4
* F_4: 1 - 2 =4= 3 - 4
* H_n: 1 =5= 2 - 3 (- 4)
* I_2(m): 1 =m= 2
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .scalars import Scalar, ScalarRing


class UnsupportedType(ValueError):
    """Raised for family/rank combinations outside the spherical classification."""


FAMILIES = ("A", "B", "D", "E", "F", "H", "I2")

_TYPE_RE = re.compile(r"^\s*(?:([ABDEFH])\s*_?\s*(\d+)|I\s*_?\s*2\s*\(\s*(\d+)\s*\))\s*$")


@dataclass(frozen=True)
class CoxeterType:
    family: str
    rank: int
    i2_label: int | None = None

    def __post_init__(self):
        f, n = self.family, self.rank
        ok = (
            (f == "A" and n >= 1)
            or (f == "B" and n >= 2)
            or (f == "D" and n >= 4)
            or (f == "E" and n in (6, 7, 8))
            or (f == "F" and n == 4)
            or (f == "H" and n in (3, 4))
            or (f == "I2" and n == 2 and self.i2_label is not None and self.i2_label >= 5)
        )
        if not ok:
            raise UnsupportedType(f"unsupported spherical type {self.family} rank {self.rank} "
                                  f"label {self.i2_label}")

    @property
    def name(self) -> str:
        if self.family == "I2":
            return f"I2({self.i2_label})"
        return f"{self.family}{self.rank}"

    def __str__(self) -> str:
        return self.name

    @cached_property
    def edges(self) -> dict[tuple[int, int], int]:
        """Edges {(i, j): m_ij} with i < j and m_ij >= 3, 1-based labels."""
        f, n = self.family, self.rank
        e: dict[tuple[int, int], int] = {}
        if f == "A":
            e = {(i, i + 1): 3 for i in range(1, n)}
        elif f == "B":
            e = {(i, i + 1): 3 for i in range(1, n)}
            e[(1, 2)] = 4
        elif f == "D":
            e = {(i, i + 1): 3 for i in range(3, n)}
            e[(1, 3)] = 3
            e[(2, 3)] = 3
        elif f == "E":
            e = {(i, i + 1): 3 for i in range(2, n)}
            e[(1, 4)] = 3
        elif f == "F":
            e = {(1, 2): 3, (2, 3): 4, (3, 4): 3}
        elif f == "H":
            e = {(i, i + 1): 3 for i in range(1, n)}
            e[(1, 2)] = 5
        elif f == "I2":
            e = {(1, 2): self.i2_label}
        return e

    @cached_property
    def coxeter_matrix(self) -> tuple[tuple[int, ...], ...]:
        n = self.rank
        rows = []
        for i in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                if i == j:
                    row.append(1)
                else:
                    row.append(self.edges.get((min(i, j), max(i, j)), 2))
            rows.append(tuple(row))
        return tuple(rows)

    def m(self, i: int, j: int) -> int:
        return self.coxeter_matrix[i - 1][j - 1]

    @property
    def crystallographic(self) -> bool:
        return self.family in ("A", "B", "D", "E", "F")

    def ring_label(self) -> int:
        if self.family == "H":
            return 5
        if self.family == "I2":
            return self.i2_label
        return 2


@lru_cache(maxsize=None)
def parse_type(text: str) -> CoxeterType:
    """Parse "A3", "B4", "E8", "H3", "I2(7)" and similar."""
    mt = _TYPE_RE.match(text)
    if not mt:
        raise UnsupportedType(f"cannot parse Coxeter type {text!r}")
    if mt.group(3) is not None:
        return CoxeterType("I2", 2, int(mt.group(3)))
    return CoxeterType(mt.group(1), int(mt.group(2)))


def _as_type(t: CoxeterType | str) -> CoxeterType:
    return parse_type(t) if isinstance(t, str) else t


def _cartan_entry(ctype: CoxeterType, ring: ScalarRing, i: int, j: int) -> Scalar:
    """a_ij with s_i(alpha_j) = alpha_j - a_ij alpha_i (1-based labels)."""
    if i == j:
        return ring(2)
    m = ctype.m(i, j)
    if m == 2:
        return ring(0)
    if m == 3:
        return ring(-1)
    if ctype.crystallographic and m == 4:
        # Long root on the lower label: a_12 = -2, a_21 = -1 for B_n and a_23 = -2 for F_4.
        return ring(-2) if i < j else ring(-1)
    # Symmetric realization with c = 2cos(pi/m) in the ring for this type.
    if m != ring.m:
        raise UnsupportedType(f"edge label {m} not representable in {ring}")
    return -ring.generator


class RootSystem:
    """Positive roots of a spherical type with generator action tables.

    Roots are built breadth-first from the simple roots, so simple root i
    (1-based) has index i-1.  ``act[i-1][r]`` is the signed code of
    ``s_i(alpha_r)``.
    """

    def __init__(self, ctype: CoxeterType):
        self.ctype = ctype
        self.rank = n = ctype.rank
        self.ring = ring = ScalarRing(ctype.ring_label())
        self.cartan = [[_cartan_entry(ctype, ring, i, j) for j in range(1, n + 1)]
                       for i in range(1, n + 1)]
        zero, one = ring.zero, ring.one
        simple = [tuple(one if k == i else zero for k in range(n)) for i in range(n)]
        roots: list[tuple[Scalar, ...]] = list(simple)
        index = {r: k for k, r in enumerate(roots)}
        queue = deque(range(n))
        while queue:
            k = queue.popleft()
            r = roots[k]
            for i in range(n):
                if k == i:
                    continue
                img = self._reflect(i, r)
                if img not in index:
                    index[img] = len(roots)
                    roots.append(img)
                    queue.append(index[img])
        self.roots = roots
        self.index = index
        act = []
        for i in range(n):
            row = []
            for k, r in enumerate(roots):
                row.append(~i if k == i else index[self._reflect(i, r)])
            act.append(tuple(row))
        self.act = act

    def _reflect(self, i: int, v: tuple[Scalar, ...]) -> tuple[Scalar, ...]:
        coef = self.ring.zero
        row = self.cartan[i]
        for j, vj in enumerate(v):
            if not vj.is_zero() and not row[j].is_zero():
                coef = coef + row[j] * vj
        if coef.is_zero():
            return v
        out = list(v)
        out[i] = out[i] - coef
        return tuple(out)

    @property
    def name(self) -> str:
        return self.ctype.name

    def __repr__(self) -> str:
        return f"RootSystem({self.name}, {len(self.roots)} positive roots)"

    @property
    def num_positive_roots(self) -> int:
        return len(self.roots)

    @cached_property
    def identity(self) -> CoxeterElement:
        return CoxeterElement(tuple(range(len(self.roots))), self)

    @cached_property
    def generators(self) -> tuple[CoxeterElement, ...]:
        return tuple(CoxeterElement(row, self) for row in self.act)

    def generator(self, i: int) -> CoxeterElement:
        self.check_label(i)
        return self.generators[i - 1]

    def check_label(self, i: int) -> None:
        if not 1 <= i <= self.rank:
            raise IndexError(f"generator {i} out of range 1..{self.rank} for {self.name}")

    @cached_property
    def longest(self) -> CoxeterElement:
        return longest_element(self)

    def __reduce__(self):
        return (build_root_system, (self.ctype,))


def build_root_system(descriptor: CoxeterType | str | RootSystem) -> RootSystem:
    """The (cached, shared) root system of a spherical type."""
    if isinstance(descriptor, RootSystem):
        return descriptor
    return _root_system(_as_type(descriptor))


@lru_cache(maxsize=None)
def _root_system(ctype: CoxeterType) -> RootSystem:
    return RootSystem(ctype)


@dataclass(frozen=True)
class CoxeterElement:
    images: tuple[int, ...]
    rs: RootSystem = field(repr=False)

    def __repr__(self) -> str:
        word = " ".join(map(str, canonical_word(self))) or "1"
        return f"CoxeterElement({self.rs.name}: {word})"

    def __mul__(self, other: CoxeterElement) -> CoxeterElement:
        return cox_multiply(self, other)

    def inverse(self) -> CoxeterElement:
        return cox_inverse(self)

    @cached_property
    def length(self) -> int:
        return sum(1 for c in self.images if c < 0)

    @cached_property
    def right_mask(self) -> int:
        """Bitmask of right descents (bit i-1 for generator i)."""
        mask = 0
        for i in range(self.rs.rank):
            if self.images[i] < 0:
                mask |= 1 << i
        return mask

    @cached_property
    def left_mask(self) -> int:
        return cox_inverse(self).right_mask

    def apply(self, code: int) -> int:
        """Image of a signed root code."""
        return self.images[code] if code >= 0 else ~self.images[~code]


def cox_multiply(a: CoxeterElement, b: CoxeterElement) -> CoxeterElement:
    """The product a*b, acting as a(b(r))."""
    if a.rs is not b.rs:
        raise ValueError(f"mismatched root systems {a.rs.name} and {b.rs.name}")
    ai = a.images
    return CoxeterElement(tuple(ai[c] if c >= 0 else ~ai[~c] for c in b.images), a.rs)


def cox_inverse(a: CoxeterElement) -> CoxeterElement:
    inv = [0] * len(a.images)
    for r, c in enumerate(a.images):
        if c >= 0:
            inv[c] = r
        else:
            inv[~c] = ~r
    return CoxeterElement(tuple(inv), a.rs)


def cox_from_word(rs: RootSystem, word: Iterable[int]) -> CoxeterElement:
    w = rs.identity
    for i in word:
        w = cox_multiply(w, rs.generator(i))
    return w


def cox_length(a: CoxeterElement) -> int:
    return a.length


def _mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def descent_set(a: CoxeterElement, side: str = "right") -> frozenset[int]:
    """Left descents {i : l(s_i a) < l(a)} or right descents {i : l(a s_i) < l(a)}.

    Right descents are the simple roots sent negative by ``a``; left descents
    are those sent negative by ``a^-1``.
    """
    if side == "right":
        return _mask_to_set(a.right_mask)
    if side == "left":
        return _mask_to_set(a.left_mask)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def longest_element(rs: RootSystem) -> CoxeterElement:
    """Greedy ascent: multiply by non-descents until every generator is a descent."""
    w = rs.identity
    full = (1 << rs.rank) - 1
    while w.right_mask != full:
        free = ~w.right_mask & full
        i = (free & -free).bit_length()
        w = cox_multiply(w, rs.generators[i - 1])
    return w


def canonical_word(a: CoxeterElement) -> list[int]:
    """Reduced word obtained by repeatedly peeling the smallest left descent."""
    word = []
    w = a
    gens = a.rs.generators
    while w.length:
        mask = w.left_mask
        i = (mask & -mask).bit_length()
        word.append(i)
        w = cox_multiply(gens[i - 1], w)
    return word


class GroupTooLarge(RuntimeError):
    pass


def enumerate_group(gens: Sequence[CoxeterElement], cap: int = 2_000_000) -> dict[CoxeterElement, tuple[int, int | None]]:
    """BFS closure of the subgroup generated by ``gens``.

    Returns a parent map {element: (parent index in insertion order, generator index)};
    the identity maps to (-1, None).  Insertion order is BFS order.
    """
    if not gens:
        raise ValueError("need at least one generator")
    rs = gens[0].rs
    start = rs.identity
    seen: dict[CoxeterElement, tuple[int, int | None]] = {start: (-1, None)}
    order = [start]
    head = 0
    while head < len(order):
        w = order[head]
        for gi, g in enumerate(gens):
            nxt = cox_multiply(w, g)
            if nxt not in seen:
                seen[nxt] = (head, gi)
                order.append(nxt)
                if len(order) > cap:
                    raise GroupTooLarge(f"closure exceeds cap {cap}")
        head += 1
    return seen


def group_order(rs: RootSystem) -> int:
    return len(enumerate_group(rs.generators))


@lru_cache(maxsize=16)
def all_elements(rs: RootSystem, cap: int = 200_000) -> tuple[CoxeterElement, ...]:
    """All elements of W in BFS order (length-graded); refuses groups above ``cap``."""
    return tuple(enumerate_group(rs.generators, cap=cap))


@lru_cache(maxsize=64)
def _closure(gens: tuple[CoxeterElement, ...]) -> dict[CoxeterElement, tuple[int, int | None]]:
    return enumerate_group(gens)


class NotInSubgroup(ValueError):
    pass


def solve_word_in_gens(target: CoxeterElement, gens: Sequence[CoxeterElement],
                       require_generating: bool = True) -> list[int]:
    """Shortest word (0-based indices into ``gens``) evaluating to ``target``.

    Breadth-first over the finite group; if ``require_generating`` the closure
    must be all of W.
    """
    rs = target.rs
    tree = _closure(tuple(gens))
    if require_generating and len(tree) != len(all_elements(rs)):
        raise NotInSubgroup(f"generators span a subgroup of order {len(tree)}, "
                            f"not all of W({rs.name})")
    if target not in tree:
        raise NotInSubgroup("target not in the subgroup generated by gens")
    order = list(tree)
    word = []
    node = target
    while True:
        parent, gi = tree[node]
        if parent < 0:
            break
        word.append(gi)
        node = order[parent]
    return word[::-1]
