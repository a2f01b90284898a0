"""Garside structure of a spherical Artin-Tits group.

Simple elements are in bijection with the Coxeter group, so a ``Simple`` is a
thin wrapper around a ``CoxeterElement``.  Prefix order on simples is the weak
order on W; starting and finishing sets are left and right descent sets.

An ``ArtinElement`` stores the left normal form Delta^k x_1 ... x_r, with every
x_i distinct from 1 and Delta and every consecutive pair left-weighted.  By
uniqueness of normal forms, field-wise equality is group equality.

tau denotes conjugation by Delta, tau(x) = Delta^-1 x Delta.  It is an
involution in every spherical type, so tau^-k = tau^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .coxeter import (
    CoxeterElement,
    CoxeterType,
    RootSystem,
    build_root_system,
    canonical_word,
    cox_inverse,
    cox_multiply,
    descent_set,
)


class WordParseError(ValueError):
    pass


class NoFactor(ValueError):
    """Initial/final factor requested for an element with canonical length 0."""


@dataclass(frozen=True)
class Simple:
    cox: CoxeterElement

    @property
    def rs(self) -> RootSystem:
        return self.cox.rs

    @property
    def length(self) -> int:
        return self.cox.length

    @cached_property
    def word(self) -> tuple[int, ...]:
        """Reduced atom word lifting this simple (smallest left descent first)."""
        return tuple(canonical_word(self.cox))

    def is_identity(self) -> bool:
        return self.cox.length == 0

    def is_delta(self) -> bool:
        return self.cox.length == self.rs.num_positive_roots

    def __mul__(self, other: Simple) -> Simple:
        """Product of simples; only valid when the lengths add."""
        prod = cox_multiply(self.cox, other.cox)
        if prod.length != self.length + other.length:
            raise ValueError("product of simples is not simple")
        return Simple(prod)

    def __repr__(self) -> str:
        if self.is_identity():
            return f"Simple({self.rs.name}: 1)"
        return f"Simple({self.rs.name}: {' '.join(map(str, self.word))})"


@lru_cache(maxsize=None)
def identity_simple(rs: RootSystem) -> Simple:
    return Simple(rs.identity)


@lru_cache(maxsize=None)
def delta_simple(rs: RootSystem) -> Simple:
    return Simple(rs.longest)


@lru_cache(maxsize=None)
def atom(rs: RootSystem, i: int) -> Simple:
    return Simple(rs.generator(i))


def simple_from_word(rs: RootSystem, word: Iterable[int]) -> Simple:
    """The simple lifted by a reduced positive word; rejects non-reduced words."""
    w = rs.identity
    n = 0
    for i in word:
        w = cox_multiply(w, rs.generator(i))
        n += 1
    if w.length != n:
        raise ValueError(f"word {list(word)} is not reduced, so not a simple element")
    return Simple(w)


def starting_set(s: Simple) -> frozenset[int]:
    return descent_set(s.cox, "left")


def finishing_set(s: Simple) -> frozenset[int]:
    return descent_set(s.cox, "right")


def right_complement(s: Simple) -> Simple:
    """The simple d with s * d = Delta."""
    return Simple(cox_multiply(cox_inverse(s.cox), s.rs.longest))


def left_complement(s: Simple) -> Simple:
    """The simple d with d * s = Delta."""
    return Simple(cox_multiply(s.rs.longest, cox_inverse(s.cox)))


@lru_cache(maxsize=1 << 16)
def tau(s: Simple) -> Simple:
    w0 = s.rs.longest
    return Simple(cox_multiply(cox_multiply(w0, s.cox), w0))


def tau_power(s: Simple, k: int) -> Simple:
    return tau(s) if k % 2 else s


def _meet_cox(x: CoxeterElement, y: CoxeterElement) -> CoxeterElement:
    gens = x.rs.generators
    m = x.rs.identity
    while True:
        common = x.left_mask & y.left_mask
        if not common:
            return m
        i = (common & -common).bit_length() - 1
        g = gens[i]
        m = cox_multiply(m, g)
        x = cox_multiply(g, x)
        y = cox_multiply(g, y)


def meet_simple(a: Simple, b: Simple) -> Simple:
    """Greatest common prefix of two simples, peeling shared left descents."""
    if a.rs is not b.rs:
        raise ValueError("mismatched types")
    return Simple(_meet_cox(a.cox, b.cox))


def join_simple(a: Simple, b: Simple) -> Simple:
    """Least common multiple in prefix order.

    Left multiplication by w0 reverses the weak order, so
    a v b = w0 (w0 a ^ w0 b).
    """
    if a.rs is not b.rs:
        raise ValueError("mismatched types")
    w0 = a.rs.longest
    m = _meet_cox(cox_multiply(w0, a.cox), cox_multiply(w0, b.cox))
    return Simple(cox_multiply(w0, m))


def is_left_weighted(a: Simple, b: Simple) -> bool:
    """S(b) is contained in F(a)."""
    return not (b.cox.left_mask & ~a.cox.right_mask)


@lru_cache(maxsize=1 << 18)
def make_left_weighted(a: Simple, b: Simple) -> tuple[Simple, Simple]:
    """Return (a u, u^-1 b) with u = (right complement of a) ^ b.

    Moving one atom at a time from the front of b to the back of a while it is
    in S(b) but not F(a) lands on the same pair; that is what runs here.
    """
    ac, bc = a.cox, b.cox
    gens = a.rs.generators
    bad = bc.left_mask & ~ac.right_mask
    if not bad:
        return a, b
    while bad:
        i = (bad & -bad).bit_length() - 1
        g = gens[i]
        ac = cox_multiply(ac, g)
        bc = cox_multiply(g, bc)
        bad = bc.left_mask & ~ac.right_mask
    return Simple(ac), Simple(bc)


@dataclass(frozen=True)
class ArtinElement:
    rs: RootSystem = field(repr=False)
    delta_power: int
    factors: tuple[Simple, ...]

    @property
    def inf(self) -> int:
        return self.delta_power

    @property
    def canonical_length(self) -> int:
        return len(self.factors)

    @property
    def sup(self) -> int:
        return self.delta_power + len(self.factors)

    def is_identity(self) -> bool:
        return self.delta_power == 0 and not self.factors

    def __mul__(self, other: ArtinElement) -> ArtinElement:
        return multiply(self, other)

    def inverse(self) -> ArtinElement:
        return invert(self)

    def __pow__(self, n: int) -> ArtinElement:
        base = self if n >= 0 else invert(self)
        out = identity(self.rs)
        for _ in range(abs(n)):
            out = multiply(out, base)
        return out

    def __str__(self) -> str:
        return format_normal_form(self)

    def __repr__(self) -> str:
        return f"ArtinElement({self.rs.name}: {format_normal_form(self)})"

    @cached_property
    def key(self) -> tuple:
        """Hashable canonical key: Delta power plus root-permutation images of factors."""
        return (self.delta_power,) + tuple(f.cox.images for f in self.factors)


def identity(rs: RootSystem) -> ArtinElement:
    return ArtinElement(rs, 0, ())


def delta_element(rs: RootSystem, k: int = 1) -> ArtinElement:
    return ArtinElement(rs, k, ())


def atom_element(rs: RootSystem, i: int, sign: int = 1) -> ArtinElement:
    # normalize handles rank 1, where the atom is Delta itself
    if sign > 0:
        return normalize(rs, 0, [atom(rs, i)])
    # s^-1 = Delta^-1 (Delta s^-1); Delta s^-1 has Coxeter image w0 s.
    return normalize(rs, -1, [Simple(cox_multiply(rs.longest, rs.generator(i)))])


def _append(rs: RootSystem, k: int, fac: list[Simple], s: Simple) -> int:
    """Right-multiply the normal form Delta^k fac by the simple s, in place."""
    if s.is_identity():
        return k
    fac.append(s)
    j = len(fac) - 2
    while j >= 0:
        a, b = fac[j], fac[j + 1]
        if is_left_weighted(a, b):
            break
        fac[j], fac[j + 1] = make_left_weighted(a, b)
        j -= 1
    n = rs.num_positive_roots
    lead = 0
    while lead < len(fac) and fac[lead].cox.length == n:
        lead += 1
    if lead:
        del fac[:lead]
        k += lead
    if fac and fac[-1].cox.length == 0:
        fac[:] = [f for f in fac if f.cox.length]
    return k


def _sweep_until_stable(rs: RootSystem, k: int, fac: list[Simple]) -> int:
    n = rs.num_positive_roots
    while True:
        changed = False
        for j in range(len(fac) - 1):
            if not is_left_weighted(fac[j], fac[j + 1]):
                fac[j], fac[j + 1] = make_left_weighted(fac[j], fac[j + 1])
                changed = True
        lead = 0
        while lead < len(fac) and fac[lead].cox.length == n:
            lead += 1
        if lead:
            del fac[:lead]
            k += lead
            changed = True
        kept = [f for f in fac if f.cox.length]
        if len(kept) != len(fac):
            fac[:] = kept
            changed = True
        if not changed:
            return k


def normalize(rs: RootSystem, delta_power: int, raw_factors: Sequence[Simple]) -> ArtinElement:
    """Left normal form of Delta^k s_1 ... s_m for arbitrary simples s_i."""
    k = delta_power
    fac: list[Simple] = []
    for s in raw_factors:
        if s.rs is not rs:
            raise ValueError("mismatched types")
        k = _append(rs, k, fac, s)
    k = _sweep_until_stable(rs, k, fac)
    return ArtinElement(rs, k, tuple(fac))


def is_normal(x: ArtinElement) -> bool:
    fac = x.factors
    if any(f.is_identity() or f.is_delta() for f in fac):
        return False
    return all(is_left_weighted(fac[j], fac[j + 1]) for j in range(len(fac) - 1))


def tau_element(x: ArtinElement, k: int = 1) -> ArtinElement:
    if k % 2 == 0:
        return x
    return ArtinElement(x.rs, x.delta_power, tuple(tau(f) for f in x.factors))


def multiply(x: ArtinElement, y: ArtinElement) -> ArtinElement:
    if x.rs is not y.rs:
        raise ValueError(f"mismatched types {x.rs.name} and {y.rs.name}")
    rs = x.rs
    # x Delta^m = Delta^m tau^m(x)
    left = x.factors if y.delta_power % 2 == 0 else tuple(tau(f) for f in x.factors)
    k = x.delta_power + y.delta_power
    if not left or not y.factors or is_left_weighted(left[-1], y.factors[0]):
        return ArtinElement(rs, k, left + y.factors)
    fac = list(left)
    for s in y.factors:
        k = _append(rs, k, fac, s)
    return ArtinElement(rs, k, tuple(fac))


def invert(x: ArtinElement) -> ArtinElement:
    """(Delta^k x_1..x_r)^-1 = Delta^(-k-r) tau^(r+k)(dx_r) ... tau^(1+k)(dx_1)."""
    k, r = x.delta_power, len(x.factors)
    raw = []
    for i in range(r, 0, -1):
        raw.append(tau_power(right_complement(x.factors[i - 1]), i + k))
    out = ArtinElement(x.rs, -k - r, tuple(raw))
    if not is_normal(out):  # pragma: no cover - guarded by the round-trip tests
        out = normalize(x.rs, -k - r, raw)
    return out


def reverse(x: ArtinElement) -> ArtinElement:
    """Image under the anti-automorphism reversing every positive word."""
    k = x.delta_power
    raw = [tau_power(Simple(cox_inverse(f.cox)), k) for f in reversed(x.factors)]
    return normalize(x.rs, k, raw)


def right_normal_form(x: ArtinElement) -> tuple[list[Simple], int]:
    """Factors y_1..y_r and k with x = y_1 ... y_r Delta^k, right-weighted."""
    rev = reverse(x)
    fac = [Simple(cox_inverse(f.cox)) for f in reversed(rev.factors)]
    return fac, rev.delta_power


def is_right_weighted(a: Simple, b: Simple) -> bool:
    """F(a) is contained in S(b)."""
    return not (a.cox.right_mask & ~b.cox.left_mask)


def initial_factor(x: ArtinElement) -> Simple:
    if not x.factors:
        raise NoFactor("element has canonical length 0")
    return tau_power(x.factors[0], x.delta_power)


def final_factor(x: ArtinElement) -> Simple:
    if not x.factors:
        raise NoFactor("element has canonical length 0")
    return x.factors[-1]


def is_rigid(x: ArtinElement) -> bool:
    """phi(x) iota(x) left-weighted; Delta powers count as not rigid."""
    if not x.factors:
        return False
    return is_left_weighted(final_factor(x), initial_factor(x))


def aligned_factors(x: ArtinElement) -> tuple[Simple, ...]:
    """Factors conjugated by Delta^k, matching the convention of the initial factor."""
    if x.delta_power % 2 == 0:
        return x.factors
    return tuple(tau(f) for f in x.factors)


def contains_block(x: ArtinElement, block: Sequence[Simple]) -> bool:
    if not block:
        return True
    hay = aligned_factors(x)
    m = len(block)
    block = tuple(block)
    first = block[0]
    for i in range(len(hay) - m + 1):
        if hay[i] == first and hay[i:i + m] == block:
            return True
    return False


def project_to_W(x: ArtinElement) -> CoxeterElement:
    rs = x.rs
    w = rs.longest if x.delta_power % 2 else rs.identity
    for f in x.factors:
        w = cox_multiply(w, f.cox)
    return w


def exponent_sum(x: ArtinElement) -> int:
    return x.delta_power * x.rs.num_positive_roots + sum(f.length for f in x.factors)


def atoms_word(x: ArtinElement) -> list[int]:
    """A signed atom word for x.

    Each Delta^-1 standing in front of a factor y is merged with it:
    Delta^-1 y is the inverse of the positive word for the right complement of y.
    Remaining Delta^-1 use the inverse of the reduced word for Delta.
    """
    rs = x.rs
    k = x.delta_power
    dword = list(delta_simple(rs).word)
    fac = x.factors
    if k >= 0:
        out = dword * k
        for f in fac:
            out.extend(f.word)
        return out
    m = -k
    paired = min(m, len(fac))
    out = [-i for i in reversed(dword)] * (m - paired)
    # Delta^-p x_1 ... x_p = prod_j Delta^-1 tau^(p-j)(x_j), p = paired
    for j in range(1, paired + 1):
        y = tau_power(fac[j - 1], paired - j)
        comp = right_complement(y)
        out.extend(-i for i in reversed(comp.word))
    for f in fac[paired:]:
        out.extend(f.word)
    return out


def atoms_word_length(x: ArtinElement) -> int:
    return len(atoms_word(x))


def from_word(rs: RootSystem, word: Iterable[int | str]) -> ArtinElement:
    """Element for a signed atom word; tokens may be ints, "D" or "-D"."""
    k = 0
    fac: list[Simple] = []
    w0 = rs.longest
    for tok in word:
        if isinstance(tok, str):
            t = tok.strip()
            if t in ("D", "+D"):
                fac = [tau(f) for f in fac]
                k += 1
                continue
            if t == "-D":
                fac = [tau(f) for f in fac]
                k -= 1
                continue
            try:
                tok = int(t)
            except ValueError:
                raise WordParseError(f"bad token {tok!r}") from None
        if tok == 0 or abs(tok) > rs.rank:
            raise WordParseError(f"atom {tok} out of range for {rs.name}")
        if tok > 0:
            k = _append(rs, k, fac, atom(rs, tok))
        else:
            fac = [tau(f) for f in fac]
            k -= 1
            k = _append(rs, k, fac, Simple(cox_multiply(w0, rs.generator(-tok))))
    return ArtinElement(rs, k, tuple(fac))


def parse_word(text: str) -> list[int | str]:
    """Split "1 2 -1 D -D" into tokens, validating their shape."""
    toks: list[int | str] = []
    for t in text.replace(",", " ").split():
        if t in ("D", "-D", "+D"):
            toks.append(t)
            continue
        try:
            toks.append(int(t))
        except ValueError:
            raise WordParseError(f"bad token {t!r}") from None
    return toks


def format_word(word: Sequence[int]) -> str:
    return " ".join(map(str, word))


def format_normal_form(x: ArtinElement) -> str:
    """Text form "D^k | w1 | w2 | ...", one reduced atom word per factor."""
    parts = [f"D^{x.delta_power}"]
    parts.extend(format_word(f.word) for f in x.factors)
    return " | ".join(parts)


def normal_form_record(x: ArtinElement) -> dict:
    return {
        "delta_power": x.delta_power,
        "factors": [list(f.word) for f in x.factors],
        "inf": x.inf,
        "sup": x.sup,
        "len": x.canonical_length,
        "rigid": is_rigid(x),
    }


class ArtinGroup:
    """Convenience entry point bundling a root system with element constructors."""

    def __init__(self, ctype: CoxeterType | str):
        self.rs = build_root_system(ctype)
        self.ctype = self.rs.ctype

    @property
    def name(self) -> str:
        return self.rs.name

    @property
    def rank(self) -> int:
        return self.rs.rank

    def __repr__(self) -> str:
        return f"ArtinGroup({self.name})"

    def identity(self) -> ArtinElement:
        return identity(self.rs)

    def delta(self, k: int = 1) -> ArtinElement:
        return delta_element(self.rs, k)

    def atom(self, i: int) -> Simple:
        return atom(self.rs, i)

    def gen(self, i: int) -> ArtinElement:
        return atom_element(self.rs, abs(i), 1 if i > 0 else -1)

    def simple(self, word: Iterable[int]) -> Simple:
        return simple_from_word(self.rs, word)

    @property
    def delta_simple(self) -> Simple:
        return delta_simple(self.rs)

    def element(self, word: Iterable[int | str] | str) -> ArtinElement:
        if isinstance(word, str):
            word = parse_word(word)
        return from_word(self.rs, word)

    def from_factors(self, delta_power: int, words: Iterable[Iterable[int]]) -> ArtinElement:
        return normalize(self.rs, delta_power, [simple_from_word(self.rs, w) for w in words])
