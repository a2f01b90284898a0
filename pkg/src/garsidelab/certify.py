"""Loxodromy certificates and the padding constructions.

An element is *certified* when it is rigid and its (Delta-aligned) normal form
contains the block w_a = x_a^N of some seed x_a.  Given any g, the padders
build x so that g*x is certified, optionally keeping g*x in the pure subgroup
(p(g*x) = 1) or in the commutator subgroup (e(g*x) = 0).

Padding layout, with every factor stored in the frame of g's normal form
(a factor y stored after Delta^k reads as tau^k(y) once Delta^k is moved past):

    plain        x = w_z . w_a . w_r
    pure         x = w_z . w_a . w_p . w_r
    commutator   x = Delta^(-2h) . w_a . a^m . w_r

w_z bridges the last factor of g to the block, w_r ends with Delta s^-1 for an
atom s outside S(iota(g)), which makes the product rigid, and w_p corrects the
projection to W using the lifts of the table module.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable

from .coxeter import (
    CoxeterElement,
    CoxeterType,
    GroupTooLarge,
    RootSystem,
    UnsupportedType,
    all_elements,
    build_root_system,
    cox_from_word,
    cox_inverse,
    cox_multiply,
    solve_word_in_gens,
)
from .garside import (
    ArtinElement,
    Simple,
    atom,
    atoms_word_length,
    contains_block,
    exponent_sum,
    from_word,
    initial_factor,
    is_left_weighted,
    is_normal,
    is_rigid,
    multiply,
    project_to_W,
    right_normal_form,
    finishing_set,
    starting_set,
    tau_power,
)
from .tables import default_atom, working_entries

DEFAULT_N = 390
MAX_FACTORS = 6
REFERENCE = "reference"
STRUCTURAL = "structural-search"


class SearchExhausted(RuntimeError):
    pass


class CertificationFailure(RuntimeError):
    pass


def choose_atom_for_type(descriptor: CoxeterType | str) -> int:
    return default_atom(build_root_system(descriptor).ctype)


def _atom_label(s: Simple) -> int:
    if s.length != 1:
        raise ValueError(f"{s!r} is not an atom")
    return s.word[0]


def _has_equal_forms(x: ArtinElement) -> bool:
    rf, rk = right_normal_form(x)
    if rk != x.delta_power:
        return False
    # x = Delta^k x_1..x_r = tau^k(x_1)..tau^k(x_r) Delta^k
    return tuple(rf) == tuple(tau_power(f, x.delta_power) for f in x.factors)


def is_structural_seed(x: ArtinElement, a: int) -> bool:
    """Rigid, equal left and right normal forms, iota(x) = phi(x) = a."""
    if not x.factors:
        return False
    at = atom(x.rs, a)
    return (is_rigid(x) and initial_factor(x) == at and x.factors[-1] == at
            and _has_equal_forms(x))


@dataclass
class LoxodromicSeed:
    ctype: CoxeterType
    atom: int
    xa: ArtinElement
    N: int = DEFAULT_N
    provenance: str = STRUCTURAL

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.provenance not in (REFERENCE, STRUCTURAL):
            raise ValueError(f"unknown provenance {self.provenance!r}")

    @property
    def rs(self) -> RootSystem:
        return self.xa.rs

    @property
    def block(self) -> tuple[Simple, ...]:
        """Factors of w_a = x_a^N; concatenation works since x_a is rigid with k = 0."""
        return self.xa.factors * self.N

    @property
    def w_a(self) -> ArtinElement:
        return ArtinElement(self.rs, 0, self.block)

    @property
    def label(self) -> str:
        """Reports say "certified" only for a reference x_a at the published power."""
        return "certified" if self.provenance == REFERENCE and self.N == DEFAULT_N else "structural"

    def check(self) -> list[str]:
        problems = []
        if self.xa.delta_power != 0:
            problems.append("x_a has nonzero infimum")
        if not is_structural_seed(self.xa, self.atom):
            problems.append("x_a fails the structural predicate")
        w = self.w_a
        if not (is_normal(w) and is_rigid(w)):
            problems.append("w_a is not a rigid normal form")
        return problems

    def record(self) -> dict:
        word = [i for f in self.xa.factors for i in f.word]
        return {"type": self.ctype.name, "atom": self.atom, "atom_word_of_xa": word,
                "N": self.N, "provenance": self.provenance}

    @classmethod
    def from_record(cls, rec: dict) -> LoxodromicSeed:
        rs = build_root_system(rec["type"])
        xa = from_word(rs, rec["atom_word_of_xa"])
        seed = cls(rs.ctype, int(rec["atom"]), xa, int(rec.get("N", DEFAULT_N)),
                   rec.get("provenance", REFERENCE))
        problems = seed.check()
        if problems:
            raise ValueError(f"seed for {rs.name} atom {seed.atom}: {'; '.join(problems)}")
        return seed

    def with_power(self, N: int) -> LoxodromicSeed:
        return LoxodromicSeed(self.ctype, self.atom, self.xa, N, self.provenance)


def certify(gx: ArtinElement, seed: LoxodromicSeed) -> bool:
    """Rigid and containing the block x_a^N."""
    return is_rigid(gx) and contains_block(gx, seed.block)


def _pool(rs: RootSystem) -> tuple[Simple, ...]:
    # non-trivial proper simples, length-graded
    try:
        ws = all_elements(rs)
    except GroupTooLarge as exc:
        raise UnsupportedType(f"simple-element search is not available for {rs.name}: {exc}") from None
    w0 = rs.longest
    return tuple(Simple(w) for w in ws if w.length and w != w0)


def find_structural_xa(descriptor: CoxeterType | str, a: int, max_canonical_length: int,
                       min_canonical_length: int = 1) -> ArtinElement:
    """Shortest element with k = 0 passing ``is_structural_seed`` for the atom a.

    Candidates are left-weighted sequences a, y_2, ..., y_(r-1), a searched by
    canonical length r, and within one length in the order of the simple pool.
    """
    rs = build_root_system(descriptor)
    rs.check_label(a)
    if max_canonical_length < 1:
        raise ValueError("max_canonical_length must be >= 1")
    at = atom(rs, a)
    lo = max(1, min_canonical_length)
    for r in range(lo, max_canonical_length + 1):
        if r == 1:
            cands: Iterable[tuple[Simple, ...]] = [(at,)]
        else:
            cands = _middles(rs, at, r - 2)
        for mid in cands:
            fac = mid if r == 1 else (at,) + mid + (at,)
            x = ArtinElement(rs, 0, fac)
            if is_normal(x) and is_structural_seed(x, a):
                return x
    raise SearchExhausted(f"no structural x_a for atom {a} in {rs.name} up to canonical length "
                          f"{max_canonical_length}")


def _middles(rs: RootSystem, at: Simple, depth: int):
    if depth == 0:
        yield ()
        return
    pool = _pool(rs)

    def rec(prev: Simple, left: int):
        if left == 0:
            if is_left_weighted(prev, at):
                yield ()
            return
        for y in pool:
            if is_left_weighted(prev, y):
                for rest in rec(y, left - 1):
                    yield (y,) + rest

    yield from rec(at, depth)


def structural_seed(descriptor: CoxeterType | str, a: int | None = None, N: int = DEFAULT_N,
                    bound: int = 3, min_canonical_length: int = 2) -> LoxodromicSeed:
    rs = build_root_system(descriptor)
    a = default_atom(rs.ctype) if a is None else a
    xa = _structural_xa_cached(rs, a, bound, min_canonical_length)
    return LoxodromicSeed(rs.ctype, a, xa, N, STRUCTURAL)


@lru_cache(maxsize=256)
def _structural_xa_cached(rs: RootSystem, a: int, bound: int, lo: int) -> ArtinElement:
    return find_structural_xa(rs.ctype, a, bound, lo)


class SeedRegistry:
    """Seeds keyed by (type name, atom); falls back to structural search."""

    def __init__(self, seeds: Iterable[LoxodromicSeed] = ()):
        self._seeds: dict[tuple[str, int], LoxodromicSeed] = {}
        for s in seeds:
            self.add(s)

    def add(self, seed: LoxodromicSeed) -> None:
        self._seeds[(seed.ctype.name, seed.atom)] = seed

    def get(self, descriptor: CoxeterType | str, a: int, N: int | None = None) -> LoxodromicSeed:
        rs = build_root_system(descriptor)
        seed = self._seeds.get((rs.name, a))
        if seed is None:
            seed = structural_seed(rs.ctype, a, DEFAULT_N if N is None else N)
            self.add(seed)
        if N is not None and seed.N != N:
            seed = seed.with_power(N)
        return seed

    def __iter__(self):
        return iter(self._seeds.values())

    def __len__(self) -> int:
        return len(self._seeds)

    def dump(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            for seed in self._seeds.values():
                fh.write(json.dumps(seed.record()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> SeedRegistry:
        reg = cls()
        with open(path) as fh:
            for line in fh:
                if line.strip():
                    reg.add(LoxodromicSeed.from_record(json.loads(line)))
        return reg


# Junction search over left-weighted chains of simples.

@lru_cache(maxsize=32)
def _descent_classes(rs: RootSystem) -> tuple[tuple[int, int, Simple], ...]:
    """One representative (S mask, F mask, simple) per descent-set pair, shortest first."""
    seen: dict[tuple[int, int], Simple] = {}
    for y in _pool(rs):
        key = (y.cox.left_mask, y.cox.right_mask)
        if key not in seen:
            seen[key] = y
    return tuple((s, f, y) for (s, f), y in seen.items())


def _chain(first: Simple, last: Simple) -> list[Simple]:
    """Shortest left-weighted chain first, ..., last with at most MAX_FACTORS factors."""
    if first == last:
        return [first]
    rs = first.rs
    goal = last.cox.left_mask
    start = first.cox.right_mask
    classes = _descent_classes(rs)
    parent: dict[int, tuple[int | None, Simple | None]] = {start: (None, None)}
    frontier = deque([(start, 1)])
    while frontier:
        state, used = frontier.popleft()
        if not goal & ~state:
            path: list[Simple] = []
            node = state
            while parent[node][0] is not None:
                prev, y = parent[node]
                path.append(y)
                node = prev
            return [first] + path[::-1] + [last]
        if used + 1 >= MAX_FACTORS:
            continue
        for s_mask, f_mask, y in classes:
            if not s_mask & ~state and f_mask not in parent:
                parent[f_mask] = (state, y)
                frontier.append((f_mask, used + 1))
    raise SearchExhausted(f"no chain of at most {MAX_FACTORS} factors from {first!r} to {last!r}")


def delta_over(rs: RootSystem, s: int) -> Simple:
    """The simple Delta s^-1, whose Coxeter image is w0 s."""
    return Simple(cox_multiply(rs.longest, rs.generator(s)))


@lru_cache(maxsize=4096)
def build_w_z(rs: RootSystem, b: int, a: int) -> tuple[Simple, ...]:
    """Left-weighted chain from the atom b to the atom a."""
    return tuple(_chain(atom(rs, b), atom(rs, a)))


@lru_cache(maxsize=4096)
def build_w_r(rs: RootSystem, a: int, s: int) -> tuple[Simple, ...]:
    """Left-weighted chain from the atom a to Delta s^-1."""
    return tuple(_chain(atom(rs, a), delta_over(rs, s)))


@lru_cache(maxsize=1 << 16)
def build_w_p(rs: RootSystem, target: CoxeterElement, a: int) -> tuple[Simple, ...]:
    """Normal-form factors starting and ending with a, projecting to ``target``."""
    entries = working_entries(rs.ctype, a)
    gens = [cox_from_word(rs, e.lift) for e in entries]
    idx = solve_word_in_gens(target, gens)
    if not idx:
        # p(a^2) = 1
        return (atom(rs, a),) * 2
    blocks = _lift_factors(rs, a)
    out: list[Simple] = []
    for i in idx:
        out.extend(blocks[i])
    return tuple(out)


@lru_cache(maxsize=256)
def _lift_factors(rs: RootSystem, a: int) -> tuple[tuple[Simple, ...], ...]:
    out = []
    for e in working_entries(rs.ctype, a):
        nf = from_word(rs, e.lift)
        out.append(nf.factors)
    return tuple(out)


def _product_cox(factors: Iterable[Simple], rs: RootSystem) -> CoxeterElement:
    w = rs.identity
    for f in factors:
        w = cox_multiply(w, f.cox)
    return w


@dataclass
class PaddingCertificate:
    kind: str
    g: ArtinElement
    x: ArtinElement
    product: ArtinElement
    seed: LoxodromicSeed
    product_rigid: bool
    contains_block: bool
    constraint: str
    constraint_ok: bool
    x_atoms_length: int
    choices: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.product_rigid and self.contains_block and self.constraint_ok

    def record(self) -> dict:
        return {
            "kind": self.kind,
            "g": str(self.g),
            "x": str(self.x),
            "product": str(self.product),
            "product_rigid": self.product_rigid,
            "contains_block": self.contains_block,
            "constraint": self.constraint,
            "constraint_ok": self.constraint_ok,
            "x_atoms_length": self.x_atoms_length,
            "seed_atom": self.seed.atom,
            "N": self.seed.N,
            "provenance": self.seed.provenance,
            "label": self.seed.label if self.ok else "uncertified",
            "choices": self.choices,
        }


def make_certificate(kind: str, g: ArtinElement, x: ArtinElement, seed: LoxodromicSeed,
                     constraint: str = "none", choices: dict | None = None) -> PaddingCertificate:
    """Multiply, normalize and recheck everything from the product alone."""
    gx = multiply(g, x)
    if constraint == "pure":
        c_ok = project_to_W(gx) == gx.rs.identity
    elif constraint == "exponent":
        c_ok = exponent_sum(gx) == 0
    elif constraint == "none":
        c_ok = True
    else:
        raise ValueError(f"unknown constraint {constraint!r}")
    return PaddingCertificate(kind, g, x, gx, seed, is_rigid(gx), contains_block(gx, seed.block),
                              constraint, c_ok, atoms_word_length(x), dict(choices or {}))


def odd_edges_connected(ctype: CoxeterType) -> bool:
    """True when the abelianization is Z, i.e. all atoms are conjugate."""
    n = ctype.rank
    seen = {1}
    stack = [1]
    while stack:
        i = stack.pop()
        for j in range(1, n + 1):
            if j not in seen and ctype.m(i, j) % 2 == 1:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


class Padder:
    """Padding constructions for one type and block power N."""

    def __init__(self, descriptor: CoxeterType | str, N: int = DEFAULT_N,
                 registry: SeedRegistry | None = None, atom_choice: int | None = None,
                 allow_commutator: bool = False):
        self.rs = build_root_system(descriptor)
        self.ctype = self.rs.ctype
        self.N = N
        self.registry = registry if registry is not None else SeedRegistry()
        self.a = default_atom(self.ctype) if atom_choice is None else atom_choice
        self.rs.check_label(self.a)
        self.allow_commutator = allow_commutator

    def seed(self, a: int | None = None) -> LoxodromicSeed:
        return self.registry.get(self.ctype, self.a if a is None else a, self.N)

    def seeds(self) -> list[LoxodromicSeed]:
        return [self.seed(i) for i in range(1, self.rs.rank + 1)]

    def _twist_atom(self, a: int, k: int) -> int:
        return _atom_label(tau_power(atom(self.rs, a), k))

    def _choices(self, g: ArtinElement, anchor: int) -> list[tuple[int, int]]:
        """Candidate (b, s): b a final atom of g, s outside S(iota(g))."""
        atoms = range(1, self.rs.rank + 1)
        k = g.delta_power
        out = []
        if g.factors:
            bs = sorted(finishing_set(g.factors[-1]))
            bad = starting_set(initial_factor(g))
            for b in bs:
                out.extend((b, s) for s in atoms if s not in bad)
        else:
            # iota(g x) = tau^k(b)
            for b in [anchor] + [i for i in atoms if i != anchor]:
                tb = self._twist_atom(b, k)
                out.extend((b, s) for s in atoms if s != tb)
        return out

    def _block(self, seed: LoxodromicSeed, k: int) -> tuple[Simple, ...]:
        return tuple(tau_power(f, k) for f in seed.block)

    def plain_x(self, k: int, b: int, s: int) -> ArtinElement:
        seed = self.seed()
        anchor = self._twist_atom(self.a, k)
        fac = build_w_z(self.rs, b, anchor) + self._block(seed, k) + build_w_r(self.rs, anchor, s)
        return ArtinElement(self.rs, 0, fac)

    def pure_x(self, k: int, b: int, s: int) -> ArtinElement:
        rs = self.rs
        seed = self.seed()
        anchor = self._twist_atom(self.a, k)
        w_z = build_w_z(rs, b, anchor)
        blk = self._block(seed, k)
        w_r = build_w_r(rs, anchor, s)
        head = _product_cox(w_z + blk, rs)
        target = cox_multiply(cox_inverse(head), cox_inverse(_product_cox(w_r, rs)))
        if k % 2:
            w0 = rs.longest
            target = cox_multiply(cox_multiply(w0, target), w0)
        w_p = tuple(tau_power(f, k) for f in build_w_p(rs, target, self.a))
        return ArtinElement(rs, 0, w_z + blk + w_p + w_r)

    def commutator_x(self, k: int, a_st: int, s: int) -> tuple[ArtinElement, LoxodromicSeed, int, int]:
        rs = self.rs
        seed = self.seed(self._twist_atom(a_st, k))
        blk = self._block(seed, k)
        w_r = build_w_r(rs, a_st, s)
        E = sum(f.length for f in blk + w_r)
        e_delta = rs.num_positive_roots
        h = 0
        while 2 * h * e_delta - E < 1:
            h += 1
        m = 2 * h * e_delta - E
        fac = blk + (atom(rs, a_st),) * m + w_r
        x = ArtinElement(rs, -2 * h, fac)
        return x, seed, h, m

    def _run(self, kind: str, g: ArtinElement, build, constraint: str) -> PaddingCertificate:
        if g.rs is not self.rs:
            raise ValueError("element belongs to a different type")
        anchor = self._twist_atom(self.a, g.delta_power)
        last = None
        for b, s in self._choices(g, anchor):
            x, seed, extra = build(g.delta_power, b, s)
            cert = make_certificate(kind, g, x, seed, constraint, {"b": b, "s": s, **extra})
            if cert.ok:
                return cert
            last = cert
        raise CertificationFailure(f"{kind} padding failed for {g}: "
                                   f"{last.record() if last else 'no candidates'}")

    def pad_plain(self, g: ArtinElement) -> PaddingCertificate:
        return self._run("plain", g, lambda k, b, s: (self.plain_x(k, b, s), self.seed(), {}), "none")

    def pad_pure(self, g: ArtinElement) -> PaddingCertificate:
        if project_to_W(g) != self.rs.identity:
            raise ValueError(f"{g} is not pure")
        return self._run("pure", g, lambda k, b, s: (self.pure_x(k, b, s), self.seed(), {}), "pure")

    def check_commutator_type(self) -> None:
        if not (self.allow_commutator or odd_edges_connected(self.ctype)):
            raise UnsupportedType(f"{self.ctype.name}: the commutator subgroup is not the kernel of "
                                  "the exponent sum (odd edges do not connect the diagram)")

    def pad_commutator(self, g: ArtinElement) -> PaddingCertificate:
        self.check_commutator_type()
        if exponent_sum(g) != 0:
            raise ValueError(f"{g} has nonzero exponent sum")

        def build(k, b, s):
            x, seed, h, m = self.commutator_x(k, b, s)
            return x, seed, {"h": h, "m": m}

        return self._run("commutator", g, build, "exponent")

    def pad(self, g: ArtinElement, kind: str) -> PaddingCertificate:
        if kind in ("plain", "full"):
            return self.pad_plain(g)
        if kind == "pure":
            return self.pad_pure(g)
        if kind == "commutator":
            return self.pad_commutator(g)
        raise ValueError(f"unknown padding kind {kind!r}")

    def all_paddings(self, kind: str) -> list[ArtinElement]:
        """Every x any g can receive: one per (parity of inf, b, s) choice."""
        atoms = range(1, self.rs.rank + 1)
        out = []
        for k in (0, 1):
            for b in atoms:
                for s in atoms:
                    if kind in ("plain", "full"):
                        out.append(self.plain_x(k, b, s))
                    elif kind == "pure":
                        out.append(self.pure_x(k, b, s))
                    elif kind == "commutator":
                        out.append(self.commutator_x(k, b, s)[0])
                    else:
                        raise ValueError(f"unknown padding kind {kind!r}")
        return out

    def padding_bound(self, kind: str) -> int:
        """Maximal atoms-length over all paddings; independent of g."""
        return max(atoms_word_length(x) for x in self.all_paddings(kind))


def pad_plain(g: ArtinElement, N: int = DEFAULT_N, **kw) -> PaddingCertificate:
    return Padder(g.rs.ctype, N, **kw).pad_plain(g)


def pad_pure(g: ArtinElement, N: int = DEFAULT_N, **kw) -> PaddingCertificate:
    return Padder(g.rs.ctype, N, **kw).pad_pure(g)


def pad_commutator(g: ArtinElement, N: int = DEFAULT_N, **kw) -> PaddingCertificate:
    return Padder(g.rs.ctype, N, **kw).pad_commutator(g)


def padding_bound(descriptor: CoxeterType | str, N: int, kind: str, **kw) -> int:
    return Padder(descriptor, N, **kw).padding_bound(kind)
