"""Exhaustive Cayley-ball censuses for A, its pure subgroup and its commutator subgroup.

Balls are enumerated breadth-first with normal-form keys, so every element is
counted exactly once.  A census certifies every element of the ball, measures
distances to the certified set inside the ball, and evaluates the counting
skeleton

    |B(R - R0)| <= |certified in B(R)| * |B(R0)|,   eps' = |B(R-R0)| / |B(R)|,
    eps = eps' / |B(R0)|

with exact rationals.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .certify import LoxodromicSeed, Padder, certify
from .coxeter import CoxeterType, RootSystem, build_root_system, enumerate_group
from .garside import (
    ArtinElement,
    atom_element,
    atoms_word_length,
    delta_element,
    exponent_sum,
    format_normal_form,
    from_word,
    identity,
    invert,
    multiply,
    project_to_W,
)

DEFAULT_CAP = 10_000_000
KINDS = ("full", "pure", "commutator")


class CapExceeded(RuntimeError):
    def __init__(self, message: str, partial: list[int] | None = None):
        super().__init__(message)
        self.partial = partial or []


@dataclass
class SubgroupSpec:
    kind: str
    ctype: CoxeterType
    gens: list[ArtinElement]

    @property
    def rs(self) -> RootSystem:
        return build_root_system(self.ctype)

    def gens_id(self) -> str:
        text = ";".join(format_normal_form(g) for g in self.gens)
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def check(self) -> list[str]:
        problems = []
        keys = {g.key for g in self.gens}
        for g in self.gens:
            if invert(g).key not in keys:
                problems.append(f"{g} has no inverse in the generating set")
            if self.kind == "pure" and project_to_W(g) != self.rs.identity:
                problems.append(f"{g} is not pure")
            if self.kind == "commutator" and exponent_sum(g) != 0:
                problems.append(f"{g} has nonzero exponent sum")
            if g.is_identity():
                problems.append("identity among generators")
        return problems


def _symmetrize(gens: Iterable[ArtinElement]) -> list[ArtinElement]:
    out: list[ArtinElement] = []
    seen: set = set()
    for g in gens:
        for h in (g, invert(g)):
            if not h.is_identity() and h.key not in seen:
                seen.add(h.key)
                out.append(h)
    return out


def full_generators(rs: RootSystem) -> list[ArtinElement]:
    out = []
    for i in range(1, rs.rank + 1):
        out.append(atom_element(rs, i, 1))
        out.append(atom_element(rs, i, -1))
    return out


def pure_generators(rs: RootSystem) -> list[ArtinElement]:
    """Reidemeister-Schreier generators t_w s_i t_(w s_i)^-1 for the BFS transversal of W."""
    tree = enumerate_group(rs.generators)
    order = list(tree)
    index = {w: j for j, w in enumerate(order)}
    # transversal: positive lift of the BFS path, a reduced word
    words: list[list[int]] = []
    for w in order:
        parent, gi = tree[w]
        words.append([] if parent < 0 else words[parent] + [gi + 1])
    lifts = [from_word(rs, wd) for wd in words]
    raw = []
    for j, w in enumerate(order):
        for i in range(1, rs.rank + 1):
            nxt = index[w * rs.generator(i)]
            g = multiply(multiply(lifts[j], atom_element(rs, i)), invert(lifts[nxt]))
            if not g.is_identity():
                raw.append(g)
    return _symmetrize(raw)


def positive_elements_of_length(rs: RootSystem, length: int, cap: int = 200_000) -> list[ArtinElement]:
    """Distinct positive elements of the given exponent sum, in BFS order."""
    layer = {identity(rs).key: identity(rs)}
    atoms = [atom_element(rs, i) for i in range(1, rs.rank + 1)]
    for _ in range(length):
        nxt: dict = {}
        for x in layer.values():
            for a in atoms:
                y = multiply(x, a)
                if y.key not in nxt:
                    nxt[y.key] = y
                    if len(nxt) > cap:
                        raise CapExceeded(f"positive monoid layer exceeds cap {cap}")
        layer = nxt
    return list(layer.values())


def commutator_generators(rs: RootSystem, cap: int = 200_000) -> list[ArtinElement]:
    """Delta^-1 a over positive a with e(a) = e(Delta), plus inverses."""
    dinv = delta_element(rs, -1)
    raw = [multiply(dinv, a) for a in positive_elements_of_length(rs, rs.num_positive_roots, cap)]
    return _symmetrize(raw)


def subgroup_generators(kind: str, descriptor: CoxeterType | str, allow_commutator: bool = False,
                        cap: int = 200_000) -> SubgroupSpec:
    rs = build_root_system(descriptor)
    if kind == "full":
        gens = full_generators(rs)
    elif kind == "pure":
        gens = pure_generators(rs)
    elif kind == "commutator":
        Padder(rs.ctype, 1, allow_commutator=allow_commutator).check_commutator_type()
        gens = commutator_generators(rs, cap)
    else:
        raise ValueError(f"unknown subgroup kind {kind!r}; expected one of {KINDS}")
    return SubgroupSpec(kind, rs.ctype, gens)


@dataclass
class Ball:
    spec: SubgroupSpec
    radius: int
    elements: list[ArtinElement]
    dist: list[int]
    index: dict

    def sizes(self) -> list[int]:
        out = [0] * (self.radius + 1)
        for d in self.dist:
            out[d] += 1
        acc, balls = 0, []
        for s in out:
            acc += s
            balls.append(acc)
        return balls

    def spheres(self) -> list[int]:
        out = [0] * (self.radius + 1)
        for d in self.dist:
            out[d] += 1
        return out

    def neighbours(self) -> list[list[int]]:
        """Generator edges that stay inside the ball."""
        adj = []
        for x in self.elements:
            row = []
            for g in self.spec.gens:
                j = self.index.get(multiply(x, g).key)
                if j is not None:
                    row.append(j)
            adj.append(row)
        return adj


def enumerate_ball(spec: SubgroupSpec, R: int, cap: int = DEFAULT_CAP) -> Ball:
    if R < 0:
        raise ValueError("radius must be non-negative")
    rs = spec.rs
    e = identity(rs)
    elements = [e]
    dist = [0]
    index = {e.key: 0}
    head = 0
    for r in range(R):
        end = len(elements)
        while head < end:
            x = elements[head]
            head += 1
            for g in spec.gens:
                y = multiply(x, g)
                if y.key not in index:
                    index[y.key] = len(elements)
                    elements.append(y)
                    dist.append(r + 1)
                    if len(elements) > cap:
                        sizes = Ball(spec, r + 1, elements, dist, index).sizes()
                        raise CapExceeded(f"ball of radius {R} exceeds cap {cap} at radius {r + 1}",
                                          sizes[:-1])
    return Ball(spec, R, elements, dist, index)


def _distances_from(sources: Sequence[int], adj: list[list[int]], allowed: list[bool]) -> list[int | None]:
    out: list[int | None] = [None] * len(adj)
    dq = deque()
    for s in sources:
        if allowed[s]:
            out[s] = 0
            dq.append(s)
    while dq:
        i = dq.popleft()
        for j in adj[i]:
            if allowed[j] and out[j] is None:
                out[j] = out[i] + 1
                dq.append(j)
    return out


@dataclass
class RadiusRow:
    R: int
    ball: int
    sphere: int
    certified: int
    within_R0: int | None
    epsilon_prime: Fraction | None
    epsilon: Fraction | None
    proportion: Fraction


@dataclass
class CoveringReport:
    R: int
    R0: int
    vacuous: bool
    distance_ok: bool
    worst_distance: int | None
    counting_ok: bool
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.distance_ok and self.counting_ok


@dataclass
class BallCensus:
    spec: SubgroupSpec
    radius: int
    seeds: list[LoxodromicSeed]
    rows: list[RadiusRow]
    R0: int
    R0_source: str
    certified_flags: list[bool] = field(repr=False)
    ball: Ball = field(repr=False)
    adjacency: list[list[int]] = field(repr=False)
    padding_bound: int | None = None

    @property
    def provenance(self) -> str:
        provs = {s.provenance for s in self.seeds}
        return provs.pop() if len(provs) == 1 else "mixed"

    @property
    def N(self) -> int:
        return self.seeds[0].N

    def distances(self, R: int, certified: list[bool] | None = None) -> list[int | None]:
        """Distance to the certified set, inside B(R)."""
        flags = self.certified_flags if certified is None else certified
        allowed = [d <= R for d in self.ball.dist]
        src = [i for i, c in enumerate(flags) if c and allowed[i]]
        return _distances_from(src, self.adjacency, allowed)


def _epsilons(balls: list[int], R: int, R0: int) -> tuple[Fraction | None, Fraction | None]:
    if R <= R0:
        return None, None
    ep = Fraction(balls[R - R0], balls[R])
    return ep, ep / balls[R0]


def _minimal_r0(census: BallCensus) -> int | None:
    """Smallest r with d(g, certified in B(R')) <= r for g in B(R' - r), for all r < R' <= R."""
    R = census.radius
    worst: dict[tuple[int, int], int | None] = {}
    for Rp in range(1, R + 1):
        d = census.distances(Rp)
        # running max of the distance over B(j), j = 0..Rp
        acc: int | None = -1
        by_radius = [-1] * (Rp + 1)
        for i, dd in enumerate(census.ball.dist):
            if dd <= Rp:
                v = d[i]
                if v is None:
                    by_radius[dd] = None
                elif by_radius[dd] is not None:
                    by_radius[dd] = max(by_radius[dd], v)
        for j in range(Rp + 1):
            if acc is not None:
                acc = None if by_radius[j] is None else max(acc, by_radius[j])
            worst[(Rp, j)] = acc
    for r in range(R + 1):
        if all(worst[(Rp, Rp - r)] is not None and worst[(Rp, Rp - r)] <= r
               for Rp in range(r + 1, R + 1)):
            return r
    return None


def census_certified(spec: SubgroupSpec, R: int, seeds: LoxodromicSeed | Sequence[LoxodromicSeed],
                     cap: int = DEFAULT_CAP, R0: int | None = None,
                     padding_bound: int | None = None, r0_mode: str = "minimal") -> BallCensus:
    """Certify every element of B(R) and derive R0 and eps.

    R0, unless given, is measured on the ball itself and capped at ``padding_bound``:

    ``minimal``   the least r such that every g in B(R' - r) lies within r of
                  the certified part of B(R'), for every R' with r < R' <= R
    ``ball-max``  the largest distance from an element of B(R) to the
                  certified set, measured inside B(R)
    """
    if isinstance(seeds, LoxodromicSeed):
        seeds = [seeds]
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    for s in seeds:
        if s.ctype != spec.ctype:
            raise ValueError(f"seed type {s.ctype.name} does not match {spec.ctype.name}")
    ball = enumerate_ball(spec, R, cap)
    flags = [any(certify(x, s) for s in seeds) for x in ball.elements]
    adj = ball.neighbours()
    census = BallCensus(spec, R, seeds, [], 0, "", flags, ball, adj, padding_bound)
    if R0 is not None:
        source = "given"
    elif r0_mode == "minimal":
        R0, source = _minimal_r0(census), "minimal"
        if R0 == R:
            # no radius left to test against
            R0, source = None, ""
    elif r0_mode == "ball-max":
        d = census.distances(R)
        R0, source = (max(d), "ball-max") if all(v is not None for v in d) else (None, "")
    else:
        raise ValueError(f"unknown r0_mode {r0_mode!r}")
    if R0 is None:
        R0, source = R, "no-certified-path"
    if padding_bound is not None and padding_bound < R0:
        R0, source = padding_bound, "padding-bound"
    census.R0, census.R0_source = R0, source
    balls, spheres = ball.sizes(), ball.spheres()
    cert_in = [0] * (R + 1)
    for dd, c in zip(ball.dist, flags):
        if c:
            cert_in[dd] += 1
    acc = 0
    for r in range(R + 1):
        acc += cert_in[r]
        within = None
        if r > R0:
            dr = census.distances(r)
            within = sum(1 for i, v in enumerate(dr) if ball.dist[i] <= r and v is not None and v <= R0)
        ep, eps = _epsilons(balls, r, R0)
        census.rows.append(RadiusRow(r, balls[r], spheres[r], acc, within, ep, eps,
                                     Fraction(acc, balls[r])))
    return census


def covering_check(census: BallCensus, R: int | None = None,
                            certified: list[bool] | None = None) -> CoveringReport:
    """Distance and counting checks at radius R (default: the census radius)."""
    R = census.radius if R is None else R
    R0 = census.R0
    balls = census.ball.sizes()
    flags = census.certified_flags if certified is None else certified
    if R <= R0:
        return CoveringReport(R, R0, True, True, None, True, 0, 0)
    d = census.distances(R, flags)
    inner = [i for i, dd in enumerate(census.ball.dist) if dd <= R - R0]
    worst = None
    ok = True
    for i in inner:
        if d[i] is None:
            ok, worst = False, None
            break
        worst = d[i] if worst is None else max(worst, d[i])
    if worst is not None and worst > R0:
        ok = False
    cert = sum(1 for i, c in enumerate(flags) if c and census.ball.dist[i] <= R)
    lhs, rhs = balls[R - R0], cert * balls[R0]
    return CoveringReport(R, R0, False, ok, worst, lhs <= rhs, lhs, rhs)


def word_length_upper_bound(x: ArtinElement, kind: str) -> int:
    """An upper bound for the generating-set length of a padding x.

    full: atom word length.  pure: a positive word rewrites into at most as many
    Schreier generators as it has letters.  commutator: x = Delta^-2h y with y
    positive of exponent 2h e(Delta) splits into 2h generators.
    """
    if kind == "full":
        return atoms_word_length(x)
    if kind == "pure" and x.delta_power >= 0:
        return exponent_sum(x)
    if kind == "commutator" and x.delta_power <= 0:
        return -x.delta_power
    raise ValueError(f"no length bound for {x} in the {kind} subgroup")


@dataclass
class R0Estimate:
    value: int
    exact: bool
    paddings: int
    lengths: dict


def estimate_R0(spec: SubgroupSpec, test_ball_radius: int, padder: Padder,
                search_radius: int | None = None, cap: int = 200_000) -> R0Estimate:
    """max over distinct paddings x of the generating-set length of x.

    Exact when x turns up in the ball of radius ``search_radius``; otherwise the
    bound of ``word_length_upper_bound`` is used and the estimate is not exact.
    """
    ball = enumerate_ball(spec, test_ball_radius, cap)
    xs: dict = {}
    for g in ball.elements:
        x = padder.pad(g, spec.kind).x
        xs.setdefault(x.key, x)
    bounds = {k: word_length_upper_bound(x, spec.kind) for k, x in xs.items()}
    if search_radius is None:
        search_radius = 0
    try:
        big = enumerate_ball(spec, search_radius, cap)
    except CapExceeded:
        big = None
    lengths = {}
    exact = True
    for k, x in xs.items():
        if big is not None and k in big.index:
            lengths[k] = big.dist[big.index[k]]
        else:
            lengths[k] = bounds[k]
            exact = False
    return R0Estimate(max(lengths.values()), exact, len(xs),
                      {format_normal_form(xs[k]): v for k, v in lengths.items()})


CSV_COLUMNS = ["type", "subgroup", "gens-id", "R", "ball", "sphere", "certified", "within_R0",
               "R0", "epsilon_prime", "epsilon", "seed_provenance", "N"]


def _frac(q: Fraction | None) -> str:
    if q is None:
        return ""
    return f"{q.numerator}/{q.denominator}"


def census_rows(census: BallCensus) -> list[dict]:
    out = []
    for row in census.rows:
        out.append({
            "type": census.spec.ctype.name,
            "subgroup": census.spec.kind,
            "gens-id": census.spec.gens_id(),
            "R": row.R,
            "ball": row.ball,
            "sphere": row.sphere,
            "certified": row.certified,
            "within_R0": "" if row.within_R0 is None else row.within_R0,
            "R0": census.R0,
            "epsilon_prime": _frac(row.epsilon_prime),
            "epsilon": _frac(row.epsilon),
            "seed_provenance": census.provenance,
            "N": census.N,
        })
    return out


def census_csv(census: BallCensus) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(census_rows(census))
    return buf.getvalue()


def census_manifest(census: BallCensus, **extra) -> dict:
    from . import __version__

    man = {
        "engine_version": __version__,
        "type": census.spec.ctype.name,
        "subgroup": census.spec.kind,
        "gens_id": census.spec.gens_id(),
        "generators": [format_normal_form(g) for g in census.spec.gens],
        "radius": census.radius,
        "R0": census.R0,
        "R0_source": census.R0_source,
        "padding_bound": census.padding_bound,
        "seeds": [s.record() for s in census.seeds],
        "N": census.N,
    }
    man.update(extra)
    return man


def manifest_json(manifest: dict) -> str:
    return json.dumps(manifest, indent=2, sort_keys=True)

