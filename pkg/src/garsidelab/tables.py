"""Lifts of Coxeter generators whose normal forms start and end with a fixed atom.

Each entry pairs a word s' (projecting to a generator of W) with a positive
word s~ such that p(s~) = p(s') and the left normal form of s~ has first and
last factor equal to the chosen atom.  Concatenating such lifts produces, for
any w in W, a normal-form word with the same endpoints that projects to w.

Entries are word templates over the rank ``n`` and, for the middle column of
type A, the atom index ``i``:

    ``3``        the atom sigma_3
    ``3^2``      sigma_3 squared
    ``R(i,j)``   run sigma_i sigma_(i+1) ... sigma_j (or descending when j < i)
    ``Q(i,j)``   same run with every letter squared

``PRINTED`` holds the table exactly as published.  Some printed cells fail
verification; ``CORRECTED`` holds replacements for those cells, each verified
by the same routine, and ``working_entries`` is what the constructions use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .coxeter import CoxeterElement, CoxeterType, UnsupportedType, build_root_system, cox_from_word
from .garside import ArtinElement, atom, from_word

_TOKEN = re.compile(r"([RQ])\(\s*([\w+-]+)\s*,\s*([\w+-]+)\s*\)|([\w+-]+)(?:\^(\d+))?")


def sigma_run(i: int, j: int) -> list[int]:
    """sigma_i sigma_(i+1) ... sigma_j, or the descending run when j < i."""
    step = 1 if j >= i else -1
    return list(range(i, j + step, step))


def sigma_run_sq(i: int, j: int) -> list[int]:
    return [k for k in sigma_run(i, j) for _ in range(2)]


def _eval_index(expr: str, n: int, i: int | None) -> int:
    env = {"n": n}
    if i is not None:
        env["i"] = i
    expr = expr.strip()
    m = re.fullmatch(r"([ni]|\d+)\s*(?:([+-])\s*(\d+))?", expr)
    if not m:
        raise ValueError(f"bad index expression {expr!r}")
    base = env[m.group(1)] if m.group(1) in env else int(m.group(1))
    if m.group(2):
        base = base + int(m.group(3)) if m.group(2) == "+" else base - int(m.group(3))
    return base


def expand_template(template: str, n: int, i: int | None = None) -> list[int]:
    word: list[int] = []
    for m in _TOKEN.finditer(template):
        if m.group(1):
            lo, hi = _eval_index(m.group(2), n, i), _eval_index(m.group(3), n, i)
            if not (1 <= lo <= n and 1 <= hi <= n):
                raise IndexError(f"run ({lo},{hi}) out of range for rank {n}")
            word.extend(sigma_run(lo, hi) if m.group(1) == "R" else sigma_run_sq(lo, hi))
        else:
            k = _eval_index(m.group(4), n, i)
            if not 1 <= k <= n:
                raise IndexError(f"atom {k} out of range for rank {n}")
            word.extend([k] * int(m.group(5) or 1))
    return word


# (family, column) -> list of (s' template, s~ template); the column names the atom.
PRINTED: dict[tuple[str, str], list[tuple[str, str]]] = {
    ("A", "1"): [("1", "1"), ("R(n,1)", "Q(1,n) R(n,1) 1^2")],
    ("A", "i"): [("i", "i"), ("R(1,n)", "Q(i,1) R(1,n) Q(n,i)")],
    ("A", "n"): [("n", "n"), ("R(1,n)", "Q(n,1) R(n,1) 1^2")],
    ("B", "2"): [("1", "2^2 1 2^2"), ("2", "2"), ("R(2,n)", "2^2 R(2,n) Q(n,2)")],
    ("D", "3"): [("1", "3^2 1^3 3^2"), ("3", "3"), ("R(2,n)", "Q(3,2) R(2,n) Q(n,3)")],
    ("E", "4"): [("1", "4^2 1^3 4^2"), ("4", "4"), ("R(2,n)", "Q(4,1) R(2,n) Q(n,4)")],
    ("H3", "2"): [("1", "2^2 1 2^2"), ("2", "2"), ("3", "2^2 1^3 2^2")],
    ("H4", "2"): [("1", "2^2 1 2^2"), ("2", "2"), ("R(2,4)", "Q(2,4) R(4,2) 2^2")],
    ("F", "2"): [("1", "2^2 1^3 2^2"), ("2", "2"), ("3", "2^2 3 2^2"), ("4", "2^2 3^2 4 2^2")],
    ("I2", "2"): [("1", "2^2 1 2^2"), ("2", "2")],
}

# Replacement cells, keyed by (family, column, row index).  Each one keeps the
# printed s' and repairs s~ by the pattern used elsewhere in the same table.
CORRECTED: dict[tuple[str, str, int], tuple[str, str]] = {
    # mirror image of the sigma_1 column
    ("A", "n", 1): ("R(1,n)", "Q(n,1) R(1,n) n^2"),
    # conjugate of sigma_3 by the sigma_2 squares, as for D_n, E_n, F_4 with a simple edge
    ("H3", "2", 2): ("3", "2^2 3^3 2^2"),
    # the B_n pattern for a run starting at the chosen atom
    ("H4", "2", 2): ("R(2,4)", "2^2 R(2,4) Q(4,2)"),
}


def _table_key(ctype: CoxeterType) -> str:
    if ctype.family == "H":
        return f"H{ctype.rank}"
    return ctype.family


def default_atom(ctype: CoxeterType) -> int:
    """The atom the constructions anchor on for each family (sigma_1 for A_n)."""
    return {"A": 1, "B": 2, "D": 3, "E": 4, "F": 2, "H": 2, "I2": 2}[ctype.family]


def _column(ctype: CoxeterType, a: int) -> tuple[str, int | None]:
    fam = _table_key(ctype)
    n = ctype.rank
    if fam == "A" and n < 2:
        raise UnsupportedType("A1 has Delta = sigma_1; no lift can have normal form a ... a")
    if fam == "A":
        if a == 1:
            return "1", None
        if a == n:
            return "n", None
        if 1 < a < n:
            return "i", a
        raise UnsupportedType(f"atom {a} out of range for {ctype.name}")
    col = str(default_atom(ctype))
    if str(a) != col:
        raise UnsupportedType(f"the table for {ctype.name} is anchored at atom {col}, not {a}")
    return col, None


@dataclass
class TildeEntry:
    ctype: CoxeterType
    atom: int
    s_prime: list[int]
    lift: list[int]
    templates: tuple[str, str]
    row: int
    corrected: bool = False

    def label(self) -> str:
        tag = " (corrected)" if self.corrected else ""
        return f"{self.ctype.name} a={self.atom} s'={self.templates[0]} -> {self.templates[1]}{tag}"


def table_entries(ctype: CoxeterType | str, a_choice: int | None = None,
                  corrected: bool = False) -> list[TildeEntry]:
    """Table cells instantiated at the rank of ``ctype``.

    With ``corrected=False`` the published cells are returned verbatim; with
    ``corrected=True`` the replacement cells from ``CORRECTED`` are swapped in
    and flagged.
    """
    rs = build_root_system(ctype)
    ct = rs.ctype
    a = default_atom(ct) if a_choice is None else a_choice
    fam = _table_key(ct)
    col, i = _column(ct, a)
    if (fam, col) not in PRINTED:
        raise UnsupportedType(f"no table for {ct.name}")
    out = []
    for row, (sp, lift) in enumerate(PRINTED[(fam, col)]):
        fixed = False
        if corrected and (fam, col, row) in CORRECTED:
            sp, lift = CORRECTED[(fam, col, row)]
            fixed = True
        out.append(TildeEntry(ct, a, expand_template(sp, ct.rank, i),
                              expand_template(lift, ct.rank, i), (sp, lift), row, fixed))
    return out


@dataclass
class EntryReport:
    entry: TildeEntry
    projection_ok: bool
    endpoints_ok: bool
    normal_form: ArtinElement
    diagnosis: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.projection_ok and self.endpoints_ok


def verify_entry(entry: TildeEntry) -> EntryReport:
    """Recompute p(s~) = p(s') and the first/last factors of the normal form of s~."""
    rs = build_root_system(entry.ctype)
    a = atom(rs, entry.atom)
    p_lift = cox_from_word(rs, entry.lift)
    p_target = cox_from_word(rs, entry.s_prime)
    nf = from_word(rs, entry.lift)
    diag = []
    proj_ok = p_lift == p_target
    if not proj_ok:
        if p_lift == p_target.inverse():
            diag.append("p(s~) is the inverse of p(s')")
        else:
            diag.append(f"p(s~) = {p_lift!r} but p(s') = {p_target!r}")
    ends_ok = bool(nf.factors) and nf.delta_power == 0 and nf.factors[0] == a and nf.factors[-1] == a
    if not ends_ok:
        if nf.delta_power:
            diag.append(f"normal form has inf {nf.delta_power}")
        if nf.factors and nf.factors[0] != a:
            diag.append(f"first factor is {' '.join(map(str, nf.factors[0].word))}, not {entry.atom}")
        if nf.factors and nf.factors[-1] != a:
            diag.append(f"last factor is {' '.join(map(str, nf.factors[-1].word))}, not {entry.atom}")
    return EntryReport(entry, proj_ok, ends_ok, nf, diag)


def working_entries(ctype: CoxeterType | str, a_choice: int | None = None) -> list[TildeEntry]:
    """Entries used by the constructions: printed cells, or their verified replacements."""
    entries = table_entries(ctype, a_choice, corrected=True)
    for e in entries:
        rep = verify_entry(e)
        if not rep.passed:
            raise RuntimeError(f"table entry {e.label()} fails: {'; '.join(rep.diagnosis)}")
    return entries


def coxeter_genset(ctype: CoxeterType | str, a_choice: int | None = None) -> list[CoxeterElement]:
    """Projections of the s' words of the table."""
    rs = build_root_system(ctype)
    return [cox_from_word(rs, e.s_prime) for e in table_entries(ctype, a_choice)]


def table_columns(ctype: CoxeterType | str) -> list[int]:
    """Atoms for which the table has a column in this type."""
    ct = build_root_system(ctype).ctype
    if ct.family == "A":
        return list(range(1, ct.rank + 1)) if ct.rank >= 2 else []
    return [default_atom(ct)]
