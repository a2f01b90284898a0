"""Command-line front end.

Words are whitespace- or comma-separated signed atom indices, with ``D`` and
``-D`` for Delta and its inverse.  A word starting with ``-`` must follow
``--`` on the command line when it could be mistaken for an option.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .certify import (
    DEFAULT_N,
    CertificationFailure,
    LoxodromicSeed,
    Padder,
    SearchExhausted,
    SeedRegistry,
    choose_atom_for_type,
    find_structural_xa,
    structural_seed,
)
from .coxeter import GroupTooLarge, NotInSubgroup, UnsupportedType, build_root_system
from .garside import ArtinGroup, WordParseError, format_normal_form, is_rigid, normal_form_record
from .lab import (
    CapExceeded,
    DEFAULT_CAP,
    census_certified,
    census_csv,
    census_manifest,
    census_rows,
    covering_check,
    manifest_json,
    subgroup_generators,
)
from .tables import table_columns, table_entries, verify_entry

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_CAP = 4
EXIT_CERTIFICATION = 5


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _structured(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _registry(args) -> SeedRegistry:
    if getattr(args, "seeds", None):
        return SeedRegistry.load(args.seeds)
    return SeedRegistry()


def cmd_nf(args) -> int:
    G = ArtinGroup(args.type)
    x = G.element(args.word)
    if args.format == "structured":
        _emit(args, _structured({"type": G.name, "word": args.word, **normal_form_record(x)}))
    else:
        _emit(args, f"{format_normal_form(x)}\n"
                    f"inf={x.inf} sup={x.sup} len={x.canonical_length} rigid={is_rigid(x)}")
    return EXIT_OK


def cmd_rigid(args) -> int:
    G = ArtinGroup(args.type)
    x = G.element(args.word)
    r = is_rigid(x)
    if args.format == "structured":
        _emit(args, _structured({"type": G.name, "word": args.word, "rigid": r,
                                 "normal_form": format_normal_form(x)}))
    else:
        _emit(args, f"{format_normal_form(x)}\nrigid={r}")
    return EXIT_OK


def cmd_pad(args) -> int:
    G = ArtinGroup(args.type)
    g = G.element(args.word)
    padder = Padder(G.ctype, args.N, _registry(args), args.atom,
                    allow_commutator=args.allow_commutator)
    cert = padder.pad(g, args.subgroup)
    rec = cert.record()
    rec["type"] = G.name
    if args.format == "structured":
        _emit(args, _structured(rec))
    else:
        lines = [f"{k}: {rec[k]}" for k in ("type", "kind", "g", "x", "product", "product_rigid",
                                            "contains_block", "constraint", "constraint_ok",
                                            "x_atoms_length", "seed_atom", "N", "provenance",
                                            "label")]
        _emit(args, "\n".join(lines))
    return EXIT_OK if cert.ok else EXIT_CERTIFICATION


def cmd_verify_tables(args) -> int:
    reports = []
    for t in args.types:
        ct = build_root_system(t).ctype
        cols = table_columns(ct)
        if not cols:
            raise UnsupportedType(f"no table for {ct.name}")
        for a in cols:
            for e in table_entries(ct, a, corrected=args.corrected):
                reports.append(verify_entry(e))
    failed = [r for r in reports if not r.passed]
    if args.format == "structured":
        _emit(args, _structured([{
            "type": r.entry.ctype.name, "atom": r.entry.atom, "s_prime": r.entry.templates[0],
            "lift": r.entry.templates[1], "corrected": r.entry.corrected, "pass": r.passed,
            "normal_form": format_normal_form(r.normal_form), "diagnosis": r.diagnosis,
        } for r in reports]))
    elif args.format == "csv":
        lines = ["type,atom,s_prime,lift,corrected,pass,normal_form,diagnosis"]
        for r in reports:
            e = r.entry
            lines.append(",".join([e.ctype.name, str(e.atom), f'"{e.templates[0]}"',
                                   f'"{e.templates[1]}"', str(e.corrected), str(r.passed),
                                   f'"{format_normal_form(r.normal_form)}"',
                                   f'"{"; ".join(r.diagnosis)}"']))
        _emit(args, "\n".join(lines))
    else:
        lines = []
        for r in reports:
            tag = "PASS" if r.passed else "FAIL"
            line = f"{tag}  {r.entry.label()}   nf: {format_normal_form(r.normal_form)}"
            if r.diagnosis:
                line += "   [" + "; ".join(r.diagnosis) + "]"
            lines.append(line)
        lines.append(f"{len(reports) - len(failed)}/{len(reports)} entries pass")
        _emit(args, "\n".join(lines))
    return EXIT_OK if not failed else EXIT_FAILURE


def cmd_census(args) -> int:
    spec = subgroup_generators(args.subgroup, args.type, allow_commutator=args.allow_commutator)
    padder = Padder(spec.ctype, args.N, _registry(args), args.atom,
                    allow_commutator=args.allow_commutator)
    seeds = padder.seeds() if args.subgroup == "commutator" else [padder.seed()]
    bound = None
    if args.padding_bound:
        bound = padder.padding_bound("plain" if args.subgroup == "full" else args.subgroup)
    census = census_certified(spec, args.radius, seeds, cap=args.cap, r0_mode=args.r0_mode)
    checks = [covering_check(census, R) for R in range(census.R0 + 1, args.radius + 1)]
    manifest = census_manifest(census, command="census", cap=args.cap, r0_mode=args.r0_mode,
                               atom_padding_bound=bound,
                               covering_checks=[{"R": c.R, "distance_ok": c.distance_ok,
                                        "counting_ok": c.counting_ok, "lhs": c.lhs, "rhs": c.rhs}
                                       for c in checks])
    if args.format == "csv":
        _emit(args, census_csv(census).rstrip("\n"))
    elif args.format == "structured":
        _emit(args, _structured({"manifest": manifest, "rows": census_rows(census)}))
    else:
        lines = [f"{spec.ctype.name} {spec.kind}: {len(spec.gens)} generators, R0={census.R0} "
                 f"({census.R0_source}), seeds {census.provenance}, N={census.N}"]
        for row in census_rows(census):
            lines.append("R={R} ball={ball} certified={certified} within_R0={within_R0} "
                         "eps'={epsilon_prime} eps={epsilon}".format(**row))
        for c in checks:
            lines.append(f"covering R={c.R}: distance {'ok' if c.distance_ok else 'FAIL'}, "
                         f"counting {c.lhs} <= {c.rhs} {'ok' if c.counting_ok else 'FAIL'}")
        _emit(args, "\n".join(lines))
    if args.out and args.format != "structured":
        Path(args.out + ".manifest.json").write_text(manifest_json(manifest) + "\n")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CERTIFICATION


def cmd_xa_search(args) -> int:
    rs = build_root_system(args.type)
    a = choose_atom_for_type(rs.ctype) if args.atom is None else args.atom
    xa = find_structural_xa(rs.ctype, a, args.bound, args.min_length)
    seed = LoxodromicSeed(rs.ctype, a, xa, args.N)
    rec = seed.record()
    if args.format == "structured" or args.out:
        _emit(args, json.dumps(rec))
    else:
        _emit(args, f"{rs.name} atom {a}: x_a = {format_normal_form(xa)}  "
                    f"(provenance {seed.provenance}, N={seed.N})")
    return EXIT_OK


def cmd_seed_import(args) -> int:
    reg = SeedRegistry.load(args.file)
    for seed in reg:
        print(f"ok  {seed.ctype.name} atom {seed.atom} N={seed.N} {seed.provenance} "
              f"x_a = {format_normal_form(seed.xa)}")
    if args.out:
        reg.dump(args.out)
    return EXIT_OK


def cmd_seed_export(args) -> int:
    reg = SeedRegistry()
    for t in args.types:
        rs = build_root_system(t)
        atoms = range(1, rs.rank + 1) if args.all_atoms else [choose_atom_for_type(rs.ctype)]
        for a in atoms:
            reg.add(structural_seed(rs.ctype, a, args.N, args.bound))
    if args.out:
        reg.dump(args.out)
    else:
        for seed in reg:
            print(json.dumps(seed.record()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="garsidelab",
                                description="Garside normal forms and loxodromy certificates "
                                            "for spherical Artin-Tits groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "structured")):
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--out", help="write the output to this file")

    sp = sub.add_parser("nf", help="left normal form of a word")
    sp.add_argument("type")
    sp.add_argument("word")
    common(sp)
    sp.set_defaults(func=cmd_nf)

    sp = sub.add_parser("rigid", help="rigidity of a word")
    sp.add_argument("type")
    sp.add_argument("word")
    common(sp)
    sp.set_defaults(func=cmd_rigid)

    sp = sub.add_parser("pad", help="pad g to a certified product g*x")
    sp.add_argument("type")
    sp.add_argument("subgroup", choices=("full", "pure", "commutator"))
    sp.add_argument("word")
    sp.add_argument("--N", type=int, default=DEFAULT_N)
    sp.add_argument("--atom", type=int, default=None)
    sp.add_argument("--seeds", help="seed registry file (JSON lines)")
    sp.add_argument("--allow-commutator", action="store_true",
                    help="allow commutator padding for types whose abelianization is not Z")
    common(sp)
    sp.set_defaults(func=cmd_pad)

    sp = sub.add_parser("verify-tables", help="check every table lift")
    sp.add_argument("types", nargs="+")
    sp.add_argument("--corrected", action="store_true",
                    help="swap in the replacement cells for the ones that fail as printed")
    common(sp, ("text", "csv", "structured"))
    sp.set_defaults(func=cmd_verify_tables)

    sp = sub.add_parser("census", help="certificate census of a Cayley ball")
    sp.add_argument("type")
    sp.add_argument("subgroup", choices=("full", "pure", "commutator"))
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--N", type=int, default=DEFAULT_N)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--atom", type=int, default=None)
    sp.add_argument("--seeds", help="seed registry file (JSON lines)")
    sp.add_argument("--r0-mode", choices=("minimal", "ball-max"), default="minimal")
    sp.add_argument("--padding-bound", action="store_true",
                    help="also record the g-independent atom length bound of the paddings")
    sp.add_argument("--allow-commutator", action="store_true")
    common(sp, ("csv", "text", "structured"))
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("xa-search", help="structural search for a seed x_a")
    sp.add_argument("type")
    sp.add_argument("atom", type=int, nargs="?")
    sp.add_argument("--bound", type=int, default=3, help="maximal canonical length")
    sp.add_argument("--min-length", type=int, default=2, help="minimal canonical length")
    sp.add_argument("--N", type=int, default=DEFAULT_N)
    common(sp)
    sp.set_defaults(func=cmd_xa_search)

    sp = sub.add_parser("seed-import", help="validate a seed registry file")
    sp.add_argument("file")
    sp.add_argument("--out", help="write the validated registry here")
    sp.set_defaults(func=cmd_seed_import)

    sp = sub.add_parser("seed-export", help="write structural seeds as a registry file")
    sp.add_argument("types", nargs="+")
    sp.add_argument("--N", type=int, default=DEFAULT_N)
    sp.add_argument("--bound", type=int, default=3)
    sp.add_argument("--all-atoms", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_seed_export)
    return p


_ERRORS = [
    (WordParseError, EXIT_PARSE, "parse"),
    (json.JSONDecodeError, EXIT_PARSE, "parse"),
    (UnsupportedType, EXIT_UNSUPPORTED, "unsupported-type"),
    (GroupTooLarge, EXIT_CAP, "cap-exceeded"),
    (CapExceeded, EXIT_CAP, "cap-exceeded"),
    (CertificationFailure, EXIT_CERTIFICATION, "certification-failure"),
    (SearchExhausted, EXIT_FAILURE, "search-exhausted"),
    (NotInSubgroup, EXIT_FAILURE, "not-in-subgroup"),
    (ValueError, EXIT_PARSE, "invalid-input"),
]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except tuple(e for e, _, _ in _ERRORS) as exc:
        for cls, code, name in _ERRORS:
            if isinstance(exc, cls):
                break
        print(json.dumps({"error": name, "message": str(exc)}), file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
