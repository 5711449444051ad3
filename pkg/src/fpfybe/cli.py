"""Command-line driver.

Exit codes: 0 success, 1 usage error, 2 unknown group, 3 invalid psi,
4 verification failure, 5 search budget exceeded.  ``YBE_BUDGET`` overrides
the search node budget.  Pairs are indexed row-major, index(a) * n + index(b).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import numpy as np

from . import io as fio
from .braces import build_brace, phi_isomorphism
from .errors import (
    BadOrder,
    BadParity,
    BadPsi,
    BadRange,
    FpfYbeError,
    GroupError,
    NonInvolutiveTau,
    NotBijective,
    NotHomomorphic,
    OddTau,
    SearchBudgetExceeded,
    UnknownGroup,
    UnsupportedFamily,
    UnsupportedParity,
)
from .families import FAMILIES, FamilySpec, a4_square_map, coverage_report, family_map, family_solution, r_formula, s_formula
from .groups import CATALOG, FiniteGroup, cycle_notation, group_by_name
from .morphisms import (
    GroupMap,
    automorphism_group,
    classify_fpf,
    enumerate_endomorphisms,
    is_fpf_abelian,
    map_from_generators,
    require_fpf,
    trivial_map,
)
from .perms import count_fpf_subgroups, is_g_stable, is_regular, opposite_regular_subgroup, regular_subgroup
from .ybe import (
    YbeMap,
    closed_form_R,
    closed_form_Rprime,
    inverse_solution_from_brace,
    is_inverse_pair,
    solution_from_brace,
    verify_braid,
    verify_nondegenerate,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNKNOWN_GROUP = 2
EXIT_BAD_PSI = 3
EXIT_VERIFY = 4
EXIT_BUDGET = 5

_BAD_PSI = (BadPsi, NotHomomorphic, NotBijective, BadRange, BadParity, UnsupportedParity, UnsupportedFamily, OddTau, NonInvolutiveTau)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which is taken by "unknown group"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _group(name: str) -> FiniteGroup:
    try:
        return group_by_name(name)
    except (UnknownGroup, BadOrder, GroupError) as exc:
        raise CliError(str(exc), EXIT_UNKNOWN_GROUP) from exc


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# psi selectors

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_GREEK = {"α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta", "a": "alpha", "b": "beta", "g": "gamma", "d": "delta"}
_DIHEDRAL_RE = re.compile(r"^(alpha|beta|gamma|delta|[αβγδ])_?(\d+)$")
_META_RE = re.compile(r"^(?:psi|ψ)_?(\d+)[_,](\d+)$")


def _parse_cycles(text: str, n: int) -> tuple[int, ...]:
    perm = list(range(n))
    for cyc in re.findall(r"\(([^()]*)\)", text):
        pts = [int(x) for x in cyc.replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            if not 0 <= a < n:
                raise BadRange(f"point {a} outside 0..{n - 1}")
            perm[a] = b
    if sorted(perm) != list(range(n)):
        raise BadRange(f"{text!r} is not a permutation")
    return tuple(perm)


def family_spec_for(G: FiniteGroup, sel: str) -> FamilySpec | None:
    """Interpret ``sel`` as a family member of ``G``, or return None."""
    s = sel.strip().translate(_SUBSCRIPTS)
    if s in ("trivial", "psi0", "ψ0", "0map"):
        return FamilySpec("trivial", group=G.name)
    m = _DIHEDRAL_RE.match(s)
    if m and G.name.startswith("D"):
        fam = _GREEK.get(m.group(1), m.group(1))
        return FamilySpec(f"dihedral-{fam}", (G.order // 2, int(m.group(2))))
    m = _META_RE.match(s)
    if m and "p" in G.meta and "q" in G.meta:
        return FamilySpec("metacyclic-ij", (G.meta["p"], G.meta["q"], int(m.group(1)), int(m.group(2))))
    if s.startswith("tau=") and G.name.startswith("S"):
        n = G.meta["degree"]
        return FamilySpec("symmetric-tau", (n,), _parse_cycles(s[4:], n))
    if s in ("x^2", "square") and G.name == "A4":
        return FamilySpec("alternating-a4")
    return None


def _element(G: FiniteGroup, tok: str) -> int:
    tok = tok.strip()
    if tok in G.labels:
        return G.index_of(tok)
    if tok.lstrip("-").isdigit():
        k = int(tok)
        if 0 <= k < G.order:
            return k
    raise BadRange(f"{tok!r} is not an element of {G.name}")


def resolve_psi(G: FiniteGroup, sel: str) -> tuple[GroupMap, FamilySpec | None]:
    """Selectors: an orbit index (``0``, ``1``, ...), a family member
    (``trivial``, ``gamma0``/``γ₀``, ``psi_2_1``, ``tau=(0 1)(2 3)``, ``x^2``),
    generator images (``r=rs,s=rs``), an explicit image vector of indices or
    labels (``0,5,...``), or ``@file.json`` holding a map document."""
    s = sel.strip()
    if s.startswith("@"):
        return fio.map_from_dict(json.loads(Path(s[1:]).read_text()), G), None
    if s.isdigit():
        reps = classify_fpf(G).representatives()
        k = int(s)
        if k >= len(reps):
            raise BadRange(f"{G.name} has {len(reps)} brace orbits, no index {k}")
        return reps[k], None
    spec = family_spec_for(G, s)
    if spec is not None:
        if spec.family == "trivial":
            return trivial_map(G), spec
        psi = a4_square_map()[0] if spec.family == "alternating-a4" else family_map(spec)
        return GroupMap(G, G, psi.images), spec
    body = s.strip("[]")
    if "=" in body or "->" in body:
        gens = {}
        for part in body.split(","):
            k, _, v = part.replace("->", "=").partition("=")
            gens[_element(G, k)] = _element(G, v)
        return map_from_generators(G, gens), None
    toks = [t for t in re.split(r"[,\s]+", body) if t]
    if len(toks) != G.order:
        raise BadRange(f"cannot read {sel!r} as a map on {G.name}")
    psi = GroupMap.from_images(G, [_element(G, t) for t in toks])
    bad = psi.homomorphism_violation()
    if bad is not None or psi(G.identity) != G.identity:
        raise NotHomomorphic(f"image vector is not a homomorphism (pair {bad})")
    return psi, None


def _certified(psi: GroupMap) -> GroupMap:
    cert = is_fpf_abelian(psi)
    if not cert.valid:
        raise BadPsi(f"not fixed point free abelian: {cert.explain()}", cert)
    return psi


def _labels(psi: GroupMap) -> list[str]:
    return [psi.target.label(x) for x in psi.images]


# ---------------------------------------------------------------------------
# output


def render_solution(R: YbeMap, fmt: str) -> str:
    if fmt == "table":
        return fio.solution_to_table(R)
    if fmt == "csv":
        return fio.solution_to_csv(R)
    if fmt == "json":
        return _dumps(fio.solution_to_dict(R))
    if fmt == "matrix":
        return fio.rmatrix_to_json(fio.export_rmatrix(R), R.group.name)
    raise CliError(f"unknown format {fmt!r}", EXIT_USAGE)


def _read_solution(path: str, G: FiniteGroup) -> YbeMap:
    text = Path(path).read_text()
    if path.endswith(".csv"):
        return fio.solution_from_csv(text, G)
    if not text.lstrip().startswith("{"):
        return fio.solution_from_grid(fio.parse_table(text), G)
    d = json.loads(text)
    if "entries" in d and d["entries"] and isinstance(d["entries"][0], dict):
        return fio.solution_from_dict(d, G)
    return fio.rmatrix_to_ybe(fio.rmatrix_from_dict(d), G)


# ---------------------------------------------------------------------------
# commands


def cmd_groups(args, out) -> int:
    if args.action == "list":
        for name in CATALOG:
            G = group_by_name(name)
            out.write(f"{name:<7} order {G.order:>3}  {'abelian' if G.is_abelian else 'nonabelian'}\n")
        return EXIT_OK
    if not args.name:
        raise CliError("groups show needs a group name", EXIT_USAGE)
    G = _group(args.name)
    if args.json:
        out.write(_dumps(fio.group_to_dict(G)))
        return EXIT_OK
    out.write(f"{G.name}: order {G.order}\n")
    out.write(f"generators: {', '.join(G.label(g) for g in G.generators)}\n")
    out.write(f"labels: {' '.join(G.labels)}\n")
    out.write(f"center: {' '.join(G.label(g) for g in G.center)}\n")
    out.write(f"conjugacy classes: {len(G.conjugacy_classes)}\n")
    return EXIT_OK


def cmd_fpf(args, out) -> int:
    G = _group(args.group)
    cls = classify_fpf(G)
    if args.json:
        if args.classify:
            out.write(_dumps(fio.classification_to_dict(cls)))
        else:
            out.write(_dumps([fio.map_to_dict(m) for m in cls.all_maps]))
        return EXIT_OK
    out.write(f"{G.name}: {len(cls.all_maps)} fixed point free abelian maps\n")
    for k, m in enumerate(cls.all_maps):
        out.write(f"  [{k}] {m.describe()}  images: {' '.join(_labels(m))}\n")
    if args.classify:
        out.write(f"brace orbits: {len(cls.brace_orbits)}\n")
        for k, orbit in enumerate(cls.brace_orbits):
            out.write(f"  orbit {k}: representative [{orbit[0]}], members {orbit}\n")
        out.write(f"subgroup classes: {len(cls.subgroup_classes)}\n")
        for k, c in enumerate(cls.subgroup_classes):
            out.write(f"  class {k}: {c}\n")
    return EXIT_OK


def cmd_solve(args, out) -> int:
    G = _group(args.group)
    psi, spec = resolve_psi(G, args.psi)
    _certified(psi)
    if args.method == "family":
        if spec is None:
            raise UnsupportedFamily("--method family needs a family selector")
        R = family_solution(spec, prime=args.prime)
        R = YbeMap(G, R.first, R.second, R.provenance, psi)
    elif args.method == "brace":
        B = build_brace(G, psi)
        R = inverse_solution_from_brace(B) if args.prime else solution_from_brace(B)
    else:
        R = closed_form_Rprime(G, psi) if args.prime else closed_form_R(G, psi)
    out.write(render_solution(R, args.format))
    return EXIT_OK


def _check(report: list, name: str, fn) -> bool:
    """Run one check; ``fn`` returns None on success or a failure message."""
    try:
        msg = fn()
    except FpfYbeError as exc:
        msg = f"{type(exc).__name__}: {exc}"
    report.append((name, msg))
    return msg is None


def _triple(G, w) -> str:
    return "(" + ", ".join(G.label(x) for x in w) + ")"


def _solution_checks(report: list, tag: str, R: YbeMap) -> None:
    G = R.group

    def braid():
        v = verify_braid(R)
        return None if v else f"fails on {_triple(G, v.witness)}"

    def nondeg():
        if verify_nondegenerate(R):
            return None
        n = G.order
        ref = np.arange(n)
        for x in range(n):
            if sorted(R.first[x]) != list(ref):
                return f"sigma_{G.label(x)} is not a bijection"
        for y in range(n):
            if sorted(R.second[:, y]) != list(ref):
                return f"tau_{G.label(y)} is not a bijection"
        return "degenerate"

    _check(report, f"braid({tag})", braid)
    _check(report, f"nondegenerate({tag})", nondeg)


def verify_psi(G: FiniteGroup, psi: GroupMap) -> list[tuple[str, str | None]]:
    """Every check for one map; entries are (name, None) or (name, message)."""
    report: list = []
    if not _check(report, "fpf-abelian", lambda: None if is_fpf_abelian(psi).valid else is_fpf_abelian(psi).explain()):
        return report
    state = {}

    def brace():
        state["B"] = build_brace(G, psi)

    _check(report, "brace-axioms", brace)
    _check(report, "phi-isomorphism", lambda: phi_isomorphism(G, psi) and None)

    def regular():
        N = regular_subgroup(G, psi)
        state["N"] = N
        return None if is_regular(N) else "N_psi is not regular"

    _check(report, "regularity", regular)
    if "N" in state:
        N = state["N"]
        _check(report, "g-stability", lambda: None if is_g_stable(N) else "N_psi is not G-stable")

        def opp():
            M = opposite_regular_subgroup(N)
            if not is_regular(M):
                return "opposite subgroup is not regular"
            return None if is_g_stable(M) else "opposite subgroup is not G-stable"

        _check(report, "opposite-subgroup", opp)
    R, Rp = closed_form_R(G, psi), closed_form_Rprime(G, psi)
    if "B" in state:
        B = state["B"]

        def agree(a, b):
            if a.same_table(b):
                return None
            g, h = np.argwhere((a.first != b.first) | (a.second != b.second))[0]
            return f"differs at ({G.label(int(g))}, {G.label(int(h))})"

        _check(report, "closed-form-R", lambda: agree(R, solution_from_brace(B)))
        _check(report, "closed-form-R'", lambda: agree(Rp, inverse_solution_from_brace(B)))
    _solution_checks(report, "R", R)
    _solution_checks(report, "R'", Rp)
    _check(report, "inverse-pair", lambda: None if is_inverse_pair(R, Rp) else "R' o R is not the identity")
    return report


def _write_report(out, title: str, report) -> bool:
    ok = all(msg is None for _, msg in report)
    out.write(f"{title}: {'ok' if ok else 'FAILED'}\n")
    for name, msg in report:
        out.write(f"  {'pass' if msg is None else 'FAIL'} {name}{'' if msg is None else ': ' + msg}\n")
    return ok


def cmd_verify(args, out) -> int:
    G = _group(args.group)
    if args.table:
        R = _read_solution(args.table, G)
        report: list = []
        _solution_checks(report, "R", R)
        return EXIT_OK if _write_report(out, f"{G.name} {args.table}", report) else EXIT_VERIFY
    if args.all:
        maps = classify_fpf(G).all_maps
    elif args.psi:
        psi, _ = resolve_psi(G, args.psi)
        if not is_fpf_abelian(psi).valid:
            _certified(psi)
        maps = [psi]
    else:
        raise CliError("verify needs --all, --table or a psi selector", EXIT_USAGE)
    ok = True
    for psi in maps:
        ok &= _write_report(out, f"{G.name} [{psi.describe()}]", verify_psi(G, psi))
    out.write(f"{len(maps)} maps checked, {'all pass' if ok else 'failures found'}\n")
    return EXIT_OK if ok else EXIT_VERIFY


def _spec_from_args(args) -> FamilySpec:
    fam = args.spec
    if fam not in FAMILIES:
        raise UnsupportedFamily(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    if fam.startswith("dihedral-"):
        return FamilySpec(fam, (args.n, args.i))
    if fam == "symmetric-tau":
        tau = None if args.tau is None else _parse_cycles(args.tau, args.n)
        return FamilySpec(fam, (args.n,), tau)
    if fam == "metacyclic-ij":
        return FamilySpec(fam, (args.p, args.q, args.i, args.j))
    if fam == "trivial":
        return FamilySpec(fam, group=args.group or "C1")
    return FamilySpec(fam)


def cmd_families(args, out) -> int:
    if args.spec == "list":
        out.write("\n".join(FAMILIES) + "\n")
        return EXIT_OK
    try:
        spec = _spec_from_args(args)
    except TypeError as exc:
        raise CliError(f"missing family parameter ({exc})", EXIT_USAGE) from exc
    psi = require_fpf(family_map(spec))
    if args.solve:
        out.write(render_solution(family_solution(spec, prime=args.prime), args.format))
        return EXIT_OK
    if args.json:
        out.write(_dumps({"spec": fio.family_spec_to_dict(spec), "map": fio.map_to_dict(psi)}))
        return EXIT_OK
    out.write(f"{spec.family} {list(spec.parameters)} on {psi.source.name}\n")
    if spec.tau is not None:
        out.write(f"tau = {cycle_notation(spec.tau)}\n")
    out.write(f"map: {psi.describe()}\n")
    out.write(f"images: {' '.join(_labels(psi))}\n")
    return EXIT_OK


def cmd_counts(args, out) -> int:
    G = _group(args.group)
    cls = classify_fpf(G)
    d = {
        "group": G.name,
        "order": G.order,
        "endomorphisms": len(enumerate_endomorphisms(G)),
        "automorphisms": len(automorphism_group(G)),
        "fpf_maps": len(cls.all_maps),
        "brace_orbits": len(cls.brace_orbits),
        "subgroup_classes": len(cls.subgroup_classes),
        "regular_subgroups": count_fpf_subgroups(G, cls.all_maps),
    }
    try:
        rep = coverage_report(G)
        d["coverage"] = {"kind": rep.kind, "complete": rep.complete, **rep.details}
    except UnsupportedFamily:
        d["coverage"] = None
    if d["coverage"] and rep.kind == "dihedral":
        d["s_formula"] = s_formula(rep.details["n"])
        d["r_formula"] = r_formula(rep.details["n"])
    if args.json:
        out.write(_dumps(d))
        return EXIT_OK
    for k, v in d.items():
        if k == "coverage" and v is not None:
            for ck, cv in v.items():
                out.write(f"coverage.{ck}: {cv}\n")
        else:
            out.write(f"{k}: {'no criterion' if v is None else v}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fpfybe", description="Yang-Baxter solutions from fixed point free abelian endomorphisms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("groups", help="list the catalog or show one group")
    g.add_argument("action", choices=["list", "show"])
    g.add_argument("name", nargs="?")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_groups)

    f = sub.add_parser("fpf", help="enumerate fixed point free abelian maps")
    f.add_argument("group")
    f.add_argument("--classify", action="store_true")
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_fpf)

    s = sub.add_parser("solve", help="emit the solution R_psi (or R'_psi)")
    s.add_argument("group")
    s.add_argument("psi")
    s.add_argument("--prime", action="store_true", help="emit R' instead of R")
    s.add_argument("--format", choices=["table", "json", "csv", "matrix"], default="table")
    s.add_argument("--method", choices=["closed", "brace", "family"], default="closed")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run every check for one map or all of them")
    v.add_argument("group")
    v.add_argument("psi", nargs="?")
    v.add_argument("--all", action="store_true")
    v.add_argument("--table", help="verify an external solution (json, csv, table or matrix file)")
    v.set_defaults(func=cmd_verify)

    fa = sub.add_parser("families", help="evaluate a named family member")
    fa.add_argument("spec", help="family tag or 'list'")
    for name in ("n", "i", "j", "p", "q"):
        fa.add_argument(f"--{name}", type=int)
    fa.add_argument("--tau", help="cycle notation, e.g. '(0 1)(2 3)'")
    fa.add_argument("--group", help="group for the trivial family")
    fa.add_argument("--solve", action="store_true", help="print the family's solution formula")
    fa.add_argument("--prime", action="store_true")
    fa.add_argument("--format", choices=["table", "json", "csv", "matrix"], default="table")
    fa.add_argument("--json", action="store_true")
    fa.set_defaults(func=cmd_families)

    c = sub.add_parser("counts", help="counts and completeness criteria")
    c.add_argument("group")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_counts)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnknownGroup as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_GROUP
    except SearchBudgetExceeded as exc:
        print(f"error: search budget exceeded ({exc}); raise YBE_BUDGET", file=sys.stderr)
        return EXIT_BUDGET
    except _BAD_PSI as exc:
        print(f"error: invalid psi: {exc}", file=sys.stderr)
        return EXIT_BAD_PSI
    except (FpfYbeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY if isinstance(exc, (FpfYbeError, ValueError)) else EXIT_USAGE


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
