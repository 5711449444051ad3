"""JSON, CSV, text-grid and sparse R-matrix exports, with matching parsers.

Pairs of group elements are indexed row-major, ``index(a) * n + index(b)``,
in every format.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass

import numpy as np

from .braces import SkewBrace
from .families import FamilySpec
from .groups import FiniteGroup, group_by_name, make_group_from_cayley
from .morphisms import FpfClassification, GroupMap
from .perms import RegularSubgroup
from .ybe import YbeMap

BASIS_CONVENTION = "row-major: pair (a, b) -> index(a) * n + index(b)"


# groups and maps


def group_to_dict(G: FiniteGroup) -> dict:
    return {
        "name": G.name,
        "order": G.order,
        "labels": list(G.labels),
        "cayley": G.cayley.tolist(),
    }


def group_from_dict(d: dict) -> FiniteGroup:
    G = make_group_from_cayley(d["cayley"], d["labels"], name=d["name"])
    if G.order != d.get("order", G.order):
        raise ValueError("order field disagrees with the table")
    return G


def _resolve(group, name: str) -> FiniteGroup:
    if group is not None:
        if group.name != name:
            raise ValueError(f"expected group {group.name}, document names {name}")
        return group
    return group_by_name(name)


def map_to_dict(psi: GroupMap) -> dict:
    return {"group": psi.source.name, "images": list(psi.images)}


def map_from_dict(d: dict, group: FiniteGroup | None = None) -> GroupMap:
    G = _resolve(group, d["group"])
    return GroupMap.from_images(G, d["images"])


def classification_to_dict(c: FpfClassification) -> dict:
    return {
        "group": c.group.name,
        "orbits": [
            {
                "representative": map_to_dict(c.all_maps[orbit[0]]),
                "members": [map_to_dict(c.all_maps[k]) for k in orbit],
            }
            for orbit in c.brace_orbits
        ],
        "subgroup_classes": [[map_to_dict(c.all_maps[k]) for k in cls] for cls in c.subgroup_classes],
    }


def classification_from_dict(d: dict, group: FiniteGroup | None = None) -> FpfClassification:
    G = _resolve(group, d["group"])
    maps: dict[tuple, GroupMap] = {}
    for orbit in d["orbits"]:
        for m in orbit["members"]:
            psi = map_from_dict(m, G)
            maps[psi.images] = psi
    all_maps = [maps[k] for k in sorted(maps)]
    index = {m.images: i for i, m in enumerate(all_maps)}
    orbits = [sorted(index[tuple(m["images"])] for m in o["members"]) for o in d["orbits"]]
    classes = [sorted(index[tuple(m["images"])] for m in cls) for cls in d["subgroup_classes"]]
    return FpfClassification(G, all_maps, orbits, classes)


# braces and subgroups


def brace_to_dict(B: SkewBrace) -> dict:
    return {
        "group": B.carrier.name,
        "psi": None if B.source_psi is None else list(B.source_psi.images),
        "circle": B.circle.tolist(),
        "bar": [int(x) for x in B.bar],
    }


def brace_from_dict(d: dict, group: FiniteGroup | None = None) -> SkewBrace:
    G = _resolve(group, d["group"])
    psi = None if d.get("psi") is None else GroupMap.from_images(G, d["psi"])
    B = SkewBrace(G, np.array(d["circle"], dtype=np.int64), np.array(d["bar"], dtype=np.int64), psi)
    B.verify()
    return B


def subgroup_to_dict(N: RegularSubgroup) -> dict:
    return {
        "group": N.group.name,
        "members": N.members.tolist(),
        "labels": [N.group.label(int(g)) for g in N.label],
    }


def subgroup_from_dict(d: dict, group: FiniteGroup | None = None) -> RegularSubgroup:
    G = _resolve(group, d["group"])
    label = np.array([G.index_of(s) for s in d["labels"]], dtype=np.int64)
    return RegularSubgroup(G, np.array(d["members"], dtype=np.int64), label)


# solutions


def solution_to_dict(R: YbeMap) -> dict:
    G = R.group
    lab = G.labels
    entries = []
    for g in G.elements():
        for h in G.elements():
            a, b = R(g, h)
            entries.append({"in": [lab[g], lab[h]], "out": [lab[a], lab[b]]})
    return {
        "group": G.name,
        "psi": None if R.psi is None else [lab[x] for x in R.psi.images],
        "provenance": R.provenance,
        "basis": BASIS_CONVENTION,
        "entries": entries,
    }


def solution_from_dict(d: dict, group: FiniteGroup | None = None) -> YbeMap:
    G = _resolve(group, d["group"])
    n = G.order
    first = np.full((n, n), -1, dtype=np.int64)
    second = np.full((n, n), -1, dtype=np.int64)
    for e in d["entries"]:
        g, h = (G.index_of(x) for x in e["in"])
        first[g, h], second[g, h] = (G.index_of(x) for x in e["out"])
    if (first < 0).any():
        raise ValueError("solution table is not total over G x G")
    psi = None
    if d.get("psi") is not None:
        psi = GroupMap.from_images(G, [G.index_of(x) for x in d["psi"]])
    return YbeMap(G, first, second, d.get("provenance", "external"), psi)


def cell(R: YbeMap, g: int, h: int) -> str:
    a, b = R(g, h)
    return f"({R.group.label(a)},{R.group.label(b)})"


def solution_to_grid(R: YbeMap) -> list[list[str]]:
    """Rows indexed by g, columns by h, cells ``(g',h')``; first row and
    column carry the labels."""
    lab = list(R.group.labels)
    rows = [[""] + lab]
    for g in R.group.elements():
        rows.append([lab[g]] + [cell(R, g, h) for h in R.group.elements()])
    return rows


def solution_to_table(R: YbeMap) -> str:
    rows = solution_to_grid(R)
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    lines = []
    for k, row in enumerate(rows):
        head = row[0].ljust(widths[0])
        body = "  ".join(x.ljust(w) for x, w in zip(row[1:], widths[1:]))
        lines.append(f"{head} | {body}".rstrip())
        if k == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> list[list[str]]:
    """Inverse of :func:`solution_to_table` back to the label grid.

    Columns are separated by at least two spaces; labels such as ``(0 1 2)``
    contain single spaces only.
    """
    rows = []
    for line in text.splitlines():
        if not line.strip() or set(line.strip()) == {"-"}:
            continue
        head, _, body = line.partition("|")
        rows.append([head.strip()] + [c for c in re.split(r"\s{2,}", body.strip()) if c])
    return rows


def solution_to_csv(R: YbeMap) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(solution_to_grid(R))
    return buf.getvalue()


def split_cell(text: str) -> tuple[str, str]:
    """``"(g',h')"`` -> ``("g'", "h'")``; labels may contain parentheses."""
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")):
        raise ValueError(f"malformed cell {text!r}")
    t = t[1:-1]
    depth = 0
    for k, ch in enumerate(t):
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if ch == "," and depth == 0:
            return t[:k].strip(), t[k + 1 :].strip()
    raise ValueError(f"malformed cell {text!r}")


def solution_from_grid(rows: list[list[str]], G: FiniteGroup, provenance: str = "external") -> YbeMap:
    cols = [G.index_of(x) for x in rows[0][1:]]
    n = G.order
    first = np.full((n, n), -1, dtype=np.int64)
    second = np.full((n, n), -1, dtype=np.int64)
    for row in rows[1:]:
        g = G.index_of(row[0])
        for h, c in zip(cols, row[1:]):
            a, b = split_cell(c)
            first[g, h], second[g, h] = G.index_of(a), G.index_of(b)
    if (first < 0).any():
        raise ValueError("grid does not cover G x G")
    return YbeMap(G, first, second, provenance)


def solution_from_csv(text: str, G: FiniteGroup) -> YbeMap:
    return solution_from_grid(list(csv.reader(io.StringIO(text))), G)


# sparse R-matrices


@dataclass(frozen=True)
class RMatrixExport:
    """Permutation matrix of R on the vector space with basis G x G.

    Entry ``(row, col)`` carries the value 1 when ``R`` sends basis pair
    ``col`` to basis pair ``row``.
    """

    dimension: int
    entries: tuple[tuple[int, int], ...]
    basis_convention: str = BASIS_CONVENTION

    def dense(self) -> np.ndarray:
        M = np.zeros((self.dimension, self.dimension), dtype=np.int8)
        for r, c in self.entries:
            M[r, c] = 1
        return M

    def transpose(self) -> RMatrixExport:
        return RMatrixExport(self.dimension, tuple(sorted((c, r) for r, c in self.entries)))

    def is_permutation(self) -> bool:
        rows = sorted(r for r, _ in self.entries)
        cols = sorted(c for _, c in self.entries)
        ref = list(range(self.dimension))
        return len(self.entries) == self.dimension and rows == ref and cols == ref


def export_rmatrix(R: YbeMap) -> RMatrixExport:
    out = R.pair_images()
    entries = tuple(sorted((int(o), int(i)) for i, o in enumerate(out)))
    return RMatrixExport(R.n * R.n, entries)


def rmatrix_to_ybe(M: RMatrixExport, G: FiniteGroup) -> YbeMap:
    n = G.order
    if M.dimension != n * n or not M.is_permutation():
        raise ValueError("not a permutation matrix on G x G")
    out = np.empty(n * n, dtype=np.int64)
    for r, c in M.entries:
        out[c] = r
    first, second = np.divmod(out.reshape(n, n), n)
    return YbeMap(G, first, second, "external")


def rmatrix_to_dict(M: RMatrixExport, group: str | None = None) -> dict:
    d = {
        "dimension": M.dimension,
        "basis": M.basis_convention,
        "value": 1,
        "entries": [list(e) for e in M.entries],
    }
    if group is not None:
        d["group"] = group
    return d


def rmatrix_to_json(M: RMatrixExport, group: str | None = None) -> str:
    """JSON text with one coordinate pair per line."""
    d = rmatrix_to_dict(M, group)
    entries = d.pop("entries")
    head = json.dumps(d, indent=2)[:-2]
    body = ",\n".join(f"    [{r}, {c}]" for r, c in entries)
    return f'{head},\n  "entries": [\n{body}\n  ]\n}}\n'


def rmatrix_from_dict(d: dict) -> RMatrixExport:
    return RMatrixExport(int(d["dimension"]), tuple(tuple(e) for e in d["entries"]), d.get("basis", BASIS_CONVENTION))


# family specs


def family_spec_to_dict(spec: FamilySpec) -> dict:
    return {
        "family": spec.family,
        "parameters": list(spec.parameters),
        "tau": None if spec.tau is None else list(spec.tau),
        "group": spec.group,
    }


def family_spec_from_dict(d: dict) -> FamilySpec:
    return FamilySpec(d["family"], tuple(d.get("parameters", ())), d.get("tau"), d.get("group"))
