"""Text formats for geometries, groups, Kantor families and automorphism lists.

geometry:  ``geom <n_points> <n_lines>``, then ``L <id>: <point ids>`` per
           line, optional ``order <s> <t>`` trailer.
group:     ``group <order>``, then ``table`` and one row per element, or
           ``law <name> <params>`` for a built-in law.
family:    ``kantor <s> <t>``, an embedded group block, then
           ``A <label>: <indices>`` and ``Astar <label>: <indices>``.
autos:     ``autos <n_points> <n_lines> <count>``, then ``p <k>: <images>``
           and ``l <k>: <images>`` per automorphism.
Lines starting with ``#`` are comments.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .gq import GeometryAutomorphism, PointLineGeometry
from .grp import FiniteGroup, Subgroup, elementary_abelian, heisenberg, suzuki_tits_group
from .kantor import KantorFamily

__all__ = [
    "FormatError",
    "dump_geometry",
    "load_geometry",
    "dump_group",
    "load_group",
    "dump_family",
    "load_family",
    "dump_autos",
    "load_autos",
    "write_text",
    "read_text",
]

LAWS = {
    "heisenberg": (heisenberg, 2),
    "suzuki_tits": (suzuki_tits_group, 1),
    "elementary": (elementary_abelian, 2),
}


class FormatError(ValueError):
    pass


def _rows(text: str) -> list[str]:
    return [r.strip() for r in text.splitlines() if r.strip() and not r.lstrip().startswith("#")]


def _ints(s: str) -> list[int]:
    try:
        return [int(v) for v in s.split()]
    except ValueError as e:
        raise FormatError(f"expected integers: {s!r}") from e


def _keyed(row: str, key: str) -> tuple[str, list[int]]:
    head, sep, body = row.partition(":")
    parts = head.split()
    if not sep or len(parts) != 2 or parts[0] != key:
        raise FormatError(f"expected '{key} <id>: ...', got {row!r}")
    return parts[1], _ints(body)


def dump_geometry(geom: PointLineGeometry, comment: str = "") -> str:
    out = [f"# {c}" for c in comment.splitlines()] if comment else []
    out.append(f"geom {geom.n_points} {geom.n_lines}")
    for j, L in enumerate(geom.lines):
        out.append(f"L {j}: " + " ".join(str(int(p)) for p in L))
    order = geom.order if geom.order is not None else getattr(geom, "declared_order", None)
    if order is not None:
        out.append(f"order {order[0]} {order[1]}")
    return "\n".join(out) + "\n"


def load_geometry(text: str, name: str = "") -> PointLineGeometry:
    rows = _rows(text)
    if not rows or rows[0].split()[0] != "geom":
        raise FormatError("missing 'geom' header")
    hdr = _ints(rows[0][4:])
    if len(hdr) != 2:
        raise FormatError("header must be 'geom <n_points> <n_lines>'")
    n, m = hdr
    body = rows[1:]
    order = None
    if body and body[-1].startswith("order"):
        order = tuple(_ints(body[-1][5:]))
        body = body[:-1]
    if len(body) != m:
        raise FormatError(f"expected {m} lines, found {len(body)}")
    lines = []
    for j, row in enumerate(body):
        lab, pts = _keyed(row, "L")
        if lab != str(j):
            raise FormatError(f"line ids must run 0..{m - 1} in order, got {lab}")
        lines.append(pts)
    try:
        g = PointLineGeometry(n, lines, name=name)
    except ValueError as e:
        raise FormatError(str(e)) from e
    g.declared_order = order
    return g


def dump_group(G: FiniteGroup) -> str:
    out = [f"group {G.order}"]
    if G.spec is not None and G.spec[0] in LAWS:
        out.append("law " + " ".join(str(v) for v in G.spec))
        return "\n".join(out) + "\n"
    if G.table is None:
        raise FormatError("law-based group without a built-in law name cannot be written")
    out.append("table")
    for row in G.table:
        out.append(" ".join(str(int(v)) for v in row))
    return "\n".join(out) + "\n"


def _group_from_rows(rows: list[str]) -> tuple[FiniteGroup, int]:
    if not rows or rows[0].split()[0] != "group":
        raise FormatError("missing 'group' header")
    order = _ints(rows[0][5:])
    if len(order) != 1:
        raise FormatError("header must be 'group <order>'")
    order = order[0]
    if len(rows) < 2:
        raise FormatError("missing group body")
    kind = rows[1].split()
    if kind[0] == "law":
        if len(kind) < 2 or kind[1] not in LAWS:
            raise FormatError(f"unknown law {kind[1:]}")
        fn, k = LAWS[kind[1]]
        params = _ints(" ".join(kind[2:]))
        if len(params) != k:
            raise FormatError(f"law {kind[1]} takes {k} parameters")
        G = fn(*params)
        if G.order != order:
            raise FormatError(f"law gives order {G.order}, header says {order}")
        return G, 2
    if kind[0] != "table":
        raise FormatError("expected 'table' or 'law'")
    if len(rows) < 2 + order:
        raise FormatError("table is truncated")
    table = np.array([_ints(r) for r in rows[2 : 2 + order]], dtype=np.int64)
    if table.shape != (order, order) or table.min() < 0 or table.max() >= order:
        raise FormatError("table has the wrong shape or out-of-range entries")
    if not (table[0] == np.arange(order)).all() or not (table[:, 0] == np.arange(order)).all():
        raise FormatError("index 0 must be the identity")
    for row in table:
        if len(np.unique(row)) != order:
            raise FormatError("table row is not a permutation")
    return FiniteGroup(order, table=table), 2 + order


def load_group(text: str) -> FiniteGroup:
    rows = _rows(text)
    G, used = _group_from_rows(rows)
    if used != len(rows):
        raise FormatError("trailing content after group")
    return G


def dump_family(K: KantorFamily) -> str:
    out = [f"kantor {K.s} {K.t}", dump_group(K.group).rstrip("\n")]
    for lab, A in zip(K.labels, K.F):
        out.append(f"A {lab}: " + " ".join(str(int(g)) for g in A.members))
    for lab, A in zip(K.labels, K.Fstar):
        out.append(f"Astar {lab}: " + " ".join(str(int(g)) for g in A.members))
    return "\n".join(out) + "\n"


def load_family(text: str, name: str = "") -> KantorFamily:
    rows = _rows(text)
    if not rows or rows[0].split()[0] != "kantor":
        raise FormatError("missing 'kantor' header")
    st = _ints(rows[0][6:])
    if len(st) != 2:
        raise FormatError("header must be 'kantor <s> <t>'")
    G, used = _group_from_rows(rows[1:])
    A, As = {}, {}
    for row in rows[1 + used :]:
        key = row.split()[0]
        if key not in ("A", "Astar"):
            raise FormatError(f"unexpected row {row!r}")
        lab, idx = _keyed(row, key)
        if min(idx, default=0) < 0 or max(idx, default=0) >= G.order:
            raise FormatError(f"index out of range in {key} {lab}")
        (A if key == "A" else As)[lab] = Subgroup(G, idx)
    if list(A) != list(As):
        raise FormatError("A and Astar labels differ")
    labels = list(A)
    return KantorFamily(G, [A[k] for k in labels], [As[k] for k in labels], st[0], st[1], labels=labels, name=name)


def dump_autos(action) -> str:
    action = list(action)
    if not action:
        raise FormatError("empty automorphism list")
    out = [f"autos {len(action[0].points)} {len(action[0].lines)} {len(action)}"]
    for k, a in enumerate(action):
        out.append(f"p {k}: " + " ".join(str(int(v)) for v in a.points))
        out.append(f"l {k}: " + " ".join(str(int(v)) for v in a.lines))
    return "\n".join(out) + "\n"


def load_autos(text: str, geom: PointLineGeometry | None = None) -> list[GeometryAutomorphism]:
    rows = _rows(text)
    if not rows or rows[0].split()[0] != "autos":
        raise FormatError("missing 'autos' header")
    hdr = _ints(rows[0][5:])
    if len(hdr) != 3:
        raise FormatError("header must be 'autos <n_points> <n_lines> <count>'")
    n, m, c = hdr
    if geom is not None and (geom.n_points, geom.n_lines) != (n, m):
        raise FormatError(f"automorphisms act on {n} points/{m} lines, geometry has {geom.n_points}/{geom.n_lines}")
    if len(rows) != 1 + 2 * c:
        raise FormatError(f"expected {2 * c} rows after header")
    out = []
    for k in range(c):
        _, pts = _keyed(rows[1 + 2 * k], "p")
        _, lns = _keyed(rows[2 + 2 * k], "l")
        if sorted(pts) != list(range(n)) or sorted(lns) != list(range(m)):
            raise FormatError(f"automorphism {k} is not a permutation pair")
        a = GeometryAutomorphism(pts, lns)
        if geom is not None and not a.preserves(geom):
            raise FormatError(f"automorphism {k} does not preserve incidence")
        out.append(a)
    return out


def write_text(path, text: str) -> None:
    Path(path).write_text(text)


def read_text(path) -> str:
    return Path(path).read_text()
