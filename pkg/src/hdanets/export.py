"""JSON, DOT and CSV renderings. Every writer emits a canonical order so
output bytes depend only on the input."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Mapping

from .cubical import Cell, Complex
from .multiset import Multiset
from .semantics import STGraph


def _marking_json(m):
    return m.as_dict() if isinstance(m, Multiset) else m


def _marking_text(m) -> str:
    return str(m)


def _face_order(item):
    (A, B), _ = item
    return (len(A) + len(B), sorted(A), sorted(B))


def complex_to_json(X: Complex) -> dict:
    return {
        "alphabet": list(X.alphabet),
        "cells": [
            {
                "id": k,
                "marking": _marking_json(c.marking),
                "conclist": list(c.conclist),
                "faces": [
                    {"A": sorted(A), "B": sorted(B), "target": y}
                    for (A, B), y in sorted(X.faces[k].items(), key=_face_order)
                ],
            }
            for k, c in enumerate(X.cells)
        ],
        "initial": list(X.initial),
        "partial": X.partial,
        "truncated": X.truncated,
    }


def complex_from_json(doc: Mapping) -> Complex:
    """Rebuild a complex from :func:`complex_to_json` output.

    Cell ids must be ``0..n-1``. A ``marking`` object becomes a
    :class:`Multiset`; a string is kept as an opaque label.
    """
    try:
        raw = sorted(doc["cells"], key=lambda c: c["id"])
        if [c["id"] for c in raw] != list(range(len(raw))):
            raise ValueError("cell ids must be 0..n-1")
        cells, faces = [], []
        for c in raw:
            m = c["marking"]
            marking = Multiset(m) if isinstance(m, Mapping) else m
            cells.append(Cell(marking, tuple(c["conclist"])))
            faces.append(
                {(frozenset(f["A"]), frozenset(f["B"])): int(f["target"]) for f in c.get("faces", [])}
            )
        return Complex(
            cells,
            faces,
            doc.get("initial", []),
            bool(doc.get("partial", False)),
            doc.get("alphabet", []),
            bool(doc.get("truncated", False)),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"not a complex document: {exc!r}") from exc


def st_to_json(g: STGraph) -> dict:
    return {
        "alphabet": list(g.alphabet),
        "states": [
            {
                "id": k,
                "marking": s.marking.as_dict(),
                "conclist": list(s.conclist),
                "memory": [
                    {"consume": c.as_dict(), "produce": p.as_dict()} for c, p in s.memory
                ],
            }
            for k, s in enumerate(g.states)
        ],
        "edges": [
            {"src": src, "kind": kind, "position": pos, "dst": dst}
            for src, kind, pos, dst in g.edges
        ],
        "initial": list(g.initial),
        "truncated": g.truncated,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def complex_to_dot(X: Complex, name: str = "hda") -> str:
    """The 1-truncation: 0-cells as nodes, 1-cells with both faces as edges."""
    one = frozenset({0})
    empty = frozenset()
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for k, c in enumerate(X.cells):
        if c.dim == 0:
            shape = ", shape=doublecircle" if k in X.initial else ""
            lines.append(f"  c{k} [label={_q(_marking_text(c.marking))}{shape}];")
    for k, c in enumerate(X.cells):
        if c.dim != 1:
            continue
        lo = X.faces[k].get((one, empty))
        hi = X.faces[k].get((empty, one))
        if lo is not None and hi is not None:
            lines.append(f"  c{lo} -> c{hi} [label={_q(c.conclist[0])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _state_label(s) -> str:
    if not s.dim:
        return str(s.marking)
    events = ", ".join(
        t if not (c or p) else f"{t}[{c}/{p}]" for t, (c, p) in zip(s.conclist, s.memory)
    )
    return f"{s.marking} | {events}"


def st_to_dot(g: STGraph, name: str = "st") -> str:
    """ST-graph with ``t+`` (start) and ``t-`` (terminate) edge labels."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", "  node [shape=box];"]
    for k, s in enumerate(g.states):
        shape = ", peripheries=2" if k in g.initial else ""
        lines.append(f"  s{k} [label={_q(_state_label(s))}{shape}];")
    for src, kind, pos, dst in g.edges:
        big = g.states[dst if kind == "start" else src]
        sign = "+" if kind == "start" else "-"
        lines.append(f"  s{src} -> s{dst} [label={_q(big.conclist[pos] + sign)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


STATS_HEADER = ("dimension", "num_cells", "num_unique_conclists", "num_unique_markings")


def stats_rows(obj: Complex | STGraph) -> list[tuple[int, int, int, int]]:
    items = obj.cells if isinstance(obj, Complex) else obj.states
    by_dim: dict[int, list] = {}
    for it in items:
        by_dim.setdefault(len(it.conclist), []).append(it)
    return [
        (
            d,
            len(group),
            len({it.conclist for it in group}),
            len({it.marking for it in group}),
        )
        for d, group in sorted(by_dim.items())
    ]


def stats_csv(obj: Complex | STGraph) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_HEADER)
    w.writerows(stats_rows(obj))
    return buf.getvalue()
