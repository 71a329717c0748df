"""Readers for PNML nets, flow-polynomial text, and the G-net JSON format.

PNML support covers the core place/transition model. An arc whose
``<type>`` child has text or ``value`` equal to ``inhibitor`` is an
inhibitor arc. G-nets use a small JSON container::

    {"places": [{"name": "p1", "initial": 1}, ...],
     "transitions": [{"name": "a",
                      "in":  [{"place": "p2", "poly": "p2"}],
                      "out": [{"place": "p4", "poly": "p2"}]}]}
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .multiset import Marking, Multiset
from .net import Net
from .poly import FlowPolynomial


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" or "warning"
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.location}: {self.message}"


class ParseError(ValueError):
    """Input rejected; ``diagnostics`` lists every error found."""

    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class PolySyntaxError(ValueError):
    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.offset = offset
        self.text = text


# polynomials

_TOKEN = re.compile(r"\s*(?:(?P<nat>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_.]*)|(?P<op>[+*]))")


class _PolyParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            mt = _TOKEN.match(text, pos)
            if not mt:
                off = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise PolySyntaxError(f"unexpected character {text[off]!r}", text, off)
            kind = mt.lastgroup
            self.tokens.append((kind, mt.group(kind), mt.start(kind)))
            pos = mt.end()
        self.k = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.k] if self.k < len(self.tokens) else None

    def take(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise PolySyntaxError(f"expected {what}, found end of input", self.text, len(self.text))
        if tok[0] != kind:
            raise PolySyntaxError(f"expected {what}, found {tok[1]!r}", self.text, tok[2])
        self.k += 1
        return tok

    def op(self, symbol: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == symbol:
            self.k += 1
            return True
        return False

    def poly(self) -> FlowPolynomial:
        monos = [self.term()]
        while self.op("+"):
            monos.append(self.term())
        tok = self.peek()
        if tok is not None:
            raise PolySyntaxError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return FlowPolynomial(monos)

    def term(self) -> tuple[int, dict[str, int]]:
        tok = self.peek()
        if tok is not None and tok[0] == "nat":
            self.k += 1
            coef = int(tok[1])
            if not self.op("*"):
                return coef, {}
            return coef, self.vars()
        return 1, self.vars()

    def vars(self) -> dict[str, int]:
        exps: dict[str, int] = {}
        while True:
            _, name, _ = self.take("name", "a place name")
            exps[name] = exps.get(name, 0) + 1
            if not self.op("*"):
                return exps


def parse_poly(text: str) -> FlowPolynomial:
    """Parse ``term ('+' term)*`` where a term is ``n``, ``n*vars`` or ``vars``.

    >>> parse_poly("2*p1*p1 + p2 + 3").evaluate({"p1": 2, "p2": 1})
    12
    """
    return _PolyParser(text).poly()


# PNML

_KNOWN = {
    "net": {"name", "page", "place", "transition", "arc", "graphics", "toolspecific"},
    "page": {"name", "page", "place", "transition", "arc", "graphics", "toolspecific"},
    "place": {"name", "initialMarking", "graphics", "toolspecific"},
    "transition": {"name", "graphics", "toolspecific"},
    "arc": {"name", "inscription", "type", "graphics", "toolspecific"},
}


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _child(el: ET.Element, name: str) -> ET.Element | None:
    for c in el:
        if _local(c.tag) == name:
            return c
    return None


def _label_text(el: ET.Element) -> str | None:
    text = _child(el, "text")
    if text is not None and text.text is not None:
        return text.text.strip()
    return None


def _check_no_preset_free(net: Net, diags: list[ParseDiagnostic], where: str) -> None:
    for t in net.preset_free():
        diags.append(
            ParseDiagnostic(
                "warning",
                f"{where}/transition[{t}]",
                "transition has an empty preset; exploration needs explicit dimension and step caps",
            )
        )


def parse_pnml(data: bytes | str) -> tuple[Net, Marking, list[ParseDiagnostic]]:
    """Read the first ``<net>`` of a PNML document.

    Returns the net, its initial marking, and warnings. Raises
    :class:`ParseError` on any error.
    """
    diags: list[ParseDiagnostic] = []
    errors: list[ParseDiagnostic] = []

    def err(loc: str, msg: str) -> None:
        errors.append(ParseDiagnostic("error", loc, msg))

    def warn(loc: str, msg: str) -> None:
        diags.append(ParseDiagnostic("warning", loc, msg))

    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise ParseError([ParseDiagnostic("error", f"line {line}, column {col}", "malformed XML")])

    nets = [el for el in root.iter() if _local(el.tag) == "net"]
    if not nets:
        raise ParseError([ParseDiagnostic("error", "/", "no <net> element")])
    if len(nets) > 1:
        warn("/", f"{len(nets)} nets found; reading the first")

    places: dict[str, int] = {}
    transitions: list[str] = []
    arcs: list[tuple[str, ET.Element]] = []

    def number(el: ET.Element | None, loc: str, default: int) -> int:
        if el is None:
            return default
        raw = _label_text(el)
        if raw is None or raw == "":
            return default
        try:
            value = int(raw)
        except ValueError:
            err(loc, f"expected an integer, found {raw!r}")
            return default
        if value < 0:
            err(loc, f"negative value {value}")
            return default
        return value

    def walk(el: ET.Element, path: str) -> None:
        kind = _local(el.tag)
        for c in el:
            tag = _local(c.tag)
            if tag not in _KNOWN[kind]:
                warn(f"{path}/{tag}", "unknown element skipped")
                continue
            if tag == "page":
                walk(c, f"{path}/page[{c.get('id', '?')}]")
                continue
            if tag not in ("place", "transition", "arc"):
                continue
            ident = c.get("id")
            loc = f"{path}/{tag}[{ident}]"
            if not ident:
                err(f"{path}/{tag}", "missing id attribute")
                continue
            for g in c:
                if _local(g.tag) not in _KNOWN[tag]:
                    warn(f"{loc}/{_local(g.tag)}", "unknown element skipped")
            if tag == "arc":
                arcs.append((loc, c))
            elif ident in places or ident in transitions:
                err(loc, f"duplicate id {ident!r}")
            elif tag == "place":
                places[ident] = number(_child(c, "initialMarking"), f"{loc}/initialMarking", 0)
            else:
                transitions.append(ident)

    walk(nets[0], f"net[{nets[0].get('id', '?')}]")

    tset = set(transitions)
    pre: dict[tuple[str, str], int] = {}
    post: dict[tuple[str, str], int] = {}
    inhibitors: set[tuple[str, str]] = set()
    for loc, arc in arcs:
        src, dst = arc.get("source"), arc.get("target")
        if src is None or dst is None:
            err(loc, "arc needs source and target attributes")
            continue
        bad = [x for x in (src, dst) if x not in places and x not in tset]
        if bad:
            err(loc, f"dangling reference to {bad[0]!r}")
            continue
        inhibitor = False
        type_el = _child(arc, "type")
        if type_el is not None:
            kind = (type_el.get("value") or _label_text(type_el) or (type_el.text or "")).strip()
            if kind == "inhibitor":
                inhibitor = True
            elif kind not in ("normal", ""):
                err(f"{loc}/type", f"unsupported arc type {kind!r}")
                continue
        weight = number(_child(arc, "inscription"), f"{loc}/inscription", 1)
        if inhibitor:
            if src not in places or dst not in tset:
                err(loc, "inhibitor arcs must lead from a place to a transition")
            else:
                inhibitors.add((src, dst))
            continue
        if src in places and dst in tset:
            table, key = pre, (src, dst)
        elif src in tset and dst in places:
            table, key = post, (src, dst)
        else:
            err(loc, "arcs must connect a place and a transition")
            continue
        if key in table:
            err(loc, f"duplicate arc {src} -> {dst}")
            continue
        if weight == 0:
            warn(f"{loc}/inscription", "zero weight; arc ignored")
        table[key] = weight

    if errors:
        raise ParseError(errors)
    net = Net(places, transitions, pre, post, inhibitors)
    initial = Multiset({p: n for p, n in places.items()})
    _check_no_preset_free(net, diags, "net")
    return net, initial, diags


# G-net JSON


def parse_gnet(data: bytes | str) -> tuple[Net, Marking, list[ParseDiagnostic]]:
    """Read a G-net from its JSON container; weights are polynomials or integers."""
    diags: list[ParseDiagnostic] = []
    errors: list[ParseDiagnostic] = []

    def err(loc: str, msg: str) -> None:
        errors.append(ParseDiagnostic("error", loc, msg))

    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(
            [ParseDiagnostic("error", f"line {exc.lineno}, column {exc.colno}", exc.msg)]
        )
    if not isinstance(doc, dict):
        raise ParseError([ParseDiagnostic("error", "/", "top level must be an object")])
    for key in doc:
        if key not in ("places", "transitions"):
            diags.append(ParseDiagnostic("warning", f"/{key}", "unknown key skipped"))

    places: dict[str, int] = {}
    for k, p in enumerate(doc.get("places", [])):
        loc = f"/places/{k}"
        if not isinstance(p, dict) or not isinstance(p.get("name"), str) or not p["name"]:
            err(loc, "place needs a nonempty string name")
            continue
        init = p.get("initial", 0)
        if not isinstance(init, int) or isinstance(init, bool) or init < 0:
            err(f"{loc}/initial", f"initial marking must be a natural number, got {init!r}")
            init = 0
        if p["name"] in places:
            err(loc, f"duplicate place {p['name']!r}")
        places[p["name"]] = init

    transitions: list[str] = []
    pre: dict[tuple[str, str], FlowPolynomial] = {}
    post: dict[tuple[str, str], FlowPolynomial] = {}
    for k, t in enumerate(doc.get("transitions", [])):
        loc = f"/transitions/{k}"
        if not isinstance(t, dict) or not isinstance(t.get("name"), str) or not t["name"]:
            err(loc, "transition needs a nonempty string name")
            continue
        name = t["name"]
        if name in transitions or name in places:
            err(loc, f"duplicate name {name!r}")
            continue
        transitions.append(name)
        for side, table in (("in", pre), ("out", post)):
            for j, arc in enumerate(t.get(side, [])):
                aloc = f"{loc}/{side}/{j}"
                if not isinstance(arc, dict) or arc.get("place") not in places:
                    err(aloc, f"unknown place {arc.get('place') if isinstance(arc, dict) else arc!r}")
                    continue
                poly = _read_weight(arc.get("poly", 1), aloc, err)
                if poly is None:
                    continue
                unknown = sorted(poly.variables() - places.keys())
                if unknown:
                    err(aloc, f"polynomial mentions unknown places {unknown}")
                    continue
                key = (arc["place"], name) if side == "in" else (name, arc["place"])
                if key in table:
                    err(aloc, f"duplicate arc for place {arc['place']!r}")
                    continue
                table[key] = poly
    if errors:
        raise ParseError(errors)
    net = Net(places, transitions, pre, post, (), kind="gnet")
    _check_no_preset_free(net, diags, "")
    return net, Multiset(places), diags


def _read_weight(value, loc: str, err) -> FlowPolynomial | None:
    if isinstance(value, bool):
        err(loc, "weight must be an integer or polynomial text")
        return None
    if isinstance(value, int):
        if value < 0:
            err(loc, f"negative weight {value}")
            return None
        return FlowPolynomial.constant(value)
    if isinstance(value, str):
        try:
            return parse_poly(value)
        except PolySyntaxError as exc:
            err(f"{loc}/poly@{exc.offset}", str(exc))
            return None
    err(loc, f"weight must be an integer or polynomial text, got {value!r}")
    return None


def dump_gnet(net: Net, initial: Marking) -> str:
    """Serialize to the G-net JSON container; inverse of :func:`parse_gnet`."""
    if net.inhibitors:
        raise ValueError("the G-net format has no inhibitor arcs")

    def weight(P: FlowPolynomial):
        return P.constant_term if P.is_constant() else P.render()

    doc = {
        "places": [{"name": p, "initial": initial.get(p, 0)} for p in net.places],
        "transitions": [
            {
                "name": t,
                "in": [{"place": s, "poly": weight(P)} for s, P in net._in[t]],
                "out": [{"place": s, "poly": weight(P)} for s, P in net._out[t]],
            }
            for t in net.transitions
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def detect_format(path: str | Path) -> str:
    name = str(path).lower()
    if name.endswith(".pnml") or name.endswith(".xml"):
        return "pnml"
    if name.endswith(".json"):
        return "gnet"
    raise ValueError(f"cannot infer the input format of {path}; pass pnml or gnet explicitly")


def load_net(path: str | Path, fmt: str | None = None) -> tuple[Net, Marking, list[ParseDiagnostic]]:
    """Read a net file; ``fmt`` is ``"pnml"`` or ``"gnet"``, inferred from the name if omitted."""
    fmt = fmt or detect_format(path)
    data = Path(path).read_bytes()
    if fmt == "pnml":
        return parse_pnml(data)
    if fmt == "gnet":
        return parse_gnet(data)
    raise ValueError(f"unknown input format {fmt!r}")
