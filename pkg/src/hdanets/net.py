"""Plain nets, nets with inhibitor arcs, and generalized self-modifying nets.

Firing rules (interleaved and concurrent-step) and the two kinds of
reachability graph live here; they are deliberately independent of the
cell-based constructions in :mod:`hdanets.semantics`, which the oracles
compare against them.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Union

from .budget import Budget, BudgetExceeded
from .multiset import Marking, Multiset, TransitionMultiset, shortlex
from .poly import FlowPolynomial, as_poly

KINDS = ("plain", "pni", "gnet")
STEP_MODES = ("cs", "aposteriori", "apriori")

Label = Union[str, Multiset]


class Net:
    """A net ``(S, T, F)`` with optional inhibitor arcs ``I``.

    ``pre`` maps ``(place, transition)`` and ``post`` maps
    ``(transition, place)`` to arc weights: ints, polynomial text, or
    :class:`FlowPolynomial`. ``kind`` is inferred when omitted.
    Places and transitions are stored in shortlex order.
    """

    def __init__(
        self,
        places: Iterable[str],
        transitions: Iterable[str],
        pre: Mapping[tuple[str, str], FlowPolynomial | int | str] | None = None,
        post: Mapping[tuple[str, str], FlowPolynomial | int | str] | None = None,
        inhibitors: Iterable[tuple[str, str]] = (),
        kind: str | None = None,
    ):
        places = list(places)
        transitions = list(transitions)
        if len(set(places)) != len(places):
            raise ValueError("duplicate place identifier")
        if len(set(transitions)) != len(transitions):
            raise ValueError("duplicate transition identifier")
        clash = set(places) & set(transitions)
        if clash:
            raise ValueError(f"names used both as place and transition: {sorted(clash)}")
        self.places: tuple[str, ...] = tuple(sorted(places, key=shortlex))
        self.transitions: tuple[str, ...] = tuple(sorted(transitions, key=shortlex))
        pset, tset = set(self.places), set(self.transitions)

        self.pre: dict[tuple[str, str], FlowPolynomial] = {}
        for (s, t), w in (pre or {}).items():
            if s not in pset or t not in tset:
                raise ValueError(f"input arc ({s}, {t}) references an unknown node")
            P = as_poly(w)
            if not P.is_zero():
                self.pre[(s, t)] = P
        self.post: dict[tuple[str, str], FlowPolynomial] = {}
        for (t, s), w in (post or {}).items():
            if s not in pset or t not in tset:
                raise ValueError(f"output arc ({t}, {s}) references an unknown node")
            P = as_poly(w)
            if not P.is_zero():
                self.post[(t, s)] = P
        self.inhibitors: frozenset[tuple[str, str]] = frozenset(inhibitors)
        for s, t in self.inhibitors:
            if s not in pset or t not in tset:
                raise ValueError(f"inhibitor arc ({s}, {t}) references an unknown node")
        for P in list(self.pre.values()) + list(self.post.values()):
            unknown = P.variables() - pset
            if unknown:
                raise ValueError(f"polynomial {P} mentions unknown places {sorted(unknown)}")

        constant = all(P.is_constant() for P in self.pre.values()) and all(
            P.is_constant() for P in self.post.values()
        )
        if kind is None:
            kind = "gnet" if not constant else ("pni" if self.inhibitors else "plain")
        if kind not in KINDS:
            raise ValueError(f"unknown net kind {kind!r}")
        if kind == "plain" and (self.inhibitors or not constant):
            raise ValueError("a plain net has constant weights and no inhibitor arcs")
        if kind == "pni" and not constant:
            raise ValueError("a net with inhibitor arcs must have constant weights")
        if kind == "gnet" and self.inhibitors:
            raise ValueError("G-nets with inhibitor arcs have no defined semantics")
        self.kind = kind

        self._in: dict[str, tuple[tuple[str, FlowPolynomial], ...]] = {}
        self._out: dict[str, tuple[tuple[str, FlowPolynomial], ...]] = {}
        self._inhib: dict[str, frozenset[str]] = {}
        for t in self.transitions:
            self._in[t] = tuple((s, self.pre[(s, t)]) for s in self.places if (s, t) in self.pre)
            self._out[t] = tuple((s, self.post[(t, s)]) for s in self.places if (t, s) in self.post)
            self._inhib[t] = frozenset(s for s, u in self.inhibitors if u == t)
        self._preset: dict[str, Multiset] = {}
        self._postset: dict[str, Multiset] = {}
        if constant:
            for t in self.transitions:
                self._preset[t] = Multiset({s: P.constant_term for s, P in self._in[t]})
                self._postset[t] = Multiset({s: P.constant_term for s, P in self._out[t]})

    def is_constant(self) -> bool:
        return bool(self._preset) or not self.transitions

    def preset(self, t: str) -> Multiset:
        """``•t`` for constant-weight nets."""
        try:
            return self._preset[t]
        except KeyError:
            if t not in self._in:
                raise KeyError(f"unknown transition {t!r}") from None
            raise ValueError("preset of a G-net transition depends on the marking") from None

    def postset(self, t: str) -> Multiset:
        """``t•`` for constant-weight nets."""
        try:
            return self._postset[t]
        except KeyError:
            if t not in self._out:
                raise KeyError(f"unknown transition {t!r}") from None
            raise ValueError("postset of a G-net transition depends on the marking") from None

    def inhibitor_places(self, t: str) -> frozenset[str]:
        return self._inhib[t]

    def effect(self, t: str, m: Mapping[str, int]) -> tuple[Marking, Marking]:
        if self._preset:
            return self._preset[t], self._postset[t]
        consume = Multiset({s: P.evaluate(m) for s, P in self._in[t]})
        produce = Multiset({s: P.evaluate(m) for s, P in self._out[t]})
        return consume, produce

    def preset_free(self) -> list[str]:
        """Transitions that consume nothing in every marking."""
        return [t for t in self.transitions if all(P.is_zero() for _, P in self._in[t])]

    def without_inhibitors(self) -> Net:
        kind = "gnet" if self.kind == "gnet" else "plain"
        return Net(self.places, self.transitions, self.pre, self.post, (), kind)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Net):
            return NotImplemented
        return (
            self.places == other.places
            and self.transitions == other.transitions
            and self.pre == other.pre
            and self.post == other.post
            and self.inhibitors == other.inhibitors
            and self.kind == other.kind
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<Net {self.kind}: {len(self.places)} places, {len(self.transitions)} transitions>"


@dataclass(frozen=True)
class LabeledGraph:
    """Vertices are markings; edge labels are transitions or transition multisets.

    Equality compares vertices and edges only.
    """

    vertices: frozenset
    edges: frozenset
    initial: Marking | None = field(default=None, compare=False)
    truncated: bool = field(default=False, compare=False)

    def out_edges(self, v) -> set[tuple[Label, Marking]]:
        return {(lab, dst) for src, lab, dst in self.edges if src == v}

    def sorted_edges(self) -> list[tuple]:
        def lab_key(lab):
            return (0, shortlex(lab)) if isinstance(lab, str) else (1, lab.sort_key())

        return sorted(self.edges, key=lambda e: (e[0].sort_key(), lab_key(e[1]), e[2].sort_key()))

    def sorted_vertices(self) -> list:
        return sorted(self.vertices, key=lambda v: v.sort_key())


def transition_effect(net: Net, t: str, m: Mapping[str, int]) -> tuple[Marking, Marking]:
    """Tokens consumed and produced by firing ``t``, evaluated at ``m``."""
    if t not in net._in:
        raise KeyError(f"unknown transition {t!r}")
    return net.effect(t, m)


def enabled(net: Net, m: Marking, t: str) -> bool:
    consume, _ = transition_effect(net, t, m)
    if not consume <= m:
        return False
    return all(m.get(s, 0) == 0 for s in net._inhib[t])


def fire(net: Net, m: Marking, t: str) -> Marking:
    if not enabled(net, m, t):
        raise ValueError(f"transition {t} is not enabled in {m}")
    consume, produce = net.effect(t, m)
    return m - consume + produce


def _check_step_kind(net: Net, mode: str) -> None:
    if mode not in STEP_MODES:
        raise ValueError(f"unknown step mode {mode!r}")
    if net.kind == "gnet":
        raise ValueError("no concurrent-step rule is defined for G-nets")
    if mode == "cs" and net.kind != "plain":
        raise ValueError("mode 'cs' applies to plain nets; use 'aposteriori' or 'apriori'")


def _conflict(net: Net, t1: str, t2: str) -> bool:
    return bool(net.postset(t1).support() & net._inhib[t2])


def step_enabled(net: Net, m: Marking, U: Mapping[str, int], mode: str) -> bool:
    _check_step_kind(net, mode)
    U = Multiset(U)
    if not U:
        raise ValueError("a step must be nonempty")
    pre = Multiset()
    for t, n in U.items():
        pre = pre + net.preset(t) * n
    if not pre <= m:
        return False
    if mode == "cs":
        return True
    for t in U:
        if any(m.get(s, 0) for s in net._inhib[t]):
            return False
    if mode == "apriori":
        return True
    ts = list(U)
    for t1 in ts:
        for t2 in ts:
            if t1 == t2 and U[t1] < 2:
                continue
            if _conflict(net, t1, t2):
                return False
    return True


def fire_step(net: Net, m: Marking, U: Mapping[str, int]) -> Marking:
    if net.kind == "gnet":
        raise ValueError("no concurrent-step rule is defined for G-nets")
    U = Multiset(U)
    pre = Multiset()
    post = Multiset()
    for t, n in U.items():
        pre = pre + net.preset(t) * n
        post = post + net.postset(t) * n
    return m - pre + post


def enabled_steps(net: Net, m: Marking, mode: str, max_size: int) -> list[TransitionMultiset]:
    """All nonempty steps of size at most ``max_size`` firable at ``m``."""
    _check_step_kind(net, mode)
    ts = list(net.transitions)
    if mode != "cs":
        ts = [t for t in ts if not any(m.get(s, 0) for s in net._inhib[t])]
    found: list[TransitionMultiset] = []
    chosen: list[tuple[str, int]] = []

    def rec(k: int, remaining: Marking, size: int) -> None:
        if k == len(ts):
            if size:
                found.append(Multiset(dict(chosen)))
            return
        rec(k + 1, remaining, size)
        t = ts[k]
        pre = net.preset(t)
        if mode == "aposteriori" and any(
            _conflict(net, t, u) or _conflict(net, u, t) for u, _ in chosen
        ):
            return
        self_conflict = mode == "aposteriori" and _conflict(net, t, t)
        c = 0
        while size + c < max_size and pre <= remaining:
            if c == 1 and self_conflict:
                break
            remaining = remaining - pre
            c += 1
            chosen.append((t, c))
            rec(k + 1, remaining, size + c)
            chosen.pop()

    rec(0, m, 0)
    return found


def reachability_graph(net: Net, i: Marking, budget: Budget | None = None) -> LabeledGraph:
    """Interleaved reachability graph from ``i``, one transition per edge."""
    budget = budget or Budget()
    i = Multiset(i)
    seen = {i}
    edges = set()
    queue = deque([i])
    while queue:
        m = queue.popleft()
        for t in net.transitions:
            if enabled(net, m, t):
                m2 = fire(net, m, t)
                edges.add((m, t, m2))
                if m2 not in seen:
                    seen.add(m2)
                    if len(seen) > budget.max_states:
                        partial = LabeledGraph(frozenset(seen), frozenset(edges), i, True)
                        raise BudgetExceeded(
                            f"more than {budget.max_states} reachable markings", partial
                        )
                    queue.append(m2)
    return LabeledGraph(frozenset(seen), frozenset(edges), i)


def cs_reachability_graph(
    net: Net, i: Marking, mode: str = "cs", budget: Budget | None = None
) -> LabeledGraph:
    """Concurrent-step reachability graph; edges carry transition multisets.

    Steps are capped at ``budget.max_step_size``; the result is flagged
    ``truncated`` if a larger step was firable somewhere.
    """
    budget = budget or Budget()
    _check_step_kind(net, mode)
    cap = budget.max_step_size
    i = Multiset(i)
    seen = {i}
    edges = set()
    truncated = False
    queue = deque([i])
    while queue:
        m = queue.popleft()
        for U in enabled_steps(net, m, mode, cap + 1):
            if U.size() > cap:
                truncated = True
                continue
            m2 = fire_step(net, m, U)
            edges.add((m, U, m2))
            if m2 not in seen:
                seen.add(m2)
                if len(seen) > budget.max_states:
                    partial = LabeledGraph(frozenset(seen), frozenset(edges), i, True)
                    raise BudgetExceeded(
                        f"more than {budget.max_states} reachable markings", partial
                    )
                queue.append(m2)
    return LabeledGraph(frozenset(seen), frozenset(edges), i, truncated)


def embed_to_gnet(net: Net) -> Net:
    """View a plain net as a G-net whose arcs carry constant polynomials."""
    if net.kind == "gnet":
        return net
    if net.kind != "plain":
        raise ValueError("nets with inhibitor arcs cannot be embedded into G-nets")
    return Net(net.places, net.transitions, net.pre, net.post, (), kind="gnet")


def as_plain(net: Net) -> Net:
    """Inverse of :func:`embed_to_gnet` for constant-weight G-nets."""
    if net.kind != "gnet":
        return net
    if not net.is_constant():
        raise ValueError("G-net has non-constant flow polynomials")
    return Net(net.places, net.transitions, net.pre, net.post, (), kind="plain")
