"""Translations from nets to (partial) HDAs and ST-graphs, and the oracles
that compare them with the firing-rule reachability graphs.

A cell ``(m, τ)`` has lower corner ``L = m + •τ``: the marking from which
all its events were started. Inhibitor conditions are checked against
``L``, which is the same test the step rules apply to the step ``τ``.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import combinations

from .budget import Budget, BudgetExceeded
from .conclist import Conclist, canon_insert, remove, sort_key as conclist_key
from .cubical import Cell, Complex, face_pairs, flatten, skeleton
from .multiset import Marking, Multiset, msum, shortlex
from .net import (
    LabeledGraph,
    Net,
    as_plain,
    cs_reachability_graph,
    embed_to_gnet,
    enabled,
    fire,
    reachability_graph,
)

CELL_MODES = ("plain", "aposteriori", "apriori")
ORACLE_MODES = ("hda", "plain", "aposteriori", "apriori", "st")


def _cell_mode(mode: str) -> str:
    return "plain" if mode == "hda" else mode


class _Rules:
    """Per-transition data for a constant-weight net, looked up once."""

    def __init__(self, net: Net, mode: str):
        if mode not in CELL_MODES:
            raise ValueError(f"unknown cell mode {mode!r}")
        if net.kind == "gnet":
            raise ValueError("cells of G-nets are built by build_st")
        if mode == "plain" and net.kind != "plain":
            raise ValueError("plain HDAs need a net without inhibitor arcs")
        self.mode = mode
        self.pre = {t: net.preset(t) for t in net.transitions}
        self.post = {t: net.postset(t) for t in net.transitions}
        self.inhib = {t: net.inhibitor_places(t) for t in net.transitions}
        self.conflict = {
            (t, u): bool(self.post[t].support() & self.inhib[u])
            for t in net.transitions
            for u in net.transitions
        }

    def admissible(self, m: Marking, c: Conclist) -> bool:
        if self.mode == "plain" or not c:
            return True
        labels = set(c)
        lower = m
        for t in c:
            lower = lower + self.pre[t]
        for t in labels:
            if any(lower.get(s, 0) for s in self.inhib[t]):
                return False
        if self.mode == "apriori":
            return True
        for t in labels:
            if self.conflict[(t, t)] and c.count(t) > 1:
                return False
        for t, u in combinations(sorted(labels), 2):
            if self.conflict[(t, u)] or self.conflict[(u, t)]:
                return False
        return True


def cell_admissible(net: Net, m: Marking, c: Conclist, mode: str) -> bool:
    """Whether ``(m, c)`` is a cell of the ``mode`` construction.

    ``apriori``: no inhibitor place of an event holds a token at the lower
    corner ``m + •c``. ``aposteriori`` also forbids any two distinct events
    (equal labels included) where one produces into the other's inhibitor place.
    """
    return _Rules(net, _cell_mode(mode)).admissible(Multiset(m), tuple(c))


def _faces(rules: _Rules, cells: list[Cell], index: dict[Cell, int]) -> list[dict]:
    # the offset •A + B• of a face depends on the conclist only
    offsets: dict[Conclist, list] = {}
    out = []
    for m, c in cells:
        if c not in offsets:
            offsets[c] = [
                (
                    (A, B),
                    remove(c, A | B),
                    msum([rules.pre[c[j]] for j in A] + [rules.post[c[j]] for j in B]),
                )
                for A, B in face_pairs(len(c))
            ]
        table = {}
        for key, rest, delta in offsets[c]:
            y = index.get(Cell(m + delta, rest))
            if y is not None:
                table[key] = y
        out.append(table)
    return out


def _cell_order(cell: Cell) -> tuple:
    return (len(cell.conclist), conclist_key(cell.conclist), cell.marking.sort_key())


def _assemble(net: Net, rules: _Rules, found: Iterable[Cell], i: Marking, truncated: bool) -> Complex:
    cells = sorted(found, key=_cell_order)
    index = {c: k for k, c in enumerate(cells)}
    faces = _faces(rules, cells, index)
    return Complex(
        cells,
        faces,
        [index[Cell(i, ())]],
        partial=rules.mode == "apriori",
        alphabet=net.transitions,
        truncated=truncated,
    )


def _build(net: Net, i: Marking, mode: str, budget: Budget | None) -> Complex:
    budget = budget or Budget()
    rules = _Rules(net, mode)
    i = Multiset(i)
    start = Cell(i, ())
    seen = {start}
    queue = deque([start])
    truncated = False

    def visit(cell: Cell) -> None:
        if cell not in seen:
            seen.add(cell)
            if len(seen) > budget.max_states:
                raise BudgetExceeded(
                    f"more than {budget.max_states} cells",
                    _assemble(net, rules, seen, i, truncated),
                )
            queue.append(cell)

    while queue:
        m, c = queue.popleft()
        # upsteps by one event; for these admissibility only shrinks as events
        # are added, so multi-event upsteps factor through singletons
        for t in net.transitions:
            if not rules.pre[t] <= m:
                continue
            c2, _ = canon_insert(c, t)
            m2 = m - rules.pre[t]
            if not rules.admissible(m2, c2):
                continue
            if len(c) >= budget.max_dim:
                truncated = True
                continue
            visit(Cell(m2, c2))
        # downsteps; a-priori faces may skip intermediate singletons
        n = len(c)
        sizes = range(1, n + 1) if mode == "apriori" else (1,)
        for k in sizes:
            for B in combinations(range(n), k):
                m2 = m
                for j in B:
                    m2 = m2 + rules.post[c[j]]
                c2 = remove(c, B)
                if rules.admissible(m2, c2):
                    visit(Cell(m2, c2))
    return _assemble(net, rules, seen, i, truncated)


def build_hda(net: Net, i: Marking, budget: Budget | None = None) -> Complex:
    """Reachable part of the HDA of a plain net, started at ``(i, ())``."""
    return _build(net, i, "plain", budget)


def build_phda(net: Net, i: Marking, mode: str, budget: Budget | None = None) -> Complex:
    """Reachable part of the inhibitor-aware complex.

    ``aposteriori`` yields a face-closed HDA; ``apriori`` a partial HDA whose
    upper faces are undefined where a produced token would inhibit a
    still-running event.
    """
    if mode not in ("aposteriori", "apriori"):
        raise ValueError(f"mode must be 'aposteriori' or 'apriori', got {mode!r}")
    return _build(net, i, mode, budget)


# ST-graphs of G-nets

Effect = tuple[Marking, Marking]


@dataclass(frozen=True)
class STState:
    """Marking, active transitions, and per-event memory.

    A memory entry is the part of the event's (consume, produce) pair that
    depends on the marking at its start: the value minus the value at the
    empty marking. Two starts with equal entries have the same effect, so
    entries are canonical representatives of memory classes.
    """

    marking: Marking
    conclist: Conclist
    memory: tuple[Effect, ...]

    @property
    def dim(self) -> int:
        return len(self.conclist)

    def order_key(self) -> tuple:
        return (
            self.dim,
            conclist_key(self.conclist),
            self.marking.sort_key(),
            tuple(_effect_key(e) for e in self.memory),
        )


def _effect_key(e: Effect) -> tuple:
    return (e[0].sort_key(), e[1].sort_key())


@dataclass
class STGraph:
    """States, start/terminate edges, initial states.

    Edges are ``(src, kind, position, dst)``; ``position`` indexes the
    conclist of the larger state (``dst`` for starts, ``src`` for terminations).
    """

    states: list[STState]
    edges: list[tuple[int, str, int, int]]
    initial: list[int]
    alphabet: tuple[str, ...] = ()
    truncated: bool = False
    index: dict[STState, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.index:
            self.index = {s: k for k, s in enumerate(self.states)}

    def __len__(self) -> int:
        return len(self.states)

    def lookup(self, marking, conclist=(), memory=()) -> int | None:
        return self.index.get(STState(Multiset(marking), tuple(conclist), tuple(memory)))

    def successors(self, k: int) -> list[tuple[str, int, int]]:
        return [(kind, pos, dst) for src, kind, pos, dst in self.edges if src == k]

    def run(self, moves: Iterable[tuple[str, str]]) -> int | None:
        """Follow ``(transition, "+"|"-")`` moves from the initial state.

        A ``"-"`` move terminates the first active copy of the transition.
        Returns the final state index, or ``None`` if a move is impossible.
        """
        out: dict[int, list[tuple[str, int, int]]] = {}
        for src, kind, pos, dst in self.edges:
            out.setdefault(src, []).append((kind, pos, dst))
        k = self.initial[0]
        for t, sign in moves:
            kind = "start" if sign == "+" else "terminate"
            nxt = None
            for kd, pos, dst in sorted(out.get(k, ())):
                big = self.states[dst if kd == "start" else k]
                if kd == kind and big.conclist[pos] == t:
                    nxt = dst
                    break
            if nxt is None:
                return None
            k = nxt
        return k


def _st_insert(state: STState, t: str, entry: Effect) -> tuple[Conclist, tuple[Effect, ...], int]:
    keys = [(shortlex(u), _effect_key(e)) for u, e in zip(state.conclist, state.memory)]
    pos = bisect_right(keys, (shortlex(t), _effect_key(entry)))
    c = state.conclist[:pos] + (t,) + state.conclist[pos:]
    mem = state.memory[:pos] + (entry,) + state.memory[pos:]
    return c, mem, pos


def build_st(net: Net, i: Marking, budget: Budget | None = None) -> STGraph:
    """Reachable ST-graph of a G-net (plain nets are embedded first)."""
    budget = budget or Budget()
    if net.kind == "plain":
        net = embed_to_gnet(net)
    if net.kind != "gnet":
        raise ValueError("ST-graphs are defined for G-nets and plain nets")
    empty = Multiset()
    base = {t: net.effect(t, empty) for t in net.transitions}
    i = Multiset(i)
    start = STState(i, (), ())
    seen = {start}
    edges: set[tuple[STState, str, int, STState]] = set()
    queue = deque([start])
    truncated = False

    def finish() -> STGraph:
        states = sorted(seen, key=STState.order_key)
        idx = {s: k for k, s in enumerate(states)}
        out = sorted((idx[a], kind, pos, idx[b]) for a, kind, pos, b in edges)
        return STGraph(states, out, [idx[start]], net.transitions, truncated, idx)

    def visit(s: STState) -> None:
        if s not in seen:
            seen.add(s)
            if len(seen) > budget.max_states:
                raise BudgetExceeded(f"more than {budget.max_states} ST-states", finish())
            queue.append(s)

    while queue:
        q = queue.popleft()
        m = q.marking
        for t in net.transitions:
            consume, produce = net.effect(t, m)
            if not consume <= m:
                continue
            if q.dim >= budget.max_dim:
                truncated = True
                continue
            c0, p0 = base[t]
            entry = (consume - c0, produce - p0)
            c, mem, pos = _st_insert(q, t, entry)
            q2 = STState(m - consume, c, mem)
            edges.add((q, "start", pos, q2))
            visit(q2)
        for j, (t, (_, dprod)) in enumerate(zip(q.conclist, q.memory)):
            q2 = STState(
                m + base[t][1] + dprod,
                q.conclist[:j] + q.conclist[j + 1 :],
                q.memory[:j] + q.memory[j + 1 :],
            )
            edges.add((q, "terminate", j, q2))
            visit(q2)
    return finish()


def st_truncate1(g: STGraph) -> LabeledGraph:
    """Graph on 0-dimensional states with an edge per 1-dimensional state."""
    starts: dict[int, set[int]] = {}
    ends: dict[int, set[int]] = {}
    for src, kind, _, dst in g.edges:
        if kind == "start" and g.states[src].dim == 0 and g.states[dst].dim == 1:
            starts.setdefault(dst, set()).add(src)
        elif kind == "terminate" and g.states[src].dim == 1 and g.states[dst].dim == 0:
            ends.setdefault(src, set()).add(dst)
    edges = set()
    for x, srcs in starts.items():
        label = g.states[x].conclist[0]
        for a in srcs:
            for b in ends.get(x, ()):
                edges.add((g.states[a].marking, label, g.states[b].marking))
    vertices = frozenset(s.marking for s in g.states if s.dim == 0)
    initial = g.states[g.initial[0]].marking if g.initial else None
    return LabeledGraph(vertices, frozenset(edges), initial, g.truncated)


# Oracles


@dataclass
class CheckResult:
    """Outcome of an oracle. ``bounded`` means only the explored region was compared."""

    ok: bool
    bounded: bool = False
    details: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    @property
    def status(self) -> str:
        if not self.ok:
            return "FAIL"
        return "PASS (bounded)" if self.bounded else "PASS"


def build(net: Net, i: Marking, mode: str, budget: Budget | None = None) -> Complex | STGraph:
    """Dispatch on ``mode``: ``hda``/``plain``, ``aposteriori``, ``apriori`` or ``st``."""
    if mode not in ORACLE_MODES:
        raise ValueError(f"unknown semantics {mode!r}")
    if mode == "st":
        return build_st(net, i, budget)
    if net.kind == "gnet":
        net = as_plain(net)
    return _build(net, i, _cell_mode(mode), budget)


def _run(f, *args):
    """Call a builder; on budget exhaustion return its partial result and ``True``."""
    try:
        return f(*args), False
    except BudgetExceeded as exc:
        return exc.partial, True


def _legal_edge(net: Net, src, t, dst) -> bool:
    return enabled(net, src, t) and fire(net, src, t) == dst


def build_bounded(net: Net, i: Marking, mode: str, budget: Budget | None = None):
    """``(result, cut)`` where ``cut`` says the state budget ran out and ``result`` is partial."""
    return _run(build, net, Multiset(i), mode, budget or Budget())


def check_truncation(
    net: Net, i: Marking, mode: str, budget: Budget | None = None, built=None
) -> CheckResult:
    """The 1-truncation of the ``mode`` construction against the interleaved graph.

    Every reachable marking must be a vertex, and at every vertex the edges
    must be exactly the transitions enabled there. For ``plain`` and
    ``aposteriori`` the two graphs must coincide; the other constructions
    may add vertices reached only through concurrency. ``built`` reuses a
    :func:`build_bounded` result.
    """
    i = Multiset(i)
    budget = budget or Budget()
    obj, cut = built or _run(build, net, i, mode, budget)
    if mode != "st" and net.kind == "gnet":
        net = as_plain(net)
    T = st_truncate1(obj) if mode == "st" else skeleton(obj)
    G, gcut = _run(reachability_graph, net, i, budget)
    details = []
    if cut or gcut:
        for src, t, dst in sorted(T.edges, key=repr):
            if not _legal_edge(net, src, t, dst):
                details.append(f"edge {src} -{t}-> {dst} is not a firing")
        return CheckResult(not details, True, details)

    for v in G.vertices - T.vertices:
        details.append(f"reachable marking {v} has no 0-cell")
    if _cell_mode(mode) in ("plain", "aposteriori"):
        for v in T.vertices - G.vertices:
            details.append(f"0-cell {v} is not a reachable marking")
    out: dict = {}
    for src, t, dst in T.edges:
        out.setdefault(src, set()).add((t, dst))
    for v in T.vertices:
        want = {(t, fire(net, v, t)) for t in net.transitions if enabled(net, v, t)}
        have = out.get(v, set())
        for t, dst in sorted(want - have, key=repr):
            details.append(f"missing edge {v} -{t}-> {dst}")
        for t, dst in sorted(have - want, key=repr):
            details.append(f"extra edge {v} -{t}-> {dst}")
    return CheckResult(not details, False, sorted(details))


def check_flatten(
    net: Net, i: Marking, mode: str, budget: Budget | None = None, built=None
) -> CheckResult:
    """Flattening of the complex against the concurrent-step graph with the matching rule.

    ``built`` reuses a :func:`build_bounded` result.
    """
    mode = _cell_mode(mode)
    if mode not in CELL_MODES:
        raise ValueError("flattening is compared only for cell semantics")
    if net.kind == "gnet":
        net = as_plain(net)
    i = Multiset(i)
    budget = budget or Budget()
    step_budget = Budget(budget.max_states, budget.max_dim, budget.max_dim)
    X, cut = built or _run(build, net, i, mode, budget)
    F = flatten(X)
    step_mode = "cs" if mode == "plain" else mode
    G, gcut = _run(cs_reachability_graph, net, i, step_mode, step_budget)
    details = []
    if cut or gcut:
        # only edges starting at vertices both sides explored fully are comparable
        for e in sorted(F.edges - G.edges, key=repr):
            if e[0] in G.vertices and not gcut:
                details.append(f"flattening has extra edge {e[0]} -{e[1]}-> {e[2]}")
        return CheckResult(not details, True, details)
    for v in G.vertices ^ F.vertices:
        side = "step graph" if v in G.vertices else "flattening"
        details.append(f"vertex {v} only in the {side}")
    for src, U, dst in G.edges - F.edges:
        details.append(f"step edge {src} -{U}-> {dst} missing from flattening")
    for src, U, dst in F.edges - G.edges:
        details.append(f"flattening edge {src} -{U}-> {dst} is not a step")
    # both sides stop at the same step size, so a cap still compares like with like
    return CheckResult(not details, X.truncated or G.truncated, sorted(details))


def validate_st(g: STGraph) -> list[str]:
    """Structural checks on an ST-graph: memory alignment and edge shapes."""
    out = []
    if len(set(g.states)) != len(g.states):
        out.append("duplicate states")
    for k, s in enumerate(g.states):
        if len(s.memory) != len(s.conclist):
            out.append(f"state {k}: {len(s.memory)} memory entries for {len(s.conclist)} events")
    n = len(g.states)
    for src, kind, pos, dst in g.edges:
        if not (0 <= src < n and 0 <= dst < n):
            out.append(f"edge {src}->{dst} points to a missing state")
            continue
        small, big = (g.states[src], g.states[dst]) if kind == "start" else (g.states[dst], g.states[src])
        if kind not in ("start", "terminate") or not 0 <= pos < big.dim:
            out.append(f"edge {src}->{dst}: bad kind or position")
            continue
        drop = lambda xs: xs[:pos] + xs[pos + 1 :]
        if drop(big.conclist) != small.conclist or drop(big.memory) != small.memory:
            out.append(f"edge {src}->{dst}: states differ by more than event {pos}")
    return out
