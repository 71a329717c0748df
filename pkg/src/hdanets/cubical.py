"""Explicit (partial) precubical sets with initial cells.

Cells are ``(marking, conclist)`` pairs. Every defined face ``δ_{A,B}``
with ``A ∪ B`` nonempty is stored extensionally: ``faces[x]`` maps the
pair of event sets ``(A, B)`` to a cell index. Event sets are frozensets
of positions in the source cell's conclist.

Hand-built complexes (no underlying net) may put any hashable label in
the ``marking`` slot.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable, Sequence
from itertools import product
from typing import NamedTuple

from .budget import Budget, BudgetExceeded
from .conclist import Conclist, EventSet, parikh, remove, surviving
from .net import LabeledGraph

FaceKey = tuple[EventSet, EventSet]
_EMPTY: EventSet = frozenset()


class Cell(NamedTuple):
    marking: Hashable
    conclist: Conclist

    @property
    def dim(self) -> int:
        return len(self.conclist)


class Step(NamedTuple):
    """An upstep (``"up"``, starting events) or downstep (``"down"``, terminating events)."""

    kind: str
    events: EventSet


def up(*events: int) -> Step:
    return Step("up", frozenset(events))


def down(*events: int) -> Step:
    return Step("down", frozenset(events))


def face_key(A: Iterable[int], B: Iterable[int]) -> FaceKey:
    return (frozenset(A), frozenset(B))


def face_pairs(n: int) -> Iterable[FaceKey]:
    """All ``(A, B)`` with ``A ∩ B = ∅`` and ``A ∪ B`` nonempty over ``n`` events."""
    for assign in product((0, 1, 2), repeat=n):
        if any(assign):
            yield (
                frozenset(j for j, a in enumerate(assign) if a == 1),
                frozenset(j for j, a in enumerate(assign) if a == 2),
            )


class Complex:
    """A (partial) HDA: cells, extensional face maps, initial cells.

    ``partial`` marks complexes whose face maps may be undefined.
    ``truncated`` is set by builders that stopped at the dimension cap.
    """

    def __init__(
        self,
        cells: Sequence[Cell],
        faces: Sequence[dict[FaceKey, int]],
        initial: Iterable[int] = (),
        partial: bool = False,
        alphabet: Iterable[str] = (),
        truncated: bool = False,
    ):
        self.cells: list[Cell] = [Cell(*c) for c in cells]
        if len(faces) != len(self.cells):
            raise ValueError("need one face table per cell")
        self.faces: list[dict[FaceKey, int]] = [dict(f) for f in faces]
        self.initial: list[int] = sorted(set(initial))
        self.partial = partial
        self.alphabet: tuple[str, ...] = tuple(alphabet)
        self.truncated = truncated
        self.index: dict[Cell, int] = {}
        for i, c in enumerate(self.cells):
            self.index.setdefault(c, i)

    def __len__(self) -> int:
        return len(self.cells)

    def __repr__(self) -> str:
        kind = "pHDA" if self.partial else "HDA"
        return f"<{kind}: {len(self.cells)} cells, dim {self.dimension}>"

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells), default=0)

    def lookup(self, marking: Hashable, conclist: Iterable[str]) -> int | None:
        return self.index.get(Cell(marking, tuple(conclist)))

    def of_dim(self, n: int) -> list[int]:
        return [i for i, c in enumerate(self.cells) if c.dim == n]

    def of_type(self, conclist: Iterable[str]) -> list[int]:
        """Indices of the cells ``X[U]`` whose event list is ``conclist``."""
        conclist = tuple(conclist)
        return [i for i, c in enumerate(self.cells) if c.conclist == conclist]

    def dim_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.cells:
            out[c.dim] = out.get(c.dim, 0) + 1
        return dict(sorted(out.items()))


def face(X: Complex, cell: int, A: Iterable[int] = (), B: Iterable[int] = ()) -> int | None:
    """``δ_{A,B}(cell)``, or ``None`` when undefined."""
    A, B = frozenset(A), frozenset(B)
    if A & B:
        raise ValueError(f"event sets overlap: {sorted(A & B)}")
    n = X.cells[cell].dim
    for j in A | B:
        if not 0 <= j < n:
            raise IndexError(f"event {j} out of range for a {n}-cell")
    if not A and not B:
        return cell
    return X.faces[cell].get((A, B))


def validate(X: Complex) -> list[str]:
    """Return every violated structural invariant; empty means well-formed.

    Checks face typing, face closure for non-partial complexes, and the
    precubical identity in containment form: whenever ``δ_{A,B}(x) = y``
    and ``δ_{C,D}(y) = z`` are defined, ``δ_{A∪C,B∪D}(x)`` is defined and
    equals ``z``. For total face maps this is the ordinary identity.
    """
    out: list[str] = []
    seen: dict[Cell, int] = {}
    for i, c in enumerate(X.cells):
        if c in seen:
            out.append(f"cells {seen[c]} and {i} are both {c}")
        else:
            seen[c] = i
    for i in X.initial:
        if not 0 <= i < len(X.cells):
            out.append(f"initial cell {i} does not exist")

    ncells = len(X.cells)
    for x, cell in enumerate(X.cells):
        n = cell.dim
        table = X.faces[x]
        for (A, B), y in table.items():
            if A & B or not (A | B) or any(not 0 <= j < n for j in A | B):
                out.append(f"cell {x}: malformed face key A={sorted(A)} B={sorted(B)}")
                continue
            if not 0 <= y < ncells:
                out.append(f"cell {x}: face A={sorted(A)} B={sorted(B)} points to missing cell {y}")
                continue
            if X.cells[y].conclist != remove(cell.conclist, A | B):
                out.append(
                    f"cell {x}: face A={sorted(A)} B={sorted(B)} -> {y} has conclist "
                    f"{list(X.cells[y].conclist)}, expected {list(remove(cell.conclist, A | B))}"
                )
        if not X.partial:
            for key in face_pairs(n):
                if key not in table:
                    out.append(f"cell {x}: face A={sorted(key[0])} B={sorted(key[1])} undefined")
        for (A, B), y in table.items():
            if not 0 <= y < ncells:
                continue
            pos = surviving(n, A | B)
            if len(pos) != X.cells[y].dim:
                continue
            for (C, D), z in X.faces[y].items():
                if any(j >= len(pos) for j in C | D):
                    continue
                AC = A | frozenset(pos[j] for j in C)
                BD = B | frozenset(pos[j] for j in D)
                w = table.get((AC, BD))
                if w != z:
                    out.append(
                        f"cell {x}: δ[C={sorted(C)},D={sorted(D)}]∘δ[A={sorted(A)},B={sorted(B)}]"
                        f" = {z} but δ[A={sorted(AC)},B={sorted(BD)}] = {w}"
                    )
    return out


def subcomplex(X: Complex, keep: Iterable[int]) -> Complex:
    """Restrict ``X`` to ``keep``; faces pointing outside are dropped."""
    keep = sorted(set(keep))
    remap = {old: new for new, old in enumerate(keep)}
    faces = [
        {k: remap[y] for k, y in X.faces[old].items() if y in remap} for old in keep
    ]
    return Complex(
        [X.cells[i] for i in keep],
        faces,
        [remap[i] for i in X.initial if i in remap],
        X.partial,
        X.alphabet,
        X.truncated,
    )


def truncate(X: Complex, k: int) -> Complex:
    """The ``k``-truncation: cells of dimension at most ``k``."""
    if k < 0:
        raise ValueError("truncation level must be nonnegative")
    return subcomplex(X, [i for i, c in enumerate(X.cells) if c.dim <= k])


def flatten(X: Complex) -> LabeledGraph:
    """Graph of 0-cells with one edge per cell whose full lower and upper faces exist."""
    vertices = frozenset(c.marking for c in X.cells if c.dim == 0)
    edges = set()
    for y, c in enumerate(X.cells):
        if not c.dim:
            continue
        full = frozenset(range(c.dim))
        lo = X.faces[y].get((full, _EMPTY))
        hi = X.faces[y].get((_EMPTY, full))
        if lo is not None and hi is not None:
            edges.add((X.cells[lo].marking, parikh(c.conclist), X.cells[hi].marking))
    return LabeledGraph(vertices, frozenset(edges), _initial_marking(X), X.truncated)


def skeleton(X: Complex) -> LabeledGraph:
    """The 1-truncation read as a graph labeled by single transitions."""
    vertices = frozenset(c.marking for c in X.cells if c.dim == 0)
    edges = set()
    one = frozenset({0})
    for y, c in enumerate(X.cells):
        if c.dim != 1:
            continue
        lo = X.faces[y].get((one, _EMPTY))
        hi = X.faces[y].get((_EMPTY, one))
        if lo is not None and hi is not None:
            edges.add((X.cells[lo].marking, c.conclist[0], X.cells[hi].marking))
    return LabeledGraph(vertices, frozenset(edges), _initial_marking(X), X.truncated)


def _initial_marking(X: Complex):
    for i in X.initial:
        if X.cells[i].dim == 0:
            return X.cells[i].marking
    return None


def essential(X: Complex, budget: Budget | None = None, singleton: bool = False) -> Complex:
    """Sub-complex of cells reachable from the initial cells by paths.

    With ``singleton=True`` only steps starting or terminating one event
    are followed (empty steps are identities and never matter).
    """
    budget = budget or Budget()
    ups: list[list[int]] = [[] for _ in X.cells]
    for y, table in enumerate(X.faces):
        for (A, B), x in table.items():
            if not B and (not singleton or len(A) == 1):
                ups[x].append(y)
    seen = set(X.initial)
    queue = deque(sorted(seen))
    while queue:
        x = queue.popleft()
        nxt = list(ups[x])
        for (A, B), y in X.faces[x].items():
            if not A and (not singleton or len(B) == 1):
                nxt.append(y)
        for y in nxt:
            if y not in seen:
                seen.add(y)
                if len(seen) > budget.max_states:
                    raise BudgetExceeded(
                        f"more than {budget.max_states} reachable cells", subcomplex(X, seen)
                    )
                queue.append(y)
    return subcomplex(X, seen)


def is_path(X: Complex, path: Sequence) -> bool:
    """Check an alternating sequence ``[x0, step1, x1, ..., stepn, xn]``.

    Upstep ``(x, up(A), y)``: ``A`` indexes events of ``y`` and ``δ⁰_A(y) = x``.
    Downstep ``(x, down(A), y)``: ``A`` indexes events of ``x`` and ``δ¹_A(x) = y``.
    """
    if not path or len(path) % 2 == 0:
        return False
    cells = path[0::2]
    steps = path[1::2]
    if any(not isinstance(c, int) or not 0 <= c < len(X.cells) for c in cells):
        return False
    for x, step, y in zip(cells, steps, cells[1:]):
        step = Step(*step)
        try:
            if step.kind == "up":
                ok = face(X, y, step.events, ()) == x
            elif step.kind == "down":
                ok = face(X, x, (), step.events) == y
            else:
                return False
        except (IndexError, ValueError):
            return False
        if not ok:
            return False
    return True
