"""
Inhibitor arcs and partial automata
===================================

An inhibitor arc blocks a transition while a place holds tokens. Once
events can overlap in time, "the place is empty" has two readings:

* a-posteriori: the place must be empty when the whole step is checked;
  concurrent events may not refill it in between.
* a-priori: only the state before the step counts.

Under the a-priori reading some ways of finishing a concurrent step are
not allowed on their own, so the automaton loses faces and becomes partial.
"""

from hdanets import Multiset, build_phda, corpus_path, essential, face, load_net, validate
from hdanets.cubical import face_pairs


def show_square(X, label):
    sq = X.lookup(Multiset(), ("a", "b"))
    if sq is None:
        print(f"{label}: no (a, b) square")
        return None
    missing = [(sorted(A), sorted(B)) for A, B in face_pairs(2) if face(X, sq, A, B) is None]
    print(f"{label}: square {X.cells[sq]}, missing faces (A, B): {missing}")
    return sq


for name in ("fig9.pnml", "fig10.pnml"):
    net, start, _ = load_net(str(corpus_path(name)))
    print(f"--- {name}: start {start}, inhibitors {sorted(net.inhibitors)}")
    for mode in ("aposteriori", "apriori"):
        X = build_phda(net, start, mode)
        print(f"{mode:12s} {X}  counts {X.dim_counts()}  violations {len(validate(X))}")
        show_square(X, f"  {mode}")

# %%
# In the second net neither event may terminate alone under the a-priori
# reading, yet both may terminate together. The final state is only
# reachable through that joint step, and it is still part of the
# essential (reachable) complex.
net, start, _ = load_net(str(corpus_path("fig10.pnml")))
X = build_phda(net, start, "apriori")
sq = show_square(X, "a-priori")
end = face(X, sq, B={0, 1})
print("terminate both ->", X.cells[end])
E = essential(X)
print("essential part keeps it:", E.lookup(X.cells[end].marking, ()) is not None)
print(f"essential part: {len(E)} of {len(X)} cells")
