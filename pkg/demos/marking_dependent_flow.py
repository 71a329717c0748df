"""
Marking-dependent flow and ST-graphs
====================================

In a G-net, arc weights are polynomials in the current marking, so how
much a transition consumes and produces is fixed only when it starts.
Cubes no longer line up: running a and b in different orders can end in
different markings. ST-graphs keep every start (t+) and termination (t-)
as its own edge. Each running event remembers what it took and still
owes.
"""

from hdanets import build_st, corpus_path, load_net, st_truncate1
from hdanets.export import st_to_dot

net, start, _ = load_net(str(corpus_path("fig11.gnet.json")))
print("start marking:", start)
for (s, t), w in sorted(net.pre.items()):
    print(f"  {t} consumes {w} from {s}")
for (t, s), w in sorted(net.post.items()):
    print(f"  {t} produces {w} on {s}")

S = build_st(net, start)
print(f"\n{len(S)} ST-states")
for k, st in enumerate(S.states):
    running = ", ".join(f"{t}[{c}/{p}]" if (c or p) else t for t, (c, p) in zip(st.conclist, st.memory))
    print(f"  {k:2d}  {str(st.marking):8s} {running}")

# %%
# Same events, three interleavings. The memory explains the split: an
# event started later sees a different marking and fixes different flow.
for word in ("b+ b- a+ a-", "a+ a- b+ b-", "a+ b+ b- a-"):
    end = S.run([(m[0], m[1]) for m in word.split()])
    print(f"{word:12s} -> {S.states[end].marking}")

# The 1-truncation keeps only idle states and whole-transition edges.
T = st_truncate1(S)
print(f"\n1-truncation: {len(T.vertices)} markings, {len(T.edges)} edges")

# Graphviz source, ready for `dot -Tsvg`.
print(st_to_dot(S).splitlines()[3])
