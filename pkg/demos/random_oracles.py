"""
Cross-checking against reachability graphs
==========================================

Two independent constructions must agree on any bounded net:

* the 1-truncation of the automaton is the ordinary reachability graph;
* its flattening is the graph of concurrent steps.

This script generates random nets, some with inhibitor arcs, and runs
both checks together with the face-identity validator under every
applicable semantics.
"""

import sys
import time
from collections import Counter

from hdanets import Budget, check_flatten, check_truncation, validate
from hdanets.randnet import random_corpus
from hdanets.semantics import build_bounded

count = int(sys.argv[1]) if len(sys.argv) > 1 else 100
budget = Budget(max_states=20000, max_dim=5)
tally = Counter()
t0 = time.perf_counter()

for k, (net, start) in enumerate(random_corpus(seed=7, count=count)):
    modes = ("aposteriori", "apriori") if net.kind == "pni" else ("hda", "aposteriori", "apriori")
    for mode in modes:
        built = build_bounded(net, start, mode, budget)
        for oracle in (check_truncation, check_flatten):
            res = oracle(net, start, mode, budget, built)
            tally[res.status] += 1
            if not res.ok:
                print(f"net #{k} {mode} {oracle.__name__}: {res.details[0]}")
        tally["validator violations"] += len(validate(built[0]))

print(f"{count} nets in {time.perf_counter() - t0:.1f}s")
for key, n in sorted(tally.items()):
    print(f"  {key:22s} {n}")
