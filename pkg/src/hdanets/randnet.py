"""Seeded random nets for property tests and the oracle sweep.

Every transition consumes at least one token and produces no more tokens
than it consumes, so reachable markings never exceed the initial token
count and every generated net is bounded without preset-free transitions.
"""

from __future__ import annotations

import random

from .multiset import Marking, Multiset
from .net import Net


def random_net(
    rng: random.Random,
    max_places: int = 6,
    max_transitions: int = 5,
    max_weight: int = 3,
    max_tokens: int = 4,
    inhibitor_prob: float = 0.0,
) -> tuple[Net, Marking]:
    """A random net and initial marking; ``inhibitor_prob > 0`` adds inhibitor arcs."""
    places = [f"p{k}" for k in range(rng.randint(1, max_places))]
    transitions = [f"t{k}" for k in range(rng.randint(1, max_transitions))]
    pre, post, inhibitors = {}, {}, set()
    for t in transitions:
        ins = rng.sample(places, rng.randint(1, min(2, len(places))))
        budget = 0
        for s in ins:
            w = rng.randint(1, max_weight)
            pre[(s, t)] = w
            budget += w
        for s in rng.sample(places, rng.randint(0, min(2, len(places)))):
            if budget == 0:
                break
            w = rng.randint(1, min(max_weight, budget))
            post[(t, s)] = w
            budget -= w
        for s in places:
            if rng.random() < inhibitor_prob:
                inhibitors.add((s, t))
    initial = Multiset({s: rng.randint(0, max_tokens) for s in places})
    return Net(places, transitions, pre, post, inhibitors), initial


def random_corpus(seed: int, count: int, inhibitor_share: float = 0.5) -> list[tuple[Net, Marking]]:
    """``count`` nets; roughly ``inhibitor_share`` of them carry inhibitor arcs."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        prob = 0.15 if rng.random() < inhibitor_share else 0.0
        out.append(random_net(rng, inhibitor_prob=prob))
    return out
