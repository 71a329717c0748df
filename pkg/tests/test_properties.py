"""Invariants over seeded random nets (up to 6 places, 5 transitions)."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from hdanets import (
    Budget,
    Multiset,
    build_hda,
    build_phda,
    build_st,
    check_flatten,
    check_truncation,
    cs_reachability_graph,
    embed_to_gnet,
    enabled,
    essential,
    fire,
    fire_step,
    reachability_graph,
    st_truncate1,
    step_enabled,
    validate,
)
from hdanets.net import enabled_steps
from hdanets.randnet import random_net

BUDGET = Budget(max_states=3000, max_dim=4)
seeds = st.integers(0, 2**32 - 1)
SETTINGS = settings(max_examples=40, deadline=None)


def plain(seed):
    return random_net(random.Random(seed))


def pni(seed):
    return random_net(random.Random(seed), inhibitor_prob=0.2)


def markings(net, i, limit=200):
    G = reachability_graph(net, i, Budget(max_states=10**6))
    return sorted(G.vertices, key=Multiset.sort_key)[:limit]


@SETTINGS
@given(seeds)
def test_single_steps_are_firings(seed):
    net, i = pni(seed)
    for m in markings(net, i, 30):
        for t in net.transitions:
            if enabled(net, m, t):
                assert step_enabled(net, m, Multiset({t: 1}), "aposteriori")
                assert fire(net, m, t) == fire_step(net, m, Multiset({t: 1}))


@SETTINGS
@given(seeds, st.sampled_from(["plain", "pni"]))
def test_substep_closure(seed, kind):
    net, i = plain(seed) if kind == "plain" else pni(seed)
    mode = "cs" if kind == "plain" else "aposteriori"
    G = cs_reachability_graph(net, i, mode, BUDGET)
    edges = G.edges
    for m, U, m2 in edges:
        for V in enabled_steps(net, m, mode, U.size()):
            if V <= U and V != U:
                mid = fire_step(net, m, V)
                assert (m, V, mid) in edges
                assert (mid, U - V, m2) in edges


@SETTINGS
@given(seeds)
def test_step_rules_weaken_monotonically(seed):
    net, i = pni(seed)
    for m in markings(net, i, 20):
        for U in enabled_steps(net, m, "aposteriori", 3):
            assert step_enabled(net, m, U, "apriori")
        bare = net.without_inhibitors()
        for U in enabled_steps(net, m, "apriori", 3):
            assert step_enabled(bare, m, U, "cs")
            assert step_enabled(bare, m, U, "aposteriori")


@SETTINGS
@given(seeds)
def test_constant_gnet_has_the_plain_reachability_graph(seed):
    net, i = plain(seed)
    g = embed_to_gnet(net)
    big = Budget(max_states=10**6)
    assert reachability_graph(g, i, big) == reachability_graph(net, i, big)


@SETTINGS
@given(seeds)
def test_plain_hda_oracles(seed):
    net, i = plain(seed)
    X = build_hda(net, i, BUDGET)
    assert validate(X) == []
    assert check_truncation(net, i, "hda", BUDGET)
    assert check_flatten(net, i, "hda", BUDGET)
    E = essential(X)
    assert len(E) == len(X)
    assert len(essential(X, singleton=True)) == len(X)


@SETTINGS
@given(seeds, st.sampled_from(["aposteriori", "apriori"]))
def test_inhibitor_complex_oracles(seed, mode):
    net, i = pni(seed)
    X = build_phda(net, i, mode, BUDGET)
    assert validate(X) == []
    assert X.partial == (mode == "apriori")
    assert check_truncation(net, i, mode, BUDGET)
    assert check_flatten(net, i, mode, BUDGET)
    E = essential(X)
    assert len(E) == len(X)
    assert essential(E).cells == E.cells
    if mode == "aposteriori":
        assert len(essential(X, singleton=True)) == len(X)
    else:
        assert len(essential(X, singleton=True)) <= len(X)


@SETTINGS
@given(seeds)
def test_cell_sets_nest_across_modes(seed):
    net, i = pni(seed)
    post = set(build_phda(net, i, "aposteriori", BUDGET).cells)
    prio = set(build_phda(net, i, "apriori", BUDGET).cells)
    bare = set(build_hda(net.without_inhibitors(), i, BUDGET).cells)
    assert post <= prio <= bare


@SETTINGS
@given(seeds)
def test_st_of_constant_nets(seed):
    net, i = plain(seed)
    S = build_st(net, i, Budget(max_states=3000, max_dim=3))
    assert st_truncate1(S) == reachability_graph(net, i, Budget(max_states=10**6))
    effects = {}
    for s in S.states:
        for t, e in zip(s.conclist, s.memory):
            effects.setdefault(t, set()).add(e)
    assert all(v == {(Multiset(), Multiset())} for v in effects.values())
