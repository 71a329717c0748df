import pytest

from hdanets import Multiset, corpus_path, load_net


def M(text: str) -> Multiset:
    return Multiset.parse(text)


def corpus(name: str):
    """``(net, initial)`` for a bundled example."""
    net, initial, _ = load_net(str(corpus_path(name)))
    return net, initial


@pytest.fixture
def fig3():
    return corpus("fig3.pnml")
