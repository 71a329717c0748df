import json

import pytest
from conftest import M, corpus

from hdanets import (
    Budget,
    Complex,
    build_hda,
    build_phda,
    corpus_path,
    down,
    essential,
    face,
    flatten,
    is_path,
    truncate,
    up,
    validate,
)
from hdanets.cubical import Cell, skeleton, subcomplex
from hdanets.export import complex_from_json, complex_to_json
from hdanets.multiset import Multiset


@pytest.fixture
def fig2():
    return complex_from_json(json.loads(corpus_path("fig2.complex.json").read_text()))


def names(X, keep=None):
    return {c.marking for c in X.cells}


def cell_named(X, name):
    return next(k for k, c in enumerate(X.cells) if c.marking == name)


def test_fig2_shape(fig2):
    assert len(fig2) == 21
    assert fig2.dim_counts() == {0: 8, 1: 10, 2: 3}
    assert validate(fig2) == []
    assert [fig2.cells[k].marking for k in fig2.of_type(("a", "d"))] == ["q2", "q3"]
    q1 = cell_named(fig2, "q1")
    assert fig2.cells[face(fig2, q1, (), (0, 1))].marking == "v4"


def test_fig2_path(fig2):
    n = {c.marking: k for k, c in enumerate(fig2.cells)}
    a, c, d = 0, 1, 1  # event positions: a before c and d
    path = [
        n["t3"], up(a), n["q1"], down(c), n["t2"], up(d), n["q2"],
        down(a), n["t8"], up(0), n["q3"], down(0, 1), n["v8"],
    ]
    assert is_path(fig2, path)
    assert is_path(fig2, [n["v5"]])
    assert not is_path(fig2, [n["t3"], down(0), n["v1"]])
    assert not is_path(fig2, [n["t3"], up(0)])


def test_fig2_essential_and_truncation(fig2):
    E = essential(fig2)
    assert names(fig2) - names(E) == {"v1", "t1", "v3"}
    assert validate(E) != []  # not face-closed: t3 lost its lower face
    assert names(truncate(fig2, 0)) == {f"v{k}" for k in range(1, 9)}
    assert len(truncate(fig2, 2)) == 21
    assert essential(E).cells == E.cells


def test_single_cell_essential():
    X = Complex([Cell("x", ())], [{}], [0])
    assert len(essential(X)) == 1


def test_essential_budget():
    fig3, i = corpus("fig3.pnml")
    X = build_hda(fig3, i)
    from hdanets import BudgetExceeded

    with pytest.raises(BudgetExceeded):
        essential(X, Budget(max_states=3))


def test_face_examples(fig3):
    X = build_hda(*fig3)
    sq = X.lookup(M("0"), ("a", "b"))
    assert X.cells[face(X, sq, (), {1})] == Cell(M("p4"), ("a",))
    assert face(X, sq) == sq
    with pytest.raises(ValueError):
        face(X, sq, {0}, {0})
    with pytest.raises(IndexError):
        face(X, sq, {2})


def test_fig9_missing_face_blocks_path():
    net, i = corpus("fig9.pnml")
    X = build_phda(net, i, "apriori")
    sq = X.lookup(M("0"), ("a", "b"))
    assert face(X, sq, (), {1}) is None
    top = X.lookup(M("p4"), ("a",))
    assert not is_path(X, [sq, down(1), top if top is not None else sq])


def test_truncate_fig4(fig3):
    X = build_hda(*fig3)
    T = truncate(X, 1)
    assert len(T) == 8
    assert not T.partial and validate(T) == []
    assert len(truncate(X, 5)) == len(X)


def test_flatten_fig4(fig3):
    X = build_hda(*fig3)
    F = flatten(X)
    assert len(F.vertices) == 4 and len(F.edges) == 5
    assert (M("p1+p3"), Multiset({"a": 1, "b": 1}), M("p2+p4")) in F.edges
    point = Complex([Cell(M("p"), ())], [{}], [0])
    assert flatten(point).edges == frozenset()


def test_flatten_uses_direct_full_faces():
    net, i = corpus("fig10.pnml")
    X = build_phda(net, i, "apriori")
    assert (M("p1+p3"), Multiset({"a": 1, "b": 1}), M("p2+p4")) in flatten(X).edges


def seeded(X: Complex, mutate) -> Complex:
    doc = complex_to_json(X)
    mutate(doc)
    return complex_from_json(doc)


def _square(doc):
    return next(c for c in doc["cells"] if len(c["conclist"]) == 2)


def _faces_of(cell, A, B):
    return next(f for f in cell["faces"] if f["A"] == A and f["B"] == B)


def test_validate_catches_seeded_faults(fig3):
    X = build_hda(*fig3)
    assert validate(X) == []
    ids = {(str(Multiset(c["marking"])), tuple(c["conclist"])): c["id"] for c in complex_to_json(X)["cells"]}

    def bad_corner(doc):
        # δ⁰_ab now disagrees with δ⁰_a∘δ⁰_b
        _faces_of(_square(doc), [0, 1], [])["target"] = ids[("p1+p4", ())]

    def drop_face(doc):
        sq = _square(doc)
        sq["faces"].remove(_faces_of(sq, [], [1]))

    def wrong_type(doc):
        _faces_of(_square(doc), [0], [])["target"] = ids[("p3", ("a",))]

    def duplicate(doc):
        doc["cells"][1]["marking"] = doc["cells"][0]["marking"]

    def overlap(doc):
        _square(doc)["faces"].append({"A": [0], "B": [0], "target": 0})

    for mutate in (bad_corner, drop_face, wrong_type, duplicate, overlap):
        problems = validate(seeded(X, mutate))
        assert problems, mutate.__name__
    problems = validate(seeded(X, bad_corner))
    assert any("cell 8" in p and "A=[0, 1]" in p for p in problems)


def test_partial_flag_relaxes_totality(fig3):
    X = build_hda(*fig3)

    def drop(doc):
        sq = _square(doc)
        sq["faces"] = [f for f in sq["faces"] if not (f["A"] == [] and f["B"] == [1])]

    total = seeded(X, drop)
    assert validate(total)
    doc = complex_to_json(X)
    drop(doc)
    doc["partial"] = True
    assert validate(complex_from_json(doc)) == []


def test_skeleton_is_labeled_by_transitions(fig3):
    X = build_hda(*fig3)
    S = skeleton(X)
    assert {t for _, t, _ in S.edges} == {"a", "b"}


def test_subcomplex_drops_dangling_faces(fig3):
    X = build_hda(*fig3)
    keep = [k for k, c in enumerate(X.cells) if c.marking != M("p1+p3")]
    Y = subcomplex(X, keep)
    assert Y.initial == []
    assert all(0 <= y < len(Y) for table in Y.faces for y in table.values())
