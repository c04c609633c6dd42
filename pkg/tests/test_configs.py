import networkx as nx
import pytest

from grasscat import oracle as O
from grasscat.configs import (
    Verdict,
    classify_profile,
    generic_indecomposable,
    poset_from_graph,
    poset_from_profile,
    simplify,
    tits_form,
)
from grasscat.errors import DomainError
from grasscat.profiles import Profile

# shapes of the two figure catalogs: multiplicities and inclusion edges
CATALOG_ONE_BOX = {
    "A": ({1: 1, 2: 3}, [(1, 2)]),
    "B": ({1: 1, 2: 2, 3: 3}, [(1, 2), (2, 3)]),
    "C": ({1: 1, 2: 2, 3: 3}, [(1, 3), (2, 3)]),
    "D": ({1: 1, 2: 2, 3: 2, 4: 3}, [(1, 2), (1, 3), (2, 4), (3, 4)]),
    "E": ({1: 1, 2: 2, 3: 2, 4: 3}, [(1, 2), (2, 4), (3, 4)]),
    "F": ({1: 1, 2: 2, 3: 2, 4: 3}, [(1, 4), (2, 4), (3, 4)]),
    "G": ({1: 1, 2: 2, 3: 2, 4: 2, 5: 3}, [(1, 5), (2, 5), (3, 5), (4, 5)]),
    "H": ({1: 1, 2: 2, 3: 2, 4: 2, 5: 3}, [(1, 2), (2, 5), (3, 5), (4, 5)]),
    "I": ({1: 1, 2: 2, 3: 2, 4: 2, 5: 3}, [(1, 2), (1, 3), (2, 5), (3, 5), (4, 5)]),
    "J": ({1: 1, 2: 2, 3: 2, 4: 2, 5: 3}, [(1, 2), (1, 3), (1, 4), (2, 5), (3, 5), (4, 5)]),
}
CATALOG_TWO_BOXES = {
    "A": ({1: 1, 2: 1, 3: 3}, [(1, 3), (2, 3)]),
    "B": ({1: 1, 2: 1, 3: 2, 4: 3}, [(1, 3), (2, 3), (3, 4)]),
    "C": ({1: 1, 2: 2, 3: 1, 4: 3}, [(1, 2), (2, 4), (3, 4)]),
    "D": ({1: 1, 2: 1, 3: 2, 4: 3}, [(1, 4), (2, 4), (3, 4)]),
    "E": ({1: 1, 2: 2, 3: 1, 4: 2, 5: 3}, [(1, 2), (2, 5), (3, 5), (4, 5)]),
    "F": ({1: 1, 2: 2, 3: 2, 4: 1, 5: 3}, [(1, 2), (1, 3), (2, 5), (3, 5), (4, 5)]),
    "G": ({1: 1, 2: 1, 3: 2, 4: 2, 5: 3}, [(1, 3), (2, 4), (3, 5), (4, 5)]),
    "H": ({1: 1, 2: 1, 3: 2, 4: 2, 5: 3}, [(1, 3), (1, 4), (2, 4), (3, 5), (4, 5)]),
    "I": ({1: 1, 2: 1, 3: 2, 4: 2, 5: 3}, [(1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)]),
    "J": ({1: 1, 2: 1, 3: 2, 4: 2, 5: 3}, [(1, 3), (2, 3), (3, 5), (4, 5)]),
    "K": ({1: 1, 2: 1, 3: 2, 4: 2, 5: 3}, [(1, 5), (2, 5), (3, 5), (4, 5)]),
}

# rows I|J|K of the real-root cases (a)-(h) over labels i1=i2<i3<...<i9, relabelled to [8]
REAL_CASES = {
    "a": "147|136|258",
    "b": "148|136|257",
    "c": "157|136|248",
    "d": "158|136|247",
    "e": "136|147|258",
    "f": "126|147|358",
    "g": "135|147|268",
    "h": "125|147|368",
}
IMAGINARY_CASES = {
    "A": "136|258|479",
    "B": "137|258|469",
    "C": "146|258|379",
    "D": "147|258|369",
    "E": "147|369|258",
    "F": "148|369|257",
    "G": "157|369|248",
    "H": "158|369|247",
}


def _catalog_poset(spec):
    mults, edges = spec
    return poset_from_graph({str(v): m for v, m in mults.items()}, [(str(a), str(b)) for a, b in edges])


def test_figure_poset_169_147_358():
    S = poset_from_profile(Profile.parse("169|147|358", 9))
    assert S.multiplicities() == [1, 1, 2, 2, 2, 3]
    G = S.graph
    ones = [v for v in G if S.mult(v) == 1]
    twos = [v for v in G if S.mult(v) == 2]
    assert sorted(G.out_degree(v) for v in ones) == [2, 2]
    assert all(list(G.successors(v)) == [S.bottom] for v in twos)
    # the two 1's share exactly one 2
    shared = set(G.successors(ones[0])) & set(G.successors(ones[1]))
    assert len(shared) == 1


def test_simplify_169_147_358_gives_d4_and_no():
    T = simplify(poset_from_profile(Profile.parse("169|147|358", 9)))
    assert T.multiplicities() == [2, 2, 2, 3]
    assert nx.is_isomorphic(T.graph.to_undirected(), nx.star_graph(3))
    assert tits_form(T) == 3
    assert generic_indecomposable(T) == Verdict.NO
    assert classify_profile(Profile.parse("169|147|358", 9)) == Verdict.NO


def test_three_boxes_poset_is_a_star_into_the_bottom():
    S = poset_from_profile(Profile.parse("147|258", 9))
    assert S.multiplicities() == [1, 1, 1, 2]
    assert all(list(S.graph.successors(v)) == [S.bottom] for v in S.graph if v != S.bottom)
    assert classify_profile(Profile.parse("147|258", 9)) == Verdict.YES


def test_simplify_removes_forced_intersection():
    S = poset_from_graph({"u": 1, "a": 2, "b": 2, "z": 3}, [("u", "a"), ("u", "b"), ("a", "z"), ("b", "z")])
    T = simplify(S)
    assert sorted(T.graph) == ["a", "b", "z"]
    S2 = poset_from_graph({"a": 1, "z": 2}, [("a", "z")])
    assert sorted(simplify(S2).graph) == ["a", "z"]


def test_generic_indecomposable_small():
    assert generic_indecomposable(poset_from_graph({"v": 1}, [])) == Verdict.YES
    A3 = poset_from_graph({"a": 1, "b": 2, "c": 1}, [("a", "b"), ("c", "b")])
    assert generic_indecomposable(A3) == Verdict.NO
    A3root = poset_from_graph({"a": 1, "b": 2, "c": 1, "d": 1}, [("a", "b"), ("c", "b")])
    assert generic_indecomposable(A3root) == Verdict.NO  # disconnected
    wild = poset_from_graph(
        {str(i): 1 for i in range(5)} | {"z": 2}, [(str(i), "z") for i in range(5)]
    )
    assert generic_indecomposable(wild) == Verdict.UNKNOWN


@pytest.mark.parametrize("label", sorted(CATALOG_ONE_BOX))
def test_catalog_one_box(label):
    S = _catalog_poset(CATALOG_ONE_BOX[label])
    expected = Verdict.YES if label == "G" else Verdict.NO
    assert generic_indecomposable(simplify(S)) == expected


@pytest.mark.parametrize("label", sorted(CATALOG_TWO_BOXES))
def test_catalog_two_boxes(label):
    S = _catalog_poset(CATALOG_TWO_BOXES[label])
    expected = Verdict.YES if label == "K" else Verdict.NO
    assert generic_indecomposable(simplify(S)) == expected


def test_real_cases_only_a():
    verdicts = {c: classify_profile(Profile.parse(t, 8)) for c, t in REAL_CASES.items()}
    assert [c for c, v in verdicts.items() if v == Verdict.YES] == ["a"]
    assert all(v == Verdict.NO for c, v in verdicts.items() if c != "a")


def test_imaginary_cases_only_aefg():
    verdicts = {c: classify_profile(Profile.parse(t, 9)) for c, t in IMAGINARY_CASES.items()}
    assert [c for c, v in verdicts.items() if v == Verdict.YES] == ["A", "E", "F", "G"]


@pytest.mark.parametrize(
    "text,n", [(t, 8) for t in REAL_CASES.values()] + [(t, 9) for t in IMAGINARY_CASES.values()]
)
def test_cases_agree_with_matrix_oracle(text, n):
    P = Profile.parse(text, n)
    M = O.build_from_profile(P, seed=0)
    assert O.is_indecomposable(M) == (classify_profile(P) == Verdict.YES)


def test_rank_one_has_no_configuration():
    with pytest.raises(DomainError):
        poset_from_profile(Profile.parse("147", 9))


def test_bottom_must_be_unique():
    with pytest.raises(DomainError):
        poset_from_graph({"a": 2, "b": 2}, [])


def test_dot_and_json():
    S = poset_from_profile(Profile.parse("147|258", 9))
    dot = S.to_dot()
    assert dot.startswith("digraph poset {") and '"L2" [label="2"]' in dot
    assert S.to_json()["bottom"] == "L2"
