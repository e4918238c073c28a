import json
import random
import sys
from pathlib import Path

import networkx as nx
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from errors import InvalidParam, ParseError, ResourceLimit, VertexOutOfRange  # noqa: E402
from graphcore import (  # noqa: E402
    MAX_JSON_VERTICES,
    FamilyKind,
    FamilySpec,
    Graph,
    bipartition,
    canonical_form,
    components,
    cut_rank,
    family,
    has_short_cycle,
    is_connected,
    is_isomorphic,
    is_star,
    isomorphism,
    leaves,
    local_complement,
    make_family,
    remove_leaves,
)


def small_graphs() -> list[Graph]:
    return [Graph.from_networkx(h) for h in nx.graph_atlas_g()[1:] if h.number_of_nodes() <= 6]


def shuffled(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


# --- construction and codecs ---


def test_graph_validation():
    with pytest.raises(InvalidParam):
        Graph(2, (0b10, 0b00))
    with pytest.raises(InvalidParam):
        Graph(1, (0b1,))
    with pytest.raises(InvalidParam):
        Graph(2, (0,))
    with pytest.raises(VertexOutOfRange):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(InvalidParam):
        Graph.from_edges(3, [(1, 1)])


def test_basic_queries():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    assert g.edges() == [(0, 1), (1, 2), (1, 3)]
    assert g.edge_count == 3
    assert g.degree(1) == 3
    assert g.neighbours(1) == [0, 2, 3]
    assert g.has_edge(3, 1) and not g.has_edge(0, 2)
    assert g.adjacency_matrix().to_lists()[1] == [1, 0, 1, 1]
    with pytest.raises(VertexOutOfRange):
        g.check_vertex(4)


def test_relabel_induced_delete():
    g = family("path", 3)
    assert g.relabel([1, 0, 2]).edges() == [(0, 1), (0, 2)]
    with pytest.raises(InvalidParam):
        g.relabel([0, 0, 1])
    assert g.induced([2, 1]).edges() == [(0, 1)]
    assert g.delete_vertex(1).edge_count == 0
    assert g.delete_vertex(0) == family("path", 2)


def test_json_round_trip():
    g = family("biclique", 2, 3)
    data = json.loads(g.to_json())
    assert data["format"] == "graphstate/1"
    assert data["n"] == 5
    assert Graph.from_json(g.to_json()) == g
    assert Graph.from_json('{"n": 2, "edges": [[1, 0]]}') == family("path", 2)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        '{"edges": []}',
        '{"n": -1, "edges": []}',
        '{"n": 2, "edges": [[0]]}',
        '{"n": 2, "edges": [[0, 1], [1, 0]]}',
        '{"n": 2, "edges": [[0, 2]]}',
        '{"n": 2, "edges": [[1, 1]]}',
        '{"format": "other/2", "n": 1, "edges": []}',
        '{"n": 2, "edges": [[true, false]]}',
        '{"n": true, "edges": []}',
        '{"n": 2, "edges": {"0": 1}}',
    ],
)
def test_json_errors(text):
    with pytest.raises(ParseError):
        Graph.from_json(text)


def test_json_vertex_count_is_bounded():
    with pytest.raises(ResourceLimit) as info:
        Graph.from_json('{"n": 1000000000000, "edges": []}')
    assert info.value.name == "graph_vertices"
    assert info.value.limit == MAX_JSON_VERTICES


def test_dot_output():
    dot = family("biclique", 3, 3).to_dot()
    assert dot.startswith("graph {")
    assert dot.count("--") == 9


def test_networkx_round_trip():
    g = family("cycle", 5)
    nxg = g.to_networkx()
    assert nxg.number_of_edges() == 5
    assert Graph.from_networkx(nxg) == g


# --- families ---


@pytest.mark.parametrize(
    "kind, params, n, edges",
    [
        ("star", (5,), 5, 4),
        ("complete", (5,), 5, 10),
        ("biclique", (3,), 6, 9),
        ("biclique", (2, 4), 6, 8),
        ("binary-star", (6,), 6, 5),
        ("generalized-binary-star", (3, 5), 8, 7),
        ("crazy", (3, 2), 6, 8),
        ("repeater-complete", (4,), 8, 10),
        ("repeater-biclique", (2,), 8, 8),
        ("imperfect-repeater-complete", (5,), 9, 14),
        ("imperfect-repeater-biclique", (3,), 10, 13),
        ("path", (4,), 4, 3),
        ("cycle", (5,), 5, 5),
    ],
)
def test_family_sizes(kind, params, n, edges):
    g = family(kind, *params)
    assert (g.n, g.edge_count) == (n, edges)


def test_family_labelings():
    assert family("star", 4).neighbours(0) == [1, 2, 3]
    binary = family("binary-star", 5)
    assert binary.neighbours(0) == [1, 2, 3]
    assert binary.neighbours(1) == [0, 4]
    biclique = family("biclique", 2, 3)
    assert biclique.neighbours(0) == [2, 3, 4]
    assert biclique.neighbours(4) == [0, 1]
    repeater = family("repeater-complete", 3)
    assert [repeater.neighbours(v) for v in range(3, 6)] == [[0], [1], [2]]
    imperfect = family("imperfect-repeater-complete", 3)
    assert imperfect.degree(0) == 2 and imperfect.n == 5


def test_family_spec_accepts_enum_and_string():
    assert FamilySpec.of("crazy", 2, 3) == FamilySpec.of(FamilyKind.CRAZY_GRAPH, 2, 3)
    assert make_family(FamilySpec.of(FamilyKind.STAR, 3)) == family("star", 3)


@pytest.mark.parametrize(
    "kind, params",
    [("star", (1,)), ("cycle", (2,)), ("crazy", (1, 3)), ("biclique", (1, 2, 3)), ("hypercube", (3,))],
)
def test_family_errors(kind, params):
    with pytest.raises(InvalidParam):
        family(kind, *params)


# --- local complementation and predicates ---


def test_local_complement_star_to_complete():
    assert local_complement(family("star", 5), 0) == family("complete", 5)
    assert local_complement(family("complete", 5), 0) == family("star", 5)


def test_local_complement_is_an_involution():
    for g in small_graphs():
        for v in range(g.n):
            assert local_complement(local_complement(g, v), v) == g


def test_local_complement_rejects_bad_vertex():
    with pytest.raises(VertexOutOfRange):
        local_complement(family("path", 3), 3)


@pytest.mark.parametrize(
    "g, expected",
    [
        (family("cycle", 5), False),
        (family("cycle", 4), True),
        (family("complete", 3), True),
        (family("biclique", 2, 2), True),
        (family("binary-star", 8), False),
        (family("path", 6), False),
    ],
)
def test_has_short_cycle(g, expected):
    assert has_short_cycle(g) is expected


def test_components_and_connectivity():
    g = Graph.from_edges(5, [(0, 1), (3, 4)])
    assert components(g) == [[0, 1], [2], [3, 4]]
    assert not is_connected(g)
    assert is_connected(Graph.empty(1))
    assert is_connected(family("crazy", 3, 2))


def test_bipartition():
    left, right = bipartition(family("biclique", 2, 3))
    assert left == frozenset({0, 1}) and right == frozenset({2, 3, 4})
    assert bipartition(family("cycle", 5)) is None
    assert bipartition(family("cycle", 6)) is not None


def test_leaves_and_star():
    g = family("binary-star", 6)
    assert leaves(g) == {2, 3, 4, 5}
    assert remove_leaves(g) == family("path", 2)
    assert is_star(family("star", 4))
    assert is_star(family("path", 2))
    assert not is_star(family("path", 4))
    assert not is_star(Graph.empty(1))


def test_cut_rank():
    assert cut_rank(family("biclique", 3, 3), [0, 1, 2]) == 1
    assert cut_rank(family("path", 4), [0, 2]) == 2
    assert cut_rank(family("complete", 4), []) == 0


# --- canonical form and isomorphism ---


def test_canonical_form_separates_isomorphism_classes():
    graphs = small_graphs()
    keys = {canonical_form(g) for g in graphs}
    assert len(keys) == len(graphs)


def test_canonical_form_is_label_invariant():
    rng = random.Random(3)
    for g in small_graphs()[::3]:
        assert canonical_form(shuffled(g, rng)) == canonical_form(g)
    for kind, params in [("crazy", (3, 3)), ("imperfect-repeater-biclique", (3,)), ("cycle", (9,))]:
        g = family(kind, *params)
        assert canonical_form(shuffled(g, rng)) == canonical_form(g)


def test_canonical_form_limit():
    with pytest.raises(ResourceLimit) as info:
        canonical_form(family("path", 13))
    assert info.value.name == "canonical_limit"
    assert canonical_form(Graph.empty(0)) == (0, ())


def test_isomorphism_permutation():
    rng = random.Random(5)
    g = family("imperfect-repeater-complete", 4)
    h = shuffled(g, rng)
    perm = isomorphism(g, h)
    assert perm is not None and g.relabel(perm) == h
    assert is_isomorphic(g, h)
    assert isomorphism(family("path", 4), family("star", 4)) is None
    assert not is_isomorphic(family("cycle", 4), family("path", 4))
