import random
import sys
from itertools import combinations
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from claim_checks import random_clifford_word, random_graph  # noqa: E402
from errors import (  # noqa: E402
    DisconnectedGraph,
    InvalidPartition,
    MalformedCheckMatrix,
    ParseError,
    ResourceLimit,
    VertexOutOfRange,
)
from graphcore import Graph, canonical_form, cut_rank, family, is_connected, leaves  # noqa: E402
from lcequiv import lc_orbit  # noqa: E402
from stabilizer import (  # noqa: E402
    CheckMatrix,
    Gate,
    PauliElement,
    apply_clifford_word,
    apply_single_qubit_clifford,
    check_msc,
    conjugate_pauli,
    distance,
    enumerate_stabilizer,
    format_check_matrix,
    graph_check_matrix,
    graph_state_vector,
    minimal_elements,
    minimal_subgroup,
    minus_sign_count,
    parse_check_matrix,
    same_stabilizer,
    schmidt_rank,
    stabilizer_contains,
    state_vector,
    support_subgroup,
)

P = PauliElement.parse

SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

GATE_MATRICES = {
    Gate.H: np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    Gate.S: np.diag([1, 1j]),
    Gate.SDG: np.diag([1, -1j]),
    Gate.X: SINGLE_QUBIT["X"],
    Gate.Y: SINGLE_QUBIT["Y"],
    Gate.Z: SINGLE_QUBIT["Z"],
    Gate.SQRT_X: (np.eye(2) - 1j * SINGLE_QUBIT["X"]) / np.sqrt(2),
    Gate.SQRT_X_DG: (np.eye(2) + 1j * SINGLE_QUBIT["X"]) / np.sqrt(2),
}


def apply_pauli(p: PauliElement, psi: np.ndarray) -> np.ndarray:
    out = np.zeros_like(psi)
    ys = bin(p.xbits & p.zbits).count("1")
    for b, amp in enumerate(psi):
        sign = (-1) ** bin(p.zbits & b).count("1")
        out[b ^ p.xbits] += 1j ** (p.phase + ys) * sign * amp
    return out


def connected_graphs(sizes) -> list[Graph]:
    graphs = [Graph.from_networkx(h) for h in nx.graph_atlas_g()[1:] if h.number_of_nodes() in sizes]
    return [g for g in graphs if is_connected(g)]


# --- Pauli operators ---


def test_pauli_parse_and_format():
    p = P("-iXYZI")
    assert (p.n, p.phase) == (4, 3)
    assert str(p) == "-iXYZI"
    assert str(P("ZX")) == "+ZX"
    assert p.support == 0b0111 and p.weight == 3
    assert P("IZ").packed == 0b1000
    assert P("III").is_identity()
    with pytest.raises(ParseError):
        P("XQ")
    with pytest.raises(VertexOutOfRange):
        PauliElement(2, 0b100, 0)


def test_pauli_products():
    assert str(P("X") * P("Z")) == "-iY"
    assert str(P("Z") * P("X")) == "+iY"
    assert str(P("XZ") * P("ZX")) == "+YY"
    assert (P("Y") * P("Y")).is_identity()
    assert P("XX").commutes(P("ZZ"))
    assert not P("XI").commutes(P("ZI"))
    assert P("XZ").negated() == P("-XZ")


def test_pauli_products_match_matrices():
    letters = "IXYZ"
    for a in letters:
        for b in letters:
            product = P(a) * P(b)
            expected = SINGLE_QUBIT[a] @ SINGLE_QUBIT[b]
            got = 1j ** product.phase * SINGLE_QUBIT[product.letter(0)]
            assert np.allclose(got, expected), (a, b)


# --- check matrices ---


def test_graph_check_matrix_rows():
    c = graph_check_matrix(family("star", 3))
    assert [str(p) for p in c.rows] == ["+XZZ", "+ZXI", "+ZIX"]
    assert c.is_state
    assert c.x_block().to_lists() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert c.z_block() == family("star", 3).adjacency_matrix()


@pytest.mark.parametrize(
    "lines",
    [["XI", "ZI"], ["XX", "XX"], ["+iXX"], ["II"], ["XI", "IX", "XX"], ["XII", "IX"]],
)
def test_malformed_check_matrices(lines):
    with pytest.raises(MalformedCheckMatrix):
        CheckMatrix.from_strings(lines)


def test_check_matrix_text_round_trip():
    text = "# GHZ on three qubits\n+XXX\n\n+ZZI\n-IZZ\n"
    c = parse_check_matrix(text)
    assert c.n == 3 and len(c.rows) == 3
    assert format_check_matrix(c) == "+XXX\n+ZZI\n-IZZ\n"
    assert parse_check_matrix(format_check_matrix(c)) == c
    with pytest.raises(ParseError):
        parse_check_matrix("# only a comment\n")
    with pytest.raises(ParseError):
        parse_check_matrix("XX\nZZZ\n")


def test_membership_tracks_signs():
    c = graph_check_matrix(family("star", 2))
    assert stabilizer_contains(c, P("+XZ"))
    assert stabilizer_contains(c, P("+YY"))
    assert not stabilizer_contains(c, P("-YY"))
    assert not stabilizer_contains(c, P("+XX"))
    assert not stabilizer_contains(c, P("+XZI"))
    assert same_stabilizer(c, CheckMatrix.from_strings(["YY", "ZX"]))
    assert not same_stabilizer(c, CheckMatrix.from_strings(["-YY", "ZX"]))


# --- enumeration ---


def test_enumerate_bell_pair():
    group = enumerate_stabilizer(graph_check_matrix(family("star", 2)))
    assert group.order == 4 and group.log_order == 2
    assert {str(p) for p in group} == {"+II", "+XZ", "+ZX", "+YY"}
    assert P("+YY") in group


def test_group_elements_have_real_signs():
    rng = random.Random(1)
    for _ in range(20):
        n = rng.randint(2, 5)
        c = apply_clifford_word(graph_check_matrix(random_graph(rng, n)), random_clifford_word(rng, n, 10))
        assert all(p.phase in (0, 2) for p in enumerate_stabilizer(c))


def test_enumeration_limit():
    with pytest.raises(ResourceLimit) as info:
        enumerate_stabilizer(graph_check_matrix(family("path", 5)), limit=4)
    assert info.value.name == "enumeration_limit"


@pytest.mark.parametrize(
    "g, expected",
    [
        (family("star", 5), 2),
        (family("complete", 5), 2),
        (family("cycle", 5), 3),
        (Graph.empty(1), 1),
        (family("path", 2), 2),
    ],
)
def test_distance(g, expected):
    assert distance(graph_check_matrix(g)) == expected


def test_distance_is_invariant_under_local_cliffords():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(2, 5)
        c = graph_check_matrix(random_graph(rng, n))
        conjugated = apply_clifford_word(c, random_clifford_word(rng, n, 3 * n))
        assert distance(conjugated) == distance(c)


# --- minimal support condition ---


def test_cycle_five_minimal_elements():
    c = graph_check_matrix(family("cycle", 5))
    minimal = minimal_elements(c)
    assert len(minimal) == 10
    assert {p.weight for p in minimal} == {3}
    assert P("+ZXZII") in minimal
    assert check_msc(c)


def test_bell_pair_satisfies_msc():
    assert check_msc(graph_check_matrix(family("complete", 2)))


def test_leafed_graphs_fail_msc():
    for g in connected_graphs({3, 4, 5, 6}):
        if any(g.degree(v) == 1 for v in range(g.n)):
            c = graph_check_matrix(g)
            assert not check_msc(c), g.edges()
            assert distance(c) == 2


def test_leafed_graph_orbits_never_satisfy_msc():
    # a leaf forces distance 2 and the MSC is LC-invariant, so whole orbits fail
    done: set[object] = set()
    members = 0
    for g in connected_graphs({3, 4, 5, 6, 7}):
        if not leaves(g) or canonical_form(g) in done:
            continue
        orbit = lc_orbit(g, up_to_perm=True)
        for h in orbit.members:
            assert not check_msc(graph_check_matrix(h)), (g.edges(), h.edges())
            members += 1
        done.update(orbit.witnesses)
    assert members > 100


def test_minimal_subgroup_contains_minimal_elements():
    c = graph_check_matrix(family("binary-star", 6))
    subgroup = minimal_subgroup(c)
    assert all(p in subgroup for p in minimal_elements(c))
    assert len(subgroup) & (len(subgroup) - 1) == 0


def test_msc_needs_a_connected_state():
    with pytest.raises(DisconnectedGraph):
        check_msc(graph_check_matrix(Graph.from_edges(4, [(0, 1), (2, 3)])))
    # a product of Bell pairs hidden behind local Cliffords
    c = apply_single_qubit_clifford(graph_check_matrix(Graph.from_edges(4, [(0, 1), (2, 3)])), 2, Gate.H)
    with pytest.raises(DisconnectedGraph):
        check_msc(c)


# --- cuts ---


def test_support_subgroup_of_biclique():
    sub = support_subgroup(graph_check_matrix(family("biclique", 2, 2)), [0, 1])
    assert {str(p) for p in sub} == {"+IIII", "+XXII"}
    assert schmidt_rank(family("biclique", 2, 2), [0, 1]) == 1


def test_schmidt_rank_equals_cut_rank():
    for g in connected_graphs({4, 5}):
        for size in range(1, g.n):
            for part in combinations(range(g.n), size):
                assert schmidt_rank(g, part) == cut_rank(g, part), (g.edges(), part)


def test_schmidt_rank_is_invariant_under_local_cliffords():
    rng = random.Random(4)
    g = family("crazy", 3, 2)
    c = apply_clifford_word(graph_check_matrix(g), random_clifford_word(rng, g.n, 20))
    assert schmidt_rank(c, [0, 1, 2]) == schmidt_rank(g, [0, 1, 2])


@pytest.mark.parametrize("part", [[], [0, 1, 2], [0, 7]])
def test_schmidt_rank_rejects_bad_parts(part):
    with pytest.raises(InvalidPartition):
        schmidt_rank(family("path", 3), part)


# --- amplitudes ---


def test_graph_state_signs():
    assert minus_sign_count(family("complete", 3)) == 4
    assert minus_sign_count(family("biclique", 2, 2)) == 4
    assert minus_sign_count(Graph.empty(3)) == 0
    signs = graph_state_vector(family("complete", 3))
    assert signs.dtype == np.int8
    assert [int(i) for i in np.flatnonzero(signs < 0)] == [3, 5, 6, 7]


def test_state_vector_matches_graph_formula():
    for g in connected_graphs({1, 2, 3, 4, 5}):
        amps = state_vector(graph_check_matrix(g))
        expected = graph_state_vector(g) / np.sqrt(2**g.n)
        assert np.allclose(amps, expected), g.edges()


def test_state_vector_of_star_plus_hadamards_is_ghz():
    c = graph_check_matrix(family("star", 4))
    for q in range(1, 4):
        c = apply_single_qubit_clifford(c, q, Gate.H)
    amps = state_vector(c)
    expected = np.zeros(16)
    expected[0] = expected[15] = 1 / np.sqrt(2)
    assert np.allclose(amps, expected)


def test_state_vector_y_eigenstate():
    amps = state_vector(CheckMatrix.from_strings(["+Y"]))
    assert np.allclose(amps, np.array([1, 1j]) / np.sqrt(2))


def test_state_vector_is_stabilized():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randint(1, 5)
        c = apply_clifford_word(graph_check_matrix(random_graph(rng, n)), random_clifford_word(rng, n, 4 * n))
        psi = state_vector(c)
        assert np.linalg.norm(psi) == pytest.approx(1.0)
        for p in c.rows:
            assert np.allclose(apply_pauli(p, psi), psi), str(p)


def test_state_vector_limits():
    with pytest.raises(ResourceLimit):
        state_vector(graph_check_matrix(family("path", 6)), limit=5)
    with pytest.raises(MalformedCheckMatrix):
        state_vector(CheckMatrix.from_strings(["XX"]))


# --- single-qubit Cliffords ---


@pytest.mark.parametrize("gate", list(Gate))
def test_conjugation_table_matches_matrices(gate):
    u = GATE_MATRICES[gate]
    for letter in "XYZ":
        image = conjugate_pauli(P(letter), 0, gate)
        expected = u @ SINGLE_QUBIT[letter] @ u.conj().T
        got = 1j ** image.phase * SINGLE_QUBIT[image.letter(0)]
        assert np.allclose(got, expected), (gate, letter)


def test_hadamard_everywhere_swaps_blocks():
    g = family("crazy", 3, 2)
    c = graph_check_matrix(g)
    word = [(q, Gate.H) for q in range(g.n)]
    swapped = apply_clifford_word(c, word)
    assert swapped.x_block() == g.adjacency_matrix()
    assert swapped.z_block().rows == tuple(1 << a for a in range(g.n))


def test_pauli_gates_keep_the_state_up_to_sign():
    c = graph_check_matrix(family("cycle", 5))
    flipped = apply_single_qubit_clifford(c, 2, Gate.Z)
    assert str(flipped.rows[2]) == "-IZXZI"
    assert not same_stabilizer(c, flipped)
    assert same_stabilizer(c, apply_single_qubit_clifford(flipped, 2, "Z"))


def test_apply_gate_rejects_bad_qubit():
    with pytest.raises(VertexOutOfRange):
        apply_single_qubit_clifford(graph_check_matrix(family("path", 2)), 2, Gate.H)
