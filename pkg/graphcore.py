"""Simple undirected graphs on bit-packed adjacency rows.

Vertices are ``0..n-1`` and ``adj[v]`` is an int whose bit ``u`` is set when
``{u, v}`` is an edge. Everything here returns new :class:`Graph` values;
nothing mutates a graph in place.

Family labelings (all deterministic):

- ``Star(n)``: center 0, leaves ``1..n-1``.
- ``Complete(n)``, ``Path(n)`` (``0-1-...``), ``Cycle(n)``.
- ``Biclique(m, n)`` / ``GeneralizedBiclique(m, n)``: left ``0..m-1``, right
  ``m..m+n-1``. ``Biclique(m)`` is ``Biclique(m, m)``.
- ``BinaryStar(n)``: adjacent centers 0 and 1; center 0 takes leaves
  ``2..`` (the larger half when ``n`` is odd), center 1 the rest.
- ``GeneralizedBinaryStar(m, n)``: centers 0 and 1 with ``m-1`` and ``n-1``
  leaves.
- ``CrazyGraph(columns, m)``: column ``c`` holds ``c*m..c*m+m-1``; adjacent
  columns are completely joined.
- Repeater families: the core first, then leaf ``i'`` of core vertex ``i`` in
  core order. The imperfect variants drop the leaf of core vertex 0 (and, for
  the biclique core, also the leaf of right vertex ``m``).
"""

from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from config import DEFAULT_CONFIG
from errors import InvalidParam, ParseError, ResourceLimit, VertexOutOfRange
from gf2linalg import BitMatrix, bits_to_int, iter_bits, popcount, rank_xor

logger = logging.getLogger(__name__)

GRAPH_FORMAT = "graphstate/1"
# largest graph a JSON file may declare
MAX_JSON_VERTICES = 1 << 12


def _is_int(value: object) -> bool:
    # JSON true/false decode to bool, which is an int subclass
    return isinstance(value, int) and not isinstance(value, bool)


@dataclass(frozen=True, slots=True)
class Graph:
    """Undirected simple graph; ``adj`` is symmetric with an empty diagonal."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise InvalidParam("adjacency must have exactly n rows")
        mask = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row < 0 or row & ~mask:
                raise InvalidParam(f"vertex {v} has a neighbour outside 0..{self.n - 1}")
            if (row >> v) & 1:
                raise InvalidParam(f"self-loop at vertex {v}")
            for u in iter_bits(row):
                if not (self.adj[u] >> v) & 1:
                    raise InvalidParam(f"edge {v}-{u} is not symmetric")

    @classmethod
    def _trusted(cls, n: int, adj: tuple[int, ...]) -> Graph:
        # hot paths build graphs that are valid by construction
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls._trusted(n, (0,) * n)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
            if u == v:
                raise InvalidParam(f"self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls._trusted(n, tuple(adj))

    # -- basic queries ----------------------------------------------------

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    @property
    def edge_count(self) -> int:
        return sum(popcount(r) for r in self.adj) // 2

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def neighbours(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexOutOfRange(f"vertex {v} not in 0..{self.n - 1}")

    def adjacency_matrix(self) -> BitMatrix:
        return BitMatrix(self.adj, self.n)

    # -- derived graphs ---------------------------------------------------

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise InvalidParam("relabeling must be a permutation of the vertices")
        adj = [0] * self.n
        for v in range(self.n):
            adj[perm[v]] = bits_to_int(perm[u] for u in iter_bits(self.adj[v]))
        return Graph._trusted(self.n, tuple(adj))

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Induced subgraph, vertices renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = tuple(
            bits_to_int(index[u] for u in iter_bits(self.adj[v]) if u in index) for v in vertices
        )
        return Graph._trusted(len(vertices), adj)

    def delete_vertex(self, v: int) -> Graph:
        self.check_vertex(v)
        return self.induced([u for u in range(self.n) if u != v])

    # -- codecs -----------------------------------------------------------

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> Graph:
        nodes = sorted(graph.nodes)
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in graph.edges))

    def to_json(self) -> str:
        return json.dumps({"format": GRAPH_FORMAT, "n": self.n, "edges": [list(e) for e in self.edges()]})

    @classmethod
    def from_json(cls, text: str) -> Graph:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid graph JSON: {exc.msg}") from exc
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise ParseError('graph JSON needs "n" and "edges"')
        if data.get("format", GRAPH_FORMAT) != GRAPH_FORMAT:
            raise ParseError(f"unsupported graph format {data['format']!r}")
        n = data["n"]
        if not _is_int(n) or n < 0:
            raise ParseError('"n" must be a non-negative integer')
        if n > MAX_JSON_VERTICES:
            raise ResourceLimit("graph_vertices", MAX_JSON_VERTICES, n)
        if not isinstance(data["edges"], list):
            raise ParseError('"edges" must be a list')
        seen: set[tuple[int, int]] = set()
        for edge in data["edges"]:
            if not (isinstance(edge, list) and len(edge) == 2 and all(_is_int(x) for x in edge)):
                raise ParseError(f"bad edge entry {edge!r}")
            u, v = sorted(edge)
            if (u, v) in seen:
                raise ParseError(f"duplicate edge {u}-{v}")
            seen.add((u, v))
        try:
            return cls.from_edges(n, seen)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc

    def to_dot(self) -> str:
        lines = ["graph {"]
        lines += [f"  {v};" for v in range(self.n)]
        lines += [f"  {u} -- {v};" for u, v in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


class FamilyKind(str, Enum):
    STAR = "star"
    COMPLETE = "complete"
    BICLIQUE = "biclique"
    BINARY_STAR = "binary-star"
    GENERALIZED_BICLIQUE = "generalized-biclique"
    GENERALIZED_BINARY_STAR = "generalized-binary-star"
    CRAZY_GRAPH = "crazy"
    REPEATER_COMPLETE = "repeater-complete"
    REPEATER_BICLIQUE = "repeater-biclique"
    IMPERFECT_REPEATER_COMPLETE = "imperfect-repeater-complete"
    IMPERFECT_REPEATER_BICLIQUE = "imperfect-repeater-biclique"
    PATH = "path"
    CYCLE = "cycle"


_ARITY: dict[FamilyKind, tuple[int, ...]] = {
    FamilyKind.STAR: (1,),
    FamilyKind.COMPLETE: (1,),
    FamilyKind.BICLIQUE: (1, 2),
    FamilyKind.BINARY_STAR: (1,),
    FamilyKind.GENERALIZED_BICLIQUE: (2,),
    FamilyKind.GENERALIZED_BINARY_STAR: (2,),
    FamilyKind.CRAZY_GRAPH: (2,),
    FamilyKind.REPEATER_COMPLETE: (1,),
    FamilyKind.REPEATER_BICLIQUE: (1, 2),
    FamilyKind.IMPERFECT_REPEATER_COMPLETE: (1,),
    FamilyKind.IMPERFECT_REPEATER_BICLIQUE: (1, 2),
    FamilyKind.PATH: (1,),
    FamilyKind.CYCLE: (1,),
}


@dataclass(frozen=True, slots=True)
class FamilySpec:
    kind: FamilyKind
    params: tuple[int, ...]

    @classmethod
    def of(cls, kind: FamilyKind | str, *params: int) -> FamilySpec:
        try:
            kind = FamilyKind(kind)
        except ValueError as exc:
            names = ", ".join(k.value for k in FamilyKind)
            raise InvalidParam(f"unknown family {kind!r}; choose from {names}") from exc
        return cls(kind, tuple(int(p) for p in params))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidParam(message)


def _complete_edges(vertices: Sequence[int]) -> list[tuple[int, int]]:
    return [(u, v) for i, u in enumerate(vertices) for v in vertices[i + 1 :]]


def _join(left: Sequence[int], right: Sequence[int]) -> list[tuple[int, int]]:
    return [(u, v) for u in left for v in right]


def _with_leaves(core: Graph, parents: Sequence[int]) -> Graph:
    edges = core.edges() + [(p, core.n + i) for i, p in enumerate(parents)]
    return Graph.from_edges(core.n + len(parents), edges)


def make_family(spec: FamilySpec) -> Graph:
    """Build the graph named by ``spec`` with the labeling documented above."""
    kind, params = spec.kind, spec.params
    _require(len(params) in _ARITY[kind], f"{kind.value} takes {' or '.join(map(str, _ARITY[kind]))} parameter(s)")

    if kind is FamilyKind.STAR:
        (n,) = params
        _require(n >= 2, "star needs n >= 2")
        return Graph.from_edges(n, [(0, v) for v in range(1, n)])
    if kind is FamilyKind.COMPLETE:
        (n,) = params
        _require(n >= 1, "complete graph needs n >= 1")
        return Graph.from_edges(n, _complete_edges(range(n)))
    if kind in (FamilyKind.BICLIQUE, FamilyKind.GENERALIZED_BICLIQUE):
        m, n = params if len(params) == 2 else (params[0], params[0])
        _require(m >= 1 and n >= 1, "biclique needs m, n >= 1")
        return Graph.from_edges(m + n, _join(range(m), range(m, m + n)))
    if kind is FamilyKind.BINARY_STAR:
        (n,) = params
        _require(n >= 2, "binary star needs n >= 2")
        first = 2 + (n - 1) // 2
        edges = [(0, 1)] + [(0, v) for v in range(2, first)] + [(1, v) for v in range(first, n)]
        return Graph.from_edges(n, edges)
    if kind is FamilyKind.GENERALIZED_BINARY_STAR:
        m, n = params
        _require(m >= 1 and n >= 1, "generalized binary star needs m, n >= 1")
        edges = [(0, 1)] + [(0, v) for v in range(2, m + 1)] + [(1, v) for v in range(m + 1, m + n)]
        return Graph.from_edges(m + n, edges)
    if kind is FamilyKind.CRAZY_GRAPH:
        columns, m = params
        _require(columns >= 2, "crazy graph needs at least 2 columns")
        _require(m >= 1, "crazy graph needs m >= 1 vertices per column")
        blocks = [range(c * m, (c + 1) * m) for c in range(columns)]
        edges = [e for a, b in zip(blocks, blocks[1:]) for e in _join(a, b)]
        return Graph.from_edges(columns * m, edges)
    if kind in (FamilyKind.REPEATER_COMPLETE, FamilyKind.IMPERFECT_REPEATER_COMPLETE):
        (n,) = params
        _require(n >= 2, "repeater core needs n >= 2")
        core = make_family(FamilySpec(FamilyKind.COMPLETE, (n,)))
        skip = {0} if kind is FamilyKind.IMPERFECT_REPEATER_COMPLETE else set()
        return _with_leaves(core, [v for v in range(n) if v not in skip])
    if kind in (FamilyKind.REPEATER_BICLIQUE, FamilyKind.IMPERFECT_REPEATER_BICLIQUE):
        m, n = params if len(params) == 2 else (params[0], params[0])
        _require(m >= 1 and n >= 1, "repeater biclique needs m, n >= 1")
        core = make_family(FamilySpec(FamilyKind.BICLIQUE, (m, n)))
        skip = {0, m} if kind is FamilyKind.IMPERFECT_REPEATER_BICLIQUE else set()
        return _with_leaves(core, [v for v in range(m + n) if v not in skip])
    if kind is FamilyKind.PATH:
        (n,) = params
        _require(n >= 1, "path needs n >= 1")
        return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])
    if kind is FamilyKind.CYCLE:
        (n,) = params
        _require(n >= 3, "cycle needs n >= 3")
        return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])
    raise InvalidParam(f"unsupported family {kind}")  # pragma: no cover


def family(kind: FamilyKind | str, *params: int) -> Graph:
    """Shorthand for ``make_family(FamilySpec.of(kind, *params))``."""
    return make_family(FamilySpec.of(kind, *params))


# ---------------------------------------------------------------------------
# Local complementation and structural predicates
# ---------------------------------------------------------------------------


def local_complement(g: Graph, v: int) -> Graph:
    """Complement the subgraph induced on the neighbourhood of ``v``."""
    g.check_vertex(v)
    nbrs = g.adj[v]
    if popcount(nbrs) < 2:
        return g
    adj = list(g.adj)
    for u in iter_bits(nbrs):
        adj[u] ^= nbrs & ~(1 << u)
    return Graph._trusted(g.n, tuple(adj))


def has_short_cycle(g: Graph) -> bool:
    """True iff ``g`` contains a triangle or a 4-cycle."""
    for u in range(g.n):
        for v in iter_bits(g.adj[u]):
            if v > u and g.adj[u] & g.adj[v]:
                return True
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if popcount(g.adj[u] & g.adj[v]) >= 2:
                return True
    return False


def components(g: Graph) -> list[list[int]]:
    seen = 0
    result = []
    for root in range(g.n):
        if (seen >> root) & 1:
            continue
        comp = 1 << root
        frontier = 1 << root
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= g.adj[v]
            frontier = reach & ~comp
            comp |= frontier
        seen |= comp
        result.append(list(iter_bits(comp)))
    return result


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def bipartition(g: Graph) -> tuple[frozenset[int], frozenset[int]] | None:
    """BFS 2-colouring; the lowest vertex of each component goes left."""
    colour: dict[int, int] = {}
    for root in range(g.n):
        if root in colour:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for u in iter_bits(g.adj[v]):
                if u not in colour:
                    colour[u] = 1 - colour[v]
                    queue.append(u)
                elif colour[u] == colour[v]:
                    return None
    left = frozenset(v for v, c in colour.items() if c == 0)
    return left, frozenset(range(g.n)) - left


def leaves(g: Graph) -> set[int]:
    return {v for v in range(g.n) if popcount(g.adj[v]) == 1}


def remove_leaves(g: Graph) -> Graph:
    """Delete every degree-1 vertex once; survivors keep their relative order."""
    gone = leaves(g)
    return g.induced([v for v in range(g.n) if v not in gone])


def is_star(g: Graph) -> bool:
    """True iff ``g`` is a star on all of its ``n >= 2`` vertices."""
    return g.n >= 2 and g.edge_count == g.n - 1 and any(g.degree(v) == g.n - 1 for v in range(g.n))


def adjacency_block(g: Graph, rows: Iterable[int], cols: Iterable[int]) -> BitMatrix:
    return g.adjacency_matrix().submatrix(sorted(rows), sorted(cols))


def cut_rank(g: Graph, part: Iterable[int]) -> int:
    """GF(2) rank of the adjacency block between ``part`` and its complement."""
    part = set(part)
    rest = [v for v in range(g.n) if v not in part]
    return rank_xor(adjacency_block(g, part, rest))


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------


def _refine(g: Graph, colours: list[int]) -> list[int]:
    """Colour refinement until stable; colours are ranks of sorted signatures."""
    count = len(set(colours))
    while True:
        sigs = [
            (colours[v], tuple(sorted(colours[u] for u in iter_bits(g.adj[v])))) for v in range(g.n)
        ]
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        colours = [ranking[s] for s in sigs]
        if len(ranking) == count:
            return colours
        count = len(ranking)


def _twins(g: Graph, u: int, v: int) -> bool:
    return g.adj[u] & ~(1 << v) == g.adj[v] & ~(1 << u)


def _certificate(g: Graph, colours: list[int]) -> tuple[int, ...]:
    order = sorted(range(g.n), key=colours.__getitem__)
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    return tuple(bits_to_int(pos[u] for u in iter_bits(g.adj[v])) for v in order)


def _best_certificate(g: Graph, colours: list[int]) -> tuple[int, ...]:
    colours = _refine(g, colours)
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colours):
        cells.setdefault(c, []).append(v)
    open_cells = [(len(members), c) for c, members in cells.items() if len(members) > 1]
    if not open_cells:
        return _certificate(g, colours)
    _, target = min(open_cells)
    best: tuple[int, ...] | None = None
    tried: list[int] = []
    for v in cells[target]:
        # swapping twins is an automorphism fixing everything individualized so far
        if any(_twins(g, v, u) for u in tried):
            continue
        tried.append(v)
        split = [2 * c + (1 if c == target and w != v else 0) for w, c in enumerate(colours)]
        cert = _best_certificate(g, split)
        if best is None or cert > best:
            best = cert
    assert best is not None
    return best


def canonical_form(g: Graph, limit: int = DEFAULT_CONFIG.canonical_limit) -> tuple[int, tuple[int, ...]]:
    """Label-invariant key: equal keys iff the graphs are isomorphic.

    Colour refinement followed by individualization of the smallest open
    cell, keeping the largest relabeled adjacency over all leaves.
    """
    if g.n > limit:
        raise ResourceLimit("canonical_limit", limit, g.n)
    if g.n == 0:
        return (0, ())
    start = [popcount(row) for row in g.adj]
    return (g.n, _best_certificate(g, start))


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return False
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())


def isomorphism(g1: Graph, g2: Graph) -> list[int] | None:
    """Permutation ``p`` with ``g1.relabel(p) == g2``, or ``None``."""
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return None
    matcher = GraphMatcher(g1.to_networkx(), g2.to_networkx())
    if not matcher.is_isomorphic():
        return None
    return [matcher.mapping[v] for v in range(g1.n)]
