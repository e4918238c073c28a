"""Pauli measurements on graph states, Pauli persistency and Schmidt-measure bounds.

Measurements follow the graph rules and drop the local correction
operators; the measured vertex is removed and the remaining vertices keep
their relative order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Literal

from config import DEFAULT_CONFIG, RunConfig
from errors import ConsistencyError, InvalidParam, ResourceLimit
from graphcore import Graph, canonical_form, components, cut_rank, local_complement

logger = logging.getLogger(__name__)


class Basis(str, Enum):
    X = "X"
    Y = "Y"
    Z = "Z"


@dataclass(frozen=True, slots=True)
class MeasurementStep:
    vertex: int
    basis: Basis

    def __str__(self) -> str:
        return f"{self.basis.value}{self.vertex}"


def measure_pauli(g: Graph, step: MeasurementStep, neighbour: int | None = None) -> Graph:
    """Graph after measuring ``step.vertex`` in ``step.basis``.

    For X the rule pivots on a neighbour ``b0`` (default: lowest index).
    """
    v = step.vertex
    g.check_vertex(v)
    basis = Basis(step.basis)
    if basis is Basis.Z:
        return g.delete_vertex(v)
    if basis is Basis.Y:
        return local_complement(g, v).delete_vertex(v)

    if not g.adj[v]:
        return g.delete_vertex(v)
    b0 = min(g.neighbours(v)) if neighbour is None else neighbour
    if not g.has_edge(v, b0):
        raise InvalidParam(f"{b0} is not a neighbour of {v}")
    h = local_complement(local_complement(g, b0), v).delete_vertex(v)
    return local_complement(h, b0 - 1 if b0 > v else b0)


def _strip_isolated(g: Graph) -> Graph:
    return g.induced([v for v in range(g.n) if g.adj[v]])


def _children(g: Graph, x_neighbour: Literal["lowest", "all"]) -> list[Graph]:
    out = []
    for v in range(g.n):
        if not g.adj[v]:
            continue
        out.append(measure_pauli(g, MeasurementStep(v, Basis.Z)))
        out.append(measure_pauli(g, MeasurementStep(v, Basis.Y)))
        if x_neighbour == "all":
            out += [measure_pauli(g, MeasurementStep(v, Basis.X), b) for b in g.neighbours(v)]
        else:
            out.append(measure_pauli(g, MeasurementStep(v, Basis.X)))
    return out


def pauli_persistency(
    g: Graph,
    limit: int = DEFAULT_CONFIG.pp_limit,
    *,
    x_neighbour: Literal["lowest", "all"] = "lowest",
) -> int:
    """Fewest single-qubit Pauli measurements that leave no edges.

    Breadth-first over graphs with isolated vertices removed, deduplicated by
    canonical form.
    """
    if g.n > limit:
        raise ResourceLimit("pp_limit", limit, g.n)
    start = _strip_isolated(g)
    if start.n == 0:
        return 0
    key_limit = max(limit, g.n)
    seen = {canonical_form(start, key_limit)}
    frontier = [start]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for h in frontier:
            for child in _children(h, x_neighbour):
                child = _strip_isolated(child)
                if child.n == 0:
                    logger.debug("disentangled after %d measurements", depth)
                    return depth
                key = canonical_form(child, key_limit)
                if key not in seen:
                    seen.add(key)
                    nxt.append(child)
        logger.debug("persistency level %d: %d new graphs", depth, len(nxt))
        frontier = nxt
    raise ConsistencyError("measurement search ended without an edgeless graph")  # pragma: no cover


def pp_z_only(g: Graph, limit: int = DEFAULT_CONFIG.pp_limit) -> int:
    """Fewest vertex deletions leaving no edges, i.e. the minimum vertex cover size."""
    if g.n > limit:
        raise ResourceLimit("pp_limit", limit, g.n)
    edges = g.edges()
    for size in range(g.n + 1):
        for cover in combinations(range(g.n), size):
            chosen = set(cover)
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    return g.n  # pragma: no cover


def largest_component_after(g: Graph, step: MeasurementStep) -> int:
    h = measure_pauli(g, step)
    return max((len(c) for c in components(h)), default=0)


@dataclass(frozen=True, slots=True)
class SchmidtBounds:
    lower: int
    upper: int

    @property
    def tight(self) -> bool:
        return self.lower == self.upper


def max_cut_rank(g: Graph, limit: int = DEFAULT_CONFIG.schmidt_limit) -> int:
    """Largest cut rank over bipartitions; the side holding vertex 0 is enumerated."""
    if g.n > limit:
        raise ResourceLimit("schmidt_limit", limit, g.n)
    if g.n < 2:
        return 0
    best = 0
    full = (1 << g.n) - 1
    for rest in range(0, 1 << max(g.n - 1, 0)):
        part = 1 | (rest << 1)
        if part == full:
            continue
        best = max(best, cut_rank(g, [v for v in range(g.n) if (part >> v) & 1]))
    return best


def schmidt_measure_bounds(g: Graph, config: RunConfig = DEFAULT_CONFIG) -> SchmidtBounds:
    """``lower`` from the best bipartition, ``upper`` from Pauli persistency."""
    lower = max_cut_rank(g, config.schmidt_limit)
    upper = pauli_persistency(g, config.pp_limit)
    if lower > upper:
        raise ConsistencyError(f"Schmidt bounds crossed: {lower} > {upper}")
    return SchmidtBounds(lower, upper)
