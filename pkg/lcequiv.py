"""Local-complementation orbits, equivalence witnesses and the LU/LC certificate."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from config import DEFAULT_CONFIG, RunConfig
from errors import InvalidParam, ResourceLimit
from gf2linalg import rank_xor
from graphcore import (
    FamilyKind,
    Graph,
    canonical_form,
    family,
    has_short_cycle,
    is_connected,
    is_star,
    isomorphism,
    local_complement,
    remove_leaves,
)
from stabilizer import Gate, check_msc, graph_check_matrix

logger = logging.getLogger(__name__)


def replay(g: Graph, steps: Iterable[int]) -> Graph:
    for v in steps:
        g = local_complement(g, v)
    return g


@dataclass(frozen=True)
class LCSequence:
    """Vertices to locally complement, left to right, taking ``source`` to ``target``.

    When ``permutation`` is set the match is up to relabeling:
    ``target.relabel(permutation)`` is the graph that was asked for.
    """

    source: Graph
    target: Graph
    steps: tuple[int, ...]
    permutation: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if replay(self.source, self.steps) != self.target:
            raise InvalidParam(f"steps {list(self.steps)} do not reach the declared target")

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def matched(self) -> Graph:
        if self.permutation is None:
            return self.target
        return self.target.relabel(self.permutation)

    def reversed(self) -> LCSequence:
        # each local complementation is an involution
        return LCSequence(self.target, self.source, self.steps[::-1])

    def then(self, other: LCSequence) -> LCSequence:
        if self.target != other.source:
            raise InvalidParam("sequences do not compose: target and source differ")
        return LCSequence(self.source, other.target, self.steps + other.steps)

    def __str__(self) -> str:
        return "[" + ", ".join(map(str, self.steps)) + "]"


def lc_gate_word(g: Graph, a: int) -> list[tuple[int, Gate]]:
    """Single-qubit Cliffords realising local complementation at ``a``.

    ``exp(-i pi/4 X)`` on ``a`` and ``S^dagger`` on each neighbour.
    """
    g.check_vertex(a)
    return [(a, Gate.SQRT_X)] + [(b, Gate.SDG) for b in g.neighbours(a)]


# ---------------------------------------------------------------------------
# Orbit search
# ---------------------------------------------------------------------------


def _key_fn(up_to_perm: bool, canonical_limit: int):
    if up_to_perm:
        return lambda h: canonical_form(h, canonical_limit)
    return lambda h: h.adj


def iter_lc_orbit(
    g: Graph,
    budget: int = DEFAULT_CONFIG.orbit_budget,
    *,
    up_to_perm: bool = False,
    canonical_limit: int = DEFAULT_CONFIG.canonical_limit,
) -> Iterator[tuple[Graph, tuple[int, ...]]]:
    """Breadth-first orbit walk yielding ``(member, steps)``.

    Vertices are expanded in ascending order, so each member's steps are the
    shortest witness and the lexicographically smallest among those. Stops
    after ``budget`` members.
    """
    key = _key_fn(up_to_perm, canonical_limit)
    seen = {key(g)}
    queue: deque[tuple[Graph, tuple[int, ...]]] = deque([(g, ())])
    emitted = 0
    while queue:
        member, steps = queue.popleft()
        yield member, steps
        emitted += 1
        if emitted >= budget:
            if queue:
                logger.info("orbit walk stopped at budget %d with %d queued", budget, len(queue))
            return
        for v in range(member.n):
            if member.degree(v) < 2:
                continue
            nxt = local_complement(member, v)
            k = key(nxt)
            if k not in seen:
                seen.add(k)
                queue.append((nxt, steps + (v,)))


@dataclass(frozen=True)
class LCOrbit:
    source: Graph
    up_to_perm: bool
    witnesses: dict[object, LCSequence] = field(repr=False)

    def __len__(self) -> int:
        return len(self.witnesses)

    @property
    def members(self) -> list[Graph]:
        return [w.target for w in self.witnesses.values()]

    def key(self, g: Graph) -> object:
        return canonical_form(g, max(g.n, 1)) if self.up_to_perm else g.adj

    def __contains__(self, g: object) -> bool:
        return isinstance(g, Graph) and g.n == self.source.n and self.key(g) in self.witnesses

    def witness(self, g: Graph) -> LCSequence | None:
        return self.witnesses.get(self.key(g))


def lc_orbit(
    g: Graph,
    up_to_perm: bool = False,
    *,
    limit: int = DEFAULT_CONFIG.orbit_limit,
    budget: int = DEFAULT_CONFIG.orbit_budget,
) -> LCOrbit:
    """Closure of ``g`` under local complementation, with a witness per member.

    Raises:
        ResourceLimit: ``g`` has more than ``limit`` vertices or the orbit has
            more than ``budget`` members.
    """
    if g.n > limit:
        raise ResourceLimit("orbit_limit", limit, g.n)
    witnesses: dict[object, LCSequence] = {}
    key = _key_fn(up_to_perm, max(limit, g.n))
    for member, steps in iter_lc_orbit(g, budget + 1, up_to_perm=up_to_perm, canonical_limit=max(limit, g.n)):
        if len(witnesses) == budget:
            raise ResourceLimit("orbit_budget", budget, budget + 1)
        witnesses[key(member)] = LCSequence(g, member, steps)
    logger.debug("orbit of %d-vertex graph has %d members (up_to_perm=%s)", g.n, len(witnesses), up_to_perm)
    return LCOrbit(g, up_to_perm, witnesses)


def lc_equivalent(
    g1: Graph,
    g2: Graph,
    *,
    up_to_iso: bool = False,
    limit: int = DEFAULT_CONFIG.orbit_limit,
    budget: int = DEFAULT_CONFIG.orbit_budget,
) -> LCSequence | None:
    """Shortest witness taking ``g1`` to ``g2``, or ``None`` if none exists.

    With ``up_to_iso`` the walk stops at the first member isomorphic to
    ``g2`` and the returned sequence carries the relabeling.
    """
    if g1.n != g2.n:
        return None
    if g1.n > limit:
        raise ResourceLimit("orbit_limit", limit, g1.n)
    if up_to_iso:
        target_key = canonical_form(g2, max(limit, g2.n))
        match = lambda h: canonical_form(h, max(limit, h.n)) == target_key  # noqa: E731
    else:
        match = lambda h: h == g2  # noqa: E731

    visited = 0
    for member, steps in iter_lc_orbit(g1, budget + 1):
        if visited == budget:
            raise ResourceLimit("orbit_budget", budget, budget + 1)
        visited += 1
        if match(member):
            perm = None
            if up_to_iso:
                found = isomorphism(member, g2)
                assert found is not None
                perm = tuple(found)
            return LCSequence(g1, member, steps, perm)
    return None


# ---------------------------------------------------------------------------
# Named procedures
# ---------------------------------------------------------------------------


class Procedure(str, Enum):
    STAR_COMPLETE = "star-complete"
    BICLIQUE_BINARY_STAR = "biclique-binary-star"
    GENERALIZED_BICLIQUE = "generalized-biclique"
    IMPERFECT_REPEATER_COMPLETE = "imperfect-repeater-complete"
    IMPERFECT_REPEATER_BICLIQUE = "imperfect-repeater-biclique"


def named_sequence(name: Procedure | str, *params: int) -> tuple[Graph, Graph, LCSequence]:
    """Source, target and the fixed LC steps of a named procedure.

    - star-complete(n): one step at the center.
    - biclique-binary-star(m), generalized-biclique(m, n): ``[a1, b1, a1]``
      with ``a1 = 0`` and ``b1 = m``; the result is a binary star on hubs 0
      and ``m``.
    - imperfect-repeater-complete(n): one step at the leafless core vertex 0.
    - imperfect-repeater-biclique(m[, n]): ``[a1, b1, a1]`` at the two
      leafless core vertices.
    """
    try:
        name = Procedure(name)
    except ValueError as exc:
        raise InvalidParam(f"unknown procedure {name!r}") from exc

    if name is Procedure.STAR_COMPLETE:
        source, steps = family(FamilyKind.STAR, *params), (0,)
    elif name is Procedure.BICLIQUE_BINARY_STAR:
        if len(params) != 1:
            raise InvalidParam("biclique-binary-star takes one parameter m")
        source, steps = family(FamilyKind.BICLIQUE, params[0]), (0, params[0], 0)
    elif name is Procedure.GENERALIZED_BICLIQUE:
        if len(params) != 2:
            raise InvalidParam("generalized-biclique takes parameters m n")
        source, steps = family(FamilyKind.GENERALIZED_BICLIQUE, *params), (0, params[0], 0)
    elif name is Procedure.IMPERFECT_REPEATER_COMPLETE:
        source, steps = family(FamilyKind.IMPERFECT_REPEATER_COMPLETE, *params), (0,)
    else:
        source = family(FamilyKind.IMPERFECT_REPEATER_BICLIQUE, *params)
        steps = (0, params[0], 0)
    target = replay(source, steps)
    return source, target, LCSequence(source, target, steps)


# ---------------------------------------------------------------------------
# LU <=> LC certificate
# ---------------------------------------------------------------------------

RESULT_ORDER = (1, 5, 3, 4, 2, 6)


@dataclass(frozen=True)
class Certificate:
    """``result`` is the number of the sufficient condition that fired, or ``None``."""

    graph: Graph
    result: int | None
    witness: LCSequence | None = None
    skipped: dict[int, str] = field(default_factory=dict)
    orbit_visited: int = 0

    @property
    def holds(self) -> bool:
        return self.result is not None

    def __str__(self) -> str:
        if self.result is None:
            return "UNKNOWN"
        return f"Result {self.result}"


def _graph_support_rank(g: Graph) -> int:
    return min(g.n, rank_xor(g.adjacency_matrix()))


def _msc_holds(g: Graph, limit: int) -> bool | str:
    if g.n == 0:
        return "no vertices left"
    if g.n > limit:
        return f"{g.n} qubits exceed enumeration_limit {limit}"
    if not is_connected(g):
        return "graph is not connected"
    return check_msc(graph_check_matrix(g), limit)


def lulc_certificate(g: Graph, config: RunConfig = DEFAULT_CONFIG) -> Certificate:
    """Try the known sufficient conditions for LU <=> LC in order 1, 5, 3, 4, 2, 6.

    Results 5, 2 and 6 are checked over a breadth-first walk of the LC orbit
    capped at ``config.orbit_budget`` members. Anything not fully checked is
    listed in ``skipped``; a ``None`` result means no condition was met.
    """
    skipped: dict[int, str] = {}
    empty = LCSequence(g, g, ())

    if g.n <= 8:
        return Certificate(g, 1, empty)

    visited: list[tuple[Graph, tuple[int, ...]]] = []
    for member, steps in iter_lc_orbit(g, config.orbit_budget):
        visited.append((member, steps))
        if not has_short_cycle(member):
            logger.debug("orbit member %d has no short cycle", len(visited))
            return Certificate(g, 5, LCSequence(g, member, steps), skipped, len(visited))
    truncated = len(visited) >= config.orbit_budget
    if truncated:
        skipped[5] = f"orbit walk stopped at orbit_budget {config.orbit_budget}"

    outcome = _msc_holds(g, config.enumeration_limit)
    if outcome is True:
        return Certificate(g, 3, empty, skipped, len(visited))
    if isinstance(outcome, str):
        skipped[3] = outcome
        logger.info("skipping MSC check: %s", outcome)

    outcome = _msc_holds(remove_leaves(g), config.enumeration_limit)
    if outcome is True:
        return Certificate(g, 4, empty, skipped, len(visited))
    if isinstance(outcome, str):
        skipped[4] = outcome
        logger.info("skipping leafless MSC check: %s", outcome)

    for member, steps in visited:
        if is_star(member):
            return Certificate(g, 2, LCSequence(g, member, steps), skipped, len(visited))
    if truncated:
        skipped[2] = skipped[5]

    member, steps = min(visited, key=lambda item: (_graph_support_rank(item[0]), len(item[1])))
    if _graph_support_rank(member) < 6:
        return Certificate(g, 6, LCSequence(g, member, steps), skipped, len(visited))
    if truncated:
        skipped[6] = skipped[5]
    return Certificate(g, None, None, skipped, len(visited))

