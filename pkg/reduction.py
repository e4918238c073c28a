"""Reduce a stabilizer check matrix to graph form and study its sign structure.

The reduction works in four stages on the generator rows:

1. row-reduce the X block and move its pivot qubits to the front:
   ``[[I A | B C], [0 0 | D E]]``;
2. make ``E`` the identity with row operations among the Z-only rows and use
   those rows to clear ``C``: ``[[I A | B' 0], [0 0 | D' I]]``;
3. Hadamard on the last ``n - r`` qubits: ``[I | M]`` with ``M`` symmetric;
4. phase gates clear the diagonal of ``M`` and ``Z`` gates clear negative
   signs, leaving ``[I | Gamma]``.

Every row operation, qubit relabeling and gate is recorded, so the stages can
be reproduced from the input with :func:`replay_trace`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from config import DEFAULT_CONFIG, RunConfig
from errors import ConsistencyError, FitFailure, InvalidPartition, MalformedCheckMatrix
from gf2linalg import (
    BitMatrix,
    biclique_partition_number,
    in_span,
    iter_bits,
    rank_rational,
    rank_xor,
    rref,
    span_basis,
)
from graphcore import Graph, bipartition
from lcequiv import iter_lc_orbit
from stabilizer import (
    CheckMatrix,
    Gate,
    PauliElement,
    apply_clifford_word,
    conjugate_pauli,
    graph_check_matrix,
    minus_sign_count,
    same_stabilizer,
    state_vector,
    support_subgroup,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Trace records
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RowSwap:
    i: int
    j: int


@dataclass(frozen=True, slots=True)
class RowAdd:
    """``rows[target] *= rows[source]``."""

    target: int
    source: int


@dataclass(frozen=True, slots=True)
class Relabel:
    """New qubit ``i`` is old qubit ``order[i]``."""

    order: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class GateOp:
    qubit: int
    gate: Gate


TraceOp = Union[RowSwap, RowAdd, Relabel, GateOp]


@dataclass(frozen=True)
class ReductionTrace:
    """Recorded reduction of one check matrix.

    ``stages`` are the four intermediate matrices in the relabeled qubit
    order; ``stage_ends[k]`` is the number of ops applied when stage ``k``
    was taken. ``order[i]`` is the input qubit sitting at position ``i``.
    """

    stages: tuple[CheckMatrix, ...]
    ops: tuple[TraceOp, ...]
    stage_ends: tuple[int, ...]
    r: int
    order: tuple[int, ...]

    @property
    def gates(self) -> list[GateOp]:
        return [op for op in self.ops if isinstance(op, GateOp)]

    @property
    def local_cliffords(self) -> list[tuple[int, Gate]]:
        """The recorded gates on input qubit labels, in application order."""
        return [(self.order[op.qubit], op.gate) for op in self.gates]

    @property
    def is_trivial(self) -> bool:
        return not self.ops


class _Tableau:
    def __init__(self, c: CheckMatrix) -> None:
        self.n = c.n
        self.rows = list(c.rows)
        self.ops: list[TraceOp] = []

    def snapshot(self) -> CheckMatrix:
        return CheckMatrix(self.n, tuple(self.rows))

    def apply(self, op: TraceOp) -> None:
        if isinstance(op, RowSwap):
            self.rows[op.i], self.rows[op.j] = self.rows[op.j], self.rows[op.i]
        elif isinstance(op, RowAdd):
            self.rows[op.target] = self.rows[op.target] * self.rows[op.source]
        elif isinstance(op, Relabel):
            self.rows = [_relabel_row(p, op.order) for p in self.rows]
        else:
            self.rows = [conjugate_pauli(p, op.qubit, op.gate) for p in self.rows]
        self.ops.append(op)


def _relabel_row(p: PauliElement, order: tuple[int, ...]) -> PauliElement:
    x = sum(((p.xbits >> old) & 1) << new for new, old in enumerate(order))
    z = sum(((p.zbits >> old) & 1) << new for new, old in enumerate(order))
    return PauliElement(p.n, x, z, p.phase)


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def _reduce_block(t: _Tableau, rows: range, cols: Iterable[int], bits: str) -> list[int]:
    """Gauss-Jordan on ``bits`` ('xbits' or 'zbits') within ``rows``; returns pivot columns."""
    pivots = []
    r = rows.start
    for col in cols:
        if r == rows.stop:
            break
        pick = next((i for i in range(r, rows.stop) if (getattr(t.rows[i], bits) >> col) & 1), None)
        if pick is None:
            continue
        if pick != r:
            t.apply(RowSwap(r, pick))
        for i in rows:
            if i != r and (getattr(t.rows[i], bits) >> col) & 1:
                t.apply(RowAdd(i, r))
        pivots.append(col)
        r += 1
    return pivots


def reduce_to_graph(c: CheckMatrix) -> tuple[Graph, ReductionTrace]:
    """Graph state LC-equivalent to ``c``, on the input's qubit labels.

    Raises:
        MalformedCheckMatrix: ``c`` does not have ``n`` valid generators.
    """
    if not c.is_state:
        raise MalformedCheckMatrix(f"{len(c.rows)} generators do not fix a state on {c.n} qubits")
    n = c.n
    t = _Tableau(c)
    stages: list[CheckMatrix] = []
    ends: list[int] = []

    def stage() -> None:
        stages.append(t.snapshot())
        ends.append(len(t.ops))

    pivots = _reduce_block(t, range(n), range(n), "xbits")
    r = len(pivots)
    order = tuple(pivots + [q for q in range(n) if q not in set(pivots)])
    if order != tuple(range(n)):
        t.apply(Relabel(order))
    stage()

    # E is invertible: a Z-only row vanishing on the last n-r qubits would
    # have to vanish everywhere to commute with the top rows
    _reduce_block(t, range(r, n), range(r, n), "zbits")
    for i in range(r):
        for j in range(r, n):
            if (t.rows[i].zbits >> j) & 1:
                t.apply(RowAdd(i, j))
    stage()

    for q in range(r, n):
        t.apply(GateOp(q, Gate.H))
    stage()

    for q in range(n):
        if (t.rows[q].zbits >> q) & 1:
            t.apply(GateOp(q, Gate.SDG))
    for q in range(n):
        if t.rows[q].phase == 2:
            t.apply(GateOp(q, Gate.Z))
    stage()

    final = stages[-1]
    for q, p in enumerate(final.rows):
        if p.xbits != 1 << q or p.phase != 0 or (p.zbits >> q) & 1:
            raise ConsistencyError(f"reduction did not reach graph form at row {q}")
    permuted = Graph(n, tuple(p.zbits for p in final.rows))
    graph = permuted.relabel(order)

    trace = ReductionTrace(tuple(stages), tuple(t.ops), tuple(ends), r, order)
    if not same_stabilizer(apply_clifford_word(c, trace.local_cliffords), graph_check_matrix(graph)):
        raise ConsistencyError("recorded local Cliffords do not map the input to the graph state")
    logger.debug("reduced %d-qubit stabilizer: r=%d, %d ops", n, r, len(t.ops))
    return graph, trace


def replay_trace(c: CheckMatrix, trace: ReductionTrace) -> list[CheckMatrix]:
    """Re-apply the recorded ops to ``c`` and return the four stages."""
    t = _Tableau(c)
    stages = []
    ends = iter(trace.stage_ends)
    next_end = next(ends, None)
    for k, op in enumerate([None, *trace.ops]):
        if op is not None:
            t.apply(op)
        while next_end is not None and next_end == k:
            stages.append(t.snapshot())
            next_end = next(ends, None)
    return stages


# ---------------------------------------------------------------------------
# Support rank
# ---------------------------------------------------------------------------


def support_rank(c: CheckMatrix) -> int:
    """``min(rank X, rank Z)`` of the generator matrix as given."""
    return min(rank_xor(c.x_block()), rank_xor(c.z_block()))


def min_support_rank_over_orbit(g: Graph, budget: int = DEFAULT_CONFIG.orbit_budget) -> int:
    """Smallest support rank among the graph check matrices of the LC orbit walk."""
    return min(support_rank(graph_check_matrix(h)) for h, _ in iter_lc_orbit(g, budget))


# ---------------------------------------------------------------------------
# Amplitude decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizerDecomposition:
    """Amplitude on ``offset ^ x`` for ``x`` in span(``subspace_basis``):

    ``global_phase * |S|**-0.5 * i**(l . x) * (-1)**q(x)``

    ``subspace_basis`` is in reduced echelon form with pivot qubits
    ``pivots``; ``linear_l[p]`` is an exponent of ``i`` (mod 4) and
    ``quadratic_q`` a symmetric zero-diagonal form, both nonzero only on
    pivot qubits.
    """

    n: int
    offset: int
    global_phase: complex
    subspace_basis: tuple[int, ...]
    pivots: tuple[int, ...]
    linear_l: tuple[int, ...]
    quadratic_q: BitMatrix

    @property
    def dimension(self) -> int:
        return len(self.subspace_basis)

    def exponent(self, x: int) -> int:
        """Power of ``i`` at subspace vector ``x`` (without the offset)."""
        coords = [(x >> p) & 1 for p in self.pivots]
        total = sum(self.linear_l[p] for p, c in zip(self.pivots, coords) if c)
        for j, pj in enumerate(self.pivots):
            for k in range(j + 1, len(self.pivots)):
                if coords[j] and coords[k] and self.quadratic_q[pj, self.pivots[k]]:
                    total += 2
        return total % 4

    def support(self) -> list[int]:
        points = [0]
        for b in self.subspace_basis:
            points += [p ^ b for p in points]
        return sorted(self.offset ^ p for p in points)

    def amplitudes(self) -> np.ndarray:
        amps = np.zeros(1 << self.n, dtype=np.complex128)
        scale = self.global_phase / np.sqrt(1 << self.dimension)
        for x in self.support():
            amps[x] = scale * _I_POWERS[self.exponent(x ^ self.offset)]
        return amps


_I_POWERS = (1, 1j, -1, -1j)


def _i_exponent(value: complex) -> int:
    k = int(round(np.angle(value) / (np.pi / 2))) % 4
    if abs(value - abs(value) * 1j**k) > 1e-9:
        raise FitFailure(f"amplitude {value} is not a power of i")
    return k


def decompose_state(c: CheckMatrix, limit: int = DEFAULT_CONFIG.statevec_limit) -> StabilizerDecomposition:
    """Fit the subspace, linear and quadratic parts to the amplitudes of ``c``.

    Raises:
        FitFailure: the reconstruction deviates by more than 1e-12.
    """
    n = c.n
    amps = state_vector(c, limit)
    support = [int(i) for i in np.flatnonzero(np.abs(amps) > 1e-9)]
    offset = support[0]
    global_phase = complex(amps[offset] / abs(amps[offset]))

    independent: list[int] = []
    span: dict[int, int] = {}
    for s in support:
        v = s ^ offset
        if not in_span(span, v):
            independent.append(v)
            span = span_basis(independent)
    reduced, pivots = rref(BitMatrix(tuple(independent), n))
    basis = reduced.rows

    def e(v: int) -> int:
        return _i_exponent(amps[offset ^ v] / global_phase)

    linear = [0] * n
    for b, p in zip(basis, pivots):
        linear[p] = e(b)
    q_rows = [0] * n
    for j, (bj, pj) in enumerate(zip(basis, pivots)):
        for k in range(j + 1, len(basis)):
            bk, pk = basis[k], pivots[k]
            diff = (e(bj ^ bk) - linear[pj] - linear[pk]) % 4
            if diff % 2:
                raise FitFailure(f"odd cross term between basis vectors {j} and {k}")
            if diff == 2:
                q_rows[pj] |= 1 << pk
                q_rows[pk] |= 1 << pj

    result = StabilizerDecomposition(
        n, offset, global_phase, tuple(basis), tuple(pivots), tuple(linear), BitMatrix(tuple(q_rows), n)
    )
    error = float(np.max(np.abs(result.amplitudes() - amps))) if len(amps) else 0.0
    if error >= 1e-12:
        raise FitFailure(f"reconstruction error {error:.3e}")
    return result


# ---------------------------------------------------------------------------
# Rank and minus-sign relations for bipartite graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RankRelationReport:
    """Quantities for the cut ``R | L`` of a bipartite graph with biadjacency ``A``.

    ``schmidt_from_signs`` is ``n - log2(2**(n-1) - w) - 1`` (``None`` when
    ``2**(n-1) - w`` is not a power of two). ``bp`` is ``None`` when the
    partition search exceeded its cap.

    ``rank_rational_is_bp`` is an observation and does not enter
    :attr:`all_hold`: it holds whenever one side has at most three vertices,
    but the 8-cycle cut has rational rank 3 and bp 4.
    """

    n: int
    r: int
    w: int
    support_order: int
    schmidt_rank: int
    schmidt_from_signs: int | None
    rank_xor: int
    rank_rational: int
    bp: int | None
    signs_relation: bool
    support_relation: bool
    bp_bracket: bool | None
    rank_chain: bool | None
    rank_rational_is_bp: bool | None
    conjecture: bool | None

    @property
    def all_hold(self) -> bool:
        return (
            self.signs_relation
            and self.support_relation
            and self.bp_bracket is not False
            and self.rank_chain is not False
        )


def verify_rank_relations(
    g: Graph, part: Iterable[int] | None = None, config: RunConfig = DEFAULT_CONFIG
) -> RankRelationReport:
    """Check the minus-sign, support-group and partition-number relations for one cut.

    ``part`` defaults to the side of the BFS 2-colouring holding vertex 0.

    Raises:
        InvalidPartition: ``g`` is not bipartite across ``part``.
    """
    sides = bipartition(g)
    if sides is None:
        raise InvalidPartition("graph is not bipartite")
    left = set(sides[0]) if part is None else set(part)
    right = set(range(g.n)) - left
    if not left or not right or any(not 0 <= v < g.n for v in left):
        raise InvalidPartition(f"part must be a non-empty proper subset of 0..{g.n - 1}")
    for v in left:
        if any(u in left for u in iter_bits(g.adj[v])):
            raise InvalidPartition("part is not one side of a bipartition")
    for v in right:
        if any(u in right for u in iter_bits(g.adj[v])):
            raise InvalidPartition("complement of part is not independent")

    n, r = g.n, len(left)
    block = g.adjacency_matrix().submatrix(sorted(left), sorted(right))
    w = minus_sign_count(g, config.statevec_limit)
    group = support_subgroup(graph_check_matrix(g), left, config.enumeration_limit)
    order = group.order
    k = r - group.log_order

    gap = 2 ** (n - 1) - w
    from_signs = n - (gap.bit_length() - 1) - 1 if gap > 0 and gap & (gap - 1) == 0 else None
    x_rank = rank_xor(block)
    q_rank = rank_rational(block)
    bp = biclique_partition_number(block, config.bp_cap, limit=config.bp_search_limit)

    bracket = None if bp is None else k <= bp <= r
    chain = None if bp is None else x_rank <= q_rank <= bp <= r
    conjecture = None
    if order == 1:
        conjecture = k == r and 2 * w == 2 ** n - 2 ** (n - r)

    return RankRelationReport(
        n=n,
        r=r,
        w=w,
        support_order=order,
        schmidt_rank=k,
        schmidt_from_signs=from_signs,
        rank_xor=x_rank,
        rank_rational=q_rank,
        bp=bp,
        signs_relation=from_signs == k,
        # |S_R| * 2**(n-r-1) = 2**(n-1) - w, kept in integers
        support_relation=order * 2 ** (n - r - 1) == gap,
        bp_bracket=bracket,
        rank_chain=chain,
        rank_rational_is_bp=None if bp is None else q_rank == bp,
        conjecture=conjecture,
    )
