"""Stabilizer groups in the binary (x | z) picture.

A Pauli operator on ``n`` qubits is stored as ``i**phase`` times a tensor
product of letters, where the letter on qubit ``q`` is read from bit ``q`` of
``xbits`` and ``zbits``: ``(0,0)=I``, ``(1,0)=X``, ``(1,1)=Y``, ``(0,1)=Z``.
``Y`` is the Hermitian Pauli (``Y = iXZ``), so every element of a stabilizer
group of a pure state has ``phase`` 0 or 2.

Computational basis index ``b`` has qubit ``q`` in state ``(b >> q) & 1``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

import numpy as np

from config import DEFAULT_CONFIG
from errors import (
    DisconnectedGraph,
    InvalidPartition,
    MalformedCheckMatrix,
    ParseError,
    ResourceLimit,
    VertexOutOfRange,
)
from gf2linalg import (
    BitMatrix,
    bits_to_int,
    in_span,
    iter_bits,
    popcount,
    rank_xor,
    solve_xor,
    span_basis,
)
from graphcore import Graph, is_connected

logger = logging.getLogger(__name__)

_SIGNS = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_SIGN_PHASE = {"+": 0, "+i": 1, "-": 2, "-i": 3, "": 0}
_PAULI_RE = re.compile(r"^([+-]i?)?([IXYZ]*)$")


@dataclass(frozen=True, slots=True)
class PauliElement:
    n: int
    xbits: int
    zbits: int
    phase: int = 0

    def __post_init__(self) -> None:
        mask = (1 << self.n) - 1
        if (self.xbits | self.zbits) & ~mask:
            raise VertexOutOfRange(f"Pauli letters outside 0..{self.n - 1}")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> PauliElement:
        return cls(n, 0, 0, 0)

    @classmethod
    def parse(cls, text: str) -> PauliElement:
        """Read ``[sign]letters`` such as ``+XZZ``, ``-iYI`` or ``ZX``."""
        match = _PAULI_RE.match(text.strip())
        if match is None:
            raise ParseError(f"not a Pauli string: {text!r}")
        sign, letters = match.group(1) or "", match.group(2)
        x = bits_to_int(q for q, ch in enumerate(letters) if ch in "XY")
        z = bits_to_int(q for q, ch in enumerate(letters) if ch in "YZ")
        return cls(len(letters), x, z, _SIGN_PHASE[sign])

    def __str__(self) -> str:
        return _SIGNS[self.phase] + "".join(self.letter(q) for q in range(self.n))

    @property
    def support(self) -> int:
        """Bit mask of qubits carrying a non-identity letter."""
        return self.xbits | self.zbits

    @property
    def weight(self) -> int:
        return popcount(self.support)

    @property
    def packed(self) -> int:
        """Length-``2n`` binary vector ``x | z << n``."""
        return self.xbits | (self.zbits << self.n)

    def is_identity(self) -> bool:
        return not self.support

    def letter(self, q: int) -> str:
        return "IZXY"[((self.xbits >> q) & 1) * 2 + ((self.zbits >> q) & 1)]

    def commutes(self, other: PauliElement) -> bool:
        return popcount((self.xbits & other.zbits) ^ (self.zbits & other.xbits)) % 2 == 0

    def multiply(self, other: PauliElement) -> PauliElement:
        """Operator product ``self * other`` with the phase tracked exactly."""
        x1, z1, x2, z2 = self.xbits, self.zbits, other.xbits, other.zbits
        X1, Y1, Z1 = x1 & ~z1, x1 & z1, ~x1 & z1
        X2, Y2, Z2 = x2 & ~z2, x2 & z2, ~x2 & z2
        # XY = iZ, YZ = iX, ZX = iY; the reversed orders pick up -i
        plus = popcount(X1 & Y2) + popcount(Y1 & Z2) + popcount(Z1 & X2)
        minus = popcount(X1 & Z2) + popcount(Y1 & X2) + popcount(Z1 & Y2)
        return PauliElement(self.n, x1 ^ x2, z1 ^ z2, self.phase + other.phase + plus - minus)

    __mul__ = multiply

    def negated(self) -> PauliElement:
        return PauliElement(self.n, self.xbits, self.zbits, self.phase + 2)


# ---------------------------------------------------------------------------
# Check matrices and their text format
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CheckMatrix:
    """Independent, pairwise commuting generators with real signs."""

    n: int
    rows: tuple[PauliElement, ...]

    def __post_init__(self) -> None:
        for i, row in enumerate(self.rows):
            if row.n != self.n:
                raise MalformedCheckMatrix(f"generator {i} acts on {row.n} qubits, expected {self.n}")
            if row.phase % 2:
                raise MalformedCheckMatrix(f"generator {i} has an imaginary sign")
            if row.is_identity():
                raise MalformedCheckMatrix(f"generator {i} is the identity")
        if len(self.rows) > self.n:
            raise MalformedCheckMatrix(f"{len(self.rows)} generators on {self.n} qubits")
        for i, a in enumerate(self.rows):
            for j in range(i + 1, len(self.rows)):
                if not a.commutes(self.rows[j]):
                    raise MalformedCheckMatrix(f"generators {i} and {j} anticommute")
        if rank_xor(self.binary()) != len(self.rows):
            raise MalformedCheckMatrix("generators are not independent")

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> CheckMatrix:
        rows = tuple(PauliElement.parse(line) for line in lines)
        if not rows:
            raise ParseError("no generators")
        return cls(rows[0].n, rows)

    @property
    def is_state(self) -> bool:
        """True when the generators fix a single state (``n`` of them)."""
        return len(self.rows) == self.n

    def binary(self) -> BitMatrix:
        return BitMatrix(tuple(p.packed for p in self.rows), 2 * self.n)

    def x_block(self) -> BitMatrix:
        return BitMatrix(tuple(p.xbits for p in self.rows), self.n)

    def z_block(self) -> BitMatrix:
        return BitMatrix(tuple(p.zbits for p in self.rows), self.n)

    def __str__(self) -> str:
        return format_check_matrix(self)


def parse_check_matrix(text: str) -> CheckMatrix:
    """One generator per line; blank lines and ``#`` comments are skipped."""
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    rows = [PauliElement.parse(line) for line in lines]
    if not rows:
        raise ParseError("stabilizer text holds no generators")
    if len({p.n for p in rows}) != 1:
        raise ParseError("generators have different lengths")
    return CheckMatrix(rows[0].n, tuple(rows))


def format_check_matrix(c: CheckMatrix) -> str:
    return "\n".join(str(p) for p in c.rows) + "\n"


def graph_check_matrix(g: Graph) -> CheckMatrix:
    """``[I | Gamma]``: row ``a`` is ``X_a`` times ``Z`` on every neighbour of ``a``."""
    rows = tuple(PauliElement(g.n, 1 << a, g.adj[a]) for a in range(g.n))
    return CheckMatrix(g.n, rows)


# ---------------------------------------------------------------------------
# Group membership without enumeration
# ---------------------------------------------------------------------------


def _combination(c: CheckMatrix, packed: int) -> int | None:
    """Mask of generators whose product has binary vector ``packed``."""
    basis: dict[int, tuple[int, int]] = {}
    for i, row in enumerate(c.rows):
        v, combo = row.packed, 1 << i
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = (v, combo)
                break
            bv, bc = basis[top]
            v, combo = v ^ bv, combo ^ bc
    combo = 0
    while packed:
        top = packed.bit_length() - 1
        if top not in basis:
            return None
        bv, bc = basis[top]
        packed, combo = packed ^ bv, combo ^ bc
    return combo


def product_of(c: CheckMatrix, mask: int) -> PauliElement:
    """Product of the generators selected by ``mask``, in row order."""
    result = PauliElement.identity(c.n)
    for i in iter_bits(mask):
        result = result * c.rows[i]
    return result


def stabilizer_contains(c: CheckMatrix, p: PauliElement) -> bool:
    """Exact membership of ``p`` (sign included) in the group generated by ``c``."""
    if p.n != c.n:
        return False
    combo = _combination(c, p.packed)
    return combo is not None and product_of(c, combo) == p


def same_stabilizer(c1: CheckMatrix, c2: CheckMatrix) -> bool:
    return (
        c1.n == c2.n
        and len(c1.rows) == len(c2.rows)
        and all(stabilizer_contains(c1, p) for p in c2.rows)
    )


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class StabilizerGroup:
    n: int
    elements: tuple[PauliElement, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[PauliElement]:
        return iter(self.elements)

    def __contains__(self, p: object) -> bool:
        return p in self.elements

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def log_order(self) -> int:
        return self.order.bit_length() - 1


def _check_enumeration(n: int, limit: int) -> None:
    if n > limit:
        raise ResourceLimit("enumeration_limit", limit, n)


def enumerate_stabilizer(
    c: CheckMatrix, limit: int = DEFAULT_CONFIG.enumeration_limit
) -> StabilizerGroup:
    """All ``2**m`` products; element ``s`` is the product of generators in mask ``s``."""
    _check_enumeration(c.n, limit)
    elements = [PauliElement.identity(c.n)]
    for s in range(1, 1 << len(c.rows)):
        low = (s & -s).bit_length() - 1
        elements.append(c.rows[low] * elements[s & (s - 1)])
    logger.debug("enumerated %d stabilizer elements on %d qubits", len(elements), c.n)
    return StabilizerGroup(c.n, tuple(elements))


def distance(c: CheckMatrix, limit: int = DEFAULT_CONFIG.enumeration_limit) -> int:
    """Minimum weight over the non-identity elements."""
    group = enumerate_stabilizer(c, limit)
    weights = [p.weight for p in group if not p.is_identity()]
    if not weights:
        raise MalformedCheckMatrix("the group has no non-identity element")
    return min(weights)


def _minimal_supports(group: StabilizerGroup) -> list[int]:
    supports = sorted({p.support for p in group if p.support}, key=lambda s: (popcount(s), s))
    minimal: list[int] = []
    for s in supports:
        # a non-minimal support strictly contains some minimal one
        if not any(m & s == m for m in minimal):
            minimal.append(s)
    return minimal


def minimal_elements(
    c: CheckMatrix, limit: int = DEFAULT_CONFIG.enumeration_limit
) -> list[PauliElement]:
    """Elements whose support strictly contains no other element's support."""
    group = enumerate_stabilizer(c, limit)
    minimal = set(_minimal_supports(group))
    return [p for p in group if p.support in minimal]


def minimal_subgroup(
    c: CheckMatrix, limit: int = DEFAULT_CONFIG.enumeration_limit
) -> StabilizerGroup:
    group = enumerate_stabilizer(c, limit)
    minimal = set(_minimal_supports(group))
    # group elements are fixed by their binary vector, so the generated
    # subgroup is everything whose vector lies in the span
    basis = span_basis(p.packed for p in group if p.support in minimal)
    return StabilizerGroup(c.n, tuple(p for p in group if in_span(basis, p.packed)))


def is_fully_connected(c: CheckMatrix) -> bool:
    """True iff the state does not factor into a product across any cut."""
    from reduction import reduce_to_graph  # reduction builds on this module

    if c.n <= 1:
        return True
    graph, _ = reduce_to_graph(c)
    return is_connected(graph)


def check_msc(c: CheckMatrix, limit: int = DEFAULT_CONFIG.enumeration_limit) -> bool:
    """Minimal Support Condition: X, Y and Z all occur on every qubit of the minimal subgroup.

    Graph states with a leaf fail it once ``n > 2``. The Bell pair is the
    exception: both qubits are leaves and ``XZ``, ``ZX`` and ``YY`` are all minimal.
    """
    _check_enumeration(c.n, limit)
    if not c.is_state:
        raise MalformedCheckMatrix("the MSC is defined for stabilizer states")
    if not is_fully_connected(c):
        raise DisconnectedGraph("the MSC is only defined for fully connected states")
    subgroup = minimal_subgroup(c, limit)
    for q in range(c.n):
        letters = {p.letter(q) for p in subgroup}
        if not {"X", "Y", "Z"} <= letters:
            logger.debug("MSC fails at qubit %d: letters %s", q, sorted(letters))
            return False
    return True


def support_subgroup(
    c: CheckMatrix, part: Iterable[int], limit: int = DEFAULT_CONFIG.enumeration_limit
) -> StabilizerGroup:
    """Elements supported inside ``part`` (always a subgroup)."""
    mask = bits_to_int(part)
    if mask >> c.n:
        raise VertexOutOfRange(f"part has qubits outside 0..{c.n - 1}")
    group = enumerate_stabilizer(c, limit)
    return StabilizerGroup(c.n, tuple(p for p in group if p.support & ~mask == 0))


def schmidt_rank(
    state: Graph | CheckMatrix, part: Iterable[int], limit: int = DEFAULT_CONFIG.enumeration_limit
) -> int:
    """``|R| - log2 |S_R|`` for the cut ``R | V \\ R``."""
    c = graph_check_matrix(state) if isinstance(state, Graph) else state
    part = set(part)
    if not part or len(part) >= c.n or any(not 0 <= q < c.n for q in part):
        raise InvalidPartition(f"part must be a non-empty proper subset of 0..{c.n - 1}")
    return len(part) - support_subgroup(c, part, limit).log_order


# ---------------------------------------------------------------------------
# Amplitudes
# ---------------------------------------------------------------------------


_I_POWERS = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def _check_statevec(n: int, limit: int) -> None:
    if n > limit:
        raise ResourceLimit("statevec_limit", limit, n)


def _popcount_array(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint64)
    a = a - ((a >> np.uint64(1)) & np.uint64(0x5555555555555555))
    a = (a & np.uint64(0x3333333333333333)) + ((a >> np.uint64(2)) & np.uint64(0x3333333333333333))
    a = (a + (a >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return ((a * np.uint64(0x0101010101010101)) >> np.uint64(56)).astype(np.int64)


def graph_state_vector(g: Graph, limit: int = DEFAULT_CONFIG.statevec_limit) -> np.ndarray:
    """Exact signs ``(-1)**(edges inside x)`` as an ``int8`` array (unnormalized)."""
    _check_statevec(g.n, limit)
    idx = np.arange(1 << g.n, dtype=np.int64)
    parity = np.zeros(1 << g.n, dtype=np.int64)
    for u, v in g.edges():
        parity ^= (idx >> u) & (idx >> v) & 1
    return np.where(parity == 1, -1, 1).astype(np.int8)


def minus_sign_count(g: Graph, limit: int = DEFAULT_CONFIG.statevec_limit) -> int:
    return int(np.count_nonzero(graph_state_vector(g, limit) < 0))


def state_vector(c: CheckMatrix, limit: int = DEFAULT_CONFIG.statevec_limit) -> np.ndarray:
    """Normalized amplitudes of the stabilized state.

    Applies the projector ``2**-n * sum(g)`` to a basis state inside the
    support, then fixes the global phase so the lowest-index nonzero
    amplitude is real and positive.
    """
    _check_statevec(c.n, limit)
    if not c.is_state:
        raise MalformedCheckMatrix(f"{len(c.rows)} generators do not fix a state on {c.n} qubits")
    group = enumerate_stabilizer(c, max(limit, c.n))

    # reference basis state: every diagonal element must act as +1 on it
    diagonal = [p for p in group if p.xbits == 0 and p.zbits]
    reference = 0
    if diagonal:
        solved = solve_xor(BitMatrix(tuple(p.zbits for p in diagonal), c.n), [p.phase // 2 for p in diagonal])
        if solved is None:
            raise MalformedCheckMatrix("generators are inconsistent")
        reference = solved

    xs = np.array([p.xbits for p in group], dtype=np.int64)
    zs = np.array([p.zbits for p in group], dtype=np.int64)
    ks = np.array([p.phase for p in group], dtype=np.int64)
    exponent = (ks + _popcount_array(xs & zs) + 2 * _popcount_array(zs & reference)) % 4
    amps = np.zeros(1 << c.n, dtype=np.complex128)
    np.add.at(amps, xs ^ reference, _I_POWERS[exponent])

    lead = amps[np.flatnonzero(np.abs(amps) > 1e-9)[0]]
    amps *= np.conj(lead) / abs(lead)
    amps /= np.linalg.norm(amps)
    amps[np.abs(amps) < 1e-15] = 0
    return amps


# ---------------------------------------------------------------------------
# Single-qubit Cliffords
# ---------------------------------------------------------------------------


class Gate(str, Enum):
    H = "H"
    S = "S"
    SDG = "SDG"
    X = "X"
    Y = "Y"
    Z = "Z"
    SQRT_X = "SQRT_X"  # exp(-i pi/4 X)
    SQRT_X_DG = "SQRT_X_DG"


# letter -> (sign exponent in i, new letter) under U P U^dagger
_CONJUGATION: dict[Gate, dict[str, tuple[int, str]]] = {
    Gate.H: {"X": (0, "Z"), "Y": (2, "Y"), "Z": (0, "X")},
    Gate.S: {"X": (0, "Y"), "Y": (2, "X"), "Z": (0, "Z")},
    Gate.SDG: {"X": (2, "Y"), "Y": (0, "X"), "Z": (0, "Z")},
    Gate.X: {"X": (0, "X"), "Y": (2, "Y"), "Z": (2, "Z")},
    Gate.Y: {"X": (2, "X"), "Y": (0, "Y"), "Z": (2, "Z")},
    Gate.Z: {"X": (2, "X"), "Y": (2, "Y"), "Z": (0, "Z")},
    Gate.SQRT_X: {"X": (0, "X"), "Y": (0, "Z"), "Z": (2, "Y")},
    Gate.SQRT_X_DG: {"X": (0, "X"), "Y": (2, "Z"), "Z": (0, "Y")},
}

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def conjugate_pauli(p: PauliElement, q: int, gate: Gate | str) -> PauliElement:
    letter = p.letter(q)
    if letter == "I":
        return p
    sign, new = _CONJUGATION[Gate(gate)][letter]
    xb, zb = _LETTER_BITS[new]
    bit = 1 << q
    x = (p.xbits & ~bit) | (bit if xb else 0)
    z = (p.zbits & ~bit) | (bit if zb else 0)
    return PauliElement(p.n, x, z, p.phase + sign)


def apply_single_qubit_clifford(c: CheckMatrix, q: int, gate: Gate | str) -> CheckMatrix:
    """Conjugate every generator by ``gate`` acting on qubit ``q``."""
    if not 0 <= q < c.n:
        raise VertexOutOfRange(f"qubit {q} not in 0..{c.n - 1}")
    return CheckMatrix(c.n, tuple(conjugate_pauli(p, q, gate) for p in c.rows))


def apply_clifford_word(c: CheckMatrix, word: Iterable[tuple[int, Gate | str]]) -> CheckMatrix:
    """Apply ``(qubit, gate)`` pairs left to right."""
    for q, gate in word:
        c = apply_single_qubit_clifford(c, q, gate)
    return c
