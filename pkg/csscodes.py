"""Biclique states as CSS codes and classical code distances."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

from config import DEFAULT_CONFIG
from errors import ConsistencyError, InvalidParam, ParseError, ResourceLimit
from gf2linalg import BitMatrix, kernel_xor, popcount
from graphcore import FamilyKind, family
from stabilizer import CheckMatrix, Gate, PauliElement, apply_clifford_word, graph_check_matrix, same_stabilizer

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ClassicalCode:
    parity_check: BitMatrix

    @property
    def length(self) -> int:
        return self.parity_check.cols


def parse_parity_check(text: str) -> BitMatrix:
    try:
        return BitMatrix.from_text(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def format_parity_check(h: BitMatrix) -> str:
    return h.to_text() + "\n"


def biclique_css_form(m: int, n: int) -> CheckMatrix:
    """``[[I_m A | 0 0], [0 0 | A^T I_n]]`` with ``A`` the all-ones ``m x n`` block.

    This is the stabilizer of ``Biclique(m, n)`` after a Hadamard on each
    right vertex; qubit order is unchanged (left block first).
    """
    if m < 1 or n < 1:
        raise InvalidParam("biclique sides must be at least 1")
    total = m + n
    left = (1 << m) - 1
    right = ((1 << n) - 1) << m
    x_rows = [PauliElement(total, (1 << i) | right, 0) for i in range(m)]
    z_rows = [PauliElement(total, 0, left | (1 << (m + j))) for j in range(n)]
    form = CheckMatrix(total, tuple(x_rows + z_rows))

    conjugated = apply_clifford_word(
        graph_check_matrix(family(FamilyKind.BICLIQUE, m, n)), [(q, Gate.H) for q in range(m, total)]
    )
    if not same_stabilizer(form, conjugated):
        raise ConsistencyError("CSS form does not match the Hadamard-conjugated biclique")
    return form


def css_parity_checks(c: CheckMatrix) -> tuple[ClassicalCode, ClassicalCode]:
    """``(H(C), H(C_perp))`` read from the X-type and Z-type rows of a CSS matrix."""
    x_type = [p.xbits for p in c.rows if p.zbits == 0]
    z_type = [p.zbits for p in c.rows if p.xbits == 0]
    if len(x_type) + len(z_type) != len(c.rows):
        raise InvalidParam("check matrix mixes X and Z letters within a row")
    return ClassicalCode(BitMatrix(tuple(x_type), c.n)), ClassicalCode(BitMatrix(tuple(z_type), c.n))


def code_distance(code: ClassicalCode, kernel_limit: int = DEFAULT_CONFIG.kernel_limit) -> int | None:
    """Minimum weight of a nonzero codeword; ``None`` when the kernel is trivial."""
    basis = kernel_xor(code.parity_check)
    if not basis:
        return None
    if len(basis) > kernel_limit:
        raise ResourceLimit("kernel_limit", kernel_limit, len(basis))
    best = code.length + 1
    word = 0
    # Gray-code walk over every nonzero kernel vector
    for i in range(1, 1 << len(basis)):
        word ^= basis[(i & -i).bit_length() - 1]
        best = min(best, popcount(word))
    return best


def dependent_column_distance(h: BitMatrix) -> int | None:
    """Fewest columns of ``h`` summing to zero, or ``None`` if all are independent."""
    columns = [h.column(j) for j in range(h.cols)]
    for size in range(1, h.cols + 1):
        for subset in combinations(columns, size):
            total = 0
            for col in subset:
                total ^= col
            if total == 0:
                return size
    return None


@dataclass(frozen=True, slots=True)
class CssClaim:
    m: int
    n: int
    distance: int | None
    dual_distance: int | None
    branch: str  # "distance" when n >= 2, "dual" when n == 1

    @property
    def minimum(self) -> int | None:
        found = [d for d in (self.distance, self.dual_distance) if d is not None]
        return min(found) if found else None

    @property
    def holds(self) -> bool:
        branch_value = self.distance if self.branch == "distance" else self.dual_distance
        return self.minimum == 2 and branch_value == 2


def css_claim_check(m: int, n: int, kernel_limit: int = DEFAULT_CONFIG.kernel_limit) -> CssClaim:
    """Distances of ``H(C) = [I_m | A]`` and ``H(C_perp) = [A^T | I_n]``."""
    code, dual = css_parity_checks(biclique_css_form(m, n))
    claim = CssClaim(
        m,
        n,
        code_distance(code, kernel_limit),
        code_distance(dual, kernel_limit),
        "distance" if n >= 2 else "dual",
    )
    logger.debug("css (%d, %d): d=%s, dual d=%s", m, n, claim.distance, claim.dual_distance)
    return claim
