"""Row reduction over F_p on numpy int64 matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


CHUNK_ROWS = 256


def to_gfp(matrix: np.ndarray, p: int) -> np.ndarray:
    return np.asarray(matrix, dtype=np.int64) % p


@dataclass(frozen=True)
class RowReduceResult:
    """Reduced echelon basis: pivot entries 1, zero elsewhere in pivot columns."""

    matrix: np.ndarray
    rank: int
    pivots: tuple[int, ...]

    @classmethod
    def zero(cls, n: int) -> RowReduceResult:
        return cls(matrix=np.zeros((0, n), dtype=np.int64), rank=0, pivots=())

    @classmethod
    def full(cls, n: int) -> RowReduceResult:
        return cls(matrix=np.eye(n, dtype=np.int64), rank=n, pivots=tuple(range(n)))

    @property
    def width(self) -> int:
        return int(self.matrix.shape[1])

    def same_space(self, other: RowReduceResult) -> bool:
        return self.pivots == other.pivots and np.array_equal(self.matrix, other.matrix)


def row_reduce(matrix: np.ndarray, p: int) -> RowReduceResult:
    mat = to_gfp(matrix, p).copy()
    m, n = mat.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(mat[row:, col])
        if nz.size == 0:
            continue
        pivot = row + int(nz[0])
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        inv = pow(int(mat[row, col]), -1, p)
        mat[row] = (mat[row] * inv) % p
        factors = mat[:, col].copy()
        factors[row] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            mat[hit] = (mat[hit] - np.outer(factors[hit], mat[row])) % p
        pivots.append(col)
        row += 1
    return RowReduceResult(matrix=mat[:row], rank=row, pivots=tuple(pivots))


def reduce_rows(vectors: np.ndarray, basis: RowReduceResult, p: int) -> np.ndarray:
    """Remainders of vectors modulo the row space of basis."""
    vecs = to_gfp(vectors, p)
    if basis.rank == 0 or vecs.shape[0] == 0:
        return vecs
    coeffs = vecs[:, list(basis.pivots)]
    return (vecs - coeffs @ basis.matrix) % p


def contains(basis: RowReduceResult, vector: np.ndarray, p: int) -> bool:
    rest = reduce_rows(np.atleast_2d(vector), basis, p)
    return not rest.any()


def extend(basis: RowReduceResult, vectors: np.ndarray, p: int) -> RowReduceResult:
    """Row space of basis plus vectors, processed in chunks against the growing basis."""
    vecs = to_gfp(vectors, p)
    for start in range(0, vecs.shape[0], CHUNK_ROWS):
        if basis.rank == basis.width:
            break
        rest = reduce_rows(vecs[start : start + CHUNK_ROWS], basis, p)
        rest = rest[rest.any(axis=1)]
        if rest.shape[0] == 0:
            continue
        rest = np.unique(rest, axis=0)
        basis = row_reduce(np.vstack([basis.matrix, rest]), p)
    return basis


def span(vectors: np.ndarray, p: int) -> RowReduceResult:
    vecs = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    return extend(RowReduceResult.zero(vecs.shape[1]), vecs, p)
