# SPDX-FileCopyrightText: Copyright (c) 2024 NVIDIA CORPORATION & AFFILIATES. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact sparse linear algebra over GF(2).

Matrices keep their rows as sorted column-index tuples and are immutable. Anything derived from the rows (CSR arrays,
weight profiles, the packed form and the reduced row basis used by :func:`rank` and :func:`in_row_space`) is computed
on first use and cached on the value, so a matrix can be shared read-only between workers.

Indexing is 0-based throughout; the 1-based alist format is converted in :mod:`css_ldpc.harness.files`.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.sparse import csgraph

from css_ldpc import _kernels
from css_ldpc.errors import InvalidArgumentError

BitVec = npt.NDArray[np.uint8]
_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RowBasis:
    """A reduced row-echelon basis of a row space in packed form.

    :cvar rank: The number of basis rows.
    :cvar pivots: The pivot column of every basis row, increasing.
    :cvar words: The packed basis rows, shape ``(rank, n_words)``.
    """

    rank: int
    pivots: np.ndarray
    words: np.ndarray

    def dense(self, n_cols: int) -> np.ndarray:
        """Unpack the basis rows into a ``(rank, n_cols)`` array of bits."""
        return unpack_words(self.words, n_cols)


@dataclass(frozen=True, repr=False)
class SparseBinaryMatrix:
    """An ``n_rows`` by ``n_cols`` matrix over GF(2).

    :cvar n_rows: The number of rows.
    :cvar n_cols: The number of columns.
    :cvar rows: For each row, the strictly increasing column indices of its ones.
    """

    n_rows: int
    n_cols: int
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n_rows < 0 or self.n_cols < 0:
            raise InvalidArgumentError(f"negative shape {self.n_rows}x{self.n_cols}")
        if len(self.rows) != self.n_rows:
            raise InvalidArgumentError(f"expected {self.n_rows} rows, got {len(self.rows)}")
        for idx, row in enumerate(self.rows):
            previous = -1
            for col in row:
                if col <= previous or col >= self.n_cols:
                    raise InvalidArgumentError(
                        f"row {idx} must hold strictly increasing indices in [0, {self.n_cols}), got {row}"
                    )
                previous = col

    def __repr__(self) -> str:
        return f"SparseBinaryMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], n_cols: int) -> "SparseBinaryMatrix":
        """Build a matrix from per-row column indices in any order.

        :raises InvalidArgumentError: If a row repeats an index or an index is out of range.
        """
        normalized = []
        for idx, row in enumerate(rows):
            cols = sorted(int(col) for col in row)
            if len(set(cols)) != len(cols):
                raise InvalidArgumentError(f"row {idx} repeats a column index: {cols}")
            normalized.append(tuple(cols))
        return cls(len(normalized), int(n_cols), tuple(normalized))

    @classmethod
    def from_dense(cls, array: npt.ArrayLike) -> "SparseBinaryMatrix":
        """Build a matrix from a 2-D array of zeros and ones."""
        dense = np.asarray(array)
        if dense.ndim != 2:
            raise InvalidArgumentError(f"expected a 2-D array, got shape {dense.shape}")
        if dense.size and not np.isin(dense, (0, 1)).all():
            raise InvalidArgumentError("dense matrix entries must be 0 or 1")
        rows = tuple(tuple(np.flatnonzero(row).tolist()) for row in dense)
        return cls(dense.shape[0], dense.shape[1], rows)

    def to_dense(self) -> np.ndarray:
        """Return the matrix as a ``uint8`` array."""
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.uint8)
        row_ids = np.repeat(np.arange(self.n_rows), self.row_weights)
        out[row_ids, self.indices] = 1
        return out

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def nnz(self) -> int:
        return int(self.indptr[-1])

    @cached_property
    def indptr(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum([len(row) for row in self.rows], dtype=np.int64))).astype(np.int64)

    @cached_property
    def indices(self) -> np.ndarray:
        flat = [col for row in self.rows for col in row]
        return np.asarray(flat, dtype=np.int64)

    @cached_property
    def row_weights(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def column_weights(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.n_cols).astype(np.int64)

    @cached_property
    def csr(self) -> sparse.csr_matrix:
        data = np.ones(self.nnz, dtype=np.int64)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=self.shape)

    @cached_property
    def edge_index(self) -> Tuple[np.ndarray, np.ndarray]:
        """Variable-side view of the Tanner graph: ``(var_ptr, var_edge)``.

        Edge ids are positions in :attr:`indices`; ``var_edge[var_ptr[v]:var_ptr[v + 1]]`` are the edges of column v.
        """
        var_edge = np.argsort(self.indices, kind="stable").astype(np.int64)
        var_ptr = np.concatenate(([0], np.cumsum(self.column_weights))).astype(np.int64)
        return var_ptr, var_edge

    @property
    def n_words(self) -> int:
        return max(1, (self.n_cols + 63) // 64)

    @cached_property
    def packed(self) -> np.ndarray:
        return _kernels.pack_rows(self.indptr, self.indices, self.n_words)

    @cached_property
    def row_basis(self) -> RowBasis:
        words = self.packed.copy()
        found, pivots = _kernels.rref_inplace(words, self.n_cols)
        _LOGGER.debug("row-reduced %r - rank %d", self, found)
        return RowBasis(int(found), pivots, words[:found].copy())


def unpack_words(words: np.ndarray, n_cols: int) -> np.ndarray:
    """Unpack ``uint64`` rows (1-D or 2-D) into bits."""
    words = np.ascontiguousarray(words, dtype="<u8")
    flat = np.atleast_2d(words)
    bits = np.unpackbits(flat.view(np.uint8).reshape(flat.shape[0], -1), axis=1, bitorder="little")[:, :n_cols]
    return bits[0] if words.ndim == 1 else bits


def as_bitvec(value: npt.ArrayLike, length: int, name: str = "vector") -> BitVec:
    """Validate a 0/1 vector of the given length and return it as ``uint8``.

    :raises InvalidArgumentError: On a shape mismatch or a non-binary entry.
    """
    vec = np.asarray(value)
    if vec.ndim != 1 or vec.shape[0] != length:
        raise InvalidArgumentError(f"{name} must have length {length}, got shape {vec.shape}")
    if vec.size and not np.isin(vec, (0, 1)).all():
        raise InvalidArgumentError(f"{name} must contain only 0 and 1")
    return vec.astype(np.uint8)


def pack_vector(vec: BitVec, n_words: int) -> np.ndarray:
    """Pack a bit vector in the layout of :attr:`SparseBinaryMatrix.packed`."""
    support = np.flatnonzero(vec).astype(np.int64)
    return _kernels.pack_rows(np.array([0, support.shape[0]], dtype=np.int64), support, n_words)[0]


def _from_scipy(matrix: sparse.spmatrix) -> SparseBinaryMatrix:
    csr = sparse.csr_matrix(matrix)
    csr.data %= 2
    csr.eliminate_zeros()
    csr.sort_indices()
    indices = csr.indices.astype(np.int64)
    rows = tuple(tuple(indices[csr.indptr[r] : csr.indptr[r + 1]].tolist()) for r in range(csr.shape[0]))
    return SparseBinaryMatrix(csr.shape[0], csr.shape[1], rows)


def cyclic_matrix(modulus: int, support: Iterable[int]) -> SparseBinaryMatrix:
    """Build the ``modulus`` by ``modulus`` circulant whose row r has ones at ``(s + r) mod modulus``.

    :param modulus: The size M of the matrix.
    :type modulus: int
    :param support: The residues of row 0.
    :type support: Iterable[int]
    :returns: A matrix whose row and column weights all equal ``len(support)``.
    :rtype: SparseBinaryMatrix
    :raises InvalidArgumentError: If the support is empty, repeats a residue, or leaves [0, modulus).
    """
    residues = np.asarray(sorted(int(s) for s in support), dtype=np.int64)
    if modulus < 1:
        raise InvalidArgumentError(f"modulus must be positive, got {modulus}")
    if residues.size == 0:
        raise InvalidArgumentError("support must not be empty")
    if residues[0] < 0 or residues[-1] >= modulus or np.unique(residues).size != residues.size:
        raise InvalidArgumentError(f"support must hold distinct residues in [0, {modulus}), got {residues.tolist()}")
    grid = np.sort((residues[None, :] + np.arange(modulus, dtype=np.int64)[:, None]) % modulus, axis=1)
    return SparseBinaryMatrix(modulus, modulus, tuple(tuple(row) for row in grid.tolist()))


def identity(size: int) -> SparseBinaryMatrix:
    """Return the identity matrix."""
    return SparseBinaryMatrix(size, size, tuple((idx,) for idx in range(size)))


def transpose(matrix: SparseBinaryMatrix) -> SparseBinaryMatrix:
    """Return the transpose; its row weights are the column weights of the input."""
    return _from_scipy(matrix.csr.T)


def hstack(*matrices: SparseBinaryMatrix) -> SparseBinaryMatrix:
    """Place matrices with equal row counts side by side."""
    if not matrices:
        raise InvalidArgumentError("hstack needs at least one matrix")
    n_rows = matrices[0].n_rows
    if any(mat.n_rows != n_rows for mat in matrices):
        raise InvalidArgumentError(f"row counts differ: {[mat.n_rows for mat in matrices]}")
    rows = []
    for idx in range(n_rows):
        offset = 0
        row: list = []
        for mat in matrices:
            row.extend(col + offset for col in mat.rows[idx])
            offset += mat.n_cols
        rows.append(tuple(row))
    return SparseBinaryMatrix(n_rows, sum(mat.n_cols for mat in matrices), tuple(rows))


def select_rows(matrix: SparseBinaryMatrix, rows: Sequence[int]) -> SparseBinaryMatrix:
    """Keep the given rows, in the given order."""
    picked = [int(idx) for idx in rows]
    if any(idx < 0 or idx >= matrix.n_rows for idx in picked):
        raise InvalidArgumentError(f"row index out of range for {matrix!r}")
    return SparseBinaryMatrix(len(picked), matrix.n_cols, tuple(matrix.rows[idx] for idx in picked))


def delete_rows(matrix: SparseBinaryMatrix, rows: Iterable[int]) -> SparseBinaryMatrix:
    """Drop the given rows and keep the rest in order."""
    dropped = {int(idx) for idx in rows}
    return select_rows(matrix, [idx for idx in range(matrix.n_rows) if idx not in dropped])


def delete_columns(matrix: SparseBinaryMatrix, cols: Iterable[int]) -> SparseBinaryMatrix:
    """Drop the given columns and renumber the rest."""
    dropped = np.zeros(matrix.n_cols, dtype=bool)
    dropped[np.asarray(list(cols), dtype=np.int64)] = True
    remap = np.cumsum(~dropped) - 1
    rows = tuple(tuple(int(remap[col]) for col in row if not dropped[col]) for row in matrix.rows)
    return SparseBinaryMatrix(matrix.n_rows, int((~dropped).sum()), rows)


def mul(left: SparseBinaryMatrix, right: SparseBinaryMatrix) -> SparseBinaryMatrix:
    """Multiply two matrices over GF(2).

    :raises InvalidArgumentError: If the inner dimensions differ.
    """
    if left.n_cols != right.n_rows:
        raise InvalidArgumentError(f"cannot multiply {left!r} by {right!r}")
    return _from_scipy(left.csr @ right.csr)


def mul_vec(matrix: SparseBinaryMatrix, vec: npt.ArrayLike) -> BitVec:
    """Multiply a matrix by a bit vector over GF(2)."""
    bits = as_bitvec(vec, matrix.n_cols)
    return ((matrix.csr @ bits.astype(np.int64)) % 2).astype(np.uint8)


def syndrome(matrix: SparseBinaryMatrix, error: npt.ArrayLike) -> BitVec:
    """Return ``H e`` over GF(2); it is zero iff ``e`` is a codeword of the code ``H`` defines."""
    return mul_vec(matrix, error)


def is_self_orthogonal(matrix: SparseBinaryMatrix) -> bool:
    """Check ``H Hᵀ = 0``: every row has even weight and every pair of rows an even overlap."""
    gram = matrix.csr @ matrix.csr.T
    return not np.any(gram.data % 2)


def rank(matrix: SparseBinaryMatrix) -> int:
    """Return the GF(2) rank."""
    return matrix.row_basis.rank


def reduce_vector(matrix: SparseBinaryMatrix, vec: npt.ArrayLike) -> BitVec:
    """Reduce a vector against the row basis.

    Two vectors reduce to the same result iff they differ by an element of the row space.
    """
    bits = as_bitvec(vec, matrix.n_cols)
    basis = matrix.row_basis
    reduced = _kernels.reduce_packed(basis.words, basis.pivots, pack_vector(bits, matrix.n_words))
    return unpack_words(reduced, matrix.n_cols)


def in_row_space(matrix: SparseBinaryMatrix, vec: npt.ArrayLike) -> bool:
    """Check whether a vector is a GF(2) combination of the rows.

    :raises InvalidArgumentError: If the length differs from the column count.
    """
    bits = as_bitvec(vec, matrix.n_cols)
    if not bits.any():
        return True
    basis = matrix.row_basis
    reduced = _kernels.reduce_packed(basis.words, basis.pivots, pack_vector(bits, matrix.n_words))
    return not reduced.any()


def independent_rows(matrix: SparseBinaryMatrix) -> SparseBinaryMatrix:
    """Keep, in order, every row that is not in the span of the rows kept before it."""
    keep = _kernels.independent_mask(matrix.packed)
    return select_rows(matrix, np.flatnonzero(keep).tolist())


def is_connected(matrix: SparseBinaryMatrix) -> bool:
    """Check that the Tanner graph (rows and columns as nodes) has a single component."""
    n_nodes = matrix.n_rows + matrix.n_cols
    if n_nodes == 0:
        return False
    row_ids = np.repeat(np.arange(matrix.n_rows), matrix.row_weights)
    graph = sparse.coo_matrix(
        (np.ones(matrix.nnz), (row_ids, matrix.n_rows + matrix.indices)), shape=(n_nodes, n_nodes)
    )
    n_components, _ = csgraph.connected_components(graph, directed=False)
    return int(n_components) == 1
