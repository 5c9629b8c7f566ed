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

"""Tests for the GF(2) sparse matrix layer."""
import numpy as np
import pytest
from numpy.testing import assert_array_equal

from css_ldpc import gf2core, pauli
from css_ldpc.errors import InvalidArgumentError
from css_ldpc.gf2core import SparseBinaryMatrix


def _random_dense(rng: np.random.Generator, shape, density: float = 0.3) -> np.ndarray:
    return (rng.random(shape) < density).astype(np.uint8)


def test_cyclic_matrix_rows_are_shifts() -> None:
    c = gf2core.cyclic_matrix(7, [0, 1, 3])
    assert c.rows[0] == (0, 1, 3)
    assert c.rows[1] == (1, 2, 4)
    assert c.rows[6] == (0, 2, 6)
    assert_array_equal(c.row_weights, np.full(7, 3))
    assert_array_equal(c.column_weights, np.full(7, 3))


def test_cyclic_transpose_is_negated_support() -> None:
    c = gf2core.cyclic_matrix(13, [0, 3, 5, 12])
    negated = gf2core.cyclic_matrix(13, [(-s) % 13 for s in (0, 3, 5, 12)])
    assert gf2core.transpose(c) == negated


@pytest.mark.parametrize("support", [[], [0, 0], [7], [-1, 2]])
def test_cyclic_matrix_rejects_bad_support(support) -> None:
    with pytest.raises(InvalidArgumentError):
        gf2core.cyclic_matrix(7, support)


def test_from_rows_sorts_and_validates() -> None:
    mat = SparseBinaryMatrix.from_rows([[3, 1], [0]], 4)
    assert mat.rows == ((1, 3), (0,))
    with pytest.raises(InvalidArgumentError):
        SparseBinaryMatrix.from_rows([[1, 1]], 4)
    with pytest.raises(InvalidArgumentError):
        SparseBinaryMatrix.from_rows([[4]], 4)


def test_dense_round_trip(rng) -> None:
    dense = _random_dense(rng, (9, 14))
    mat = SparseBinaryMatrix.from_dense(dense)
    assert_array_equal(mat.to_dense(), dense)
    assert mat.nnz == int(dense.sum())
    assert_array_equal(mat.column_weights, dense.sum(axis=0))


def test_mul_matches_dense(rng) -> None:
    left = _random_dense(rng, (6, 8))
    right = _random_dense(rng, (8, 5))
    product = gf2core.mul(SparseBinaryMatrix.from_dense(left), SparseBinaryMatrix.from_dense(right))
    assert_array_equal(product.to_dense(), (left.astype(int) @ right) % 2)


def test_mul_rejects_shape_mismatch() -> None:
    with pytest.raises(InvalidArgumentError):
        gf2core.mul(gf2core.identity(3), gf2core.identity(4))


def test_syndrome_and_length_check(rng) -> None:
    dense = _random_dense(rng, (5, 11))
    error = _random_dense(rng, (11,))
    mat = SparseBinaryMatrix.from_dense(dense)
    assert_array_equal(gf2core.syndrome(mat, error), (dense.astype(int) @ error) % 2)
    with pytest.raises(InvalidArgumentError):
        gf2core.syndrome(mat, np.zeros(10, dtype=np.uint8))


def test_steane_matrix_is_self_orthogonal() -> None:
    h = SparseBinaryMatrix.from_dense(
        [[0, 0, 0, 1, 1, 1, 1], [0, 1, 1, 0, 0, 1, 1], [1, 0, 1, 0, 1, 0, 1]]
    )
    assert gf2core.is_self_orthogonal(h)
    assert gf2core.rank(h) == 3
    assert not gf2core.is_self_orthogonal(SparseBinaryMatrix.from_dense([[1, 1, 1]]))


def test_steane_single_errors_read_their_position() -> None:
    h = pauli.steane_parity_check()
    for j in range(7):
        error = np.zeros(7, dtype=np.uint8)
        error[j] = 1
        syn = gf2core.syndrome(h, error)
        assert int(syn[0]) * 4 + int(syn[1]) * 2 + int(syn[2]) == j + 1


def test_bicycle_pair_is_always_self_orthogonal(rng) -> None:
    for _ in range(120):
        modulus = int(rng.integers(2, 60))
        support = rng.choice(modulus, int(rng.integers(1, modulus + 1)), replace=False)
        c = gf2core.cyclic_matrix(modulus, support.tolist())
        h = gf2core.hstack(c, gf2core.transpose(c))
        assert gf2core.is_self_orthogonal(h)
        dense = h.to_dense().astype(np.int64)
        assert not np.any((dense @ dense.T) % 2)


def test_rank_survives_row_permutation_and_row_addition(rng) -> None:
    for _ in range(60):
        n_rows, n_cols = int(rng.integers(2, 16)), int(rng.integers(2, 30))
        dense = _random_dense(rng, (n_rows, n_cols), density=float(rng.uniform(0.1, 0.6)))
        expected = gf2core.rank(SparseBinaryMatrix.from_dense(dense))
        shuffled = dense[rng.permutation(n_rows)]
        assert gf2core.rank(SparseBinaryMatrix.from_dense(shuffled)) == expected
        target, source = rng.choice(n_rows, 2, replace=False)
        added = dense.copy()
        added[target] ^= dense[source]
        assert gf2core.rank(SparseBinaryMatrix.from_dense(added)) == expected


def test_syndrome_is_linear(rng) -> None:
    for _ in range(50):
        n_cols = int(rng.integers(1, 40))
        mat = SparseBinaryMatrix.from_dense(_random_dense(rng, (int(rng.integers(1, 12)), n_cols)))
        a = _random_dense(rng, (n_cols,), density=0.5)
        b = _random_dense(rng, (n_cols,), density=0.5)
        assert_array_equal(gf2core.syndrome(mat, a ^ b), gf2core.syndrome(mat, a) ^ gf2core.syndrome(mat, b))


def test_in_row_space_matches_the_enumerated_span(rng) -> None:
    n_cols = 8
    every_word = ((np.arange(2**n_cols)[:, None] >> np.arange(n_cols)) & 1).astype(np.uint8)
    for _ in range(20):
        n_rows = int(rng.integers(1, 13))
        dense = _random_dense(rng, (n_rows, n_cols), density=float(rng.uniform(0.1, 0.5)))
        mat = SparseBinaryMatrix.from_dense(dense)
        coeffs = (np.arange(2**n_rows)[:, None] >> np.arange(n_rows)) & 1
        span = {tuple(word) for word in ((coeffs @ dense.astype(np.int64)) % 2).tolist()}
        for word in every_word:
            assert gf2core.in_row_space(mat, word) == (tuple(word.tolist()) in span)


def test_rank_of_duplicated_rows() -> None:
    base = SparseBinaryMatrix.from_dense([[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0]])
    assert gf2core.rank(base) == 2
    assert gf2core.rank(gf2core.identity(70)) == 70
    assert gf2core.rank(SparseBinaryMatrix(0, 5, ())) == 0


def test_rank_of_wide_random_matrix_matches_galois(rng) -> None:
    galois = pytest.importorskip("galois")
    dense = _random_dense(rng, (40, 150), density=0.05)
    expected = np.linalg.matrix_rank(galois.GF2(dense))
    assert gf2core.rank(SparseBinaryMatrix.from_dense(dense)) == expected


def test_in_row_space_and_reduce_vector() -> None:
    h = SparseBinaryMatrix.from_dense([[1, 1, 0, 0, 0], [0, 0, 1, 1, 0]])
    assert gf2core.in_row_space(h, [1, 1, 1, 1, 0])
    assert gf2core.in_row_space(h, [0, 0, 0, 0, 0])
    assert not gf2core.in_row_space(h, [1, 0, 0, 0, 0])
    assert_array_equal(gf2core.reduce_vector(h, [1, 0, 0, 0, 0]), gf2core.reduce_vector(h, [0, 1, 0, 0, 0]))
    with pytest.raises(InvalidArgumentError):
        gf2core.in_row_space(h, [1, 0, 0])


def test_independent_rows_keeps_first_occurrences() -> None:
    h = SparseBinaryMatrix.from_dense([[1, 1, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0], [0, 0, 1]])
    kept = gf2core.independent_rows(h)
    assert kept.rows == ((0, 1), (1, 2), (2,))
    assert gf2core.rank(kept) == gf2core.rank(h)


def test_hstack_delete_and_select() -> None:
    c = gf2core.cyclic_matrix(5, [0, 2])
    stacked = gf2core.hstack(c, gf2core.transpose(c))
    assert stacked.shape == (5, 10)
    assert_array_equal(stacked.row_weights, np.full(5, 4))
    trimmed = gf2core.delete_rows(stacked, [0, 3])
    assert trimmed.rows == (stacked.rows[1], stacked.rows[2], stacked.rows[4])
    narrowed = gf2core.delete_columns(gf2core.identity(4), [1])
    assert narrowed.rows == ((0,), (), (1,), (2,))
    with pytest.raises(InvalidArgumentError):
        gf2core.hstack(gf2core.identity(2), gf2core.identity(3))


def test_row_basis_dense_spans_the_rows(rng) -> None:
    dense = _random_dense(rng, (12, 20))
    mat = SparseBinaryMatrix.from_dense(dense)
    basis = mat.row_basis.dense(mat.n_cols)
    assert basis.shape == (gf2core.rank(mat), 20)
    for row in dense:
        assert gf2core.in_row_space(SparseBinaryMatrix.from_dense(basis), row)


def test_is_connected() -> None:
    assert gf2core.is_connected(gf2core.cyclic_matrix(7, [0, 1, 3]))
    assert not gf2core.is_connected(gf2core.identity(2))
