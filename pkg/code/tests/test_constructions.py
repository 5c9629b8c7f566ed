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

"""Tests for the code families and the low-weight audit."""
import numpy as np
import pytest
from numpy.testing import assert_array_equal

from css_ldpc import constructions, designsets, gf2core, pauli
from css_ldpc.designsets import DifferenceSet, DifferenceSetKind
from css_ldpc.errors import InvalidArgumentError, PreconditionError, SearchFailureError
from css_ldpc.gf2core import SparseBinaryMatrix

MATCHED_M500_SETS = (
    (0, 190, 203, 345, 487),
    (0, 189, 235, 424, 462),
    (0, 94, 140, 170, 310),
    (0, 15, 47, 453, 485),
)


@pytest.fixture(scope="module")
def small_bicycle() -> constructions.CssCode:
    return constructions.bicycle(400, 150, 10, seed=11)


@pytest.fixture(scope="module")
def matched_construction_n() -> constructions.CssCode:
    sets = [DifferenceSet.of(500, elems, DifferenceSetKind.MATCHED_MEMBER) for elems in MATCHED_M500_SETS]
    return constructions.construction_n(500, sets)


def test_css_code_rates() -> None:
    code = constructions.CssCode.from_matrix(pauli.steane_parity_check(), {"family": "steane"})
    assert (code.n, code.m, code.rank_h) == (7, 3, 3)
    assert code.quantum_rate == pytest.approx(1 / 7)
    assert code.classical_rate == pytest.approx(4 / 7)
    assert code.code_id == "steane-N7-M3"
    with pytest.raises(PreconditionError):
        constructions.CssCode.from_matrix(SparseBinaryMatrix.from_dense([[1, 1, 1]]))


def test_bicycle_shape_and_weights(small_bicycle) -> None:
    code = small_bicycle
    assert (code.n, code.m) == (400, 150)
    assert gf2core.is_self_orthogonal(code.h)
    assert_array_equal(code.h.row_weights, np.full(150, 10))
    assert len(code.provenance["deleted_rows"]) == 50
    assert code.rank_h <= code.m
    assert abs(code.quantum_rate - 0.25) <= 1 / code.n
    assert code.code_id == "bicycle-N400-M150-s11"


def test_bicycle_is_deterministic(small_bicycle) -> None:
    again = constructions.bicycle(400, 150, 10, seed=11)
    assert again.h == small_bicycle.h
    assert again.provenance["deleted_rows"] == small_bicycle.provenance["deleted_rows"]


def test_bicycle_deletion_keeps_column_weights_close(small_bicycle) -> None:
    weights = small_bicycle.h.column_weights
    # 50 rows of weight 10 leave 500 fewer ones over 400 columns of weight 5
    assert int(weights.sum()) == 400 * 5 - 500
    assert int(weights.max() - weights.min()) <= 2


def test_balanced_deletion_of_a_block_pair() -> None:
    diff_set = designsets.random_unique_difference_set(200, 5, seed=11)
    first = gf2core.cyclic_matrix(200, diff_set.elements)
    h0 = gf2core.hstack(first, gf2core.transpose(first))
    deleted = constructions._balanced_deletion(h0, diff_set.elements, 50, seed=0)
    assert len(deleted) == len(set(deleted)) == 50
    weights = gf2core.delete_rows(h0, deleted).column_weights
    assert int(weights.max() - weights.min()) <= 2
    # the arc deletion alone already lands every column within a spread of 3
    arc = constructions._arc_deletion(diff_set.elements, 200, 50)
    assert len(set(arc)) == 50
    arc_weights = gf2core.delete_rows(h0, arc).column_weights
    assert int(arc_weights.max() - arc_weights.min()) <= 3


@pytest.mark.parametrize("n, m, k", [(401, 100, 10), (400, 100, 9), (400, 201, 10), (400, 0, 10)])
def test_bicycle_rejects_bad_parameters(n: int, m: int, k: int) -> None:
    with pytest.raises(InvalidArgumentError):
        constructions.bicycle(n, m, k, seed=0)


@pytest.mark.slow
def test_bicycle_desk_scale_rate() -> None:
    code = constructions.bicycle(3786, 1420, 24, seed=1)
    assert gf2core.is_self_orthogonal(code.h)
    assert abs(code.quantum_rate - 0.25) <= 1 / code.n
    weights = code.h.column_weights
    assert int(weights.max() - weights.min()) <= 2


@pytest.mark.parametrize("q, rank", [(4, 10), (8, 28), (16, 82)])
def test_unicycle_rank_matches_cyclic_code(q: int, rank: int) -> None:
    code = constructions.unicycle(q)
    size = q * q + q + 1
    assert (code.n, code.m) == (size + 1, size)
    assert code.rank_h == rank
    assert code.special_columns == (size,)
    assert code.subcode is not None and code.subcode.special_column == size
    assert gf2core.is_self_orthogonal(code.h)
    assert code.quantum_rate == pytest.approx((size + 1 - 2 * rank) / (size + 1))


def test_unicycle_hyperoval_is_a_codeword() -> None:
    code = constructions.unicycle(8)
    word = np.zeros(code.n, dtype=np.uint8)
    word[list(designsets.hyperoval(8))] = 1
    assert not gf2core.syndrome(code.h, word).any()


def test_construction_n_with_known_sets(matched_construction_n) -> None:
    code = matched_construction_n
    assert (code.n, code.m) == (2000, 500)
    assert gf2core.is_self_orthogonal(code.h)
    assert code.rank_h == 500
    assert abs(code.quantum_rate - 0.5) <= 1 / code.n
    assert_array_equal(code.h.row_weights, np.full(500, 20))


def test_construction_n_rejects_unmatched_sets() -> None:
    sets = [DifferenceSet.of(500, elems, DifferenceSetKind.MATCHED_MEMBER) for elems in MATCHED_M500_SETS[:3]]
    with pytest.raises(InvalidArgumentError):
        constructions.construction_n(500, sets)


def test_construction_n_from_search() -> None:
    sets = designsets.matched_pair_search(300, 4, 5, seed=5)
    code = constructions.construction_n(300, sets)
    assert gf2core.is_self_orthogonal(code.h)
    assert abs(code.quantum_rate - 0.5) <= 1 / code.n


def test_construction_m_with_singer_parent() -> None:
    parent = constructions.parent_difference_set(273, seed=0)
    assert parent.size == 14
    assert parent.kind is DifferenceSetKind.UNIQUE_DIFFERENCE
    assert designsets.verify_kind(parent)
    code = constructions.construction_m(273, parent)
    assert (code.n, code.m) == (8 * 273, 273)
    assert gf2core.is_self_orthogonal(code.h)
    assert_array_equal(code.h.row_weights, np.full(273, 56))
    assert abs(code.quantum_rate - 0.75) <= 1 / code.n
    assert len(code.provenance["block_sets"]) == 8


@pytest.mark.slow
def test_construction_m_with_searched_parent() -> None:
    parent = constructions.parent_difference_set(1901, seed=2)
    assert parent.kind is DifferenceSetKind.UNIQUE_DIFFERENCE
    code = constructions.construction_m(1901, parent)
    assert gf2core.is_self_orthogonal(code.h)


def test_construction_m_rejects_bad_parent() -> None:
    with pytest.raises(InvalidArgumentError):
        constructions.construction_m(273, designsets.singer_perfect_set(16).subset(range(10)))
    repeated = DifferenceSet.of(273, range(14), DifferenceSetKind.UNIQUE_DIFFERENCE)
    with pytest.raises(InvalidArgumentError):
        constructions.construction_m(273, repeated)


def test_mc_search_regular_finds_connected_matrix() -> None:
    h = constructions.mc_search_regular(2, 4, 12, 6, seed=1, budget=1_000_000)
    assert h is not None
    assert gf2core.is_self_orthogonal(h)
    assert gf2core.is_connected(h)
    assert_array_equal(h.row_weights, np.full(6, 4))
    assert_array_equal(h.column_weights, np.full(12, 2))


def test_mc_search_regular_odd_row_weight() -> None:
    assert constructions.mc_search_regular(3, 3, 12, 12, seed=0, budget=100) is None
    with pytest.raises(SearchFailureError):
        constructions.regular(3, 3, 12, 12, seed=0, budget=100)
    with pytest.raises(InvalidArgumentError):
        constructions.mc_search_regular(3, 4, 12, 10, seed=0)


def test_regular_code_provenance() -> None:
    code = constructions.regular(2, 4, 12, 6, seed=1, budget=1_000_000)
    assert code.provenance["family"] == "regular"
    assert code.code_id == "regular-N12-M6-s1"


def test_swap_codeword(matched_construction_n) -> None:
    code = matched_construction_n
    for i, j in [(0, 1), (0, 3), (2, 3)]:
        word = constructions.swap_codeword(code, i, j, shift=17)
        assert not gf2core.syndrome(code.h, word).any()
        assert 0 < int(word.sum()) <= 10
    with pytest.raises(InvalidArgumentError):
        constructions.swap_codeword(code, 1, 1)


def test_reversed_near_codeword_has_low_weight_syndrome(matched_construction_n) -> None:
    code = matched_construction_n
    word = constructions.reversed_near_codeword(code, 0)
    assert int(word.sum()) == 5
    assert 0 < int(gf2core.syndrome(code.h, word).sum()) <= 25


def test_audit_reports_only_valid_words(matched_construction_n) -> None:
    code = matched_construction_n
    report = constructions.audit_low_weight(code, max_weight=12, effort=20, seed=3)
    for word in report.codewords:
        bits = np.zeros(code.n, dtype=np.uint8)
        bits[list(word.support)] = 1
        assert word.weight <= 12
        assert not gf2core.syndrome(code.h, bits).any()
        assert not gf2core.in_row_space(code.h, bits)
    for word in report.near_codewords:
        assert word.syndrome_weight > 0
    summary = report.summary()
    assert summary["codewords"] == len(report.codewords)
    assert summary["min_weight"] == report.min_codeword_weight


def test_audit_reports_deleted_bicycle_rows(small_bicycle) -> None:
    code = small_bicycle
    report = constructions.audit_low_weight(code, max_weight=10, effort=0)
    reported = {word.support for word in report.codewords if word.origin == "deleted_row"}
    size, sets = code.provenance["block_size"], code.provenance["block_sets"]
    h0 = gf2core.hstack(*(gf2core.cyclic_matrix(size, block) for block in sets))
    expected = set()
    for row in code.provenance["deleted_rows"]:
        word = np.zeros(code.n, dtype=np.uint8)
        word[list(h0.rows[row])] = 1
        assert not gf2core.syndrome(code.h, word).any()
        if not gf2core.in_row_space(code.h, word):
            expected.add(tuple(h0.rows[row]))
    assert expected
    assert reported == expected
    assert all(len(support) == 10 for support in reported)


def test_audit_reports_construction_n_swap_words(matched_construction_n) -> None:
    report = constructions.audit_low_weight(matched_construction_n, max_weight=10, effort=0)
    swaps = [word for word in report.codewords if word.origin == "swap"]
    assert swaps
    assert all(word.weight == 10 and word.syndrome_weight == 0 for word in swaps)


def test_audit_reports_unicycle_hyperovals() -> None:
    code = constructions.unicycle(8)
    report = constructions.audit_low_weight(code, max_weight=10, effort=0)
    hyperovals = [word for word in report.codewords if word.origin == "hyperoval"]
    # even sums of lines have weight divisible by 4, so no hyperoval lies in the row space
    assert len(hyperovals) == 64
    assert all(word.weight == 10 for word in hyperovals)
    assert report.min_codeword_weight is not None and report.min_codeword_weight <= 10


def test_audit_needs_block_layout_for_structured_words() -> None:
    code = constructions.CssCode.from_matrix(pauli.steane_parity_check(), {"family": "steane"})
    with pytest.raises(PreconditionError):
        constructions.swap_codeword(code, 0, 1)
    report = constructions.audit_low_weight(code, max_weight=7, effort=10)
    assert report.min_codeword_weight is None or report.min_codeword_weight >= 3
