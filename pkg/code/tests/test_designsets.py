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

"""Tests for difference sets, Singer sets, hyperovals and the 14-point design."""
import numpy as np
import pytest

from css_ldpc import designsets, gf2core
from css_ldpc.designsets import DifferenceSet, DifferenceSetKind
from css_ldpc.errors import InvalidArgumentError, SearchFailureError

MATCHED_M500_SETS = (
    (0, 190, 203, 345, 487),
    (0, 189, 235, 424, 462),
    (0, 94, 140, 170, 310),
    (0, 15, 47, 453, 485),
)


def test_golden_perfect_sets() -> None:
    assert designsets.verify_kind(DifferenceSet.of(13, [0, 3, 5, 12], DifferenceSetKind.PERFECT))
    assert designsets.verify_kind(
        DifferenceSet.of(73, [2, 8, 15, 19, 20, 34, 42, 44, 72], DifferenceSetKind.PERFECT)
    )
    assert not designsets.verify_kind(DifferenceSet.of(13, [0, 1, 2, 3], DifferenceSetKind.PERFECT))


def test_difference_multiset_counts_ordered_pairs() -> None:
    counts = designsets.difference_multiset(DifferenceSet.of(13, [0, 3, 5, 12], DifferenceSetKind.PERFECT))
    assert sum(counts.values()) == 12
    assert set(counts) == set(range(1, 13))


def test_difference_set_helpers() -> None:
    base = DifferenceSet.of(13, [0, 3, 5, 12], DifferenceSetKind.PERFECT)
    assert base.translate(2).elements == (1, 2, 5, 7)
    assert base.negate().elements == (0, 1, 8, 10)
    assert designsets.verify_kind(base.negate())
    sub = base.subset([0, 2], DifferenceSetKind.UNIQUE_DIFFERENCE)
    assert sub.elements == (0, 5)
    assert sub.kind is DifferenceSetKind.UNIQUE_DIFFERENCE
    with pytest.raises(InvalidArgumentError):
        DifferenceSet(13, (3, 1), DifferenceSetKind.PERFECT)


@pytest.mark.parametrize("q, size", [(2, 7), (4, 21), (8, 73), (16, 273)])
def test_singer_sets_are_perfect(q: int, size: int) -> None:
    diff_set = designsets.singer_perfect_set(q)
    assert diff_set.modulus == size
    assert diff_set.size == q + 1
    assert designsets.verify_kind(diff_set)


@pytest.mark.parametrize("q, expected_rank", [(4, 10), (8, 28)])
def test_difference_set_cyclic_ranks(q: int, expected_rank: int) -> None:
    diff_set = designsets.singer_perfect_set(q)
    assert gf2core.rank(gf2core.cyclic_matrix(diff_set.modulus, diff_set.elements)) == expected_rank


@pytest.mark.slow
def test_difference_set_cyclic_rank_273() -> None:
    diff_set = designsets.singer_perfect_set(16)
    assert gf2core.rank(gf2core.cyclic_matrix(273, diff_set.elements)) == 82


def test_golden_set_mod_73_has_rank_28() -> None:
    h = gf2core.cyclic_matrix(73, [2, 8, 15, 19, 20, 34, 42, 44, 72])
    assert gf2core.rank(h) == 28


def test_singer_rejects_unsupported_order() -> None:
    with pytest.raises(InvalidArgumentError):
        designsets.singer_perfect_set(3)


@pytest.mark.parametrize("q", [4, 8, 16])
def test_hyperoval_meets_every_line_evenly(q: int) -> None:
    diff_set = designsets.singer_perfect_set(q)
    points = designsets.hyperoval(q)
    assert len(points) == q + 2
    word = np.zeros(diff_set.modulus, dtype=np.uint8)
    word[list(points)] = 1
    lines = gf2core.cyclic_matrix(diff_set.modulus, diff_set.elements)
    meets = lines.to_dense().astype(np.int64) @ word
    assert set(np.unique(meets).tolist()) <= {0, 2}


def test_random_unique_difference_set_is_seeded() -> None:
    first = designsets.random_unique_difference_set(200, 6, seed=7)
    second = designsets.random_unique_difference_set(200, 6, seed=7)
    assert first == second
    assert first.size == 6
    assert designsets.verify_kind(first)


def test_random_unique_difference_set_keeps_the_first_clean_draw() -> None:
    rng = np.random.default_rng(3)
    draws = 0
    while True:
        draws += 1
        elems = rng.choice(1893, 12, replace=False)
        diffs = (elems[:, None] - elems[None, :]) % 1893
        off = diffs[~np.eye(12, dtype=bool)]
        if np.unique(off).size == off.size:
            break
    found = designsets.random_unique_difference_set(1893, 12, seed=3)
    assert found.elements == tuple(sorted(int(e) for e in elems))
    assert designsets.verify_kind(found)
    # a budget one short of the accepting draw fails
    if draws > 1:
        with pytest.raises(SearchFailureError):
            designsets.random_unique_difference_set(1893, 12, seed=3, budget=draws - 1)


def test_random_unique_difference_set_bounds() -> None:
    with pytest.raises(InvalidArgumentError):
        designsets.random_unique_difference_set(20, 5, seed=0)
    with pytest.raises(InvalidArgumentError):
        designsets.random_unique_difference_set(200, 5, seed=0, budget=0)


def test_search_failure_reports_attempts() -> None:
    # 7 elements mod 43 would need a perfect set; none exists
    with pytest.raises(SearchFailureError) as info:
        designsets.random_unique_difference_set(43, 7, seed=0, budget=5)
    assert info.value.attempts == 5


def test_known_collection_is_matched() -> None:
    sets = [DifferenceSet.of(500, elems, DifferenceSetKind.MATCHED_MEMBER) for elems in MATCHED_M500_SETS]
    assert designsets.verify_matched_collection(sets, 500)
    assert all(designsets.verify_kind(s) for s in sets)
    assert not designsets.verify_matched_collection(sets[:3], 500)
    with pytest.raises(InvalidArgumentError):
        designsets.verify_matched_collection(sets, 501)


def test_matched_pair_search_even_count() -> None:
    sets = designsets.matched_pair_search(500, 4, 5, seed=3)
    assert len(sets) == 4
    assert all(s.size == 5 for s in sets)
    assert designsets.verify_matched_collection(sets, 500)
    assert sets == designsets.matched_pair_search(500, 4, 5, seed=3)


def test_matched_pair_search_odd_count() -> None:
    # a (7, 4, 2) set repeats every difference twice
    sets = designsets.matched_pair_search(7, 1, 4, seed=0)
    assert designsets.verify_matched_collection(sets, 7)
    assert sets[0].size == 4


def test_matched_pair_search_rejects_overfull_request() -> None:
    with pytest.raises(InvalidArgumentError):
        designsets.matched_pair_search(21, 4, 5, seed=0)


def test_design_14_7() -> None:
    design = designsets.quasi_symmetric_design_14_7()
    assert len(design.blocks) == 8
    assert all(len(block) == 7 for block in design.blocks)
    assert design.n_points == 14
    counts = design.pair_counts()
    assert np.all(np.diag(counts) == 4)
    off_diagonal = counts[~np.eye(14, dtype=bool)].reshape(14, 13)
    assert set(np.unique(off_diagonal).tolist()) == {0, 2}
    # each point has exactly one partner it never shares a block with
    assert np.all((off_diagonal == 0).sum(axis=1) == 1)
