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

"""Difference sets and designs behind the cyclic code constructions.

Perfect sets come from the Singer cycle of the projective plane over GF(q); unique-difference sets and matched
collections come from seeded, budgeted searches so the same arguments always give the same sets.
"""
import enum
import functools
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import galois
import numpy as np

from css_ldpc.errors import InvalidArgumentError, SearchFailureError

_LOGGER = logging.getLogger(__name__)
SUPPORTED_SINGER_ORDERS = (2, 4, 8, 16, 32, 64)


class DifferenceSetKind(str, enum.Enum):
    """How the pairwise differences of a set are constrained."""

    PERFECT = "perfect"
    UNIQUE_DIFFERENCE = "unique_difference"
    MATCHED_MEMBER = "matched_member"


@dataclass(frozen=True)
class DifferenceSet:
    """A set of residues modulo ``modulus``.

    :cvar modulus: M.
    :cvar elements: Distinct residues in increasing order.
    :cvar kind: The claimed difference property; see :func:`verify_kind`.
    """

    modulus: int
    elements: Tuple[int, ...]
    kind: DifferenceSetKind

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise InvalidArgumentError(f"modulus must be positive, got {self.modulus}")
        previous = -1
        for elem in self.elements:
            if elem <= previous or elem >= self.modulus:
                raise InvalidArgumentError(
                    f"elements must be strictly increasing residues mod {self.modulus}, got {self.elements}"
                )
            previous = elem

    @classmethod
    def of(cls, modulus: int, elements: Iterable[int], kind: DifferenceSetKind) -> "DifferenceSet":
        """Build a set from residues in any order, reducing them mod ``modulus``."""
        residues = sorted({int(e) % modulus for e in elements})
        return cls(int(modulus), tuple(residues), DifferenceSetKind(kind))

    @property
    def size(self) -> int:
        return len(self.elements)

    def translate(self, shift: int) -> "DifferenceSet":
        return DifferenceSet.of(self.modulus, (e + shift for e in self.elements), self.kind)

    def negate(self) -> "DifferenceSet":
        return DifferenceSet.of(self.modulus, (-e for e in self.elements), self.kind)

    def subset(self, indices: Iterable[int], kind: Optional[DifferenceSetKind] = None) -> "DifferenceSet":
        """Pick elements by position; a subset of a unique-difference set keeps that property."""
        picked = [self.elements[int(idx)] for idx in indices]
        return DifferenceSet.of(self.modulus, picked, kind or self.kind)

    def difference_counts(self) -> np.ndarray:
        """Counts of ``(a - b) mod M`` over ordered pairs ``a != b``, indexed by residue."""
        elems = np.asarray(self.elements, dtype=np.int64)
        diffs = np.subtract.outer(elems, elems) % self.modulus
        off_diagonal = ~np.eye(elems.size, dtype=bool)
        return np.bincount(diffs[off_diagonal], minlength=self.modulus)


def difference_multiset(diff_set: DifferenceSet) -> Dict[int, int]:
    """Count every difference ``(a - b) mod M`` over ordered pairs of distinct elements.

    :param diff_set: The set.
    :type diff_set: DifferenceSet
    :returns: Residue to count, for residues that occur; the counts sum to ``|S| (|S| - 1)``.
    :rtype: Dict[int, int]
    """
    counts = diff_set.difference_counts()
    return Counter({int(res): int(cnt) for res, cnt in enumerate(counts) if cnt})


def verify_kind(diff_set: DifferenceSet) -> bool:
    """Check the difference property that ``diff_set.kind`` claims.

    Perfect sets hit every nonzero residue exactly once, unique-difference sets at most once, and a matched member on
    its own at most twice.
    """
    counts = diff_set.difference_counts()[1:]
    if diff_set.kind is DifferenceSetKind.PERFECT:
        return bool(counts.size) and bool(np.all(counts == 1))
    if diff_set.kind is DifferenceSetKind.UNIQUE_DIFFERENCE:
        return bool(np.all(counts <= 1))
    return bool(np.all(counts <= 2))


def verify_matched_collection(sets: Sequence[DifferenceSet], modulus: int) -> bool:
    """Check that, pooled over all sets, every nonzero difference occurs zero times or twice.

    :raises InvalidArgumentError: If a set has a different modulus.
    """
    if any(s.modulus != modulus for s in sets):
        raise InvalidArgumentError(f"all sets must share modulus {modulus}, got {[s.modulus for s in sets]}")
    pooled = np.zeros(modulus, dtype=np.int64)
    for diff_set in sets:
        pooled += diff_set.difference_counts()
    return bool(np.all(np.isin(pooled[1:], (0, 2))))


@functools.lru_cache(maxsize=None)
def singer_plane(q: int) -> Tuple[DifferenceSet, np.ndarray]:
    """Label the points of PG(2, q) by powers of a primitive element of GF(q³).

    Point ``i`` is ``alpha**i`` written in the basis ``1, alpha, alpha**2`` over GF(q), for ``0 <= i < q² + q + 1``.
    The points whose ``alpha**2`` coordinate vanishes form a line, and the exponents of a line are a perfect
    difference set.

    :param q: The order of the base field.
    :type q: int
    :returns: The perfect set and a ``(q² + q + 1, 3)`` integer array of point coordinates.
    :rtype: Tuple[DifferenceSet, np.ndarray]
    :raises InvalidArgumentError: If ``q`` is not supported.
    """
    if q not in SUPPORTED_SINGER_ORDERS:
        raise InvalidArgumentError(f"unsupported q={q}; choose from {SUPPORTED_SINGER_ORDERS}")
    field = galois.GF(q)
    poly = galois.primitive_poly(q, 3)
    _, p2, p1, p0 = (int(c) for c in poly.coeffs)
    feedback = field([p0, p1, p2])
    n_points = q * q + q + 1

    coords = np.zeros((n_points, 3), dtype=np.int64)
    state = field([1, 0, 0])
    for idx in range(n_points):
        c0, c1, c2 = (int(c) for c in state)
        coords[idx] = (c0, c1, c2)
        # multiply by alpha and fold alpha**3 back with the minimal polynomial
        state = field([0, c0, c1]) - field(c2) * feedback

    line = np.flatnonzero(coords[:, 2] == 0)
    diff_set = DifferenceSet.of(n_points, line.tolist(), DifferenceSetKind.PERFECT)
    _LOGGER.debug("singer set for q=%d - modulus %d, %d elements", q, n_points, diff_set.size)
    return diff_set, coords


def singer_perfect_set(q: int) -> DifferenceSet:
    """Return a perfect difference set modulo ``q² + q + 1`` with ``q + 1`` elements."""
    diff_set, _ = singer_plane(q)
    if not verify_kind(diff_set):
        raise RuntimeError(f"singer construction for q={q} did not produce a perfect set")
    return diff_set


def hyperoval(q: int) -> Tuple[int, ...]:
    """Return the ``q + 2`` point labels of the conic ``c1² = c0 c2`` together with its nucleus.

    Labels follow :func:`singer_plane`. For even q every line meets the result in 0 or 2 points, so its indicator is
    a codeword of the cyclic code whose rows are the translates of :func:`singer_perfect_set`.
    """
    _, coords = singer_plane(q)
    field = galois.GF(q)
    c0, c1, c2 = (field(coords[:, idx]) for idx in range(3))
    on_conic = np.asarray(c1 * c1 == c0 * c2)
    nucleus = (coords[:, 0] == 0) & (coords[:, 2] == 0)
    return tuple(np.flatnonzero(on_conic | nucleus).tolist())


def _check_budget(budget: int) -> None:
    if budget < 1:
        raise InvalidArgumentError(f"budget must be at least 1, got {budget}")


def _greedy_unique(
    modulus: int, size: int, used: np.ndarray, rng: np.random.Generator
) -> Optional[List[int]]:
    """One randomized pass: scan residues in random order and keep each one whose new differences are all unused.

    ``used`` is updated only on success.
    """
    trial = used.copy()
    chosen = [int(rng.integers(modulus))]
    for cand in rng.permutation(modulus):
        if len(chosen) == size:
            break
        elems = np.asarray(chosen, dtype=np.int64)
        fresh = np.concatenate(((cand - elems) % modulus, (elems - cand) % modulus))
        if np.any(fresh == 0) or np.any(trial[fresh]) or np.unique(fresh).size != fresh.size:
            continue
        trial[fresh] = True
        chosen.append(int(cand))
    if len(chosen) < size:
        return None
    used[:] = trial
    return chosen


def _has_unique_differences(elems: np.ndarray, modulus: int) -> bool:
    diffs = (elems[:, None] - elems[None, :]) % modulus
    off = diffs[~np.eye(elems.size, dtype=bool)]
    return np.unique(off).size == off.size


def random_unique_difference_set(
    modulus: int, size: int, seed: int, budget: int = 1_000_000
) -> DifferenceSet:
    """Search for a set of ``size`` residues whose nonzero differences are all distinct.

    Rejection sampling: every attempt draws ``size`` distinct residues uniformly and keeps them only if no difference
    repeats.

    :param modulus: M.
    :type modulus: int
    :param size: The number of elements w.
    :type size: int
    :param seed: Seed of the search; equal seeds give equal sets.
    :type seed: int
    :param budget: The maximum number of attempts.
    :type budget: int
    :returns: A verified unique-difference set.
    :rtype: DifferenceSet
    :raises InvalidArgumentError: If ``w (w - 1) >= M`` or the budget is not positive.
    :raises SearchFailureError: If every attempt failed.
    """
    _check_budget(budget)
    if size < 1 or size * (size - 1) >= modulus:
        raise InvalidArgumentError(f"{size} elements need more than {size * (size - 1)} residues, modulus is {modulus}")
    rng = np.random.default_rng(seed)
    for attempt in range(1, budget + 1):
        elems = rng.choice(modulus, size, replace=False).astype(np.int64)
        if _has_unique_differences(elems, modulus):
            result = DifferenceSet.of(modulus, elems.tolist(), DifferenceSetKind.UNIQUE_DIFFERENCE)
            _LOGGER.debug("unique-difference set mod %d found after %d attempts", modulus, attempt)
            return result
    raise SearchFailureError(f"no unique-difference set of size {size} mod {modulus}", budget)


def _self_matched_search(
    modulus: int, size: int, rng: np.random.Generator, budget: int
) -> Tuple[Optional[List[int]], int]:
    """Depth-first search for a set whose own differences each occur zero times or twice.

    Element 0 is fixed, which loses nothing up to translation. Returns the set (or None) and the nodes expanded.
    """
    counts = np.zeros(modulus, dtype=np.int64)
    order = rng.permutation(np.arange(1, modulus))
    chosen = [0]
    expanded = 0

    def extend(start: int) -> bool:
        nonlocal expanded
        if len(chosen) == size:
            return bool(np.all(counts[1:] % 2 == 0))
        for pos in range(start, order.size):
            if expanded >= budget:
                return False
            expanded += 1
            cand = int(order[pos])
            elems = np.asarray(chosen, dtype=np.int64)
            fresh = np.concatenate(((cand - elems) % modulus, (elems - cand) % modulus))
            np.add.at(counts, fresh, 1)
            if np.all(counts[fresh] <= 2):
                chosen.append(cand)
                if extend(pos + 1):
                    return True
                chosen.pop()
            np.subtract.at(counts, fresh, 1)
        return False

    found = extend(0)
    return (sorted(chosen) if found else None), expanded


def matched_pair_search(
    modulus: int, count: int, size: int, seed: int, budget: int = 10_000
) -> List[DifferenceSet]:
    """Search for ``count`` sets of ``size`` residues whose pooled differences each occur zero times or twice.

    Sets are produced in pairs ``(S, t - S)``: ``S`` is unique-difference with differences unused by earlier sets,
    and its reflection repeats every difference once more. When ``count`` is odd, one extra set that matches its own
    differences is found first by exhaustive depth-first search.

    :param modulus: M.
    :type modulus: int
    :param count: The number of sets v.
    :type count: int
    :param size: The size w of every set.
    :type size: int
    :param seed: Seed of the search.
    :type seed: int
    :param budget: Attempts for the paired part plus nodes for the depth-first part.
    :type budget: int
    :returns: The collection, each set tagged as a matched member.
    :rtype: List[DifferenceSet]
    :raises InvalidArgumentError: If ``v w (w - 1) > 2 (M - 1)`` or an argument is not positive.
    :raises SearchFailureError: If the budget runs out.
    """
    _check_budget(budget)
    if count < 1 or size < 1:
        raise InvalidArgumentError(f"need positive count and size, got {count} and {size}")
    if count * size * (size - 1) > 2 * (modulus - 1):
        raise InvalidArgumentError(
            f"{count} sets of size {size} need {count * size * (size - 1)} differences, "
            f"only {2 * (modulus - 1)} are available mod {modulus}"
        )
    rng = np.random.default_rng(seed)
    used = np.zeros(modulus, dtype=bool)
    spent = 0
    sets: List[DifferenceSet] = []

    if count % 2:
        single, expanded = _self_matched_search(modulus, size, rng, budget)
        spent += expanded
        if single is None:
            raise SearchFailureError(f"no self-matched set of size {size} mod {modulus}", spent)
        sets.append(DifferenceSet.of(modulus, single, DifferenceSetKind.MATCHED_MEMBER))
        used[sets[-1].difference_counts() > 0] = True

    for _ in range(count // 2):
        chosen = None
        while chosen is None:
            if spent >= budget:
                raise SearchFailureError(f"no matched collection of {count} sets mod {modulus}", spent)
            spent += 1
            chosen = _greedy_unique(modulus, size, used, rng)
        shift = int(rng.integers(modulus))
        sets.append(DifferenceSet.of(modulus, chosen, DifferenceSetKind.MATCHED_MEMBER))
        sets.append(DifferenceSet.of(modulus, (shift - e for e in chosen), DifferenceSetKind.MATCHED_MEMBER))

    if not verify_matched_collection(sets, modulus):
        raise RuntimeError("matched search produced an unmatched collection")
    _LOGGER.info("matched collection of %d sets mod %d found - %d units of budget", count, modulus, spent)
    return sets


@dataclass(frozen=True)
class QuasiSymmetricDesign:
    """Blocks over the points ``0..13`` with a per-block transposition flag.

    :cvar blocks: Eight 7-point blocks, each sorted.
    :cvar transposed: Whether the cyclic block built from each derived set is transposed.
    """

    blocks: Tuple[Tuple[int, ...], ...]
    transposed: Tuple[bool, ...]

    @property
    def n_points(self) -> int:
        return 1 + max(max(block) for block in self.blocks)

    def pair_counts(self) -> np.ndarray:
        """``counts[a, b]`` is the number of blocks holding both points."""
        incidence = np.zeros((len(self.blocks), self.n_points), dtype=np.int64)
        for idx, block in enumerate(self.blocks):
            incidence[idx, list(block)] = 1
        return incidence.T @ incidence


_DESIGN_14_7 = (
    ((4, 6, 7, 8, 9, 10, 12), False),
    ((1, 5, 7, 9, 10, 11, 13), True),
    ((1, 2, 6, 10, 11, 12, 0), False),
    ((2, 3, 7, 8, 11, 12, 13), True),
    ((1, 3, 4, 9, 12, 13, 0), False),
    ((2, 4, 5, 8, 10, 13, 0), True),
    ((3, 5, 6, 8, 9, 11, 0), False),
    ((1, 2, 3, 4, 5, 6, 7), True),
)


def quasi_symmetric_design_14_7() -> QuasiSymmetricDesign:
    """The 14-point design with 8 blocks of size 7.

    Every point lies in four blocks. Each point shares two blocks with twelve of the others and none with the
    thirteenth, so every pair of parent elements is covered an even number of times.
    """
    return QuasiSymmetricDesign(
        tuple(tuple(sorted(block)) for block, _ in _DESIGN_14_7),
        tuple(flag for _, flag in _DESIGN_14_7),
    )
