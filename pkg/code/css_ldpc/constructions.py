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

"""Dual-containing code families and the low-weight codeword audit.

Every family is assembled from cyclic blocks, so the provenance of a code records the residue set of each block
(``block_sets``) and the block size. The audit rebuilds its structural test words from that record.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from css_ldpc import _kernels, decoder, gf2core
from css_ldpc.designsets import (
    SUPPORTED_SINGER_ORDERS,
    DifferenceSet,
    DifferenceSetKind,
    QuasiSymmetricDesign,
    hyperoval,
    quasi_symmetric_design_14_7,
    random_unique_difference_set,
    singer_perfect_set,
    verify_kind,
    verify_matched_collection,
)
from css_ldpc.errors import InvalidArgumentError, PreconditionError, SearchFailureError
from css_ldpc.gf2core import BitVec, SparseBinaryMatrix

_LOGGER = logging.getLogger(__name__)

#: Units scored by the arc deletion.
ARC_UNIT_LIMIT = 4096
#: Proposals and temperature of the row rebalancing kernel.
REBALANCE_BUDGET = 2_000_000
REBALANCE_TEMPERATURE = 0.3
#: Difference sets tried by :func:`bicycle` before it settles for a column-weight spread above 2.
BICYCLE_ATTEMPTS = 4


@dataclass(frozen=True)
class UnicycleStructure:
    """The split of a unicycle code into its all-ones column and the cyclic code beneath it.

    :cvar special_column: Index of the all-ones column in ``H``.
    :cvar dsc: The cyclic matrix of the perfect difference set, ``H`` without the special column.
    :cvar difference_set: The perfect set the cyclic matrix is built from.
    """

    special_column: int
    dsc: SparseBinaryMatrix
    difference_set: DifferenceSet


@dataclass(frozen=True, eq=False)
class CssCode:
    """A validated dual-containing parity-check matrix with its rates and provenance.

    :cvar h: The ``M x N`` parity-check matrix; ``H Hᵀ = 0``.
    :cvar rank_h: The GF(2) rank of ``h``.
    :cvar provenance: Construction name, parameters, seed and construction details.
    :cvar special_columns: Columns with a special role (the unicycle all-ones column).
    :cvar subcode: Unicycle decoding structure, if any.
    """

    h: SparseBinaryMatrix
    rank_h: int
    provenance: Dict[str, Any] = field(default_factory=dict)
    special_columns: Tuple[int, ...] = ()
    subcode: Optional[UnicycleStructure] = None

    @classmethod
    def from_matrix(
        cls,
        h: SparseBinaryMatrix,
        provenance: Optional[Dict[str, Any]] = None,
        special_columns: Sequence[int] = (),
        subcode: Optional[UnicycleStructure] = None,
    ) -> "CssCode":
        """Validate ``h`` and compute its rank.

        :raises PreconditionError: If ``h`` is not self-orthogonal.
        """
        if not gf2core.is_self_orthogonal(h):
            raise PreconditionError(f"{h!r} is not self-orthogonal")
        code = cls(h, gf2core.rank(h), dict(provenance or {}), tuple(int(c) for c in special_columns), subcode)
        _LOGGER.info(
            "built %s - N=%d M=%d rank=%d quantum rate %.4f",
            code.code_id,
            code.n,
            code.m,
            code.rank_h,
            code.quantum_rate,
        )
        return code

    @property
    def n(self) -> int:
        return self.h.n_cols

    @property
    def m(self) -> int:
        return self.h.n_rows

    @property
    def quantum_rate(self) -> float:
        return (self.n - 2 * self.rank_h) / self.n

    @property
    def classical_rate(self) -> float:
        return (self.n - self.rank_h) / self.n

    @property
    def code_id(self) -> str:
        family = self.provenance.get("family", "custom")
        seed = self.provenance.get("seed")
        label = f"{family}-N{self.n}-M{self.m}"
        return label if seed is None else f"{label}-s{seed}"


def _block_code(
    blocks: Sequence[Sequence[int]], modulus: int, provenance: Dict[str, Any], **kwargs: Any
) -> CssCode:
    h = gf2core.hstack(*(gf2core.cyclic_matrix(modulus, block) for block in blocks))
    provenance = dict(provenance, block_size=modulus, block_sets=[sorted(int(e) for e in block) for block in blocks])
    return CssCode.from_matrix(h, provenance, **kwargs)


def _uniform_deletion(h0: SparseBinaryMatrix, n_delete: int) -> List[int]:
    """Greedily pick rows whose removal keeps the column weights most even.

    Each step removes the row minimizing (column-weight spread after removal, minus the summed current weight of its
    columns, row index). The result seeds :func:`_balanced_deletion`.
    """
    weights = h0.column_weights.copy()
    starts = h0.indptr[:-1]
    alive = np.ones(h0.n_rows, dtype=bool)
    deleted: List[int] = []
    for _ in range(n_delete):
        top, bottom = weights.max(), weights.min()
        row_vals = weights[h0.indices]
        hits_top = np.add.reduceat((row_vals == top).astype(np.int64), starts)
        row_min = np.minimum.reduceat(row_vals, starts)
        row_sum = np.add.reduceat(row_vals, starts)
        new_top = np.where(hits_top == np.count_nonzero(weights == top), top - 1, top)
        new_bottom = np.minimum(bottom, row_min - 1)
        spread = np.where(alive, new_top - new_bottom, np.iinfo(np.int64).max)
        order = np.lexsort((np.arange(h0.n_rows), -row_sum, spread))
        pick = int(order[0])
        alive[pick] = False
        deleted.append(pick)
        weights[list(h0.rows[pick])] -= 1
    return sorted(deleted)


def _window_counts(points: np.ndarray, modulus: int, length: int) -> np.ndarray:
    """Count, for every x, the points p with ``(x - p) mod modulus`` in ``[0, length)``."""
    doubled = np.sort(np.concatenate((points, points + modulus)))
    ends = np.arange(modulus, dtype=np.int64) + modulus
    return np.searchsorted(doubled, ends, side="right") - np.searchsorted(doubled, ends - length, side="right")


def _arc_deletion(support: Sequence[int], modulus: int, n_delete: int) -> List[int]:
    """Delete the rows ``{g i : 0 <= i < n_delete}`` for the unit g that keeps the column weights most even.

    Row r of the first block meets column c when ``c - r`` is in the support, so after the dilation ``x -> u x``
    (``u = g⁻¹``) the deleted rows form one arc and column c loses as many ones as there are dilated support points
    in a window ending at ``u c``. The second block sees the negated points. Units u and -u give the same weights, so
    only ``u <= modulus / 2`` are scored, at most :data:`ARC_UNIT_LIMIT` of them.
    """
    if n_delete == 0:
        return []
    points = np.asarray(sorted(support), dtype=np.int64)
    best_key: Optional[Tuple[int, float]] = None
    best_unit = 1
    scored = 0
    for unit in range(1, modulus // 2 + 1):
        if math.gcd(unit, modulus) != 1:
            continue
        dilated = points * unit % modulus
        counts = np.concatenate(
            (_window_counts(dilated, modulus, n_delete), _window_counts(-dilated % modulus, modulus, n_delete))
        )
        key = (int(counts.max() - counts.min()), float(counts.var()))
        if best_key is None or key < best_key:
            best_key, best_unit = key, unit
        scored += 1
        if scored == ARC_UNIT_LIMIT:
            break
    step = pow(best_unit, -1, modulus)
    return sorted(step * i % modulus for i in range(n_delete))


def _weights_after(h0: SparseBinaryMatrix, deleted: Sequence[int]) -> np.ndarray:
    mask = np.zeros(h0.n_rows, dtype=bool)
    mask[list(deleted)] = True
    lost = np.bincount(h0.indices[np.repeat(mask, h0.row_weights)], minlength=h0.n_cols)
    return h0.column_weights - lost


def _spread(weights: np.ndarray) -> int:
    return int(weights.max() - weights.min())


def _balanced_deletion(h0: SparseBinaryMatrix, support: Sequence[int], n_delete: int, seed: int) -> List[int]:
    """Choose ``n_delete`` rows of ``[C, Cᵀ]`` so the remaining column weights spread over at most 3 values.

    The greedy and the arc deletions are scored by the spread of the column weights; the better one is handed to the
    rebalancing kernel when its spread exceeds 2. The kernel aims at the band of three weights centred on the integer
    nearest the mean column weight.
    """
    candidates = [_uniform_deletion(h0, n_delete), _arc_deletion(support, h0.n_rows, n_delete)]
    deleted = min(candidates, key=lambda rows: _spread(_weights_after(h0, rows)))
    weights = _weights_after(h0, deleted)
    if _spread(weights) <= 2:
        return deleted
    removed = np.zeros(h0.n_rows, dtype=np.uint8)
    removed[deleted] = 1
    centre = float(weights.mean())
    mid = int(round(centre))
    ht = gf2core.transpose(h0)
    n_bad, used = _kernels.rebalance_rows(
        h0.indptr,
        h0.indices,
        ht.indptr,
        ht.indices,
        weights,
        removed,
        mid - 1,
        mid + 1,
        centre,
        REBALANCE_TEMPERATURE,
        REBALANCE_BUDGET,
        seed,
    )
    _LOGGER.debug("rebalancing left %d columns outside [%d, %d] after %d proposals", n_bad, mid - 1, mid + 1, used)
    return np.flatnonzero(removed).tolist()


def bicycle(n: int, m: int, k: int, seed: int, budget: int = 1_000_000) -> CssCode:
    """Build a bicycle code: ``[C, Cᵀ]`` from a cyclic ``C`` with row weight k/2, then delete rows down to M.

    The deleted rows keep the column weights within a spread of 2 (see :func:`_balanced_deletion`). When a difference
    set does not allow that, up to :data:`BICYCLE_ATTEMPTS` sets are drawn from seeds derived from ``seed`` and the
    most even result is kept; ``provenance["attempt"]`` says which one.

    :param n: The blocklength N, even.
    :type n: int
    :param m: The number of rows kept, at most N/2.
    :type m: int
    :param k: The row weight, even.
    :type k: int
    :param seed: Seed of the difference-set search.
    :type seed: int
    :param budget: Attempts allowed for the difference-set search.
    :type budget: int
    :returns: The code; ``provenance["deleted_rows"]`` lists the removed rows of ``[C, Cᵀ]``.
    :rtype: CssCode
    :raises InvalidArgumentError: If the parameters are infeasible.
    :raises SearchFailureError: If no difference set is found in budget.
    """
    if n <= 0 or n % 2 or k <= 0 or k % 2:
        raise InvalidArgumentError(f"bicycle codes need even N and k, got N={n}, k={k}")
    half = n // 2
    if not 1 <= m <= half:
        raise InvalidArgumentError(f"M must lie in [1, N/2 = {half}], got {m}")
    best: Optional[Tuple[int, int, int, DifferenceSet, SparseBinaryMatrix, List[int]]] = None
    for attempt in range(BICYCLE_ATTEMPTS):
        set_seed = seed if attempt == 0 else int(np.random.SeedSequence([seed, attempt]).generate_state(1)[0])
        try:
            diff_set = random_unique_difference_set(half, k // 2, set_seed, budget)
        except SearchFailureError:
            if best is None:
                raise
            break
        first = gf2core.cyclic_matrix(half, diff_set.elements)
        h0 = gf2core.hstack(first, gf2core.transpose(first))
        deleted = _balanced_deletion(h0, diff_set.elements, half - m, set_seed)
        spread = _spread(_weights_after(h0, deleted))
        if best is None or spread < best[0]:
            best = (spread, attempt, set_seed, diff_set, h0, deleted)
        if spread <= 2:
            break
        _LOGGER.info("difference set %d leaves a column-weight spread of %d, drawing another", attempt, spread)
    spread, attempt, set_seed, diff_set, h0, deleted = best
    if spread > 2:
        _LOGGER.warning("no deletion with column-weight spread <= 2 found, keeping spread %d", spread)
    h = gf2core.delete_rows(h0, deleted)
    provenance = {
        "family": "bicycle",
        "n": n,
        "m": m,
        "k": k,
        "seed": seed,
        "attempt": attempt,
        "difference_set_seed": set_seed,
        "difference_set": list(diff_set.elements),
        "deleted_rows": deleted,
        "block_size": half,
        "block_sets": [list(diff_set.elements), list(diff_set.negate().elements)],
    }
    return CssCode.from_matrix(h, provenance)


def unicycle(q: int) -> CssCode:
    """Build a unicycle code: the cyclic matrix of a perfect difference set plus one all-ones column.

    All ``q² + q + 1`` cyclic rows are kept; the rates use the rank.
    """
    diff_set = singer_perfect_set(q)
    size = diff_set.modulus
    dsc = gf2core.cyclic_matrix(size, diff_set.elements)
    ones = SparseBinaryMatrix(size, 1, tuple((0,) for _ in range(size)))
    h = gf2core.hstack(dsc, ones)
    provenance = {
        "family": "unicycle",
        "q": q,
        "difference_set": list(diff_set.elements),
        "rows_retained": "all cyclic rows, including dependent ones",
        "block_size": size,
        "block_sets": [list(diff_set.elements)],
    }
    structure = UnicycleStructure(size, dsc, diff_set)
    return CssCode.from_matrix(h, provenance, special_columns=(size,), subcode=structure)


def construction_n(m: int, sets: Sequence[DifferenceSet]) -> CssCode:
    """Place the cyclic matrices of a matched collection side by side.

    :raises InvalidArgumentError: If the collection is not matched or the total row weight is odd.
    """
    if not sets:
        raise InvalidArgumentError("construction N needs at least one set")
    if not verify_matched_collection(sets, m):
        raise InvalidArgumentError("the sets are not a matched collection: some difference occurs once or 3+ times")
    weight = sum(s.size for s in sets)
    if weight % 2:
        raise InvalidArgumentError(f"total row weight {weight} is odd")
    provenance = {"family": "construction_n", "m": m, "sets": [list(s.elements) for s in sets]}
    return _block_code([s.elements for s in sets], m, provenance)


def parent_difference_set(m: int, seed: int, budget: int = 1_000_000, size: int = 14) -> DifferenceSet:
    """A unique-difference parent set for :func:`construction_m`.

    When ``m = q² + q + 1`` for a supported q with ``q + 1 >= size`` the first elements of the Singer perfect set are
    used; otherwise the seeded search runs.
    """
    for q in SUPPORTED_SINGER_ORDERS:
        if q * q + q + 1 == m and q + 1 >= size:
            return singer_perfect_set(q).subset(range(size), DifferenceSetKind.UNIQUE_DIFFERENCE)
    return random_unique_difference_set(m, size, seed, budget)


def construction_m(m: int, parent: DifferenceSet, design: Optional[QuasiSymmetricDesign] = None) -> CssCode:
    """Derive eight 7-element sets from a 14-element parent through a design and stack their cyclic matrices.

    Block i uses the parent elements indexed by design block i, negated where the design marks the block as
    transposed.

    :raises InvalidArgumentError: If the parent does not have 14 elements with unique differences mod M.
    """
    design = design or quasi_symmetric_design_14_7()
    if parent.modulus != m or parent.size != design.n_points:
        raise InvalidArgumentError(f"parent must have {design.n_points} elements mod {m}")
    if not verify_kind(DifferenceSet(parent.modulus, parent.elements, DifferenceSetKind.UNIQUE_DIFFERENCE)):
        raise InvalidArgumentError("parent differences are not unique")
    blocks = []
    for block, flipped in zip(design.blocks, design.transposed):
        derived = parent.subset(block, DifferenceSetKind.MATCHED_MEMBER)
        blocks.append((derived.negate() if flipped else derived).elements)
    provenance = {"family": "construction_m", "m": m, "parent": list(parent.elements)}
    return _block_code(blocks, m, provenance)


def _structured_regular(j: int, n: int, m: int) -> np.ndarray:
    cols = (np.arange(n, dtype=np.int64)[:, None] * j + np.arange(j, dtype=np.int64)[None, :]) % m
    return cols


def mc_search_regular(
    j: int, k: int, n: int, m: int, seed: int, budget: int = 200_000
) -> Optional[SparseBinaryMatrix]:
    """Monte Carlo search for a connected (j, k)-regular self-orthogonal matrix.

    Moves swap entries between two columns and two rows so all weights stay fixed; the cost is the number of row
    pairs with odd overlap, annealed from temperature 2.0 down to 0.05. A solution whose Tanner graph splits into
    pieces is discarded and the search restarts on the remaining budget.

    :returns: The matrix, or None if the budget ran out.
    :rtype: Optional[SparseBinaryMatrix]
    :raises InvalidArgumentError: If ``j N != k M`` or the weights do not fit.
    """
    if j < 1 or k < 1 or j * n != k * m:
        raise InvalidArgumentError(f"regular weights need j*N == k*M, got {j}*{n} != {k}*{m}")
    if j > m or k > n:
        raise InvalidArgumentError(f"weights ({j}, {k}) do not fit a {m}x{n} matrix")
    if budget < 1:
        raise InvalidArgumentError(f"budget must be at least 1, got {budget}")
    if k % 2:
        _LOGGER.info("odd row weight %d cannot be self-orthogonal", k)
        return None

    rng = np.random.default_rng(seed)
    remaining = budget
    while remaining > 0:
        cols = _structured_regular(j, n, m)
        dense = np.zeros((m, n), dtype=np.uint8)
        dense[cols, np.arange(n)[:, None]] = 1
        kernel_seed = int(rng.integers(2**31 - 1))
        cost, used = _kernels.anneal_regular(cols, dense, n * j, remaining, 2.0, 0.05, kernel_seed)
        remaining -= max(used, 1)
        if cost:
            break
        candidate = SparseBinaryMatrix.from_dense(dense)
        if gf2core.is_connected(candidate) and gf2core.is_self_orthogonal(candidate):
            _LOGGER.info("regular (%d,%d) matrix found - %d proposals left", j, k, remaining)
            return candidate
        _LOGGER.debug("rejected a disconnected solution")
    _LOGGER.info("no regular (%d,%d)(%d,%d) matrix within budget %d", j, k, n, m, budget)
    return None


def regular(j: int, k: int, n: int, m: int, seed: int, budget: int = 200_000) -> CssCode:
    """Wrap :func:`mc_search_regular` into a code.

    :raises SearchFailureError: If the search finds nothing within the budget.
    """
    h = mc_search_regular(j, k, n, m, seed, budget)
    if h is None:
        raise SearchFailureError(f"no connected ({j},{k}) regular {m}x{n} matrix", budget)
    provenance = {"family": "regular", "j": j, "k": k, "n": n, "m": m, "seed": seed}
    return CssCode.from_matrix(h, provenance)


@dataclass(frozen=True)
class LowWeightWord:
    """A vector found by the audit.

    :cvar support: Positions of the ones.
    :cvar syndrome_weight: Weight of ``H x``; 0 for codewords.
    :cvar origin: Which audit step produced it.
    """

    support: Tuple[int, ...]
    syndrome_weight: int
    origin: str

    @property
    def weight(self) -> int:
        return len(self.support)


@dataclass
class AuditReport:
    """Codewords outside the dual and near-codewords found by :func:`audit_low_weight`."""

    max_weight: int
    codewords: List[LowWeightWord] = field(default_factory=list)
    near_codewords: List[LowWeightWord] = field(default_factory=list)

    @property
    def min_codeword_weight(self) -> Optional[int]:
        return min((word.weight for word in self.codewords), default=None)

    def summary(self) -> Dict[str, Any]:
        by_weight: Dict[int, int] = {}
        by_origin: Dict[str, int] = {}
        for word in self.codewords:
            by_weight[word.weight] = by_weight.get(word.weight, 0) + 1
            by_origin[word.origin] = by_origin.get(word.origin, 0) + 1
        near = sorted({(word.weight, word.syndrome_weight) for word in self.near_codewords})
        return {
            "codewords": len(self.codewords),
            "min_weight": self.min_codeword_weight,
            "by_weight": dict(sorted(by_weight.items())),
            "by_origin": by_origin,
            "near_codewords": [f"({w},{v})" for w, v in near],
        }


def _block_layout(code: CssCode) -> Tuple[int, List[List[int]]]:
    try:
        return int(code.provenance["block_size"]), [list(b) for b in code.provenance["block_sets"]]
    except KeyError as err:
        raise PreconditionError(f"{code.code_id} does not record its cyclic blocks") from err


def _block_word(code: CssCode, parts: Dict[int, Sequence[int]]) -> BitVec:
    size, _ = _block_layout(code)
    word = np.zeros(code.n, dtype=np.uint8)
    for block, support in parts.items():
        word[block * size + np.asarray(list(support), dtype=np.int64) % size] ^= 1
    return word


def swap_codeword(code: CssCode, block_i: int, block_j: int, shift: int = 0) -> BitVec:
    """The word holding column ``shift`` of block j in block i and column ``shift`` of block i in block j.

    Cyclic blocks commute, so ``A_i A_j e + A_j A_i e = 0`` and the word is a codeword of weight at most the sum of
    the two block weights.
    """
    size, sets = _block_layout(code)
    if block_i == block_j or not (0 <= block_i < len(sets) and 0 <= block_j < len(sets)):
        raise InvalidArgumentError(f"need two distinct blocks in [0, {len(sets)}), got {block_i} and {block_j}")
    column_of = lambda block: [(shift - e) % size for e in sets[block]]  # noqa: E731
    return _block_word(code, {block_i: column_of(block_j), block_j: column_of(block_i)})


def reversed_near_codeword(code: CssCode, block: int, shift: int = 0) -> BitVec:
    """Column ``shift`` of a cyclic block placed in that block; its syndrome is a column of the squared block."""
    size, sets = _block_layout(code)
    if not 0 <= block < len(sets):
        raise InvalidArgumentError(f"block {block} out of range")
    return _block_word(code, {block: [(shift - e) % size for e in sets[block]]})


def _structural_words(code: CssCode) -> List[Tuple[BitVec, str]]:
    words: List[Tuple[BitVec, str]] = []
    family = code.provenance.get("family")
    if family == "bicycle":
        size, sets = _block_layout(code)
        h0 = gf2core.hstack(*(gf2core.cyclic_matrix(size, block) for block in sets))
        for row in code.provenance.get("deleted_rows", []):
            word = np.zeros(code.n, dtype=np.uint8)
            word[list(h0.rows[row])] = 1
            words.append((word, "deleted_row"))
    if code.subcode is not None:
        q = code.provenance.get("q")
        if q is not None and q % 2 == 0:
            base = np.asarray(hyperoval(int(q)), dtype=np.int64)
            modulus = code.subcode.dsc.n_cols
            for shift in range(min(modulus, 64)):
                word = np.zeros(code.n, dtype=np.uint8)
                word[(base + shift) % modulus] = 1
                words.append((word, "hyperoval"))
    if "block_sets" in code.provenance and code.subcode is None:
        _, sets = _block_layout(code)
        for block in range(len(sets) - 1):
            words.append((swap_codeword(code, block, block + 1), "swap"))
    return words


def audit_low_weight(code: CssCode, max_weight: int, effort: int = 200, seed: int = 0) -> AuditReport:
    """Look for low-weight codewords outside the dual and for near-codewords.

    Structural words always run: deleted bicycle rows, swap words of adjacent cyclic blocks, unicycle hyperovals
    and per-block reversed columns. Then ``effort`` randomized trials flip a few bits of a random check's support,
    decode the syndrome, and keep the resulting codeword if it is light and outside the dual. The audit falsifies
    distance claims; it does not certify them.

    :param code: The code to audit.
    :type code: CssCode
    :param max_weight: The heaviest word worth reporting.
    :type max_weight: int
    :param effort: The number of randomized trials.
    :type effort: int
    :param seed: Seed of the randomized trials.
    :type seed: int
    :returns: Every reported codeword has zero syndrome and lies outside the row space.
    :rtype: AuditReport
    """
    report = AuditReport(max_weight)
    seen = set()

    def consider(word: BitVec, origin: str) -> None:
        support = tuple(np.flatnonzero(word).tolist())
        if not support or len(support) > max_weight or support in seen:
            return
        syn_weight = int(gf2core.syndrome(code.h, word).sum())
        if syn_weight == 0 and gf2core.in_row_space(code.h, word):
            return
        seen.add(support)
        target = report.codewords if syn_weight == 0 else report.near_codewords
        target.append(LowWeightWord(support, syn_weight, origin))

    for word, origin in _structural_words(code):
        consider(word, origin)
    if "block_sets" in code.provenance:
        _, sets = _block_layout(code)
        for block in range(len(sets)):
            consider(reversed_near_codeword(code, block), "reversed_block")

    rng = np.random.default_rng(seed)
    for _ in range(effort):
        row = code.h.rows[int(rng.integers(code.m))]
        flips = int(rng.integers(1, max(2, len(row) // 2 + 1)))
        start = np.zeros(code.n, dtype=np.uint8)
        start[rng.choice(np.asarray(row), size=min(flips, len(row)), replace=False)] = 1
        outcome = decoder.sp_decode_binary(
            code.h, gf2core.syndrome(code.h, start), np.full(code.n, max(flips / code.n, 1e-3)), max_iter=50
        )
        if outcome.converged:
            consider(start ^ outcome.estimate, "decoder")
    _LOGGER.info("audit of %s - %s", code.code_id, report.summary())
    return report
