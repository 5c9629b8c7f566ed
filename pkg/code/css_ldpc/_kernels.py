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

"""Numba kernels for the hot loops of the library.

Notes
-----
Packed rows are ``uint64`` arrays; column ``c`` lives in word ``c >> 6`` at bit ``c & 63``.

Tanner graphs are passed as CSR style arrays:

- ``chk_ptr`` / ``chk_var``: the variables touched by each check, edge ids are positions in ``chk_var``.
- ``var_ptr`` / ``var_edge``: the edge ids incident on each variable.

Messages are log-likelihood ratios ``log P(0) / P(1)``.
"""

import numpy as np
from numba import njit

LLR_CLIP = 30.0
PROB_FLOOR = 1e-30
_TANH_LIMIT = np.tanh(0.5 * LLR_CLIP)


@njit(cache=True)
def pack_rows(indptr: np.ndarray, indices: np.ndarray, n_words: int) -> np.ndarray:
    """Pack CSR rows into ``uint64`` words."""
    n_rows = indptr.shape[0] - 1
    out = np.zeros((n_rows, n_words), dtype=np.uint64)
    for r in range(n_rows):
        for p in range(indptr[r], indptr[r + 1]):
            col = indices[p]
            out[r, col >> 6] |= np.uint64(1) << np.uint64(col & 63)
    return out


@njit(cache=True)
def _has_bit(words: np.ndarray, col: int) -> bool:
    return (words[col >> 6] & (np.uint64(1) << np.uint64(col & 63))) != np.uint64(0)


@njit(cache=True)
def _lowest_bit(words: np.ndarray) -> int:
    for w in range(words.shape[0]):
        word = words[w]
        if word != np.uint64(0):
            for b in range(64):
                if ((word >> np.uint64(b)) & np.uint64(1)) != np.uint64(0):
                    return w * 64 + b
    return -1


@njit(cache=True)
def rref_inplace(rows: np.ndarray, n_cols: int):
    """Reduce packed rows to reduced row-echelon form.

    Pivots are chosen column by column from the left, so each pivot is the lowest-index column that still has one.

    Parameters
    ----------
    rows : ndarray
        ``(n_rows, n_words)`` packed matrix, overwritten with the reduced form.
    n_cols : int
        Number of meaningful columns.

    Returns
    -------
    rank : int
    pivots : ndarray
        Pivot column of each of the first ``rank`` rows.
    """
    n_rows, n_words = rows.shape
    pivots = np.empty(min(n_rows, n_cols), dtype=np.int64)
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        word = col >> 6
        pivot = -1
        for r in range(rank, n_rows):
            if _has_bit(rows[r], col):
                pivot = r
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for w in range(n_words):
                tmp = rows[rank, w]
                rows[rank, w] = rows[pivot, w]
                rows[pivot, w] = tmp
        # the pivot row is zero left of ``col``
        for r in range(n_rows):
            if r != rank and _has_bit(rows[r], col):
                for w in range(word, n_words):
                    rows[r, w] ^= rows[rank, w]
        pivots[rank] = col
        rank += 1
    return rank, pivots[:rank].copy()


@njit(cache=True)
def reduce_packed(basis: np.ndarray, pivots: np.ndarray, vec: np.ndarray) -> np.ndarray:
    """Reduce a packed vector against a reduced row-echelon basis."""
    out = vec.copy()
    for i in range(pivots.shape[0]):
        if _has_bit(out, pivots[i]):
            for w in range(out.shape[0]):
                out[w] ^= basis[i, w]
    return out


@njit(cache=True)
def independent_mask(rows: np.ndarray) -> np.ndarray:
    """Flag each row that is not in the span of the rows before it."""
    n_rows, n_words = rows.shape
    basis = np.zeros((n_rows, n_words), dtype=np.uint64)
    lead = np.empty(n_rows, dtype=np.int64)
    keep = np.zeros(n_rows, dtype=np.bool_)
    size = 0
    for r in range(n_rows):
        vec = rows[r].copy()
        for i in range(size):
            if _has_bit(vec, lead[i]):
                for w in range(n_words):
                    vec[w] ^= basis[i, w]
        low = _lowest_bit(vec)
        if low >= 0:
            for w in range(n_words):
                basis[size, w] = vec[w]
            lead[size] = low
            keep[r] = True
            size += 1
    return keep


@njit(cache=True)
def _satisfies(chk_ptr: np.ndarray, chk_var: np.ndarray, hard: np.ndarray, syndrome: np.ndarray) -> bool:
    for c in range(chk_ptr.shape[0] - 1):
        parity = 0
        for p in range(chk_ptr[c], chk_ptr[c + 1]):
            parity ^= hard[chk_var[p]]
        if parity != syndrome[c]:
            return False
    return True


@njit(cache=True)
def _clip(value: float) -> float:
    if value > LLR_CLIP:
        return LLR_CLIP
    if value < -LLR_CLIP:
        return -LLR_CLIP
    return value


@njit(cache=True)
def _check_pass(
    chk_ptr: np.ndarray,
    syndrome: np.ndarray,
    v2c: np.ndarray,
    c2v: np.ndarray,
    fwd: np.ndarray,
    bwd: np.ndarray,
) -> None:
    """Tanh-rule check update with prefix and suffix products."""
    for c in range(chk_ptr.shape[0] - 1):
        start = chk_ptr[c]
        deg = chk_ptr[c + 1] - start
        acc = 1.0
        for t in range(deg):
            fwd[t] = acc
            acc *= np.tanh(0.5 * v2c[start + t])
        acc = 1.0
        for t in range(deg - 1, -1, -1):
            bwd[t] = acc
            acc *= np.tanh(0.5 * v2c[start + t])
        sign = -1.0 if syndrome[c] else 1.0
        for t in range(deg):
            prod = sign * fwd[t] * bwd[t]
            if prod > _TANH_LIMIT:
                prod = _TANH_LIMIT
            elif prod < -_TANH_LIMIT:
                prod = -_TANH_LIMIT
            c2v[start + t] = _clip(2.0 * np.arctanh(prod))


@njit(cache=True)
def _max_degree(ptr: np.ndarray) -> int:
    best = 1
    for i in range(ptr.shape[0] - 1):
        deg = ptr[i + 1] - ptr[i]
        if deg > best:
            best = deg
    return best


@njit(cache=True)
def sp_binary(
    chk_ptr: np.ndarray,
    chk_var: np.ndarray,
    var_ptr: np.ndarray,
    var_edge: np.ndarray,
    syndrome: np.ndarray,
    prior_llr: np.ndarray,
    max_iter: int,
):
    """Flooding sum-product decoder in syndrome form.

    The hard decision is tested after every iteration and the decoder stops at the first one that reproduces the
    syndrome. Iteration 0 is the prior alone.

    Returns
    -------
    hard : ndarray of uint8
    iterations : int
    converged : bool
    """
    n = prior_llr.shape[0]
    n_edges = chk_var.shape[0]
    hard = np.zeros(n, dtype=np.uint8)
    for v in range(n):
        if prior_llr[v] < 0.0:
            hard[v] = 1
    if _satisfies(chk_ptr, chk_var, hard, syndrome):
        return hard, 0, True

    v2c = np.empty(n_edges)
    for e in range(n_edges):
        v2c[e] = prior_llr[chk_var[e]]
    c2v = np.zeros(n_edges)
    width = _max_degree(chk_ptr)
    fwd = np.empty(width)
    bwd = np.empty(width)

    for it in range(1, max_iter + 1):
        _check_pass(chk_ptr, syndrome, v2c, c2v, fwd, bwd)
        for v in range(n):
            total = prior_llr[v]
            for p in range(var_ptr[v], var_ptr[v + 1]):
                total += c2v[var_edge[p]]
            for p in range(var_ptr[v], var_ptr[v + 1]):
                e = var_edge[p]
                v2c[e] = _clip(total - c2v[e])
            hard[v] = 1 if total < 0.0 else 0
        if _satisfies(chk_ptr, chk_var, hard, syndrome):
            return hard, it, True
    return hard, max_iter, False


@njit(cache=True)
def _lse(a: float, b: float) -> float:
    if a > b:
        return a + np.log1p(np.exp(b - a))
    return b + np.log1p(np.exp(a - b))


@njit(cache=True)
def sp_quaternary(
    chk_ptr: np.ndarray,
    chk_var: np.ndarray,
    var_ptr: np.ndarray,
    var_edge: np.ndarray,
    syndrome_x: np.ndarray,
    syndrome_z: np.ndarray,
    log_joint: np.ndarray,
    max_iter: int,
):
    """Sum-product over 4-state qubit variables sharing one check structure for both components.

    ``log_joint[v, 2 * ex + ez]`` is the log prior of qubit ``v``. Checks constrain one binary component each; the
    joint prior couples the two message streams at the variables. A component whose syndrome is satisfied is frozen
    from that iteration on, so a product-form prior reproduces two independent binary decodes exactly.

    Returns
    -------
    hard_x, hard_z : ndarray of uint8
    iterations : int
    converged : bool
    """
    n = log_joint.shape[0]
    n_edges = chk_var.shape[0]
    hard_x = np.zeros(n, dtype=np.uint8)
    hard_z = np.zeros(n, dtype=np.uint8)
    base_x = np.empty(n)
    base_z = np.empty(n)
    for v in range(n):
        l00 = log_joint[v, 0]
        l01 = log_joint[v, 1]
        l10 = log_joint[v, 2]
        l11 = log_joint[v, 3]
        base_x[v] = _lse(l00, l01) - _lse(l10, l11)
        base_z[v] = _lse(l00, l10) - _lse(l01, l11)
        hard_x[v] = 1 if base_x[v] < 0.0 else 0
        hard_z[v] = 1 if base_z[v] < 0.0 else 0
    done_x = _satisfies(chk_ptr, chk_var, hard_x, syndrome_x)
    done_z = _satisfies(chk_ptr, chk_var, hard_z, syndrome_z)
    if done_x and done_z:
        return hard_x, hard_z, 0, True

    v2c_x = np.empty(n_edges)
    v2c_z = np.empty(n_edges)
    for e in range(n_edges):
        v2c_x[e] = _clip(base_x[chk_var[e]])
        v2c_z[e] = _clip(base_z[chk_var[e]])
    c2v_x = np.zeros(n_edges)
    c2v_z = np.zeros(n_edges)
    width = _max_degree(chk_ptr)
    fwd = np.empty(width)
    bwd = np.empty(width)

    for it in range(1, max_iter + 1):
        if not done_x:
            _check_pass(chk_ptr, syndrome_x, v2c_x, c2v_x, fwd, bwd)
        if not done_z:
            _check_pass(chk_ptr, syndrome_z, v2c_z, c2v_z, fwd, bwd)
        for v in range(n):
            in_x = 0.0
            in_z = 0.0
            for p in range(var_ptr[v], var_ptr[v + 1]):
                in_x += c2v_x[var_edge[p]]
                in_z += c2v_z[var_edge[p]]
            l00 = log_joint[v, 0]
            l01 = log_joint[v, 1]
            l10 = log_joint[v, 2]
            l11 = log_joint[v, 3]
            if not done_x:
                bx = _lse(l00, l01 - in_z) - _lse(l10, l11 - in_z)
                total_x = bx + in_x
                for p in range(var_ptr[v], var_ptr[v + 1]):
                    e = var_edge[p]
                    v2c_x[e] = _clip(total_x - c2v_x[e])
                hard_x[v] = 1 if total_x < 0.0 else 0
            if not done_z:
                bz = _lse(l00, l10 - in_x) - _lse(l01, l11 - in_x)
                total_z = bz + in_z
                for p in range(var_ptr[v], var_ptr[v + 1]):
                    e = var_edge[p]
                    v2c_z[e] = _clip(total_z - c2v_z[e])
                hard_z[v] = 1 if total_z < 0.0 else 0
        if not done_x:
            done_x = _satisfies(chk_ptr, chk_var, hard_x, syndrome_x)
        if not done_z:
            done_z = _satisfies(chk_ptr, chk_var, hard_z, syndrome_z)
        if done_x and done_z:
            return hard_x, hard_z, it, True
    return hard_x, hard_z, max_iter, False


@njit(cache=True)
def _propose(cols: np.ndarray, h: np.ndarray):
    """Draw a weight-preserving double swap; returns (c1, a, c2, b) or c1 = -1 when the draw is invalid."""
    n, j = cols.shape
    c1 = np.random.randint(0, n)
    c2 = np.random.randint(0, n)
    a = np.random.randint(0, j)
    b = np.random.randint(0, j)
    if c1 == c2:
        return -1, a, c2, b
    r1 = cols[c1, a]
    r2 = cols[c2, b]
    if r1 == r2 or h[r1, c2] != 0 or h[r2, c1] != 0:
        return -1, a, c2, b
    return c1, a, c2, b


@njit(cache=True)
def _apply_swap(cols: np.ndarray, h: np.ndarray, c1: int, a: int, c2: int, b: int) -> None:
    r1 = cols[c1, a]
    r2 = cols[c2, b]
    h[r1, c1] = 0
    h[r1, c2] = 1
    h[r2, c2] = 0
    h[r2, c1] = 1
    cols[c1, a] = r2
    cols[c2, b] = r1


@njit(cache=True)
def anneal_regular(
    cols: np.ndarray, h: np.ndarray, scramble: int, budget: int, t_start: float, t_end: float, seed: int
):
    """Metropolis search for an even-overlap regular matrix.

    Moves replace entries ``(r1, c1), (r2, c2)`` by ``(r1, c2), (r2, c1)`` so every row and column weight is kept.
    The cost is the number of row pairs with odd overlap. Up to ``scramble`` unconditional moves run first, then
    ``budget`` Metropolis proposals under a geometric temperature schedule from ``t_start`` to ``t_end``.

    Parameters
    ----------
    cols : ndarray
        ``(n, j)`` row indices of each column; updated in place.
    h : ndarray
        ``(m, n)`` dense ``uint8`` matrix; updated in place.

    Returns
    -------
    cost : int
        Odd-overlap pairs left, 0 on success.
    used : int
        Proposals spent in the Metropolis phase.
    """
    np.random.seed(seed)
    m, n = h.shape
    j = cols.shape[1]

    done = 0
    for _ in range(100 * scramble):
        if done == scramble:
            break
        c1, a, c2, b = _propose(cols, h)
        if c1 >= 0:
            _apply_swap(cols, h, c1, a, c2, b)
            done += 1

    overlap = np.zeros((m, m), dtype=np.int64)
    for c in range(n):
        for s in range(j):
            for t in range(s + 1, j):
                overlap[cols[c, s], cols[c, t]] += 1
                overlap[cols[c, t], cols[c, s]] += 1
    cost = 0
    for r in range(m):
        for x in range(r + 1, m):
            cost += overlap[r, x] & 1
    if cost == 0:
        return 0, 0

    ratio = (t_end / t_start) ** (1.0 / max(budget - 1, 1))
    temp = t_start
    for move in range(budget):
        if move > 0:
            temp *= ratio
        c1, a, c2, b = _propose(cols, h)
        if c1 < 0:
            continue
        r1 = cols[c1, a]
        r2 = cols[c2, b]
        delta = 0
        for x in range(m):
            if x == r1 or x == r2 or h[x, c1] == h[x, c2]:
                continue
            delta += 1 if (overlap[r1, x] & 1) == 0 else -1
            delta += 1 if (overlap[r2, x] & 1) == 0 else -1
        if delta > 0 and np.random.random() >= np.exp(-delta / temp):
            continue
        for x in range(m):
            if x == r1 or x == r2:
                continue
            d = np.int64(h[x, c2]) - np.int64(h[x, c1])
            if d != 0:
                overlap[r1, x] += d
                overlap[x, r1] += d
                overlap[r2, x] -= d
                overlap[x, r2] -= d
        _apply_swap(cols, h, c1, a, c2, b)
        cost += delta
        if cost == 0:
            return 0, move + 1
    return cost, budget


@njit(cache=True)
def _balance_cost(weight: int, low: int, high: int, centre: float) -> float:
    viol = 0
    if weight < low:
        viol = low - weight
    elif weight > high:
        viol = weight - high
    return 1000.0 * viol * viol + (weight - centre) ** 2


@njit(cache=True)
def _mark(col: int, bad: bool, bad_list: np.ndarray, bad_pos: np.ndarray, n_bad: int) -> int:
    if bad and bad_pos[col] < 0:
        bad_pos[col] = n_bad
        bad_list[n_bad] = col
        return n_bad + 1
    if not bad and bad_pos[col] >= 0:
        slot = bad_pos[col]
        last = bad_list[n_bad - 1]
        bad_list[slot] = last
        bad_pos[last] = slot
        bad_pos[col] = -1
        return n_bad - 1
    return n_bad


@njit(cache=True)
def _shift_row(
    row: int,
    step: int,
    indptr: np.ndarray,
    indices: np.ndarray,
    weights: np.ndarray,
    low: int,
    high: int,
    centre: float,
    bad_list: np.ndarray,
    bad_pos: np.ndarray,
    n_bad: int,
):
    delta = 0.0
    for p in range(indptr[row], indptr[row + 1]):
        c = indices[p]
        delta -= _balance_cost(weights[c], low, high, centre)
        weights[c] += step
        delta += _balance_cost(weights[c], low, high, centre)
        n_bad = _mark(c, weights[c] < low or weights[c] > high, bad_list, bad_pos, n_bad)
    return delta, n_bad


@njit(cache=True)
def rebalance_rows(
    indptr: np.ndarray,
    indices: np.ndarray,
    col_ptr: np.ndarray,
    col_rows: np.ndarray,
    weights: np.ndarray,
    removed: np.ndarray,
    low: int,
    high: int,
    centre: float,
    temp: float,
    budget: int,
    seed: int,
):
    """Swap deleted and kept rows until every column weight lies in ``[low, high]``.

    Each proposal starts from a column outside the band: an overweight column deletes one of its kept rows, an
    underweight one restores one of its deleted rows, and a random row moves the other way so the number of deleted
    rows is kept. The cost of a column is ``1000 viol² + (w - centre)²``; proposals are accepted under the Metropolis
    rule at temperature ``temp``.

    Parameters
    ----------
    indptr, indices : ndarray
        CSR layout of the rows.
    col_ptr, col_rows : ndarray
        CSR layout of the transpose, the rows of each column.
    weights : ndarray
        ``int64`` column weights with the deleted rows removed; updated in place.
    removed : ndarray
        ``uint8`` deletion mask over the rows; updated in place.

    Returns
    -------
    n_bad : int
        Columns still outside the band, 0 on success.
    used : int
        Proposals spent.
    """
    np.random.seed(seed)
    n_rows = removed.shape[0]
    n_cols = weights.shape[0]
    gone = np.empty(n_rows, dtype=np.int64)
    slot = np.full(n_rows, -1, dtype=np.int64)
    n_gone = 0
    for r in range(n_rows):
        if removed[r]:
            gone[n_gone] = r
            slot[r] = n_gone
            n_gone += 1
    bad_list = np.empty(n_cols, dtype=np.int64)
    bad_pos = np.full(n_cols, -1, dtype=np.int64)
    n_bad = 0
    for c in range(n_cols):
        n_bad = _mark(c, weights[c] < low or weights[c] > high, bad_list, bad_pos, n_bad)
    if n_gone == 0 or n_gone == n_rows:
        return n_bad, 0

    for move in range(budget):
        if n_bad == 0:
            return 0, move
        c = bad_list[np.random.randint(n_bad)]
        deg = col_ptr[c + 1] - col_ptr[c]
        if deg == 0:
            continue
        pick = col_rows[col_ptr[c] + np.random.randint(deg)]
        if weights[c] > high:
            if removed[pick]:
                continue
            a = gone[np.random.randint(n_gone)]
            b = pick
        else:
            if not removed[pick]:
                continue
            a = pick
            b = np.random.randint(n_rows)
            if removed[b]:
                continue
        d_a, n_bad = _shift_row(a, 1, indptr, indices, weights, low, high, centre, bad_list, bad_pos, n_bad)
        d_b, n_bad = _shift_row(b, -1, indptr, indices, weights, low, high, centre, bad_list, bad_pos, n_bad)
        delta = d_a + d_b
        if delta <= 0.0 or np.random.random() < np.exp(-delta / temp):
            s = slot[a]
            gone[s] = b
            slot[b] = s
            slot[a] = -1
            removed[a] = 0
            removed[b] = 1
        else:
            _, n_bad = _shift_row(b, 1, indptr, indices, weights, low, high, centre, bad_list, bad_pos, n_bad)
            _, n_bad = _shift_row(a, -1, indptr, indices, weights, low, high, centre, bad_list, bad_pos, n_bad)
    return n_bad, budget
