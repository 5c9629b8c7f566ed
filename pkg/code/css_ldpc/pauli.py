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

"""Pauli operators and stabilizer matrices in the binary symplectic picture.

An n-qubit Pauli operator is a pair of bit vectors ``(x | z)`` plus a phase. Stabilizer rows are stored in that
``(x | z)`` layout. Errors are applied in the reversed ``(z | x)`` layout so that the syndrome is the ordinary
product ``A e`` over GF(2).
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from css_ldpc import gf2core
from css_ldpc.errors import InvalidArgumentError, PreconditionError, RankDeficientError, StabilizerValidationError
from css_ldpc.gf2core import BitVec, SparseBinaryMatrix

_LOGGER = logging.getLogger(__name__)
_LABEL_RE = re.compile(r"^(?P<sign>[+-]?)(?P<imag>i?)(?P<body>[IXYZ]*)$")
_SYMBOLS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}


@dataclass(frozen=True, eq=False)
class PauliOperator:
    """The operator ``i**phase`` times a tensor product of I, X, Y, Z.

    Position j carries X iff ``x[j] = 1, z[j] = 0``, Z iff ``x[j] = 0, z[j] = 1`` and Y iff both are set, with
    ``Y = iXZ``.

    :cvar x: The X part.
    :cvar z: The Z part.
    :cvar phase: The power of i, in 0..3.
    """

    x: BitVec
    z: BitVec
    phase: int = 0

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=np.uint8)
        z = np.asarray(self.z, dtype=np.uint8)
        if x.ndim != 1 or x.shape != z.shape:
            raise InvalidArgumentError(f"x and z must be equal-length vectors, got {x.shape} and {z.shape}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse labels such as ``XZZXI``, ``-YI`` or ``-iXIZ``."""
        match = _LABEL_RE.match(label.strip())
        if not match:
            raise InvalidArgumentError(f"not a Pauli label: {label!r}")
        body = match.group("body")
        x = np.array([sym in "XY" for sym in body], dtype=np.uint8)
        z = np.array([sym in "ZY" for sym in body], dtype=np.uint8)
        phase = (2 if match.group("sign") == "-" else 0) + (1 if match.group("imag") else 0)
        return cls(x, z, phase)

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def single(cls, n: int, position: int, symbol: str) -> "PauliOperator":
        """Return the operator acting as ``symbol`` on one qubit and as I elsewhere."""
        if symbol not in ("X", "Y", "Z") or not 0 <= position < n:
            raise InvalidArgumentError(f"cannot place {symbol!r} at {position} of {n} qubits")
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        x[position] = symbol in "XY"
        z[position] = symbol in "ZY"
        return cls(x, z)

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    def to_label(self) -> str:
        return _PHASE_PREFIX[self.phase] + "".join(_SYMBOLS[(int(a), int(b))] for a, b in zip(self.x, self.z))

    def symplectic(self) -> BitVec:
        """The ``(x | z)`` string used for stabilizer rows."""
        return np.concatenate((self.x, self.z))

    def error_string(self) -> BitVec:
        """The reversed ``(z | x)`` string whose product with a stabilizer matrix is the syndrome."""
        return np.concatenate((self.z, self.x))

    def compose(self, other: "PauliOperator") -> "PauliOperator":
        """Return the product ``self * other`` with its phase."""
        if other.n != self.n:
            raise InvalidArgumentError(f"cannot compose {self.n}-qubit and {other.n}-qubit operators")
        x1, z1 = self.x.astype(np.int64), self.z.astype(np.int64)
        x2, z2 = other.x.astype(np.int64), other.z.astype(np.int64)
        x3, z3 = x1 ^ x2, z1 ^ z2
        phase = self.phase + other.phase + int(np.sum(x1 * z1 + x2 * z2 + 2 * z1 * x2 - x3 * z3))
        return PauliOperator(x3.astype(np.uint8), z3.astype(np.uint8), phase)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return self.compose(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliOperator):
            return NotImplemented
        return self.phase == other.phase and np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self) -> int:
        return hash((self.phase, self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        return f"PauliOperator({self.to_label()!r})"


@dataclass(frozen=True)
class StabilizerMatrix:
    """Mutually commuting stabilizer generators as a binary ``(A1 | A2)`` matrix.

    :cvar n: The number of qubits.
    :cvar a: The generators, one row each, in ``(x | z)`` layout.
    :cvar name: A label for reports.
    :cvar phases_discarded: Whether any input generator carried a non-trivial phase.
    :cvar redundant_rows: Dependent generators kept as metadata only.
    """

    n: int
    a: SparseBinaryMatrix
    name: str = ""
    phases_discarded: bool = False
    redundant_rows: Tuple[PauliOperator, ...] = field(default=(), compare=False)

    @property
    def a1(self) -> np.ndarray:
        return self.a.to_dense()[:, : self.n]

    @property
    def a2(self) -> np.ndarray:
        return self.a.to_dense()[:, self.n :]

    def generators(self) -> List[PauliOperator]:
        dense = self.a.to_dense()
        return [PauliOperator(row[: self.n], row[self.n :]) for row in dense]


def twisted_product(left: npt.ArrayLike, right: npt.ArrayLike) -> int:
    """Return ``x·z' + x'·z`` mod 2 for two ``(x | z)`` strings; 0 iff the operators commute.

    :raises InvalidArgumentError: If the lengths differ or are odd.
    """
    r = np.asarray(left, dtype=np.int64)
    s = np.asarray(right, dtype=np.int64)
    if r.ndim != 1 or r.shape != s.shape or r.shape[0] % 2:
        raise InvalidArgumentError(f"twisted product needs equal even lengths, got {r.shape} and {s.shape}")
    n = r.shape[0] // 2
    return int((r[:n] @ s[n:] + s[:n] @ r[n:]) % 2)


def _commutation_table(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    x = x.astype(np.int64)
    z = z.astype(np.int64)
    return (x @ z.T + z @ x.T) % 2


def validate_stabilizers(
    operators: Sequence[PauliOperator], name: str = "", redundant: Sequence[PauliOperator] = ()
) -> StabilizerMatrix:
    """Check that generators commute pairwise and pack them into a stabilizer matrix.

    Phases are dropped; ``phases_discarded`` records whether any was non-trivial.

    :param operators: The generators.
    :type operators: Sequence[PauliOperator]
    :param name: A label stored on the result.
    :type name: str
    :param redundant: Dependent generators to record as metadata.
    :type redundant: Sequence[PauliOperator]
    :returns: The ``(A1 | A2)`` matrix, one row per generator.
    :rtype: StabilizerMatrix
    :raises InvalidArgumentError: If the operators act on different numbers of qubits.
    :raises StabilizerValidationError: If a pair anticommutes; the first such pair is reported.
    """
    if not operators:
        raise InvalidArgumentError("at least one stabilizer generator is required")
    n = operators[0].n
    if any(op.n != n for op in operators):
        raise InvalidArgumentError(f"generators act on different qubit counts: {[op.n for op in operators]}")
    x = np.stack([op.x for op in operators])
    z = np.stack([op.z for op in operators])
    clashes = np.argwhere(np.triu(_commutation_table(x, z), k=1))
    if clashes.size:
        first, second = (int(v) for v in clashes[0])
        raise StabilizerValidationError(
            (first, second),
            f"stabilizer rows {first} ({operators[first].to_label()}) and "
            f"{second} ({operators[second].to_label()}) anticommute",
        )
    phases_discarded = any(op.phase for op in operators)
    if phases_discarded:
        _LOGGER.warning("discarding generator phases for %s", name or "stabilizer matrix")
    a = SparseBinaryMatrix.from_dense(np.hstack((x, z)))
    return StabilizerMatrix(n, a, name, phases_discarded, tuple(redundant))


def css_embed(h: SparseBinaryMatrix, name: str = "") -> StabilizerMatrix:
    """Embed a dual-containing parity-check matrix as the stabilizer matrix ``diag(H, H)``.

    The first ``M`` rows are X-type generators and detect Z errors; the last ``M`` rows are Z-type and detect X errors.

    :raises PreconditionError: If ``H Hᵀ`` is not zero.
    """
    if not gf2core.is_self_orthogonal(h):
        raise PreconditionError(f"{h!r} is not self-orthogonal, so diag(H, H) would not commute")
    n = h.n_cols
    rows = h.rows + tuple(tuple(col + n for col in row) for row in h.rows)
    return StabilizerMatrix(n, SparseBinaryMatrix(2 * h.n_rows, 2 * n, rows), name)


def pauli_syndrome(stabilizers: StabilizerMatrix, error: PauliOperator) -> BitVec:
    """Return the syndrome bits; bit m is 1 iff the error anticommutes with generator m."""
    if error.n != stabilizers.n:
        raise InvalidArgumentError(f"error acts on {error.n} qubits, code has {stabilizers.n}")
    return gf2core.mul_vec(stabilizers.a, error.error_string())


def is_degenerate_pair(stabilizers: StabilizerMatrix, first: PauliOperator, second: PauliOperator) -> bool:
    """Check whether two errors differ by an element of the stabilizer group, ignoring phases."""
    if first.n != stabilizers.n or second.n != stabilizers.n:
        raise InvalidArgumentError(f"errors must act on {stabilizers.n} qubits")
    return gf2core.in_row_space(stabilizers.a, first.symplectic() ^ second.symplectic())


_STEANE_ROWS = ("0001111", "0110011", "1010101")
_SHOR_GENERATORS = (
    "ZZIIIIIII",
    "IZZIIIIII",
    "IIIZZIIII",
    "IIIIZZIII",
    "IIIIIIZZI",
    "IIIIIIIZZ",
    "XXXXXXIII",
    "IIIXXXXXX",
)
_FIVE_QUBIT_GENERATORS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")
_FIVE_QUBIT_REDUNDANT = ("ZZXIX",)


def steane_parity_check() -> SparseBinaryMatrix:
    """The [7,4] Hamming parity-check matrix; column j reads ``j + 1`` in binary, top row most significant."""
    return SparseBinaryMatrix.from_dense([[int(bit) for bit in row] for row in _STEANE_ROWS])


def _shor() -> StabilizerMatrix:
    return validate_stabilizers([PauliOperator.from_label(lbl) for lbl in _SHOR_GENERATORS], name="shor")


def _steane() -> StabilizerMatrix:
    return css_embed(steane_parity_check(), name="steane")


def _five_qubit() -> StabilizerMatrix:
    return validate_stabilizers(
        [PauliOperator.from_label(lbl) for lbl in _FIVE_QUBIT_GENERATORS],
        name="five_qubit",
        redundant=[PauliOperator.from_label(lbl) for lbl in _FIVE_QUBIT_REDUNDANT],
    )


_DEMO_CODES: dict = {"shor": _shor, "steane": _steane, "five_qubit": _five_qubit}


def demo_code(name: str) -> StabilizerMatrix:
    """Return one of the compiled-in example codes: ``shor``, ``steane`` or ``five_qubit``."""
    builder: Optional[Callable[[], StabilizerMatrix]] = _DEMO_CODES.get(name.replace("-", "_"))
    if builder is None:
        raise InvalidArgumentError(f"unknown demo code {name!r}; choose from {sorted(_DEMO_CODES)}")
    return builder()


def single_qubit_errors(n: int) -> List[Tuple[str, PauliOperator]]:
    """The 3n single-position errors labelled like ``X1``, ``Z3`` (1-based positions)."""
    return [
        (f"{symbol}{position + 1}", PauliOperator.single(n, position, symbol))
        for position in range(n)
        for symbol in ("X", "Y", "Z")
    ]


def syndrome_table(
    stabilizers: StabilizerMatrix, errors: Sequence[Tuple[str, PauliOperator]]
) -> List[Tuple[str, List[int]]]:
    """Measurement outcomes (+1 commute, -1 anticommute) of every generator, one column per error."""
    outcomes = np.array([pauli_syndrome(stabilizers, op) for _, op in errors], dtype=np.int64).T
    return [
        (gen.to_label(), [1 - 2 * int(bit) for bit in row])
        for gen, row in zip(stabilizers.generators(), outcomes)
    ]


@dataclass(frozen=True)
class Gate:
    """One encoder gate: a Hadamard on ``target`` or a controlled-NOT from ``control`` to ``target``."""

    kind: str
    target: int
    control: Optional[int] = None
    stage: int = 1


@dataclass(frozen=True, eq=False)
class EncoderStructure:
    """The classical structure behind an encoding circuit for a dual-containing code.

    After permuting columns, ``H`` is row equivalent to ``[I | P]`` and ``P`` to ``[I | Q]`` with ``Q`` of size
    ``M x K``. The words ``[0, Q f, f]`` are codewords, and distinct ``f`` land in distinct cosets of the row space.

    :cvar column_permutation: ``column_permutation[t]`` is the original column at permuted position t.
    :cvar p: ``M x (N - M)``, columns in permuted order.
    :cvar q: ``M x K``.
    :cvar gates: Stage 1 CNOTs read off ``Q``, then stage 2 Hadamards and CNOTs read off ``P``, in original qubit
        numbering.
    """

    column_permutation: np.ndarray
    p: np.ndarray
    q: np.ndarray
    gates: Tuple[Gate, ...]

    @property
    def n(self) -> int:
        return int(self.column_permutation.shape[0])

    @property
    def m(self) -> int:
        return int(self.q.shape[0])

    @property
    def k(self) -> int:
        return int(self.q.shape[1])

    def coset_word(self, info: npt.ArrayLike) -> BitVec:
        """Map K information bits f to the codeword ``[0, Q f, f]`` in original column order."""
        bits = gf2core.as_bitvec(info, self.k, "information word")
        permuted = np.concatenate(
            (np.zeros(self.m, dtype=np.uint8), (self.q.astype(np.int64) @ bits) % 2, bits)
        ).astype(np.uint8)
        word = np.zeros(self.n, dtype=np.uint8)
        word[self.column_permutation] = permuted
        return word


def _rref_split(matrix: SparseBinaryMatrix) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    basis = matrix.row_basis
    dense = basis.dense(matrix.n_cols)
    pivots = basis.pivots.astype(np.int64)
    free = np.setdiff1d(np.arange(matrix.n_cols), pivots)
    return dense, pivots, free


def encoder_structure(h: SparseBinaryMatrix) -> EncoderStructure:
    """Derive the column permutation, ``P``, ``Q`` and the gate list of an encoder for ``H``.

    :param h: A full-rank dual-containing parity-check matrix with ``N > 2M``.
    :type h: SparseBinaryMatrix
    :returns: The encoder structure.
    :rtype: EncoderStructure
    :raises PreconditionError: If ``H`` is not self-orthogonal or ``N <= 2M``.
    :raises RankDeficientError: If ``H`` has dependent rows.
    """
    if not gf2core.is_self_orthogonal(h):
        raise PreconditionError(f"{h!r} is not self-orthogonal")
    found = gf2core.rank(h)
    if found != h.n_rows:
        raise RankDeficientError(found, h.n_rows)
    m, n = h.n_rows, h.n_cols
    if n <= 2 * m:
        raise PreconditionError(f"need N > 2M, got N={n}, M={m}")

    reduced, pivots, free = _rref_split(h)
    p_raw = reduced[:, free]
    p_matrix = SparseBinaryMatrix.from_dense(p_raw)
    reduced_p, pivots_p, free_p = _rref_split(p_matrix)
    if pivots_p.shape[0] != m:
        raise PreconditionError("P is not of full rank; H is not dual-containing")
    q = reduced_p[:, free_p].astype(np.uint8)
    p_order = np.concatenate((pivots_p, free_p))
    p = p_raw[:, p_order].astype(np.uint8)
    permutation = np.concatenate((pivots, free[p_order])).astype(np.int64)

    gates: List[Gate] = []
    for row, col in zip(*np.nonzero(q)):
        gates.append(Gate("CNOT", int(permutation[m + row]), int(permutation[2 * m + col]), stage=1))
    for row in range(m):
        gates.append(Gate("H", int(permutation[row]), stage=2))
    for row, col in zip(*np.nonzero(p)):
        gates.append(Gate("CNOT", int(permutation[m + col]), int(permutation[row]), stage=2))
    _LOGGER.debug("encoder for %r - K=%d, %d gates", h, q.shape[1], len(gates))
    return EncoderStructure(permutation, p, q, tuple(gates))
