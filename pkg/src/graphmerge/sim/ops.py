"""Clifford circuit vocabulary and measurement-outcome policies.

Every operation is a CliffordOp; the composite measurements (X basis, Y
basis, Bell) expand into primitive gates plus computational-basis
measurements, so both back-ends implement only the unitary set
{h, s, x, z, cnot, cz} and collapse in the Z basis.  Bell measurement on
(q1, q2) projects onto |0c> + (-1)^b |1 c~> and is realized as
CNOT(q1->q2), H(q1), measure q1 -> b, measure q2 -> c.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ForcedOutcomeImpossible

_UNITARY_KINDS = {"h", "s", "x", "z", "cnot", "cz"}
_MEASURE_KINDS = {"mz": 1, "mx": 1, "my": 1, "bell": 2}


@dataclass(frozen=True)
class CliffordOp:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _UNITARY_KINDS and self.kind not in _MEASURE_KINDS:
            raise ValueError(f"unknown op kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"op {self.kind} has repeated wires {self.qubits}")

    @property
    def is_measurement(self) -> bool:
        return self.kind in _MEASURE_KINDS

    @property
    def outcome_bits(self) -> int:
        return _MEASURE_KINDS.get(self.kind, 0)


def H(q: int) -> CliffordOp:
    return CliffordOp("h", (q,))


def S(q: int) -> CliffordOp:
    return CliffordOp("s", (q,))


def X(q: int) -> CliffordOp:
    return CliffordOp("x", (q,))


def Z(q: int) -> CliffordOp:
    return CliffordOp("z", (q,))


def CNOT(c: int, t: int) -> CliffordOp:
    return CliffordOp("cnot", (c, t))


def CZ(a: int, b: int) -> CliffordOp:
    return CliffordOp("cz", (a, b))


def MeasureZ(q: int) -> CliffordOp:
    return CliffordOp("mz", (q,))


def MeasureX(q: int) -> CliffordOp:
    return CliffordOp("mx", (q,))


def MeasureY(q: int) -> CliffordOp:
    return CliffordOp("my", (q,))


def BellMeasure(q1: int, q2: int) -> CliffordOp:
    return CliffordOp("bell", (q1, q2))


def expand(op: CliffordOp) -> list[CliffordOp]:
    """Rewrite an op as primitive gates and "mz" measurements.

    The expansions fix the post-measurement states: an X measurement
    leaves H|a>, a Y measurement the +-i eigenstate, matching the
    projector semantics.
    """
    if not op.is_measurement or op.kind == "mz":
        return [op]
    if op.kind == "mx":
        (q,) = op.qubits
        return [H(q), MeasureZ(q), H(q)]
    if op.kind == "my":
        # S Z = S^dagger; H S^dagger maps the +i eigenstate of Y to |0>.
        (q,) = op.qubits
        return [S(q), Z(q), H(q), MeasureZ(q), H(q), S(q)]
    q1, q2 = op.qubits
    return [CNOT(q1, q2), H(q1), MeasureZ(q1), MeasureZ(q2)]


class OutcomePolicy:
    """Decides measurement outcomes and records (bit, probability) pairs."""

    def __init__(self):
        self.trace: list[tuple[int, float]] = []

    def choose(self, p_one: float) -> int:
        raise NotImplementedError

    @property
    def bits(self) -> list[int]:
        return [b for b, _ in self.trace]

    @property
    def probability(self) -> float:
        prob = 1.0
        for _, p in self.trace:
            prob *= p
        return prob


class Random(OutcomePolicy):
    """Counter-based (Philox) seeded randomness; same seed, same transcript."""

    def __init__(self, seed: int = 0, rng: np.random.Generator | None = None):
        super().__init__()
        self.rng = rng if rng is not None else np.random.Generator(np.random.Philox(seed))

    def choose(self, p_one: float) -> int:
        bit = 1 if self.rng.random() < p_one else 0
        self.trace.append((bit, p_one if bit else 1.0 - p_one))
        return bit


class Forced(OutcomePolicy):
    """Replays a fixed outcome list; impossible outcomes raise."""

    def __init__(self, bits, tol: float = 1e-12):
        super().__init__()
        self._bits = [int(b) & 1 for b in bits]
        self._cursor = 0
        self._tol = tol

    def choose(self, p_one: float) -> int:
        if self._cursor >= len(self._bits):
            raise ForcedOutcomeImpossible(
                f"forced outcome list exhausted after {self._cursor} measurements"
            )
        bit = self._bits[self._cursor]
        self._cursor += 1
        p = p_one if bit else 1.0 - p_one
        if p <= self._tol:
            raise ForcedOutcomeImpossible(
                f"forced outcome {bit} at measurement {self._cursor - 1} "
                f"has probability {p:.3g}"
            )
        self.trace.append((bit, p))
        return bit
