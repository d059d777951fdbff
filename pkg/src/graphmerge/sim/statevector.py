"""Dense state-vector back-end: the ground-truth oracle at small n.

Amplitudes are indexed with qubit 0 as the most significant bit, i.e.
amps.reshape([2] * n) has axis i for qubit i and flat order is
lexicographic in the bit string.  The qubit cap (default 20, override via
GRAPHMERGE_SV_CAP) keeps accidental blow-ups out of test runs.
"""

from __future__ import annotations

import math
import os

import numpy as np

from ..errors import CapacityExceeded, DimensionMismatch
from .ops import CliffordOp, OutcomePolicy, expand

_DEFAULT_CAP = 20
_SQRT1_2 = 1.0 / math.sqrt(2.0)


def sv_cap() -> int:
    return int(os.environ.get("GRAPHMERGE_SV_CAP", _DEFAULT_CAP))


class StateVector:
    """Mutable single-owner pure state on n qubits."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps: np.ndarray | None = None):
        cap = sv_cap()
        if n > cap:
            raise CapacityExceeded(f"{n} qubits exceeds state-vector cap {cap}")
        self.n = n
        if amps is None:
            self.amps = np.zeros(2**n, dtype=np.complex128)
            self.amps[0] = 1.0
        else:
            amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
            if amps.shape[0] != 2**n:
                raise DimensionMismatch(f"need {2**n} amplitudes, got {amps.shape[0]}")
            self.amps = amps.copy()

    @staticmethod
    def zero_state(n: int) -> "StateVector":
        return StateVector(n)

    @staticmethod
    def plus_state(n: int) -> "StateVector":
        sv = StateVector(n)
        sv.amps[:] = 1.0 / math.sqrt(2**n)
        return sv

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps)

    def _t(self) -> np.ndarray:
        return self.amps.reshape([2] * self.n)

    # -- primitive gates ------------------------------------------------

    def _gate(self, op: CliffordOp) -> None:
        t = self._t()
        kind = op.kind
        if kind == "h":
            (q,) = op.qubits
            a0 = np.take(t, 0, axis=q)
            a1 = np.take(t, 1, axis=q)
            s0 = (a0 + a1) * _SQRT1_2
            s1 = (a0 - a1) * _SQRT1_2
            idx0 = [slice(None)] * self.n
            idx0[q] = 0
            idx1 = [slice(None)] * self.n
            idx1[q] = 1
            t[tuple(idx0)] = s0
            t[tuple(idx1)] = s1
        elif kind == "s":
            (q,) = op.qubits
            idx = [slice(None)] * self.n
            idx[q] = 1
            t[tuple(idx)] *= 1j
        elif kind == "x":
            (q,) = op.qubits
            idx0 = [slice(None)] * self.n
            idx0[q] = 0
            idx1 = [slice(None)] * self.n
            idx1[q] = 1
            a0 = t[tuple(idx0)].copy()
            t[tuple(idx0)] = t[tuple(idx1)]
            t[tuple(idx1)] = a0
        elif kind == "z":
            (q,) = op.qubits
            idx = [slice(None)] * self.n
            idx[q] = 1
            t[tuple(idx)] *= -1.0
        elif kind == "cnot":
            c, tq = op.qubits
            idx10 = [slice(None)] * self.n
            idx10[c], idx10[tq] = 1, 0
            idx11 = [slice(None)] * self.n
            idx11[c], idx11[tq] = 1, 1
            a10 = t[tuple(idx10)].copy()
            t[tuple(idx10)] = t[tuple(idx11)]
            t[tuple(idx11)] = a10
        elif kind == "cz":
            a, b = op.qubits
            idx = [slice(None)] * self.n
            idx[a], idx[b] = 1, 1
            t[tuple(idx)] *= -1.0
        else:
            raise ValueError(f"not a primitive gate: {kind}")

    # -- measurement primitives -----------------------------------------

    def prob_one(self, q: int) -> float:
        t = np.abs(self._t()) ** 2
        axes = tuple(i for i in range(self.n) if i != q)
        marg = t.sum(axis=axes) if axes else t
        return float(marg[1])

    def collapse(self, q: int, bit: int) -> None:
        t = self._t()
        idx = [slice(None)] * self.n
        idx[q] = 1 - bit
        t[tuple(idx)] = 0.0
        norm = np.linalg.norm(self.amps)
        if norm == 0.0:
            raise ValueError("collapse onto a zero-probability outcome")
        self.amps /= norm

    # -- public API ------------------------------------------------------

    def apply(self, op: CliffordOp, policy: OutcomePolicy | None = None) -> tuple[int, ...]:
        """Apply one op; measurement outcomes are returned as a bit tuple."""
        outcomes = []
        for prim in expand(op):
            if prim.kind == "mz":
                if policy is None:
                    raise ValueError("measurement requires an OutcomePolicy")
                bit = policy.choose(self.prob_one(prim.qubits[0]))
                self.collapse(prim.qubits[0], bit)
                outcomes.append(bit)
            else:
                self._gate(prim)
        return tuple(outcomes)

    def run(self, circuit, policy: OutcomePolicy | None = None) -> list[int]:
        outcomes: list[int] = []
        for op in circuit:
            outcomes.extend(self.apply(op, policy))
        return outcomes

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def fidelity(self, other: "StateVector") -> float:
        """|<self|other>| for pure states."""
        if self.n != other.n:
            raise DimensionMismatch("fidelity of states on different qubit counts")
        return float(abs(np.vdot(self.amps, other.amps)))

    def extract(self, keep: list[int]) -> "StateVector":
        """Sub-state on ``keep`` when every other qubit is exactly |0>.

        Raises if discarded qubits carry any amplitude on |1> (they must
        have been measured and reset first).
        """
        drop = [q for q in range(self.n) if q not in keep]
        t = self._t()
        for q in sorted(drop, reverse=True):
            t = np.take(t, 0, axis=q)
        sub = t.reshape(-1)
        norm = np.linalg.norm(sub)
        if not math.isclose(norm, 1.0, abs_tol=1e-9):
            raise ValueError(f"discarded qubits not in |0> (residual norm {norm:.6f})")
        order = np.argsort(np.argsort(keep))  # keep axes ordered as given
        k = len(keep)
        sub = sub.reshape([2] * k).transpose(order).reshape(-1) if k else sub
        return StateVector(k, sub)
