"""Stabilizer tableau back-end (destabilizer/stabilizer form).

Rows 0..n-1 hold destabilizer generators, rows n..2n-1 stabilizer
generators; columns are [x_0..x_{n-1} | z_0..z_{n-1} | r] with r the
phase bit ((-1)^r).  Gate updates and measurement follow the standard
CHP rules; canonical_form() row-reduces the stabilizer block (with exact
phase tracking) so that two tableaux describe the same pure state iff
their canonical forms are bit-identical.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch
from .ops import CliffordOp, OutcomePolicy, expand


def _g_exponents(x1, z1, x2, z2):
    """Power of i picked up per column when multiplying Pauli row 1 into row 2."""
    out = np.zeros(x1.shape, dtype=np.int64)
    case_y = (x1 == 1) & (z1 == 1)
    case_x = (x1 == 1) & (z1 == 0)
    case_z = (x1 == 0) & (z1 == 1)
    out[case_y] = (z2[case_y].astype(np.int64) - x2[case_y])
    out[case_x] = z2[case_x].astype(np.int64) * (2 * x2[case_x].astype(np.int64) - 1)
    out[case_z] = x2[case_z].astype(np.int64) * (1 - 2 * z2[case_z].astype(np.int64))
    return out


class Tableau:
    """Mutable single-owner stabilizer state on n qubits."""

    __slots__ = ("n", "tab")

    def __init__(self, n: int, tab: np.ndarray | None = None):
        self.n = n
        if tab is None:
            self.tab = np.zeros((2 * n, 2 * n + 1), dtype=np.uint8)
            for i in range(n):
                self.tab[i, i] = 1          # destabilizer X_i
                self.tab[n + i, n + i] = 1  # stabilizer Z_i
        else:
            self.tab = np.array(tab, dtype=np.uint8)

    @staticmethod
    def zero_state(n: int) -> "Tableau":
        return Tableau(n)

    def copy(self) -> "Tableau":
        return Tableau(self.n, self.tab)

    # -- internal helpers --------------------------------------------------

    def _x(self, q: int):
        return self.tab[:, q]

    def _z(self, q: int):
        return self.tab[:, self.n + q]

    def _r(self):
        return self.tab[:, 2 * self.n]

    def _rowsum(self, h: int, i: int) -> None:
        """Row h := row i * row h with exact phase bookkeeping."""
        n = self.n
        t = self.tab
        x1, z1 = t[i, :n].astype(np.int64), t[i, n : 2 * n].astype(np.int64)
        x2, z2 = t[h, :n].astype(np.int64), t[h, n : 2 * n].astype(np.int64)
        phase = 2 * int(t[h, 2 * n]) + 2 * int(t[i, 2 * n]) + int(
            _g_exponents(x1, z1, x2, z2).sum()
        )
        # Odd phases only arise for destabilizer rows, whose sign is junk.
        t[h, 2 * n] = (phase % 4) // 2
        t[h, :n] ^= t[i, :n]
        t[h, n : 2 * n] ^= t[i, n : 2 * n]

    # -- primitive gates ----------------------------------------------------

    def _gate(self, op: CliffordOp) -> None:
        t = self.tab
        r = self._r()
        kind = op.kind
        if kind == "h":
            (q,) = op.qubits
            x, z = self._x(q), self._z(q)
            r ^= x & z
            xq = x.copy()
            x[:] = z
            z[:] = xq
        elif kind == "s":
            (q,) = op.qubits
            x, z = self._x(q), self._z(q)
            r ^= x & z
            z ^= x
        elif kind == "x":
            (q,) = op.qubits
            r ^= self._z(q)
        elif kind == "z":
            (q,) = op.qubits
            r ^= self._x(q)
        elif kind == "cnot":
            c, tq = op.qubits
            xc, zc = self._x(c), self._z(c)
            xt, zt = self._x(tq), self._z(tq)
            r ^= xc & zt & (xt ^ zc ^ 1)
            xt ^= xc
            zc ^= zt
        elif kind == "cz":
            a, b = op.qubits
            for sub in (CliffordOp("h", (b,)), CliffordOp("cnot", (a, b)), CliffordOp("h", (b,))):
                self._gate(sub)
        else:
            raise ValueError(f"not a primitive gate: {kind}")

    # -- measurement primitives ----------------------------------------------

    def _random_row(self, q: int) -> int | None:
        hits = np.nonzero(self.tab[self.n :, q])[0]
        return None if hits.size == 0 else self.n + int(hits[0])

    def _deterministic_outcome(self, q: int) -> int:
        n = self.n
        scratch = np.zeros(2 * n + 1, dtype=np.uint8)
        saved = self.tab
        self.tab = np.vstack([saved, scratch])
        try:
            for i in range(n):
                if saved[i, q]:
                    self._rowsum(2 * n, n + i)
            outcome = int(self.tab[2 * n, 2 * n])
        finally:
            self.tab = saved
        return outcome

    def prob_one(self, q: int) -> float:
        if self._random_row(q) is not None:
            return 0.5
        return float(self._deterministic_outcome(q))

    def collapse(self, q: int, bit: int) -> None:
        n = self.n
        p = self._random_row(q)
        if p is None:
            if self._deterministic_outcome(q) != bit:
                raise ValueError("collapse onto a zero-probability outcome")
            return
        for i in range(2 * n):
            if i != p and self.tab[i, q]:
                self._rowsum(i, p)
        self.tab[p - n] = self.tab[p]
        self.tab[p] = 0
        self.tab[p, n + q] = 1
        self.tab[p, 2 * n] = bit & 1

    # -- public API -----------------------------------------------------------

    def apply(self, op: CliffordOp, policy: OutcomePolicy | None = None) -> tuple[int, ...]:
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

    # -- state identity ----------------------------------------------------------

    def _canonicalized(self) -> tuple["Tableau", list[int], list[int]]:
        """Copy with RREF stabilizer rows.

        Returns (copy, ordered stabilizer row indices, leading column per
        row).  Column order is x_0..x_{n-1}, z_0..z_{n-1}; elimination runs
        above and below each pivot, so the generating set is unique.
        """
        n = self.n
        work = self.copy()
        rows = list(range(n, 2 * n))
        leads: list[int] = []
        pivot = 0
        for col in range(2 * n):
            hit = None
            for ri in range(pivot, n):
                if work.tab[rows[ri], col]:
                    hit = ri
                    break
            if hit is None:
                continue
            rows[pivot], rows[hit] = rows[hit], rows[pivot]
            for ri in range(n):
                if ri != pivot and work.tab[rows[ri], col]:
                    work._rowsum(rows[ri], rows[pivot])
            leads.append(col)
            pivot += 1
        return work, rows, leads

    def canonical_form(self) -> bytes:
        """Canonical stabilizer generators; equal bytes iff equal pure states."""
        work, rows, _ = self._canonicalized()
        return work.tab[rows].tobytes()

    def same_state(self, other: "Tableau") -> bool:
        if self.n != other.n:
            raise DimensionMismatch("comparing tableaux of different sizes")
        return self.canonical_form() == other.canonical_form()

    def expectation_sign(self, x, z) -> int | None:
        """Eigenvalue sign of the Pauli X^x Z^z when it stabilizes the state.

        Requires disjoint x/z supports (a proper Hermitian Pauli under the
        row convention).  Returns 0 for +1, 1 for -1, None when the
        operator is not plus-or-minus in the stabilizer group.
        """
        n = self.n
        x = np.asarray(x, dtype=np.uint8) & 1
        z = np.asarray(z, dtype=np.uint8) & 1
        if (x & z).any():
            raise ValueError("expectation_sign needs disjoint x and z supports")
        work, rows, leads = self._canonicalized()
        target = np.zeros(2 * n + 1, dtype=np.uint8)
        target[:n] = x
        target[n : 2 * n] = z
        work.tab = np.vstack([work.tab, target])
        trow = work.tab.shape[0] - 1
        for row, lead in zip(rows, leads):
            if work.tab[trow, lead]:
                work._rowsum(trow, row)
        if work.tab[trow, : 2 * n].any():
            return None
        return int(work.tab[trow, 2 * n])
