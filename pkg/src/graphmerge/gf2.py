"""Dense bit-exact linear algebra over GF(2).

Vectors (BitVec) and matrices (BitMat) are immutable wrappers around numpy
uint8 arrays holding one entry per bit; the external contract is purely
index-level.  On top of them this module provides the Gaussian pivot
decomposition  M = V @ [[I_r, R], [0, 0]] @ U  with U, V invertible, matrix
inversion, rank, and synthesis of invertible matrices into CNOT/swap
circuits.

Empty dimensions (0 x k, k x 0) are legal everywhere; products with them
follow the usual conventions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularMatrix


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class BitVec:
    """Immutable vector over GF(2)."""

    __slots__ = ("_a",)

    def __init__(self, bits):
        if not isinstance(bits, (np.ndarray, list, tuple)):
            bits = list(bits)
        a = np.asarray(bits, dtype=np.uint8).reshape(-1) & 1
        self._a = _freeze(np.ascontiguousarray(a))

    @staticmethod
    def zeros(n: int) -> "BitVec":
        return BitVec(np.zeros(n, dtype=np.uint8))

    @staticmethod
    def from_int(value: int, n: int) -> "BitVec":
        """Bits of ``value``, most significant first, width ``n``."""
        return BitVec([(value >> (n - 1 - i)) & 1 for i in range(n)])

    @property
    def len(self) -> int:
        return self._a.shape[0]

    @property
    def np(self) -> np.ndarray:
        """Read-only uint8 view of the entries."""
        return self._a

    def __len__(self) -> int:
        return self._a.shape[0]

    def __getitem__(self, i):
        if isinstance(i, slice):
            return BitVec(self._a[i])
        if not 0 <= i < self.len:
            raise IndexError(f"bit index {i} out of range [0, {self.len})")
        return int(self._a[i])

    def __xor__(self, other: "BitVec") -> "BitVec":
        if self.len != other.len:
            raise DimensionMismatch(f"xor of lengths {self.len} and {other.len}")
        return BitVec(self._a ^ other._a)

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec(np.concatenate([self._a, other._a]))

    def weight(self) -> int:
        return int(self._a.sum())

    def is_zero(self) -> bool:
        return not self._a.any()

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self._a)

    def tolist(self) -> list[int]:
        return [int(b) for b in self._a]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVec)
            and self.len == other.len
            and bool(np.array_equal(self._a, other._a))
        )

    def __hash__(self) -> int:
        return hash((self.len, self._a.tobytes()))

    def __repr__(self) -> str:
        return f"BitVec({self.to01()!r})"


class BitMat:
    """Immutable matrix over GF(2)."""

    __slots__ = ("_a",)

    def __init__(self, entries, shape: tuple[int, int] | None = None):
        a = np.asarray(entries, dtype=np.uint8) & 1
        if shape is not None:
            a = a.reshape(shape)
        if a.ndim != 2:
            raise DimensionMismatch(f"matrix needs 2 axes, got {a.ndim}")
        self._a = _freeze(np.ascontiguousarray(a))

    @staticmethod
    def zeros(rows: int, cols: int) -> "BitMat":
        return BitMat(np.zeros((rows, cols), dtype=np.uint8))

    @staticmethod
    def identity(n: int) -> "BitMat":
        return BitMat(np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def np(self) -> np.ndarray:
        """Read-only uint8 view of the entries."""
        return self._a

    def __getitem__(self, idx):
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry {(i, j)} out of range {self._a.shape}")
        return int(self._a[i, j])

    @property
    def T(self) -> "BitMat":
        return BitMat(self._a.T)

    def __matmul__(self, other):
        if isinstance(other, BitVec):
            if self.cols != other.len:
                raise DimensionMismatch(
                    f"matvec shapes {self._a.shape} x {other.len}"
                )
            return BitVec((self._a @ other.np) & 1)
        if isinstance(other, BitMat):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    f"matmul shapes {self._a.shape} x {other._a.shape}"
                )
            return BitMat((self._a @ other._a) & 1)
        return NotImplemented

    def __xor__(self, other: "BitMat") -> "BitMat":
        if self._a.shape != other._a.shape:
            raise DimensionMismatch("xor of mismatched matrix shapes")
        return BitMat(self._a ^ other._a)

    def row(self, i: int) -> BitVec:
        return BitVec(self._a[i])

    def col(self, j: int) -> BitVec:
        return BitVec(self._a[:, j])

    def submatrix(self, rows, cols) -> "BitMat":
        return BitMat(self._a[np.ix_(list(rows), list(cols))])

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self._a, self._a.T))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMat)
            and self._a.shape == other._a.shape
            and bool(np.array_equal(self._a, other._a))
        )

    def __hash__(self) -> int:
        return hash((self._a.shape, self._a.tobytes()))

    def __repr__(self) -> str:
        body = ";".join("".join(str(b) for b in row) for row in self._a)
        return f"BitMat({self.rows}x{self.cols}:{body})"

    def to_text(self) -> str:
        """Serialize: first line "rows cols", then one '0'/'1' row per line."""
        lines = [f"{self.rows} {self.cols}"]
        lines += ["".join(str(b) for b in row) for row in self._a]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "BitMat":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix text")
        rows, cols = (int(tok) for tok in lines[0].split())
        if len(lines) - 1 != rows:
            raise ValueError(f"expected {rows} rows, got {len(lines) - 1}")
        data = np.zeros((rows, cols), dtype=np.uint8)
        for i, ln in enumerate(lines[1:]):
            if len(ln) != cols or set(ln) - {"0", "1"}:
                raise ValueError(f"bad matrix row {i}: {ln!r}")
            data[i] = [int(ch) for ch in ln]
        return BitMat(data)


@dataclass(frozen=True)
class PivotDecomposition:
    """Decomposition M = V @ [[I_r, R], [0, 0]] @ U with U, V invertible."""

    U: BitMat
    V: BitMat
    r: int
    R: BitMat

    def middle(self) -> BitMat:
        """The (V.rows x U.cols) block matrix [[I_r, R], [0, 0]]."""
        m = np.zeros((self.V.cols, self.U.rows), dtype=np.uint8)
        m[: self.r, : self.r] = np.eye(self.r, dtype=np.uint8)
        m[: self.r, self.r :] = self.R.np
        return BitMat(m)

    def reconstruct(self) -> BitMat:
        return self.V @ self.middle() @ self.U


def pivot_decompose(gamma: BitMat) -> PivotDecomposition:
    """Factor ``gamma`` as V @ [[I_r, R], [0, 0]] @ U over GF(2).

    Deterministic pivot rule: columns are scanned left to right and the
    first row with a 1 at or below the current pivot row is chosen.  The
    row operations are absorbed into V and the column permutation moving
    pivot columns to the front (stable) into U.
    """
    m, n = gamma.rows, gamma.cols
    a = np.array(gamma.np, dtype=np.uint8)
    # V accumulates the inverses of the row operations applied to `a`
    # (each elementary GF(2) op is self-inverse, applied column-wise).
    v = np.eye(m, dtype=np.uint8)

    pivot_cols: list[int] = []
    prow = 0
    for col in range(n):
        if prow >= m:
            break
        hits = np.nonzero(a[prow:, col])[0]
        if hits.size == 0:
            continue
        k = prow + int(hits[0])
        if k != prow:
            a[[prow, k]] = a[[k, prow]]
            v[:, [prow, k]] = v[:, [k, prow]]
        others = np.nonzero(a[:, col])[0]
        for i in others:
            if i != prow:
                a[i] ^= a[prow]
                v[:, prow] ^= v[:, i]
        pivot_cols.append(col)
        prow += 1

    r = len(pivot_cols)
    nonpivot = [c for c in range(n) if c not in pivot_cols]
    order = pivot_cols + nonpivot
    # a[:, order] = [[I_r, R], [0, 0]]; the inverse permutation is U.
    rr = BitMat(a[:r][:, nonpivot]) if r and nonpivot else BitMat.zeros(r, n - r)
    u = np.zeros((n, n), dtype=np.uint8)
    for new, old in enumerate(order):
        u[new, old] = 1
    return PivotDecomposition(U=BitMat(u), V=BitMat(v), r=r, R=rr)


def rank(m: BitMat) -> int:
    """GF(2) rank."""
    return pivot_decompose(m).r


def invert(m: BitMat) -> BitMat:
    """Inverse of a square GF(2) matrix; raises SingularMatrix if rank-deficient."""
    if m.rows != m.cols:
        raise DimensionMismatch(f"cannot invert {m.rows}x{m.cols} matrix")
    n = m.rows
    a = np.array(m.np, dtype=np.uint8)
    inv = np.eye(n, dtype=np.uint8)
    for col in range(n):
        hits = np.nonzero(a[col:, col])[0]
        if hits.size == 0:
            raise SingularMatrix(f"matrix of size {n} has rank < {n}")
        k = col + int(hits[0])
        if k != col:
            a[[col, k]] = a[[k, col]]
            inv[[col, k]] = inv[[k, col]]
        for i in np.nonzero(a[:, col])[0]:
            if i != col:
                a[i] ^= a[col]
                inv[i] ^= inv[col]
    return BitMat(inv)


def solve_upper_identity(u: BitMat, y: BitVec) -> BitVec:
    """Solve u @ x = y for invertible u (convenience wrapper)."""
    return invert(u) @ y


@dataclass(frozen=True)
class CnotSwapCircuit:
    """Reversible bit circuit of CNOT and SWAP gates on ``wires`` wires.

    Gates are ("cnot", control, target) or ("swap", i, j) and apply in list
    order; the overall action on a bit vector equals the matrix the circuit
    was synthesized from.
    """

    wires: int
    gates: tuple[tuple[str, int, int], ...]

    def apply_to_bits(self, x: BitVec) -> BitVec:
        if x.len != self.wires:
            raise DimensionMismatch(f"{self.wires}-wire circuit on {x.len} bits")
        bits = list(x.tolist())
        for kind, a, b in self.gates:
            if kind == "cnot":
                bits[b] ^= bits[a]
            else:
                bits[a], bits[b] = bits[b], bits[a]
        return BitVec(bits)

    def matrix(self) -> BitMat:
        cols = [self.apply_to_bits(BitVec([1 if i == j else 0 for i in range(self.wires)])).np
                for j in range(self.wires)]
        if not cols:
            return BitMat.zeros(0, 0)
        return BitMat(np.stack(cols, axis=1))


def synthesize_cnot_swap(u: BitMat) -> CnotSwapCircuit:
    """Synthesize an invertible GF(2) matrix into a CNOT/SWAP circuit.

    The circuit's linear action is x -> u @ x.  Gauss-Jordan reduction of u
    records one self-inverse elementary operation per step; replaying them
    in reverse order rebuilds u.  Gate count is O(n^2).
    """
    if u.rows != u.cols:
        raise DimensionMismatch("synthesis needs a square matrix")
    n = u.rows
    a = np.array(u.np, dtype=np.uint8)
    ops: list[tuple[str, int, int]] = []
    for col in range(n):
        hits = np.nonzero(a[col:, col])[0]
        if hits.size == 0:
            raise SingularMatrix("cannot synthesize a singular matrix")
        k = col + int(hits[0])
        if k != col:
            a[[col, k]] = a[[k, col]]
            ops.append(("swap", col, k))
        for i in np.nonzero(a[:, col])[0]:
            if i != col:
                # row_i += row_col is the action of CNOT(control=col, target=i)
                a[i] ^= a[col]
                ops.append(("cnot", col, i))
    return CnotSwapCircuit(wires=n, gates=tuple(reversed(ops)))
