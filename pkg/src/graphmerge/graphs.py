"""Graphs, bipartitions and the correction-vector algebra on graph states.

A Graph is an undirected simple graph carried as a symmetric zero-diagonal
adjacency matrix over GF(2).  A Partition splits its vertices into an
ordered honest part H and complement M; blocks() extracts the reordered
diagonal blocks G_H, G_M and the M x H biadjacency Gamma of the edges
crossing the cut.

validate_f decides which Pauli corrections (x, z) on the H side are
admissible: with Gamma = V [[I_r, R],[0,0]] U, a pair is accepted iff
U @ x vanishes beyond the first r entries and (U^T)^-1 (z xor G_H x)
has the shape [b ; R^T b].  The accepted pairs form exactly the
corrections reachable by the merge procedure (see graphmerge.merge).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .errors import BadPartition, DimensionMismatch
from .gf2 import BitMat, BitVec, PivotDecomposition


class Graph:
    """Undirected simple graph with a GF(2) adjacency matrix."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges=(), adj: BitMat | None = None):
        self.n = n
        if adj is not None:
            if adj.rows != n or adj.cols != n:
                raise DimensionMismatch("adjacency matrix size != n")
            if not adj.is_symmetric() or any(adj[i, i] for i in range(n)):
                raise ValueError("adjacency must be symmetric with zero diagonal")
            self.adj = adj
        else:
            a = np.zeros((n, n), dtype=np.uint8)
            for u, v in edges:
                if not (0 <= u < n and 0 <= v < n) or u == v:
                    raise ValueError(f"bad edge ({u}, {v}) for n={n}")
                a[u, v] = a[v, u] = 1
            self.adj = BitMat(a)

    @property
    def edges(self) -> list[tuple[int, int]]:
        a = self.adj.np
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if a[i, j]]

    def neighbors(self, v: int) -> list[int]:
        return [int(j) for j in np.nonzero(self.adj.np[v])[0]]

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges})"

    @staticmethod
    def from_adjacency(rows) -> "Graph":
        m = BitMat(rows)
        return Graph(m.rows, adj=m)

    @staticmethod
    def star(n: int, center: int = 0) -> "Graph":
        return Graph(n, [(center, i) for i in range(n) if i != center])

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph(n, [(i, i + 1) for i in range(n - 1)])

    def to_text(self) -> str:
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Graph":
        """Parse the graph file format: "n" then "u v" edge lines, '#' comments."""
        lines = []
        for raw in text.splitlines():
            ln = raw.split("#", 1)[0].strip()
            if ln:
                lines.append(ln)
        if not lines:
            raise ValueError("empty graph text")
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            toks = ln.split()
            if len(toks) != 2:
                raise ValueError(f"bad edge line: {ln!r}")
            edges.append((int(toks[0]), int(toks[1])))
        return Graph(n, edges)


@dataclass(frozen=True)
class Partition:
    """Ordered split of [0, n) into honest vertices h and complement m."""

    h: tuple[int, ...]
    m: tuple[int, ...]

    @staticmethod
    def from_honest(g: Graph, honest) -> "Partition":
        h = tuple(sorted(honest))
        m = tuple(v for v in range(g.n) if v not in set(h))
        p = Partition(h=h, m=m)
        p.validate(g)
        return p

    def validate(self, g: Graph) -> None:
        seen = list(self.h) + list(self.m)
        if sorted(seen) != list(range(g.n)):
            raise BadPartition(
                f"partition {self.h}|{self.m} does not cover [0, {g.n}) exactly"
            )

    @property
    def perm(self) -> tuple[int, ...]:
        """Vertex order placing h before m: perm[new_position] = old_vertex."""
        return tuple(self.h) + tuple(self.m)

    @property
    def n_h(self) -> int:
        return len(self.h)

    @property
    def n_m(self) -> int:
        return len(self.m)


@dataclass(frozen=True)
class GraphBlocks:
    """Blocks of the adjacency matrix under the h-before-m reordering."""

    g_h: BitMat
    g_m: BitMat
    gamma: BitMat  # |M| x |H| biadjacency of the crossing edges

    def reassemble(self, p: Partition, n: int) -> BitMat:
        """Rebuild the original-order adjacency matrix (round-trip check)."""
        h, m = len(p.h), len(p.m)
        block = np.zeros((n, n), dtype=np.uint8)
        block[:h, :h] = self.g_h.np
        block[h:, h:] = self.g_m.np
        block[h:, :h] = self.gamma.np
        block[:h, h:] = self.gamma.np.T
        inv = np.argsort(np.asarray(p.perm))
        return BitMat(block[np.ix_(inv, inv)])


@dataclass(frozen=True)
class PauliCorrection:
    """X and Z flip masks of equal length, targeting one register."""

    x: BitVec
    z: BitVec

    def __post_init__(self):
        if self.x.len != self.z.len:
            raise DimensionMismatch("x and z masks differ in length")

    def __xor__(self, other: "PauliCorrection") -> "PauliCorrection":
        return PauliCorrection(self.x ^ other.x, self.z ^ other.z)

    @property
    def len(self) -> int:
        return self.x.len


def blocks(g: Graph, p: Partition) -> GraphBlocks:
    """Extract G_H, G_M and Gamma for a partition of g's vertices."""
    p.validate(g)
    order = list(p.perm)
    a = g.adj.np[np.ix_(order, order)]
    h = len(p.h)
    return GraphBlocks(
        g_h=BitMat(a[:h, :h]),
        g_m=BitMat(a[h:, h:]),
        gamma=BitMat(a[h:, :h]),
    )


def stabilizer_of(g: Graph, x: BitVec) -> PauliCorrection:
    """The Pauli pair (x, G x); applying X^x Z^(Gx) leaves the graph state fixed."""
    if x.len != g.n:
        raise DimensionMismatch(f"vector length {x.len} != n = {g.n}")
    return PauliCorrection(x=x, z=g.adj @ x)


@dataclass(frozen=True)
class ValidationResult:
    accepted: bool
    b: BitVec | None = None

    def __bool__(self) -> bool:
        return self.accepted


def validate_f(
    g: Graph,
    p: Partition,
    corr: PauliCorrection,
    pivot: PivotDecomposition | None = None,
) -> ValidationResult:
    """Decide whether an H-side correction (x, z) is admissible.

    Accepts iff (i) entries r..|H|-1 of U @ x are zero and (ii)
    w = (U^T)^-1 (z xor G_H x) splits as [b ; R^T b]; returns the witness
    b on acceptance.  ``pivot`` may be passed to reuse a precomputed
    decomposition of Gamma.
    """
    blk = blocks(g, p)
    nh = p.n_h
    if corr.x.len != nh or corr.z.len != nh:
        raise DimensionMismatch(f"correction length != |H| = {nh}")
    if pivot is None:
        pivot = gf2.pivot_decompose(blk.gamma)
    r = pivot.r
    ux = pivot.U @ corr.x
    if ux.np[r:].any():
        return ValidationResult(False)
    w = gf2.invert(pivot.U.T) @ (corr.z ^ (blk.g_h @ corr.x))
    b = BitVec(w.np[:r])
    tail = BitVec(w.np[r:])
    if tail != pivot.R.T @ b:
        return ValidationResult(False)
    return ValidationResult(True, b=b)
