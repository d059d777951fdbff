"""Merging two copies of a graph state into one (generalized entanglement
swapping), plus the GHZ shortcut.

Layout: the joint register holds copy 1 on qubits [0, n) and copy 2 on
[n, 2n), both in the h-before-m vertex order of the partition.  The
measurement map consumes copy 1's M part and copy 2's H part:

  * cancel the internal CZ layers (G_M on copy-1 M, G_H on copy-2 H),
  * Hadamard every M-register qubit,
  * route values with the synthesized circuits for V^-1 (M) and U (H),
  * Bell-measure the first r wire pairs (outcomes b, c),
  * X-measure the remaining M wires (a), Z-measure the remaining H wires (d),

and reports the Pauli correction

  x = U^-1 [c xor R d ; 0],     z = U^T [b ; R^T b] xor G_H x

which the correction map applies to copy 1's H part.  The surviving
register (copy-1 H, copy-2 M) then carries |G> again, exactly, on every
measurement branch; merge_full's verifier checks that against a freshly
prepared reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .errors import DimensionMismatch, EmptyHonestSet
from .gf2 import BitMat, BitVec, CnotSwapCircuit, PivotDecomposition
from .graphs import Graph, GraphBlocks, Partition, PauliCorrection, blocks, validate_f
from .sim import (
    CNOT,
    CZ,
    BellMeasure,
    CliffordOp,
    H,
    MeasureX,
    MeasureZ,
    OutcomePolicy,
    S,
    X,
    Z,
    graph_state_circuit,
    make_state,
)


@dataclass(frozen=True)
class MergePlan:
    """Everything the measurement map needs, precomputed from (g, p)."""

    graph: Graph
    partition: Partition
    blocks: GraphBlocks
    pivot: PivotDecomposition
    circuit_v_inv: CnotSwapCircuit  # x -> V^-1 x on the M register
    circuit_u: CnotSwapCircuit      # x -> U x on the H register

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def n_h(self) -> int:
        return self.partition.n_h

    @property
    def n_m(self) -> int:
        return self.partition.n_m

    @property
    def trivial(self) -> bool:
        """No measurement work: one side of the partition is empty."""
        return self.n_h == 0 or self.n_m == 0


@dataclass(frozen=True)
class MergeOutcome:
    """Measurement outcomes and the correction they imply on the H register."""

    a: BitVec  # X-basis outcomes on the surplus M wires (|M| - r)
    b: BitVec  # Bell outcomes, Z side (r)
    c: BitVec  # Bell outcomes, X side (r)
    d: BitVec  # computational outcomes on the surplus H wires (|H| - r)
    correction: PauliCorrection


def plan(g: Graph, p: Partition) -> MergePlan:
    p.validate(g)
    blk = blocks(g, p)
    pivot = gf2.pivot_decompose(blk.gamma)
    v_inv = gf2.invert(pivot.V)
    return MergePlan(
        graph=g,
        partition=p,
        blocks=blk,
        pivot=pivot,
        circuit_v_inv=gf2.synthesize_cnot_swap(v_inv),
        circuit_u=gf2.synthesize_cnot_swap(pivot.U),
    )


def correction_from_outcomes(
    plan_: MergePlan, a: BitVec, b: BitVec, c: BitVec, d: BitVec
) -> PauliCorrection:
    """x = U^-1 [c xor R d ; 0],  z = U^T [b ; R^T b] xor G_H x.

    Linear in (b, c, d); the a outcomes do not enter.
    """
    pv = plan_.pivot
    nh = plan_.n_h
    top = c ^ (pv.R @ d)
    x = gf2.invert(pv.U) @ top.concat(BitVec.zeros(nh - pv.r))
    z = (pv.U.T @ b.concat(pv.R.T @ b)) ^ (plan_.blocks.g_h @ x)
    return PauliCorrection(x=x, z=z)


def _cnot_swap_ops(circ: CnotSwapCircuit, wires: list[int]) -> list[CliffordOp]:
    """Map a bit circuit onto physical qubits (SWAP -> three CNOTs)."""
    ops: list[CliffordOp] = []
    for kind, i, j in circ.gates:
        if kind == "cnot":
            ops.append(CNOT(wires[i], wires[j]))
        else:
            ops.append(CNOT(wires[i], wires[j]))
            ops.append(CNOT(wires[j], wires[i]))
            ops.append(CNOT(wires[i], wires[j]))
    return ops


def xi_sigma_circuit(plan_: MergePlan, m_wires: list[int], h_wires: list[int]) -> list[CliffordOp]:
    """The measurement map as an op list on explicit wires.

    ``m_wires`` hold copy 1's M part, ``h_wires`` copy 2's H part.  The
    outcome bit order is (b_0, c_0), .., (b_{r-1}, c_{r-1}), a_0.., d_0...
    """
    g_h = plan_.blocks.g_h.np
    g_m = plan_.blocks.g_m.np
    r = plan_.pivot.r
    ops: list[CliffordOp] = []
    nh, nm = len(h_wires), len(m_wires)
    ops += [CZ(h_wires[i], h_wires[j]) for i in range(nh) for j in range(i + 1, nh) if g_h[i, j]]
    ops += [CZ(m_wires[i], m_wires[j]) for i in range(nm) for j in range(i + 1, nm) if g_m[i, j]]
    ops += [H(q) for q in m_wires]
    ops += _cnot_swap_ops(plan_.circuit_v_inv, m_wires)
    ops += _cnot_swap_ops(plan_.circuit_u, h_wires)
    ops += [BellMeasure(m_wires[i], h_wires[i]) for i in range(r)]
    ops += [MeasureX(q) for q in m_wires[r:]]
    ops += [MeasureZ(q) for q in h_wires[r:]]
    return ops


def outcomes_from_bits(plan_: MergePlan, bits: list[int]) -> MergeOutcome:
    """Split the flat outcome bit list of xi_sigma_circuit into (a, b, c, d)."""
    r = plan_.pivot.r
    nm, nh = plan_.n_m, plan_.n_h
    if len(bits) != nm + nh:
        raise DimensionMismatch(f"expected {nm + nh} outcome bits, got {len(bits)}")
    b = BitVec([bits[2 * i] for i in range(r)])
    c = BitVec([bits[2 * i + 1] for i in range(r)])
    a = BitVec(bits[2 * r : 2 * r + (nm - r)])
    d = BitVec(bits[2 * r + (nm - r) :])
    return MergeOutcome(
        a=a, b=b, c=c, d=d, correction=correction_from_outcomes(plan_, a, b, c, d)
    )


def xi_sigma(plan_: MergePlan, state, policy: OutcomePolicy,
             m_wires: list[int] | None = None,
             h_wires: list[int] | None = None) -> MergeOutcome:
    """Run the measurement map on a joint state (default standard layout)."""
    n, nh = plan_.n, plan_.n_h
    if m_wires is None:
        m_wires = list(range(nh, n))
    if h_wires is None:
        h_wires = list(range(n, n + nh))
    bits = state.run(xi_sigma_circuit(plan_, m_wires, h_wires), policy)
    return outcomes_from_bits(plan_, bits)


def xi_h(state, h_register: list[int], correction: PauliCorrection):
    """Apply Z^z then X^x per qubit of the target H register."""
    if correction.len != len(h_register):
        raise DimensionMismatch(
            f"correction length {correction.len} != register size {len(h_register)}"
        )
    for i, q in enumerate(h_register):
        if correction.z[i]:
            state.apply(Z(q))
        if correction.x[i]:
            state.apply(X(q))
    return state


@dataclass
class MergeResult:
    """Merged joint state plus bookkeeping for verification.

    ``output_qubits`` lists, in h-before-m vertex order, the n wires that
    carry the merged copy of |G>; every other wire has been measured and
    holds a known product-state factor.
    """

    state: object
    plan: MergePlan
    outcome: MergeOutcome
    output_qubits: list[int]
    measured: list[tuple[int, str, int]]  # (wire, "z" | "x", outcome bit)


def permuted_graph(g: Graph, p: Partition) -> Graph:
    """The graph relabeled into h-before-m order."""
    order = list(p.perm)
    return Graph(g.n, adj=BitMat(g.adj.np[np.ix_(order, order)]))


def prepare_merge_input(g: Graph, p: Partition, backend="tableau"):
    """Two fresh copies of |G> in the standard layout (permuted order)."""
    gp = permuted_graph(g, p)
    state = make_state(2 * g.n, backend)
    state.run(graph_state_circuit(gp, offset=0))
    state.run(graph_state_circuit(gp, offset=g.n))
    return state


def _measured_record(plan_: MergePlan, outcome: MergeOutcome) -> list[tuple[int, str, int]]:
    n, nh, r = plan_.n, plan_.n_h, plan_.pivot.r
    m1 = list(range(nh, n))
    h2 = list(range(n, n + nh))
    measured: list[tuple[int, str, int]] = []
    for i in range(r):
        measured.append((m1[i], "z", outcome.b[i]))
        measured.append((h2[i], "z", outcome.c[i]))
    for i, q in enumerate(m1[r:]):
        measured.append((q, "x", outcome.a[i]))
    for i, q in enumerate(h2[r:]):
        measured.append((q, "z", outcome.d[i]))
    return measured


def merge_from_state(plan_: MergePlan, state, policy: OutcomePolicy) -> MergeResult:
    """Run the measurement and correction maps on a prepared input state."""
    n, nh = plan_.n, plan_.n_h
    outcome = xi_sigma(plan_, state, policy)
    xi_h(state, list(range(nh)), outcome.correction)
    return MergeResult(
        state=state,
        plan=plan_,
        outcome=outcome,
        output_qubits=list(range(nh)) + list(range(n + nh, 2 * n)),
        measured=_measured_record(plan_, outcome),
    )


def finish_branch(plan_: MergePlan, state, outcome_bits) -> MergeResult:
    """Corrections + bookkeeping for a state already measured by xi_sigma.

    Used with enumerate_branches over xi_sigma_circuit: ``state`` is a
    branch's final state, ``outcome_bits`` its outcome tuple.
    """
    n, nh = plan_.n, plan_.n_h
    outcome = outcomes_from_bits(plan_, list(outcome_bits))
    xi_h(state, list(range(nh)), outcome.correction)
    return MergeResult(
        state=state,
        plan=plan_,
        outcome=outcome,
        output_qubits=list(range(nh)) + list(range(n + nh, 2 * n)),
        measured=_measured_record(plan_, outcome),
    )


def merge_full(g: Graph, p: Partition, policy: OutcomePolicy, backend="tableau") -> MergeResult:
    """Merge two fresh copies of |G> into one on (copy1-H, copy2-M).

    Works in the permuted vertex order; output_qubits[k] carries vertex
    p.perm[k] of the merged graph state.
    """
    plan_ = plan(g, p)
    state = prepare_merge_input(g, p, backend)
    return merge_from_state(plan_, state, policy)


def _reference_state(result: MergeResult) -> object:
    """|G> on the output wires, measured wires in their post-measurement states."""
    plan_ = result.plan
    n = plan_.n
    gp = permuted_graph(plan_.graph, plan_.partition)
    ref = make_state(2 * n, type(result.state))
    circuit: list[CliffordOp] = [H(result.output_qubits[v]) for v in range(n)]
    circuit += [
        CZ(result.output_qubits[u], result.output_qubits[v]) for u, v in gp.edges
    ]
    for wire, basis, bit in result.measured:
        if bit:
            circuit.append(X(wire))
        if basis == "x":
            circuit.append(H(wire))
    ref.run(circuit)
    return ref


def verify_merge(result: MergeResult) -> bool | float:
    """Check the merged state against a freshly prepared |G>.

    Tableau backend: exact canonical-form equality (returns bool).
    State-vector backend: returns the fidelity with the reference.
    """
    ref = _reference_state(result)
    if hasattr(result.state, "same_state"):
        return result.state.same_state(ref)
    return result.state.fidelity(ref)


# -- GHZ shortcut -----------------------------------------------------------


@dataclass(frozen=True)
class GhzOutcome:
    """Single-bit corrections of the GHZ merge: Z^z on the first honest
    qubit, X^x on every honest qubit."""

    x: int
    z: int
    correction: PauliCorrection  # expanded to the H register

    @staticmethod
    def from_bits(x: int, z: int, n_h: int) -> "GhzOutcome":
        xs = BitVec([x] * n_h)
        zs = BitVec([z] + [0] * (n_h - 1))
        return GhzOutcome(x=x, z=z, correction=PauliCorrection(x=xs, z=zs))


@dataclass
class GhzMergeResult:
    state: object
    outcome: GhzOutcome
    output_qubits: list[int]
    measured: list[tuple[int, str, int]]


def ghz_merge(n: int, h_set, state, policy: OutcomePolicy) -> GhzMergeResult:
    """Merge two GHZ_n copies held as copy 1 on [0, n), copy 2 on [n, 2n).

    One Bell measurement pairs copy 1's last dishonest qubit with copy 2's
    first honest qubit; every other consumed qubit is measured in the X
    basis.  The correction is Z^z on the first honest qubit and X^x on all
    honest qubits, with z the parity of the Bell Z-outcome and all X-basis
    outcomes, x the Bell X-outcome.
    """
    h_list = sorted(h_set)
    if not h_list:
        raise EmptyHonestSet("ghz_merge needs at least one honest qubit")
    if any(not 0 <= v < n for v in h_list):
        raise DimensionMismatch(f"honest set {h_list} outside [0, {n})")
    m_list = [v for v in range(n) if v not in set(h_list)]

    measured: list[tuple[int, str, int]] = []
    if not m_list:
        # Trivial path: copy 2 is consumed entirely in the X basis and
        # copy 1 is returned unchanged.
        bits = []
        for q in range(n, 2 * n):
            bits += state.apply(MeasureX(q), policy)
            measured.append((q, "x", bits[-1]))
        outcome = GhzOutcome.from_bits(0, 0, n)
        return GhzMergeResult(state, outcome, list(range(n)), measured)

    bell_m = m_list[-1]              # copy 1, last dishonest qubit
    bell_h = n + h_list[0]           # copy 2, first honest qubit
    z0, x = state.apply(BellMeasure(bell_m, bell_h), policy)
    measured += [(bell_m, "z", z0), (bell_h, "z", x)]

    rest = [q for q in m_list[:-1]] + [n + v for v in h_list[1:]]
    z = z0
    for q in rest:
        (zi,) = state.apply(MeasureX(q), policy)
        measured.append((q, "x", zi))
        z ^= zi

    outcome = GhzOutcome.from_bits(x, z, len(h_list))
    h_register = list(h_list)
    if outcome.z:
        state.apply(Z(h_register[0]))
    for q in h_register:
        if outcome.x:
            state.apply(X(q))
    output = h_register + [n + v for v in m_list]
    return GhzMergeResult(state, outcome, output, measured)


def prepare_double_ghz(n: int, backend="tableau"):
    from .sim import ghz_circuit

    state = make_state(2 * n, backend)
    state.run(ghz_circuit(n, offset=0))
    state.run(ghz_circuit(n, offset=n))
    return state


def verify_ghz_merge(result: GhzMergeResult, n: int) -> bool | float:
    """Compare the surviving register against a fresh GHZ_n."""
    backend = type(result.state)
    ref = make_state(2 * n, backend)
    circuit = ghz_circuit_on(result.output_qubits)
    for wire, basis, bit in result.measured:
        if bit:
            circuit.append(X(wire))
        if basis == "x":
            circuit.append(H(wire))
    ref.run(circuit)
    if hasattr(result.state, "same_state"):
        return result.state.same_state(ref)
    return result.state.fidelity(ref)


def ghz_circuit_on(wires: list[int]) -> list[CliffordOp]:
    """GHZ preparation on an explicit wire list."""
    circuit = [H(wires[0])]
    circuit += [CNOT(wires[0], wires[i]) for i in range(1, len(wires))]
    return circuit


def star_to_ghz_layer(n: int, center: int = 0, offset: int = 0) -> list[CliffordOp]:
    """Local Cliffords mapping |GHZ_n> to the star graph state: H on each leaf."""
    return [H(offset + v) for v in range(n) if v != center]
