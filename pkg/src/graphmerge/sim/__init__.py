"""Two interchangeable Clifford back-ends plus shared circuit utilities.

The Tableau back-end is the workhorse (scales to dozens of qubits); the
StateVector back-end is the dense ground-truth oracle for small registers.
Both expose apply/run/copy with identical semantics, so circuits and
branch enumeration run unchanged on either.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import CapacityExceeded
from ..graphs import Graph
from . import ops
from .ops import (
    CNOT,
    CZ,
    BellMeasure,
    CliffordOp,
    Forced,
    H,
    MeasureX,
    MeasureY,
    MeasureZ,
    OutcomePolicy,
    Random,
    S,
    X,
    Z,
    expand,
)
from .statevector import StateVector, sv_cap
from .tableau import Tableau

BACKENDS = {"tableau": Tableau, "statevector": StateVector}

__all__ = [
    "BACKENDS",
    "BellMeasure",
    "Branch",
    "CNOT",
    "CZ",
    "CliffordOp",
    "Forced",
    "H",
    "MeasureX",
    "MeasureY",
    "MeasureZ",
    "OutcomePolicy",
    "Random",
    "S",
    "StateVector",
    "Tableau",
    "X",
    "Z",
    "enumerate_branches",
    "expand",
    "graph_state_circuit",
    "ghz_circuit",
    "make_state",
    "prepare_ghz",
    "prepare_graph_state",
    "sv_cap",
]


def make_state(n: int, backend="tableau"):
    """Fresh |0..0> on the named backend ("tableau"/"statevector" or a class)."""
    cls = BACKENDS.get(backend, backend) if isinstance(backend, str) else backend
    if isinstance(cls, str):
        raise ValueError(f"unknown backend {backend!r}")
    return cls.zero_state(n)


def graph_state_circuit(g: Graph, offset: int = 0) -> list[CliffordOp]:
    """Gates preparing |G> from |0..0> on wires offset..offset+n-1."""
    circuit = [H(offset + v) for v in range(g.n)]
    circuit += [CZ(offset + u, offset + v) for u, v in g.edges]
    return circuit


def prepare_graph_state(g: Graph, backend="tableau"):
    """|G> = prod_{(i,j) in E} CZ_{ij} |+>^n on a fresh register."""
    state = make_state(g.n, backend)
    state.run(graph_state_circuit(g))
    return state


def ghz_circuit(n: int, offset: int = 0) -> list[CliffordOp]:
    """Gates preparing (|0..0> + |1..1>)/sqrt(2) on wires offset..offset+n-1."""
    circuit = [H(offset)]
    circuit += [CNOT(offset, offset + i) for i in range(1, n)]
    return circuit


def prepare_ghz(n: int, backend="tableau"):
    state = make_state(n, backend)
    state.run(ghz_circuit(n))
    return state


@dataclass(frozen=True)
class Branch:
    """One measurement branch: outcome bits, its probability, final state."""

    outcomes: tuple[int, ...]
    probability: float
    state: object


def enumerate_branches(circuit, initial, max_measurements: int = 12, tol: float = 1e-12):
    """All measurement branches of a circuit from a fresh copy of ``initial``.

    Composite measurements contribute their expanded bits in order (a Bell
    measurement adds two).  Branch probabilities multiply per collapse;
    zero-probability branches are pruned.  The returned probabilities sum
    to 1 up to accumulated float error.
    """
    prims = [p for op in circuit for p in expand(op)]
    n_meas = sum(1 for p in prims if p.kind == "mz")
    if n_meas > max_measurements:
        raise CapacityExceeded(
            f"{n_meas} measurements exceeds branch-enumeration cap {max_measurements}"
        )
    results: list[Branch] = []

    def rec(state, idx: int, outcomes: tuple[int, ...], prob: float) -> None:
        while idx < len(prims) and prims[idx].kind != "mz":
            state._gate(prims[idx])
            idx += 1
        if idx == len(prims):
            results.append(Branch(outcomes, prob, state))
            return
        q = prims[idx].qubits[0]
        p1 = state.prob_one(q)
        options = [(bit, p1 if bit else 1.0 - p1) for bit in (0, 1)]
        live = [(bit, p) for bit, p in options if p > tol]
        for k, (bit, p) in enumerate(live):
            nxt = state if k == len(live) - 1 else state.copy()
            nxt.collapse(q, bit)
            rec(nxt, idx + 1, outcomes + (bit,), prob * p)

    rec(initial.copy(), 0, (), 1.0)
    return results


def branch_table(circuit, initial, max_measurements: int = 12) -> dict[tuple[int, ...], float]:
    """Outcome tuple -> probability map (no states), for backend comparison."""
    return {
        b.outcomes: b.probability
        for b in enumerate_branches(circuit, initial, max_measurements)
    }


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>| for two dense states."""
    return a.fidelity(b)
