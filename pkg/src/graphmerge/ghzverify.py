"""Monte-Carlo simulator of the n-party GHZ verification protocol.

Each round the source shares an n-qubit state; with probability 2^-S the
round is an output round and the state is delivered, otherwise a randomly
chosen Verifier draws inputs x with even parity, every party measures its
qubit in the X basis (x_i = 0) or Y basis (x_i = 1) and reports y_i, and
the Verifier accepts iff xor(y) == (sum(x) / 2) mod 2.  On the GHZ state
the measured operator is a (+-1)-stabilizer, so honest rounds always
accept; for a pure source state at trace distance tau from GHZ (all
parties honest) the per-round rejection probability is tau^2 with
tau = sqrt(1 - |<GHZ|psi>|^2), which the statistics tests pin down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import OddInputSum, UnsupportedCorruption
from .resources import Event, Transcript
from .sim import CliffordOp, H, MeasureX, MeasureY, OutcomePolicy, S, StateVector, Z


def ghz_state(n: int) -> StateVector:
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / math.sqrt(2.0)
    return StateVector(n, amps)


def ghz_diagonal_state(n: int, theta: float) -> StateVector:
    """cos(theta)|0..0> + sin(theta)|1..1>."""
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = math.cos(theta)
    amps[-1] = math.sin(theta)
    return StateVector(n, amps)


@dataclass(frozen=True)
class HonestSource:
    def state(self, n: int) -> StateVector:
        return ghz_state(n)


@dataclass(frozen=True)
class PureStateSource:
    """Source emitting a fixed pure state given by its amplitude vector."""

    amps: tuple

    @staticmethod
    def diagonal(n: int, theta: float) -> "PureStateSource":
        return PureStateSource(amps=tuple(ghz_diagonal_state(n, theta).amps))

    def state(self, n: int) -> StateVector:
        return StateVector(n, np.asarray(self.amps))


@dataclass(frozen=True)
class CustomSource:
    """Source driven by a hook: fn(round_index, rng) -> StateVector."""

    fn: Callable

    def state(self, n: int, round_index: int = 0, rng=None) -> StateVector:
        return self.fn(round_index, rng)


@dataclass(frozen=True)
class VerifConfig:
    n: int
    s: int
    seed: int = 0
    trials: int = 10_000
    source: object = HonestSource()
    corruption: frozenset = frozenset()
    party_hook: Callable | None = None  # (i, x_i, y_i, rng) -> reported bit
    exact_rounds: bool = False          # sample the full S-bit selector per round
    record_transcript: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two parties")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.s < 0:
            raise ValueError("security parameter must be >= 0")


@dataclass
class RunStats:
    rounds: int = 0
    accepts: int = 0
    rejects: int = 0
    outputs: int = 0

    @property
    def verification_rounds(self) -> int:
        return self.accepts + self.rejects

    @property
    def reject_rate(self) -> float:
        v = self.verification_rounds
        return self.rejects / v if v else 0.0

    @property
    def reject_ci95(self) -> float:
        v = self.verification_rounds
        if not v:
            return 0.0
        rate = self.reject_rate
        return 1.96 * math.sqrt(max(rate * (1 - rate), 0.0) / v)

    @property
    def rounds_per_output(self) -> float:
        return self.rounds / self.outputs if self.outputs else float("inf")

    def check(self) -> None:
        assert self.accepts + self.rejects + self.outputs == self.rounds


def round_circuit(x, wires=None) -> list[CliffordOp]:
    """Measurement ops of one verification round (X basis for 0, Y for 1)."""
    x = list(x)
    if wires is None:
        wires = list(range(len(x)))
    return [MeasureY(q) if xi else MeasureX(q) for q, xi in zip(wires, x)]


def _target_parity(x) -> int:
    total = int(sum(x))
    if total % 2:
        raise OddInputSum(f"inputs {list(x)} have odd sum")
    return (total // 2) % 2


def run_round(state, x, policy: OutcomePolicy) -> tuple[int, list[int]]:
    """Measure one shared state; returns (b_out, outcomes y)."""
    target = _target_parity(x)
    y: list[int] = []
    for op in round_circuit(x):
        y.extend(state.apply(op, policy))
    b_out = 0 if (sum(y) % 2) == target else 1
    return b_out, y


def round_distribution(state: StateVector, x) -> np.ndarray:
    """Joint outcome distribution of a round as 2^n probabilities.

    Index bit order matches qubit order (qubit 0 most significant).
    """
    work = state.copy()
    for q, xi in enumerate(x):
        if xi:
            work.apply(S(q))
            work.apply(Z(q))  # S Z = S^dagger: Y basis
        work.apply(H(q))
    return np.abs(work.amps) ** 2


def reject_probability(state: StateVector, x) -> float:
    """Exact per-round rejection probability for inputs x."""
    target = _target_parity(x)
    probs = round_distribution(state, x)
    n = state.n
    parities = np.array([bin(i).count("1") % 2 for i in range(2**n)])
    return float(probs[parities != target].sum())


def tau_pure(state: StateVector, corruption=frozenset()) -> float:
    """Trace distance sqrt(1 - |<GHZ|psi>|^2) to the GHZ target.

    Only defined with no corrupted parties (otherwise the distance would
    minimize over operations on the dishonest side, which is out of scope).
    """
    if corruption:
        raise UnsupportedCorruption("tau is only computed for the all-honest case")
    f = state.fidelity(ghz_state(state.n))
    return math.sqrt(max(0.0, 1.0 - f * f))


def predicted_reject_rate(tau: float) -> float:
    """Per-round rejection probability of a pure source at trace distance tau.

    For states in the span of |0..0>, |1..1> the relation is exact:
    every admissible input x measures an operator acting as the swap of
    the two basis words, so the accept amplitude is the same for all x.
    """
    return tau * tau


def _even_parity_inputs(n: int, rng) -> list[int]:
    x = [int(b) for b in rng.integers(0, 2, n - 1)]
    x.append(sum(x) % 2)
    return x


def all_even_inputs(n: int) -> list[list[int]]:
    out = []
    for mask in range(2**n):
        bits = [(mask >> (n - 1 - i)) & 1 for i in range(n)]
        if sum(bits) % 2 == 0:
            out.append(bits)
    return out


def run_protocol(config: VerifConfig) -> tuple[RunStats, Transcript]:
    """Simulate ``config.trials`` protocol rounds.

    Rounds are output rounds with probability 2^-S (geometric gap sampling
    by default, per-round S-bit selector in exact mode); verification
    rounds sample the joint outcome distribution of the shared state,
    route reported bits through the party hook for corrupted parties, and
    reject on a failed parity check.  Identical (config, seed) pairs
    replay identical transcripts.
    """
    rng = np.random.Generator(np.random.Philox(config.seed))
    stats = RunStats()
    tr = Transcript()
    n = config.n
    p_out = 2.0 ** (-config.s)

    dist_cache: dict[tuple[int, ...], np.ndarray] = {}
    fixed_state = None
    if isinstance(config.source, (HonestSource, PureStateSource)):
        fixed_state = config.source.state(n)

    if not config.exact_rounds:
        gap = int(rng.geometric(p_out)) if p_out > 0 else -1

    for round_index in range(config.trials):
        stats.rounds += 1
        if config.exact_rounds:
            r_bits = rng.integers(0, 2, config.s)
            is_output = not r_bits.any()
        else:
            gap -= 1
            is_output = gap == 0
            if is_output:
                gap = int(rng.geometric(p_out))
        if is_output:
            stats.outputs += 1
            if config.record_transcript:
                tr.record("CRS", "all", "output_round", round_index)
            continue

        verifier = int(rng.integers(0, n))
        x = _even_parity_inputs(n, rng)
        if fixed_state is not None:
            key = tuple(x)
            if key not in dist_cache:
                dist_cache[key] = round_distribution(fixed_state, x)
            probs = dist_cache[key]
        else:
            state = config.source.state(n, round_index, rng)
            probs = round_distribution(state, x)

        draw = int(rng.choice(probs.size, p=probs / probs.sum()))
        y = [(draw >> (n - 1 - i)) & 1 for i in range(n)]
        if config.party_hook is not None:
            for i in sorted(config.corruption):
                y[i] = int(config.party_hook(i, x[i], y[i], rng)) & 1
        target = _target_parity(x)
        b_out = 0 if (sum(y) % 2) == target else 1
        if config.record_transcript:
            tr.record(verifier, "all", "round", (round_index, tuple(x), tuple(y), b_out))
        if b_out:
            stats.rejects += 1
            if config.record_transcript:
                tr.record(verifier, "all", "reject", round_index)
        else:
            stats.accepts += 1

    stats.check()
    return stats, tr
