"""Executable ideal functionalities and the stabilizer-twirl pipeline.

Three resources are runnable as explicit state machines over a shared
quantum backend: the correction-filtered delivery resource (run_verif_f),
the plain delivery resource with an early-grab/abort handshake (run_verif)
and the common random string resource (run_coinflip).  Aborts are modeled
outcomes recorded in the transcript, never exceptions; once a session
aborts, every interface receives the abort symbol and nothing else.

complete_correction implements the adversary-side completion that turns an
accepted honest-side correction (x_h, z_h) into a full stabilizer vector
x' with (G x')_H = z_h, the identity the twirl construction rests on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import gf2
from .errors import AbortedUpstream, InvalidCorrection
from .gf2 import BitVec
from .graphs import Graph, Partition, PauliCorrection, blocks, stabilizer_of, validate_f
from .sim import CNOT, H, MeasureZ, X, Z, make_state, prepare_graph_state

SOURCE = "S"
ABORT = "abort"


@dataclass(frozen=True)
class Event:
    sender: Any
    receiver: Any
    kind: str
    payload: Any = None


@dataclass
class Transcript:
    events: list[Event] = field(default_factory=list)
    aborted: bool = False

    def record(self, sender, receiver, kind, payload=None) -> None:
        if self.aborted and kind not in ("abort",):
            raise RuntimeError("transcript extended after abort")
        self.events.append(Event(sender, receiver, kind, payload))

    def abort_all(self, resource: str, parties) -> None:
        for i in parties:
            self.events.append(Event(resource, i, "abort"))
        self.aborted = True

    def deliveries(self) -> dict:
        """receiver -> "state" | "abort" for terminal per-party outcomes."""
        out: dict = {}
        for ev in self.events:
            if ev.kind in ("deliver", "abort"):
                out[ev.receiver] = "state" if ev.kind == "deliver" else "abort"
        return out


class Adversary:
    """Global hook object spanning every corrupted interface.

    The default instance plays a passive malicious coalition: it keeps the
    source honest-looking, declares itself with c_i = 1, sends all-zero
    corrections and never aborts.  Override individual methods to script
    attacks.
    """

    def source_decision(self, rng) -> bool:
        return True

    def party_decision(self, i: int, rng) -> int | str:
        return 1

    def corrections(self, i: int, n_h: int, view, rng) -> tuple[BitVec, BitVec]:
        return BitVec.zeros(n_h), BitVec.zeros(n_h)

    def early_grab(self, i: int, rng) -> bool:
        return True

    def continue_after_grab(self, i: int, view, rng) -> bool:
        return True


class RandomAdversary(Adversary):
    """Coin-flipping adversary used by the abort-totality tests."""

    def source_decision(self, rng) -> bool:
        return bool(rng.integers(0, 2))

    def party_decision(self, i, rng):
        return [0, 1, ABORT][int(rng.integers(0, 3))]

    def corrections(self, i, n_h, view, rng):
        return BitVec(rng.integers(0, 2, n_h)), BitVec(rng.integers(0, 2, n_h))

    def early_grab(self, i, rng) -> bool:
        return bool(rng.integers(0, 2))

    def continue_after_grab(self, i, view, rng) -> bool:
        return bool(rng.integers(0, 2))


@dataclass
class VerifFResult:
    transcript: Transcript
    state: object | None       # joint backend state, vertex i on wire i
    malicious: tuple[int, ...]  # parties that declared c_i = 1
    partition: Partition | None
    x: BitVec | None            # aggregated X corrections on the honest side
    z: BitVec | None

    @property
    def aborted(self) -> bool:
        return self.transcript.aborted


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def run_verif_f(
    g: Graph,
    corrupted,
    adversary: Adversary | None = None,
    seed: int = 0,
    backend: str = "tableau",
) -> VerifFResult:
    """Execute the correction-filtered graph-state delivery resource.

    Follows the resource's numbered steps verbatim: source abort check,
    state creation, per-party honesty declarations, early delivery to the
    malicious coalition, aggregation of corrections (x = xor of a_i,
    z = xor of b_i), the validator gate, Pauli application on the honest
    qubits and final delivery.
    """
    adversary = adversary or Adversary()
    rng = _rng(seed)
    corrupted = set(corrupted)
    tr = Transcript()
    parties = list(range(g.n)) + [SOURCE]
    resource = "VerifF"

    # step 1-2: source decision
    c_s = adversary.source_decision(rng) if SOURCE in corrupted else True
    tr.record(SOURCE, resource, "c_S", "ok" if c_s else ABORT)
    if not c_s:
        tr.abort_all(resource, parties)
        return VerifFResult(tr, None, (), None, None, None)

    # step 3: create |G>
    state = prepare_graph_state(g, backend)

    # step 4: honesty declarations
    decisions = {}
    for i in range(g.n):
        d = adversary.party_decision(i, rng) if i in corrupted else 0
        decisions[i] = d
        tr.record(i, resource, "c_i", d)
    if any(d == ABORT for d in decisions.values()):
        tr.abort_all(resource, parties)
        return VerifFResult(tr, None, (), None, None, None)
    malicious = tuple(i for i in range(g.n) if decisions[i] == 1)
    p = Partition.from_honest(g, [i for i in range(g.n) if i not in malicious])

    # step 5: early delivery to the coalition
    for i in malicious:
        tr.record(resource, i, "deliver", ("qubit", i))

    # step 6: corrections
    n_h = p.n_h
    x = BitVec.zeros(n_h)
    z = BitVec.zeros(n_h)
    for i in malicious:
        a_i, b_i = adversary.corrections(i, n_h, view=(g, p, state), rng=rng)
        tr.record(i, resource, "corrections", (a_i, b_i))
        x = x ^ a_i
        z = z ^ b_i

    # step 7: validator gate
    if malicious:
        if not validate_f(g, p, PauliCorrection(x=x, z=z)):
            tr.abort_all(resource, parties)
            return VerifFResult(tr, None, malicious, p, x, z)

    # step 8: apply Z^z and X^x on the honest qubits
    for k, v in enumerate(p.h):
        if z[k]:
            state.apply(Z(v))
        if x[k]:
            state.apply(X(v))

    # step 9: deliver
    for v in p.h:
        tr.record(resource, v, "deliver", ("qubit", v))
    tr.record(resource, SOURCE, "deliver", ("done",))
    return VerifFResult(tr, state, malicious, p, x, z)


@dataclass
class VerifResult:
    transcript: Transcript
    state: object | None

    @property
    def aborted(self) -> bool:
        return self.transcript.aborted


def run_verif(
    g: Graph,
    corrupted,
    adversary: Adversary | None = None,
    seed: int = 0,
    backend: str = "tableau",
) -> VerifResult:
    """Execute the plain delivery resource with the early-grab handshake."""
    adversary = adversary or Adversary()
    rng = _rng(seed)
    corrupted = {c for c in corrupted if c != SOURCE}
    tr = Transcript()
    parties = list(range(g.n))
    resource = "Verif"

    state = prepare_graph_state(g, backend)
    grabbers = []
    for i in range(g.n):
        early = i in corrupted and adversary.early_grab(i, rng)
        tr.record(i, resource, "c_i", ABORT if early else "ok")
        if early:
            grabbers.append(i)
    for i in grabbers:
        tr.record(resource, i, "deliver", ("qubit", i))
    for i in grabbers:
        cont = adversary.continue_after_grab(i, view=(g, state), rng=rng)
        tr.record(i, resource, "c_i_prime", "ok" if cont else ABORT)
        if not cont:
            tr.abort_all(resource, parties)
            return VerifResult(tr, None)
    for i in range(g.n):
        if i not in grabbers:
            tr.record(resource, i, "deliver", ("qubit", i))
    return VerifResult(tr, state)


@dataclass
class CoinFlipResult:
    transcript: Transcript
    x: BitVec | None

    @property
    def aborted(self) -> bool:
        return self.transcript.aborted


def run_coinflip(
    n_bits: int,
    corrupted=(),
    adversary: Adversary | None = None,
    seed: int = 0,
) -> CoinFlipResult:
    """Execute the common-random-string resource.

    Corrupted parties may see x before deciding whether to abort; on abort
    the honest parties receive the abort symbol and never learn x.
    """
    adversary = adversary or Adversary()
    rng = _rng(seed)
    corrupted = {c for c in corrupted if c != SOURCE}
    tr = Transcript()
    resource = "CoinFlip"

    x = BitVec(rng.integers(0, 2, n_bits))
    parties = list(range(n_bits))  # one interface per coordinate owner
    grabbers = []
    for i in parties:
        early = i in corrupted and adversary.early_grab(i, rng)
        tr.record(i, resource, "c_i", ABORT if early else "ok")
        if early:
            grabbers.append(i)
    for i in grabbers:
        tr.record(resource, i, "deliver", ("x", x))
    for i in grabbers:
        cont = adversary.continue_after_grab(i, view=x, rng=rng)
        tr.record(i, resource, "c_i_prime", "ok" if cont else ABORT)
        if not cont:
            tr.abort_all(resource, parties)
            return CoinFlipResult(tr, None)
    for i in parties:
        if i not in grabbers:
            tr.record(resource, i, "deliver", ("x", x))
    return CoinFlipResult(tr, x)


def twirl_protocol(g: Graph, verif_f_result: VerifFResult, x: BitVec | None):
    """Each party applies X^{x_i} Z^{(Gx)_i} on its qubit of the delivered state.

    With every party participating this composes to the stabilizer
    X^x Z^{Gx}, so the overall state is unchanged.
    """
    if verif_f_result.aborted or verif_f_result.state is None or x is None:
        raise AbortedUpstream("twirl ran on an aborted session")
    state = verif_f_result.state
    corr = stabilizer_of(g, x)
    for v in range(g.n):
        if corr.x[v]:
            state.apply(X(v))
        if corr.z[v]:
            state.apply(Z(v))
    return state


def complete_correction(g: Graph, p: Partition, x_h: BitVec, z_h: BitVec) -> BitVec:
    """Extend an accepted honest-side correction to a full vector x'.

    x'_M = (V^T)^-1 [b ; 0] with b the validator witness; the returned
    vector (original vertex order) satisfies (G x')_H = z_h bit-exactly,
    so X^{x'} Z^{G x'} is a stabilizer reproducing the correction.
    """
    res = validate_f(g, p, PauliCorrection(x=x_h, z=z_h))
    if not res:
        raise InvalidCorrection("correction rejected by the validator")
    pv = gf2.pivot_decompose(blocks(g, p).gamma)
    pad = BitVec.zeros(p.n_m - pv.r)
    x_m = gf2.invert(pv.V.T) @ res.b.concat(pad)
    full = np.zeros(g.n, dtype=np.uint8)
    for k, v in enumerate(p.h):
        full[v] = x_h[k]
    for k, v in enumerate(p.m):
        full[v] = x_m[k]
    return BitVec(full)


def impossibility_demo(trials: int, seed: int = 0) -> dict:
    """Bell-pair distinguisher separating real delivery from a black-box simulator.

    Real world: the two parties share one Bell pair and measure in the
    computational basis; outcomes always agree.  Black-box world: each
    party holds half of a different Bell pair, so outcomes agree with
    probability 1/2.  Returns empirical rates and the distinguishing
    advantage with a 95% normal-approximation interval.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    from .sim import enumerate_branches

    rng = _rng(seed)

    real = make_state(2, "statevector")
    real.run([H(0), CNOT(0, 1)])
    real_branches = enumerate_branches([MeasureZ(0), MeasureZ(1)], real)

    ideal = make_state(4, "statevector")
    ideal.run([H(0), CNOT(0, 1), H(2), CNOT(2, 3)])
    # The distinguisher holds qubit 0 (its protocol output) and qubit 3
    # (the resource's delivery); the simulator's qubits 1, 2 are traced out.
    ideal_branches = enumerate_branches([MeasureZ(0), MeasureZ(3)], ideal)

    def sample_rate(branches) -> float:
        probs = np.array([b.probability for b in branches])
        equal = np.array([1.0 if b.outcomes[0] == b.outcomes[1] else 0.0 for b in branches])
        draws = rng.choice(len(branches), size=trials, p=probs / probs.sum())
        return float(equal[draws].mean())

    real_rate = sample_rate(real_branches)
    ideal_rate = sample_rate(ideal_branches)
    advantage = real_rate - ideal_rate
    sigma = float(np.sqrt(ideal_rate * (1 - ideal_rate) / trials)) if trials else 0.0
    return {
        "trials": trials,
        "real_equal_rate": real_rate,
        "ideal_equal_rate": ideal_rate,
        "advantage": advantage,
        "ci95": 1.96 * sigma,
    }
