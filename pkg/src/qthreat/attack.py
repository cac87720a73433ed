"""Quantum attack cost models.

Grover mining (effective hash rate of a quantum miner), Shor-style ECDLP
key recovery, the distillation-free "transversal code" mining bound, and
the classical confirmation race an attacker must win to rewrite history.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .qec import (
    DistanceMode,
    LogicalCircuitProfile,
    OverheadResult,
    PhysicalGateModel,
    QubitFormula,
    overheads,
)

# T-depth of one oracle call: two SHA-256 calls, computed and uncomputed,
# plus the inversion about the mean.
T_DEPTH_PER_ORACLE = 297784
MINING_LOGICAL_QUBITS = 2402
MINING_CLIFFORD_PER_T = 29.4
SIGNATURE_CLIFFORD_PER_T = 20.0
ECDLP_ANCILLA = 4
# Only the 256-bit instance has a published parallelized Toffoli depth.
ECDLP_256_DEPTH_RATIO = 1.16 / 1.28

CLOSED_FORM_HASH_RATE_COEFF = 0.28
OPTIMISTIC_HASH_RATE_COEFF = 0.04
# Expected-time factor for Grover split over d independent machines.
PARALLEL_TIME_FACTOR = 0.39
PARALLEL_RATE_FACTOR = 2.56

BLOCK_INTERVAL = 600.0
NONCE_SPACE = 2**32


class HashRateForm(str, Enum):
    FIRST_PRINCIPLES = "first-principles"
    CLOSED_FORM = "closed-form"


@dataclass(frozen=True)
class MiningAttackParams:
    D: float
    s: float
    p_g: float
    machines: int = 1

    def __post_init__(self):
        if not self.D >= 1:
            raise ValueError(f"difficulty must be >= 1, got {self.D!r}")
        if not self.s > 0:
            raise ValueError(f"clock speed must be positive, got {self.s!r}")
        if self.machines < 1:
            raise ValueError(f"machines must be >= 1, got {self.machines!r}")


@dataclass(frozen=True)
class HashRateEstimate:
    oracle_calls: float
    cycles_per_oracle: float
    tau: float
    h_qc: float
    tau_parallel: float
    h_parallel: float
    n_Q: float
    form: HashRateForm


@dataclass(frozen=True)
class SignatureAttackParams:
    n: int
    s: float
    p_g: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"key size must be >= 2 bits, got {self.n!r}")
        if not self.s > 0:
            raise ValueError(f"clock speed must be positive, got {self.s!r}")


@dataclass(frozen=True)
class EcdlpProfile:
    logical_qubits: int
    toffoli_count: float
    toffoli_depth: float


@dataclass(frozen=True)
class SignatureAttackEstimate:
    tau: float
    n_Q: float
    profile: LogicalCircuitProfile
    overheads: OverheadResult


def grover_oracle_calls(D: float) -> float:
    """Expected Grover iterations to find a header at difficulty ``D``.

    Searches a space of ``10 * 2**256 / t`` headers, which holds a solution
    with probability above 0.9999, so the count is ``pi * 2**14 * sqrt(10 D)``.
    """
    if not D >= 1:
        raise ValueError(f"difficulty must be >= 1, got {D!r}")
    return math.pi * 2**14 * math.sqrt(10 * D)


def mining_profile(D: float) -> LogicalCircuitProfile:
    n_T = T_DEPTH_PER_ORACLE * grover_oracle_calls(D)
    return LogicalCircuitProfile(n_T=n_T, n_C=MINING_CLIFFORD_PER_T * n_T, n_L=MINING_LOGICAL_QUBITS)


def mining_overheads(
    D: float,
    p_g: float,
    mode: DistanceMode = DistanceMode.REAL,
    qubit_formula: QubitFormula = QubitFormula.QUADRATIC,
) -> OverheadResult:
    return overheads(PhysicalGateModel(p_g), mining_profile(D), mode, qubit_formula)


def effective_hash_rate(
    params: MiningAttackParams,
    overhead: OverheadResult,
    form: HashRateForm = HashRateForm.FIRST_PRINCIPLES,
) -> HashRateEstimate:
    """Classical hashes per second a Grover miner is worth.

    ``first-principles`` divides the classical work ``D * 2**32`` by the
    quantum solve time; ``closed-form`` evaluates ``0.28 s sqrt(D) / c_tau``.
    The two disagree by roughly a factor of three.
    """
    form = HashRateForm(form)
    if not overhead.c_tau > 0:
        raise ValueError("c_tau must be positive; zero-layer schedules have no T-gate cost")
    calls = grover_oracle_calls(params.D)
    cycles = T_DEPTH_PER_ORACLE * overhead.c_tau
    tau = calls * cycles / params.s
    if form is HashRateForm.FIRST_PRINCIPLES:
        h_qc = params.D * NONCE_SPACE / tau
    else:
        h_qc = CLOSED_FORM_HASH_RATE_COEFF * params.s * math.sqrt(params.D) / overhead.c_tau
    root_d = math.sqrt(params.machines)
    return HashRateEstimate(
        oracle_calls=calls,
        cycles_per_oracle=cycles,
        tau=tau,
        h_qc=h_qc,
        tau_parallel=PARALLEL_TIME_FACTOR * tau / root_d,
        h_parallel=PARALLEL_RATE_FACTOR * h_qc * root_d,
        n_Q=overhead.n_Q,
        form=form,
    )


def optimistic_hash_rate(s: float, D: float) -> float:
    """Hash rate with no distillation or syndrome-processing penalty."""
    return OPTIMISTIC_HASH_RATE_COEFF * s * math.sqrt(D)


def network_rate_from_difficulty(D: float) -> float:
    return D * NONCE_SPACE / BLOCK_INTERVAL


def difficulty_from_network_rate(rate: float) -> float:
    return rate * BLOCK_INTERVAL / NONCE_SPACE


def pool_attack_fraction(machines: int, s: float, D: float) -> float:
    """Share of the network hash rate held by ``machines`` optimistic quantum miners."""
    if machines < 1:
        raise ValueError(f"machines must be >= 1, got {machines!r}")
    pooled = PARALLEL_RATE_FACTOR * optimistic_hash_rate(s, D) * math.sqrt(machines)
    return pooled / network_rate_from_difficulty(D)


def ecdlp_profile(n: int) -> EcdlpProfile:
    if n < 2:
        raise ValueError(f"key size must be >= 2 bits, got {n!r}")
    qubits = 9 * n + 2 * math.ceil(math.log2(n)) + 10 + ECDLP_ANCILLA
    count = (448 * math.log2(n) + 4090) * n**3
    depth = count * ECDLP_256_DEPTH_RATIO if n == 256 else count
    return EcdlpProfile(logical_qubits=qubits, toffoli_count=count, toffoli_depth=depth)


def signature_profile(n: int) -> LogicalCircuitProfile:
    ecdlp = ecdlp_profile(n)
    n_T = ecdlp.toffoli_count
    return LogicalCircuitProfile(n_T=n_T, n_C=SIGNATURE_CLIFFORD_PER_T * n_T, n_L=ecdlp.logical_qubits)


def crack_time(n_T: float, c_tau: float, s: float) -> float:
    return n_T * c_tau / s


def signature_crack_estimate(
    params: SignatureAttackParams,
    mode: DistanceMode = DistanceMode.REAL,
    qubit_formula: QubitFormula = QubitFormula.QUADRATIC,
) -> SignatureAttackEstimate:
    """Seconds and physical qubits to recover an ``n``-bit ECDLP key."""
    profile = signature_profile(params.n)
    result = overheads(PhysicalGateModel(params.p_g), profile, mode, qubit_formula)
    return SignatureAttackEstimate(
        tau=crack_time(profile.n_T, result.c_tau, params.s),
        n_Q=result.n_Q,
        profile=profile,
        overheads=result,
    )


@dataclass(frozen=True)
class RaceResult:
    probability: float
    stderr: float = 0.0
    trials: int = 0


def race_success_probability(q: float, k: int) -> float:
    """Chance an attacker with hash share ``q`` ever erases a ``k``-block lead."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"attacker fraction must lie in [0, 1], got {q!r}")
    if k < 0:
        raise ValueError(f"confirmations must be >= 0, got {k!r}")
    if k == 0 or q >= 0.5:
        return 1.0
    return min(1.0, (q / (1.0 - q)) ** k)


def _simulate_race(q: float, k: int, trials: int, rng: np.random.Generator, cap: int, max_blocks: int) -> int:
    deficit = np.full(trials, k, dtype=np.int64)
    active = np.arange(trials)
    caught = 0
    for _ in range(max_blocks):
        if active.size == 0:
            break
        step = np.where(rng.random(active.size) < q, -1, 1)
        deficit[active] += step
        won = deficit[active] <= 0
        caught += int(won.sum())
        active = active[~won & (deficit[active] < cap)]
    return caught


def race_success_monte_carlo(
    q: float,
    k: int,
    trials: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
    batch: int = 1_000_000,
    max_blocks: int = 100_000,
) -> RaceResult:
    """Monte-Carlo estimate of :func:`race_success_probability`.

    Each block goes to the attacker with probability ``q``. A walk is
    abandoned once its deficit reaches a cap past which a comeback has
    probability below 1e-12, or after ``max_blocks`` blocks. Batches draw
    from child seeds of ``seed``, so the result is independent of
    ``workers``.
    """
    race_success_probability(q, k)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if k == 0:
        return RaceResult(1.0, 0.0, trials)
    if q == 0.0:
        return RaceResult(0.0, 0.0, trials)
    ratio = q / (1.0 - q)
    if ratio < 1.0:
        cap = k + math.ceil(math.log(1e-12) / math.log(ratio))
    else:
        cap = k + max_blocks

    sizes = [batch] * (trials // batch)
    if trials % batch:
        sizes.append(trials % batch)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(q, k, size, s, cap, max_blocks) for size, s in zip(sizes, seeds)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(_race_batch, jobs))
    else:
        counts = [_race_batch(job) for job in jobs]

    p = sum(counts) / trials
    return RaceResult(p, math.sqrt(max(p * (1 - p), 0.0) / trials), trials)


def _race_batch(job) -> int:
    q, k, size, seed_seq, cap, max_blocks = job
    return _simulate_race(q, k, size, np.random.default_rng(seed_seq), cap, max_blocks)
