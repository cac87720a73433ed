"""Momentum proof-of-work: hash collisions gated by a hashcash condition.

A solution for header hash ``H`` is a pair of distinct nonces ``a, b`` with
``h2(H || a) == h2(H || b)`` and ``h1(H || a || b) <= t``.

Instantiation: ``h1`` is SHA-256 truncated to its top ``n`` bits; ``h2`` is
SHA-256 over a ``0x02`` domain byte, truncated to its top ``ell`` bits.
``H`` is encoded big-endian in ``ceil(n / 8)`` bytes, nonces as 8-byte
big-endian integers.
"""

from __future__ import annotations

import hashlib
import math
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

H2_DOMAIN = b"\x02"
NONCE_BYTES = 8
MAX_ELL = 64
ORACLE_MAX_ELL = 14


@dataclass(frozen=True)
class MomentumParams:
    n: int
    ell: int
    t: int
    subset_bits: int

    def __post_init__(self):
        if not 1 <= self.n <= 256:
            raise ValueError(f"n must lie in [1, 256], got {self.n!r}")
        if not 1 <= self.ell <= MAX_ELL:
            raise ValueError(f"ell must lie in [1, {MAX_ELL}], got {self.ell!r}")
        if self.n > self.ell:
            raise ValueError(f"n must not exceed ell (n={self.n}, ell={self.ell})")
        if not 1 <= self.t < 2**self.n:
            raise ValueError(f"target must lie in [1, 2**n - 1], got {self.t!r}")
        if not 0 <= self.subset_bits <= self.ell:
            raise ValueError(f"subset_bits must lie in [0, ell], got {self.subset_bits!r}")

    @property
    def subset_size(self) -> int:
        return 1 << self.subset_bits


@dataclass(frozen=True, order=True)
class MomentumSolution:
    H: int
    a: int
    b: int


@dataclass(frozen=True)
class MomentumMineResult:
    solution: MomentumSolution | None
    h2_evals: int
    h1_evals: int


def _truncate(digest: bytes, bits: int) -> int:
    return int.from_bytes(digest, "big") >> (256 - bits)


def encode_header_hash(H: int, n: int) -> bytes:
    return H.to_bytes((n + 7) // 8, "big")


def header_hash(header: bytes, n: int) -> int:
    """``h1`` applied to a raw block header."""
    return _truncate(hashlib.sha256(header).digest(), n)


def h1(H: int, a: int, b: int, n: int) -> int:
    data = encode_header_hash(H, n) + a.to_bytes(NONCE_BYTES, "big") + b.to_bytes(NONCE_BYTES, "big")
    return _truncate(hashlib.sha256(data).digest(), n)


def h2(H: int, a: int, n: int, ell: int) -> int:
    return _truncate(hashlib.sha256(H2_DOMAIN + encode_header_hash(H, n) + a.to_bytes(NONCE_BYTES, "big")).digest(), ell)


def _h2_table(H: int, params: MomentumParams) -> list[int]:
    prefix = H2_DOMAIN + encode_header_hash(H, params.n)
    shift = 256 - params.ell
    sha = hashlib.sha256
    return [
        int.from_bytes(sha(prefix + a.to_bytes(NONCE_BYTES, "big")).digest(), "big") >> shift
        for a in range(params.subset_size)
    ]


def collision_pairs(H: int, params: MomentumParams) -> list[tuple[int, int]]:
    """All pairs ``a < b`` in the subset with equal ``h2``, sorted by ``(a, b)``."""
    buckets: dict[int, list[int]] = defaultdict(list)
    for a, digest in enumerate(_h2_table(H, params)):
        buckets[digest].append(a)
    pairs = [pair for nonces in buckets.values() if len(nonces) > 1 for pair in combinations(nonces, 2)]
    pairs.sort()
    return pairs


def iter_solutions(H: int, params: MomentumParams) -> Iterator[MomentumSolution]:
    for a, b in collision_pairs(H, params):
        if h1(H, a, b, params.n) <= params.t:
            yield MomentumSolution(H, a, b)


def momentum_mine(H: int, params: MomentumParams) -> MomentumMineResult:
    """Search the subset ``{0, ..., 2**subset_bits - 1}`` for a solution under ``H``.

    Every nonce in the subset is hashed with ``h2`` before any collision is
    tested, so ``h2_evals`` is always the subset size.
    """
    if not 0 <= H < 2**params.n:
        raise ValueError("header hash must fit in n bits")
    h1_evals = 0
    for a, b in collision_pairs(H, params):
        h1_evals += 1
        if h1(H, a, b, params.n) <= params.t:
            return MomentumMineResult(MomentumSolution(H, a, b), params.subset_size, h1_evals)
    return MomentumMineResult(None, params.subset_size, h1_evals)


@dataclass(frozen=True)
class MomentumSearchResult:
    solution: MomentumSolution | None
    headers_tried: int
    h2_evals: int
    h1_evals: int


def momentum_search(seed: bytes, params: MomentumParams, max_headers: int = 1 << 20) -> MomentumSearchResult:
    """Mine successive headers ``seed || j`` until one admits a solution."""
    h2_evals = h1_evals = 0
    for j in range(max_headers):
        H = header_hash(seed + j.to_bytes(NONCE_BYTES, "big"), params.n)
        result = momentum_mine(H, params)
        h2_evals += result.h2_evals
        h1_evals += result.h1_evals
        if result.solution is not None:
            return MomentumSearchResult(result.solution, j + 1, h2_evals, h1_evals)
    return MomentumSearchResult(None, max_headers, h2_evals, h1_evals)


def momentum_verify(solution: MomentumSolution, params: MomentumParams) -> bool:
    H, a, b = solution.H, solution.a, solution.b
    bound = 1 << params.ell
    if a == b or not (0 <= a < bound and 0 <= b < bound) or not 0 <= H < 2**params.n:
        return False
    if h2(H, a, params.n, params.ell) != h2(H, b, params.n, params.ell):
        return False
    return h1(H, a, b, params.n) <= params.t


def momentum_bruteforce_oracle(H: int, params: MomentumParams, block: int = 1024) -> set[MomentumSolution]:
    """Every solution ``a < b < 2**ell`` under ``H``, by comparing all pairs."""
    if params.ell > ORACLE_MAX_ELL:
        raise ValueError(f"exhaustive oracle is limited to ell <= {ORACLE_MAX_ELL}")
    size = 1 << params.ell
    digests = np.array([h2(H, a, params.n, params.ell) for a in range(size)], dtype=np.uint64)
    found = set()
    for lo in range(0, size, block):
        rows = digests[lo : lo + block]
        eq = rows[:, None] == digests[None, :]
        ai, bi = np.nonzero(eq)
        for a, b in zip((ai + lo).tolist(), bi.tolist()):
            if a < b:
                sol = MomentumSolution(H, a, b)
                if momentum_verify(sol, params):
                    found.add(sol)
    return found


@dataclass(frozen=True)
class CostModelReport:
    subset_size: float
    m: float
    classical_time: float
    optimal_subset: float
    optimal_time: float
    memory_limited_time: float | None
    quantum_lower_bound: float


def _log2_work(params: MomentumParams) -> float:
    return params.n + params.ell - math.log2(params.t)


def classical_cost_model(params: MomentumParams) -> CostModelReport:
    """Hash-evaluation counts for the classical collision-table miner.

    ``m`` headers are needed on average; each costs ``|S|`` evaluations.
    The memory-limited running time is reported only when ``|S|`` is below
    the optimum.
    """
    log_work = _log2_work(params)
    S = float(params.subset_size)
    m = max(1.0, 2.0 ** (log_work - 2 * params.subset_bits))
    optimal = 2.0 ** (log_work / 2)
    limited = 2.0 ** (log_work + 1 - params.subset_bits) if S < optimal else None
    return CostModelReport(
        subset_size=S,
        m=m,
        classical_time=m * S,
        optimal_subset=optimal,
        optimal_time=optimal,
        memory_limited_time=limited,
        quantum_lower_bound=quantum_cost_model(params),
    )


def quantum_cost_model(params: MomentumParams) -> float:
    """Lower bound ``sqrt(m) * |S|**(2/3)``: Grover over headers, element distinctness per header."""
    m = max(1.0, 2.0 ** (_log2_work(params) - 2 * params.subset_bits))
    return math.sqrt(m) * 2.0 ** (2 * params.subset_bits / 3)


RECORD_KEYS = ("H", "a", "b", "n", "ell", "t", "subset_bits")


def format_solution(solution: MomentumSolution, params: MomentumParams) -> str:
    """Flat ``key=value`` record; ``H`` and ``t`` are hex, the rest decimal."""
    lines = [
        "# momentum-solution v1",
        f"H={encode_header_hash(solution.H, params.n).hex()}",
        f"a={solution.a}",
        f"b={solution.b}",
        f"n={params.n}",
        f"ell={params.ell}",
        f"t={params.t:x}",
        f"subset_bits={params.subset_bits}",
    ]
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[MomentumSolution, MomentumParams]:
    fields = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"malformed record line: {raw!r}")
        fields[key.strip()] = value.strip()
    missing = [k for k in RECORD_KEYS if k not in fields]
    if missing:
        raise ValueError(f"solution record is missing {', '.join(missing)}")
    params = MomentumParams(
        n=int(fields["n"]), ell=int(fields["ell"]), t=int(fields["t"], 16), subset_bits=int(fields["subset_bits"])
    )
    solution = MomentumSolution(int(fields["H"], 16), int(fields["a"]), int(fields["b"]))
    return solution, params
