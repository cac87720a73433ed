"""Surface-code overhead calculator.

Plans a layered magic-state distillation factory for the T gates of a
logical circuit and picks the code distance for its Clifford part, then
turns both into time (cycles per T gate) and space (physical qubits per
logical qubit) overhead factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "DistanceMode",
    "QubitFormula",
    "PhysicalGateModel",
    "LogicalCircuitProfile",
    "DistillationSchedule",
    "OverheadResult",
    "logical_error_per_cycle",
    "plan_distillation",
    "circuit_code_distance",
    "overheads",
]

# Factory constants: error bound 192 d (100 p)^((d+1)/2), 10 d cycles per
# layer, 50 d^2 qubits per distillation unit, 15-to-1 fan-in, 70 p^3 output.
FACTORY_PREFACTOR = 192.0
FACTORY_ERROR_SCALE = 100.0
CYCLES_PER_DISTANCE = 10.0
FACTORY_QUBITS_PER_D2 = 50.0
DISTILLATION_FANIN = 15
DISTILLATION_SUPPRESSION = 70.0
# Circuit constants: error (80 p)^((d+1)/2), 3.125 qubits per logical qubit per d (or d^2).
CIRCUIT_ERROR_SCALE = 80.0
CIRCUIT_QUBIT_FACTOR = 3.125

DISTANCE_TOL = 1e-9
MAX_LAYERS = 64


class DistanceMode(str, Enum):
    REAL = "real"
    INTEGER = "integer"


class QubitFormula(str, Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"


@dataclass(frozen=True)
class PhysicalGateModel:
    p_g: float

    def __post_init__(self):
        if not 0.0 < self.p_g < 0.01:
            raise ValueError(f"physical error rate must lie in (0, 0.01), got {self.p_g!r}")


@dataclass(frozen=True)
class LogicalCircuitProfile:
    n_T: float
    n_C: float
    n_L: float

    def __post_init__(self):
        for name in ("n_T", "n_C", "n_L"):
            value = getattr(self, name)
            if not value >= 1:
                raise ValueError(f"{name} must be >= 1, got {value!r}")


@dataclass(frozen=True)
class DistillationSchedule:
    distances: tuple[float, ...]

    @property
    def layers(self) -> int:
        return len(self.distances)


@dataclass(frozen=True)
class OverheadResult:
    c_tau: float
    tau: float
    q_factory: float
    d_C: float
    q_circuit: float
    n_Q: float
    c_nQ: float
    schedule: DistillationSchedule


def logical_error_per_cycle(d: float, p_g: float) -> float:
    """Error bound of one distillation layer at code distance ``d``.

    Not clamped to 1; for small ``d`` and large ``p_g`` it is only a bound.
    """
    if d <= 0 or p_g <= 0:
        raise ValueError("d and p_g must be positive")
    return FACTORY_PREFACTOR * d * (FACTORY_ERROR_SCALE * p_g) ** ((d + 1) / 2)


def _bisect_decreasing(log_excess, lo: float) -> float:
    """Smallest d >= lo with ``log_excess(d) <= 0`` for a function decreasing on [lo, inf)."""
    if log_excess(lo) <= 0:
        return lo
    hi = max(2.0 * lo, lo + 1.0)
    while log_excess(hi) > 0:
        lo, hi = hi, 2.0 * hi
    while hi - lo > DISTANCE_TOL:
        mid = 0.5 * (lo + hi)
        if log_excess(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return hi


def _layer_distance(p_tol: float, p_g: float, mode: DistanceMode) -> float:
    log_base = math.log(FACTORY_ERROR_SCALE * p_g)
    log_target = math.log(p_tol / 2)

    def excess(d: float) -> float:
        return math.log(FACTORY_PREFACTOR * d) + 0.5 * (d + 1) * log_base - log_target

    # the bound rises for d < -2/ln(100 p_g), so search only past its peak
    lo = max(1.0, -2.0 / log_base)
    d = _bisect_decreasing(excess, lo)
    return float(math.ceil(d)) if mode is DistanceMode.INTEGER else d


def plan_distillation(
    model: PhysicalGateModel, n_T: float, mode: DistanceMode = DistanceMode.REAL
) -> tuple[DistillationSchedule, float, float, float]:
    """Plan the distillation factory for ``n_T`` T gates.

    Returns ``(schedule, c_tau, tau, q_factory)`` where ``c_tau`` is the
    number of clock cycles per T gate and ``tau = n_T * c_tau``.
    """
    if n_T < 1:
        raise ValueError(f"n_T must be >= 1, got {n_T!r}")
    mode = DistanceMode(mode)
    p_g = model.p_g
    p_tol = 1.0 / n_T
    distances: list[float] = []
    while p_tol < 10 * p_g:
        if len(distances) >= MAX_LAYERS:
            raise RuntimeError("distillation schedule did not terminate")
        distances.append(_layer_distance(p_tol, p_g, mode))
        p_tol = (p_tol / DISTILLATION_SUPPRESSION) ** (1 / 3)

    schedule = DistillationSchedule(tuple(distances))
    if not distances:
        return schedule, 0.0, 0.0, 0.0
    c_tau = CYCLES_PER_DISTANCE * sum(distances)
    q_factory = FACTORY_QUBITS_PER_D2 * distances[-1] ** 2 * DISTILLATION_FANIN ** (len(distances) - 1)
    return schedule, c_tau, n_T * c_tau, q_factory


def circuit_code_distance(
    model: PhysicalGateModel, n_C: float, mode: DistanceMode = DistanceMode.REAL
) -> float:
    """Smallest code distance keeping ``n_C`` Clifford gates below unit total error."""
    if n_C < 1:
        raise ValueError(f"n_C must be >= 1, got {n_C!r}")
    base = CIRCUIT_ERROR_SCALE * model.p_g
    if base >= 1:
        raise ValueError(f"p_g must be below {1 / CIRCUIT_ERROR_SCALE}, got {model.p_g!r}")
    log_base = math.log(base)
    log_target = -math.log(n_C)
    d = _bisect_decreasing(lambda d: 0.5 * (d + 1) * log_base - log_target, 1.0)
    return float(math.ceil(d)) if DistanceMode(mode) is DistanceMode.INTEGER else d


def overheads(
    model: PhysicalGateModel,
    profile: LogicalCircuitProfile,
    mode: DistanceMode = DistanceMode.REAL,
    qubit_formula: QubitFormula = QubitFormula.QUADRATIC,
) -> OverheadResult:
    """Time and space error-correction overheads of a logical circuit.

    ``qubit_formula`` picks the circuit footprint: ``linear`` charges
    ``3.125 * n_L * d_C`` physical qubits, ``quadratic`` charges
    ``3.125 * n_L * d_C**2``.
    """
    schedule, c_tau, tau, q_factory = plan_distillation(model, profile.n_T, mode)
    d_C = circuit_code_distance(model, profile.n_C, mode)
    power = 1 if QubitFormula(qubit_formula) is QubitFormula.LINEAR else 2
    q_circuit = CIRCUIT_QUBIT_FACTOR * profile.n_L * d_C**power
    n_Q = q_factory + q_circuit
    return OverheadResult(
        c_tau=c_tau,
        tau=tau,
        q_factory=q_factory,
        d_C=d_C,
        q_circuit=q_circuit,
        n_Q=n_Q,
        c_nQ=n_Q / profile.n_L,
        schedule=schedule,
    )
