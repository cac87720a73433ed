"""Technology forecasts: network hash rate, quantum hardware, attack crossovers.

All curves are exponential trends fitted by least squares in log space to
the shipped data tables, with scenario-specific caps, floors and growth
rates. Time is measured in fractional calendar years.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .attack import (
    HashRateForm,
    MiningAttackParams,
    difficulty_from_network_rate,
    effective_hash_rate,
    mining_profile,
    signature_profile,
)
from .qec import (
    CIRCUIT_ERROR_SCALE,
    DistanceMode,
    PhysicalGateModel,
    QubitFormula,
    overheads,
)

BASE_YEAR = 2017.0
MIN_YEAR, MAX_YEAR = 2010.0, 2100.0
ASIC_HASH_RATE = 14e12
BLOCK_TIME = 600.0
EXPONENTIAL_YEARS = 5.0
INFIDELITY_HALVING_YEARS = 1.0


@dataclass(frozen=True)
class Scenario:
    name: str
    qubit_doubling_months: float
    speed_cap: float
    infidelity_floor: float
    beta: float


OPTIMISTIC = Scenario("optimistic", 10.0, 50e9, 5e-6, 0.75)
PESSIMISTIC = Scenario("pessimistic", 20.0, 5e9, 5e-5, 0.85)
SCENARIOS = {s.name: s for s in (OPTIMISTIC, PESSIMISTIC)}


def get_scenario(name: str | Scenario) -> Scenario:
    if isinstance(name, Scenario):
        return name
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; expected one of {sorted(SCENARIOS)}") from None


@dataclass(frozen=True)
class DataPoint:
    year: float
    value: float

    def __post_init__(self):
        if not MIN_YEAR <= self.year <= MAX_YEAR:
            raise ValueError(f"year {self.year!r} outside [{MIN_YEAR}, {MAX_YEAR}]")


def read_points(path, column: str, mid_year: bool = True, transform=None) -> list[DataPoint]:
    """Read ``year`` and ``column`` from a CSV table; ``#`` lines are comments.

    Whole-year entries are placed mid-year when ``mid_year`` is set.
    """
    with open(path, newline="") as fh:
        rows = csv.DictReader(line for line in fh if not line.lstrip().startswith("#"))
        points = []
        for row in rows:
            year = float(row["year"]) + (0.5 if mid_year else 0.0)
            value = float(row[column])
            points.append(DataPoint(year, transform(value) if transform else value))
    return points


def _packaged(name: str) -> Path:
    return Path(str(resources.files("qthreat") / "data" / name))


@dataclass(frozen=True)
class DataTables:
    qubits: tuple[DataPoint, ...]
    gate_speed: tuple[DataPoint, ...]
    infidelity: tuple[DataPoint, ...]
    network: tuple[DataPoint, ...]

    @classmethod
    def load(cls, qubits=None, gate_times=None, fidelities=None, network=None) -> "DataTables":
        """Load tables, falling back to the packaged copies for any path left as None."""
        return cls(
            qubits=tuple(read_points(qubits or _packaged("qubits.csv"), "qubits")),
            gate_speed=tuple(
                read_points(gate_times or _packaged("gate_times.csv"), "gate_time_s", transform=lambda g: 1.0 / g)
            ),
            infidelity=tuple(
                read_points(fidelities or _packaged("fidelities.csv"), "fidelity", transform=lambda f: 1.0 - f)
            ),
            network=tuple(read_points(network or _packaged("network_hashrate.csv"), "hashrate", mid_year=False)),
        )


@dataclass(frozen=True)
class ExponentialFit:
    """``value(t) = anchor_value * exp(rate * (t - anchor_year))``."""

    anchor_year: float
    anchor_value: float
    rate: float

    def __call__(self, t: float) -> float:
        return self.anchor_value * math.exp(self.rate * (t - self.anchor_year))

    @property
    def doubling_time(self) -> float:
        return math.log(2) / self.rate


def _check_points(points: Sequence[DataPoint], minimum: int) -> tuple[np.ndarray, np.ndarray]:
    if len(points) < minimum:
        raise ValueError(f"need at least {minimum} data points, got {len(points)}")
    years = np.array([p.year for p in points], dtype=float)
    values = np.array([p.value for p in points], dtype=float)
    if np.any(values <= 0):
        raise ValueError("exponential fit needs strictly positive values")
    return years, np.log(values)


def fit_exponential(points: Sequence[DataPoint]) -> ExponentialFit:
    """Least-squares fit of log(value) against year, anchored at the last year."""
    years, logs = _check_points(points, 2)
    if np.unique(years).size < 2:
        raise ValueError("exponential fit needs at least two distinct years")
    rate, intercept = np.polyfit(years, logs, 1)
    anchor = float(years.max())
    return ExponentialFit(anchor, float(math.exp(intercept + rate * anchor)), float(rate))


def fit_exponential_fixed_rate(points: Sequence[DataPoint], rate: float) -> ExponentialFit:
    """Least-squares anchor for an exponential whose growth rate is prescribed."""
    years, logs = _check_points(points, 1)
    anchor = float(years.max())
    log_value = float(np.mean(logs - rate * (years - anchor)))
    return ExponentialFit(anchor, math.exp(log_value), rate)


@dataclass(frozen=True)
class HardwareTimeline:
    year: float
    qubits: float
    gate_speed: float
    infidelity: float
    overhead_factor: float


@dataclass(frozen=True)
class NetworkTimeline:
    year: float
    rate: float
    difficulty: float


class HardwareModel:
    def __init__(self, scenario: Scenario, tables: DataTables):
        self.scenario = scenario
        self.qubit_fit = fit_exponential_fixed_rate(
            tables.qubits, math.log(2) * 12.0 / scenario.qubit_doubling_months
        )
        self.speed_fit = fit_exponential(tables.gate_speed)
        self.infidelity_fit = fit_exponential_fixed_rate(
            tables.infidelity, -math.log(2) / INFIDELITY_HALVING_YEARS
        )

    def __call__(self, t: float) -> HardwareTimeline:
        if t < BASE_YEAR:
            raise ValueError(f"hardware timeline starts at {BASE_YEAR}, got {t!r}")
        sc = self.scenario
        return HardwareTimeline(
            year=t,
            qubits=self.qubit_fit(t),
            gate_speed=min(sc.speed_cap, self.speed_fit(t)),
            infidelity=max(sc.infidelity_floor, self.infidelity_fit(t)),
            overhead_factor=sc.beta ** (t - BASE_YEAR),
        )


class NetworkModel:
    """Exponential fit to recent history, extended per scenario.

    Optimistic: the exponential runs for five more years, then continues as
    its tangent line. Pessimistic: the tangent line at the end of history.
    """

    def __init__(self, history: Sequence[DataPoint], fit_since: float | None = None):
        recent = [p for p in history if fit_since is None or p.year >= fit_since]
        self.fit = fit_exponential(recent)
        self.end = max(p.year for p in history)

    def _tangent(self, t0: float, t: float) -> float:
        value = self.fit(t0)
        return value + value * self.fit.rate * (t - t0)

    def rate(self, t: float, scenario: Scenario) -> float:
        if t <= self.end:
            return self.fit(t)
        if scenario.name == "optimistic":
            splice = self.end + EXPONENTIAL_YEARS
            return self.fit(t) if t <= splice else self._tangent(splice, t)
        return self._tangent(self.end, t)

    def __call__(self, t: float, scenario: Scenario) -> NetworkTimeline:
        rate = self.rate(t, scenario)
        return NetworkTimeline(t, rate, difficulty_from_network_rate(rate))


def network_rate(
    t: float, scenario: Scenario | str, history: Sequence[DataPoint], fit_since: float | None = None
) -> float:
    model = NetworkModel(history, fit_since)
    if t < model.end:
        raise ValueError(f"extrapolation starts at the end of history ({model.end}), got {t!r}")
    return model.rate(t, get_scenario(scenario))


def hardware_timeline(t: float, scenario: Scenario | str, tables: DataTables | None = None) -> HardwareTimeline:
    return HardwareModel(get_scenario(scenario), tables or DataTables.load())(t)


@dataclass(frozen=True)
class Feasibility:
    year: float
    scenario: str
    p_g: float
    gate_speed: float
    overhead_factor: float
    crack_time: float
    signature_qubits: float
    difficulty: float
    qubits_required: float
    qubits_available: float
    mining_h_qc: float


@dataclass(frozen=True)
class CrossoverReport:
    scenario: str
    qubit_sufficiency_year: float | None
    signature_break_year: float | None
    hash_dominance_year: float | None
    horizon: tuple[float, float]


@dataclass
class Forecaster:
    """Evaluates the attack pipeline along the hardware and network timelines.

    ``overhead_on_qubits`` controls whether the yearly algorithmic-overhead
    reduction also shrinks qubit requirements; it always shrinks time.
    """

    tables: DataTables = field(default_factory=DataTables.load)
    mode: DistanceMode = DistanceMode.REAL
    qubit_formula: QubitFormula = QubitFormula.QUADRATIC
    form: HashRateForm = HashRateForm.FIRST_PRINCIPLES
    network_fit_since: float | None = 2015.0
    overhead_on_qubits: bool = True
    key_bits: int = 256
    scenarios: dict = field(default_factory=lambda: dict(SCENARIOS))

    @cached_property
    def network(self) -> NetworkModel:
        return NetworkModel(self.tables.network, self.network_fit_since)

    @cached_property
    def _hardware(self) -> dict:
        return {name: HardwareModel(sc, self.tables) for name, sc in self.scenarios.items()}

    def scenario(self, name: str | Scenario) -> Scenario:
        if isinstance(name, Scenario):
            return name
        try:
            return self.scenarios[name]
        except KeyError:
            raise ValueError(f"unknown scenario {name!r}") from None

    def hardware(self, t: float, scenario: str | Scenario) -> HardwareTimeline:
        sc = self.scenario(scenario)
        model = self._hardware.get(sc.name)
        if model is None or model.scenario != sc:
            model = HardwareModel(sc, self.tables)
        return model(t)

    def feasibility(self, t: float, scenario: str | Scenario) -> Feasibility:
        """Signature crack time, Grover-mining qubit needs and hash rate at year ``t``.

        Years whose infidelity is above the code threshold report infinite
        time and qubits and zero hash rate.
        """
        sc = self.scenario(scenario)
        hw = self.hardware(t, sc)
        net = self.network(t, sc)
        factor = hw.overhead_factor
        space = factor if self.overhead_on_qubits else 1.0
        inf = math.inf
        crack, sig_qubits, required, h_qc = inf, inf, inf, 0.0
        if hw.infidelity < min(0.01, 1.0 / CIRCUIT_ERROR_SCALE):
            model = PhysicalGateModel(hw.infidelity)
            sig_profile = signature_profile(self.key_bits)
            sig = overheads(model, sig_profile, self.mode, self.qubit_formula)
            crack = sig_profile.n_T * sig.c_tau * factor / hw.gate_speed
            sig_qubits = sig.n_Q * space
            difficulty = max(net.difficulty, 1.0)
            mine = overheads(model, mining_profile(difficulty), self.mode, self.qubit_formula)
            required = mine.n_Q * space
            scaled = dataclasses.replace(mine, c_tau=mine.c_tau * factor)
            h_qc = effective_hash_rate(MiningAttackParams(difficulty, hw.gate_speed, hw.infidelity), scaled, self.form).h_qc
        return Feasibility(
            year=t,
            scenario=sc.name,
            p_g=hw.infidelity,
            gate_speed=hw.gate_speed,
            overhead_factor=factor,
            crack_time=crack,
            signature_qubits=sig_qubits,
            difficulty=net.difficulty,
            qubits_required=required,
            qubits_available=hw.qubits,
            mining_h_qc=h_qc,
        )

    def crossovers(
        self, scenario: str | Scenario, start: float = BASE_YEAR, end: float = 2042.0, step: float = 1.0
    ) -> CrossoverReport:
        """First grid year meeting each threat condition, or None within the horizon."""
        sc = self.scenario(scenario)
        found = {"qubits": None, "signature": None, "hash": None}
        for t in year_grid(start, end, step):
            f = self.feasibility(t, sc)
            if found["qubits"] is None and f.qubits_available >= f.qubits_required:
                found["qubits"] = t
            if found["signature"] is None and f.crack_time < BLOCK_TIME:
                found["signature"] = t
            if found["hash"] is None and f.mining_h_qc > ASIC_HASH_RATE:
                found["hash"] = t
        return CrossoverReport(sc.name, found["qubits"], found["signature"], found["hash"], (start, end))


def year_grid(start: float, end: float, step: float) -> list[float]:
    if step <= 0:
        raise ValueError("year step must be positive")
    if end < start:
        raise ValueError(f"empty year range {start}..{end}")
    count = int(math.floor((end - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def attack_feasibility(t: float, scenario: Scenario | str, forecaster: Forecaster | None = None) -> Feasibility:
    if t < BASE_YEAR:
        raise ValueError(f"feasibility is defined from {BASE_YEAR}, got {t!r}")
    return (forecaster or Forecaster()).feasibility(t, scenario)


FIGURES = ("fig1", "fig2", "fig3", "fig5", "appB", "appC")

FIG1_CLOCK = 50e9
FIG3_CLOCK = 10e9
FIG1_DIFFICULTIES = tuple(10.0**k for k in range(8, 17, 2))


def _error_rate_grid(lo: float = 1e-6, hi: float = 1e-3, per_decade: int = 4) -> list[float]:
    decades = math.log10(hi / lo)
    n = int(round(decades * per_decade)) + 1
    return [float(v) for v in np.logspace(math.log10(lo), math.log10(hi), n)]


def emit_figure_series(
    figure: str,
    scenarios: Iterable[str] = ("optimistic", "pessimistic"),
    start: float = BASE_YEAR,
    end: float = 2042.0,
    step: float = 1.0,
    forecaster: Forecaster | None = None,
) -> list[dict]:
    """Rows of every plotted quantity for one figure, ready for CSV output.

    ``fig1`` and ``fig3`` sweep the physical error rate (and difficulty for
    ``fig1``); the others are indexed by year with one column per scenario.
    """
    if figure not in FIGURES:
        raise ValueError(f"unknown figure {figure!r}; expected one of {', '.join(FIGURES)}")
    fc = forecaster or Forecaster()
    names = [fc.scenario(s).name for s in scenarios]

    if figure == "fig1":
        rows = []
        for D in FIG1_DIFFICULTIES:
            for p in _error_rate_grid():
                oh = overheads(PhysicalGateModel(p), mining_profile(D), fc.mode, fc.qubit_formula)
                est = effective_hash_rate(MiningAttackParams(D, FIG1_CLOCK, p), oh, fc.form)
                rows.append({"difficulty": D, "p_g": p, "c_tau": oh.c_tau, "c_nQ": oh.c_nQ,
                             "h_qc": est.h_qc, "n_Q": oh.n_Q})
        return rows
    if figure == "fig3":
        rows = []
        profile = signature_profile(fc.key_bits)
        for p in _error_rate_grid():
            oh = overheads(PhysicalGateModel(p), profile, fc.mode, fc.qubit_formula)
            rows.append({"p_g": p, "c_tau": oh.c_tau, "c_nQ": oh.c_nQ,
                         "crack_minutes": profile.n_T * oh.c_tau / FIG3_CLOCK / 60.0, "n_Q": oh.n_Q})
        return rows

    rows = []
    for t in year_grid(start, end, step):
        row: dict = {"year": t}
        for name in names:
            if figure == "appB":
                net = fc.network(t, fc.scenario(name))
                row[f"rate_{name}"] = net.rate
                row[f"difficulty_{name}"] = net.difficulty
            elif figure == "appC":
                hw = fc.hardware(t, name)
                row[f"qubits_{name}"] = hw.qubits
                row[f"gate_speed_{name}"] = hw.gate_speed
                row[f"infidelity_{name}"] = hw.infidelity
                row[f"overhead_factor_{name}"] = hw.overhead_factor
            else:
                f = fc.feasibility(t, name)
                if figure == "fig2":
                    row[f"network_rate_{name}"] = fc.network.rate(t, fc.scenario(name))
                    row[f"qc_hash_rate_{name}"] = f.mining_h_qc
                    row[f"qc_enough_qubits_{name}"] = int(f.qubits_available >= f.qubits_required)
                else:
                    row[f"crack_time_{name}"] = f.crack_time
        if figure == "fig2":
            row["asic_reference"] = ASIC_HASH_RATE
        elif figure == "fig5":
            row["block_time_reference"] = BLOCK_TIME
        rows.append(row)
    return rows
