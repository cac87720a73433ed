"""Run configuration: a YAML file, overridden by command-line flags.

Schema (every key optional)::

    scenario: optimistic          # optimistic | pessimistic | both
    distance_mode: real           # real | integer
    qubit_formula: quadratic      # linear | quadratic
    hash_rate_form: first-principles   # first-principles | closed-form
    format: table                 # table | json | csv
    seed: 0
    forecast:
      start: 2017
      end: 2042
      step: 1
      network_fit_since: 2015     # null fits the whole history
      overhead_on_qubits: true
    scenarios:                    # partial overrides of the named scenarios
      optimistic: {qubit_doubling_months: 10, speed_cap: 50.0e+9,
                   infidelity_floor: 5.0e-6, beta: 0.75}
    data:                         # CSV tables replacing the packaged ones
      qubits: qubits.csv          # columns year,qubits
      gate_times: gate_times.csv  # columns year,gate_time_s
      fidelities: fidelities.csv  # columns year,fidelity
      network: hashrate.csv       # columns year,hashrate (fractional years)

Relative data paths resolve against the config file's directory. The
``QTHREAT_CONFIG`` environment variable names a default file.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .attack import HashRateForm
from .forecast import SCENARIOS, DataTables, Forecaster, Scenario
from .qec import DistanceMode, QubitFormula

ENV_VAR = "QTHREAT_CONFIG"
FORMATS = ("table", "json", "csv")
SCENARIO_CHOICES = ("optimistic", "pessimistic", "both")
DATA_KEYS = ("qubits", "gate_times", "fidelities", "network")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    scenario: str = "optimistic"
    distance_mode: DistanceMode = DistanceMode.REAL
    qubit_formula: QubitFormula = QubitFormula.QUADRATIC
    hash_rate_form: HashRateForm = HashRateForm.FIRST_PRINCIPLES
    format: str = "table"
    seed: int = 0
    start: float = 2017.0
    end: float = 2042.0
    step: float = 1.0
    network_fit_since: float | None = 2015.0
    overhead_on_qubits: bool = True
    scenarios: dict = field(default_factory=lambda: dict(SCENARIOS))
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        try:
            self.distance_mode = DistanceMode(self.distance_mode)
            self.qubit_formula = QubitFormula(self.qubit_formula)
            self.hash_rate_form = HashRateForm(self.hash_rate_form)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.scenario not in SCENARIO_CHOICES:
            raise ConfigError(f"scenario must be one of {SCENARIO_CHOICES}, got {self.scenario!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")

    @property
    def scenario_names(self) -> list[str]:
        return ["optimistic", "pessimistic"] if self.scenario == "both" else [self.scenario]

    def forecaster(self) -> Forecaster:
        return Forecaster(
            tables=DataTables.load(**{k: self.data.get(k) for k in DATA_KEYS}),
            mode=self.distance_mode,
            qubit_formula=self.qubit_formula,
            form=self.hash_rate_form,
            network_fit_since=self.network_fit_since,
            overhead_on_qubits=self.overhead_on_qubits,
            scenarios=dict(self.scenarios),
        )


def _scenario_overrides(raw: dict) -> dict:
    scenarios = dict(SCENARIOS)
    for name, values in (raw or {}).items():
        if name not in SCENARIOS:
            raise ConfigError(f"unknown scenario {name!r} in config")
        known = {f.name for f in dataclasses.fields(Scenario)} - {"name"}
        extra = set(values) - known
        if extra:
            raise ConfigError(f"unknown scenario fields: {sorted(extra)}")
        scenarios[name] = dataclasses.replace(SCENARIOS[name], **{k: float(v) for k, v in values.items()})
    return scenarios


def load_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Read a config file; with no path, fall back to ``$QTHREAT_CONFIG`` or defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text()) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a mapping")

    known = {"scenario", "distance_mode", "qubit_formula", "hash_rate_form", "format", "seed",
             "forecast", "scenarios", "data"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    kwargs = {k: raw[k] for k in ("scenario", "distance_mode", "qubit_formula", "hash_rate_form", "format")
              if k in raw}
    if "seed" in raw:
        kwargs["seed"] = int(raw["seed"])
    forecast = raw.get("forecast") or {}
    for key in ("start", "end", "step"):
        if key in forecast:
            kwargs[key] = float(forecast[key])
    if "network_fit_since" in forecast:
        value = forecast["network_fit_since"]
        kwargs["network_fit_since"] = None if value is None else float(value)
    if "overhead_on_qubits" in forecast:
        kwargs["overhead_on_qubits"] = bool(forecast["overhead_on_qubits"])
    kwargs["scenarios"] = _scenario_overrides(raw.get("scenarios"))
    data = raw.get("data") or {}
    bad = set(data) - set(DATA_KEYS)
    if bad:
        raise ConfigError(f"unknown data tables: {sorted(bad)}")
    kwargs["data"] = {k: str((path.parent / v).resolve()) for k, v in data.items()}
    return RunConfig(**kwargs)
