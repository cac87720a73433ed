"""Machine-readable reports and their JSON / CSV / text renderings.

Every report is a plain dict with a ``kind`` key; ``schemas/report.schema.json``
describes each kind. Non-finite floats are written as ``null``.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from importlib import resources

from . import attack, momentum
from .attack import HashRateForm, MiningAttackParams, SignatureAttackParams
from .forecast import CrossoverReport, Forecaster, emit_figure_series
from .pqsig import sorted_table
from .qec import DistanceMode, QubitFormula
from .units import format_duration, format_si

SCHEMA_VERSION = 1


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "value") and isinstance(getattr(value, "value"), str):
        return value.value
    return value


def mining_report(
    D: float,
    s: float,
    p_g: float,
    machines: int = 1,
    mode: DistanceMode = DistanceMode.REAL,
    qubit_formula: QubitFormula = QubitFormula.QUADRATIC,
    form: HashRateForm = HashRateForm.FIRST_PRINCIPLES,
) -> dict:
    params = MiningAttackParams(D, s, p_g, machines)
    oh = attack.mining_overheads(D, p_g, mode, qubit_formula)
    first = attack.effective_hash_rate(params, oh, HashRateForm.FIRST_PRINCIPLES)
    closed = attack.effective_hash_rate(params, oh, HashRateForm.CLOSED_FORM)
    chosen = first if HashRateForm(form) is HashRateForm.FIRST_PRINCIPLES else closed
    return {
        "kind": "mining",
        "schema_version": SCHEMA_VERSION,
        "inputs": {"difficulty": D, "clock_hz": s, "p_g": p_g, "machines": machines,
                   "distance_mode": DistanceMode(mode).value, "qubit_formula": QubitFormula(qubit_formula).value},
        "oracle_calls": first.oracle_calls,
        "cycles_per_oracle": first.cycles_per_oracle,
        "layers": oh.schedule.layers,
        "distances": list(oh.schedule.distances),
        "d_C": oh.d_C,
        "c_tau": oh.c_tau,
        "c_nQ": oh.c_nQ,
        "n_Q": oh.n_Q,
        "tau_s": first.tau,
        "tau_parallel_s": first.tau_parallel,
        "form": chosen.form.value,
        "h_qc": chosen.h_qc,
        "h_parallel": chosen.h_parallel,
        "h_qc_first_principles": first.h_qc,
        "h_qc_closed_form": closed.h_qc,
        "h_qc_optimistic": attack.optimistic_hash_rate(s, D),
        "network_rate": attack.network_rate_from_difficulty(D),
        "pool_fraction_optimistic": attack.pool_attack_fraction(machines, s, D),
    }


def signature_report(
    n: int,
    s: float,
    p_g: float,
    mode: DistanceMode = DistanceMode.REAL,
    qubit_formula: QubitFormula = QubitFormula.QUADRATIC,
) -> dict:
    est = attack.signature_crack_estimate(SignatureAttackParams(n, s, p_g), mode, qubit_formula)
    ecdlp = attack.ecdlp_profile(n)
    return {
        "kind": "signature",
        "schema_version": SCHEMA_VERSION,
        "inputs": {"bits": n, "clock_hz": s, "p_g": p_g,
                   "distance_mode": DistanceMode(mode).value, "qubit_formula": QubitFormula(qubit_formula).value},
        "logical_qubits": ecdlp.logical_qubits,
        "toffoli_count": ecdlp.toffoli_count,
        "toffoli_depth": ecdlp.toffoli_depth,
        "layers": est.overheads.schedule.layers,
        "distances": list(est.overheads.schedule.distances),
        "d_C": est.overheads.d_C,
        "c_tau": est.overheads.c_tau,
        "c_nQ": est.overheads.c_nQ,
        "crack_time_s": est.tau,
        "n_Q": est.n_Q,
    }


def crossover_dict(report: CrossoverReport) -> dict:
    return {
        "scenario": report.scenario,
        "qubit_sufficiency_year": report.qubit_sufficiency_year,
        "signature_break_year": report.signature_break_year,
        "hash_dominance_year": report.hash_dominance_year,
        "horizon": list(report.horizon),
    }


def forecast_report(forecaster: Forecaster, scenarios, start: float, end: float, step: float,
                    figure: str = "fig5") -> dict:
    return {
        "kind": "forecast",
        "schema_version": SCHEMA_VERSION,
        "figure": figure,
        "crossovers": [crossover_dict(forecaster.crossovers(s, start, end, step)) for s in scenarios],
        "rows": emit_figure_series(figure, scenarios, start, end, step, forecaster),
    }


def figure_report(figure: str, rows: list[dict]) -> dict:
    return {"kind": "figure", "schema_version": SCHEMA_VERSION, "figure": figure, "rows": rows}


def cost_model_report(params: momentum.MomentumParams) -> dict:
    report = momentum.classical_cost_model(params)
    return {
        "kind": "cost-model",
        "schema_version": SCHEMA_VERSION,
        "inputs": dataclasses.asdict(params),
        **dataclasses.asdict(report),
        "classical_quantum_ratio": report.classical_time / report.quantum_lower_bound,
    }


def pqsig_report(sort_key: str = "total_kb", descending: bool = False) -> dict:
    rows = [dict(dataclasses.asdict(r), family=r.family) for r in sorted_table(sort_key, descending)]
    return {"kind": "pqsig", "schema_version": SCHEMA_VERSION, "sort_key": sort_key,
            "descending": descending, "rows": rows}


def to_json(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def to_csv(report: dict) -> str:
    """Rows as a table when the report has them, else ``key,value`` pairs."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    rows = report.get("rows")
    if rows:
        header = list(rows[0])
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_value(_clean(row[k])) for k in header])
        return buf.getvalue()
    writer.writerow(["key", "value"])
    for key, value in _flatten(_clean(report)):
        writer.writerow([key, _csv_value(value)])
    return buf.getvalue()


def _csv_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list) and not any(isinstance(v, (dict, list)) for v in obj):
        yield prefix[:-1], " ".join(str(v) for v in obj)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix[:-1], obj


def to_table(report: dict) -> str:
    kind = report["kind"]
    renderer = _TABLES.get(kind)
    if renderer is not None:
        return renderer(report)
    return "\n".join(f"{k:<28} {v}" for k, v in _flatten(_clean(report))) + "\n"


def _mining_table(r: dict) -> str:
    i = r["inputs"]
    lines = [
        f"difficulty                 {i['difficulty']:.4g}",
        f"clock speed                {format_si(i['clock_hz'], 'Hz')}",
        f"physical error rate        {i['p_g']:.3g}",
        f"machines                   {i['machines']}",
        f"distance mode              {i['distance_mode']} (qubit formula: {i['qubit_formula']})",
        f"oracle calls               {r['oracle_calls']:.4g}",
        f"distillation distances     {', '.join(f'{d:.2f}' for d in r['distances'])}",
        f"c_tau                      {r['c_tau']:.1f} cycles per T gate",
        f"c_nQ                       {r['c_nQ']:.1f} physical qubits per logical qubit",
        f"physical qubits            {r['n_Q']:.3g}",
        f"expected solve time        {format_duration(r['tau_s'])}",
        f"h_qc [{r['form']}]".ljust(26) + " " + f"{format_si(r['h_qc'], 'H/s')}",
        f"h_qc first-principles      {format_si(r['h_qc_first_principles'], 'H/s')}",
        f"h_qc closed-form           {format_si(r['h_qc_closed_form'], 'H/s')}",
        f"h_qc parallel [{r['form']}]".ljust(26) + " " + f"{format_si(r['h_parallel'], 'H/s')}",
        f"h_qc optimistic (0.04 s vD) {format_si(r['h_qc_optimistic'], 'H/s')}",
        f"network rate at D          {format_si(r['network_rate'], 'H/s')}",
        f"optimistic pool fraction   {r['pool_fraction_optimistic']:.3g}",
    ]
    return "\n".join(lines) + "\n"


def _signature_table(r: dict) -> str:
    i = r["inputs"]
    lines = [
        f"key size                   {i['bits']} bits",
        f"clock speed                {format_si(i['clock_hz'], 'Hz')}",
        f"physical error rate        {i['p_g']:.3g}",
        f"distance mode              {i['distance_mode']} (qubit formula: {i['qubit_formula']})",
        f"logical qubits             {r['logical_qubits']}",
        f"Toffoli gates              {r['toffoli_count']:.4g}",
        f"c_tau                      {r['c_tau']:.1f} cycles per T gate",
        f"c_nQ                       {r['c_nQ']:.1f} physical qubits per logical qubit",
        f"crack time                 {format_duration(r['crack_time_s'])} ({r['crack_time_s']:.4g} s)",
        f"physical qubits            {r['n_Q']:.4g}",
    ]
    return "\n".join(lines) + "\n"


def _fmt_year(y):
    return "beyond horizon" if y is None else f"{y:g}"


def _forecast_table(r: dict) -> str:
    lines = []
    for c in r["crossovers"]:
        lines += [
            f"[{c['scenario']}] horizon {c['horizon'][0]:g}-{c['horizon'][1]:g}",
            f"  enough qubits for Grover mining  {_fmt_year(c['qubit_sufficiency_year'])}",
            f"  signature broken within 600 s    {_fmt_year(c['signature_break_year'])}",
            f"  quantum miner beats 14 TH/s ASIC {_fmt_year(c['hash_dominance_year'])}",
        ]
    lines.append("")
    lines.append(f"series {r['figure']}:")
    lines.append(_rows_table(r["rows"]))
    return "\n".join(lines)


def _rows_table(rows: list[dict]) -> str:
    if not rows:
        return ""
    header = list(rows[0])
    cells = [[_cell(row[k]) for k in header] for row in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) for i, h in enumerate(header)]
    out = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    out += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(out) + "\n"


def _cell(v):
    if isinstance(v, float):
        return "inf" if v == math.inf else f"{v:.4g}"
    return str(v)


def _pqsig_table(r: dict) -> str:
    header = f"{'type':<6} {'name':<10} {'security':>8} {'PK kb':>8} {'sig kb':>8} {'total kb':>9}  family"
    lines = [header]
    for row in r["rows"]:
        lines.append(
            f"{row['type_code']:<6} {row['name']:<10} {row['security_bits']:>8} {row['pk_kb']:>8g} "
            f"{row['sig_kb']:>8g} {row['total_kb']:>9g}  {row['family']}"
        )
    return "\n".join(lines) + "\n"


def _figure_table(r: dict) -> str:
    return f"series {r['figure']}:\n" + _rows_table(r["rows"])


_TABLES = {
    "mining": _mining_table,
    "signature": _signature_table,
    "forecast": _forecast_table,
    "pqsig": _pqsig_table,
    "figure": _figure_table,
}


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    return to_table(report)


def load_schema() -> dict:
    return json.loads((resources.files("qthreat") / "schemas" / "report.schema.json").read_text())
