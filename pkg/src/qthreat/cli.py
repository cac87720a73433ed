"""Command-line front end.

Exit codes: 0 success or valid proof, 1 invalid proof, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import attack, hashcash, momentum, reports
from .config import FORMATS, ConfigError, RunConfig, load_config
from .forecast import FIGURES, emit_figure_series
from .pqsig import SORT_KEYS
from .units import parse_int_expr, parse_si

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _si(text):
    try:
        return parse_si(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_expr(text):
    try:
        return parse_int_expr(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _hex32(text):
    try:
        raw = bytes.fromhex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not hex: {text!r}") from None
    if len(raw) != 32:
        raise argparse.ArgumentTypeError("expected 32 bytes (64 hex digits)")
    return raw


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("run configuration")
    g.add_argument("--config", help="YAML run configuration (default: $QTHREAT_CONFIG)")
    g.add_argument("--format", choices=FORMATS, help="output format")
    g.add_argument("--distance-mode", choices=("real", "integer"))
    g.add_argument("--qubit-formula", choices=("linear", "quadratic"))
    g.add_argument("--form", dest="hash_rate_form", choices=("first-principles", "closed-form"))
    g.add_argument("--seed", type=int)


def _run_config(args) -> RunConfig:
    cfg = load_config(args.config)
    for key in ("format", "distance_mode", "qubit_formula", "hash_rate_form", "seed", "scenario",
                "start", "end", "step"):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "network_fit_since", None) is not None:
        cfg.network_fit_since = args.network_fit_since
    if getattr(args, "no_overhead_on_qubits", False):
        cfg.overhead_on_qubits = False
    cfg.__post_init__()
    return cfg


def _emit(report: dict, cfg: RunConfig, out=None) -> None:
    (out or sys.stdout).write(reports.render(report, cfg.format))


def cmd_estimate_mining(args) -> int:
    cfg = _run_config(args)
    report = reports.mining_report(args.difficulty, args.clock, args.error_rate, args.machines,
                                   cfg.distance_mode, cfg.qubit_formula, cfg.hash_rate_form)
    if args.optimistic:
        report["form"] = "optimistic"
        report["h_qc"] = report["h_qc_optimistic"]
        report["h_parallel"] = attack.PARALLEL_RATE_FACTOR * report["h_qc_optimistic"] * args.machines**0.5
    _emit(report, cfg)
    return EXIT_OK


def cmd_estimate_signature(args) -> int:
    cfg = _run_config(args)
    _emit(reports.signature_report(args.bits, args.clock, args.error_rate, cfg.distance_mode, cfg.qubit_formula), cfg)
    return EXIT_OK


def _write_figure(figure: str, rows: list[dict], out_dir: Path) -> None:
    from .plotting import render_figure

    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{figure}.csv").write_text(reports.to_csv({"rows": rows}))
    render_figure(figure, rows, out_dir / f"{figure}.png")


def cmd_forecast(args) -> int:
    cfg = _run_config(args)
    if cfg.end < cfg.start or cfg.step <= 0 or cfg.start < 2017:
        raise UsageError(f"bad year range {cfg.start:g}..{cfg.end:g} step {cfg.step:g} (start must be >= 2017)")
    fc = cfg.forecaster()
    report = reports.forecast_report(fc, cfg.scenario_names, cfg.start, cfg.end, cfg.step, args.figure)
    if args.plot_dir:
        _write_figure(args.figure, report["rows"], Path(args.plot_dir))
    _emit(report, cfg)
    return EXIT_OK


def cmd_figure(args) -> int:
    cfg = _run_config(args)
    if cfg.end < cfg.start or cfg.step <= 0 or cfg.start < 2017:
        raise UsageError("bad year range")
    fc = cfg.forecaster()
    names = ["optimistic", "pessimistic"] if args.scenario is None else cfg.scenario_names
    figures = FIGURES if args.figure == "all" else (args.figure,)
    for figure in figures:
        rows = emit_figure_series(figure, names, cfg.start, cfg.end, cfg.step, fc)
        if args.out_dir:
            _write_figure(figure, rows, Path(args.out_dir))
        if len(figures) == 1:
            _emit(reports.figure_report(figure, rows), cfg)
    if len(figures) > 1 and args.out_dir:
        print(f"wrote {len(figures)} figures to {args.out_dir}")
    return EXIT_OK


def cmd_pqsig(args) -> int:
    cfg = _run_config(args)
    _emit(reports.pqsig_report(args.sort, args.descending), cfg)
    return EXIT_OK


def cmd_race(args) -> int:
    cfg = _run_config(args)
    analytic = attack.race_success_probability(args.q, args.k)
    report = {"kind": "race", "schema_version": reports.SCHEMA_VERSION, "q": args.q, "k": args.k,
              "method": args.method, "analytic": analytic}
    if args.method == "monte-carlo":
        mc = attack.race_success_monte_carlo(args.q, args.k, args.trials, cfg.seed, workers=args.workers)
        report.update(probability=mc.probability, stderr=mc.stderr, trials=mc.trials, seed=cfg.seed)
    else:
        report["probability"] = analytic
    _emit(report, cfg)
    return EXIT_OK


# --- proof-of-work -----------------------------------------------------------


def _target_arg(args, bits: int | None) -> hashcash.Target:
    if args.target is not None:
        return hashcash.Target(args.target)
    if args.difficulty is not None:
        return hashcash.difficulty_to_target(args.difficulty)
    if bits is None:
        raise UsageError("give --target, --difficulty or --bits")
    return hashcash.target_from_bits(bits)


def _header_report(kind: str, header: hashcash.BlockHeader, target: hashcash.Target, **extra) -> dict:
    return {
        "kind": kind,
        "schema_version": reports.SCHEMA_VERSION,
        "header_hex": header.serialize().hex(),
        "hash_hex": header.hash().hex(),
        "target_hex": f"{target.t:064x}",
        "nonce": header.nonce,
        "timestamp": header.timestamp,
        **extra,
    }


def cmd_hashcash_mine(args) -> int:
    cfg = _run_config(args)
    template = hashcash.BlockHeader(args.version, args.prev_hash, args.merkle_root, args.timestamp, args.bits, 0)
    target = _target_arg(args, args.bits)
    result = hashcash.hashcash_mine(template, target, args.nonce_start, args.nonce_count,
                                    args.timestamp_bits, args.workers)
    if result.header is None:
        report = {"kind": "hashcash-mine", "schema_version": reports.SCHEMA_VERSION, "found": False,
                  "attempts": result.attempts, "target_hex": f"{target.t:064x}"}
    else:
        report = _header_report("hashcash-mine", result.header, target, found=True, attempts=result.attempts)
        if args.out:
            Path(args.out).write_bytes(result.header.serialize())
    _emit(report, cfg)
    return EXIT_OK


def _read_header(path: str) -> hashcash.BlockHeader:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    if len(data) == 2 * hashcash.HEADER_SIZE or len(data) == 2 * hashcash.HEADER_SIZE + 1:
        try:
            data = bytes.fromhex(data.decode().strip())
        except ValueError:
            pass
    return hashcash.BlockHeader.deserialize(data)


def cmd_hashcash_verify(args) -> int:
    cfg = _run_config(args)
    header = _read_header(args.header)
    target = _target_arg(args, header.bits)
    valid = hashcash.hashcash_verify(header, target)
    _emit(_header_report("hashcash-verify", header, target, valid=valid), cfg)
    return EXIT_OK if valid else EXIT_INVALID


def _momentum_params(args) -> momentum.MomentumParams:
    n, ell = args.n, args.ell
    if args.target is not None:
        t = args.target
    else:
        t = 2**n - 1
    subset = args.subset_bits
    if subset is None:
        log_optimal = (n + ell - math.log2(t)) / 2
        subset = min(ell, max(0, round(log_optimal)))
    return momentum.MomentumParams(n=n, ell=ell, t=t, subset_bits=subset)


def _solution_report(kind, solution, params, **extra) -> dict:
    report = {"kind": kind, "schema_version": reports.SCHEMA_VERSION, "params": dict(
        n=params.n, ell=params.ell, t_hex=f"{params.t:x}", subset_bits=params.subset_bits), **extra}
    if solution is not None:
        report.update(H_hex=momentum.encode_header_hash(solution.H, params.n).hex(), a=solution.a, b=solution.b)
    return report


def cmd_momentum_mine(args) -> int:
    cfg = _run_config(args)
    params = _momentum_params(args)
    if args.header_hash is not None:
        H = int(args.header_hash, 16)
        result = momentum.momentum_mine(H, params)
        solution, extra = result.solution, {"headers_tried": 1, "h2_evals": result.h2_evals,
                                            "h1_evals": result.h1_evals}
    else:
        found = momentum.momentum_search(args.seed_text.encode(), params, args.max_headers)
        solution, extra = found.solution, {"headers_tried": found.headers_tried, "h2_evals": found.h2_evals,
                                           "h1_evals": found.h1_evals}
    report = _solution_report("momentum-mine", solution, params, found=solution is not None, **extra)
    if solution is not None and args.out:
        Path(args.out).write_text(momentum.format_solution(solution, params))
    _emit(report, cfg)
    return EXIT_OK


def cmd_momentum_verify(args) -> int:
    cfg = _run_config(args)
    text = sys.stdin.read() if args.solution == "-" else Path(args.solution).read_text()
    solution, params = momentum.parse_solution(text)
    valid = momentum.momentum_verify(solution, params)
    _emit(_solution_report("momentum-verify", solution, params, valid=valid), cfg)
    return EXIT_OK if valid else EXIT_INVALID


def cmd_cost_model(args) -> int:
    cfg = _run_config(args)
    _emit(reports.cost_model_report(_momentum_params(args)), cfg)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qthreat", description="Quantum attack estimates and proof-of-work tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate-mining", help="Grover mining attack estimate")
    p.add_argument("--difficulty", "-D", type=_si, required=True)
    p.add_argument("--clock", "-s", type=_si, required=True, help="clock speed, e.g. 66.7M or 50GHz")
    p.add_argument("--error-rate", "-p", type=_si, required=True)
    p.add_argument("--machines", type=int, default=1)
    p.add_argument("--optimistic", action="store_true", help="distillation-free model 0.04 s sqrt(D)")
    _common(p)
    p.set_defaults(func=cmd_estimate_mining)

    p = sub.add_parser("estimate-signature", help="ECDLP signature attack estimate")
    p.add_argument("--bits", "-n", type=int, default=256)
    p.add_argument("--clock", "-s", type=_si, required=True)
    p.add_argument("--error-rate", "-p", type=_si, required=True)
    _common(p)
    p.set_defaults(func=cmd_estimate_signature)

    for name, func, helptext in (("forecast", cmd_forecast, "crossover years and one figure series"),
                                 ("figure", cmd_figure, "regenerate figure data (CSV) and plots (PNG)")):
        p = sub.add_parser(name, help=helptext)
        if name == "forecast":
            p.add_argument("--figure", choices=FIGURES, default="fig5")
            p.add_argument("--plot-dir", help="also write <figure>.csv and <figure>.png here")
        else:
            p.add_argument("figure", choices=FIGURES + ("all",))
            p.add_argument("--out-dir", help="write <figure>.csv and <figure>.png here")
        p.add_argument("--scenario", choices=("optimistic", "pessimistic", "both"))
        p.add_argument("--start", type=float)
        p.add_argument("--end", type=float)
        p.add_argument("--step", type=float)
        p.add_argument("--network-fit-since", type=float)
        p.add_argument("--no-overhead-on-qubits", action="store_true",
                       help="apply the yearly overhead reduction to time only")
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("pqsig", help="post-quantum signature size table")
    p.add_argument("--sort", default="total_kb", choices=SORT_KEYS)
    p.add_argument("--descending", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_pqsig)

    p = sub.add_parser("race", help="probability of reversing k confirmations")
    p.add_argument("--q", type=float, required=True, help="attacker share of hash power")
    p.add_argument("--k", type=int, required=True, help="confirmations")
    p.add_argument("--method", choices=("analytic", "monte-carlo"), default="analytic")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_race)

    pow_parser = sub.add_parser("pow", help="mine and verify proofs-of-work")
    pow_sub = pow_parser.add_subparsers(dest="pow_command", required=True)

    def target_options(q):
        q.add_argument("--target", type=_int_expr, help="integer target (decimal, 0x.., or 2^k)")
        q.add_argument("--difficulty", type=_si, help="difficulty D; target = 2^224 / D")

    q = pow_sub.add_parser("hashcash-mine")
    q.add_argument("--version", type=_int_expr, default=0x20000000)
    q.add_argument("--prev-hash", type=_hex32, default=bytes(32))
    q.add_argument("--merkle-root", type=_hex32, default=bytes(32))
    q.add_argument("--timestamp", type=_int_expr, default=0)
    q.add_argument("--bits", type=_int_expr, default=0x1D00FFFF, help="compact target, used without --target")
    q.add_argument("--nonce-start", type=_int_expr, default=0)
    q.add_argument("--nonce-count", type=_int_expr)
    q.add_argument("--timestamp-bits", type=int, default=0)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--out", help="write the 80-byte header here")
    target_options(q)
    _common(q)
    q.set_defaults(func=cmd_hashcash_mine)

    q = pow_sub.add_parser("hashcash-verify")
    q.add_argument("header", help="80-byte header file (raw or hex), '-' for stdin")
    target_options(q)
    _common(q)
    q.set_defaults(func=cmd_hashcash_verify)

    def momentum_options(q, target_help):
        q.add_argument("--n", type=int, required=True, help="h1 output bits")
        q.add_argument("--ell", type=int, required=True, help="h2 output bits and nonce width")
        q.add_argument("--target", type=_int_expr, help=target_help)
        q.add_argument("--subset-bits", type=int, help="log2 of the nonce subset size (default: optimal)")

    q = pow_sub.add_parser("momentum-mine")
    momentum_options(q, "h1 target (default 2^n - 1)")
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--header-hash", help="n-bit header hash in hex")
    src.add_argument("--seed-text", help="search headers derived from this text until one succeeds")
    q.add_argument("--max-headers", type=int, default=1 << 16)
    q.add_argument("--out", help="write the solution record here")
    _common(q)
    q.set_defaults(func=cmd_momentum_mine)

    q = pow_sub.add_parser("momentum-verify")
    q.add_argument("solution", help="solution record file, '-' for stdin")
    _common(q)
    q.set_defaults(func=cmd_momentum_verify)

    q = pow_sub.add_parser("cost-model")
    momentum_options(q, "h1 target (default 2^n - 1)")
    _common(q)
    q.set_defaults(func=cmd_cost_model)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, ValueError, OSError) as exc:
        print(f"qthreat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
