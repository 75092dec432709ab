"""Command-line entry point.

Exit codes: 0 success, 1 infeasible model, 2 bad input, 3 solver failure.
Output is plain text with no colour codes, so ``NO_COLOR`` needs no handling.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import report
from .analysis import LiquidationCell, cap_sweep, compare_models, floor_sweep, injected_decision
from .config import RunConfig, load_config
from .core import InvestmentDecision
from .errors import ConfigParseError, InfeasibleError, SolverError, ValidationError
from .invest import build_invest_problem, grid_oracle, solve_invest
from .liquidation import (
    build_liquidation_problem,
    detect_shortfall,
    post_liquidation_state,
    solve_liquidation,
    zero_plan,
)
from .regions import export_region

EXIT_OK, EXIT_INFEASIBLE, EXIT_BAD_INPUT, EXIT_SOLVER = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so ``run_command`` owns the exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", required=True, help="config file, JSON text, or bundled name 'paper_example'")
    common.add_argument("--json", metavar="PATH", help="write the machine-readable report here")
    common.add_argument("--precision", type=int, help="decimals in percent output (overrides config)")

    p = _Parser(prog="loanliq", description="Two-stage bank loan investment and liquidation models.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    inv = sub.add_parser("invest", parents=[common], help="solve the t=0 investment problem")
    inv.add_argument("--no-haircut-cap", action="store_true", help="drop the haircut cap (Model 2)")
    inv.add_argument("--oracle", action="store_true", help="also run the grid oracle")

    liq = sub.add_parser("liquidate", parents=[common], help="solve the t=1 liquidation problem")
    liq.add_argument("--no-risk-floor", action="store_true", help="drop the risk floor (Model 4)")
    liq.add_argument("--theta2", type=float, help="risk floor (default: first value in config)")
    liq.add_argument("--weights", type=_floats, help="t=0 weights x0,x1,x2 (default: solved portfolio)")
    liq.add_argument("--equity", type=float, help="t=0 equity (default: regulatory floor of the weights)")
    liq.add_argument("--input-model", type=int, choices=(1, 2), default=1,
                     help="investment model supplying the weights when --weights is absent")

    sub.add_parser("pipeline", parents=[common], help="t=0 then t=1, all model combinations")

    sw = sub.add_parser("sweep", parents=[common], help="monotonicity sweeps")
    sw.add_argument("--cap-grid", type=_floats, help="haircut caps for Model 1")
    sw.add_argument("--theta2-grid", type=_floats, help="risk floors for Model 3")
    sw.add_argument("--weights", type=_floats, help="t=0 weights for the theta2 sweep")

    reg = sub.add_parser("region", parents=[common], help="export constraint surfaces as CSV")
    reg.add_argument("--model", required=True, choices=("3", "4", "haircut-bound"))
    reg.add_argument("--resolution", type=int, default=50)
    reg.add_argument("--out-dir", default=".")
    reg.add_argument("--theta2", type=float)
    reg.add_argument("--weights", type=_floats)
    return p


def _precision(args, cfg: RunConfig) -> int:
    return cfg.output.precision if args.precision is None else args.precision


def _emit(args, cfg: RunConfig, payload: dict, text: str, out) -> None:
    if cfg.output.format == "json" and not args.json:
        print(json.dumps(payload, indent=2), file=out)
    else:
        print(text, file=out)
    if args.json:
        Path(args.json).write_text(json.dumps(payload, indent=2))


def _check_weights(w, cfg: RunConfig) -> None:
    if w is not None and len(w) != len(cfg.loans):
        raise ValidationError("--weights", f"expected {len(cfg.loans)} values, got {len(w)}")


def _cmd_invest(args, cfg: RunConfig, out) -> int:
    bank = cfg.bank_config()
    cap = not args.no_haircut_cap
    problem = build_invest_problem(cfg.loans, bank, cap)
    sol = solve_invest(problem)
    oracle = grid_oracle(problem, cfg.solver.grid_step) if (args.oracle or cfg.solver.oracle) else None
    prec = _precision(args, cfg)
    d = report.invest_dict(sol, problem.model, prec, oracle)
    payload = {"command": "invest", "inputs": cfg.to_dict(), "solution": d}
    _emit(args, cfg, payload, report.render_invest(d), out)
    return EXIT_OK


def _input_decision(args, cfg: RunConfig) -> InvestmentDecision:
    bank = cfg.bank_config()
    if args.weights is not None:
        _check_weights(args.weights, cfg)
        if args.equity is not None:
            return InvestmentDecision(tuple(args.weights), args.equity)
        return injected_decision(args.weights, cfg.loans, bank)
    sol = solve_invest(build_invest_problem(cfg.loans, bank, args.input_model == 1))
    if args.equity is not None:
        return InvestmentDecision(sol.weights, args.equity)
    return sol.decision


def _cmd_liquidate(args, cfg: RunConfig, out) -> int:
    theta2 = args.theta2 if args.theta2 is not None else (cfg.theta2[0] if cfg.theta2 else 0.0)
    bank = cfg.bank_config(theta2 if not args.no_risk_floor else None)
    decision = _input_decision(args, cfg)
    model = 4 if args.no_risk_floor else 3
    if detect_shortfall(bank, decision.equity) is None:
        plan = zero_plan(cfg.loans)
    else:
        plan = solve_liquidation(
            build_liquidation_problem(decision, cfg.loans, bank, not args.no_risk_floor, theta2=theta2)
        )
    state = post_liquidation_state(decision, plan, bank, cfg.loans)
    cell = LiquidationCell(model, None if model == 4 else theta2, plan, state)
    prec = _precision(args, cfg)
    d = report.cell_dict(cell, prec)
    d.update(weights=list(decision.weights), equity=decision.equity,
             required_cash=detect_shortfall(bank, decision.equity))
    payload = {"command": "liquidate", "inputs": cfg.to_dict(), "solution": d}
    text = d["betas_pct"] + "\n" + report.render_cells(
        f"input {report.fmt_vector(decision.weights, prec)}, equity {report.fmt_pct(decision.equity, prec)}", [d]
    )
    _emit(args, cfg, payload, text, out)
    return EXIT_OK


def pipeline_report(cfg: RunConfig, precision: int | None = None) -> dict:
    """The full pipeline report as a dictionary (what ``pipeline --json`` writes)."""
    prec = cfg.output.precision if precision is None else precision
    bank = cfg.bank_config()
    rep = compare_models(cfg.loans, bank, cfg.theta2 or (bank.theta2,), cfg.injected)
    oracles = {}
    if cfg.solver.oracle:
        for m, cap in ((1, True), (2, False)):
            oracles[m] = grid_oracle(build_invest_problem(cfg.loans, bank, cap), cfg.solver.grid_step)
    return report.pipeline_dict(cfg, rep, prec, oracles)


def _cmd_pipeline(args, cfg: RunConfig, out) -> int:
    d = pipeline_report(cfg, _precision(args, cfg))
    _emit(args, cfg, d, report.render_pipeline(d), out)
    return EXIT_OK


def _cmd_sweep(args, cfg: RunConfig, out) -> int:
    if args.cap_grid is None and args.theta2_grid is None:
        raise ValidationError("sweep", "give --cap-grid and/or --theta2-grid")
    prec = _precision(args, cfg)
    bank = cfg.bank_config()
    payload, texts = {"command": "sweep", "inputs": cfg.to_dict()}, []
    if args.cap_grid is not None:
        d = report.cap_sweep_dict(cap_sweep(cfg.loans, bank, args.cap_grid), prec)
        payload["cap_sweep"] = d
        texts.append("haircut cap sweep (Model 1)\n" + report.render_cap_sweep(d))
    if args.theta2_grid is not None:
        if args.weights is not None:
            _check_weights(args.weights, cfg)
            decision = injected_decision(args.weights, cfg.loans, bank)
        elif 1 in cfg.injected:
            decision = injected_decision(cfg.injected[1], cfg.loans, bank)
        else:
            decision = solve_invest(build_invest_problem(cfg.loans, bank, True)).decision
        d = report.floor_sweep_dict(floor_sweep(decision, cfg.loans, bank, args.theta2_grid), prec)
        d["weights"] = list(decision.weights)
        payload["theta2_sweep"] = d
        texts.append(f"risk floor sweep (Model 3), input {report.fmt_vector(decision.weights, prec)}\n"
                     + report.render_floor_sweep(d))
    _emit(args, cfg, payload, "\n\n".join(texts), out)
    return EXIT_OK


def _cmd_region(args, cfg: RunConfig, out) -> int:
    bank = cfg.bank_config()
    weights, equity = None, None
    if args.model != "haircut-bound":
        if args.weights is not None:
            _check_weights(args.weights, cfg)
            dec = injected_decision(args.weights, cfg.loans, bank)
        elif 1 in cfg.injected:
            dec = injected_decision(cfg.injected[1], cfg.loans, bank)
        else:
            dec = solve_invest(build_invest_problem(cfg.loans, bank, True)).decision
        weights, equity = dec.weights, dec.equity
    try:
        sets = export_region(args.model, cfg.loans, bank, args.resolution, weights, args.theta2, equity)
    except ValueError as exc:
        raise ValidationError("--resolution" if "resolution" in str(exc) else "region", str(exc)) from None
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = f"model{args.model}_" if args.model != "haircut-bound" else ""
    files = [str(ds.write(outdir, prefix)) for ds in sets]
    payload = {"command": "region", "model": args.model, "resolution": args.resolution,
               "datasets": [{"name": ds.name, "file": f, "points": len(ds.points), "sense": ds.sense}
                            for ds, f in zip(sets, files)]}
    text = "\n".join(f"{ds.name}: {len(ds.points)} points -> {f}" for ds, f in zip(sets, files))
    _emit(args, cfg, payload, text, out)
    return EXIT_OK


_COMMANDS = {
    "invest": _cmd_invest,
    "liquidate": _cmd_liquidate,
    "pipeline": _cmd_pipeline,
    "sweep": _cmd_sweep,
    "region": _cmd_region,
}


def run_command(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return EXIT_BAD_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_BAD_INPUT
    try:
        cfg = load_config(args.config)
        if args.precision is not None and not 0 <= args.precision <= 10:
            raise ValidationError("--precision", "must lie in [0, 10]")
        return _COMMANDS[args.command](args, cfg, out)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=err)
        return EXIT_INFEASIBLE
    except ConfigParseError as exc:
        print(f"config error: {exc}", file=err)
        return EXIT_BAD_INPUT
    except (ValidationError, FileNotFoundError, ValueError) as exc:
        print(f"invalid input: {exc}", file=err)
        return EXIT_BAD_INPUT
    except SolverError as exc:
        print(f"solver failure: {exc}", file=err)
        return EXIT_SOLVER


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
