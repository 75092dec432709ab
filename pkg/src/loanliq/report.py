"""Machine (JSON) and human (text table) reports.

Both are built from the same dictionaries so they cannot disagree: the text
table only ever prints the ``*_pct`` strings stored in the JSON.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal
from typing import Sequence

from .analysis import CapSweep, ComparisonReport, FloorSweep, LiquidationCell
from .config import RunConfig
from .invest import InvestSolution


def fmt_pct(value: float, precision: int = 2) -> str:
    """Percent string rounded half-to-even; an exact zero prints as ``0%``."""
    d = (Decimal(repr(float(value))) * 100).quantize(Decimal(1).scaleb(-precision), rounding=ROUND_HALF_EVEN)
    if d == 0:
        return "0%"
    return f"{d}%"


def fmt_vector(values: Sequence[float], precision: int = 2) -> str:
    return "(" + ", ".join(fmt_pct(v, precision) for v in values) + ")"


def invest_dict(sol: InvestSolution, model: int, precision: int = 2, oracle: InvestSolution | None = None) -> dict:
    out = {
        "model": model,
        "weights": list(sol.weights),
        "weights_pct": fmt_vector(sol.weights, precision),
        "equity": sol.equity,
        "equity_pct": fmt_pct(sol.equity, precision),
        "objective": sol.objective_value,
        "binding_constraints": list(sol.binding_constraints),
        "diagnostics": {"method": sol.method, "vertex_count": sol.vertex_count},
    }
    if oracle is not None:
        out["diagnostics"]["oracle"] = {
            "method": oracle.method,
            "objective": oracle.objective_value,
            "weights": list(oracle.weights),
            "gap": sol.objective_value - oracle.objective_value,
        }
    return out


def cell_dict(cell: LiquidationCell, precision: int = 2) -> dict:
    out = {"model": cell.model, "theta2": cell.theta2, "feasible": cell.feasible}
    if not cell.feasible:
        out["error"] = cell.error
        return out
    out.update(
        betas=list(cell.plan.betas),
        betas_pct=fmt_vector(cell.plan.betas, precision),
        haircut_loss=cell.plan.haircut_loss,
        cash_raised=cell.plan.cash_raised,
        remaining_weights=list(cell.state.remaining_weights),
        remaining_liability=cell.state.remaining_liability,
        insolvency_probability=cell.state.insolvency_probability,
    )
    return out


def pipeline_dict(cfg: RunConfig, report: ComparisonReport, precision: int = 2, oracles: dict | None = None) -> dict:
    oracles = oracles or {}
    investment, liquidation = {}, []
    for row in report.rows:
        investment[f"model{row.invest_model}"] = invest_dict(
            row.solution, row.invest_model, precision, oracles.get(row.invest_model)
        )
        liquidation.append({
            "input_model": row.invest_model,
            "source": row.source,
            "weights": list(row.decision.weights),
            "weights_pct": fmt_vector(row.decision.weights, precision),
            "equity": row.decision.equity,
            "required_cash": row.required_cash,
            "model4": cell_dict(row.model4, precision),
            "model3": [cell_dict(c, precision) for c in row.model3],
            "worst_case": [
                None if w is None else {
                    "safe_gain": w.safe_gain, "risky_cost": w.risky_cost,
                    "model3_value": w.model3_value, "model4_value": w.model4_value,
                    "inequality_holds": w.inequality_holds, "model3_better": w.model3_better,
                }
                for w in row.worst_case
            ],
        })
    theta2 = [c.theta2 for c in report.rows[0].model3]
    tables = {
        "model3": {
            "theta2": theta2,
            "rows": [
                {"input": f"Model {r['input_model']}", "plans": [c.get("betas_pct", "infeasible") for c in r["model3"]]}
                for r in liquidation
            ],
        },
        "model4": {
            "rows": [
                {"input": f"Model {r['input_model']}", "plan": r["model4"].get("betas_pct", "infeasible")}
                for r in liquidation
            ],
        },
    }
    return {
        "command": "pipeline",
        "inputs": cfg.to_dict(),
        "investment": investment,
        "liquidation": liquidation,
        "tables": tables,
        "claims": dict(report.claims),
    }


def cap_sweep_dict(sweep: CapSweep, precision: int = 2) -> dict:
    return {
        "rows": [
            {"haircut_cap": r.haircut_cap, "weights": list(r.weights), "weights_pct": fmt_vector(r.weights, precision),
             "equity": r.equity, "haircut_used": r.haircut_used, "objective": r.objective}
            for r in sweep.rows
        ],
        "illiquid_non_increasing": sweep.illiquid_non_increasing,
        "violations": list(sweep.violations),
    }


def floor_sweep_dict(sweep: FloorSweep, precision: int = 2) -> dict:
    rows = []
    for r in sweep.rows:
        d = {"theta2": r.theta2, "feasible": r.feasible}
        if r.feasible:
            d.update(betas=list(r.plan.betas), betas_pct=fmt_vector(r.plan.betas, precision),
                     beta0=r.beta0, haircut_loss=r.plan.haircut_loss,
                     insolvency_probability=r.insolvency_probability)
        else:
            d["reason"] = r.reason
        rows.append(d)
    return {"rows": rows, "safe_sales_non_increasing": sweep.safe_sales_non_increasing,
            "violations": list(sweep.violations), "infeasible": list(sweep.infeasible)}


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    line = lambda cells: "  ".join(str(c).ljust(w) for c, w in zip(cells, widths)).rstrip()
    sep = "  ".join("-" * w for w in widths)
    return "\n".join([line(header), sep] + [line(r) for r in rows])


def render_invest(d: dict) -> str:
    rows = [[f"Model {d['model']}", d["weights_pct"], d["equity_pct"], f"{d['objective']:.6f}",
             ", ".join(d["binding_constraints"])]]
    text = _table(["model", "portfolio (L0, L1, L2)", "equity", "objective", "binding"], rows)
    orc = d["diagnostics"].get("oracle")
    if orc:
        text += f"\noracle {orc['method']}: objective {orc['objective']:.6f}, gap {orc['gap']:.2e}"
    return text


def render_cells(title: str, cells: Sequence[dict]) -> str:
    rows = []
    for c in cells:
        t2 = "-" if c["theta2"] is None else fmt_pct(c["theta2"], 3)
        if c["feasible"]:
            rows.append([f"Model {c['model']}", t2, c["betas_pct"], f"{c['haircut_loss']:.6f}",
                         f"{c['insolvency_probability']:.6f}"])
        else:
            rows.append([f"Model {c['model']}", t2, "infeasible", "-", "-"])
    return title + "\n" + _table(["model", "theta2", "liquidated (L0, L1, L2)", "haircut loss", "P(insolvent)"], rows)


def render_pipeline(d: dict) -> str:
    parts = ["t=0 investment"]
    parts.append(_table(
        ["model", "portfolio (L0, L1, L2)", "equity", "objective"],
        [[f"Model {v['model']}", v["weights_pct"], v["equity_pct"], f"{v['objective']:.6f}"]
         for v in d["investment"].values()],
    ))
    t3 = d["tables"]["model3"]
    parts.append("\nModel 3 (with risk floor)")
    parts.append(_table(
        ["model", "input"] + [f"theta2={fmt_pct(t, 3)}" for t in t3["theta2"]],
        [["Model 3", r["input"]] + r["plans"] for r in t3["rows"]],
    ))
    parts.append("\nModel 4 (no risk floor)")
    parts.append(_table(["model", "input", "plan"], [["Model 4", r["input"], r["plan"]] for r in d["tables"]["model4"]["rows"]]))
    parts.append("\nt=1 inputs and insolvency")
    for r in d["liquidation"]:
        parts.append(render_cells(
            f"input Model {r['input_model']} ({r['source']}) {r['weights_pct']}", [r["model4"]] + r["model3"]
        ))
    parts.append("\nclaims")
    parts.extend(f"  {k}: {'holds' if v else 'fails'}" for k, v in d["claims"].items())
    return "\n".join(parts)


def render_cap_sweep(d: dict) -> str:
    rows = [[f"{r['haircut_cap']:.4g}", r["weights_pct"], f"{r['haircut_used']:.4f}", f"{r['objective']:.6f}"] for r in d["rows"]]
    flag = "non-increasing" if d["illiquid_non_increasing"] else f"violations at {d['violations']}"
    return _table(["cap L", "portfolio (L0, L1, L2)", "haircut used", "objective"], rows) + f"\nleast liquid weight: {flag}"


def render_floor_sweep(d: dict) -> str:
    rows = []
    for r in d["rows"]:
        if r["feasible"]:
            rows.append([fmt_pct(r["theta2"], 3), r["betas_pct"], f"{r['haircut_loss']:.6f}", f"{r['insolvency_probability']:.6f}"])
        else:
            rows.append([fmt_pct(r["theta2"], 3), "infeasible", "-", "-"])
    flag = "non-increasing" if d["safe_sales_non_increasing"] else f"violations at {d['violations']}"
    return _table(["theta2", "liquidated (L0, L1, L2)", "haircut loss", "P(insolvent)"], rows) + f"\nsafe-loan sales: {flag}"
