"""
Run configuration: one JSON document with keys ``loans``, ``bank``,
``solver``, ``output`` and, optionally, ``portfolios``.

    {
      "loans": [{"id": 0, "name": "safe", "rate": 0.03, "pd": 0.0, "lgd": 0.0,
                 "haircut": 0.0, "capital_charge": 0.0}, ...],
      "bank": {"delta": 1.04, "k_lev": 0.04, "theta1": 0.012,
               "theta2": [0.0005, 0.001], "haircut_cap": 0.15,
               "alpha_w": 0.10, "alpha_d": 0.0},
      "solver": {"grid_step": 0.005, "oracle": false},
      "output": {"format": "table", "precision": 2},
      "portfolios": {"model1": [0.0291, 0.4418, 0.5291]}
    }

``portfolios`` injects fixed t=0 weights into the t=1 stage in place of the
solved ones (used to replay externally reported portfolios).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .core import BankConfig, InvestmentDecision, LoanClass, validate_universe
from .errors import ConfigParseError, ValidationError

BUNDLED = {"paper_example": "paper_example.json"}

_TOP = {"loans", "bank", "solver", "output", "portfolios"}
_LOAN = {"id", "name", "rate", "pd", "lgd", "haircut", "capital_charge"}
_BANK = {"delta", "k_lev", "theta1", "theta2", "haircut_cap", "alpha_w", "alpha_d"}
_SOLVER = {"grid_step", "oracle"}
_OUTPUT = {"format", "precision"}


@dataclass(frozen=True)
class SolverOptions:
    grid_step: float = 0.005
    oracle: bool = False


@dataclass(frozen=True)
class OutputOptions:
    format: str = "table"
    precision: int = 2


@dataclass(frozen=True)
class RunConfig:
    loans: tuple[LoanClass, ...]
    capital_charges: tuple[float, ...]
    delta: float
    k_lev: float
    theta1: float
    theta2: tuple[float, ...]
    haircut_cap: float
    alpha_w: float
    alpha_d: float
    solver: SolverOptions = field(default_factory=SolverOptions)
    output: OutputOptions = field(default_factory=OutputOptions)
    portfolios: tuple[tuple[int, tuple[float, ...]], ...] = ()

    def bank_config(self, theta2: float | None = None) -> BankConfig:
        if theta2 is None:
            theta2 = self.theta2[0] if self.theta2 else 0.0
        return BankConfig(
            delta=self.delta,
            k_lev=self.k_lev,
            theta1=self.theta1,
            haircut_cap=self.haircut_cap,
            alpha_w=self.alpha_w,
            alpha_d=self.alpha_d,
            capital_charges=self.capital_charges,
            theta2=theta2,
        )

    @property
    def injected(self) -> dict[int, tuple[float, ...]]:
        return dict(self.portfolios)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "loans": [
                {"id": l.id, "name": l.name, "rate": l.rate, "pd": l.pd, "lgd": l.lgd,
                 "haircut": l.haircut, "capital_charge": k}
                for l, k in zip(self.loans, self.capital_charges)
            ],
            "bank": {
                "delta": self.delta, "k_lev": self.k_lev, "theta1": self.theta1,
                "theta2": list(self.theta2), "haircut_cap": self.haircut_cap,
                "alpha_w": self.alpha_w, "alpha_d": self.alpha_d,
            },
            "solver": {"grid_step": self.solver.grid_step, "oracle": self.solver.oracle},
            "output": {"format": self.output.format, "precision": self.output.precision},
        }
        if self.portfolios:
            out["portfolios"] = {f"model{m}": list(w) for m, w in self.portfolios}
        return out


def _number(obj: dict, key: str, where: str, default=None) -> float:
    if key not in obj:
        if default is not None:
            return default
        raise ValidationError(f"{where}.{key}", "missing required field")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"{where}.{key}", f"expected a number, got {v!r}")
    return float(v)


def _no_extra(obj: Any, allowed: set, where: str) -> None:
    if not isinstance(obj, dict):
        raise ValidationError(where, f"expected an object, got {type(obj).__name__}")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ValidationError(f"{where}.{extra[0]}", "unknown field")


def config_from_dict(data: Any) -> RunConfig:
    _no_extra(data, _TOP, "config")
    for key in ("loans", "bank"):
        if key not in data:
            raise ValidationError(key, "missing required section")
    raw_loans = data["loans"]
    if not isinstance(raw_loans, list) or not raw_loans:
        raise ValidationError("loans", "expected a non-empty list")

    loans, charges = [], []
    for i, raw in enumerate(raw_loans):
        where = f"loans[{i}]"
        _no_extra(raw, _LOAN, where)
        lid = raw.get("id", i)
        if isinstance(lid, bool) or not isinstance(lid, int):
            raise ValidationError(f"{where}.id", f"expected an integer, got {lid!r}")
        try:
            loan = LoanClass(
                id=lid,
                rate=_number(raw, "rate", where),
                pd=_number(raw, "pd", where),
                lgd=_number(raw, "lgd", where),
                haircut=_number(raw, "haircut", where),
                name=str(raw.get("name", "")),
            )
        except ValidationError as exc:
            if exc.field.startswith(where):
                raise
            raise ValidationError(f"{where}.{exc.field}", exc.message) from None
        loans.append(loan)
        charges.append(_number(raw, "capital_charge", where, default=0.0))
    order = sorted(range(len(loans)), key=lambda k: loans[k].id)
    loans = [loans[k] for k in order]
    charges = [charges[k] for k in order]
    try:
        validate_universe(loans)
    except ValidationError as exc:
        raise ValidationError(f"loans.{exc.field}", exc.message) from None

    bank = data["bank"]
    _no_extra(bank, _BANK, "bank")
    theta2 = bank.get("theta2", [])
    if isinstance(theta2, (int, float)) and not isinstance(theta2, bool):
        theta2 = [theta2]
    if not isinstance(theta2, list):
        raise ValidationError("bank.theta2", "expected a number or a list of numbers")
    for t in theta2:
        if isinstance(t, bool) or not isinstance(t, (int, float)):
            raise ValidationError("bank.theta2", f"expected numbers, got {t!r}")

    solver = data.get("solver", {})
    _no_extra(solver, _SOLVER, "solver")
    output = data.get("output", {})
    _no_extra(output, _OUTPUT, "output")
    fmt = output.get("format", "table")
    if fmt not in ("table", "json"):
        raise ValidationError("output.format", f"must be 'table' or 'json', got {fmt!r}")
    precision = output.get("precision", 2)
    if isinstance(precision, bool) or not isinstance(precision, int) or not 0 <= precision <= 10:
        raise ValidationError("output.precision", f"expected an integer in [0, 10], got {precision!r}")
    grid_step = _number(solver, "grid_step", "solver", default=0.005)
    if not 0.0 < grid_step <= 0.1:
        raise ValidationError("solver.grid_step", f"must lie in (0, 0.1], got {grid_step}")

    portfolios = []
    raw_p = data.get("portfolios", {})
    _no_extra(raw_p, {"model1", "model2"}, "portfolios")
    for key in sorted(raw_p):
        w = raw_p[key]
        if not isinstance(w, list) or len(w) != len(loans):
            raise ValidationError(f"portfolios.{key}", f"expected {len(loans)} weights")
        portfolios.append((int(key[-1]), tuple(float(v) for v in w)))

    cfg = RunConfig(
        loans=tuple(loans),
        capital_charges=tuple(charges),
        delta=_number(bank, "delta", "bank"),
        k_lev=_number(bank, "k_lev", "bank"),
        theta1=_number(bank, "theta1", "bank"),
        theta2=tuple(float(t) for t in theta2),
        haircut_cap=_number(bank, "haircut_cap", "bank"),
        alpha_w=_number(bank, "alpha_w", "bank"),
        alpha_d=_number(bank, "alpha_d", "bank", default=0.0),
        solver=SolverOptions(grid_step, bool(solver.get("oracle", False))),
        output=OutputOptions(fmt, precision),
        portfolios=tuple(portfolios),
    )
    # every theta2 value must produce a valid bank config
    for t in cfg.theta2 or (0.0,):
        try:
            cfg.bank_config(t)
        except ValidationError as exc:
            raise ValidationError(f"bank.{exc.field}", exc.message) from None
    for m, w in cfg.portfolios:
        try:
            InvestmentDecision(w, 1.0)
        except ValidationError as exc:
            raise ValidationError(f"portfolios.model{m}", exc.message) from None
    return cfg


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return config_from_dict(data)


def bundled_config_path(name: str = "paper_example") -> Path:
    return Path(str(resources.files("loanliq") / "data" / BUNDLED[name]))


def load_config(source: str | Path) -> RunConfig:
    """Load a config from a file path, a bundled name, or JSON text."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return parse_config(source)
    path = Path(source)
    if not path.exists():
        stem = path.stem if path.suffix == ".json" else str(source)
        if stem in BUNDLED:
            path = bundled_config_path(stem)
        else:
            raise FileNotFoundError(f"config file not found: {source}")
    return parse_config(path.read_text())


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_dict(), indent=2)
