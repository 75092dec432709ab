"""Two-stage bank loan models: t=0 investment under limited liability and
capital rules, t=1 liquidation under a deposit-withdrawal shock."""

from .analysis import cap_sweep, compare_models, floor_sweep, haircut_gradient, injected_decision
from .capital import capital_requirement, equity_floor, expected_loss, expected_losses, portfolio_risk
from .config import RunConfig, bundled_config_path, dump_config, load_config, parse_config
from .core import (
    BankConfig,
    InvestmentDecision,
    LiquidationPlan,
    LoanClass,
    ScenarioSet,
    enumerate_scenarios,
    final_value,
    limited_liability_payoff,
    portfolio_realization,
    present_value,
)
from .errors import ConfigParseError, InfeasibleError, LoanLiqError, SolverError, ValidationError
from .invest import build_invest_problem, grid_oracle, solve_invest
from .liquidation import (
    build_liquidation_problem,
    detect_shortfall,
    post_liquidation_state,
    solve_liquidation,
    worst_case_comparison,
)
from .lp import LinearProgram, LpSolution, Row, enumerate_vertices, solve_lp
from .regions import export_region

__version__ = "0.1.0"
