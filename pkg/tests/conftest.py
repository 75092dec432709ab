"""Shared fixtures: the reference three-loan universe and a random-config generator."""

from __future__ import annotations

import numpy as np
import pytest

from loanliq import BankConfig, LoanClass, load_config

REF_WEIGHTS = {1: (0.0291, 0.4418, 0.5291), 2: (0.0, 0.2778, 0.7222)}


@pytest.fixture(scope="session")
def run_config():
    return load_config("paper_example")


@pytest.fixture(scope="session")
def loans(run_config):
    return run_config.loans


@pytest.fixture(scope="session")
def bank(run_config):
    return run_config.bank_config()


def random_universe(rng: np.random.Generator, spread: float = 0.5):
    """Three loans and a bank config with every reference parameter scaled by U(1-spread, 1+spread).

    Rates and haircuts are re-sorted so the ordering assumptions still hold.
    """
    f = lambda v: v * rng.uniform(1 - spread, 1 + spread)
    rates = sorted([f(0.03), f(0.09), f(0.132)])
    while len(set(rates)) < 3:
        rates = sorted([f(0.03), f(0.09), f(0.132)])
    haircuts = sorted([f(0.1), f(0.2)])
    loans = (
        LoanClass(0, rates[0], 0.0, 0.0, 0.0, "safe"),
        LoanClass(1, rates[1], min(f(0.061), 1.0), min(f(0.1), 1.0), haircuts[0], "less risky"),
        LoanClass(2, rates[2], min(f(0.122), 1.0), min(f(0.09), 1.0), haircuts[1], "more risky"),
    )
    theta1 = f(0.012)
    cfg = BankConfig(
        delta=max(1.0, f(1.04)),
        k_lev=f(0.04),
        theta1=theta1,
        haircut_cap=f(0.15),
        alpha_w=f(0.10),
        alpha_d=0.0,
        capital_charges=(0.0, f(0.04), f(0.04)),
        theta2=min(f(0.0005), 0.5 * theta1),
    )
    return loans, cfg


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdicts as one line per criterion."""
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[key])


def reachable_floor(weights, loans, need) -> float:
    """Largest liquidated expected loss compatible with raising exactly ``need`` (scipy, independent)."""
    from scipy.optimize import linprog

    el = [l.pd * l.lgd for l in loans]
    cash = [(1 - l.haircut) * (1 + l.rate / 2) for l in loans]
    res = linprog([-v for v in el], A_eq=[cash], b_eq=[need], bounds=[(0, w) for w in weights], method="highs")
    return -res.fun if res.status == 0 else -1.0
