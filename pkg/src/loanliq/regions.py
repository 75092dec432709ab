"""
Sampled constraint surfaces for plotting feasible regions.

Each dataset is a point cloud on one constraint's boundary, in amounts-sold
space for the liquidation models and weight space for the haircut cap. Axes
are named ``L0, L1, L2`` after the three loans. Nothing is rendered here;
datasets are written as comma-separated text.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .capital import expected_losses
from .core import BankConfig, LoanClass, sorted_loans
from .liquidation import cash_coefficients, detect_shortfall

AXES = ("L0", "L1", "L2")
HAIRCUT_LEVELS = (0.10, 0.15)


@dataclass(frozen=True)
class RegionDataset:
    """Points sampled from one constraint boundary.

    The constraint itself is ``coeffs . p (sense) rhs`` for planes; for the box
    ``coeffs`` is ``None`` and ``upper`` holds the box corner.
    """

    name: str
    points: np.ndarray
    sense: str
    coeffs: tuple[float, ...] | None = None
    rhs: float | None = None
    upper: tuple[float, ...] | None = None

    def satisfied_by(self, p: Sequence[float], tol: float = 1e-6) -> bool:
        p = np.asarray(p, dtype=float)
        if self.coeffs is None:
            return bool(np.all(p >= -tol) and np.all(p <= np.asarray(self.upper) + tol))
        lhs = float(np.dot(self.coeffs, p))
        if self.sense == "==":
            return abs(lhs - self.rhs) <= tol
        if self.sense == "<=":
            return lhs <= self.rhs + tol
        return lhs >= self.rhs - tol

    def to_csv(self) -> str:
        buf = io.StringIO()
        np.savetxt(buf, self.points, delimiter=",", fmt="%.10g", header=",".join(AXES), comments="")
        return buf.getvalue()

    def write(self, directory: str | Path, prefix: str = "") -> Path:
        path = Path(directory) / f"{prefix}{self.name}.csv"
        path.write_text(self.to_csv())
        return path


def _axis(hi: float, n: int) -> np.ndarray:
    return np.linspace(0.0, hi, n)


def _box_surface(upper: np.ndarray, n: int) -> np.ndarray:
    faces = []
    for k in range(3):
        i, j = [a for a in range(3) if a != k]
        u, v = np.meshgrid(_axis(upper[i], n), _axis(upper[j], n), indexing="ij")
        for level in (0.0, upper[k]):
            pts = np.empty((u.size, 3))
            pts[:, i], pts[:, j], pts[:, k] = u.ravel(), v.ravel(), level
            faces.append(pts)
    return np.vstack(faces)


def _plane(coeffs: np.ndarray, rhs: float, spans: Sequence[float], n: int) -> np.ndarray:
    """Sample ``coeffs . p = rhs`` over two axes' ``[0, span]`` ranges.

    The remaining coordinate is solved for along the axis with the largest
    coefficient.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    solve_for = int(np.argmax(np.abs(coeffs)))
    i, j = [a for a in range(3) if a != solve_for]
    u, v = np.meshgrid(_axis(spans[i], n), _axis(spans[j], n), indexing="ij")
    pts = np.empty((u.size, 3))
    pts[:, i], pts[:, j] = u.ravel(), v.ravel()
    pts[:, solve_for] = (rhs - coeffs[i] * pts[:, i] - coeffs[j] * pts[:, j]) / coeffs[solve_for]
    return pts


def export_region(
    model: int | str,
    loans: Sequence[LoanClass],
    config: BankConfig,
    resolution: int = 50,
    weights: Sequence[float] | None = None,
    theta2: float | None = None,
    equity: float | None = None,
    levels: Sequence[float] = HAIRCUT_LEVELS,
) -> list[RegionDataset]:
    """Constraint datasets for Model 3 or 4 (``weights`` required) or ``"haircut-bound"``.

    Model 3 yields box, cash and risk-floor sets; Model 4 the first two; the
    haircut bound yields one plane per level in ``levels``.
    """
    if not 10 <= resolution <= 500:
        raise ValueError(f"resolution must lie in [10, 500], got {resolution}")
    loans = sorted_loans(loans)
    if len(loans) != 3:
        raise ValueError("region export is defined for three-loan universes")
    n = resolution

    if str(model) == "haircut-bound":
        gam = np.array([l.haircut for l in loans])
        out = []
        for k, level in enumerate(levels, start=1):
            pts = _plane(gam, level, (1.0, 1.0, 1.0), n)
            out.append(RegionDataset(f"haircut_A{k}", pts, "<=", tuple(gam), float(level)))
        return out

    model = int(model)
    if model not in (3, 4):
        raise ValueError(f"model must be 3, 4 or 'haircut-bound', got {model!r}")
    if weights is None:
        raise ValueError("liquidation regions need the t=0 weights")
    x = np.asarray(weights, dtype=float)
    if equity is None:
        equity = config.k_lev
    required = detect_shortfall(config, equity) or 0.0
    cash = cash_coefficients(loans)
    out = [
        RegionDataset("box", _box_surface(x, n), "box", upper=tuple(x)),
        RegionDataset("cash", _plane(cash, required, x, n), "==", tuple(cash), required),
    ]
    if model == 3:
        el = expected_losses(loans)
        floor = config.theta2 if theta2 is None else float(theta2)
        out.append(RegionDataset("risk_floor", _plane(el, floor, x, n), ">=", tuple(el), floor))
    return out
