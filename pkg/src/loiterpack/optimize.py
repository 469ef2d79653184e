"""Loiter-radius optimization for a fleet budget, plus coverage-regime rules.

The feasible set is defined operationally by the placement construction: a
radius is feasible when the packed layout needs at most the budgeted number
of UAVs. Candidate radii are the analytic binding radii at which a row or
column count changes, so the minimum feasible candidate is the exact left
edge of the feasible interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InfeasibleError
from .geometry import BOUNDARY_TOL, SQRT2, SQRT3, AreaSpec, PackingKind, max_loiter_radius
from .packing import uav_count

# Lower bound on any solved radius (meters): prevents degenerate zero-radius
# layouts when the budget is effectively unlimited.
RADIUS_FLOOR = 1e-3


class Regime(Enum):
    PERSISTENT = "persistent"
    FULL_ONLY = "full-only"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class FleetBudget:
    uav_count: int

    def __post_init__(self) -> None:
        if self.uav_count < 0:
            raise ValueError(f"UAV budget must be >= 0, got {self.uav_count}")


@dataclass(frozen=True)
class OptimizerWeights:
    """Objective tuning vector; only the first component scales the reported
    objective value, the other two are accepted but unused."""

    sigma: tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if len(self.sigma) != 3:
            raise ValueError("sigma must have exactly three components")
        if not self.sigma[0] > 0:
            raise ValueError(f"sigma[0] must be positive, got {self.sigma[0]}")


@dataclass(frozen=True)
class RadiusSolution:
    loiter_radius: float | None
    n_x: int
    n_y: int
    regime: Regime
    objective_value: float | None = None
    min_required: int | None = None  # UAVs needed at the radius cap when infeasible


def classify_regime(r_l: float, r_c: float, kind: PackingKind) -> Regime:
    """Coverage regime for a loiter radius: persistent, full-only, or neither."""
    if not (r_l > 0 and r_c > 0):
        raise ValueError("radii must be positive")
    if r_l <= r_c + BOUNDARY_TOL:
        return Regime.PERSISTENT
    if r_l <= max_loiter_radius(r_c, kind) + BOUNDARY_TOL:
        return Regime.FULL_ONLY
    return Regime.INFEASIBLE


def ideal_radius_after_loss(r_init: float, loss_fraction: float) -> float:
    """Radius scaling under the continuous tiling model: per-UAV tiled area
    grows as r^2, so the survivors' radius is r_init / sqrt(1 - loss)."""
    if not 0.0 <= loss_fraction < 1.0:
        raise ValueError(f"loss fraction must be in [0, 1), got {loss_fraction}")
    return r_init / math.sqrt(1.0 - loss_fraction)


def revisit_period(r_l: float, v: float) -> float:
    """Time between successive visits of a point on the loiter circle."""
    if not v > 0:
        raise ValueError(f"speed must be positive, got {v}")
    return 2.0 * math.pi * r_l / v


def _binding_radii(area: AreaSpec, kind: PackingKind, lo: float, hi: float) -> list[float]:
    """Radii in [lo, hi] where any row/column count of the layout changes.

    Hexagon rows bind at n*sqrt(3)*r = X (offset template) and at
    (n - 1/2)*sqrt(3)*r = X (boundary template), i.e. r = 2X/(sqrt(3) j) for
    integer j; columns bind at m*1.5*r = Y. Square rows/columns bind at
    n*sqrt(2)*r = extent.
    """
    out: list[float] = []

    def family(scale: float) -> None:
        # r = scale / j for j = 1, 2, ...
        j = max(1, math.floor(scale / hi))
        while True:
            r = scale / j
            if r < lo:
                break
            if r <= hi:
                out.append(r)
            j += 1

    if kind is PackingKind.HEXAGON:
        family(2.0 * area.x_extent / SQRT3)
        family(2.0 * area.y_extent / 3.0)
    else:
        family(area.x_extent / SQRT2)
        family(area.y_extent / SQRT2)
    return out


def _layout_dims(area: AreaSpec, r_l: float, kind: PackingKind) -> tuple[int, int]:
    """(first-row circle count, row count) of the packed layout."""
    from .packing import _march_count, _row_specs  # shared construction core

    templates, x_pitch, y_first, y_half = _row_specs(r_l, kind)
    y_pitch = 1.5 * r_l if kind is PackingKind.HEXAGON else SQRT2 * r_l
    n_y = _march_count(y_first, y_pitch, area.y_extent, y_half)
    n_x = _march_count(templates[0][0], x_pitch, area.x_extent, templates[0][1])
    return n_x, n_y


def solve_radius(
    budget: FleetBudget,
    area: AreaSpec,
    kind: PackingKind,
    r_c: float,
    r_min_turn: float,
    r_l_max: float | None = None,
    weights: OptimizerWeights | None = None,
) -> RadiusSolution:
    """Smallest loiter radius whose layout fits the budget.

    Searches [max(r_min_turn, floor), r_l_max] over the analytic binding
    radii, each verified against the placement-derived count; a smaller
    radius means a shorter revisit period, so the left edge of the feasible
    interval is optimal. Returns an infeasible solution carrying the minimum
    required fleet size when even the radius cap needs more UAVs than
    budgeted.
    """
    weights = weights or OptimizerWeights()
    r_cap = r_l_max if r_l_max is not None else max_loiter_radius(r_c, kind)
    if not r_cap > 0:
        raise ValueError(f"radius cap must be positive, got {r_cap}")
    lo = max(r_min_turn, RADIUS_FLOOR)
    n = budget.uav_count

    def infeasible(min_required: int | None) -> RadiusSolution:
        return RadiusSolution(
            loiter_radius=None,
            n_x=0,
            n_y=0,
            regime=Regime.INFEASIBLE,
            min_required=min_required,
        )

    if n == 0:
        return infeasible(uav_count(area, r_cap, kind) if lo <= r_cap else None)
    if lo > r_cap:
        return infeasible(None)
    if uav_count(area, r_cap, kind) > n:
        return infeasible(uav_count(area, r_cap, kind))

    # The layout needs at least area / (cell area) circles, so radii below
    # the continuous tiling bound are always infeasible; skip them.
    cell = SQRT3 * 1.5 if kind is PackingKind.HEXAGON else 2.0
    r_inf = math.sqrt(area.x_extent * area.y_extent / (cell * n))
    cand_lo = max(lo, r_inf * (1.0 - 1e-9))
    candidates = _binding_radii(area, kind, cand_lo, r_cap) + [r_cap]
    if lo >= cand_lo:
        candidates.append(lo)
    candidates = sorted(set(candidates))
    # Feasibility (count <= n) is monotone in r: binary-search the left edge.
    lo_i, hi_i = 0, len(candidates) - 1  # hi_i is known feasible
    while lo_i < hi_i:
        mid = (lo_i + hi_i) // 2
        if uav_count(area, candidates[mid], kind) <= n:
            hi_i = mid
        else:
            lo_i = mid + 1
    r_best = candidates[hi_i]

    n_x, n_y = _layout_dims(area, r_best, kind)
    return RadiusSolution(
        loiter_radius=r_best,
        n_x=n_x,
        n_y=n_y,
        regime=classify_regime(r_best, r_c, kind),
        objective_value=weights.sigma[0] / (r_best * r_best),
    )


def require_feasible(solution: RadiusSolution, n_available: int) -> RadiusSolution:
    """Raise :class:`InfeasibleError` (with the deficit) for infeasible solutions."""
    if solution.regime is Regime.INFEASIBLE:
        deficit = (
            solution.min_required - n_available if solution.min_required is not None else None
        )
        msg = f"no feasible loiter radius for {n_available} UAVs"
        if deficit is not None:
            msg += f" (short by {deficit})"
        raise InfeasibleError(msg, deficit=deficit)
    return solution
