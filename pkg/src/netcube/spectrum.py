"""Local L^q-spectrum and local dimension estimation on cube measures.

The level-k sum aggregates mass^q over the level-k cubes meeting a ball
around the base point; its scaling exponent against k*log(r) is the spectrum
surrogate. Full cube masses are used for cubes meeting the ball (matching how
the sums are applied in the recursion bound); weighting by the intersection
mass instead is available behind a flag but nothing is asserted about it.

Finite data cannot realize the double limit, so estimators report both a
least-squares slope over the level window and the window minimum of the
per-level quotients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from netcube.cubes import CubeTree
from netcube.measures import MeasureAssignment
from netcube.metric import FiniteMetricSpace


@dataclass
class SpectrumEstimate:
    x: int
    q: float
    t: float
    k_window: list[int]
    log_sums: list[float]
    tau_fit: float
    tau_min: float


@dataclass
class DimensionEstimate:
    x: int
    t_grid: list[float]
    log_ball_masses: list[float]
    upper_dim_est: float
    lower_dim_est: float


def lq_sum(tree: CubeTree, measure: MeasureAssignment, space: FiniteMetricSpace,
           x: int, t: float, k: int, q: float,
           intersection_weights: bool = False) -> float:
    """Sum of mass^q over level-k cubes meeting the closed ball B(x, t)."""
    if q < 0:
        raise ValueError("q must be nonnegative")
    if t <= 0:
        raise ValueError("t must be positive")
    if not (tree.k_min <= k <= tree.k_max):
        raise ValueError(f"level {k} outside [{tree.k_min}, {tree.k_max}]")
    in_ball = space.row(x) <= t
    if intersection_weights:
        masses = np.bincount(tree.cube_of[k][in_ball],
                             weights=measure.point_mass[in_ball],
                             minlength=tree.n_nodes(k))
        masses = masses[masses > 0]
    else:
        ids = np.unique(tree.cube_of[k][in_ball])
        masses = measure.node_mass[k][ids]
    return float(np.sum(masses ** q))


def tau_q_estimate(tree: CubeTree, measure: MeasureAssignment, space: FiniteMetricSpace,
                   x: int, q: float, t: float,
                   k_window: list[int] | None = None,
                   intersection_weights: bool = False) -> SpectrumEstimate:
    """Spectrum surrogate at x: slope fit and window minimum of the quotients."""
    if k_window is None:
        k_window = list(range(max(tree.k_min + 1, tree.k_min), tree.k_max + 1))
    k_window = sorted(k_window)
    if len(k_window) < 3:
        raise ValueError("k_window must span at least 3 levels")
    log_r = math.log(tree.r)
    log_sums = [math.log(lq_sum(tree, measure, space, x, t, k, q,
                                intersection_weights))
                for k in k_window]
    xs = np.array([k * log_r for k in k_window])
    tau_fit = float(np.polyfit(xs, np.array(log_sums), 1)[0])
    quotients = [ls / (k * log_r) for k, ls in zip(k_window, log_sums) if k != 0]
    tau_min = min(quotients) if quotients else 0.0
    return SpectrumEstimate(x=x, q=q, t=t, k_window=list(k_window),
                            log_sums=log_sums, tau_fit=tau_fit, tau_min=tau_min)


def local_dimension_estimate(space: FiniteMetricSpace, measure: MeasureAssignment,
                             x: int, t_grid) -> DimensionEstimate:
    """Tail-window regression slopes of log mu(B(x, t)) against log t."""
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if len(t_grid) < 4:
        raise ValueError("t_grid needs at least 4 radii")
    if not (np.diff(t_grid) < 0).all():
        raise ValueError("t_grid must be strictly decreasing")
    if (t_grid < space.min_gap / 2.0).any():
        raise ValueError("radii below min_gap/2 see only single points")
    drow = space.row(x)
    masses = np.array([measure.point_mass[drow <= t].sum() for t in t_grid])
    if (masses <= 0).any():
        raise ValueError("zero-mass ball: measure invariants are broken")
    log_t = np.log(t_grid)
    log_m = np.log(masses)
    slopes = []
    for start in range(0, len(t_grid) - 3):
        slopes.append(float(np.polyfit(log_t[start:], log_m[start:], 1)[0]))
    return DimensionEstimate(x=x, t_grid=t_grid.tolist(),
                             log_ball_masses=log_m.tolist(),
                             upper_dim_est=max(slopes),
                             lower_dim_est=min(slopes))


def dimension_bound(M: int, p: float, r: float) -> float:
    """Entropy-style upper bound on the typical upper local dimension.

    (M*p*log(p) + (1 - M*p)*log(1 - M*p)) / log(r); nonnegative, increasing
    in p and vanishing as p -> 0.
    """
    if not (0.0 < p <= 1.0 / (M + 1)):
        raise ValueError(f"p={p} must lie in (0, 1/{M + 1}]")
    if not (0.0 < r < 1.0):
        raise ValueError("r must lie in (0, 1)")
    rest = 1.0 - M * p
    if rest <= 0.0:
        raise ValueError("1 - M*p must be positive")
    return (M * p * math.log(p) + rest * math.log(rest)) / math.log(r)


@dataclass
class DimensionChainReport:
    slack: float
    entries: list[dict] = field(default_factory=list)
    fraction_ok: float = 0.0

    def to_dict(self) -> dict:
        return {"slack": self.slack, "fraction_ok": self.fraction_ok,
                "entries": self.entries}


def check_dimension_chain(tree: CubeTree, measure: MeasureAssignment,
                          space: FiniteMetricSpace, sample_points,
                          q_grid=(0.9, 0.95, 1.05, 1.1), t: float | None = None,
                          slack: float = 0.15) -> DimensionChainReport:
    """Record the finite-scale surrogate of the spectrum/dimension ordering.

    For each sampled point the tau_q/(q-1) quotients from below and above 1
    bracket the local dimension estimates in the limit; at finite scale the
    ordering is recorded with slack, never hard-asserted.
    """
    qs = sorted(q_grid)
    below = [q for q in qs if q < 1.0]
    above = [q for q in qs if q > 1.0]
    if not below or not above:
        raise ValueError("q_grid must straddle 1")
    if t is None:
        t = space.diameter if space.diameter > 0 else 1.0
    report = DimensionChainReport(slack=slack)
    ok = 0
    for x in sample_points:
        x = int(x)
        upper_quot = tau_q_estimate(tree, measure, space, x, max(below), t).tau_fit \
            / (max(below) - 1.0)
        lower_quot = tau_q_estimate(tree, measure, space, x, min(above), t).tau_fit \
            / (min(above) - 1.0)
        t_grid = _dimension_grid(space, tree, t)
        dim = local_dimension_estimate(space, measure, x, t_grid)
        ordered = (lower_quot <= dim.lower_dim_est + slack
                   and dim.upper_dim_est <= upper_quot + slack)
        ok += ordered
        report.entries.append({
            "x": x, "quot_below": upper_quot, "quot_above": lower_quot,
            "lower_dim": dim.lower_dim_est, "upper_dim": dim.upper_dim_est,
            "ordered": bool(ordered),
        })
    report.fraction_ok = ok / max(1, len(report.entries))
    return report


def _dimension_grid(space: FiniteMetricSpace, tree: CubeTree, t0: float) -> np.ndarray:
    """Geometric radius grid t0 * r^j kept above the resolution floor."""
    floor = max(space.min_gap / 2.0, 1e-300)
    grid = []
    t = float(t0)
    while t >= floor and len(grid) < 64:
        grid.append(t)
        t *= tree.r
    while len(grid) < 4:  # degenerate window: extend upward instead
        grid.insert(0, (grid[0] if grid else floor) / tree.r)
    return np.asarray(grid)


def sample_points_by_mass(measure: MeasureAssignment, count: int,
                          seed: int = 0) -> np.ndarray:
    """Draw points proportionally to their mass (the 'mu-almost-all' sampler)."""
    rng = np.random.default_rng(seed)
    w = measure.point_mass / measure.point_mass.sum()
    return rng.choice(len(w), size=count, p=w)
