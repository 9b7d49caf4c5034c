"""Finite metric spaces: representation, validation, balls, covering numbers.

A space is backed either by a dense distance matrix (kept for n <= DENSE_CAP)
or by stored coordinates with a closed-form metric evaluated on demand.
All threshold comparisons for balls use exact <= / < with no epsilon slack;
tolerances appear only in metric validation.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

DENSE_CAP = 8192


@dataclass
class FiniteMetricSpace:
    """Finite point set with a validated distance oracle."""

    n: int
    labels: list[str] | None = None
    base_point: int = 0
    _matrix: np.ndarray | None = field(default=None, repr=False)
    _coords: np.ndarray | None = field(default=None, repr=False)
    _p_norm: float = 2.0
    _snowflake: float = 1.0
    diameter: float = field(default=0.0, init=False)
    min_gap: float = field(default=0.0, init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("space must contain at least one point")
        if self._matrix is None and self._coords is None:
            raise ValueError("either a distance matrix or coordinates are required")
        if not (0 <= self.base_point < self.n):
            raise ValueError(f"base_point {self.base_point} out of range")
        self._scan_extremes()

    @classmethod
    def from_matrix(cls, d, labels=None, base_point=0) -> "FiniteMetricSpace":
        d = np.asarray(d, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        return cls(n=d.shape[0], labels=labels, base_point=base_point, _matrix=d)

    @classmethod
    def from_points(cls, coords, p_norm=2.0, snowflake=1.0, labels=None,
                    base_point=0) -> "FiniteMetricSpace":
        coords = np.atleast_2d(np.asarray(coords, dtype=np.float64))
        if not (0.0 < snowflake <= 1.0):
            raise ValueError("snowflake exponent must lie in (0, 1]")
        n = coords.shape[0]
        space = cls.__new__(cls)
        space.n = n
        space.labels = labels
        space.base_point = base_point
        space._coords = coords
        space._p_norm = p_norm
        space._snowflake = snowflake
        space._matrix = None
        if n <= DENSE_CAP:
            space._matrix = space._coord_rows(np.arange(n))
        space.__post_init__()
        return space

    def _coord_rows(self, idx) -> np.ndarray:
        d = cdist(self._coords[np.atleast_1d(idx)], self._coords, metric="minkowski",
                  p=self._p_norm)
        if self._snowflake != 1.0:
            d **= self._snowflake
        return d if np.ndim(idx) else d[0]

    def _scan_extremes(self):
        diam = 0.0
        gap = np.inf
        for i in range(self.n):
            row = self.row(i)
            diam = max(diam, float(row.max()))
            off = row[np.arange(self.n) != i]
            if off.size:
                gap = min(gap, float(off.min()))
        self.diameter = diam
        # single point: min_gap degenerates to diameter = 0
        self.min_gap = gap if np.isfinite(gap) else diam

    def row(self, i: int) -> np.ndarray:
        """Distances from point i to every point."""
        if not (0 <= i < self.n):
            raise IndexError(f"point index {i} out of range")
        if self._matrix is not None:
            return self._matrix[i]
        return self._coord_rows(int(i))

    def dist(self, i: int, j: int) -> float:
        if not (0 <= j < self.n):
            raise IndexError(f"point index {j} out of range")
        return float(self.row(i)[j])


@dataclass
class ValidationReport:
    valid: bool
    violations: list[tuple]  # (kind, witness indices, amount)
    n_checked_pairs: int
    n_checked_triples: int

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [[k, list(w), a] for k, w, a in self.violations],
            "pairs": self.n_checked_pairs,
            "triples": self.n_checked_triples,
        }


def validate_metric(space: FiniteMetricSpace, tol: float = 0.0,
                    max_witnesses: int = 1000) -> ValidationReport:
    """Exhaustively check the metric axioms, listing every violation with witnesses.

    Violations are report content, not faults. The triangle inequality is
    checked for all ordered triples via an O(n^3) scan.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    n = space.n
    viol = []

    d = np.vstack([space.row(i) for i in range(n)])
    for i in range(n):
        if d[i, i] != 0.0:
            viol.append(("nonzero_diagonal", (i,), float(d[i, i])))
    asym = np.argwhere(np.abs(d - d.T) > tol)
    for i, j in asym:
        if i < j and len(viol) < max_witnesses:
            viol.append(("asymmetry", (int(i), int(j)), float(abs(d[i, j] - d[j, i]))))
    neg = np.argwhere(d < 0)
    for i, j in neg:
        if len(viol) < max_witnesses:
            viol.append(("negative", (int(i), int(j)), float(d[i, j])))
    zero_off = np.argwhere((d <= 0) & ~np.eye(n, dtype=bool) & ~(d < 0))
    for i, j in zero_off:
        if i < j and len(viol) < max_witnesses:
            viol.append(("zero_off_diagonal", (int(i), int(j)), 0.0))

    triples = 0
    for j in range(n):
        # d(i,k) <= d(i,j) + d(j,k) for the middle point j
        bound = d[:, j][:, None] + d[j][None, :]
        bad = np.argwhere(d > bound + tol)
        triples += n * n
        for i, k in bad:
            if i != j and k != j and i != k and len(viol) < max_witnesses:
                viol.append(("triangle", (int(i), int(j), int(k)),
                             float(d[i, k] - bound[i, k])))

    return ValidationReport(valid=not viol, violations=viol,
                            n_checked_pairs=n * (n - 1) // 2,
                            n_checked_triples=triples)


def ball(space: FiniteMetricSpace, x: int, t: float, kind: str = "closed") -> np.ndarray:
    """Indices of the closed ball {y: d(x,y) <= t} or open ball {y: d(x,y) < t}."""
    if t < 0:
        raise ValueError("radius must be nonnegative")
    row = space.row(x)
    if kind == "closed":
        mask = row <= t
    elif kind == "open":
        mask = row < t
    else:
        raise ValueError(f"unknown ball kind {kind!r}")
    return np.flatnonzero(mask)


def covering_number(space: FiniteMetricSpace, x: int, t: float) -> int:
    """Greedy upper bound on the number of closed t-balls needed to cover B(x, 2t).

    At each step the center covering the most still-uncovered target points is
    chosen (ties to the lowest index).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    target = set(ball(space, x, 2 * t, "closed").tolist())
    count = 0
    while target:
        best_center, best_cov = -1, -1
        for c in range(space.n):
            cov = sum(1 for y in target if space.dist(c, y) <= t)
            if cov > best_cov:
                best_center, best_cov = c, cov
        covered = {y for y in target if space.dist(best_center, y) <= t}
        target -= covered
        count += 1
    return count
