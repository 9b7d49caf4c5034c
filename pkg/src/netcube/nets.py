"""Nested maximal separated nets across scales and the parent relation.

Level k of a hierarchy with ratio r is an r^k-separated, maximal subset of the
space. Construction is fine-to-coarse: the finest level is all of X (ordered
with the base point first), and each coarser level is the greedy maximal
separated subsequence of the level below, scanned in stored order. The greedy
scan keeps the base point in every level and preserves nesting automatically.

Each finer net point is attached to its nearest coarser net point, ties broken
to the smallest index within the coarser level. A net point surviving to the
coarser level attaches to itself (distance 0) and is that node's central child.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from netcube.metric import FiniteMetricSpace


@dataclass
class NetHierarchy:
    r: float
    k_min: int
    k_max: int
    levels: dict[int, np.ndarray]  # level k -> point indices, scan order
    base_point: int

    def level(self, k: int) -> np.ndarray:
        if not (self.k_min <= k <= self.k_max):
            raise ValueError(f"level {k} outside [{self.k_min}, {self.k_max}]")
        return self.levels[k]

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "levels": {str(k): v.tolist() for k, v in self.levels.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict, base_point: int = 0) -> "NetHierarchy":
        levels = {int(k): np.asarray(v, dtype=np.int64)
                  for k, v in obj["levels"].items()}
        return cls(r=float(obj["r"]), k_min=int(obj["k_min"]),
                   k_max=int(obj["k_max"]), levels=levels, base_point=base_point)


@dataclass
class ParentMap:
    # parents[k][i]: position within level k-1 of the parent of level-k point i
    parents: dict[int, np.ndarray]
    # central[k][j]: position within level k+1 of the child sharing node j's center
    central: dict[int, np.ndarray]


def _scale_index_leq(r: float, value: float) -> int:
    """Least integer k with r^k <= value (r < 1, value > 0)."""
    k = math.ceil(math.log(value) / math.log(r))
    while r ** k > value:
        k += 1
    while k - 1 > -10**9 and r ** (k - 1) <= value:
        k -= 1
    return k


def build_nets(space: FiniteMetricSpace, r: float,
               allow_large_r: bool = False) -> NetHierarchy:
    """Build the full hierarchy of greedy maximal r^k-separated nets.

    Ratios r >= 1/3 lose the inner-ball guarantee (its radius factor turns
    nonpositive) and are rejected unless allow_large_r is set; they remain
    useful on exactly ultrametric spaces where cubes are metric balls anyway.
    """
    if not (0.0 < r < 1.0) or (r >= 1.0 / 3.0 and not allow_large_r):
        raise ValueError(
            f"r={r} outside (0, 1/3); for larger ratios subsample scales via "
            "regrade_scales on a small-r hierarchy")
    if space.n < 1:
        raise ValueError("empty space")

    bp = space.base_point
    if space.n == 1:
        lvl = np.array([bp], dtype=np.int64)
        return NetHierarchy(r=r, k_min=0, k_max=0, levels={0: lvl}, base_point=bp)

    # finest scale where every point is separated; coarsest where one remains
    k_max = _scale_index_leq(r, space.min_gap)
    k_min = _scale_index_leq(r, space.diameter) - 1  # greatest k with r^k > diameter

    order = np.concatenate(([bp], np.delete(np.arange(space.n), bp))).astype(np.int64)
    levels = {k_max: order}
    current = order
    for k in range(k_max - 1, k_min - 1, -1):
        sep = r ** k
        kept = _greedy_separated(space, current, sep)
        levels[k] = kept
        current = kept
    return NetHierarchy(r=r, k_min=k_min, k_max=k_max, levels=levels, base_point=bp)


def _greedy_separated(space: FiniteMetricSpace, order: np.ndarray,
                      sep: float) -> np.ndarray:
    """Scan order, keeping a point iff it is >= sep from every kept point."""
    alive = np.ones(len(order), dtype=bool)
    kept = []
    for pos in range(len(order)):
        if not alive[pos]:
            continue
        p = order[pos]
        kept.append(p)
        alive &= space.row(p)[order] >= sep
        alive[pos] = False
    return np.asarray(kept, dtype=np.int64)


def assign_parents(space: FiniteMetricSpace, nets: NetHierarchy) -> ParentMap:
    """Attach each net point to its nearest point one level coarser.

    Ties go to the smallest position within the coarser level; argmin over a
    finite level always exists. A point present at both levels has itself as
    parent and is registered as the parent's central child.
    """
    parents: dict[int, np.ndarray] = {}
    central: dict[int, np.ndarray] = {}
    for k in range(nets.k_min + 1, nets.k_max + 1):
        fine = nets.levels[k]
        coarse = nets.levels[k - 1]
        d = np.vstack([space.row(p)[coarse] for p in fine])
        par = np.argmin(d, axis=1).astype(np.int64)  # first occurrence = min index
        parents[k] = par
        cc = np.full(len(coarse), -1, dtype=np.int64)
        pos_in_fine = {int(p): i for i, p in enumerate(fine)}
        for j, p in enumerate(coarse):
            cc[j] = pos_in_fine[int(p)]  # nesting guarantees presence
        central[k - 1] = cc
    return ParentMap(parents=parents, central=central)


def check_net_invariants(space: FiniteMetricSpace, nets: NetHierarchy,
                         parents: ParentMap | None = None) -> list[str]:
    """Return a list of violated hierarchy invariants (empty = all hold)."""
    problems = []
    r = nets.r
    for k in range(nets.k_min, nets.k_max + 1):
        lvl = nets.levels[k]
        sep = r ** k
        for i, p in enumerate(lvl):
            drow = space.row(p)[lvl]
            drow[i] = np.inf
            if drow.min() < sep:
                problems.append(f"separation violated at level {k}, point {p}")
                break
        # maximality: every point within r^k of some net point
        mind = np.full(space.n, np.inf)
        for p in lvl:
            np.minimum(mind, space.row(p), out=mind)
        if (mind > sep).any():
            problems.append(f"maximality violated at level {k}")
        if nets.base_point not in lvl:
            problems.append(f"base point missing from level {k}")
        if k < nets.k_max and not set(lvl.tolist()) <= set(nets.levels[k + 1].tolist()):
            problems.append(f"nesting violated between levels {k} and {k + 1}")
    if len(nets.levels[nets.k_min]) != 1:
        problems.append("coarsest level is not a single point")
    if len(nets.levels[nets.k_max]) != space.n:
        problems.append("finest level does not contain every point")
    if parents is not None:
        for k in range(nets.k_min + 1, nets.k_max + 1):
            fine = nets.levels[k]
            coarse = nets.levels[k - 1]
            for i, p in enumerate(fine):
                j = parents.parents[k][i]
                if space.dist(int(p), int(coarse[j])) > r ** (k - 1):
                    problems.append(
                        f"parent distance exceeds r^{k - 1} at level {k}, point {p}")
                    break
    return problems
