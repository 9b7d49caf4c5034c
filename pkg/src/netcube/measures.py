"""Doubling measures on a cube tree by recursive mass splitting.

The standard builder gives every non-central child the fraction p of its
parent's mass and the central child the remainder 1 - M*p, where M is the
parent's child count minus one. Variants: p = r^beta for homogeneous scaling,
and a two-level self-similar split driven by a weight vector.

Masses are computed top-down in 64-bit floats; log-masses are accumulated
alongside so deep-tree products stay usable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from netcube.cubes import CubeTree


@dataclass
class MeasureAssignment:
    tree: CubeTree
    node_mass: dict[int, np.ndarray]      # level -> mass per node
    node_log_mass: dict[int, np.ndarray]  # level -> log mass per node
    point_mass: np.ndarray
    params: dict
    M_max: int
    warnings: list[str] = field(default_factory=list)

    @property
    def p(self) -> float:
        return self.params["p"]

    def to_dict(self) -> dict:
        nodes = []
        for k in sorted(self.node_mass):
            for i, m in enumerate(self.node_mass[k]):
                nodes.append({"k": k, "i": i, "mass": float(m)})
        out = {"nodes": nodes, "points": self.point_mass.tolist()}
        out.update({key: val for key, val in self.params.items()})
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def child_counts(tree: CubeTree) -> tuple[dict[int, np.ndarray], int]:
    """Per node, number of children minus one, plus the global maximum."""
    counts: dict[int, np.ndarray] = {}
    m_max = 0
    for k in range(tree.k_min, tree.k_max):
        m = np.array([len(c) - 1 for c in tree.children[k]], dtype=np.int64)
        counts[k] = m
        if m.size and m.max() > m_max:
            m_max = int(m.max())
    return counts, m_max


def _central_mask(tree: CubeTree, k: int) -> np.ndarray:
    """True where the level-k node shares its center with its parent."""
    parent_centers = tree.levels[k - 1][tree.parents[k]]
    return tree.levels[k] == parent_centers


def build_doubling_measure(tree: CubeTree, p: float) -> MeasureAssignment:
    """Standard recursion: root mass 1, non-central children get p * parent."""
    counts, m_max = child_counts(tree)
    bound = 1.0 / (m_max + 1)
    if not (0.0 < p <= bound):
        raise ValueError(
            f"p={p} out of range: requires 0 < p <= 1/(M_max+1) = {bound}")
    warnings = []
    if tree.r > 1.0 / 7.0:
        warnings.append(
            f"r={tree.r} > 1/7: the p^-4 cube comparability bound is not guaranteed")

    node_mass = {tree.k_min: np.array([1.0])}
    node_log = {tree.k_min: np.array([0.0])}
    for k in range(tree.k_min + 1, tree.k_max + 1):
        par = tree.parents[k]
        central = _central_mask(tree, k)
        factor = np.where(central, 1.0 - counts[k - 1][par] * p, p)
        node_mass[k] = node_mass[k - 1][par] * factor
        node_log[k] = node_log[k - 1][par] + np.log(factor)

    point_mass = node_mass[tree.k_max][tree.cube_of[tree.k_max]]
    return MeasureAssignment(tree=tree, node_mass=node_mass, node_log_mass=node_log,
                             point_mass=point_mass, params={"p": p}, M_max=m_max,
                             warnings=warnings)


def build_alpha_homogeneous(tree: CubeTree, beta: float) -> MeasureAssignment:
    """Standard recursion with p = r^beta; beta controls the scaling exponent."""
    _, m_max = child_counts(tree)
    beta_min = math.log(m_max + 1) / math.log(1.0 / tree.r)
    p = tree.r ** beta
    if not (0.0 < p <= 1.0 / (m_max + 1)):
        raise ValueError(
            f"beta={beta} too small: requires beta >= log(M_max+1)/log(1/r) "
            f"= {beta_min}")
    measure = build_doubling_measure(tree, p)
    measure.params = {"p": p, "beta": beta}
    return measure


def build_self_similar(tree: CubeTree, p: float,
                       weights: list[float]) -> MeasureAssignment:
    """Two-level split from each even-depth node.

    From a node at even depth, the n smallest-index children are selected;
    every grandchild whose center is not a selected child's center receives
    p times the node's mass, and the remainder is divided among the selected
    children's central grandchildren according to the weights. Intermediate
    child masses are the sums over their grandchildren. If the leaf level sits
    at odd depth, the trailing level is split equally among children.
    """
    weights = np.asarray(weights, dtype=np.float64)
    n_sel = len(weights)
    if n_sel < 1 or (weights <= 0).any():
        raise ValueError("weights must be a nonempty list of positive reals")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("weights must sum to 1")
    counts, m_max = child_counts(tree)
    p_bound = m_max ** -2 if m_max > 0 else 1.0
    if not (0.0 < p < p_bound):
        raise ValueError(f"p={p} out of range: requires 0 < p < {p_bound}")

    depth_max = tree.k_max - tree.k_min
    for k in range(tree.k_min, tree.k_max, 2):
        if ((counts[k] + 1) < n_sel).any():
            raise ValueError(
                f"level {k} has a node with fewer than {n_sel} children")

    node_mass = {tree.k_min: np.array([1.0])}
    k = tree.k_min
    while k + 2 <= tree.k_max:
        mass_k = node_mass[k]
        mass_k1 = np.zeros(tree.n_nodes(k + 1))
        mass_k2 = np.zeros(tree.n_nodes(k + 2))
        for i in range(tree.n_nodes(k)):
            kids = tree.children[k][i]
            selected = kids[:n_sel]
            selected_centers = set(tree.levels[k + 1][selected].tolist())
            grandkids = [g for c in kids for g in tree.children[k + 1][c]]
            plain = [g for g in grandkids
                     if int(tree.levels[k + 2][g]) not in selected_centers]
            for g in plain:
                mass_k2[g] += p * mass_k[i]
            remainder = mass_k[i] - p * mass_k[i] * len(plain)
            if remainder <= 0:
                raise ValueError(
                    f"p={p} too large: nonpositive remainder at node ({k}, {i})")
            for m, c in enumerate(selected):
                g_central = tree.central[k + 1][c]
                mass_k2[g_central] += weights[m] * remainder
        # intermediate children carry the sums of their grandchildren
        for c in range(tree.n_nodes(k + 1)):
            mass_k1[c] = mass_k2[tree.children[k + 1][c]].sum()
        node_mass[k + 1] = mass_k1
        node_mass[k + 2] = mass_k2
        k += 2
    if k < tree.k_max:  # odd trailing level: equal split
        mass_last = np.zeros(tree.n_nodes(k + 1))
        for i in range(tree.n_nodes(k)):
            kids = tree.children[k][i]
            mass_last[kids] = node_mass[k][i] / len(kids)
        node_mass[k + 1] = mass_last

    node_log = {lvl: np.log(m) for lvl, m in node_mass.items()}
    point_mass = node_mass[tree.k_max][tree.cube_of[tree.k_max]]
    return MeasureAssignment(tree=tree, node_mass=node_mass, node_log_mass=node_log,
                             point_mass=point_mass,
                             params={"p": p, "weights": weights.tolist()},
                             M_max=m_max)


def check_measure_invariants(measure: MeasureAssignment,
                             rel_tol: float = 1e-12) -> list[str]:
    """Conservation, positivity and normalization checks."""
    tree = measure.tree
    problems = []
    if abs(measure.node_mass[tree.k_min][0] - 1.0) > rel_tol:
        problems.append("root mass differs from 1")
    for k in range(tree.k_min, tree.k_max):
        mass = measure.node_mass[k]
        below = measure.node_mass[k + 1]
        for i in range(tree.n_nodes(k)):
            total = below[tree.children[k][i]].sum()
            if abs(total - mass[i]) > rel_tol * max(mass[i], 1e-300):
                problems.append(f"conservation violated at node ({k}, {i})")
    for k, mass in measure.node_mass.items():
        if (mass <= 0).any():
            problems.append(f"nonpositive node mass at level {k}")
    if abs(measure.point_mass.sum() - 1.0) > rel_tol:
        problems.append("point masses do not sum to 1")
    # node mass equals the sum of leaf masses beneath it; the sum accumulates
    # one rounding per leaf, so allow headroom proportional to the leaf count
    leaf_tol = rel_tol * max(32, measure.tree.n_points // 256)
    for k in range(tree.k_min, tree.k_max + 1):
        sums = np.bincount(tree.cube_of[k], weights=measure.point_mass,
                           minlength=tree.n_nodes(k))
        bad = np.abs(sums - measure.node_mass[k]) > leaf_tol * np.maximum(sums, 1e-300)
        if bad.any():
            problems.append(f"node mass differs from leaf-mass sum at level {k}")
    return problems
