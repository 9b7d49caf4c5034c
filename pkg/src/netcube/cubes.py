"""Generalized dyadic cubes over a net hierarchy.

A cube at level k is the set of points whose leaf-to-root parent chain passes
through the node (k, i). On a finite space the unique-parent attachment rule
already assigns each point to exactly one chain, so no closure or subtraction
bookkeeping is needed; the partition property is asserted, not arranged.

Each cube is sandwiched between an open inner ball of radius c*r^k and a
closed outer ball of radius C*r^k about its center, with c = 1/2 - r/(1-r)
and C = 1/(1-r).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from netcube.metric import FiniteMetricSpace
from netcube.nets import NetHierarchy, ParentMap


def sandwich_constants(r: float) -> tuple[float, float]:
    """Inner/outer ball radius factors (c, C) for scale ratio r < 1/3."""
    return 0.5 - r / (1.0 - r), 1.0 / (1.0 - r)


@dataclass
class CubeTree:
    r: float
    k_min: int
    k_max: int
    levels: dict[int, np.ndarray]          # level -> center point index per node
    parents: dict[int, np.ndarray]         # level -> parent position one level up
    children: dict[int, list[np.ndarray]]  # level -> per node, child positions below
    central: dict[int, np.ndarray]         # level -> central child position below
    cube_of: dict[int, np.ndarray]         # level -> cube position containing each point
    base_point: int

    @property
    def n_points(self) -> int:
        return len(self.cube_of[self.k_max])

    def n_nodes(self, k: int) -> int:
        return len(self.levels[k])

    def center(self, k: int, i: int) -> int:
        return int(self.levels[k][i])

    def members(self, k: int, i: int) -> np.ndarray:
        return np.flatnonzero(self.cube_of[k] == i)

    def leaf_of(self, point: int) -> tuple[int, int]:
        return self.k_max, int(self.cube_of[self.k_max][point])

    def to_dict(self) -> dict:
        nodes = []
        for k in range(self.k_min, self.k_max + 1):
            for i in range(self.n_nodes(k)):
                parent = None if k == self.k_min else [k - 1, int(self.parents[k][i])]
                kids = ([] if k == self.k_max
                        else [[k + 1, int(c)] for c in self.children[k][i]])
                nodes.append({"k": k, "i": i, "center": self.center(k, i),
                              "parent": parent, "children": kids})
        return {"r": self.r, "k_min": self.k_min, "k_max": self.k_max,
                "nodes": nodes}

    def to_json(self, members: bool = False) -> str:
        obj = self.to_dict()
        if members:
            for node in obj["nodes"]:
                obj_members = self.members(node["k"], node["i"])
                node["members"] = obj_members.tolist()
        return json.dumps(obj, sort_keys=True)


def build_cubes(nets: NetHierarchy, parents: ParentMap) -> CubeTree:
    """Materialize the cube tree from a hierarchy and its parent relation."""
    n = len(nets.levels[nets.k_max])
    k_min, k_max = nets.k_min, nets.k_max

    cube_of: dict[int, np.ndarray] = {}
    leaf_pos = np.empty(n, dtype=np.int64)
    leaf_pos[nets.levels[k_max]] = np.arange(n)
    cube_of[k_max] = leaf_pos
    for k in range(k_max - 1, k_min - 1, -1):
        cube_of[k] = parents.parents[k + 1][cube_of[k + 1]]

    children: dict[int, list[np.ndarray]] = {}
    for k in range(k_min, k_max):
        par = parents.parents[k + 1]
        kids = [[] for _ in range(len(nets.levels[k]))]
        for child_pos, parent_pos in enumerate(par):
            kids[parent_pos].append(child_pos)
        children[k] = [np.asarray(c, dtype=np.int64) for c in kids]

    return CubeTree(r=nets.r, k_min=k_min, k_max=k_max,
                    levels={k: nets.levels[k].copy() for k in nets.levels},
                    parents=parents.parents, children=children,
                    central=parents.central, cube_of=cube_of,
                    base_point=nets.base_point)


def cube_at(tree: CubeTree, point: int, k: int) -> tuple[int, int]:
    """The unique level-k node containing the point."""
    if not (tree.k_min <= k <= tree.k_max):
        raise ValueError(f"level {k} outside [{tree.k_min}, {tree.k_max}]")
    return k, int(tree.cube_of[k][point])


@dataclass
class TreePropertyReport:
    passed: bool
    properties: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "properties": self.properties}


def verify_tree_properties(tree: CubeTree, space: FiniteMetricSpace) -> TreePropertyReport:
    """Check the cube-family properties with exact set arithmetic.

    Per level and node: (i) the level partitions the space, (ii) cubes nest,
    (iii) every point strictly inside the c*r^k inner ball of the center is a
    member and every member lies within C*r^k of the center, (iv) the base
    point's cube contains the open inner ball around the base point, (v) net
    centers nest upward. Worst slack per property is reported (negative slack
    marks a violation).
    """
    c, C = sandwich_constants(tree.r)
    props: dict[str, dict] = {}
    ok = True

    # (i) partition: every point in exactly one nonempty cube per level
    part_viol = []
    for k in range(tree.k_min, tree.k_max + 1):
        counts = np.bincount(tree.cube_of[k], minlength=tree.n_nodes(k))
        if counts.sum() != space.n or (counts == 0).any():
            part_viol.append(k)
    props["partition"] = {"pass": not part_viol, "violations": part_viol}

    # (ii) nesting: each level-k cube maps into a single level-(k-1) cube
    nest_viol = []
    for k in range(tree.k_min + 1, tree.k_max + 1):
        implied = tree.parents[k][tree.cube_of[k]]
        if not np.array_equal(implied, tree.cube_of[k - 1]):
            nest_viol.append(k)
    props["nesting"] = {"pass": not nest_viol, "violations": nest_viol}

    # (iii) inner/outer ball sandwich, exact threshold comparisons
    inner_slack = math.inf
    outer_slack = math.inf
    sandwich_viol = []
    for k in range(tree.k_min, tree.k_max + 1):
        inner_t = c * tree.r ** k
        outer_t = C * tree.r ** k
        for i in range(tree.n_nodes(k)):
            drow = space.row(tree.center(k, i))
            member = tree.cube_of[k] == i
            strays = (~member) & (drow < inner_t)
            if strays.any():
                sandwich_viol.append(("inner", k, i, int(np.flatnonzero(strays)[0])))
            non_member_d = drow[~member]
            if non_member_d.size:
                inner_slack = min(inner_slack, float(non_member_d.min()) - inner_t)
            far = member & (drow > outer_t)
            if far.any():
                sandwich_viol.append(("outer", k, i, int(np.flatnonzero(far)[0])))
            outer_slack = min(outer_slack, outer_t - float(drow[member].max()))
    props["sandwich"] = {
        "pass": not sandwich_viol,
        "violations": sandwich_viol[:100],
        "worst_inner_slack": None if math.isinf(inner_slack) else inner_slack,
        "worst_outer_slack": None if math.isinf(outer_slack) else outer_slack,
    }

    # (iv) base point's cube contains the open inner ball around the base point
    base_viol = []
    d0 = space.row(tree.base_point)
    for k in range(tree.k_min, tree.k_max + 1):
        node = tree.cube_of[k][tree.base_point]
        member = tree.cube_of[k] == node
        if ((~member) & (d0 < c * tree.r ** k)).any():
            base_viol.append(k)
    props["base_point_ball"] = {"pass": not base_viol, "violations": base_viol}

    # (v) centers nest upward
    center_viol = []
    for k in range(tree.k_min, tree.k_max):
        if not set(tree.levels[k].tolist()) <= set(tree.levels[k + 1].tolist()):
            center_viol.append(k)
    props["center_nesting"] = {"pass": not center_viol, "violations": center_viol}

    ok = all(p["pass"] for p in props.values())
    return TreePropertyReport(passed=ok, properties=props)


def regrade_scales(r_base: float, r_tilde: float, n: int) -> int:
    """Level of the base hierarchy standing in for scale r_tilde^n.

    Returns the unique integer k with r_base^k < r_tilde^n <= r_base^(k-1),
    so families for coarser ratios r_tilde >= 1/3 are level subsamplings of a
    hierarchy built with a small base ratio.
    """
    if not (0.0 < r_base < 1.0 / 3.0):
        raise ValueError("r_base must lie in (0, 1/3)")
    if not (1.0 / 3.0 <= r_tilde < 1.0):
        raise ValueError("r_tilde must lie in [1/3, 1)")
    if n < 0:
        raise ValueError("n must be nonnegative")
    value = r_tilde ** n
    k = math.floor(math.log(value) / math.log(r_base)) + 1
    while not r_base ** k < value:
        k += 1
    while not value <= r_base ** (k - 1):
        k -= 1
    return k
