"""Deterministic seeded generators of test spaces with known structure.

Every generator is a pure function of its spec: identical spec + seed yields a
bit-identical space. The base point is always index 0 of the generated
ordering, so hierarchies built on generated spaces are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from netcube.metric import FiniteMetricSpace

SIZE_CAP = 8192

KINDS = ("grid1d", "grid2d", "euclidean_random", "cantor_ultrametric",
         "mary_ultrametric", "snowflake")


@dataclass
class GeneratorSpec:
    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "params": self.params,
                           "seed": self.seed}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GeneratorSpec":
        obj = json.loads(text)
        return cls(kind=obj["kind"], params=obj.get("params", {}),
                   seed=int(obj.get("seed", 0)))


def _ultrametric_matrix(m: int, h: int, ratio: float) -> np.ndarray:
    """d(u,v) = ratio^(depth of deepest common ancestor), root depth 0.

    Leaves are the m^h leaves of the complete m-ary tree, indexed so that the
    most significant base-m digit is the branch taken at the root.
    """
    n = m ** h
    if n > SIZE_CAP:
        raise ValueError(f"size cap {SIZE_CAP} exceeded ({n} leaves)")
    idx = np.arange(n)
    lca = np.zeros((n, n), dtype=np.int16)
    for depth in range(1, h + 1):
        prefix = idx // (m ** (h - depth))
        lca += (prefix[:, None] == prefix[None, :]).astype(np.int16)
    d = ratio ** lca.astype(np.float64)
    np.fill_diagonal(d, 0.0)
    return d


def generate(spec: GeneratorSpec) -> FiniteMetricSpace:
    """Build the finite metric space described by spec."""
    kind, p = spec.kind, spec.params
    if kind == "grid1d":
        n = int(p["n"])
        spacing = float(p.get("spacing", 1.0))
        _check_cap(n)
        coords = (np.arange(n, dtype=np.float64) * spacing)[:, None]
        return FiniteMetricSpace.from_points(coords)
    if kind == "grid2d":
        nx, ny = int(p["nx"]), int(p["ny"])
        spacing = float(p.get("spacing", 1.0))
        _check_cap(nx * ny)
        xs, ys = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
        coords = np.stack([xs.ravel(), ys.ravel()], axis=1).astype(np.float64) * spacing
        return FiniteMetricSpace.from_points(coords)
    if kind == "euclidean_random":
        n, dim = int(p["n"]), int(p.get("dim", 2))
        scale = float(p.get("scale", 1.0))
        _check_cap(n)
        rng = np.random.default_rng(spec.seed)
        coords = rng.uniform(0.0, scale, size=(n, dim))
        return FiniteMetricSpace.from_points(coords)
    if kind == "mary_ultrametric":
        m, h = int(p["m"]), int(p["h"])
        ratio = float(p.get("ratio", 0.5))
        if not (0.0 < ratio < 1.0):
            raise ValueError("ratio must lie in (0, 1)")
        return FiniteMetricSpace.from_matrix(_ultrametric_matrix(m, h, ratio))
    if kind == "cantor_ultrametric":
        # binary code tree with the classical 1/3 contraction by default
        h = int(p["h"])
        ratio = float(p.get("ratio", 1.0 / 3.0))
        if not (0.0 < ratio < 1.0):
            raise ValueError("ratio must lie in (0, 1)")
        return FiniteMetricSpace.from_matrix(_ultrametric_matrix(2, h, ratio))
    if kind == "snowflake":
        eps = float(p["epsilon"])
        if not (0.0 < eps <= 1.0):
            raise ValueError("snowflake exponent must lie in (0, 1]")
        base = GeneratorSpec(kind=p["base"]["kind"],
                             params=p["base"].get("params", {}),
                             seed=int(p["base"].get("seed", spec.seed)))
        inner = generate(base)
        if inner._coords is not None:
            return FiniteMetricSpace.from_points(
                inner._coords, p_norm=inner._p_norm,
                snowflake=inner._snowflake * eps)
        d = np.vstack([inner.row(i) for i in range(inner.n)]) ** eps
        return FiniteMetricSpace.from_matrix(d)
    raise ValueError(f"unknown generator kind {kind!r}")


def _check_cap(n: int):
    if n > SIZE_CAP:
        raise ValueError(f"size cap {SIZE_CAP} exceeded (requested {n} points)")
    if n < 1:
        raise ValueError("generated space must have at least one point")
