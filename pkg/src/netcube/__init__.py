"""Nested nets, generalized dyadic cubes and doubling measures on finite metric spaces."""

from netcube.metric import FiniteMetricSpace, ValidationReport, ball, covering_number, validate_metric
from netcube.generators import GeneratorSpec, generate
from netcube.nets import NetHierarchy, ParentMap, assign_parents, build_nets
from netcube.cubes import CubeTree, build_cubes, cube_at, regrade_scales, verify_tree_properties
from netcube.measures import (
    MeasureAssignment,
    build_alpha_homogeneous,
    build_doubling_measure,
    build_self_similar,
    child_counts,
)
from netcube.doubling import (
    DoublingReport,
    scale_level,
    verify_cube_comparability,
    verify_doubling,
    verify_doubling_exhaustive,
)
from netcube.spectrum import (
    DimensionEstimate,
    SpectrumEstimate,
    check_dimension_chain,
    dimension_bound,
    local_dimension_estimate,
    lq_sum,
    tau_q_estimate,
)

__version__ = "0.1.0"

__all__ = [
    "FiniteMetricSpace",
    "ValidationReport",
    "ball",
    "covering_number",
    "validate_metric",
    "GeneratorSpec",
    "generate",
    "NetHierarchy",
    "ParentMap",
    "build_nets",
    "assign_parents",
    "CubeTree",
    "build_cubes",
    "cube_at",
    "verify_tree_properties",
    "regrade_scales",
    "MeasureAssignment",
    "child_counts",
    "build_doubling_measure",
    "build_alpha_homogeneous",
    "build_self_similar",
    "DoublingReport",
    "scale_level",
    "verify_cube_comparability",
    "verify_doubling",
    "verify_doubling_exhaustive",
    "SpectrumEstimate",
    "DimensionEstimate",
    "lq_sum",
    "tau_q_estimate",
    "local_dimension_estimate",
    "dimension_bound",
    "check_dimension_chain",
]
