import math

import numpy as np
import pytest

from netcube.generators import GeneratorSpec, generate
from netcube.measures import build_doubling_measure
from netcube.metric import FiniteMetricSpace
from netcube.spectrum import (check_dimension_chain, dimension_bound,
                              local_dimension_estimate, lq_sum,
                              sample_points_by_mass, tau_q_estimate,
                              _dimension_grid)
from conftest import make_tree


@pytest.fixture(scope="module")
def uniform_binary():
    sp = generate(GeneratorSpec("mary_ultrametric", {"m": 2, "h": 10, "ratio": 0.5}))
    tree = make_tree(sp, 0.5, allow_large_r=True)
    measure = build_doubling_measure(tree, 0.5)
    return sp, tree, measure


def test_lq_sum_q1_total_mass(uniform_binary):
    sp, tree, m = uniform_binary
    for k in range(tree.k_min, tree.k_max + 1):
        assert lq_sum(tree, m, sp, 0, sp.diameter, k, 1.0) == pytest.approx(1.0)


def test_lq_sum_q0_counts_cubes(uniform_binary):
    sp, tree, m = uniform_binary
    for k in range(tree.k_min, tree.k_max + 1):
        assert lq_sum(tree, m, sp, 0, sp.diameter, k, 0.0) == tree.n_nodes(k)


def test_lq_sum_closed_form(uniform_binary):
    sp, tree, m = uniform_binary
    for k in range(tree.k_min + 1, tree.k_max + 1):
        j = math.log2(tree.n_nodes(k))
        for q in (0.5, 2.0, 3.0):
            expected = 2.0 ** (j * (1 - q))
            assert lq_sum(tree, m, sp, 0, sp.diameter, k, q) == pytest.approx(expected)


def test_lq_sum_decreasing_in_q(uniform_binary):
    sp, tree, m = uniform_binary
    k = tree.k_max - 2
    values = [lq_sum(tree, m, sp, 0, sp.diameter, k, q) for q in (0.0, 0.5, 1.0, 2.0)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_lq_sum_q1_monotone_in_t(uniform_binary):
    sp, tree, m = uniform_binary
    k = tree.k_max - 1
    ts = [sp.diameter, sp.diameter / 2, sp.diameter / 8, sp.diameter / 64]
    sums = [lq_sum(tree, m, sp, 0, t, k, 1.0) for t in ts]
    assert all(a >= b for a, b in zip(sums, sums[1:]))


def test_tau_estimate_closed_form(uniform_binary):
    sp, tree, m = uniform_binary
    for q in (0.0, 0.5, 2.0):
        est = tau_q_estimate(tree, m, sp, 0, q, sp.diameter,
                             k_window=list(range(1, tree.k_max + 1)))
        assert est.tau_fit == pytest.approx(q - 1, abs=1e-9)


def test_tau_q1_zero(uniform_binary):
    sp, tree, m = uniform_binary
    est = tau_q_estimate(tree, m, sp, 0, 1.0, sp.diameter)
    assert est.tau_fit == pytest.approx(0.0, abs=1e-12)


def test_tau_point_mass_space():
    sp = FiniteMetricSpace.from_matrix([[0.0]])
    tree = make_tree(sp, 0.2)
    m = build_doubling_measure(tree, 0.5)
    with pytest.raises(ValueError):  # fewer than 3 levels available
        tau_q_estimate(tree, m, sp, 0, 2.0, 1.0)


def test_degenerate_window_faults(uniform_binary):
    sp, tree, m = uniform_binary
    with pytest.raises(ValueError):
        tau_q_estimate(tree, m, sp, 0, 2.0, sp.diameter, k_window=[1, 2])


def test_local_dimension_ultrametric(uniform_binary):
    sp, tree, m = uniform_binary
    grid = _dimension_grid(sp, tree, sp.diameter)
    est = local_dimension_estimate(sp, m, 0, grid)
    assert est.upper_dim_est == pytest.approx(1.0, abs=0.05)
    assert est.lower_dim_est == pytest.approx(1.0, abs=0.05)
    assert est.lower_dim_est <= est.upper_dim_est


def test_local_dimension_single_point():
    sp = FiniteMetricSpace.from_matrix([[0.0]])
    tree = make_tree(sp, 0.2)
    m = build_doubling_measure(tree, 0.5)
    est = local_dimension_estimate(sp, m, 0, np.array([1.0, 0.5, 0.25, 0.125]))
    assert est.upper_dim_est == pytest.approx(0.0)


def test_local_dimension_grid_validation(uniform_binary):
    sp, tree, m = uniform_binary
    with pytest.raises(ValueError):
        local_dimension_estimate(sp, m, 0, [1.0, 0.5, 0.25])  # too few
    with pytest.raises(ValueError):
        local_dimension_estimate(sp, m, 0, [0.25, 0.5, 1.0, 2.0])  # increasing


def test_dimension_bound_boundary_value():
    for M in (1, 3, 9):
        for r in (1 / 7, 1 / 5):
            expected = math.log(M + 1) / math.log(1 / r)
            assert dimension_bound(M, 1 / (M + 1), r) == pytest.approx(
                expected, abs=1e-12)


def test_dimension_bound_anchor():
    # independent recomputation of the entropy quotient
    M, p, r = 1, 0.25, 1 / 7
    expected = (M * p * math.log(p) + (1 - M * p) * math.log(1 - M * p)) \
        / math.log(r)
    assert dimension_bound(M, p, r) == pytest.approx(expected, abs=1e-12)
    assert dimension_bound(M, p, r) == pytest.approx(0.28899, abs=1e-4)


def test_dimension_bound_vanishes():
    assert dimension_bound(3, 1e-8, 1 / 7) < 1e-6


def test_dimension_bound_monotone_in_p():
    ps = np.linspace(1e-4, 0.25, 40)
    vals = [dimension_bound(3, p, 1 / 7) for p in ps]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_dimension_bound_preconditions():
    with pytest.raises(ValueError):
        dimension_bound(3, 0.5, 1 / 7)
    with pytest.raises(ValueError):
        dimension_bound(3, 0.1, 1.5)


def test_dimension_chain_uniform(uniform_binary):
    sp, tree, m = uniform_binary
    rep = check_dimension_chain(tree, m, sp, [0, 5, 100])
    for e in rep.entries:
        for key in ("quot_below", "quot_above", "lower_dim", "upper_dim"):
            assert e[key] == pytest.approx(1.0, abs=0.1)
    assert rep.fraction_ok == 1.0


def test_dimension_chain_needs_straddle(uniform_binary):
    sp, tree, m = uniform_binary
    with pytest.raises(ValueError):
        check_dimension_chain(tree, m, sp, [0], q_grid=(1.1, 1.2))


def test_mass_weighted_sampling_deterministic(uniform_binary):
    sp, tree, m = uniform_binary
    a = sample_points_by_mass(m, 20, seed=4)
    b = sample_points_by_mass(m, 20, seed=4)
    assert np.array_equal(a, b)


def test_intersection_weight_variant(uniform_binary):
    sp, tree, m = uniform_binary
    k = tree.k_max - 1
    full = lq_sum(tree, m, sp, 0, sp.diameter, k, 1.0)
    inter = lq_sum(tree, m, sp, 0, sp.diameter, k, 1.0, intersection_weights=True)
    assert inter == pytest.approx(full)  # whole space: intersections are cubes
