import math

import numpy as np
import pytest
from pytest_cases import parametrize_with_cases

from convmax.Factory.RearrangementFactory import inclusion_constant
from convmax.Helper import DegenerateInputException, DomainException
from convmax.Model import Grid, KernelSpec, SampledFunction, TailThresholds, Verdict
from .test_020_rearrange_cases import (
    InclusionConstantCases,
    LorentzIndexCases,
    MarginCases,
    TailCases,
)


def indicator(grid: Grid, low: float, high: float, level: float = 1.0) -> SampledFunction:
    x = grid.axis()
    return SampledFunction(grid=grid, values=level * ((x >= low) & (x <= high)))


def test_distribution_function_of_indicator(grid, rearrangement):
    f = indicator(grid, -1.0, 1.0)
    measure = rearrangement.distribution_function(f, 0.5)

    assert measure == pytest.approx(2.0, abs=2 * grid.cell_measure)
    assert rearrangement.distribution_function(f, 1.0) == 0.0
    assert rearrangement.distribution_function(f, 7.0) == 0.0
    with pytest.raises(DomainException):
        rearrangement.distribution_function(f, -1.0)


def test_distribution_function_of_power(grid, kernels, rearrangement):
    f = kernels.materialize(KernelSpec.parse("power:q=2"), grid)

    assert rearrangement.distribution_function(f, 1.0) == pytest.approx(
        2.0, abs=2 * grid.cell_measure
    )


def test_distribution_function_is_nonincreasing(grid, kernels, rearrangement):
    f = kernels.materialize(KernelSpec.parse("gauss:sigma=1"), grid)
    levels = np.linspace(0.0, 1.2, 97)
    measures = [rearrangement.distribution_function(f, lam) for lam in levels]

    assert np.all(np.diff(measures) <= 0)


def test_decreasing_rearrangement_sorts(rearrangement):
    grid = Grid(dim=1, half_width=2.0, points_per_axis=8)
    f = SampledFunction(grid=grid, values=[0, 0, 3, 1, -2, 0, 0, 0])
    step = rearrangement.decreasing_rearrangement(f)

    assert step.levels.tolist() == [3.0, 2.0, 1.0]
    assert step.breakpoints.tolist() == [0.0, 0.5, 1.0, 1.5]


def test_decreasing_rearrangement_coalesces_levels(grid, rearrangement):
    f = indicator(grid, -1.0, 1.0)
    step = rearrangement.decreasing_rearrangement(f)

    assert step.levels.tolist() == [1.0]
    assert step.total_measure == pytest.approx(2.0, abs=2 * grid.cell_measure)


def test_decreasing_rearrangement_of_zero(grid, rearrangement):
    with pytest.raises(DegenerateInputException):
        rearrangement.decreasing_rearrangement(
            SampledFunction(grid=grid, values=np.zeros(grid.size))
        )


def test_decreasing_rearrangement_of_gaussian(grid, kernels, rearrangement):
    f = kernels.materialize(KernelSpec.parse("gauss:sigma=1"), grid)
    t = np.linspace(0.5, 4.0, 36)
    expected = np.exp(-((t / 2.0) ** 2) / 2.0)

    assert np.allclose(rearrangement.step_values(f, t), expected, rtol=0, atol=1e-2)


def test_equimeasurability(grid, kernels, rearrangement):
    f = kernels.materialize(KernelSpec.parse("power_truncated:q=1.5,R=3"), grid)
    step = rearrangement.decreasing_rearrangement(f)

    for lam in np.geomspace(1e-3, 1e3, 61):
        assert rearrangement.distribution_function(f, lam) == step.measure_above(lam)


def test_weak_norm_of_indicator(grid, rearrangement):
    f = indicator(grid, -1.0, 1.0)
    measure = rearrangement.distribution_function(f, 0.0)

    assert rearrangement.weak_norm(f, 2.0) == pytest.approx(math.sqrt(measure), rel=1e-12)
    assert rearrangement.weak_norm(f, 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-2)
    assert rearrangement.weak_norm(f.scaled(-3.0), 2.0) == pytest.approx(
        3.0 * math.sqrt(measure), rel=1e-12
    )


@pytest.mark.parametrize("q", [4.0 / 3.0, 2.0, 3.0])
def test_weak_norm_of_power(grid, kernels, rearrangement, q):
    f = kernels.materialize(KernelSpec.parse("power:q=%r" % q), grid)

    # the origin cell average dominates the supremum
    assert rearrangement.weak_norm(f, q) == pytest.approx(
        2.0 ** (1.0 / q) * q / (q - 1.0), rel=1e-9
    )

    t = np.geomspace(100.0 * grid.cell_measure, grid.box_measure / 10.0, 40)
    plateau = t ** (1.0 / q) * rearrangement.step_values(f, t, left=True)
    assert np.allclose(plateau, 2.0 ** (1.0 / q), rtol=2e-2)


def test_lorentz_norm_of_unit_indicator(rearrangement):
    grid = Grid(dim=1, half_width=4.0, points_per_axis=1024)
    f = indicator(grid, 0.0, 1.0 - grid.spacing / 2.0)

    for q, s in [(2.0, 2.0), (4.0 / 3.0, 2.0), (3.0, 1.0)]:
        assert rearrangement.lorentz_norm(f, q, s) == pytest.approx(
            (q / s) ** (1.0 / s), rel=1e-12
        )


def test_lorentz_norm_of_two_level_step(rearrangement):
    grid = Grid(dim=1, half_width=4.0, points_per_axis=1024)
    values = np.zeros(grid.size)
    values[:128] = 2.0
    values[128:384] = 1.0
    f = SampledFunction(grid=grid, values=values)

    assert rearrangement.lorentz_norm(f, 2.0, 2.0) == pytest.approx(math.sqrt(6.0), rel=1e-12)


@parametrize_with_cases("indices", cases=LorentzIndexCases, glob="*equal_indices*")
def test_lorentz_norm_equals_lp_norm(grid, kernels, rearrangement, indices):
    q, s = indices
    for text in ("gauss:sigma=1", "power_capped:q=1.5,M=3", "indicator:radius=0.5"):
        f = kernels.materialize(KernelSpec.parse(text), grid)
        assert rearrangement.lorentz_norm(f, q, s) == pytest.approx(f.lp_norm(q), rel=1e-10)


@parametrize_with_cases("indices", cases=LorentzIndexCases, glob="*_valid")
def test_lorentz_norm_domain(grid, rearrangement, indices):
    q, s = indices
    f = indicator(grid, -1.0, 1.0)

    assert rearrangement.lorentz_norm(f, q, s) > 0
    assert rearrangement.lorentz_norm(f.scaled(0.0), q, s) == 0.0
    with pytest.raises(DomainException):
        rearrangement.lorentz_norm(f, q, math.inf)
    with pytest.raises(DomainException):
        rearrangement.lorentz_norm(f, 0.0, s)


def test_symmetric_decreasing_recentres_indicator(rearrangement):
    grid = Grid(dim=1, half_width=4.0, points_per_axis=1024)
    f = indicator(grid, 1.0, 3.0)
    g = rearrangement.symmetric_decreasing(f)

    assert np.array_equal(g.values, indicator(grid, -1.0, 1.0).values)


def test_symmetric_decreasing_is_idempotent(grid, kernels, rearrangement):
    f = kernels.materialize(KernelSpec.parse("gauss:sigma=1"), grid)

    assert np.array_equal(rearrangement.symmetric_decreasing(f).values, f.values)


def test_symmetric_decreasing_in_2d(grid_2d, rearrangement):
    rng = np.random.default_rng(7)
    f = SampledFunction(grid=grid_2d, values=rng.standard_normal(grid_2d.shape))
    g = rearrangement.symmetric_decreasing(f)

    assert np.array_equal(np.sort(g.values.ravel()), np.sort(np.abs(f.values).ravel()))
    for p in (1.0, 2.0, 4.0):
        assert g.lp_norm(p) == pytest.approx(f.lp_norm(p), rel=1e-10)

    radius = grid_2d.index_radius_squared().ravel()
    order = np.lexsort((np.arange(radius.size), radius))
    assert np.all(np.diff(g.values.ravel()[order]) <= 0)


@parametrize_with_cases("input", cases=TailCases)
def test_tail_diagnostics(kernels, rearrangement, input):
    text, half_width, n, q, verdict = input
    grid = Grid(dim=1, half_width=half_width, points_per_axis=n)
    f = kernels.materialize(KernelSpec.parse(text), grid)
    diagnostics = rearrangement.tail_diagnostics(f, q)

    assert diagnostics.verdict == Verdict(verdict)
    assert diagnostics.weak_norm == pytest.approx(rearrangement.weak_norm(f, q))
    assert len(diagnostics.small_t_tail) == 32
    assert len(diagnostics.large_t_tail) == 32
    assert diagnostics.small_t_tail[0][0] > diagnostics.small_t_tail[-1][0]
    assert diagnostics.large_t_tail[0][0] < diagnostics.large_t_tail[-1][0]


def test_tails_span_one_decade(grid, kernels, rearrangement):
    f = kernels.materialize(KernelSpec.parse("gauss:sigma=1"), grid)
    coarse = rearrangement.tail_diagnostics(f, 2.0, TailThresholds(points_per_decade=16))
    short = rearrangement.tail_diagnostics(f, 2.0, TailThresholds(tail_points=8))

    assert len(coarse.large_t_tail) == 16
    assert 5.0 < coarse.large_t_tail[-1][0] / coarse.large_t_tail[0][0] < 10.0
    assert len(short.small_t_tail) == 8


def test_tail_diagnostics_of_zero(grid, rearrangement):
    f = SampledFunction(grid=grid, values=np.zeros(grid.size))
    diagnostics = rearrangement.tail_diagnostics(f, 2.0)

    assert diagnostics.verdict == Verdict.MEMBER
    assert diagnostics.small_t_tail == []


@parametrize_with_cases("input", cases=InclusionConstantCases)
def test_inclusion_constant(input):
    q, s, expected = input

    assert inclusion_constant(q, s) == pytest.approx(expected, abs=1e-5)


@parametrize_with_cases("input", cases=MarginCases)
def test_inclusion_margin(grid, kernels, rearrangement, input):
    text, q, s, eps = input
    f = kernels.materialize(KernelSpec.parse(text), grid)
    t_eps = rearrangement.truncation_point(f, q, s, eps)

    assert t_eps > 0
    assert rearrangement.tail_integral(f, q, s, t_eps) == pytest.approx(eps, rel=1e-9)
    for factor in (2.0, 3.0, 5.0, 10.0):
        assert rearrangement.inclusion_margin(f, q, s, factor * t_eps, eps) <= 1e-12
    with pytest.raises(DomainException):
        rearrangement.inclusion_margin(f, q, s, t_eps, eps)


@parametrize_with_cases("input", cases=MarginCases)
def test_small_t_inclusion_margin(grid, kernels, rearrangement, input):
    text, q, s, eps = input
    f = kernels.materialize(KernelSpec.parse(text), grid)
    head = rearrangement.head_point(f, q, s, eps)

    assert 0 < head < math.inf
    for factor in (0.25, 0.5, 1.0):
        assert rearrangement.small_t_inclusion_margin(f, q, s, factor * head, eps) <= 1e-12
    with pytest.raises(DomainException):
        rearrangement.small_t_inclusion_margin(f, q, s, 2.0 * head, eps)


def test_rearrangement_table(grid, kernels, rearrangement):
    f = kernels.materialize(KernelSpec.parse("gauss:sigma=1"), grid)
    table = rearrangement.rearrangement_table(f, 2.0)

    assert list(table) == ["t", "f_star", "t_pow_q_times_f_star"]
    assert np.all(np.diff(table["f_star"]) < 0)
    assert table["t"][-1] == pytest.approx(grid.box_measure)
