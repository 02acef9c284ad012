"""Initial field sampling: determinism, laws, patterns, value modes."""

import math

import numpy as np
import pytest

from richflow import (
    EXACT,
    REAL,
    DistributionSpec,
    MassOverflowError,
    SpecError,
    build_box,
    build_torus,
    make_field,
    pattern_field,
    sample_field,
)

G64 = build_torus(2, [64, 64])
C6 = build_torus(1, [6])


def test_constant_field():
    f = sample_field(C6, DistributionSpec("constant", value=1), seed=3)
    assert f.mode == EXACT
    assert f.values.dtype == np.int64
    assert (f.values == 1).all()
    assert f.step == 0 and f.total == 6


def test_constant_real_mode():
    f = sample_field(C6, DistributionSpec("constant", value=1.5), seed=3)
    assert f.mode == REAL
    assert (f.values == 1.5).all()


def test_sampling_is_deterministic():
    spec = DistributionSpec("uniform_real", low=0.0, high=1.0)
    a = sample_field(G64, spec, seed=42)
    b = sample_field(G64, spec, seed=42)
    assert a.values.tobytes() == b.values.tobytes()
    c = sample_field(G64, spec, seed=43)
    assert a.values.tobytes() != c.values.tobytes()


def test_uniform_mean_concentrates():
    # law of large numbers at known variance: 3 sigma of the empirical mean
    spec = DistributionSpec("uniform_real", low=0.0, high=1.0)
    sigma = (1.0 / math.sqrt(12.0)) / 64.0
    for seed in (0, 1, 2, 3, 4):
        f = sample_field(G64, spec, seed)
        assert abs(f.values.mean() - 0.5) < 3 * sigma


def test_exchangeable_in_law():
    # i.i.d. per-position means agree across positions over many seeds
    g = build_torus(1, [32])
    spec = DistributionSpec("uniform_real", low=0.0, high=1.0)
    acc = np.zeros(32)
    n_seeds = 400
    for seed in range(n_seeds):
        acc += sample_field(g, spec, seed).values
    means = acc / n_seeds
    se = (1.0 / math.sqrt(12.0)) / math.sqrt(n_seeds)
    assert np.abs(means - 0.5).max() < 4.5 * se


def test_uniform_int_bounds_and_dtype():
    spec = DistributionSpec("uniform_int", low=0, high=9)
    f = sample_field(G64, spec, seed=5)
    assert f.mode == EXACT and f.values.dtype == np.int64
    assert f.values.min() >= 0 and f.values.max() <= 9
    counts = np.bincount(f.values, minlength=10)
    assert (counts > 0).all()  # 4096 draws hit all ten values


def test_geometric_law():
    spec = DistributionSpec("geometric", p=0.5)
    f = sample_field(G64, spec, seed=9)
    v = f.values
    assert f.mode == EXACT and v.min() >= 1
    assert abs(v.mean() - 2.0) < 0.15           # mean 1/p, sd/sqrt(n) ~ 0.022
    p1 = (v == 1).mean()
    assert abs(p1 - 0.5) < 0.03


def test_exponential_and_pareto_supports():
    f = sample_field(G64, DistributionSpec("exponential", rate=2.0), seed=1)
    assert f.mode == REAL and f.values.min() >= 0
    assert abs(f.values.mean() - 0.5) < 0.05
    f2 = sample_field(G64, DistributionSpec("pareto", shape=3.0, scale=2.0), seed=1)
    assert f2.values.min() >= 2.0
    assert np.isfinite(f2.values).all()


def test_two_point_law():
    spec = DistributionSpec("two_point", v1=1, p=0.25, v2=3)
    f = sample_field(G64, spec, seed=8)
    assert f.mode == EXACT
    assert set(np.unique(f.values)) == {1, 3}
    assert abs((f.values == 1).mean() - 0.25) < 0.03


def test_two_point_infinite_real_mode():
    spec = DistributionSpec("two_point", v1=1.0, p=0.5, v2=math.inf)
    f = sample_field(C6, spec, seed=0)
    assert f.mode == REAL
    assert np.isinf(f.values).any() or True  # inf permitted, not guaranteed per seed


def test_exact_mode_rejects_non_integer_laws():
    with pytest.raises(SpecError):
        DistributionSpec("uniform_real", low=0.0, high=1.0, mode=EXACT).resolved()
    with pytest.raises(SpecError):
        DistributionSpec("two_point", v1=1, p=0.5, v2=math.inf, mode=EXACT).resolved()
    with pytest.raises(SpecError):
        DistributionSpec("constant", value=2.5, mode=EXACT).resolved()


@pytest.mark.parametrize("spec", [
    DistributionSpec("uniform_real", low=2.0, high=1.0),
    DistributionSpec("uniform_int", low=3, high=2),
    DistributionSpec("uniform_int", low=-1, high=2),
    DistributionSpec("exponential", rate=0.0),
    DistributionSpec("pareto", shape=-1.0, scale=1.0),
    DistributionSpec("pareto", shape=1.0, scale=math.inf),
    DistributionSpec("geometric", p=0.0),
    DistributionSpec("geometric", p=1.0),
    DistributionSpec("two_point", v1=1, p=1.5, v2=2),
    DistributionSpec("constant", value=-1),
    DistributionSpec("constant"),
    DistributionSpec("nosuch", value=1),
    DistributionSpec("pattern", pattern=()),
])
def test_invalid_specs_rejected(spec):
    with pytest.raises(SpecError):
        spec.resolved()


def test_pattern_tiles():
    f = pattern_field(C6, [1, 0], random_shift=False, seed=0)
    assert f.values.tolist() == [1, 0, 1, 0, 1, 0]
    assert f.mode == EXACT


def test_pattern_shift_cosets():
    hits = {(1, 0, 1, 0, 1, 0): 0, (0, 1, 0, 1, 0, 1): 0}
    n_seeds = 400
    for seed in range(n_seeds):
        f = pattern_field(C6, [1, 0], random_shift=True, seed=seed)
        hits[tuple(f.values.tolist())] += 1
    # two cosets, each probability 1/2; binomial 3 sigma ~ 0.075
    assert abs(hits[(1, 0, 1, 0, 1, 0)] / n_seeds - 0.5) < 0.075


def test_pattern_rejects_period_mismatch():
    with pytest.raises(SpecError, match="divide"):
        pattern_field(build_torus(1, [7]), [1, 2, 3], random_shift=False, seed=0)


def test_pattern_rejects_non_torus():
    with pytest.raises(SpecError):
        pattern_field(build_box(1, [6]), [1, 0], random_shift=False, seed=0)


def test_pattern_2d_shape():
    g = build_torus(2, [4, 4])
    f = pattern_field(g, [1, 0, 0, 1], random_shift=False, seed=0, pattern_shape=(2, 2))
    grid = f.values.reshape(4, 4)
    assert grid[0].tolist() == [1, 0, 1, 0]
    assert grid[1].tolist() == [0, 1, 0, 1]
    with pytest.raises(SpecError, match="shape"):
        pattern_field(g, [1, 0], random_shift=False, seed=0)


def test_pattern_via_spec():
    spec = DistributionSpec("pattern", pattern=(1, 3, 2, 0, 0))
    f = sample_field(build_torus(1, [5]), spec, seed=0)
    assert f.values.tolist() == [1, 3, 2, 0, 0]


def test_field_validation():
    g = build_torus(1, [4])
    with pytest.raises(SpecError):
        make_field(g, [1, 2, 3], EXACT)          # wrong length
    with pytest.raises(SpecError):
        make_field(g, [1, -2, 3, 4], EXACT)      # negative
    with pytest.raises(SpecError):
        make_field(g, [1.5, 0, 0, 0], EXACT)     # non-integer in exact mode
    with pytest.raises(SpecError):
        make_field(g, [1.0, float("nan"), 0.0, 0.0], REAL)


def test_exact_total_mass_overflow_detected():
    g = build_torus(1, [8])
    with pytest.raises(MassOverflowError):
        sample_field(g, DistributionSpec("constant", value=2**62), seed=0)
    # per-vertex values that fit but sum over the accumulator bound
    with pytest.raises(MassOverflowError):
        make_field(g, [2**61] * 8, EXACT)
