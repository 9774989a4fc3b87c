"""Discrete snake simulator: construction laws, re-rooting, distance grids."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadmaps.errors import EmptySample, RejectionBudgetExceeded
from quadmaps.snake import (
    SIGMA,
    SIGMA_SQUARED,
    SnakePath,
    condition_min,
    contour_scale,
    distance_grid,
    exponent_fit,
    kappa,
    ks_statistic,
    label_scale_nice,
    label_scale_plain,
    moment,
    reroot,
    sample_snake,
)


class TestConstants:
    def test_contour_constant_is_half_sigma(self):
        assert abs(12 ** -0.25 - SIGMA / 2) < 1e-12
        assert abs(SIGMA_SQUARED - 2 / math.sqrt(3)) < 1e-15

    def test_label_constant_identity(self):
        lhs = (2.0 / 3.0) ** -0.5 * (SIGMA / 2.0) ** 0.5
        assert abs(lhs - (3.0 / 4.0) ** 0.375) < 1e-12

    def test_kappa_inverts_the_nice_label_scale(self):
        for n in (10, 1000, 12345):
            assert abs(kappa(n) * label_scale_nice(n) - 1.0) < 1e-12

    def test_scale_values(self):
        assert abs(contour_scale(1) - 12 ** -0.25) < 1e-15
        assert abs(label_scale_plain(1) - (9 / 8) ** 0.25) < 1e-15
        assert label_scale_plain(16) > label_scale_nice(16)


class TestRawSnake:
    def test_endpoints_and_positivity(self, rng):
        for m in (2, 10, 256):
            p = sample_snake(m, rng)
            assert p.excursion[0] == p.excursion[-1] == 0
            assert p.label[0] == 0 and abs(p.label[-1]) < 1e-12
            assert p.excursion.min() >= 0

    def test_excursion_steps(self, rng):
        p = sample_snake(64, rng)
        steps = np.diff(p.excursion) * math.sqrt(64)
        assert set(np.round(steps).astype(int)) <= {-1, 1}

    def test_m_must_be_even(self, rng):
        with pytest.raises(ValueError):
            sample_snake(7, rng)
        with pytest.raises(ValueError):
            sample_snake(0, rng)

    def test_head_is_centered(self, rng):
        m = 512
        vals = np.array([sample_snake(m, rng).label[m // 2] for _ in range(4000)])
        assert abs(vals.mean()) < 3 * vals.std() / math.sqrt(len(vals))

    def test_head_variance_tracks_excursion(self, rng):
        # E[z_s^2 | e] = e_s exactly on the grid, so the unconditional
        # variance of z at mid-path must match the mean excursion height
        m = 1024
        z2, e = [], []
        for _ in range(4000):
            p = sample_snake(m, rng)
            z2.append(p.label[m // 2] ** 2)
            e.append(p.excursion[m // 2])
        assert abs(np.mean(z2) - np.mean(e)) < 0.05 * np.mean(e)

    def test_tree_distance_is_head_increment_variance(self, rng):
        # sharper, conditional form on a fixed pair of grid times
        m = 256
        s, t = 64, 192
        diffs, dists = [], []
        for _ in range(4000):
            p = sample_snake(m, rng)
            diffs.append((p.label[s] - p.label[t]) ** 2)
            e = p.excursion
            dists.append(e[s] + e[t] - 2 * e[s:t + 1].min())
        assert abs(np.mean(diffs) - np.mean(dists)) < 0.06 * np.mean(dists)


class TestConditioning:
    def test_output_respects_floor(self, rng):
        for _ in range(40):
            p = condition_min(64, 0.7, rng)
            assert p.label.min() > -0.7
            assert p.kind == "conditioned"

    def test_acceptance_monotone_in_r(self, rng):
        m = 128
        raw_minima = np.array(
            [sample_snake(m, rng).label.min() for _ in range(4000)]
        )
        rates = [np.mean(raw_minima > -r) for r in (0.5, 1.0, 2.0)]
        assert rates[0] < rates[1] < rates[2]

    def test_large_floor_matches_unconditioned(self, rng):
        m = 128
        a = np.array([condition_min(m, 4.0, rng).label[m // 2]
                      for _ in range(20000)])
        b = np.array([sample_snake(m, rng).label[m // 2]
                      for _ in range(20000)])
        assert ks_statistic(a, b) < 0.02

    def test_budget_error(self, rng):
        with pytest.raises(RejectionBudgetExceeded):
            condition_min(4096, 1e-9, rng, max_rejections=5)


class TestReroot:
    def test_minimum_moves_to_the_origin(self, rng):
        for _ in range(50):
            q = reroot(sample_snake(128, rng))
            assert q.label[0] == 0
            assert q.label.min() >= 0
            assert abs(q.excursion[0]) < 1e-12
            assert abs(q.excursion[-1]) < 1e-12
            assert abs(q.label[-1] - q.label[0]) < 1e-12

    def test_fixed_point_when_minimum_is_at_zero(self):
        e = np.array([0.0, 0.5, 1.0, 0.5, 0.0])
        z = np.array([0.0, 0.4, 0.1, 0.3, 0.0])
        # head minimum over indices 0..3 sits at index 0
        p = SnakePath(4, e, z, "raw")
        q = reroot(p)
        assert np.allclose(q.label, z)
        assert np.allclose(q.excursion, e)

    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_invariants_hold_for_any_seed(self, seed):
        p = sample_snake(64, np.random.default_rng(seed))
        q = reroot(p)
        q.validate()
        s = int(np.argmin(p.label[:64]))
        assert q.label[(64 - s) % 64] == p.label[0] - p.label[s]


class TestDistanceGrid:
    def test_zero_diagonal_and_one_step_bound(self, rng):
        q = reroot(sample_snake(256, rng))
        grid = distance_grid(q, [0, 17, 64, 128, 200, 256])
        assert np.allclose(np.diag(grid.direct), 0)
        assert (grid.closure <= grid.direct + 1e-12).all()

    def test_closure_from_origin_equals_head(self, rng):
        for _ in range(25):
            q = reroot(sample_snake(128, rng))
            times = np.unique(np.concatenate([[0], rng.integers(0, 129, 6)]))
            grid = distance_grid(q, times)
            assert np.allclose(grid.closure[0], q.label[grid.times])

    def test_triangle_inequality(self, rng):
        q = reroot(sample_snake(128, rng))
        g = distance_grid(q, list(range(0, 129, 16)))
        c = g.closure
        k = len(g.times)
        for a in range(k):
            for b in range(k):
                assert (c[a, b] <= c[a] + c[:, b] + 1e-9).all()

    def test_requires_rerooted_path(self, rng):
        with pytest.raises(ValueError):
            distance_grid(sample_snake(16, rng), [0, 8])


class TestRescaledTreePair:
    def test_nice_tree_coding_rescales_into_the_snake_domain(self, rng):
        # the rescaled height/label pair of a pendant-free sample is a valid
        # raw path for the simulator: nonnegative labels vanishing at both
        # ends, exactly, for every sample
        from quadmaps.sampling import sample_nice_tree
        from quadmaps.trees import encode

        for _ in range(40):
            n = int(rng.integers(2, 120))
            lt = sample_nice_tree(n, rng=rng)
            cc = encode(lt)
            heights = cc.heights * contour_scale(n)
            labels = cc.label_seq * label_scale_nice(n)
            assert labels[0] == 0 and labels[-1] == 0
            assert labels.min() >= 0
            assert heights[0] == 0 and heights[-1] == 0


class TestComparators:
    def test_ks_identical_samples(self):
        assert ks_statistic([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0

    def test_ks_disjoint_samples(self):
        assert ks_statistic([0.0, 1.0], [5.0, 6.0]) == 1.0

    def test_exponent_fit_exact_power_law(self):
        pts = [(n, 3.0 * n ** 0.25) for n in (250, 500, 1000, 2000)]
        assert abs(exponent_fit(pts) - 0.25) < 1e-9

    def test_moment(self):
        assert moment([1, 2, 3], 1) == 2.0
        assert moment([1, 2, 3], 2) == pytest.approx(14 / 3)

    def test_empty_sample_errors(self):
        with pytest.raises(EmptySample):
            ks_statistic([], [1.0])
        with pytest.raises(EmptySample):
            moment([], 1)
        with pytest.raises(EmptySample):
            exponent_fit([])
