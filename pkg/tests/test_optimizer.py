import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maoutage import scenarios
from maoutage.config import in_regions
from maoutage.optimizer import PgaConfig, multi_start, pga_run, project, random_layout
from maoutage.rate import sum_rate


class TestPgaConfig:
    def test_defaults(self):
        cfg = PgaConfig()
        assert (cfg.step_size, cfg.max_iters, cfg.conv_window, cfg.num_starts) == (0.015, 10_000, 50, 5)

    @pytest.mark.parametrize("field,value", [("step_size", 0.0), ("max_iters", 0), ("conv_tol", -1.0),
                                             ("armijo_c", 1.0), ("backtrack", 0.0), ("num_starts", 0)])
    def test_invalid(self, field, value):
        with pytest.raises(ValueError):
            PgaConfig(**{field: value})


class TestProject:
    def test_feasible_unchanged(self, downlink, layouts):
        assert np.array_equal(project(layouts[0], downlink.regions), layouts[0])

    def test_clamps_each_axis(self, downlink):
        t = np.array([[-1.0, 1.5, 3.0, 10.0, 6.2], [0.5, -2.0, 5.0, 0.5, 0.5]])
        out = project(t, downlink.regions)
        assert out[0, 0] == 0.0 and out[1, 1] == 0.0 and out[1, 2] == 1.0 and out[0, 3] == 5.5
        assert in_regions(out, downlink.regions)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(-50, 50), min_size=10, max_size=10))
    def test_idempotent(self, coords):
        regions = scenarios.downlink_config().regions
        once = project(np.reshape(coords, (2, 5)), regions)
        assert np.array_equal(project(once, regions), once)

    def test_bounds_pair(self, downlink, layouts):
        assert np.array_equal(project(layouts[1] + 9, downlink.bounds), project(layouts[1] + 9, downlink.regions))


class TestPgaRun:
    def test_trace_invariants(self, downlink, layouts):
        tr = pga_run(layouts[0], downlink, PgaConfig(max_iters=120), keep_layouts=True)
        assert len(tr.objective) == tr.iterations + 1 == len(tr.layouts)
        assert all(in_regions(t, downlink.regions) for t in tr.layouts)
        assert tr.final_objective == pytest.approx(sum_rate(tr.layout, downlink))

    def test_projects_infeasible_start(self, downlink):
        start = scenarios.CONVERGENCE_STARTS[0]
        tr = pga_run(start, downlink, PgaConfig(max_iters=3), keep_layouts=True)
        assert in_regions(tr.layouts[0], downlink.regions)

    def test_stationary_start_stops_quickly(self, downlink):
        tr = pga_run(scenarios.CONVERGENCE_STARTS[1], downlink, PgaConfig(max_iters=3000))
        again = pga_run(tr.layout, downlink, PgaConfig(max_iters=3000))
        assert again.converged and again.iterations <= 50
        assert np.allclose(again.layout, tr.layout, atol=1e-3)

    def test_line_search_monotone(self, downlink, layouts):
        tr = pga_run(layouts[2], downlink, PgaConfig(max_iters=200, line_search=True, step_size=0.5))
        assert np.all(np.diff(tr.objective) >= -1e-12)

    def test_reports_non_convergence(self, downlink, layouts):
        tr = pga_run(layouts[3], downlink, PgaConfig(max_iters=5))
        assert not tr.converged and tr.iterations == 5


class TestMultiStart:
    def test_deterministic(self, downlink):
        pga = PgaConfig(num_starts=2, max_iters=60)
        a, b = multi_start(downlink, pga, seed=4), multi_start(downlink, pga, seed=4)
        assert all(np.array_equal(x.objective, y.objective) for x, y in zip(a.traces, b.traces))

    def test_single_start(self, downlink):
        res = multi_start(downlink, PgaConfig(num_starts=1, max_iters=30), seed=0)
        assert len(res.traces) == 1 and res.best is res.traces[0]

    def test_best_dominates(self, downlink):
        res = multi_start(downlink, PgaConfig(num_starts=3, max_iters=80), seed=1)
        assert res.objective == max(tr.final_objective for tr in res.traces)

    def test_explicit_starts(self, downlink):
        starts = scenarios.CONVERGENCE_STARTS
        res = multi_start(downlink, PgaConfig(max_iters=40), starts=starts)
        assert [tr.start_index for tr in res.traces] == [0, 1, 2, 3]
        assert res.objective == max(tr.final_objective for tr in res.traces)

    def test_workers_do_not_change_result(self, downlink):
        pga = PgaConfig(num_starts=2, max_iters=40)
        serial = multi_start(downlink, pga, seed=2)
        pooled = multi_start(downlink, pga, seed=2, workers=2)
        assert np.array_equal(serial.layout, pooled.layout)

    def test_random_layout_feasible(self, downlink):
        gen = np.random.default_rng(0)
        assert all(in_regions(random_layout(downlink, gen), downlink.regions) for _ in range(50))
