import numpy as np
import pytest

from evogrid.core import Problem, RunConfig, SearchSpace
from evogrid.engine import (
    TRACE_HEADER,
    ConvergenceTrace,
    Engine,
    GenerationRecord,
    coordinate_quantiles,
    pool_distance,
    run,
)
from evogrid.operators import OPERATOR_ORDER
from helpers import sphere_problem


def _config(**kw):
    base = dict(
        init_size=60,
        partitions=8,
        pool_size=20,
        batch_base=6,
        max_generations=5,
        seed=1,
    )
    base.update(kw)
    return RunConfig(**base)


class TestCoordinateQuantiles:
    def test_nearest_rank_example(self):
        q = coordinate_quantiles(np.array([[1.0], [2.0], [3.0], [4.0]]), [0.5])
        assert q.shape == (1, 1)
        assert q[0, 0] == 2.0  # 2nd smallest of 4

    def test_extreme_levels(self):
        xs = np.array([[5.0], [1.0], [3.0]])
        q = coordinate_quantiles(xs, [0.05, 1.0])
        assert q[0].tolist() == [1.0, 5.0]

    def test_columns_sorted_independently(self):
        xs = np.array([[1.0, 9.0], [2.0, 8.0], [3.0, 7.0], [4.0, 6.0]])
        q = coordinate_quantiles(xs, [0.25, 0.75])
        assert q.tolist() == [[1.0, 3.0], [6.0, 8.0]]

    def test_single_row(self):
        q = coordinate_quantiles(np.array([[7.0, 2.0]]), [0.05, 0.5, 1.0])
        assert (q == [[7.0] * 3, [2.0] * 3]).all()


class TestPoolDistance:
    def test_max_abs_difference(self):
        qa = np.array([[1.0, 2.0], [3.0, 4.0]])
        qb = np.array([[1.5, 2.0], [3.0, 1.0]])
        assert pool_distance(qa, qb) == 3.0

    def test_zero_for_identical(self):
        qa = np.array([[1.0, 2.0]])
        assert pool_distance(qa, qa.copy()) == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            pool_distance(np.zeros((1, 2)), np.zeros((2, 1)))


class TestEngine:
    def test_pool_cannot_exceed_init(self):
        with pytest.raises(ValueError):
            Engine(sphere_problem(), _config(init_size=10, pool_size=11))

    def test_initialize_records_generation_zero(self):
        eng = Engine(sphere_problem(), _config())
        eng.initialize()
        rec = eng.trace.records[0]
        assert rec.generation == 0
        assert rec.evaluations == 60
        assert rec.pool_distance == np.inf
        assert rec.best_fitness == eng.pool.fs[0]
        assert len(eng.pool) == 20

    def test_step_accounting(self):
        eng = Engine(sphere_problem(), _config())
        eng.initialize()
        prev = eng.evaluations
        for gen in (1, 2, 3):
            rec = eng.step()
            assert rec.generation == gen
            spent = rec.evaluations - prev
            assert 31 * 6 <= spent <= 32 * 6
            assert sum(rec.operator_counts.values()) == spent
            assert set(rec.operator_counts) == set(OPERATOR_ORDER)
            assert len(eng.pool) == 20
            prev = rec.evaluations

    def test_elitism_never_regresses(self):
        eng = Engine(sphere_problem(), _config(max_generations=8))
        trace = eng.run()
        best = [r.best_fitness for r in trace.records]
        assert all(b <= a for a, b in zip(best, best[1:]))
        assert trace.best.f == best[-1]
        assert eng.problem.space.contains(trace.best.x[None, :]).all()

    def test_loop_limit_stop(self):
        trace = run(sphere_problem(), _config(max_generations=3))
        assert trace.stop_reason == "loop-limit"
        assert trace.generations == 3
        assert len(trace.records) == 4

    def test_zero_generation_budget(self):
        trace = run(sphere_problem(), _config(max_generations=0))
        assert trace.stop_reason == "loop-limit"
        assert trace.generations == 0
        assert trace.evaluations == 60
        assert len(trace.records) == 1
        assert trace.best is not None

    def test_huge_epsilon_stops_after_one_generation(self):
        trace = run(sphere_problem(), _config(epsilon=1e9))
        assert trace.stop_reason == "threshold"
        assert trace.generations == 1

    def test_same_seed_same_trace(self):
        cfg = _config(max_generations=4)
        t1 = run(sphere_problem(), cfg)
        t2 = run(sphere_problem(), cfg)
        assert t1.to_csv(0) == t2.to_csv(0)
        assert t1.best.f == t2.best.f
        assert np.array_equal(t1.best.x, t2.best.x)

    def test_different_seed_differs(self):
        t1 = run(sphere_problem(), _config(seed=1))
        t2 = run(sphere_problem(), _config(seed=2))
        assert t1.to_csv(0) != t2.to_csv(0)


class TestEvaluationGuards:
    def test_non_finite_fitness_names_input(self):
        space = SearchSpace.cube(2, -1.0, 1.0)
        bad = Problem("nanny", space, lambda x: np.full(x.shape[0], np.nan))
        eng = Engine(bad, _config())
        with pytest.raises(FloatingPointError) as err:
            eng.initialize()
        assert "nanny" in str(err.value)
        assert "non-finite" in str(err.value)

    def test_shape_mismatch_rejected(self):
        space = SearchSpace.cube(2, -1.0, 1.0)
        bad = Problem("toocolumnar", space, lambda x: np.zeros((x.shape[0], 1)))
        eng = Engine(bad, _config())
        with pytest.raises(ValueError):
            eng.initialize()

    def test_exclusive_bounds_clip_inward(self):
        space = SearchSpace.cube(2, 0.0, 1.0)
        seen = []

        def batch(x):
            seen.append(x.copy())
            return np.einsum("ij,ij->i", x, x)

        prob = Problem("openbox", space, batch, exclusive_bounds=True)
        eng = Engine(prob, _config())
        x = np.array([[0.0, 1.0], [0.5, 0.5]])
        eng._evaluate(x)
        got = seen[0]
        assert (got > 0.0).all() and (got < 1.0).all()
        assert got[0, 0] == np.nextafter(0.0, 1.0)
        assert got[0, 1] == np.nextafter(1.0, 0.0)
        assert (got[1] == 0.5).all()


class TestTraceCsv:
    def test_schema_and_float_repr(self):
        trace = ConvergenceTrace(
            records=[
                GenerationRecord(0, 60, 0.1, 0.5, float("inf")),
                GenerationRecord(1, 252, 0.035, 0.2, 0.25),
            ]
        )
        lines = trace.to_csv(7).splitlines()
        assert lines[0] == TRACE_HEADER
        assert lines[0] == "trial,generation,evaluations,best_fitness,pool_distance"
        assert lines[1] == "7,0,60,0.1,inf"
        assert lines[2] == "7,1,252,0.035,0.25"

    def test_round_trips_through_float(self):
        trace = run(sphere_problem(), _config(max_generations=2))
        for line in trace.to_csv(0).splitlines()[1:]:
            cells = line.split(",")
            rec = trace.records[int(cells[1])]
            assert float(cells[3]) == rec.best_fitness
            assert float(cells[4]) == rec.pool_distance

    def test_empty_trace_properties(self):
        trace = ConvergenceTrace()
        assert trace.generations == 0
        assert trace.evaluations == 0
        assert trace.to_csv(0) == TRACE_HEADER + "\n"
