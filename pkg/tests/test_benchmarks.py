import numpy as np
import pytest

import oracles
from evogrid.benchmarks import evaluate, evaluate_batch, make_problem, registry, spec

SYMMETRIC = (1, 2, 7, 10, 20, 25, 26)
UNKNOWN_OPTIMUM = {9, 21, 24, 27, 29, 30}
FIXED_DIM = {11, 12, 13}
MIN_DIM_2 = {5, 11, 12, 13, 14, 15, 18, 19, 21, 22, 23, 30}


def _random_points(sp, count, rng):
    lo, hi = sp.space.lower, sp.space.upper
    if sp.id == 24:
        # keep clear of the box edges where the logarithms blow up
        lo, hi = lo + 1e-3, hi - 1e-3
    return lo + (hi - lo) * rng.random((count, sp.space.dim))


class TestRegistry:
    def test_thirty_functions(self):
        specs = registry()
        assert [s.id for s in specs] == list(range(1, 31))
        assert len({s.name for s in specs}) == 30

    def test_default_dimensions(self):
        for s in registry():
            assert s.default_dim == (2 if s.id in FIXED_DIM else 30)
            assert s.space.dim == s.default_dim

    def test_flags(self):
        for s in registry():
            assert s.fixed_dim == (s.id in FIXED_DIM)
            assert s.exclusive_bounds == (s.id == 24)
            assert (s.known_optimum is None) == (s.id in UNKNOWN_OPTIMUM)
            assert s.min_dim == (2 if s.id in MIN_DIM_2 else 1)

    def test_selected_boxes(self):
        assert spec(1).space.lower.tolist() == [-100.0] * 30
        assert spec(5).space.lower.tolist() == [-29.0] * 30
        assert spec(5).space.upper.tolist() == [31.0] * 30
        assert spec(23).space.upper.tolist() == [900.0] * 30
        assert spec(24).space.lower.tolist() == [2.0] * 30
        assert spec(28).space.upper.tolist() == [180.0] * 30
        s11 = spec(11)
        assert s11.space.lower.tolist() == [-4.91017, -5.7126]
        assert s11.space.upper.tolist() == [5.0893, 4.2874]

    def test_dim_overrides(self):
        s = spec(1, 5)
        assert s.space.dim == 5
        assert s.known_optimum is None  # optimum stated at dim 30 only
        assert spec(1, 30).known_optimum == 0.0
        assert spec(23, 10).space.upper.tolist() == [100.0] * 10

    def test_invalid_requests(self):
        with pytest.raises(ValueError):
            spec(0)
        with pytest.raises(ValueError):
            spec(31)
        with pytest.raises(ValueError):
            spec(11, 3)  # fixed-dimension function
        with pytest.raises(ValueError):
            spec(5, 1)  # below minimum dimension


class TestAgainstScalarOracles:
    @pytest.mark.parametrize("fid", range(1, 31))
    def test_default_dimension(self, fid):
        rng = np.random.default_rng(1000 + fid)
        sp = spec(fid)
        pts = _random_points(sp, 100, rng)
        got = sp.fn(pts)
        for row, g in zip(pts, got):
            want = oracles.ALL[fid](list(row))
            assert abs(g - want) <= 1e-10 * max(1.0, abs(want))

    @pytest.mark.parametrize("fid", sorted(set(range(1, 31)) - FIXED_DIM))
    def test_other_dimensions(self, fid):
        rng = np.random.default_rng(2000 + fid)
        for dim in (2, 7) if fid in MIN_DIM_2 else (1, 7):
            sp = spec(fid, dim)
            pts = _random_points(sp, 20, rng)
            got = sp.fn(pts)
            for row, g in zip(pts, got):
                want = oracles.ALL[fid](list(row))
                assert abs(g - want) <= 1e-10 * max(1.0, abs(want))


class TestKnownValues:
    def test_zero_at_origin(self):
        for fid in (1, 2, 3, 4, 6, 7, 8, 10, 16, 17, 20, 26):
            assert evaluate(fid, np.zeros(30)) == pytest.approx(0.0, abs=1e-12)

    def test_minimum_at_ones(self):
        assert evaluate(5, np.ones(30)) == pytest.approx(0.0, abs=1e-12)
        assert evaluate(15, np.ones(30)) == pytest.approx(0.0, abs=1e-12)
        assert evaluate(22, np.ones(30)) == pytest.approx(0.0, abs=1e-12)

    def test_shifted_minima(self):
        assert evaluate(14, np.full(30, -100.0)) == pytest.approx(0.0, abs=1e-12)
        # trid: x_i = i (n + 1 - i) gives the exact integer optimum
        i = np.arange(1, 31, dtype=np.float64)
        assert evaluate(23, i * (31.0 - i)) == -4930.0

    def test_two_dimensional_classics(self):
        assert evaluate(13, [0.0, -1.0]) == 3.0
        want = 10.0 / (8.0 * np.pi)
        assert evaluate(12, [np.pi, 2.25]) == pytest.approx(want, abs=1e-12)
        got = evaluate(11, [0.08984201368301331, -0.7126564032704135])
        assert got == pytest.approx(-1.031628453489877, abs=1e-9)

    def test_fixed_offsets(self):
        assert evaluate(19, np.zeros(30)) == -29.0
        assert evaluate(25, np.zeros(30)) == pytest.approx(0.9, abs=1e-12)
        assert evaluate(28, np.full(30, 120.0)) == pytest.approx(-3.5, abs=1e-12)

    def test_paviani_interior_beats_edges(self):
        mid = evaluate(24, np.full(30, 9.35))
        assert mid < evaluate(24, np.full(30, 5.0))
        assert np.isfinite(mid)


class TestNumericalBehaviour:
    @pytest.mark.parametrize("fid", range(1, 31))
    def test_finite_across_box(self, fid):
        rng = np.random.default_rng(3000 + fid)
        sp = spec(fid)
        pts = _random_points(sp, 1000, rng)
        with np.errstate(over="raise", invalid="raise"):
            vals = sp.fn(pts)
        assert np.isfinite(vals).all()
        assert vals.shape == (1000,)

    def test_paviani_boundary_is_infinite(self):
        sp = spec(24)
        x = np.full((1, 30), 5.0)
        x[0, 0] = 2.0
        with np.errstate(divide="ignore"):
            assert sp.fn(x)[0] == np.inf

    @pytest.mark.parametrize("fid", SYMMETRIC)
    def test_permutation_symmetry(self, fid):
        rng = np.random.default_rng(4000 + fid)
        sp = spec(fid)
        pts = _random_points(sp, 10, rng)
        shuffled = pts[:, rng.permutation(sp.space.dim)]
        assert np.allclose(sp.fn(pts), sp.fn(shuffled), rtol=1e-12, atol=0.0)


class TestEvaluationHelpers:
    def test_batch_validates_dimension(self):
        with pytest.raises(ValueError):
            evaluate_batch(1, np.zeros((3, 29)))

    def test_batch_validates_containment(self):
        x = np.zeros((1, 30))
        x[0, 0] = 100.5
        with pytest.raises(ValueError):
            evaluate_batch(1, x)

    def test_batch_accepts_lists(self):
        got = evaluate_batch(13, [[0.0, -1.0], [1.0, 1.0]])
        assert got.shape == (2,)
        assert got[0] == 3.0

    def test_scalar_rejects_batches(self):
        with pytest.raises(ValueError):
            evaluate(1, np.zeros((2, 30)))

    def test_make_problem(self):
        prob = make_problem(24)
        assert prob.name == "f24_paviani"
        assert prob.exclusive_bounds
        assert prob.known_optimum is None
        prob = make_problem(1, 5)
        assert prob.name == "f01_sphere"
        assert prob.space.dim == 5
        x = np.full((2, 5), 3.0)
        assert prob.batch(x).tolist() == [45.0, 45.0]
