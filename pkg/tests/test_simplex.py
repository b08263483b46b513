import numpy as np
import pytest

from models import InfeasibleError, UnboundedError
from simplex import SimplexSolver, linprog_min


class TestSimplexSolver:
    """Test suite for the two-phase simplex"""

    def test_inequality_program(self):
        """Test a textbook maximization written as a minimization"""
        result = linprog_min([-1.0, -1.0], A_ub=[[1.0, 2.0], [3.0, 1.0]], b_ub=[4.0, 6.0])
        assert np.allclose(result.x, [1.6, 1.2])
        assert result.objective == pytest.approx(-2.8)

    def test_equality_and_lower_bound(self):
        """Test an equality row combined with a flipped inequality"""
        # min 2x + y  s.t.  x + y = 1,  x >= 0.3
        result = linprog_min([2.0, 1.0], A_ub=[[-1.0, 0.0]], b_ub=[-0.3], A_eq=[[1.0, 1.0]], b_eq=[1.0])
        assert np.allclose(result.x, [0.3, 0.7])
        assert result.objective == pytest.approx(1.3)

    def test_redundant_equality(self):
        """Test a repeated equality row is dropped after phase one"""
        result = linprog_min([1.0, 0.0], A_eq=[[1.0, 1.0], [2.0, 2.0]], b_eq=[1.0, 2.0])
        assert np.allclose(result.x, [0.0, 1.0])

    def test_infeasible(self):
        """Test contradictory constraints raise InfeasibleError"""
        with pytest.raises(InfeasibleError):
            linprog_min([1.0, 1.0], A_ub=[[1.0, 1.0]], b_ub=[0.5], A_eq=[[1.0, 1.0]], b_eq=[1.0])

    def test_unbounded(self):
        """Test an open direction raises UnboundedError"""
        with pytest.raises(UnboundedError):
            linprog_min([-1.0, 0.0], A_ub=[[1.0, -1.0]], b_ub=[1.0])

    def test_shape_mismatch(self):
        """Test a constraint block of the wrong width is rejected"""
        with pytest.raises(ValueError):
            linprog_min([1.0, 1.0], A_ub=[[1.0, 1.0, 1.0]], b_ub=[1.0])

    def test_deterministic(self):
        """Test the same program gives the same pivots and solution"""
        solver = SimplexSolver()
        args = ([0, 0, 1.0], [[1.0, -2.0, -1.0], [-1.0, 2.0, -1.0]], [0.0, 0.0], [[1.0, 1.0, 0.0]], [1.0])
        first = solver.minimize(*args)
        second = solver.minimize(*args)
        assert first.iterations == second.iterations
        assert np.array_equal(first.x, second.x)
        # |w1 - 2 w2| <= xi with w1 + w2 = 1 is met exactly at xi = 0
        assert first.objective == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(first.x[:2], [2 / 3, 1 / 3])
