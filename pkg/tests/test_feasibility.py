"""Tests for the exact feasibility cascade."""

from fractions import Fraction

import pytest

from holomorphic_orbifolds.enums import FeasibilityStatus
from holomorphic_orbifolds.exactmath import mat_vec
from holomorphic_orbifolds.feasibility import (
    integer_solvable,
    lp_feasible_nonneg,
    check_divisibility,
    nonneg_integer_feasible,
    var_bounds,
    verify_branch_tree,
)


def _farkas_holds(a: list[list[int]], b: list[int], y: tuple[Fraction, ...]) -> bool:
    products = [sum(y[i] * a[i][j] for i in range(len(a))) for j in range(len(a[0]))]
    return all(p >= 0 for p in products) and sum(yi * bi for yi, bi in zip(y, b, strict=True)) < 0


class TestRationalFeasibility:
    """Tests for lp_feasible_nonneg."""

    def test_feasible(self) -> None:
        """Test a witness that satisfies the system."""
        a, b = [[1, 1, 0], [0, 1, 1]], [2, 3]
        result = lp_feasible_nonneg(a, b)
        assert result.status is FeasibilityStatus.FEASIBLE_RATIONAL
        assert result.witness is not None
        assert all(x >= 0 for x in result.witness)
        assert mat_vec(a, result.witness) == [2, 3]

    def test_infeasible_sign(self) -> None:
        """Test a Farkas certificate when the right hand side is negative."""
        a, b = [[1, 1]], [-1]
        result = lp_feasible_nonneg(a, b)
        assert result.status is FeasibilityStatus.INFEASIBLE_RATIONAL
        assert _farkas_holds(a, b, result.certificate)

    def test_infeasible_inconsistent(self) -> None:
        """Test a Farkas certificate for inconsistent equations."""
        a, b = [[1, 2], [2, 4]], [1, 3]
        result = lp_feasible_nonneg(a, b)
        assert result.status is FeasibilityStatus.INFEASIBLE_RATIONAL
        assert _farkas_holds(a, b, result.certificate)

    def test_infeasible_mixed(self) -> None:
        """Test x - y = 1, x + y = 0 with x, y >= 0."""
        a, b = [[1, -1], [1, 1]], [1, 0]
        result = lp_feasible_nonneg(a, b)
        assert not result.feasible
        assert _farkas_holds(a, b, result.certificate)

    def test_pivot_budget(self) -> None:
        """Test that an exhausted pivot budget is inconclusive, not wrong."""
        a = [[1, 1, 1, 1], [1, -1, 2, -2], [3, 1, -1, 2]]
        result = lp_feasible_nonneg(a, [4, 1, 5], pivot_budget=0)
        assert result.status is FeasibilityStatus.INCONCLUSIVE

    def test_dimension_mismatch(self) -> None:
        """Test that rows and right hand side must agree."""
        with pytest.raises(ValueError, match="Dimension mismatch"):
            lp_feasible_nonneg([[1]], [1, 2])


class TestVarBounds:
    """Tests for var_bounds."""

    def test_bounded(self) -> None:
        """Test the range of x on the segment x + 2y = 4."""
        bounds = var_bounds([[1, 2]], [4], 0)
        assert bounds.lower == 0
        assert bounds.upper == 4
        assert bounds.bounded

    def test_unbounded(self) -> None:
        """Test an unbounded variable on x - y = 1."""
        bounds = var_bounds([[1, -1]], [1], 1)
        assert bounds.upper is None
        assert not bounds.bounded

    def test_empty(self) -> None:
        """Test that an empty polytope is an error."""
        with pytest.raises(ValueError, match="empty"):
            var_bounds([[1, 1]], [-1], 0)


class TestIntegerSolvable:
    """Tests for integer_solvable."""

    def test_solvable(self) -> None:
        """Test 2x + 3y = 1 over Z."""
        result = integer_solvable([[2, 3]], [1])
        assert result.status is FeasibilityStatus.FEASIBLE_INTEGER
        x, y = result.witness or ()
        assert 2 * x + 3 * y == 1
        assert x.denominator == y.denominator == 1

    def test_parity(self) -> None:
        """Test that 2x = 1 is refuted with divisor 2."""
        result = integer_solvable([[2]], [1])
        assert result.status is FeasibilityStatus.INFEASIBLE_INTEGER
        assert result.certificate["divisor"] == 2

    def test_rational_rows(self) -> None:
        """Test that rational rows are scaled before the Smith form."""
        result = integer_solvable([[Fraction(1, 2), Fraction(1, 2)]], [Fraction(1, 2)])
        assert result.feasible


class TestNonnegIntegerFeasible:
    """Tests for nonneg_integer_feasible."""

    def test_feasible(self) -> None:
        """Test that 2x + 3y = 5 has the unique solution (1, 1)."""
        result = nonneg_integer_feasible([[2, 3]], [5])
        assert result.status is FeasibilityStatus.FEASIBLE_NONNEG_INTEGER
        assert result.witness == (1, 1)

    def test_bound_augmentation(self) -> None:
        """Test 2x + 3y = 1: every variable has maximum below 1."""
        result = nonneg_integer_feasible([[2, 3]], [1])
        assert result.status is FeasibilityStatus.INFEASIBLE_NONNEG_INTEGER
        assert result.detail == "bound_augmentation"

    def test_branching(self) -> None:
        """Test 3x + 5y = 7, which needs a branch on y."""
        result = nonneg_integer_feasible([[3, 5]], [7])
        assert result.status is FeasibilityStatus.INFEASIBLE_NONNEG_INTEGER
        assert result.detail == "branching"
        assert result.certificate["nodes"] > 1

    def test_single_root_augmentation(self) -> None:
        """Test that zero-fixing at the root runs once before branching.

        Fixing u = 0 leaves x with maximum 1/2. A second pass at the root would
        settle the system without branching.
        """
        a = [[2, 1, 0, 0, 0], [-4, 0, 2, 1, 0], [0, 1, 0, 1, 3]]
        b = [1, 1, 4]
        result = nonneg_integer_feasible(a, b)
        assert result.status is FeasibilityStatus.INFEASIBLE_NONNEG_INTEGER
        assert result.detail == "branching"
        tree = result.certificate["tree"]
        assert tree["kind"] == "bounds"
        assert tree["zeroed"] == [0]
        assert tree["child"]["kind"] == "branch"
        assert verify_branch_tree(a, b, tree)

    def test_node_budget(self) -> None:
        """Test that an exhausted node budget is inconclusive."""
        result = nonneg_integer_feasible([[3, 5]], [7], node_budget=1)
        assert result.status is FeasibilityStatus.INCONCLUSIVE

    def test_branch_budget(self) -> None:
        """Test that a zero branch budget is inconclusive when branching is needed."""
        result = nonneg_integer_feasible([[3, 5]], [7], branch_budget=0)
        assert result.status is FeasibilityStatus.INCONCLUSIVE

    def test_no_variables(self) -> None:
        """Test systems without columns."""
        assert nonneg_integer_feasible([], []).feasible


class TestVerifyBranchTree:
    """Tests for replaying search trees."""

    def test_bound_augmentation_tree(self) -> None:
        """Test the tree of 2x + 3y = 1: both variables are fixed to zero."""
        result = nonneg_integer_feasible([[2, 3]], [1])
        tree = result.certificate["tree"]
        assert tree == {
            "fixed": {},
            "kind": "bounds",
            "zeroed": [0, 1],
            "child": {"fixed": {0: 0, 1: 0}, "kind": "residual"},
        }
        assert verify_branch_tree([[2, 3]], [1], tree)

    def test_branch_tree(self) -> None:
        """Test that the tree of 3x + 5y = 7 replays."""
        result = nonneg_integer_feasible([[3, 5]], [7])
        assert verify_branch_tree([[3, 5]], [7], result.certificate["tree"])

    def test_missing_child(self) -> None:
        """Test that a branch skipping a value is rejected."""
        tree = nonneg_integer_feasible([[3, 5]], [7]).certificate["tree"]
        tree["children"] = tree["children"][1:]
        assert not verify_branch_tree([[3, 5]], [7], tree)

    def test_unjustified_zero(self) -> None:
        """Test that fixing a variable with maximum at least 1 is rejected."""
        tree = nonneg_integer_feasible([[2, 3]], [1]).certificate["tree"]
        assert not verify_branch_tree([[2, 3]], [2], tree)

    def test_other_system(self) -> None:
        """Test that a tree does not certify a feasible system."""
        tree = nonneg_integer_feasible([[3, 5]], [7]).certificate["tree"]
        assert not verify_branch_tree([[3, 5]], [8], tree)

    def test_unknown_kind(self) -> None:
        """Test that malformed nodes are rejected."""
        assert not verify_branch_tree([[1]], [1], {"fixed": {}, "kind": "guess"})


class TestCheckDivisibility:
    """Tests for re-checking integer obstructions."""

    def test_parity(self) -> None:
        """Test the certificate of 2x = 1 and its rejection on 2x = 2."""
        certificate = integer_solvable([[2]], [1]).certificate
        assert check_divisibility([[2]], [1], certificate)
        assert not check_divisibility([[2]], [2], certificate)
