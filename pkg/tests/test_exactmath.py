"""Tests for exact rational and cyclotomic arithmetic."""

from fractions import Fraction

import pytest

from holomorphic_orbifolds.exactmath import (
    Cyc,
    clear_denominators,
    determinant,
    hermite_normal_form,
    integer_kernel,
    inverse,
    mat_mul,
    phase,
    rational_rank,
    root_of_unity,
    smith_diagonal,
    smith_normal_form,
    solve_linear,
    sqrt_rational,
)


class TestCyc:
    """Tests for cyclotomic numbers."""

    def test_fourth_root_squares_to_minus_one(self) -> None:
        """Test e(1/4)^2 = -1."""
        assert root_of_unity(1, 4) ** 2 == -1

    def test_redundant_spanning_set(self) -> None:
        """Test that e(1/3) + e(2/3) reduces to -1."""
        value = root_of_unity(1, 3) + root_of_unity(2, 3)
        assert value.to_rational() == -1

    def test_sum_of_all_roots_vanishes(self) -> None:
        """Test that the twelfth roots of unity sum to zero."""
        assert Cyc.sum(root_of_unity(k, 12) for k in range(12)).is_zero()

    def test_phase(self) -> None:
        """Test e(1/2) = -1 and e(3/2) = -1."""
        assert phase(Fraction(1, 2)) == -1
        assert phase(Fraction(3, 2)) == -1

    def test_inverse(self) -> None:
        """Test inversion through Galois conjugates."""
        x = 1 + root_of_unity(1, 5)
        assert x * x.inverse() == 1
        assert (x / x) == 1

    def test_inverse_of_zero(self) -> None:
        """Test that zero has no inverse."""
        with pytest.raises(ZeroDivisionError, match="Division by zero"):
            Cyc(5).inverse()

    def test_galois_and_conjugate(self) -> None:
        """Test the Galois action and complex conjugation."""
        z = root_of_unity(1, 5)
        assert z.galois(2) == root_of_unity(2, 5)
        assert z.conjugate() == root_of_unity(4, 5)
        assert z * z.conjugate() == 1

    def test_galois_needs_unit(self) -> None:
        """Test that non-units are rejected."""
        with pytest.raises(ValueError, match="not a unit"):
            root_of_unity(1, 6).galois(2)

    def test_irrational_has_no_rational_value(self) -> None:
        """Test that e(1/5) is not rational."""
        assert root_of_unity(1, 5).to_rational() is None

    @pytest.mark.parametrize("value", [2, 3, 5, 7, 12, Fraction(3, 4), Fraction(5, 8), 200])
    def test_sqrt_rational(self, value: Fraction | int) -> None:
        """Test that square roots square back exactly."""
        assert sqrt_rational(value) ** 2 == value

    def test_sqrt_negative(self) -> None:
        """Test that negative radicands are rejected."""
        with pytest.raises(ValueError, match="negative"):
            sqrt_rational(-1)

    def test_to_json_rational(self) -> None:
        """Test serialisation of rational values."""
        assert (root_of_unity(1, 3) + root_of_unity(2, 3)).to_json() == {
            "conductor": 1,
            "coefficients": [[0, "-1"]],
        }

    def test_bad_conductor(self) -> None:
        """Test that the conductor must be positive."""
        with pytest.raises(ValueError, match="Conductor must be positive"):
            Cyc(0)


class TestMatrices:
    """Tests for rational linear algebra."""

    def test_determinant(self) -> None:
        """Test determinants, including the empty matrix."""
        assert determinant([[2, -1], [-1, 2]]) == 3
        assert determinant([[Fraction(1, 2), 0], [0, 4]]) == 2
        assert determinant([]) == 1

    def test_inverse(self) -> None:
        """Test that A * A^-1 is the identity."""
        a = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
        product = mat_mul(a, inverse(a))
        assert product == [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]

    def test_inverse_singular(self) -> None:
        """Test that singular matrices are rejected."""
        with pytest.raises(ValueError, match="singular"):
            inverse([[1, 2], [2, 4]])

    def test_rational_rank(self) -> None:
        """Test rank over Q."""
        assert rational_rank([[1, 2], [2, 4]]) == 1
        assert rational_rank([[1, 0], [0, 1]]) == 2
        assert rational_rank([]) == 0

    def test_solve_linear(self) -> None:
        """Test a consistent system with a one-dimensional kernel."""
        space = solve_linear([[1, 1, 0], [0, 1, 1]], [2, 3])
        assert space.consistent
        assert len(space.kernel_basis) == 1
        x = space.particular
        assert x is not None
        assert x[0] + x[1] == 2
        assert x[1] + x[2] == 3

    def test_solve_linear_inconsistent(self) -> None:
        """Test an inconsistent system."""
        assert not solve_linear([[1, 1], [2, 2]], [1, 3]).consistent

    def test_solve_linear_mismatch(self) -> None:
        """Test that the right hand side must match the rows."""
        with pytest.raises(ValueError, match="Dimension mismatch"):
            solve_linear([[1, 1]], [1, 2])

    def test_clear_denominators(self) -> None:
        """Test the lcm of denominators."""
        assert clear_denominators([Fraction(1, 2), Fraction(1, 3), 1]) == 6


class TestNormalForms:
    """Tests for Smith and Hermite normal forms."""

    def test_smith_normal_form(self) -> None:
        """Test U A V = D with the divisibility chain."""
        a = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
        u, d, v = smith_normal_form(a)
        assert mat_mul(mat_mul(u, a), v) == [[Fraction(x) for x in row] for row in d]
        assert [d[i][i] for i in range(3)] == [2, 6, 12]
        assert abs(determinant(u)) == 1
        assert abs(determinant(v)) == 1

    def test_smith_diagonal_rectangular(self) -> None:
        """Test a rank deficient rectangular matrix."""
        assert smith_diagonal([[2, 4], [4, 8], [0, 0]]) == [2, 0]

    def test_hermite_normal_form(self) -> None:
        """Test a basis of the lattice {(a, b) : a = b mod 2}."""
        assert hermite_normal_form([[2, 0], [0, 2], [1, 1]]) == [[1, 1], [0, 2]]

    def test_hermite_drops_zero_rows(self) -> None:
        """Test that an all-zero input has an empty basis."""
        assert hermite_normal_form([[0, 0]]) == []

    def test_integer_kernel(self) -> None:
        """Test a saturated kernel basis."""
        (k,) = integer_kernel([[1, 1, 2], [0, 1, 1]])
        assert k[0] + k[1] + 2 * k[2] == 0
        assert k[1] + k[2] == 0
        assert sorted(map(abs, k)) == [1, 1, 1]
