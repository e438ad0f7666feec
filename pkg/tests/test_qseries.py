"""Tests for truncated Puiseux q-series."""

from fractions import Fraction

import pytest

from holomorphic_orbifolds.enums import SeriesOp
from holomorphic_orbifolds.exactmath import phase
from holomorphic_orbifolds.qseries import (
    EtaQuotientSpec,
    PuiseuxSeries,
    delta,
    eisenstein,
    eta_expand,
    eta_quotient_from_cycle_shape,
    partition_expand,
    series_arith,
)


def _coefficients(series: PuiseuxSeries) -> dict[Fraction, int]:
    return series.integer_coefficients()


class TestPuiseuxSeries:
    """Tests for PuiseuxSeries arithmetic."""

    def test_truncation_drops_high_terms(self) -> None:
        """Test that terms at or above the order are not stored."""
        series = PuiseuxSeries({0: 1, 2: 5, 3: 7}, 3)
        assert _coefficients(series) == {0: 1, 2: 5}

    def test_coeff_at_beyond_truncation(self) -> None:
        """Test that unknown coefficients are an error."""
        series = PuiseuxSeries.from_coefficients([1, 2, 3])
        assert series.coeff_at(1) == 2
        assert series.coeff_at(Fraction(1, 2)) == 0
        with pytest.raises(ArithmeticError, match="beyond truncation"):
            series.coeff_at(3)

    def test_geometric_inverse(self) -> None:
        """Test 1 / (1 - q) = 1 + q + q^2 + ..."""
        series = PuiseuxSeries.from_coefficients([1, -1, 0, 0, 0, 0])
        assert _coefficients(series.inverse()) == dict.fromkeys(map(Fraction, range(6)), 1)

    def test_inverse_of_zero(self) -> None:
        """Test that a zero series cannot be inverted."""
        with pytest.raises(ArithmeticError, match="zero lowest term"):
            PuiseuxSeries({}, 4).inverse()

    def test_ring_laws(self) -> None:
        """Test distributivity and commutativity on small series."""
        a = PuiseuxSeries.from_coefficients([1, 2, -1, 3], start=Fraction(-1, 2))
        b = PuiseuxSeries.from_coefficients([2, 0, 5, 1])
        c = PuiseuxSeries.from_coefficients([0, 1, 1, 1])
        assert (a * b).equals(b * a)
        assert (a * (b + c)).equals(a * b + a * c)
        assert ((a + b) - b).equals(a)

    def test_division(self) -> None:
        """Test that (a * b) / b recovers a."""
        a = PuiseuxSeries.from_coefficients([1, 3, 0, 2, 1, 1])
        b = PuiseuxSeries.from_coefficients([2, 1, 1, 1, 1, 1])
        assert ((a * b) / b).equals(a)

    def test_translate_eta(self) -> None:
        """Test eta(tau + 1) = e(1/24) eta(tau)."""
        eta = eta_expand(1, 10)
        assert eta.translate(1).equals(eta.scale(phase(Fraction(1, 24))))

    def test_component_extract(self) -> None:
        """Test that extraction splits a series and is idempotent."""
        series = PuiseuxSeries.from_coefficients(range(1, 9), step=Fraction(1, 2))
        whole = series.component_extract(0)
        half = series.component_extract(Fraction(1, 2))
        assert (whole + half).equals(series)
        assert whole.component_extract(0).equals(whole)
        assert all(e.denominator == 1 for e in whole.terms)

    def test_q_shift_and_substitute(self) -> None:
        """Test multiplication by q^k and q -> q^k."""
        series = PuiseuxSeries.from_coefficients([1, 1, 1])
        assert _coefficients(series.q_shift(2)) == {2: 1, 3: 1, 4: 1}
        assert _coefficients(series.substitute(3)) == {0: 1, 3: 1, 6: 1}
        with pytest.raises(ValueError, match="Scale must be positive"):
            series.substitute(0)

    def test_integer_coefficients_sign(self) -> None:
        """Test that negative coefficients are reported when forbidden."""
        series = PuiseuxSeries.from_coefficients([1, -2])
        with pytest.raises(ArithmeticError, match="negative"):
            series.integer_coefficients(nonnegative=True)

    def test_integer_coefficients_fraction(self) -> None:
        """Test that fractional coefficients are reported."""
        series = PuiseuxSeries.from_coefficients([Fraction(1, 2)])
        with pytest.raises(ArithmeticError, match="not an integer"):
            series.integer_coefficients()

    def test_to_json(self) -> None:
        """Test the [numerator, denominator, coefficient] layout."""
        series = PuiseuxSeries({Fraction(-1, 24): 1}, 1)
        assert series.to_json() == [[-1, 24, {"conductor": 1, "coefficients": [[0, "1"]]}]]

    @pytest.mark.parametrize("op", [SeriesOp.ADD, SeriesOp.MUL, SeriesOp.DIV, "add"])
    def test_series_arith(self, op: SeriesOp | str) -> None:
        """Test dispatch by operation."""
        a = PuiseuxSeries.from_coefficients([1, 1, 1, 1])
        b = PuiseuxSeries.from_coefficients([1, 2, 3, 4])
        result = series_arith(a, b, op)
        expected = {"add": a + b, "mul": a * b, "div": a / b}[SeriesOp(op).value]
        assert result.equals(expected)

    def test_series_arith_pow(self) -> None:
        """Test integer powers and operand checks."""
        a = PuiseuxSeries.from_coefficients([1, 1, 0, 0])
        assert _coefficients(series_arith(a, 3, SeriesOp.POW)) == {0: 1, 1: 3, 2: 3, 3: 1}
        with pytest.raises(ValueError, match="series operand"):
            series_arith(a, 3, SeriesOp.ADD)


class TestStandardSeries:
    """Tests for eta, Eisenstein and the discriminant."""

    def test_delta(self) -> None:
        """Test the first values of Ramanujan's tau."""
        assert _coefficients(delta(5)) == {1: 1, 2: -24, 3: 252, 4: -1472}

    def test_eta_power_is_delta(self) -> None:
        """Test eta^24 = Delta termwise."""
        assert (eta_expand(1, 11) ** 24).equals(delta(11))

    def test_eta_pentagonal(self) -> None:
        """Test the pentagonal exponents of eta."""
        eta = eta_expand(1, 3)
        assert _coefficients(eta.q_shift(Fraction(-1, 24))) == {0: 1, 1: -1, 2: -1}

    def test_partitions(self) -> None:
        """Test 1/eta = q^(-1/24) sum p(n) q^n."""
        series = partition_expand(1, 7).q_shift(Fraction(1, 24))
        assert [series.coeff_at(n) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]

    @pytest.mark.parametrize(
        ("weight", "expected"),
        [
            (4, [1, 240, 2160, 6720, 17520]),
            (6, [1, -504, -16632, -122976, -532728]),
        ],
    )
    def test_eisenstein(self, weight: int, expected: list[int]) -> None:
        """Test E4 and E6."""
        series = eisenstein(weight, 5)
        assert [series.coeff_at(n) for n in range(5)] == expected

    def test_e2_divisor_sums(self) -> None:
        """Test c_m = -24 sigma(m) for E2."""
        series = eisenstein(2, 51)
        sigma = [sum(d for d in range(1, m + 1) if m % d == 0) for m in range(51)]
        assert all(series.coeff_at(m) == -24 * sigma[m] for m in range(1, 51))

    def test_e14_constant_term(self) -> None:
        """Test that E14 starts with 1."""
        assert eisenstein(14, 2).coeff_at(0) == 1

    def test_eisenstein_weight(self) -> None:
        """Test that odd weights are rejected."""
        with pytest.raises(ValueError, match="Unsupported Eisenstein weight"):
            eisenstein(3, 4)

    def test_eta_quotient(self) -> None:
        """Test eta(tau)^-1 eta(5 tau)^5 = q + q^2 + 2q^3 + ..."""
        spec = EtaQuotientSpec(((Fraction(1), -1), (Fraction(5), 5)))
        assert spec.leading_q_shift == 1
        assert spec.weight == 2
        assert spec.expand(3).coeff_at(1) == 1

    def test_cycle_shape_quotient(self) -> None:
        """Test the eta product of the identity cycle shape."""
        spec = eta_quotient_from_cycle_shape({1: 24})
        assert spec.expand(5).equals(delta(5))

    def test_eta_quotient_validation(self) -> None:
        """Test that zero exponents and empty shapes are rejected."""
        with pytest.raises(ValueError, match="nonzero"):
            EtaQuotientSpec(((Fraction(1), 0),))
        with pytest.raises(ValueError, match="nonempty"):
            eta_quotient_from_cycle_shape({1: 0})
