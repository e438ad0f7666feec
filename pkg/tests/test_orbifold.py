"""Tests for the orbifold module."""

from fractions import Fraction

import pytest

from holomorphic_orbifolds.automorphisms import BaseAutomorphismSpec, automorphism_from_json
from holomorphic_orbifolds.config import AUTOMORPHISMS, NIEMEIER_GLUE
from holomorphic_orbifolds.enums import Generator
from holomorphic_orbifolds.orbifold import (
    candidates_by_dim,
    cheapest_words,
    multiplier_check,
    orbifold_v1_dim,
    prepare_run,
    run_orbifold,
    sector_character,
    self_dual_check,
)
from holomorphic_orbifolds.qseries import PuiseuxSeries

ORDER5_SECTOR = {Fraction(0): 5, Fraction(1): 39375, Fraction(2): 4298750, Fraction(3): 172860000}


def _series(terms: dict[Fraction | int, int], order: int = 2) -> PuiseuxSeries:
    return PuiseuxSeries({Fraction(e): v for e, v in terms.items()}, order)


def _e8_cubed(components: list[dict[str, int]], *, negate: bool = False) -> BaseAutomorphismSpec:
    return automorphism_from_json(
        {"lattice": "E8^3", "components": components, "negate": negate}, NIEMEIER_GLUE
    )


class TestCheapestWords:
    """Tests for the routes from untwisted traces to every (i, j)."""

    @pytest.mark.parametrize("n", [1, 2, 4, 5, 6])
    def test_every_row_is_reached(self, n: int) -> None:
        """Test that (0, d) gamma = (i, j) for every route."""
        routes = cheapest_words(n)
        assert len(routes) == n * n
        for row, (source, word) in routes.items():
            assert word.product().act_on_row((0, source), n) == row

    def test_untwisted_rows_need_no_word(self) -> None:
        """Test that (0, d) is its own source."""
        routes = cheapest_words(4)
        for d in range(4):
            source, word = routes[(0, d)]
            assert source == d
            assert word.letters == ()

    def test_prime_order_needs_one_inversion(self) -> None:
        """Test that for prime n every twisted row is one S away from a source."""
        for (i, _), (_, word) in cheapest_words(5).items():
            s_letters = sum(1 for letter, _ in word.letters if letter is Generator.S)
            assert s_letters == (1 if i else 0)


class TestSectorCharacter:
    """Tests for the projection of traces onto a sector character."""

    def test_projection(self) -> None:
        """Test (1/n) sum_j T(1, i, j) on a synthetic order 2 example."""
        traces = {0: _series({-1: 1, 0: 10, 1: 4}), 1: _series({-1: 1, 0: -2, 1: 2})}
        assert sector_character(traces, 2, 0) == {Fraction(-1): 1, Fraction(0): 4, Fraction(1): 3}

    @pytest.mark.parametrize(
        ("traces", "match"),
        [
            ({0: {Fraction(1, 3): 1}, 1: {}}, "outside"),
            ({0: {Fraction(1, 2): 2}, 1: {}}, "non-integral exponents"),
            ({0: {0: 1}, 1: {}}, "not an integer"),
            ({0: {0: -2}, 1: {}}, "negative"),
        ],
    )
    def test_rejects(self, traces: dict[int, dict[Fraction | int, int]], match: str) -> None:
        """Test that projections must be nonnegative integral q-series."""
        series = {j: _series(terms) for j, terms in traces.items()}
        with pytest.raises(ArithmeticError, match=match):
            sector_character(series, 2, 1)


class TestSelfDual:
    """Tests for the fixed-point subgroup of the fusion group."""

    @pytest.mark.parametrize("n", range(1, 9))
    def test_fixed_point_subgroup_is_self_dual(self, n: int) -> None:
        """Test that {(i, 0)} is isotropic and equal to its orthogonal complement."""
        assert self_dual_check(n)


class TestCandidatesByDim:
    """Tests for the lookup of feasible affine structures."""

    def test_bundled_table(self) -> None:
        """Test that dim 48 lists A4,5^2."""
        assert "A4,5^2" in candidates_by_dim(48)
        assert candidates_by_dim(47) == []

    @pytest.mark.parametrize(
        ("dim", "expected"),
        [(360, ["D8,1^3"]), (168, ["A5,1^4 D4,1", "A5,1 C5,1 E6,2", "A5,1 E7,3", "D4,1^6"])],
    )
    def test_lattice_dimensions(self, dim: int, expected: list[str]) -> None:
        """Test dimensions away from the orbifold runs."""
        assert candidates_by_dim(dim) == expected

    def test_custom_table(self) -> None:
        """Test lookups in an explicit table."""
        assert candidates_by_dim(24, {24: ("U(1)^24",)}) == ["U(1)^24"]


class TestPrepareRun:
    """Tests for lift data and type checks."""

    def test_nonzero_type(self) -> None:
        """Test that the cyclic permutation of E8^3, of type 2, is rejected."""
        cycle = [{"target": 1, "source": 3}, {"target": 2, "source": 1}, {"target": 3, "source": 2}]
        spec = _e8_cubed(cycle)
        g = spec.build()
        assert g.order == 3
        with pytest.raises(ValueError, match="has type 2; only type 0"):
            prepare_run(g, name="permutation")

    def test_truncation_must_reach_weight_one(self) -> None:
        """Test that a nonpositive truncation is rejected."""
        spec = _e8_cubed([{"target": k} for k in (1, 2, 3)], negate=True)
        run = prepare_run(spec.build())
        with pytest.raises(ValueError, match="does not reach the weight one space"):
            orbifold_v1_dim(run, 0)


@pytest.mark.slow
class TestOrbifold:
    """Full orbifold runs on Niemeier lattices."""

    def test_negation_of_e8_cubed(self) -> None:
        """Test the -1 orbifold of E8^3, whose V_1 is D8,1^3."""
        spec = _e8_cubed([{"target": k} for k in (1, 2, 3)], negate=True)
        result = run_orbifold(spec)
        assert result.type == 0
        assert result.rho == (0, Fraction(3, 2))
        assert result.dim_v1_fixed == 360
        assert result.dim_v1_orbifold == 360
        # 2^12 ground states of weight 3/2 times 24 oscillators
        assert result.sectors[1].get(Fraction(0), 0) == 0
        assert result.sectors[1][Fraction(1)] == 4096 * 24

    def test_order_5(self) -> None:
        """Test the order 5 automorphism of A4^6."""
        result = run_orbifold(AUTOMORPHISMS["a4_6_order5"])
        assert result.order == 5
        assert result.type == 0
        assert result.self_dual
        assert result.sectors[0][Fraction(-1)] == 1
        assert result.dim_v1_fixed == 28
        assert result.dim_v1_orbifold == 48
        for i in range(1, 5):
            assert result.sectors[i] == ORDER5_SECTOR
        assert "A4,5^2" in result.candidates

    def test_order_5_multipliers(self) -> None:
        """Test T-invariance and the S^2 relation on the untwisted traces."""
        spec = AUTOMORPHISMS["a4_6_order5"]
        run = prepare_run(spec.build(), name=spec.name)
        assert multiplier_check(run) == {"T": True, "S": True}

    @pytest.mark.parametrize(
        ("name", "dim"),
        [
            ("a4_6_order10", 36),
            ("e6_4_order6", 72),
            ("a9_2_d6_order4", 96),
            ("a2_12_order6", 36),
        ],
    )
    def test_bundled(self, name: str, dim: int) -> None:
        """Test dim V_1 of the remaining bundled orbifolds."""
        result = run_orbifold(AUTOMORPHISMS[name])
        assert result.dim_v1_orbifold == dim
        assert result.candidates

    def test_to_json(self) -> None:
        """Test the JSON form of a result."""
        data = run_orbifold(AUTOMORPHISMS["a4_6_order5"]).to_json()
        assert data["cycle_shape"] == "1^-1 5^5"
        assert data["dim_v1_orbifold"] == 48
        assert data["sectors"][1]["coefficients"][0] == ["0", 5]
