"""Tests for even lattices, glue codes and lattice automorphisms."""

from fractions import Fraction

import pytest

from holomorphic_orbifolds.config import NIEMEIER_GLUE
from holomorphic_orbifolds.exactmath import mat_mul, transpose
from holomorphic_orbifolds.lattice import (
    EvenLattice,
    GlueSpec,
    LatticeAut,
    coset_minimum,
    discriminant_representatives,
    format_cycle_shape,
    glue_lattice,
    lattice_voa_weight_data,
    lll_reduce_gram,
    minimum,
    orthogonal_index,
    power_cycle_shape,
    rank24_vector_counts,
    root_lattice,
    short_vectors,
    theta_series,
    vector_counts,
)

A2 = ((2, -1), (-1, 2))


class TestEvenLattice:
    """Tests for the lattice wrapper."""

    @pytest.mark.parametrize(
        ("gram", "match"),
        [
            (((2, 1),), "square"),
            (((2, 1), (0, 2)), "symmetric"),
            (((1, 0), (0, 2)), "odd"),
            (((2, Fraction(1, 2)), (Fraction(1, 2), 2)), "non-integral"),
        ],
    )
    def test_rejects(self, gram: tuple[tuple[int, ...], ...], match: str) -> None:
        """Test that malformed Gram matrices are rejected."""
        with pytest.raises(ValueError, match=match):
            EvenLattice(gram)

    def test_invariants(self) -> None:
        """Test rank, determinant and inner products of A2."""
        lattice = EvenLattice(A2)
        assert lattice.rank == 2
        assert lattice.determinant == 3
        assert not lattice.unimodular
        assert lattice.norm([1, 1]) == 2
        assert lattice.inner([1, 0], [0, 1]) == -1

    def test_singular(self) -> None:
        """Test that a degenerate lattice has no dual."""
        lattice = EvenLattice(((2, 2), (2, 2)))
        with pytest.raises(ValueError, match="singular"):
            _ = lattice.gram_inverse

    def test_root_lattice(self) -> None:
        """Test Cartan matrices as Gram matrices and the ADE restriction."""
        assert root_lattice("A2").gram == A2
        assert root_lattice("E8").determinant == 1
        with pytest.raises(ValueError, match="not even"):
            root_lattice("B3")


class TestEnumeration:
    """Tests for short vectors and theta series."""

    def test_short_vectors(self) -> None:
        """Test the six roots of A2."""
        lattice = EvenLattice(A2)
        vectors = short_vectors(lattice, 2)
        assert len(vectors) == 6
        assert {norm for _, norm in vectors} == {2}
        assert minimum(lattice) == 2

    def test_coset_minimum(self) -> None:
        """Test the minimal norm 2/3 of the nontrivial A2 dual cosets."""
        assert coset_minimum(A2, [Fraction(1, 3), Fraction(2, 3)]) == Fraction(2, 3)
        assert coset_minimum(A2, [0, 0]) == 0

    def test_a2_theta(self) -> None:
        """Test that theta_A2 counts the values of a^2 - ab + b^2."""
        series = theta_series(EvenLattice(A2), truncation=5)
        assert series.integer_coefficients() == {0: 1, 1: 6, 3: 6, 4: 6}

    def test_e8_theta(self) -> None:
        """Test theta_E8 = E4."""
        series = theta_series(root_lattice("E8"), truncation=3)
        assert series.integer_coefficients() == {0: 1, 1: 240, 2: 2160}

    def test_twisted_theta(self) -> None:
        """Test a character twist of the A2 theta series."""
        series = theta_series(EvenLattice(A2), w=[Fraction(1, 2), 0], truncation=2)
        # +-(1, 0) pair trivially with w, the other four roots give -1
        assert series.integer_coefficients() == {0: 1, 1: -2}

    def test_discriminant(self) -> None:
        """Test the discriminant group sizes of A2 and D4."""
        assert len(discriminant_representatives(EvenLattice(A2))) == 3
        assert len(discriminant_representatives(root_lattice("D4"))) == 4

    def test_lll(self) -> None:
        """Test that LLL reaches the minimum and returns a unimodular transform."""
        gram = [[2, 3], [3, 6]]
        reduced, transform = lll_reduce_gram(gram)
        assert reduced[0][0] == 2
        assert mat_mul(mat_mul(transform, gram), transpose(transform)) == reduced
        det = transform[0][0] * transform[1][1] - transform[0][1] * transform[1][0]
        assert abs(det) == 1


class TestGlue:
    """Tests for Niemeier lattices built from glue codes."""

    def test_parse_cyclic_glue(self) -> None:
        """Test that 1(01441) expands to the five cyclic shifts."""
        spec = GlueSpec.parse("A4^6", ["1(01441)"])
        assert spec.components == ("A4",) * 6
        assert spec.rank == 24
        assert spec.generators[0] == (1, 0, 1, 4, 4, 1)
        assert len(spec.generators) == 5

    def test_parse_errors(self) -> None:
        """Test that malformed components and glue are rejected."""
        with pytest.raises(ValueError, match="Invalid root lattice component"):
            GlueSpec.parse("X4^6")
        with pytest.raises(ValueError, match="labels"):
            GlueSpec.parse("A4^2", [[1, 2, 3]])
        with pytest.raises(ValueError, match="Invalid glue notation"):
            GlueSpec.parse("A4^2", ["x"])

    def test_non_isotropic_glue(self) -> None:
        """Test that glue with fractional inner products is rejected."""
        with pytest.raises(ValueError, match="not isotropic"):
            glue_lattice(GlueSpec.parse("A4", [[1]]))

    @pytest.mark.parametrize(("name", "roots"), [("A4^6", 120), ("E8^3", 720), ("A9^2 D6", 240)])
    def test_niemeier(self, name: str, roots: int) -> None:
        """Test unimodularity and root counts of glued Niemeier lattices."""
        lattice = glue_lattice(NIEMEIER_GLUE[name])
        assert lattice.rank == 24
        assert lattice.unimodular
        assert vector_counts(lattice, 2)[Fraction(2)] == roots
        assert theta_series(lattice, truncation=2).coeff_at(1) == roots

    def test_rank24_counts(self) -> None:
        """Test the norm 4 count of the lattice without roots."""
        assert rank24_vector_counts(0) == (0, 196560)

    @pytest.mark.parametrize("name", ["A4^6", "E8^3", "D24"])
    def test_weight_two_dimension(self, name: str) -> None:
        """Test that every Niemeier lattice VOA has 196884 states of weight 2."""
        lattice = glue_lattice(NIEMEIER_GLUE[name])
        assert lattice_voa_weight_data(lattice, [0] * 24, 0, 2) == 196884

    @pytest.mark.parametrize(("name", "roots"), [("A4^6", 120), ("E8^3", 720)])
    def test_root_second_moment(self, name: str, roots: int) -> None:
        """Test sum (alpha, z)^2 over roots = (N/12) (z, z)."""
        lattice = glue_lattice(NIEMEIER_GLUE[name])
        z = [1, 0, 0, 1] + [0] * 20
        value = lattice_voa_weight_data(lattice, z, 2, 1)
        assert value == Fraction(roots, 12) * lattice.norm(z)

    def test_weight_data_errors(self) -> None:
        """Test argument checks."""
        lattice = EvenLattice(A2)
        with pytest.raises(ValueError, match="Degree"):
            lattice_voa_weight_data(lattice, [0, 0], 0, 3)
        with pytest.raises(ValueError, match="nonnegative"):
            lattice_voa_weight_data(lattice, [0, 0], -1, 1)


class TestLatticeAut:
    """Tests for automorphisms and cycle shapes."""

    def test_rotation(self) -> None:
        """Test the order 3 rotation of A2."""
        g = LatticeAut(EvenLattice(A2), ((0, -1), (1, -1)))
        assert g.order == 3
        assert g.cycle_shape == {1: -1, 3: 1}
        assert g.eigenspace_dims == {0: 0, 1: 1, 2: 1}
        assert g.power(3).matrix == ((1, 0), (0, 1))
        assert g.power(-1).matrix == g.power(2).matrix

    def test_negation(self) -> None:
        """Test -1 on A2: shape 1^-2 2^2 and (1 - g)L = 2L."""
        g = LatticeAut(EvenLattice(A2), ((-1, 0), (0, -1)))
        assert g.order == 2
        assert g.cycle_shape == {1: -2, 2: 2}
        assert orthogonal_index(g) == 4

    def test_not_an_isometry(self) -> None:
        """Test that matrices not preserving the form are rejected."""
        with pytest.raises(ValueError, match="does not preserve"):
            LatticeAut(EvenLattice(A2), ((1, 1), (0, 1)))

    def test_shape_helpers(self) -> None:
        """Test cycle shapes of powers and their text form."""
        assert power_cycle_shape({1: -1, 5: 5}, 5) == {1: 24}
        assert power_cycle_shape({1: 2, 2: 3, 4: 4}, 2) == {1: 8, 2: 8}
        assert format_cycle_shape({5: 5, 1: -1}) == "1^-1 5^5"
