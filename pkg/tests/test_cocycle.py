"""Tests for abelian 3-cocycles."""

import random
from fractions import Fraction
from math import gcd

import pytest

from holomorphic_orbifolds.cocycle import (
    AbelianCocycle,
    braiding_b,
    q_from_omega,
    q_vanishes_on,
    standard_cocycle,
    trivialize_on_isotropic,
    verify_abelian_cocycle,
)
from holomorphic_orbifolds.exactmath import phase
from holomorphic_orbifolds.quadform import (
    FiniteAbelianGroup,
    FiniteQuadraticModule,
    fusion_group,
    span,
)

Z2_MINUS = FiniteQuadraticModule((2,), ((Fraction(-1, 2),),))


def _cyclic(order: int, q: Fraction) -> FiniteQuadraticModule:
    return FiniteQuadraticModule((order,), ((2 * q,),))


def _random_module(rng: random.Random) -> FiniteQuadraticModule:
    """A quadratic form on a product of at most two cyclic groups of total order <= 36."""
    orders = rng.choice(
        [(2,), (3,), (4,), (5,), (6,), (8,), (9,), (2, 2), (2, 4), (3, 3), (2, 6), (3, 6)]
    )
    form = [[Fraction(0)] * len(orders) for _ in orders]
    for i, m in enumerate(orders):
        step = Fraction(1, m) if m % 2 == 0 else Fraction(2, m)
        form[i][i] = rng.randrange(m) * step
        for j in range(i + 1, len(orders)):
            value = Fraction(rng.randrange(gcd(m, orders[j])), gcd(m, orders[j]))
            form[i][j] = form[j][i] = value
    return FiniteQuadraticModule(orders, tuple(map(tuple, form)))


class TestVerify:
    """Tests for the cocycle identities."""

    def test_trivial(self) -> None:
        """Test that the trivial cocycle is valid with B = 1 and q = 0."""
        cocycle = AbelianCocycle.trivial(FiniteAbelianGroup((2, 3)))
        assert verify_abelian_cocycle(cocycle).valid
        assert all(value == 1 for value in braiding_b(cocycle).values())
        assert set(q_from_omega(cocycle).values()) == {0}

    def test_table_sizes(self) -> None:
        """Test that tables of the wrong length are rejected."""
        with pytest.raises(ValueError, match="Tables do not match"):
            AbelianCocycle(FiniteAbelianGroup((2,)), 2, (0,) * 7, (0,) * 4)

    def test_perturbed_associator(self) -> None:
        """Test that changing one associator value breaks the identities."""
        group = FiniteAbelianGroup((3,))
        cocycle = AbelianCocycle(group, 2, (0,) * 27, (0,) * 9).with_f((1,), (1,), (1,), 1)
        check = verify_abelian_cocycle(cocycle)
        assert not check.valid
        assert check.violation in {"first hexagon", "second hexagon", "pentagon"}
        assert check.witness

    def test_normalisation(self) -> None:
        """Test that F must vanish when an argument is 0."""
        group = FiniteAbelianGroup((3,))
        cocycle = AbelianCocycle(group, 3, (0,) * 27, (0,) * 9).with_f((0,), (1,), (2,), 1)
        check = verify_abelian_cocycle(cocycle)
        assert check.violation == "normalisation of F"

    def test_q_not_quadratic(self) -> None:
        """Test that a diagonal of Omega that is not quadratic is reported."""
        omega = (0, 0, 0, 0, 1, 0, 0, 0, 0)
        cocycle = AbelianCocycle(FiniteAbelianGroup((3,)), 3, (0,) * 27, omega)
        with pytest.raises(ValueError, match="not quadratic"):
            q_from_omega(cocycle)


class TestStandardCocycle:
    """Tests for the cocycle realising a quadratic form."""

    def test_z2(self) -> None:
        """Test Omega(1, 1) = e(-1/4) and F(1, 1, 1) = -1 on Z2."""
        cocycle = standard_cocycle(Z2_MINUS)
        assert verify_abelian_cocycle(cocycle).valid
        assert cocycle.Omega((1,), (1,)) == phase(Fraction(-1, 4))
        assert cocycle.F((1,), (1,), (1,)) == -1
        assert braiding_b(cocycle)[(1,), (1,), (0,)] == phase(Fraction(-1, 4))

    @pytest.mark.parametrize(
        ("order", "q"),
        [
            (5, Fraction(-1, 5)),
            (2, Fraction(1, 4)),
            (3, Fraction(1, 3)),
            (4, Fraction(1, 8)),
            (6, Fraction(5, 12)),
        ],
    )
    def test_round_trip(self, order: int, q: Fraction) -> None:
        """Test that q_Omega reproduces the form on cyclic groups."""
        module = _cyclic(order, q)
        cocycle = standard_cocycle(module)
        assert verify_abelian_cocycle(cocycle).valid
        recovered = q_from_omega(cocycle)
        assert all(recovered[x] == module.q(x) for x in module.elements())

    def test_cross_terms(self) -> None:
        """Test a form with an off-diagonal term on Z2 x Z4."""
        form = ((Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 4)))
        module = FiniteQuadraticModule((2, 4), form)
        cocycle = standard_cocycle(module)
        assert verify_abelian_cocycle(cocycle).valid
        assert q_from_omega(cocycle) == {x: module.q(x) for x in module.elements()}

    def test_braiding_normalised(self) -> None:
        """Test B(a, 0, c) = 1 and B(a, a, 0) = Omega(a, a)."""
        cocycle = standard_cocycle(_cyclic(4, Fraction(1, 8)))
        table = braiding_b(cocycle)
        elements = cocycle.group.elements()
        for a in elements:
            assert table[a, a, (0,)] == cocycle.Omega(a, a)
            for c in elements:
                assert table[a, (0,), c] == 1

    @pytest.mark.slow
    def test_random_forms(self) -> None:
        """Test validity and the q round trip on random modules of order <= 36."""
        rng = random.Random(24)
        for _ in range(20):
            module = _random_module(rng)
            cocycle = standard_cocycle(module)
            assert verify_abelian_cocycle(cocycle).valid, module
            assert q_from_omega(cocycle) == {x: module.q(x) for x in module.elements()}

    @pytest.mark.slow
    def test_fusion_group(self) -> None:
        """Test q_Omega = -q_Delta on the 25 modules of the n = 5 orbifold."""
        group = fusion_group(5, 0)
        plain = group.module()
        cocycle = standard_cocycle(plain.negated())
        assert verify_abelian_cocycle(cocycle).valid
        recovered = q_from_omega(cocycle)
        for x in group.elements():
            assert (recovered[plain.element_of(x)] + group.q(x)) % 1 == 0


class TestTrivialize:
    """Tests for coboundary witnesses on subgroups."""

    def test_trivial_cocycle(self) -> None:
        """Test that the trivial cocycle gives the zero cochain."""
        group = FiniteAbelianGroup((3,))
        cocycle = AbelianCocycle.trivial(group)
        witness = trivialize_on_isotropic(cocycle, span(group, [(1,)]))
        assert witness is not None
        assert set(witness.phi.values()) == {0}

    def test_not_isotropic(self) -> None:
        """Test that Z2 with q = -1/4 is not a coboundary on the whole group."""
        cocycle = standard_cocycle(Z2_MINUS)
        whole = span(Z2_MINUS, [(1,)])
        assert not q_vanishes_on(cocycle, whole)
        assert trivialize_on_isotropic(cocycle, whole) is None

    def test_fusion_line(self) -> None:
        """Test the n = 5 cocycle on H = {(i, 0)}."""
        plain = fusion_group(5, 0).module()
        cocycle = standard_cocycle(plain.negated())
        line = span(plain, [plain.element_of((1, 0))])
        assert q_vanishes_on(cocycle, line)
        assert trivialize_on_isotropic(cocycle, line) is not None

    @pytest.mark.parametrize(
        ("order", "q", "generator", "expected"),
        [
            (4, Fraction(1, 4), (2,), True),
            (4, Fraction(1, 8), (2,), False),
            (8, Fraction(1, 16), (4,), True),
            (3, Fraction(1, 3), (1,), False),
        ],
    )
    def test_isotropy_criterion(
        self, order: int, q: Fraction, generator: tuple[int, ...], expected: bool
    ) -> None:
        """Test that a witness exists exactly when q vanishes on the subgroup."""
        module = _cyclic(order, q)
        cocycle = standard_cocycle(module)
        subgroup = span(module, [generator])
        assert q_vanishes_on(cocycle, subgroup) is expected
        assert (trivialize_on_isotropic(cocycle, subgroup) is not None) is expected
