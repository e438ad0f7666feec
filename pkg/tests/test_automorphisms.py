"""Tests for the automorphisms module."""

from typing import Any

import pytest

from holomorphic_orbifolds.automorphisms import (
    ComponentMap,
    GluedAutomorphismSpec,
    MatrixAutomorphismSpec,
    automorphism_from_json,
    describe_maps,
)
from holomorphic_orbifolds.config import AUTOMORPHISMS, NIEMEIER_GLUE

A2_GRAM = [[2, -1], [-1, 2]]
E8_AS_D8 = {"components": "D8", "glue": [[1]]}


class TestComponentMap:
    """Tests for maps on a single root lattice component."""

    def test_simple_reflection(self) -> None:
        """Test s_1 on the simple roots of A2."""
        m = ComponentMap(target=1, source=1, word=(1,))
        assert m.root_matrix("A2") == [[-1, 1], [0, 1]]

    def test_highest_root_reflection(self) -> None:
        """Test that node 0 reflects in the highest root."""
        m = ComponentMap(target=1, source=1, word=(0,))
        assert m.root_matrix("A1") == [[-1]]

    def test_sign(self) -> None:
        """Test that the sign multiplies the whole block."""
        m = ComponentMap(target=1, source=1, sign=-1)
        assert m.root_matrix("E6") == [[-int(i == j) for j in range(6)] for i in range(6)]

    def test_ambient_cycle(self) -> None:
        """Test a cyclic shift of the ambient coordinates of A2."""
        m = ComponentMap(target=1, source=1, ambient=((2, 1), (3, 1), (1, 1)))
        # e1 - e2 -> e3 - e1, e2 - e3 -> e1 - e2
        assert m.root_matrix("A2") == [[-1, 1], [-1, 0]]

    def test_invalid_sign(self) -> None:
        """Test that signs other than +1 and -1 are rejected."""
        with pytest.raises(ValueError, match="Sign must be"):
            ComponentMap(target=1, source=1, sign=2)

    def test_ambient_and_word(self) -> None:
        """Test that a map cannot be given two ways at once."""
        with pytest.raises(ValueError, match="either ambient coordinates or a reflection word"):
            ComponentMap(target=1, source=1, ambient=((1, 1),), word=(1,))

    @pytest.mark.parametrize(
        ("label", "m", "match"),
        [
            ("E6", ComponentMap(1, 1, ambient=((1, 1),)), "No ambient coordinates"),
            ("A4", ComponentMap(1, 1, ambient=((1, 1), (2, 1))), "needs 5 ambient images"),
            ("A2", ComponentMap(1, 1, word=(3,)), "has no node 3"),
        ],
    )
    def test_errors(self, label: str, m: ComponentMap, match: str) -> None:
        """Test rejection of malformed maps."""
        with pytest.raises(ValueError, match=match):
            m.root_matrix(label)

    def test_from_json_defaults(self) -> None:
        """Test that the source defaults to the target."""
        m = ComponentMap.from_json({"target": 3, "word": [1, 2]})
        assert m == ComponentMap(target=3, source=3, word=(1, 2))

    def test_describe_maps(self) -> None:
        """Test the one-line descriptions."""
        maps = [
            ComponentMap(1, 1, ambient=((2, 1), (1, -1))),
            ComponentMap(2, 3, word=(1, 2), sign=-1),
            ComponentMap(3, 2),
        ]
        assert describe_maps(maps) == [
            "1 -> 1: ambient x2,-x1",
            "3 -> 2: -word s1s2",
            "2 -> 3: identity",
        ]


class TestMatrixAutomorphismSpec:
    """Tests for automorphisms given by raw matrices."""

    def test_build(self) -> None:
        """Test the order 3 rotation of A2."""
        spec = automorphism_from_json(
            {"name": "rotation", "gram": A2_GRAM, "aut": [[0, -1], [1, -1]], "order": 3}
        )
        assert isinstance(spec, MatrixAutomorphismSpec)
        g = spec.build()
        assert g.order == 3
        assert g.cycle_shape == {1: -1, 3: 1}

    def test_wrong_order(self) -> None:
        """Test that a recorded order is checked."""
        spec = automorphism_from_json({"gram": A2_GRAM, "aut": [[0, -1], [1, -1]], "order": 6})
        with pytest.raises(ValueError, match="expected order 6, got 3"):
            spec.build()

    def test_wrong_cycle_shape(self) -> None:
        """Test that a recorded cycle shape is checked."""
        spec = automorphism_from_json(
            {"gram": A2_GRAM, "aut": [[-1, 0], [0, -1]], "cycle_shape": {"1": 2}}
        )
        with pytest.raises(ValueError, match="expected cycle shape"):
            spec.build()

    def test_diagram_automorphism(self) -> None:
        """Test the swap of the simple roots of A2."""
        spec = automorphism_from_json({"gram": A2_GRAM, "aut": [[0, 1], [1, 0]]})
        assert spec.build().cycle_shape == {2: 1}

    def test_not_an_isometry(self) -> None:
        """Test that the Gram matrix must be preserved."""
        spec = automorphism_from_json({"gram": A2_GRAM, "aut": [[1, 1], [0, 1]]})
        with pytest.raises(ValueError, match="does not preserve"):
            spec.build()

    @pytest.mark.parametrize(
        ("data", "match"),
        [
            ({"aut": [[1]]}, "needs the Gram matrix"),
            ({"name": "x"}, "either 'aut' or 'lattice'"),
            ({"lattice": "A5^5 D4"}, "Unknown Niemeier lattice"),
        ],
    )
    def test_from_json_errors(self, data: dict[str, Any], match: str) -> None:
        """Test rejection of incomplete descriptions."""
        with pytest.raises(ValueError, match=match):
            automorphism_from_json(data, NIEMEIER_GLUE)


class TestGluedAutomorphismSpec:
    """Tests for automorphisms of glued lattices."""

    def test_coxeter_element_of_a2(self) -> None:
        """Test s_1 s_2 on the root lattice A2."""
        spec = automorphism_from_json(
            {"lattice": {"components": "A2"}, "components": [{"target": 1, "word": [1, 2]}]}
        )
        assert isinstance(spec, GluedAutomorphismSpec)
        g = spec.build()
        assert g.order == 3
        assert g.cycle_shape == {1: -1, 3: 1}

    def test_negation_of_e8(self) -> None:
        """Test the global -1 on E8 built as D8 plus a spinor glue."""
        spec = automorphism_from_json(
            {"lattice": E8_AS_D8, "components": [{"target": 1}], "negate": True}
        )
        g = spec.build()
        assert spec.lattice().determinant == 1
        assert g.cycle_shape == {1: -8, 2: 8}

    def test_reflection_in_e8(self) -> None:
        """Test that a root reflection preserves the glued lattice."""
        spec = automorphism_from_json(
            {"lattice": E8_AS_D8, "components": [{"target": 1, "word": [8]}]}
        )
        g = spec.build()
        assert g.order == 2
        assert g.cycle_shape == {1: 6, 2: 1}

    def test_glue_not_preserved(self) -> None:
        """Test that a single sign change moves the spinor glue off the lattice."""
        ambient = [[1, -1]] + [[k, 1] for k in range(2, 9)]
        spec = automorphism_from_json(
            {"lattice": E8_AS_D8, "components": [{"target": 1, "ambient": ambient}]}
        )
        with pytest.raises(ValueError, match="does not preserve the glue group"):
            spec.build()

    def test_components_must_be_permuted(self) -> None:
        """Test that every component needs exactly one map."""
        spec = automorphism_from_json(
            {"lattice": "A4^6", "components": [{"target": 1}]}, NIEMEIER_GLUE
        )
        with pytest.raises(ValueError, match="must permute all 6 components"):
            spec.build()

    def test_mismatched_components(self) -> None:
        """Test that components can only be mapped onto equal ones."""
        spec = automorphism_from_json(
            {
                "lattice": {"components": "A2 A1"},
                "components": [{"target": 1, "source": 2}, {"target": 2, "source": 1}],
            }
        )
        with pytest.raises(ValueError, match="cannot map A1 onto A2"):
            spec.build()

    def test_no_glue(self) -> None:
        """Test that a structured map needs a lattice."""
        with pytest.raises(ValueError, match="no glue description"):
            GluedAutomorphismSpec(name="bare").lattice()

    @pytest.mark.slow
    @pytest.mark.parametrize("name", sorted(AUTOMORPHISMS))
    def test_bundled(self, name: str) -> None:
        """Test that every bundled automorphism compiles with its recorded order and shape."""
        spec = AUTOMORPHISMS[name]
        g = spec.build()
        assert g.order == spec.order
        assert g.cycle_shape == spec.cycle_shape
        assert g.lattice.rank == 24
        assert g.lattice.determinant == 1
