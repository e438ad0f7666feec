"""Structured descriptions of lattice automorphisms, compiled to matrices in the lattice basis."""

import logging
from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .enums import LieType
from .exactmath import QMatrix, identity_matrix, inverse, mat_mul, transpose
from .lattice import EvenLattice, GlueSpec, LatticeAut, format_cycle_shape, glue_lattice
from .liealg import root_datum

logger = logging.getLogger(__name__)


def _reflection(label: str, node: int) -> QMatrix:
    """Simple reflection s_node on simple-root coordinates; node 0 is the highest root."""
    datum = root_datum(label)
    rank = datum.rank
    cartan = datum.cartan
    if node == 0:
        root = list(datum.highest_root)
    elif 1 <= node <= rank:
        root = [int(i == node - 1) for i in range(rank)]
    else:
        msg = f"{label} has no node {node}"
        raise ValueError(msg)
    pairing = [sum(root[i] * cartan[i][j] for i in range(rank)) for j in range(rank)]
    return [
        [Fraction(int(r == c)) - root[r] * pairing[c] for c in range(rank)] for r in range(rank)
    ]


def _ambient_basis(label: str) -> tuple[QMatrix, QMatrix]:
    """(R, R^+): R maps root coordinates to ambient ones, R^+ inverts it on the image."""
    datum = root_datum(label)
    n = datum.rank
    if datum.kind is LieType.A:
        # alpha_i = e_i - e_{i+1} in R^{n+1}; partial sums invert it
        forward = [
            [Fraction(int(k == i) - int(k == i + 1)) for i in range(n)] for k in range(n + 1)
        ]
        backward = [[Fraction(int(k <= i)) for k in range(n + 1)] for i in range(n)]
        return forward, backward
    if datum.kind is LieType.D:
        forward = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n - 1):
            forward[i][i] += 1
            forward[i + 1][i] -= 1
        forward[n - 2][n - 1] += 1
        forward[n - 1][n - 1] += 1
        return forward, inverse(forward)
    msg = f"No ambient coordinates for {label}; describe the map by a reflection word"
    raise ValueError(msg)


@dataclass(frozen=True)
class ComponentMap:
    """y_target = sign * M(x_source) for one root lattice component.

    M is either a signed permutation of ambient coordinates (``ambient``,
    one ``(source coordinate, sign)`` pair per target coordinate, 1-based) or
    a product of reflections in simple roots (``word``); the identity if
    neither is given.
    """

    target: int
    source: int
    ambient: tuple[tuple[int, int], ...] = ()
    word: tuple[int, ...] = ()
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            msg = f"Sign must be +1 or -1, got {self.sign}"
            raise ValueError(msg)
        if self.ambient and self.word:
            msg = "A component map takes either ambient coordinates or a reflection word"
            raise ValueError(msg)

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ComponentMap":
        """Parse {"target": 2, "source": 6, "word": [1, 3], "sign": -1}."""
        return cls(
            target=int(data["target"]),
            source=int(data.get("source", data["target"])),
            ambient=tuple((int(k), int(s)) for k, s in data.get("ambient", ())),
            word=tuple(int(x) for x in data.get("word", ())),
            sign=int(data.get("sign", 1)),
        )

    def root_matrix(self, label: str) -> QMatrix:
        """The map on simple-root coordinates of the component."""
        rank = root_datum(label).rank
        matrix = [[Fraction(x) for x in row] for row in identity_matrix(rank)]
        if self.ambient:
            forward, backward = _ambient_basis(label)
            size = len(forward)
            if len(self.ambient) != size:
                msg = f"{label} needs {size} ambient images, got {len(self.ambient)}"
                raise ValueError(msg)
            ambient = [[Fraction(0)] * size for _ in range(size)]
            for k, (source, sign) in enumerate(self.ambient):
                ambient[k][source - 1] = Fraction(sign)
            matrix = mat_mul(mat_mul(backward, ambient), forward)
        for node in self.word:
            matrix = mat_mul(matrix, _reflection(label, node))
        if any(x.denominator != 1 for row in matrix for x in row):
            msg = f"Map on {label} does not preserve its root lattice"
            raise ValueError(msg)
        return [[x * self.sign for x in row] for row in matrix]


@dataclass
class BaseAutomorphismSpec(ABC):
    """Base class for lattice automorphisms described in a data file."""

    name: str
    order: int | None = None
    cycle_shape: dict[int, int] | None = None
    # recorded orbifold dimensions, e.g. {"dim_v1_orbifold": 48}
    expected: dict[str, int] = field(default_factory=dict)

    @abstractmethod
    def lattice(self) -> EvenLattice:
        """The lattice the automorphism acts on."""

    @abstractmethod
    def matrix(self, lattice: EvenLattice) -> list[list[int]]:
        """Integer matrix in the lattice basis."""

    def build(self) -> LatticeAut:
        """Compile and check against the recorded order and cycle shape.

        Raises:
            ValueError: If the map is not an automorphism or disagrees with the
                recorded data.

        """
        lattice = self.lattice()
        g = LatticeAut(lattice, tuple(map(tuple, self.matrix(lattice))))
        if self.order is not None and g.order != self.order:
            msg = f"{self.name}: expected order {self.order}, got {g.order}"
            raise ValueError(msg)
        if self.cycle_shape is not None and g.cycle_shape != self.cycle_shape:
            msg = (
                f"{self.name}: expected cycle shape {format_cycle_shape(self.cycle_shape)}, "
                f"got {format_cycle_shape(g.cycle_shape)}"
            )
            raise ValueError(msg)
        logger.info(
            "%s: order %d, cycle shape %s", self.name, g.order, format_cycle_shape(g.cycle_shape)
        )
        return g


@dataclass
class MatrixAutomorphismSpec(BaseAutomorphismSpec):
    """Automorphism given by a raw integer matrix on a lattice given by its Gram matrix."""

    gram: tuple[tuple[int, ...], ...] = ()
    entries: tuple[tuple[int, ...], ...] = ()

    def lattice(self) -> EvenLattice:
        """Lattice with the stored Gram matrix."""
        return EvenLattice(self.gram, name=self.name)

    def matrix(self, lattice: EvenLattice) -> list[list[int]]:
        """The stored matrix."""
        del lattice
        return [list(row) for row in self.entries]


@dataclass
class GluedAutomorphismSpec(BaseAutomorphismSpec):
    """Automorphism of a glued lattice built from component maps and an optional global -1."""

    glue: GlueSpec | None = None
    components: tuple[ComponentMap, ...] = ()
    negate: bool = False
    _cache: dict[str, EvenLattice] = field(default_factory=dict, repr=False, compare=False)

    def lattice(self) -> EvenLattice:
        """The glued lattice (built once)."""
        if self.glue is None:
            msg = f"{self.name}: no glue description"
            raise ValueError(msg)
        if "lattice" not in self._cache:
            self._cache["lattice"] = glue_lattice(self.glue)
        return self._cache["lattice"]

    def root_map(self) -> QMatrix:
        """Block matrix of the component maps on simple-root coordinates."""
        if self.glue is None:
            msg = f"{self.name}: no glue description"
            raise ValueError(msg)
        labels = self.glue.components
        offsets = self.glue.offsets
        size = self.glue.rank
        result = [[Fraction(0)] * size for _ in range(size)]
        targets = sorted(m.target for m in self.components)
        sources = sorted(m.source for m in self.components)
        expected = list(range(1, len(labels) + 1))
        if targets != expected or sources != expected:
            msg = f"{self.name}: component maps must permute all {len(labels)} components"
            raise ValueError(msg)
        for component in self.components:
            t, s = component.target - 1, component.source - 1
            if labels[t] != labels[s]:
                msg = f"{self.name}: cannot map {labels[s]} onto {labels[t]}"
                raise ValueError(msg)
            block = component.root_matrix(labels[t])
            for r, row in enumerate(block):
                for c, value in enumerate(row):
                    result[offsets[t] + r][offsets[s] + c] = value
        if self.negate:
            result = [[-x for x in row] for row in result]
        return result

    def matrix(self, lattice: EvenLattice) -> list[list[int]]:
        """Conjugate the root map into the lattice basis: g = (P^T)^-1 A P^T."""
        basis = [list(row) for row in (lattice.embedding or ())]
        columns = transpose(basis)
        g = mat_mul(mat_mul(inverse(columns), self.root_map()), columns)
        if any(x.denominator != 1 for row in g for x in row):
            msg = f"{self.name}: map does not preserve the glue group of {lattice.name}"
            raise ValueError(msg)
        return [[int(x) for x in row] for row in g]


def _shape_from_json(data: Mapping[str, Any] | None) -> dict[int, int] | None:
    if data is None:
        return None
    return {int(k): int(b) for k, b in sorted(data.items(), key=lambda kv: int(kv[0]))}


def automorphism_from_json(
    data: Mapping[str, Any], glue_table: Mapping[str, GlueSpec] | None = None
) -> BaseAutomorphismSpec:
    """Parse an automorphism description.

    Two forms are accepted: {"gram": [[...]], "aut": [[...]]} for a raw matrix,
    and {"lattice": "A4^6" or {"components": ..., "glue": [...]},
    "components": [...], "negate": bool} for a structured map.

    Raises:
        ValueError: If neither form matches.

    """
    name = str(data.get("name", ""))
    order = int(data["order"]) if "order" in data else None
    shape = _shape_from_json(data.get("cycle_shape"))
    expected = {str(k): int(v) for k, v in data.get("expected", {}).items()}
    if "aut" in data:
        if "gram" not in data:
            msg = "A raw automorphism needs the Gram matrix of its lattice"
            raise ValueError(msg)
        return MatrixAutomorphismSpec(
            name=name or "custom",
            order=order,
            cycle_shape=shape,
            expected=expected,
            gram=tuple(tuple(int(x) for x in row) for row in data["gram"]),
            entries=tuple(tuple(int(x) for x in row) for row in data["aut"]),
        )
    lattice = data.get("lattice")
    if lattice is None:
        msg = "Automorphism description needs either 'aut' or 'lattice'"
        raise ValueError(msg)
    if isinstance(lattice, str):
        table = glue_table or {}
        if lattice not in table:
            msg = f"Unknown Niemeier lattice {lattice!r}; known: {', '.join(sorted(table))}"
            raise ValueError(msg)
        glue = table[lattice]
    else:
        glue = GlueSpec.parse(
            lattice["components"], lattice.get("glue", ()), lattice.get("name", "")
        )
    components = tuple(ComponentMap.from_json(item) for item in data.get("components", ()))
    return GluedAutomorphismSpec(
        name=name or glue.name,
        order=order,
        cycle_shape=shape,
        expected=expected,
        glue=glue,
        components=components,
        negate=bool(data.get("negate", False)),
    )


def describe_maps(maps: Sequence[ComponentMap]) -> list[str]:
    """One line per component map, for logs and reports."""
    lines = []
    for m in maps:
        if m.ambient:
            body = "ambient " + ",".join(f"{'-' if s < 0 else ''}x{k}" for k, s in m.ambient)
        elif m.word:
            body = "word " + "".join(f"s{k}" for k in m.word)
        else:
            body = "identity"
        sign = "-" if m.sign < 0 else ""
        lines.append(f"{m.source} -> {m.target}: {sign}{body}")
    return lines
