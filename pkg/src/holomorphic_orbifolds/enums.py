"""Closed vocabularies: Lie types, SL2 generators, verdict stages and feasibility outcomes."""

import re
from enum import Enum


class LieType(Enum):
    """Cartan types of simple Lie algebras."""

    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    G = "G"

    @classmethod
    def parse(cls, label: str) -> tuple["LieType", int]:
        """Split a label such as "E6" or "A_4" into type and rank."""
        match = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", label)
        if match is None:
            msg = f"Unsupported Lie type label: {label!r}"
            raise ValueError(msg)
        kind = cls(match.group(1).upper())
        rank = int(match.group(2))
        kind.check_rank(rank)
        return kind, rank

    def check_rank(self, rank: int) -> None:
        """Raise ValueError if the rank does not exist for this series."""
        minimum = {LieType.A: 1, LieType.B: 2, LieType.C: 2, LieType.D: 3}
        allowed = {LieType.E: (6, 7, 8), LieType.F: (4,), LieType.G: (2,)}
        if self in allowed and rank not in allowed[self]:
            msg = f"Unsupported rank {rank} for type {self.value}"
            raise ValueError(msg)
        if self in minimum and rank < minimum[self]:
            msg = f"Unsupported rank {rank} for type {self.value}"
            raise ValueError(msg)

    @property
    def simply_laced(self) -> bool:
        """Whether all roots have the same length."""
        return self in (LieType.A, LieType.D, LieType.E)


class Generator(Enum):
    """Standard generators of SL2(Z)."""

    S = "S"
    T = "T"

    @classmethod
    def parse(cls, symbol: str) -> "Generator":
        """Parse "S" or "T"."""
        try:
            return cls(symbol.upper())
        except ValueError:
            msg = f"Unknown SL2 generator: {symbol!r}"
            raise ValueError(msg) from None


class SeriesOp(Enum):
    """Binary operations on q-series."""

    ADD = "add"
    MUL = "mul"
    DIV = "div"
    POW = "pow"


class FeasibilityStatus(Enum):
    """Outcome of an exact feasibility question."""

    FEASIBLE_RATIONAL = "feasible_rational"
    INFEASIBLE_RATIONAL = "infeasible_rational"
    FEASIBLE_INTEGER = "feasible_integer"
    INFEASIBLE_INTEGER = "infeasible_integer"
    FEASIBLE_NONNEG_INTEGER = "feasible_nonneg_integer"
    INFEASIBLE_NONNEG_INTEGER = "infeasible_nonneg_integer"
    INCONCLUSIVE = "inconclusive"

    @property
    def feasible(self) -> bool:
        """Whether a witness was found."""
        return self in (
            FeasibilityStatus.FEASIBLE_RATIONAL,
            FeasibilityStatus.FEASIBLE_INTEGER,
            FeasibilityStatus.FEASIBLE_NONNEG_INTEGER,
        )


class VerdictStage(Enum):
    """Stage at which the classification cascade settled a candidate."""

    Q_INFEASIBLE = "q_infeasible"
    Z_INFEASIBLE = "z_infeasible"
    Z_NONNEG_INFEASIBLE = "z_nonneg_infeasible"
    FEASIBLE = "feasible"
    OUT_OF_SCOPE = "out_of_scope"
    INCONCLUSIVE = "inconclusive"
