"""Exact computations for cyclic orbifolds of holomorphic vertex operator algebras.

Fusion groups and Weil representations of cyclic orbifolds, q-series and their
SL2(Z) transformations, the weight-2 feasibility cascade for affine structures
of central charge 24, and V_1 dimensions of orbifolds of Niemeier lattice VOAs.
"""

from .classify import (
    Verdict,
    check_candidate,
    enumerate_candidates,
    parse_candidate,
    run_classification,
)
from .config import AUTOMORPHISMS, NIEMEIER_GLUE, RunConfig
from .enums import FeasibilityStatus, Generator, LieType, VerdictStage
from .lattice import EvenLattice, GlueSpec, LatticeAut, glue_lattice, theta_series
from .orbifold import OrbifoldResult, orbifold_v1_dim, prepare_run, run_orbifold
from .quadform import FiniteQuadraticModule, fusion_group, weil_rep

__all__ = [
    "AUTOMORPHISMS",
    "NIEMEIER_GLUE",
    "EvenLattice",
    "FeasibilityStatus",
    "FiniteQuadraticModule",
    "Generator",
    "GlueSpec",
    "LatticeAut",
    "LieType",
    "OrbifoldResult",
    "RunConfig",
    "Verdict",
    "VerdictStage",
    "check_candidate",
    "enumerate_candidates",
    "fusion_group",
    "glue_lattice",
    "orbifold_v1_dim",
    "parse_candidate",
    "prepare_run",
    "run_classification",
    "run_orbifold",
    "theta_series",
    "weil_rep",
]
