"""Classification of the affine structures of holomorphic VOAs of central charge 24.

A candidate is a semisimple Lie algebra g = g_1,k_1 + ... + g_n,k_n with
h^vee_i / k_i = (dim g - 24) / 24. The weight-two space of a VOA with V_1 = g
is the vacuum part plus m_lambda copies of the top levels of the modules
L_{k,lambda} of conformal weight 2, and the weight data must satisfy a fixed
list of polynomial identities in a Cartan element z. Evaluating them at
rational points gives a linear system in the m_lambda, which is then checked
for solutions over Q>=0, Z and Z>=0.
"""

import logging
import random
import re
from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from multiprocessing import Pool

from .config import RunConfig, expected_verdicts
from .enums import FeasibilityStatus, LieType, VerdictStage
from .exactmath import mat_vec
from .feasibility import (
    FeasibilityResult,
    check_divisibility,
    check_farkas,
    integer_solvable,
    lp_feasible_nonneg,
    nonneg_integer_feasible,
    verify_branch_tree,
)
from .liealg import (
    Component,
    Degree2Vacuum,
    RootDatum,
    SemisimpleCandidate,
    Weight,
    WeightSystem,
    conformal_weight,
    coroot_norm,
    root_datum,
    vacuum_degree2_weights,
    weight_system,
    weyl_dim,
)

logger = logging.getLogger(__name__)

DIM_V2 = 196884
MAX_DIM = 2352
TOP_POWER = 14
IDENTITY_POWERS = (2, 4, 6, 8, 10, 14)
FRESH_POINTS = 10
DIMENSION_ROW = "S^0"
_PRIME = 2**61 - 1
_TYPE_ORDER = {kind: i for i, kind in enumerate(LieType)}

ModuleTuple = tuple[Weight, ...]


# --- candidates ----------------------------------------------------------------------


def _simple_catalog() -> list[tuple[LieType, int, int, int]]:
    """(type, rank, dim, h^vee) of every simple Lie algebra with dim <= MAX_DIM, without repeats."""
    catalog = []
    n = 1
    while n * (n + 2) <= MAX_DIM:
        catalog.append((LieType.A, n, n * (n + 2), n + 1))
        n += 1
    n = 2
    while n * (2 * n + 1) <= MAX_DIM:
        catalog.append((LieType.B, n, n * (2 * n + 1), 2 * n - 1))
        if n >= 3:
            catalog.append((LieType.C, n, n * (2 * n + 1), n + 1))
        n += 1
    n = 4
    while n * (2 * n - 1) <= MAX_DIM:
        catalog.append((LieType.D, n, n * (2 * n - 1), 2 * n - 2))
        n += 1
    catalog += [
        (LieType.E, 6, 78, 12),
        (LieType.E, 7, 133, 18),
        (LieType.E, 8, 248, 30),
        (LieType.F, 4, 52, 9),
        (LieType.G, 2, 14, 4),
    ]
    return catalog


def _component_key(component: Component) -> tuple[int, int, int]:
    return _TYPE_ORDER[component.datum.kind], component.datum.rank, component.level


def make_candidate(components: Sequence[Component]) -> SemisimpleCandidate:
    """Candidate with its components in canonical order."""
    return SemisimpleCandidate(tuple(sorted(components, key=_component_key)))


def enumerate_candidates() -> list[SemisimpleCandidate]:
    """All g with h^vee_i / k_i = (dim g - 24) / 24 for every simple ideal, ordered by dimension."""
    catalog = _simple_catalog()
    found: list[SemisimpleCandidate] = []
    for total in range(25, MAX_DIM + 1):
        ratio = Fraction(total - 24, 24)
        items = []
        for kind, rank, dim, dual_coxeter in catalog:
            level = dual_coxeter / ratio
            if dim <= total and level.denominator == 1:
                items.append((kind, rank, dim, int(level)))

        def extend(start: int, remaining: int, chosen: list[tuple[LieType, int, int, int]]) -> None:
            if remaining == 0:
                found.append(make_candidate(
                    [Component(root_datum((kind, rank)), level) for kind, rank, _, level in chosen]
                ))
                return
            for index in range(start, len(items)):
                if items[index][2] <= remaining:
                    extend(index, remaining - items[index][2], [*chosen, items[index]])

        extend(0, total, [])
    found.sort(key=lambda c: (c.dim, [_component_key(x) for x in c.components]))
    logger.debug("enumerated %d candidates", len(found))
    return found


_TOKEN = re.compile(r"([A-Ga-g])_?(\d+),(\d+)(?:\^(\d+))?")


def parse_candidate(name: str) -> SemisimpleCandidate:
    """Parse names such as "A4,5^2" or "A1,1 C5,3 G2,2" (C2 is read as B2).

    Raises:
        ValueError: On malformed names.

    """
    components = []
    tokens = name.replace("_", "").split()
    if not tokens:
        msg = "Empty candidate name"
        raise ValueError(msg)
    for token in tokens:
        match = _TOKEN.fullmatch(token)
        if match is None:
            msg = f"Invalid component {token!r}; expected e.g. A4,5 or A1,2^6"
            raise ValueError(msg)
        kind, rank = LieType.parse(match.group(1) + match.group(2))
        if kind is LieType.C and rank == 2:
            kind = LieType.B
        level = int(match.group(3))
        if level < 1:
            msg = f"Level must be positive in {token!r}"
            raise ValueError(msg)
        components += [Component(root_datum((kind, rank)), level)] * int(match.group(4) or 1)
    return make_candidate(components)


# --- weight two modules --------------------------------------------------------------


@lru_cache(maxsize=None)
def _options(datum: RootDatum, level: int) -> tuple[tuple[Weight, Fraction], ...]:
    """Integrable weights of conformal weight at most 2, ordered by conformal weight.

    Both the conformal weight and (lambda, theta) grow with every Dynkin label,
    so each label is raised only while the prefix (padded with zeros) stays
    within both bounds.
    """
    rank = datum.rank
    result: list[tuple[Weight, Fraction]] = []

    def extend(prefix: list[int]) -> None:
        if len(prefix) == rank:
            result.append((tuple(prefix), conformal_weight(datum, prefix, level)))
            return
        value = 0
        while True:
            trial = [*prefix, value] + [0] * (rank - len(prefix) - 1)
            if datum.level_of(trial) > level or conformal_weight(datum, trial, level) > 2:
                break
            extend([*prefix, value])
            value += 1

    extend([])
    return tuple(sorted(result, key=lambda o: (o[1], o[0])))


def _blocks(candidate: SemisimpleCandidate) -> list[tuple[Component, range]]:
    blocks, start = [], 0
    for component, count in candidate.classes():
        blocks.append((component, range(start, start + count)))
        start += count
    return blocks


def _multisets(
    options: Sequence[tuple[Weight, Fraction]], size: int, budget: Fraction, start: int = 0
) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Non-decreasing index sequences of the given size with total weight <= budget."""
    if size == 0:
        yield (), Fraction(0)
        return
    for index in range(start, len(options)):
        h = options[index][1]
        if h * size > budget:
            # the remaining entries are at least as heavy
            break
        for rest, weight in _multisets(options, size - 1, budget - h, index):
            yield (index, *rest), weight + h


@dataclass(frozen=True)
class ModuleOrbit:
    """A weight-2 module class L_{k,lambda} up to permuting identical components."""

    representative: ModuleTuple
    size: int

    @property
    def label(self) -> str:
        """Text such as (1,0,0)(0,1)."""
        return "".join("(" + ",".join(str(x) for x in lam) + ")" for lam in self.representative)


def _sorted_options(candidate: SemisimpleCandidate) -> list[tuple[tuple[Weight, Fraction], ...]]:
    return [_options(c.datum, c.level) for c in candidate.components]


def weight2_orbits(candidate: SemisimpleCandidate) -> list[ModuleOrbit]:
    """Orbit representatives of the weight-2 tuples, enumerated block by block."""
    per_block = [
        (_options(c.datum, c.level), len(positions)) for c, positions in _blocks(candidate)
    ]
    orbits: list[ModuleOrbit] = []

    def combine(b: int, budget: Fraction, chosen: list[tuple[Weight, ...]], size: int) -> None:
        if b == len(per_block):
            if budget == 0:
                representative = tuple(lam for block in chosen for lam in block)
                if any(any(lam) for lam in representative):
                    orbits.append(ModuleOrbit(representative, size))
            return
        options, count = per_block[b]
        for indices, weight in _multisets(options, count, budget):
            multiplicity = factorial(count) // prod(factorial(c) for c in Counter(indices).values())
            block = tuple(options[i][0] for i in indices)
            combine(b + 1, budget - weight, [*chosen, block], size * multiplicity)

    combine(0, Fraction(2), [], 1)
    orbits.sort(key=lambda o: o.representative)
    logger.debug("%s: %d weight-2 orbits", candidate.name, len(orbits))
    return orbits


def _block_order(options: Sequence[tuple[Weight, Fraction]]) -> Callable[[Weight], int]:
    index = {lam: i for i, (lam, _) in enumerate(options)}
    return index.__getitem__


def weight2_modules(candidate: SemisimpleCandidate) -> list[ModuleTuple]:
    """Every tuple (lambda_1, ..., lambda_n) of integrable weights with sum h = 2, except 0."""
    per_component = _sorted_options(candidate)
    result: list[ModuleTuple] = []

    def extend(i: int, budget: Fraction, chosen: list[Weight]) -> None:
        if i == len(per_component):
            if budget == 0 and any(any(lam) for lam in chosen):
                result.append(tuple(chosen))
            return
        for lam, h in per_component[i]:
            if h > budget:
                break
            extend(i + 1, budget - h, [*chosen, lam])

    extend(0, Fraction(2), [])
    return sorted(result)


def symmetry_reduce(
    tuples: Sequence[ModuleTuple], candidate: SemisimpleCandidate
) -> list[ModuleOrbit]:
    """Group tuples into orbits under permutations of identical components."""
    orders = [_block_order(options) for options in _sorted_options(candidate)]
    counts: Counter[ModuleTuple] = Counter()
    for t in tuples:
        parts = []
        for _, positions in _blocks(candidate):
            key = orders[positions.start]
            parts.extend(sorted((t[p] for p in positions), key=key))
        counts[tuple(parts)] += 1
    return [ModuleOrbit(rep, size) for rep, size in sorted(counts.items())]


def forced_zero_count(candidate: SemisimpleCandidate) -> int:
    """Number of nonzero tuples with total weight 0 or 1; these cannot occur when V_1 = g."""
    per_component = _sorted_options(candidate)
    count = 0

    def extend(i: int, total: Fraction, nonzero: bool) -> None:
        nonlocal count
        if total > 1:
            return
        if i == len(per_component):
            if nonzero and total.denominator == 1:
                count += 1
            return
        for lam, h in per_component[i]:
            if total + h > 1:
                break
            extend(i + 1, total + h, nonzero or any(lam))

    extend(0, Fraction(0), False)
    return count


# --- evaluation at rational points -----------------------------------------------------


@lru_cache(maxsize=None)
def _binomials(top: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(comb(j, a) for a in range(j + 1)) for j in range(top + 1))


def _convolve(x: Sequence[int], y: Sequence[int]) -> list[int]:
    """Power sums of a tensor product of modules on independent coordinates."""
    binomials = _binomials(len(x) - 1)
    return [sum(c * x[a] * y[j - a] for a, c in enumerate(binomials[j])) for j in range(len(x))]


def evaluation_point(candidate: SemisimpleCandidate, seed: int, index: int) -> list[list[int]]:
    """Deterministic integer point z, given by its pairings with the fundamental weights."""
    rng = random.Random(seed * 1_000_003 + index)
    return [
        [rng.randint(-4, 4) or 1 for _ in range(c.datum.rank)] for c in candidate.components
    ]


@dataclass
class _PointData:
    """Everything the identities need at one point z."""

    v1: list[Fraction]
    vacuum: list[Fraction]
    norm: Fraction
    sums: list[dict[Weight, list[int]]]


def _point_data(candidate: SemisimpleCandidate, z: Sequence[Sequence[int]]) -> _PointData:
    v1 = [Fraction(0)] * (TOP_POWER + 1)
    norm = Fraction(0)
    sums = []
    for component, zi in zip(candidate.components, z, strict=True):
        datum = component.datum
        theta = datum.root_labels(datum.highest_root)
        adjoint = _weight_system(datum, theta).power_sums(zi, TOP_POWER)
        v1 = [a + b for a, b in zip(v1, adjoint, strict=True)]
        norm += component.level * coroot_norm(datum, zi)
        table = {}
        for lam, _ in _options(datum, component.level):
            if any(lam):
                table[lam] = [int(s) for s in _weight_system(datum, lam).power_sums(zi, TOP_POWER)]
            else:
                table[lam] = [1] + [0] * TOP_POWER
        sums.append(table)
    expected = Fraction(candidate.dim - 24, 12) * norm
    if v1[2] != expected:
        msg = f"{candidate.name}: S^2 of V_1 is {v1[2]}, expected {expected}"
        raise ArithmeticError(msg)
    vacuum = _vacuum(candidate).power_sums(z, TOP_POWER)
    return _PointData(v1, vacuum, norm, sums)


@lru_cache(maxsize=None)
def _weight_system(datum: RootDatum, lam: Weight) -> WeightSystem:
    return weight_system(datum, lam)


@lru_cache(maxsize=32)
def _vacuum(candidate: SemisimpleCandidate) -> Degree2Vacuum:
    return vacuum_degree2_weights(candidate)


def _orbit_sums(
    candidate: SemisimpleCandidate, orbit: ModuleOrbit, point: _PointData
) -> list[Fraction]:
    """Power sums of the top levels averaged over the orbit, at one point.

    The unknown attached to an orbit is the total multiplicity of its tuples,
    so its coefficient is the orbit average.
    """
    total = [1] + [0] * TOP_POWER
    for _, positions in _blocks(candidate):
        counts = Counter(orbit.representative[p] for p in positions)
        weights = sorted(counts)
        states = {tuple(counts[w] for w in weights): [1] + [0] * TOP_POWER}
        for p in positions:
            following: dict[tuple[int, ...], list[int]] = {}
            for state, acc in states.items():
                for k, remaining in enumerate(state):
                    if not remaining:
                        continue
                    key = (*state[:k], remaining - 1, *state[k + 1:])
                    lam = weights[k]
                    term = _convolve(acc, point.sums[p][lam]) if any(lam) else acc
                    if key in following:
                        following[key] = [a + b for a, b in zip(following[key], term, strict=True)]
                    else:
                        following[key] = list(term)
            states = following
        (block,) = states.values()
        total = _convolve(total, block)
    return [Fraction(x, orbit.size) for x in total]


def identity_right_sides(
    v1: Sequence[Fraction], norm: Fraction, dim_v1: int
) -> dict[int, Fraction]:
    """Right hand sides of the weight-2 identities from the power sums of V_1.

    Key j is S^j of V_2 for j <= 10; key 14 is 48 S^14 - 364 S^12 <z,z>.
    """
    s = v1
    n = norm
    return {
        2: (32808 - 2 * dim_v1) * n,
        4: 240 * s[4] + (15264 - 6 * dim_v1) * n**2,
        6: -504 * s[6] + 900 * s[4] * n + (11160 - 15 * dim_v1) * n**3,
        8: 480 * s[8] - 2352 * s[6] * n + 2520 * s[4] * n**2 + (10920 - 35 * dim_v1) * n**4,
        10: (
            -264 * s[10] + 2700 * s[8] * n - 7560 * s[6] * n**2 + 6300 * s[4] * n**3
            + (13230 - Fraction(315, 4) * dim_v1) * n**5
        ),
        14: (
            -1152 * s[14] + 288288 * s[10] * n**2 - 2162160 * s[8] * n**3
            + 5045040 * s[6] * n**4 - 3783780 * s[4] * n**5 + (45045 * dim_v1 - 5405400) * n**7
        ),
    }


def identity_left_sides(sums: Sequence[Fraction | int], norm: Fraction) -> dict[int, Fraction]:
    """The left hand sides of :func:`identity_right_sides` for weights with these power sums."""
    left = {j: Fraction(sums[j]) for j in IDENTITY_POWERS if j != 14}
    left[14] = 48 * Fraction(sums[14]) - 364 * sums[12] * norm
    return left


def _identity_rows(
    point: _PointData, orbit_sums: Sequence[Sequence[Fraction]], dim_v1: int
) -> list[tuple[str, list[Fraction], Fraction]]:
    """(name, coefficients, right hand side) for the six weight-2 identities at one point."""
    rhs = identity_right_sides(point.v1, point.norm, dim_v1)
    vacuum = identity_left_sides(point.vacuum, point.norm)
    columns = [identity_left_sides(o, point.norm) for o in orbit_sums]
    return [
        (f"S^{j}", [c[j] for c in columns], rhs[j] - vacuum[j]) for j in IDENTITY_POWERS
    ]


class _RowSpace:
    """Echelon basis modulo a large prime, used to keep only independent rows."""

    def __init__(self, width: int) -> None:
        self.width = width
        self.pivots: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, row: Sequence[Fraction]) -> bool:
        """Insert a row; True when it was independent of the previous ones."""
        try:
            v = [x.numerator * pow(x.denominator, -1, _PRIME) % _PRIME for x in row]
        except ValueError:  # pragma: no cover - a denominator divisible by the prime
            return True
        for c in range(self.width):
            if v[c] and c in self.pivots:
                f = v[c]
                pivot = self.pivots[c]
                v = [(a - f * b) % _PRIME for a, b in zip(v, pivot, strict=True)]
        lead = next((c for c in range(self.width) if v[c]), None)
        if lead is None:
            return False
        inv = pow(v[lead], -1, _PRIME)
        v = [a * inv % _PRIME for a in v]
        for c, pivot in self.pivots.items():
            if pivot[lead]:
                f = pivot[lead]
                self.pivots[c] = [(a - f * b) % _PRIME for a, b in zip(pivot, v, strict=True)]
        self.pivots[lead] = v
        return True


@dataclass
class CandidateSystem:
    """Linear system in the orbit multiplicities m_lambda for one candidate."""

    candidate: SemisimpleCandidate
    variables: list[ModuleOrbit]
    a: list[list[Fraction]] = field(default_factory=list)
    b: list[Fraction] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)
    points: list[int] = field(default_factory=list)
    forced_zero: int = 0

    def add_row(self, name: str, coefficients: list[Fraction], rhs: Fraction) -> None:
        """Append an equation."""
        self.a.append(coefficients)
        self.b.append(rhs)
        self.provenance.append(name)

    def identity_rows(self) -> tuple[list[list[Fraction]], list[Fraction]]:
        """The rows from the power sum identities, without the dimension equation."""
        keep = [i for i, name in enumerate(self.provenance) if name != DIMENSION_ROW]
        return [self.a[i] for i in keep], [self.b[i] for i in keep]

    def residuals(self, x: Sequence[Fraction | int]) -> list[Fraction]:
        """A x - b."""
        if not self.variables:
            return [-v for v in self.b]
        return [lhs - rhs for lhs, rhs in zip(mat_vec(self.a, x), self.b, strict=True)]


def build_system(
    candidate: SemisimpleCandidate, point_count_margin: int = 2, seed: int = 24
) -> CandidateSystem:
    """Evaluate the identities at points until the rank is stable for point_count_margin points.

    Only rows that raise the rank of the augmented matrix are kept.
    """
    orbits = weight2_orbits(candidate)
    system = CandidateSystem(candidate, orbits, forced_zero=forced_zero_count(candidate))
    vacuum_dim = _vacuum(candidate).dimension
    components = candidate.components
    dims = [
        prod(weyl_dim(c.datum, lam) for c, lam in zip(components, o.representative, strict=True))
        for o in orbits
    ]
    space = _RowSpace(len(orbits) + 1)
    dimension_row = [Fraction(d) for d in dims]
    system.add_row(DIMENSION_ROW, dimension_row, Fraction(DIM_V2 - vacuum_dim))
    stable = 0
    index = 0
    limit = len(orbits) + point_count_margin + 2
    while stable <= point_count_margin and space.rank < len(orbits) + 1 and index < limit:
        z = evaluation_point(candidate, seed, index)
        point = _point_data(candidate, z)
        sums = [_orbit_sums(candidate, o, point) for o in orbits]
        grew = False
        for name, coefficients, rhs in _identity_rows(point, sums, candidate.dim):
            if space.add([*coefficients, rhs]):
                system.add_row(f"{name} @ z{index}", coefficients, rhs)
                grew = True
        system.points.append(index)
        stable = 0 if grew else stable + 1
        logger.debug(
            "%s: point %d, rank %d of %d", candidate.name, index, space.rank, len(orbits) + 1
        )
        index += 1
    logger.debug(
        "%s: %d variables, %d rows from %d points",
        candidate.name,
        len(orbits),
        len(system.a),
        index,
    )
    return system


def extend_system(system: CandidateSystem, seed: int, indices: Sequence[int]) -> int:
    """Add the identity rows at further points; returns the number of rows added."""
    candidate = system.candidate
    added = 0
    for index in indices:
        point = _point_data(candidate, evaluation_point(candidate, seed, index))
        sums = [_orbit_sums(candidate, o, point) for o in system.variables]
        for name, coefficients, rhs in _identity_rows(point, sums, candidate.dim):
            system.add_row(f"{name} @ z{index}", coefficients, rhs)
            added += 1
        system.points.append(index)
    return added


def verify_witness(
    system: CandidateSystem, witness: Sequence[Fraction | int], seed: int, indices: Sequence[int]
) -> bool:
    """Check a solution against the stored rows and the identities at fresh points."""
    if any(r != 0 for r in system.residuals(witness)):
        return False
    candidate = system.candidate
    support = [(o, Fraction(m)) for o, m in zip(system.variables, witness, strict=True) if m]
    for index in indices:
        point = _point_data(candidate, evaluation_point(candidate, seed, index))
        sums = [_orbit_sums(candidate, o, point) for o, _ in support]
        for _, coefficients, rhs in _identity_rows(point, sums, candidate.dim):
            lhs = sum((c * m for c, (_, m) in zip(coefficients, support, strict=True)), Fraction(0))
            if lhs != rhs:
                return False
    return True


# --- verdicts ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    """Outcome of the feasibility cascade for one candidate."""

    candidate: SemisimpleCandidate
    stage: VerdictStage
    witness: dict[str, int] | None = None
    certificate: object = None
    detail: str = ""
    variables: int = 0
    rows: int = 0
    points: int = 0

    def to_json(self, index: int | None = None) -> dict[str, object]:
        """JSON-ready row."""
        row: dict[str, object] = {}
        if index is not None:
            row["index"] = index
        row.update({
            "candidate": self.candidate.name,
            "dim": self.candidate.dim,
            "stage": self.stage.value,
            "detail": self.detail,
            "variables": self.variables,
            "rows": self.rows,
            "points": self.points,
            "witness": self.witness,
            "certificate": _jsonable(self.certificate),
        })
        return row


def _jsonable(value: object) -> object:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_jsonable(v) for v in value]
    return value


def verify_certificate(system: CandidateSystem, verdict: Verdict) -> bool:
    """Re-check the certificate of an infeasibility verdict against the stored system.

    The rational and integral stages run on the identity rows; the search over
    the nonnegative integers adds the dimension equation.
    """
    certificate = verdict.certificate
    a, b = system.identity_rows()
    if verdict.stage is VerdictStage.Q_INFEASIBLE:
        if isinstance(certificate, dict) and "row" in certificate:
            return system.b[certificate["row"]] != 0 and not system.variables
        if not isinstance(certificate, list | tuple):
            return False
        return check_farkas(a, b, [Fraction(v) for v in certificate])
    if verdict.stage is VerdictStage.Z_INFEASIBLE:
        return isinstance(certificate, dict) and check_divisibility(a, b, certificate)
    if verdict.stage is VerdictStage.Z_NONNEG_INFEASIBLE:
        tree = certificate.get("tree") if isinstance(certificate, dict) else None
        return isinstance(tree, dict) and verify_branch_tree(system.a, system.b, tree)
    return False


def _witness_labels(system: CandidateSystem, witness: Sequence[Fraction]) -> dict[str, int]:
    return {o.label: int(m) for o, m in zip(system.variables, witness, strict=True) if m}


def _no_variable_verdict(system: CandidateSystem) -> Verdict:
    counts = {"variables": 0, "rows": len(system.a), "points": len(system.points)}
    violated = next((i for i, v in enumerate(system.b) if v != 0), None)
    if violated is None:
        return Verdict(
            system.candidate, VerdictStage.FEASIBLE, {}, detail="no weight-2 modules", **counts
        )
    return Verdict(
        system.candidate,
        VerdictStage.Q_INFEASIBLE,
        certificate={"row": violated, "provenance": system.provenance[violated]},
        detail="identity fails without weight-2 modules",
        **counts,
    )


def feasibility_verdict(system: CandidateSystem, config: RunConfig | None = None) -> Verdict:
    """Run the cascade Q>=0, then Z, then Z>=0 with bound augmentation and branching.

    The first two stages see the identity rows only. The dimension equation
    joins the search over the nonnegative integers.
    """
    config = config or RunConfig()
    if not system.variables:
        return _no_variable_verdict(system)
    counts = {
        "variables": len(system.variables),
        "rows": len(system.a),
        "points": len(system.points),
    }
    candidate = system.candidate
    a, b = system.identity_rows()
    rational = lp_feasible_nonneg(a, b, pivot_budget=config.pivot_budget)
    if rational.status is FeasibilityStatus.INCONCLUSIVE:
        return Verdict(candidate, VerdictStage.INCONCLUSIVE, detail=rational.detail, **counts)
    if not rational.feasible:
        return Verdict(
            candidate,
            VerdictStage.Q_INFEASIBLE,
            certificate=rational.certificate,
            detail=rational.detail or "farkas",
            **counts,
        )
    integral = integer_solvable(a, b)
    if not integral.feasible:
        return Verdict(
            candidate,
            VerdictStage.Z_INFEASIBLE,
            certificate=integral.certificate,
            detail=integral.detail,
            **counts,
        )
    result: FeasibilityResult = nonneg_integer_feasible(
        system.a,
        system.b,
        branch_budget=config.branch_budget,
        node_budget=config.node_budget,
        pivot_budget=config.pivot_budget,
    )
    if result.status is FeasibilityStatus.INCONCLUSIVE:
        return Verdict(candidate, VerdictStage.INCONCLUSIVE, detail=result.detail, **counts)
    if not result.feasible:
        return Verdict(
            candidate,
            VerdictStage.Z_NONNEG_INFEASIBLE,
            certificate=result.certificate,
            detail=result.detail,
            **counts,
        )
    witness = result.witness or ()
    return Verdict(
        candidate,
        VerdictStage.FEASIBLE,
        _witness_labels(system, witness),
        certificate=[str(x) for x in witness],
        detail="nonnegative integer witness",
        **counts,
    )


def out_of_scope_names() -> frozenset[str]:
    """Candidates whose systems need constraints beyond the weight-2 identities."""
    return frozenset(expected_verdicts()["out_of_scope"])


def check_candidate(candidate: SemisimpleCandidate, config: RunConfig | None = None) -> Verdict:
    """Build the system and run the cascade, re-verifying feasible witnesses at fresh points.

    A witness that fails at a fresh point means the sampled rows did not yet
    span the identities; those rows are added and the cascade is repeated.
    """
    config = config or RunConfig()
    system = build_system(candidate, config.point_margin, config.seed)
    verdict = feasibility_verdict(system, config)
    fresh = 10_000
    while verdict.stage is VerdictStage.FEASIBLE and system.variables:
        witness = [Fraction(x) for x in verdict.certificate]  # type: ignore[union-attr]
        indices = list(range(fresh, fresh + FRESH_POINTS))
        if verify_witness(system, witness, config.seed, indices):
            break
        logger.info("%s: witness fails at fresh points, adding rows", candidate.name)
        extend_system(system, config.seed, indices)
        fresh += FRESH_POINTS
        verdict = feasibility_verdict(system, config)
    if candidate.name in out_of_scope_names():
        verdict = Verdict(
            candidate,
            VerdictStage.OUT_OF_SCOPE,
            verdict.witness,
            verdict.certificate,
            f"weight-2 system alone: {verdict.stage.value}",
            verdict.variables,
            verdict.rows,
            verdict.points,
        )
    logger.info("%s: %s", candidate.name, verdict.stage.value)
    return verdict


def _check_by_index(args: tuple[int, RunConfig]) -> Verdict:
    index, config = args
    return check_candidate(enumerate_candidates_cached()[index], config)


@lru_cache(maxsize=1)
def enumerate_candidates_cached() -> tuple[SemisimpleCandidate, ...]:
    """enumerate_candidates, computed once per process."""
    return tuple(enumerate_candidates())


@dataclass(frozen=True)
class ClassificationSummary:
    """Stage counts compared with the recorded expectation."""

    counts: dict[str, int]
    expected: dict[str, int]

    @property
    def matches(self) -> bool:
        """Whether every stage count equals the expectation."""
        return all(self.counts.get(k, 0) == v for k, v in self.expected.items())

    def to_json(self) -> dict[str, object]:
        """JSON-ready dictionary."""
        return {"counts": self.counts, "expected": self.expected, "matches": self.matches}


def run_classification(
    config: RunConfig | None = None, *, parallel: bool = False, names: Sequence[str] | None = None
) -> tuple[list[Verdict], ClassificationSummary]:
    """Verdicts for all candidates (or the named ones), in canonical order."""
    config = config or RunConfig()
    candidates = enumerate_candidates_cached()
    if names is not None:
        wanted = {parse_candidate(name).name for name in names}
        indices = [i for i, c in enumerate(candidates) if c.name in wanted]
    else:
        indices = list(range(len(candidates)))
    jobs = [(i, config) for i in indices]
    if parallel and config.workers > 1:
        with Pool(config.workers) as pool:
            verdicts = list(pool.imap(_check_by_index, jobs, chunksize=1))
    else:
        verdicts = [_check_by_index(job) for job in jobs]
    counts = dict(Counter(v.stage.value for v in verdicts))
    summary = ClassificationSummary(counts, dict(expected_verdicts()["summary"]))
    logger.info("classification: %s", counts)
    return verdicts, summary


def feasible_table(verdicts: Sequence[Verdict]) -> dict[int, list[str]]:
    """Feasible affine structures by dim V_1."""
    table: dict[int, list[str]] = {}
    for verdict in verdicts:
        if verdict.stage is VerdictStage.FEASIBLE:
            table.setdefault(verdict.candidate.dim, []).append(verdict.candidate.name)
    return dict(sorted(table.items()))
