"""Simple Lie algebra root data, integrable weights, Freudenthal multiplicities and power sums."""

import logging
from collections import deque
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, factorial

from .enums import LieType
from .exactmath import QMatrix, inverse

logger = logging.getLogger(__name__)

Weight = tuple[int, ...]

_E_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def _edges(kind: LieType, rank: int) -> list[tuple[int, int]]:
    """Dynkin diagram edges (1-based, Bourbaki numbering)."""
    if kind is LieType.E:
        return [(i, j) for i, j in _E_EDGES if max(i, j) <= rank]
    if kind is LieType.D:
        return [(i, i + 1) for i in range(1, rank - 1)] + [(rank - 2, rank)]
    return [(i, i + 1) for i in range(1, rank)]


def _lengths(kind: LieType, rank: int) -> list[Fraction]:
    """Squared lengths of the simple roots with long roots of length 2."""
    two, one = Fraction(2), Fraction(1)
    if kind is LieType.B:
        return [two] * (rank - 1) + [one]
    if kind is LieType.C:
        return [one] * (rank - 1) + [two]
    if kind is LieType.F:
        return [two, two, one, one]
    if kind is LieType.G:
        return [Fraction(2, 3), two]
    return [two] * rank


@dataclass(frozen=True)
class RootDatum:
    """Root data of a simple Lie algebra normalised so that (theta, theta) = 2.

    Roots are integer tuples in the basis of simple roots; weights are Dynkin
    labels (coefficients over the fundamental weights).
    """

    kind: LieType
    rank: int
    lengths: tuple[Fraction, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]

    @property
    def label(self) -> str:
        """Short name such as E6."""
        return f"{self.kind.value}{self.rank}"

    @property
    def dim(self) -> int:
        """Dimension of the Lie algebra."""
        return self.rank + 2 * len(self.positive_roots)

    @property
    def highest_root(self) -> tuple[int, ...]:
        """Highest root in simple-root coordinates."""
        return max(self.positive_roots, key=sum)

    @cached_property
    def comarks(self) -> tuple[Fraction, ...]:
        """Coefficients of theta in the simple coroots."""
        pairs = zip(self.highest_root, self.lengths, strict=True)
        return tuple(m * length / 2 for m, length in pairs)

    @property
    def dual_coxeter(self) -> int:
        """Dual Coxeter number h^vee."""
        value = 1 + sum(self.comarks)
        return int(value)

    @cached_property
    def weight_form(self) -> QMatrix:
        """Inner products (omega_i, omega_j) of the fundamental weights."""
        inv = inverse([list(map(Fraction, row)) for row in self.cartan])
        n = self.rank
        return [[inv[i][j] * self.lengths[j] / 2 for j in range(n)] for i in range(n)]

    @cached_property
    def coweight_form(self) -> QMatrix:
        """Inverse of weight_form: the Gram matrix of the simple coroots."""
        return inverse(self.weight_form)

    def root_labels(self, root: Sequence[int]) -> Weight:
        """Dynkin labels of a root given in simple-root coordinates."""
        return tuple(
            sum(root[i] * self.cartan[i][j] for i in range(self.rank)) for j in range(self.rank)
        )

    @cached_property
    def positive_root_labels(self) -> tuple[Weight, ...]:
        """Dynkin labels of every positive root."""
        return tuple(self.root_labels(root) for root in self.positive_roots)

    @cached_property
    def simple_root_labels(self) -> tuple[Weight, ...]:
        """Rows of the Cartan matrix."""
        return tuple(tuple(row) for row in self.cartan)

    def inner(self, lam: Sequence[int | Fraction], mu: Sequence[int | Fraction]) -> Fraction:
        """(lambda, mu) for weights in Dynkin labels."""
        form = self.weight_form
        return sum(
            (
                lam[i] * form[i][j] * mu[j]
                for i in range(self.rank)
                for j in range(self.rank)
                if lam[i] and mu[j]
            ),
            Fraction(0),
        )

    @property
    def rho(self) -> Weight:
        """Weyl vector."""
        return (1,) * self.rank

    def level_of(self, lam: Sequence[int]) -> Fraction:
        """(lambda, theta), the minimal level at which lambda is integrable."""
        return sum((c * a for c, a in zip(lam, self.comarks, strict=True)), Fraction(0))


@lru_cache(maxsize=None)
def root_datum(label: str | tuple[LieType, int]) -> RootDatum:
    """Root data for a label such as "A4", "E6" or ("G", 2)."""
    kind, rank = LieType.parse(label) if isinstance(label, str) else label
    kind.check_rank(rank)
    lengths = _lengths(kind, rank)
    gram = [[Fraction(0)] * rank for _ in range(rank)]
    for i in range(rank):
        gram[i][i] = lengths[i]
    for i, j in _edges(kind, rank):
        value = -max(lengths[i - 1], lengths[j - 1]) / 2
        gram[i - 1][j - 1] = gram[j - 1][i - 1] = value
    cartan = [[int(2 * gram[i][j] / lengths[j]) for j in range(rank)] for i in range(rank)]

    # positive roots by root strings, level by level
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        following = []
        for root in layer:
            labels = [sum(root[i] * cartan[i][j] for i in range(rank)) for j in range(rank)]
            for i in range(rank):
                q = 0
                lowered = list(root)
                while True:
                    lowered[i] -= 1
                    if tuple(lowered) not in roots:
                        break
                    q += 1
                if q - labels[i] > 0:
                    new = list(root)
                    new[i] += 1
                    key = tuple(new)
                    if key not in roots:
                        roots.add(key)
                        following.append(key)
        layer = following
    ordered = tuple(sorted(roots, key=lambda r: (sum(r), r)))
    datum = RootDatum(
        kind,
        rank,
        tuple(lengths),
        tuple(tuple(row) for row in gram),
        tuple(tuple(row) for row in cartan),
        ordered,
    )
    logger.debug("root datum %s: dim %d, h^vee %d", datum.label, datum.dim, datum.dual_coxeter)
    return datum


def integrable_weights(datum: RootDatum, k: int) -> list[Weight]:
    """Dominant weights lambda with (lambda, theta) <= k, in lexicographic order."""
    if k < 0:
        msg = f"Level must be nonnegative, got {k}"
        raise ValueError(msg)
    comarks = datum.comarks
    result: list[Weight] = []

    def extend(prefix: list[int], budget: Fraction) -> None:
        i = len(prefix)
        if i == datum.rank:
            result.append(tuple(prefix))
            return
        value = 0
        while value * comarks[i] <= budget:
            extend([*prefix, value], budget - value * comarks[i])
            value += 1

    extend([], Fraction(k))
    return result


def conformal_weight(datum: RootDatum, lam: Sequence[int], k: int) -> Fraction:
    """h_lambda = (lambda, lambda + 2 rho) / (2 (k + h^vee))."""
    shifted = [x + 2 for x in lam]
    return datum.inner(lam, shifted) / (2 * (k + datum.dual_coxeter))


def weyl_dim(datum: RootDatum, lam: Sequence[int]) -> int:
    """Weyl dimension formula."""
    numerator, denominator = Fraction(1), Fraction(1)
    half = [length / 2 for length in datum.lengths]
    for root in datum.positive_roots:
        pair_rho = sum((c * h for c, h in zip(root, half, strict=True)), Fraction(0))
        pair_lam = sum((c * h * x for c, h, x in zip(root, half, lam, strict=True)), Fraction(0))
        numerator *= pair_lam + pair_rho
        denominator *= pair_rho
    value = numerator / denominator
    if value.denominator != 1:  # pragma: no cover - the formula is integral
        msg = f"Weyl dimension is not an integer: {value}"
        raise ArithmeticError(msg)
    return int(value)


def dominant_conjugate(datum: RootDatum, mu: Sequence[int]) -> Weight:
    """The dominant weight in the Weyl orbit of mu."""
    current = list(mu)
    simple = datum.simple_root_labels
    while True:
        i = next((i for i, c in enumerate(current) if c < 0), None)
        if i is None:
            return tuple(current)
        c = current[i]
        current = [x - c * a for x, a in zip(current, simple[i], strict=True)]


def weyl_orbit(datum: RootDatum, mu: Sequence[int]) -> Iterator[Weight]:
    """All weights in the Weyl orbit of a dominant weight."""
    start = tuple(mu)
    seen = {start}
    queue = deque([start])
    simple = datum.simple_root_labels
    while queue:
        current = queue.popleft()
        yield current
        for i, c in enumerate(current):
            if c > 0:
                image = tuple(x - c * a for x, a in zip(current, simple[i], strict=True))
                if image not in seen:
                    seen.add(image)
                    queue.append(image)


@dataclass
class WeightSystem:
    """Weights (Dynkin labels) of a finite-dimensional module with multiplicities."""

    datum: RootDatum
    dominant: dict[Weight, int]
    _orbits: dict[Weight, tuple[Weight, ...]] = field(default_factory=dict, repr=False)

    def orbit(self, mu: Weight) -> tuple[Weight, ...]:
        """Cached Weyl orbit of a dominant weight."""
        if mu not in self._orbits:
            self._orbits[mu] = tuple(weyl_orbit(self.datum, mu))
        return self._orbits[mu]

    @property
    def multiplicities(self) -> dict[Weight, int]:
        """Full weight multiplicities."""
        return {w: m for mu, m in self.dominant.items() for w in self.orbit(mu)}

    @property
    def dimension(self) -> int:
        """Total dimension."""
        return sum(m * len(self.orbit(mu)) for mu, m in self.dominant.items())

    def power_sums(self, z: Sequence[int | Fraction], top: int) -> list[Fraction]:
        """S^j(z) for j = 0..top, with z given by its pairings with the fundamental weights."""
        sums = [Fraction(0)] * (top + 1)
        for mu, m in self.dominant.items():
            values: dict[Fraction, int] = {}
            for weight in self.orbit(mu):
                x = sum((Fraction(a) * b for a, b in zip(weight, z, strict=True)), Fraction(0))
                values[x] = values.get(x, 0) + 1
            for x, count in values.items():
                power = Fraction(count * m)
                for j in range(top + 1):
                    sums[j] += power
                    power *= x
        return sums


def weight_system(datum: RootDatum, lam: Sequence[int]) -> WeightSystem:
    """Freudenthal multiplicities of the irreducible module L(lambda)."""
    lam = tuple(lam)
    if any(c < 0 for c in lam):
        msg = f"Weight {lam} is not dominant"
        raise ValueError(msg)
    roots = datum.positive_root_labels
    # dominant weights below lambda
    levels: dict[Weight, int] = {lam: 0}
    queue = deque([lam])
    while queue:
        mu = queue.popleft()
        for root, coords in zip(roots, datum.positive_roots, strict=True):
            nu = tuple(x - a for x, a in zip(mu, root, strict=True))
            if min(nu) >= 0 and nu not in levels:
                levels[nu] = levels[mu] + sum(coords)
                queue.append(nu)
    ordered = sorted(levels, key=lambda w: levels[w])
    shifted_top = [x + 1 for x in lam]
    norm_top = datum.inner(shifted_top, shifted_top)
    multiplicity: dict[Weight, int] = {lam: 1}
    for mu in ordered[1:]:
        total = Fraction(0)
        for root in roots:
            k = 1
            while True:
                nu = tuple(x + k * a for x, a in zip(mu, root, strict=True))
                key = dominant_conjugate(datum, nu)
                m = multiplicity.get(key)
                if key not in levels or m is None:
                    break
                total += m * datum.inner(nu, root)
                k += 1
        shifted = [x + 1 for x in mu]
        value = 2 * total / (norm_top - datum.inner(shifted, shifted))
        if value.denominator != 1:  # pragma: no cover - Freudenthal yields integers
            msg = f"Non-integral multiplicity {value} at {mu}"
            raise ArithmeticError(msg)
        if value:
            multiplicity[mu] = int(value)
    return WeightSystem(datum, multiplicity)


def adjoint_system(datum: RootDatum) -> WeightSystem:
    """Weights of the adjoint module."""
    theta = datum.root_labels(datum.highest_root)
    return weight_system(datum, theta)


def power_sum(ws: WeightSystem, j: int, z: Sequence[int | Fraction]) -> Fraction:
    """S^j(z) = sum over weights of m_mu * mu(z)^j."""
    if j < 0:
        msg = f"Power must be nonnegative, got {j}"
        raise ValueError(msg)
    return ws.power_sums(z, j)[j]


def coroot_norm(datum: RootDatum, z: Sequence[int | Fraction]) -> Fraction:
    """(z, z) for z given by its pairings with the fundamental weights."""
    form = datum.coweight_form
    return sum(
        (Fraction(z[i]) * form[i][j] * z[j] for i in range(datum.rank) for j in range(datum.rank)),
        Fraction(0),
    )


# --- exponential generating functions of power sums ------------------------------


def egf(sums: Sequence[Fraction]) -> list[Fraction]:
    """Power sums S^j to coefficients S^j / j!."""
    return [Fraction(s) / factorial(j) for j, s in enumerate(sums)]


def egf_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Product of truncated generating functions (tensor product of modules)."""
    top = min(len(a), len(b))
    return [sum((a[i] * b[j - i] for i in range(j + 1)), Fraction(0)) for j in range(top)]


def from_egf(series: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients S^j / j! back to power sums."""
    return [c * factorial(j) for j, c in enumerate(series)]


def symmetric_square_sums(sums: Sequence[Fraction]) -> list[Fraction]:
    """Power sums of Sym^2 M from those of M."""
    result = []
    for a in range(len(sums)):
        square = sum((comb(a, b) * sums[b] * sums[a - b] for b in range(a + 1)), Fraction(0))
        result.append((square + 2**a * sums[a]) / 2)
    return result


def tensor_sums(left: Sequence[Fraction], right: Sequence[Fraction]) -> list[Fraction]:
    """Power sums of M (x) N when M and N live on independent Cartan coordinates."""
    return from_egf(egf_mul(egf(left), egf(right)))


@dataclass(frozen=True)
class Component:
    """One simple ideal g_{i} at level k_i."""

    datum: RootDatum
    level: int

    @property
    def label(self) -> str:
        """Name such as A4,5."""
        return f"{self.datum.label},{self.level}"


@dataclass(frozen=True)
class SemisimpleCandidate:
    """Multiset of simple components with levels, in canonical order."""

    components: tuple[Component, ...]

    @property
    def dim(self) -> int:
        """Total dimension of the Lie algebra."""
        return sum(c.datum.dim for c in self.components)

    @property
    def name(self) -> str:
        """Canonical name, e.g. "A4,5^2" or "A1,1 C5,3 G2,2"."""
        parts: list[str] = []
        for component in self.components:
            if parts and parts[-1].split("^")[0] == component.label:
                base, _, power = parts[-1].partition("^")
                parts[-1] = f"{base}^{int(power or 1) + 1}"
            else:
                parts.append(component.label)
        return " ".join(parts)

    def classes(self) -> list[tuple[Component, int]]:
        """Groups of identical components with their multiplicities."""
        groups: list[tuple[Component, int]] = []
        for component in self.components:
            if groups and groups[-1][0] == component:
                groups[-1] = (component, groups[-1][1] + 1)
            else:
                groups.append((component, 1))
        return groups

    def check_ratio(self) -> bool:
        """Whether h^vee_i / k_i = (dim - 24) / 24 for every component."""
        target = Fraction(self.dim - 24, 24)
        return all(Fraction(c.datum.dual_coxeter, c.level) == target for c in self.components)


@dataclass(frozen=True)
class Degree2Vacuum:
    """Weights of the degree-2 subspace of the vacuum module of L_{k,0}.

    Per component the subspace is g + Sym^2 g, minus L(2 theta) at level 1;
    distinct components contribute g_i (x) g_j.
    """

    candidate: SemisimpleCandidate

    @cached_property
    def _parts(self) -> list[tuple[WeightSystem, WeightSystem | None]]:
        parts = []
        for component in self.candidate.components:
            adjoint = adjoint_system(component.datum)
            quotient = None
            if component.level == 1:
                theta = component.datum.root_labels(component.datum.highest_root)
                quotient = weight_system(component.datum, tuple(2 * x for x in theta))
            parts.append((adjoint, quotient))
        return parts

    @property
    def dimension(self) -> int:
        """Dimension of the degree-2 subspace."""
        return int(self.power_sums([None] * len(self.candidate.components), 0)[0])

    def power_sums(self, z: Sequence[Sequence[int | Fraction] | None], top: int) -> list[Fraction]:
        """S^j for j = 0..top at the point z = (z_1, ..., z_s)."""
        per_component = []
        total = [Fraction(0)] * (top + 1)
        for (adjoint, quotient), zi, component in zip(
            self._parts, z, self.candidate.components, strict=True
        ):
            point = zi if zi is not None else [0] * component.datum.rank
            adj = adjoint.power_sums(point, top)
            own = [a + b for a, b in zip(adj, symmetric_square_sums(adj), strict=True)]
            if quotient is not None:
                own = [a - b for a, b in zip(own, quotient.power_sums(point, top), strict=True)]
            total = [a + b for a, b in zip(total, own, strict=True)]
            per_component.append(adj)
        for i in range(len(per_component)):
            for j in range(i + 1, len(per_component)):
                cross = tensor_sums(per_component[i], per_component[j])
                total = [a + b for a, b in zip(total, cross, strict=True)]
        return total


def vacuum_degree2_weights(candidate: SemisimpleCandidate) -> Degree2Vacuum:
    """Degree-2 weight data of the vacuum module of the candidate's affine algebra."""
    if any(c.level < 1 for c in candidate.components):
        msg = "All levels must be positive"
        raise ValueError(msg)
    return Degree2Vacuum(candidate)
