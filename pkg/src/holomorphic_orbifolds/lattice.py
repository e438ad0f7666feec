"""Even lattices, Niemeier glue, lattice automorphisms, lifts and theta series."""

import logging
import random
import re
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import ceil, comb, floor, gcd, isqrt, lcm

import sympy

from .enums import LieType
from .exactmath import (
    Cyc,
    QMatrix,
    Vector,
    clear_denominators,
    determinant,
    hermite_normal_form,
    identity_matrix,
    integer_kernel,
    inverse,
    mat_mul,
    mat_vec,
    smith_diagonal,
    smith_normal_form,
    solve_linear,
    transpose,
)
from .liealg import root_datum
from .qseries import PuiseuxSeries, delta, eisenstein

logger = logging.getLogger(__name__)

_X = sympy.Symbol("x")


def _as_int_matrix(
    rows: Sequence[Sequence[Fraction | int]], what: str
) -> tuple[tuple[int, ...], ...]:
    result = []
    for row in rows:
        converted = []
        for x in row:
            value = Fraction(x)
            if value.denominator != 1:
                msg = f"{what} has a non-integral entry {value}"
                raise ValueError(msg)
            converted.append(int(value))
        result.append(tuple(converted))
    return tuple(result)


@dataclass(frozen=True)
class EvenLattice:
    """Integral lattice given by an even Gram matrix.

    Vectors are written in the coordinates of the lattice basis. When the
    lattice sits inside another one, ``embedding`` holds the basis rows in the
    ambient coordinates (simple-root coordinates for glued lattices).
    """

    gram: tuple[tuple[int, ...], ...]
    name: str = ""
    embedding: tuple[tuple[Fraction, ...], ...] | None = None
    glue: "GlueSpec | None" = None

    def __post_init__(self) -> None:
        gram = _as_int_matrix(self.gram, "Gram matrix")
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            msg = "Gram matrix must be square"
            raise ValueError(msg)
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            msg = "Gram matrix must be symmetric"
            raise ValueError(msg)
        if any(gram[i][i] % 2 for i in range(n)):
            msg = "Lattice is odd: Gram matrix has an odd diagonal entry"
            raise ValueError(msg)

    @property
    def rank(self) -> int:
        """Rank of the lattice."""
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        """Determinant of the Gram matrix."""
        return int(determinant(self.gram))

    @cached_property
    def gram_inverse(self) -> QMatrix:
        """Gram matrix of the dual lattice."""
        if self.determinant == 0:
            msg = f"Gram matrix of {self.name or 'lattice'} is singular"
            raise ValueError(msg)
        return inverse(self.gram)

    @property
    def unimodular(self) -> bool:
        """Whether the lattice equals its dual."""
        return abs(self.determinant) == 1

    def inner(self, x: Sequence[Fraction | int], y: Sequence[Fraction | int]) -> Fraction:
        """(x, y) for vectors in lattice coordinates."""
        return sum(
            (
                Fraction(x[i]) * self.gram[i][j] * y[j]
                for i in range(self.rank)
                for j in range(self.rank)
                if x[i] and y[j]
            ),
            Fraction(0),
        )

    def norm(self, x: Sequence[Fraction | int]) -> Fraction:
        """(x, x)."""
        return self.inner(x, x)


# --- enumeration ------------------------------------------------------------------


def _ldl(gram: Sequence[Sequence[Fraction | int]]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Exact decomposition Q(y) = sum_i d_i (y_i + sum_{j>i} mu_ij y_j)^2."""
    n = len(gram)
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = Fraction(gram[i][i]) - sum((d[k] * mu[k][i] ** 2 for k in range(i)), Fraction(0))
        if d[i] <= 0:
            msg = "Gram matrix is not positive definite"
            raise ValueError(msg)
        for j in range(i + 1, n):
            correction = sum((d[k] * mu[k][i] * mu[k][j] for k in range(i)), Fraction(0))
            mu[i][j] = (Fraction(gram[i][j]) - correction) / d[i]
    return d, mu


def enumerate_coset(
    gram: Sequence[Sequence[Fraction | int]],
    shift: Sequence[Fraction | int],
    bound: Fraction | int,
) -> Iterator[tuple[tuple[Fraction, ...], Fraction]]:
    """Yield (y, y^T G y) for every y in shift + Z^n with y^T G y <= bound (Fincke-Pohst).

    Args:
        gram: Positive definite rational Gram matrix.
        shift: Coset representative.
        bound: Norm bound, inclusive.

    """
    n = len(gram)
    bound = Fraction(bound)
    if bound < 0:
        return
    if n == 0:
        yield (), Fraction(0)
        return
    d, mu = _ldl(gram)
    shift = [Fraction(s) for s in shift]
    y = [Fraction(0)] * n

    def descend(i: int, remaining: Fraction) -> Iterator[tuple[tuple[Fraction, ...], Fraction]]:
        if i < 0:
            yield tuple(y), bound - remaining
            return
        center = -sum((mu[i][j] * y[j] for j in range(i + 1, n)), Fraction(0))
        offset = center - shift[i]
        radius = isqrt(floor(remaining / d[i]))
        for x in range(floor(offset) - radius - 1, ceil(offset) + radius + 2):
            gap = shift[i] + x - center
            used = d[i] * gap * gap
            if used <= remaining:
                y[i] = shift[i] + x
                yield from descend(i - 1, remaining - used)

    yield from descend(n - 1, bound)


def coset_minimum(
    gram: Sequence[Sequence[Fraction | int]], shift: Sequence[Fraction | int]
) -> Fraction:
    """Smallest norm y^T G y over the coset shift + Z^n."""
    if not gram:
        return Fraction(0)
    bound = Fraction(2)
    while True:
        norms = [norm for _, norm in enumerate_coset(gram, shift, bound)]
        if norms:
            return min(norms)
        bound *= 2


def short_vectors(lattice: EvenLattice, bound: Fraction | int) -> list[tuple[tuple[int, ...], int]]:
    """Nonzero lattice vectors of norm at most bound, with their norms."""
    zero = [0] * lattice.rank
    return [
        (tuple(int(x) for x in y), int(norm))
        for y, norm in enumerate_coset(lattice.gram, zero, bound)
        if norm
    ]


def minimum(lattice: EvenLattice) -> int:
    """Minimal nonzero norm."""
    if lattice.rank == 0:
        msg = "The zero lattice has no nonzero vectors"
        raise ValueError(msg)
    bound = 2
    while True:
        found = short_vectors(lattice, bound)
        if found:
            return min(norm for _, norm in found)
        bound *= 2


def coset_theta(
    gram: Sequence[Sequence[Fraction | int]],
    shift: Sequence[Fraction | int],
    functional: Sequence[Fraction | int],
    order: Fraction | int,
) -> PuiseuxSeries:
    """Sum over y in shift + Z^n of e(y . functional) q^{y^T G y / 2}, exponents below order."""
    order = Fraction(order)
    grouped: dict[Fraction, dict[Fraction, int]] = {}
    for y, norm in enumerate_coset(gram, shift, 2 * order):
        exponent = norm / 2
        if exponent >= order:
            continue
        angle = sum((a * Fraction(b) for a, b in zip(y, functional, strict=True)), Fraction(0)) % 1
        phases = grouped.setdefault(exponent, {})
        phases[angle] = phases.get(angle, 0) + 1
    terms: dict[Fraction, Cyc | Fraction] = {}
    for exponent, phases in grouped.items():
        conductor = clear_denominators(phases)
        value = Cyc(conductor, {int(angle * conductor): count for angle, count in phases.items()})
        rational = value.to_rational()
        terms[exponent] = rational if rational is not None else value
    return PuiseuxSeries(terms, order)


def theta_series(
    lattice: EvenLattice,
    v: Sequence[Fraction | int] | None = None,
    w: Sequence[Fraction | int] | None = None,
    truncation: Fraction | int = 10,
) -> PuiseuxSeries:
    """Theta series of the coset L + v twisted by the character e((w, alpha)).

    Args:
        lattice: Positive definite even lattice.
        v: Coset shift in lattice coordinates (default 0).
        w: Character vector in lattice coordinates (default 0).
        truncation: Exponents below this value are exact.

    Returns:
        The series sum_{alpha in L+v} e((w, alpha)) q^{(alpha, alpha)/2}.

    """
    zero = [Fraction(0)] * lattice.rank
    v = [Fraction(x) for x in v] if v is not None else zero
    w = [Fraction(x) for x in w] if w is not None else zero
    if lattice.rank == 24 and lattice.unimodular and not any(v) and not any(w):
        count = vector_counts(lattice, 2).get(Fraction(2), 0)
        logger.debug("rank 24 theta shortcut for %s with %d roots", lattice.name, count)
        order = Fraction(truncation)
        series = eisenstein(4, ceil(order)) ** 3 + delta(order) * (count - 720)
        return series.truncate(order)
    functional = mat_vec(lattice.gram, w)
    return coset_theta(lattice.gram, v, functional, truncation)


# --- LLL ---------------------------------------------------------------------------


def _gram_schmidt(gram: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    n = len(gram)
    mu = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            mu[i][j] = (
                gram[i][j] - sum((mu[j][k] * mu[i][k] * b[k] for k in range(j)), Fraction(0))
            ) / b[j]
        b[i] = gram[i][i] - sum((mu[i][k] ** 2 * b[k] for k in range(i)), Fraction(0))
        if b[i] <= 0:
            msg = "Gram matrix is not positive definite"
            raise ValueError(msg)
    return mu, b


def lll_reduce_gram(
    gram: Sequence[Sequence[int]], delta_: Fraction = Fraction(3, 4)
) -> tuple[list[list[int]], list[list[int]]]:
    """Exact LLL reduction of a positive definite integral Gram matrix.

    Args:
        gram: Gram matrix of the input basis.
        delta_: Lovasz parameter in (1/4, 1].

    Returns:
        Tuple (reduced Gram, T) where the new basis rows are T times the old ones.

    """
    n = len(gram)
    g = [list(row) for row in gram]
    basis = identity_matrix(n)

    def reduce(k: int, j: int, r: int) -> None:
        basis[k] = [x - r * y for x, y in zip(basis[k], basis[j], strict=True)]
        g[k] = [x - r * y for x, y in zip(g[k], g[j], strict=True)]
        for row in g:
            row[k] -= r * row[j]

    def swap(k: int) -> None:
        basis[k], basis[k - 1] = basis[k - 1], basis[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]

    k = 1
    while k < n:
        for j in reversed(range(k)):
            mu, _ = _gram_schmidt(g)
            r = round(mu[k][j])
            if r:
                reduce(k, j, r)
        mu, b = _gram_schmidt(g)
        if b[k] >= (delta_ - mu[k][k - 1] ** 2) * b[k - 1]:
            k += 1
        else:
            swap(k)
            k = max(k - 1, 1)
    return g, basis


# --- root lattices and glue -----------------------------------------------------------


def root_lattice(label: str) -> EvenLattice:
    """Root lattice of a simply laced type, with the Cartan matrix as Gram matrix."""
    datum = root_datum(label)
    if not datum.kind.simply_laced:
        msg = f"Root lattice of {datum.label} is not even; only ADE types are supported"
        raise ValueError(msg)
    return EvenLattice(datum.cartan, name=datum.label)


def _glue_weight(label: str, glue: int) -> tuple[Fraction, ...]:
    """Conway-Sloane glue vector [glue] of a root lattice, in simple-root coordinates."""
    datum = root_datum(label)
    rank = datum.rank
    if datum.kind is LieType.A:
        fundamental = {i: i for i in range(1, rank + 1)}
    elif datum.kind is LieType.D:
        fundamental = {1: rank, 2: 1, 3: rank - 1}
    elif datum.kind is LieType.E:
        fundamental = {6: {1: 1, 2: 6}, 7: {1: 7}, 8: {}}[rank]
    else:
        msg = f"No glue for non simply laced type {datum.label}"
        raise ValueError(msg)
    if glue == 0:
        return (Fraction(0),) * rank
    if glue not in fundamental:
        msg = f"Invalid glue label [{glue}] for {datum.label}"
        raise ValueError(msg)
    return tuple(_cartan_inverse(label)[fundamental[glue] - 1])


@lru_cache(maxsize=None)
def _cartan_inverse(label: str) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(row) for row in inverse(root_datum(label).cartan))


def _parse_components(components: str | Sequence[str]) -> tuple[str, ...]:
    tokens = components.split() if isinstance(components, str) else list(components)
    result: list[str] = []
    for token in tokens:
        match = re.fullmatch(r"([ADE]_?\d+)(?:\^(\d+))?", token.strip())
        if match is None:
            msg = f"Invalid root lattice component: {token!r}"
            raise ValueError(msg)
        label = root_datum(match.group(1)).label
        result.extend([label] * int(match.group(2) or 1))
    return tuple(result)


def _parse_glue(token: str | Sequence[int]) -> list[tuple[int, ...]]:
    """Expand "1(01441)" into the fixed prefix followed by every cyclic shift."""
    if not isinstance(token, str):
        return [tuple(int(x) for x in token)]
    match = re.fullmatch(r"\[?\s*(\d*)\s*(?:\((\d+)\))?\s*\]?", token)
    if match is None or not (match.group(1) or match.group(2)):
        msg = f"Invalid glue notation: {token!r}"
        raise ValueError(msg)
    prefix = tuple(int(c) for c in match.group(1))
    cycle = tuple(int(c) for c in match.group(2) or "")
    if not cycle:
        return [prefix]
    return [prefix + cycle[-s:] + cycle[:-s] if s else prefix + cycle for s in range(len(cycle))]


@dataclass(frozen=True)
class GlueSpec:
    """Root lattice components together with glue generators (one label per component)."""

    components: tuple[str, ...]
    generators: tuple[tuple[int, ...], ...]
    name: str = ""

    @classmethod
    def parse(
        cls,
        components: str | Sequence[str],
        glue: Sequence[str | Sequence[int]] = (),
        name: str = "",
    ) -> "GlueSpec":
        """Build from strings such as "A4^6" and ["1(01441)"]."""
        parsed = _parse_components(components)
        generators = tuple(g for token in glue for g in _parse_glue(token))
        for generator in generators:
            if len(generator) != len(parsed):
                msg = (
                    f"Glue vector {generator} has {len(generator)} labels "
                    f"for {len(parsed)} components"
                )
                raise ValueError(msg)
        if not name:
            name = components if isinstance(components, str) else " ".join(components)
        return cls(parsed, generators, name)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        """Start of each component in the simple-root coordinates."""
        starts, position = [], 0
        for label in self.components:
            starts.append(position)
            position += root_datum(label).rank
        return tuple(starts)

    @property
    def rank(self) -> int:
        """Total rank of the root lattice."""
        return sum(root_datum(label).rank for label in self.components)

    def glue_vector(self, generator: Sequence[int]) -> tuple[Fraction, ...]:
        """Concatenated glue weights in simple-root coordinates."""
        vector: list[Fraction] = []
        for label, glue in zip(self.components, generator, strict=True):
            vector.extend(_glue_weight(label, glue))
        return tuple(vector)

    def cartan(self) -> list[list[int]]:
        """Block diagonal Cartan matrix of the root lattice."""
        size = self.rank
        matrix = [[0] * size for _ in range(size)]
        for label, start in zip(self.components, self.offsets, strict=True):
            block = root_datum(label).cartan
            for i, row in enumerate(block):
                for j, value in enumerate(row):
                    matrix[start + i][start + j] = value
        return matrix


def glue_lattice(spec: GlueSpec) -> EvenLattice:
    """The overlattice of the root lattice generated by the glue vectors.

    Raises:
        ValueError: If the glue is not isotropic or produces odd vectors.

    """
    size = spec.rank
    cartan = spec.cartan()
    generators = [tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)]
    generators += [spec.glue_vector(g) for g in spec.generators]
    scale = clear_denominators(x for g in generators for x in g)
    rows = hermite_normal_form([[int(x * scale) for x in g] for g in generators])
    basis = [[Fraction(x, scale) for x in row] for row in rows]
    gram = mat_mul(mat_mul(basis, cartan), transpose(basis))
    if any(x.denominator != 1 for row in gram for x in row):
        msg = f"Glue of {spec.name} is not isotropic: inner products are not integral"
        raise ValueError(msg)
    if any(gram[i][i] % 2 for i in range(size)):
        msg = f"Glue of {spec.name} produces odd vectors"
        raise ValueError(msg)
    lattice = EvenLattice(
        tuple(tuple(int(x) for x in row) for row in gram),
        name=spec.name,
        embedding=tuple(tuple(row) for row in basis),
        glue=spec,
    )
    logger.debug("glued %s: rank %d, determinant %d", spec.name, size, lattice.determinant)
    return lattice


@lru_cache(maxsize=None)
def _codewords(spec: GlueSpec) -> tuple[tuple[Fraction, ...], ...]:
    """Glue group as fractional parts of simple-root coordinates."""
    generators = [tuple(x % 1 for x in spec.glue_vector(g)) for g in spec.generators]
    start = (Fraction(0),) * spec.rank
    seen = {start}
    frontier = [start]
    while frontier:
        following = []
        for word in frontier:
            for generator in generators:
                image = tuple((a + b) % 1 for a, b in zip(word, generator, strict=True))
                if image not in seen:
                    seen.add(image)
                    following.append(image)
        frontier = following
    return tuple(sorted(seen))


@lru_cache(maxsize=None)
def _component_coset(
    label: str, shift: tuple[Fraction, ...], bound: Fraction
) -> tuple[tuple[tuple[Fraction, ...], Fraction], ...]:
    return tuple(enumerate_coset(root_datum(label).cartan, shift, bound))


def _shift_moments(moments: Sequence[int], value: int, top: int) -> list[int]:
    """Moments of X + value from the moments of X."""
    powers = [1] * (top + 1)
    for k in range(1, top + 1):
        powers[k] = powers[k - 1] * value
    return [
        sum(comb(k, i) * moments[i] * powers[k - i] for i in range(k + 1)) for k in range(top + 1)
    ]


def _glued_moments(
    lattice: EvenLattice, functional: Sequence[Fraction], max_norm: Fraction, top: int
) -> dict[Fraction, list[Fraction]]:
    """Per-codeword product of component cosets, tracking moments of the functional by norm."""
    spec = lattice.glue
    if spec is None:  # pragma: no cover - guarded by the caller
        msg = "Lattice has no glue description"
        raise ValueError(msg)
    words = _codewords(spec)
    scale = clear_denominators(functional) * clear_denominators(x for w in words for x in w)
    scaled = [int(f * scale) for f in functional]
    sizes = [root_datum(label).rank for label in spec.components]
    totals: dict[Fraction, list[int]] = {}
    for word in words:
        entries = []
        for label, start, size in zip(spec.components, spec.offsets, sizes, strict=True):
            shift = word[start:start + size]
            grouped: dict[tuple[Fraction, int], int] = {}
            for y, norm in _component_coset(label, shift, max_norm):
                value = sum(a * b for a, b in zip(y, scaled[start:start + size], strict=True))
                key = (norm, int(value))
                grouped[key] = grouped.get(key, 0) + 1
            entries.append(grouped)
        if any(not grouped for grouped in entries):
            continue
        floor_norms = [min(norm for norm, _ in grouped) for grouped in entries]
        suffix = [Fraction(0)] * (len(entries) + 1)
        for i in reversed(range(len(entries))):
            suffix[i] = suffix[i + 1] + floor_norms[i]
        if suffix[0] > max_norm:
            continue
        states: dict[Fraction, list[int]] = {Fraction(0): [1] + [0] * top}
        for index, grouped in enumerate(entries):
            following: dict[Fraction, list[int]] = {}
            for norm, moments in states.items():
                for (entry_norm, value), count in grouped.items():
                    total = norm + entry_norm
                    if total + suffix[index + 1] > max_norm:
                        continue
                    shifted = _shift_moments(moments, value, top)
                    slot = following.setdefault(total, [0] * (top + 1))
                    for k in range(top + 1):
                        slot[k] += count * shifted[k]
            states = following
        for norm, moments in states.items():
            slot = totals.setdefault(norm, [0] * (top + 1))
            for k in range(top + 1):
                slot[k] += moments[k]
    return {
        norm: [Fraction(m, scale**k) for k, m in enumerate(moments)]
        for norm, moments in totals.items()
    }


def vector_moments(
    lattice: EvenLattice, z: Sequence[Fraction | int], max_norm: Fraction | int, top: int
) -> dict[Fraction, list[Fraction]]:
    """For every norm up to max_norm, the sums of (alpha, z)^k for k = 0..top.

    Glued lattices are enumerated codeword by codeword; other lattices by
    Fincke-Pohst on their Gram matrix.
    """
    max_norm = Fraction(max_norm)
    z = [Fraction(x) for x in z]
    if lattice.glue is not None and lattice.embedding is not None:
        ambient = mat_vec(transpose(lattice.embedding), z)
        functional = mat_vec(lattice.glue.cartan(), ambient)
        return _glued_moments(lattice, functional, max_norm, top)
    functional = mat_vec(lattice.gram, z)
    result: dict[Fraction, list[Fraction]] = {}
    zero = [0] * lattice.rank
    for y, norm in enumerate_coset(lattice.gram, zero, max_norm):
        value = sum((a * b for a, b in zip(y, functional, strict=True)), Fraction(0))
        slot = result.setdefault(norm, [Fraction(0)] * (top + 1))
        power = Fraction(1)
        for k in range(top + 1):
            slot[k] += power
            power *= value
    return result


def vector_counts(lattice: EvenLattice, max_norm: Fraction | int) -> dict[Fraction, int]:
    """Number of lattice vectors of each norm up to max_norm."""
    moments = vector_moments(lattice, [0] * lattice.rank, max_norm, 0)
    return {norm: int(values[0]) for norm, values in sorted(moments.items())}


def rank24_vector_counts(roots: int) -> tuple[int, int]:
    """Norm 2 and norm 4 counts of an even unimodular rank 24 lattice with the given root count."""
    return roots, 179280 - 24 * (roots - 720)


def lattice_voa_power_sums(
    lattice: EvenLattice, z: Sequence[Fraction | int], degree: int, top: int
) -> list[Fraction]:
    """S^j(z) for j = 0..top over the weights of the degree 1 or degree 2 subspace.

    Same sums as :func:`lattice_voa_weight_data`, from a single enumeration.
    """
    if degree not in (1, 2):
        msg = f"Degree must be 1 or 2, got {degree}"
        raise ValueError(msg)
    if top < 0:
        msg = f"Power must be nonnegative, got {top}"
        raise ValueError(msg)
    rank = lattice.rank
    oscillators = rank if degree == 1 else rank + rank * (rank + 1) // 2
    moments = vector_moments(lattice, z, 2 * degree, top)
    empty = [Fraction(0)] * (top + 1)
    norm2 = moments.get(Fraction(2), empty)
    if degree == 1:
        sums = list(norm2)
    else:
        norm4 = moments.get(Fraction(4), empty)
        sums = [a + rank * b for a, b in zip(norm4, norm2, strict=True)]
    sums[0] += oscillators
    return sums


def lattice_voa_weight_data(
    lattice: EvenLattice, z: Sequence[Fraction | int], j: int, degree: int
) -> Fraction:
    """S^j(z) over the weights of the degree 1 or degree 2 subspace of the lattice VOA.

    Args:
        lattice: Even positive definite lattice.
        z: Cartan vector in lattice coordinates.
        j: Power.
        degree: 1 or 2.

    Returns:
        Sum over the weights of the space of (weight, z)^j.

    """
    if degree not in (1, 2):
        msg = f"Degree must be 1 or 2, got {degree}"
        raise ValueError(msg)
    if j < 0:
        msg = f"Power must be nonnegative, got {j}"
        raise ValueError(msg)
    rank = lattice.rank
    oscillators = rank if degree == 1 else rank + rank * (rank + 1) // 2
    if j == 0 and rank == 24 and lattice.unimodular:
        n2, n4 = rank24_vector_counts(vector_counts(lattice, 2).get(Fraction(2), 0))
        total = n2 + oscillators if degree == 1 else n4 + rank * n2 + oscillators
        return Fraction(total)
    moments = vector_moments(lattice, z, 2 * degree, j)
    norm2 = moments.get(Fraction(2), [Fraction(0)] * (j + 1))[j]
    zero_weight = Fraction(oscillators if j == 0 else 0)
    if degree == 1:
        return norm2 + zero_weight
    norm4 = moments.get(Fraction(4), [Fraction(0)] * (j + 1))[j]
    return norm4 + rank * norm2 + zero_weight


def discriminant_representatives(lattice: EvenLattice) -> list[tuple[int, ...]]:
    """Integer functionals y representing Z^r / G Z^r, i.e. the classes of L'/L via G^{-1} y."""
    u, d, _ = smith_normal_form(lattice.gram)
    diagonal = [d[i][i] for i in range(lattice.rank)]
    if any(x == 0 for x in diagonal):
        msg = "Discriminant group of a degenerate lattice is infinite"
        raise ValueError(msg)
    u_inv = [[int(x) for x in row] for row in inverse(u)]
    columns = [[u_inv[r][i] for r in range(lattice.rank)] for i in range(lattice.rank)]
    representatives = [tuple([0] * lattice.rank)]
    for order, column in zip(diagonal, columns, strict=True):
        if order == 1:
            continue
        representatives = [
            tuple(a + c * b for a, b in zip(rep, column, strict=True))
            for rep in representatives
            for c in range(order)
        ]
    return representatives


# --- automorphisms -------------------------------------------------------------------


def _mobius(n: int) -> int:
    factors = sympy.factorint(n)
    if any(e > 1 for e in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


@lru_cache(maxsize=None)
def _cyclotomic_index(coefficients: tuple[int, ...]) -> int | None:
    """m with Phi_m equal to the monic polynomial with these coefficients, if any."""
    degree = len(coefficients) - 1
    for m in range(1, 6 * degree * degree + 3):
        if sympy.totient(m) == degree:
            candidate = sympy.Poly(sympy.cyclotomic_poly(m, _X), _X).all_coeffs()
            if tuple(int(c) for c in candidate) == coefficients:
                return m
    return None


def _mat_pow(matrix: Sequence[Sequence[int]], k: int) -> list[list[int]]:
    result = identity_matrix(len(matrix))
    base = [list(row) for row in matrix]
    while k:
        if k & 1:
            result = _int_mul(result, base)
        base = _int_mul(base, base)
        k >>= 1
    return result


def _int_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    columns = list(zip(*b, strict=True)) if b else []
    return [[sum(x * y for x, y in zip(row, col, strict=True)) for col in columns] for row in a]


@dataclass(frozen=True)
class LatticeAut:
    """Automorphism of a lattice acting on lattice coordinates as column vectors."""

    lattice: EvenLattice
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        matrix = _as_int_matrix(self.matrix, "Automorphism")
        object.__setattr__(self, "matrix", matrix)
        n = self.lattice.rank
        if len(matrix) != n or any(len(row) != n for row in matrix):
            msg = f"Automorphism must be {n} x {n}"
            raise ValueError(msg)
        image = _int_mul(_int_mul(transpose(matrix), self.lattice.gram), matrix)
        if [list(row) for row in self.lattice.gram] != image:
            name = self.lattice.name or "the lattice"
            msg = f"Matrix does not preserve the Gram matrix of {name}"
            raise ValueError(msg)

    @cached_property
    def cyclotomic_multiplicities(self) -> dict[int, int]:
        """a_m with characteristic polynomial prod_m Phi_m^{a_m}."""
        if not self.matrix:
            return {}
        poly = sympy.Matrix(self.matrix).charpoly(_X)
        _, factors = sympy.factor_list(poly.as_expr(), _X)
        result: dict[int, int] = {}
        for factor, power in factors:
            coefficients = tuple(int(c) for c in sympy.Poly(factor, _X).monic().all_coeffs())
            m = _cyclotomic_index(coefficients)
            if m is None:
                msg = f"Characteristic polynomial has the non-cyclotomic factor {factor}"
                raise ValueError(msg)
            result[m] = result.get(m, 0) + power
        return dict(sorted(result.items()))

    @cached_property
    def order(self) -> int:
        """Order of the automorphism."""
        n = lcm(*self.cyclotomic_multiplicities) if self.matrix else 1
        if _mat_pow(self.matrix, n) != identity_matrix(self.lattice.rank):
            msg = "Automorphism does not have finite order"
            raise ValueError(msg)
        return n

    def power(self, k: int) -> "LatticeAut":
        """g^k (negative k allowed)."""
        return LatticeAut(self.lattice, tuple(map(tuple, _mat_pow(self.matrix, k % self.order))))

    def apply(self, x: Sequence[Fraction | int]) -> Vector:
        """Image of a vector in lattice coordinates."""
        return mat_vec(self.matrix, x)

    @cached_property
    def cycle_shape(self) -> dict[int, int]:
        """Frame shape: char poly = prod_k (x^k - 1)^{b_k}."""
        a = self.cyclotomic_multiplicities
        n = self.order
        shape = {}
        for k in sympy.divisors(n):
            b = sum(_mobius(j // k) * a.get(j, 0) for j in sympy.divisors(n) if j % k == 0)
            if b:
                shape[k] = b
        if sum(k * b for k, b in shape.items()) != self.lattice.rank:  # pragma: no cover
            msg = f"Cycle shape {shape} does not add up to the rank"
            raise ArithmeticError(msg)
        return shape

    @cached_property
    def eigenspace_dims(self) -> dict[int, int]:
        """dim h_j of the e(j/n)-eigenspace for j = 0..n-1."""
        n = self.order
        a = self.cyclotomic_multiplicities
        return {j: a.get(n // gcd(j, n), 0) for j in range(n)}


def cycle_shape(g: LatticeAut) -> tuple[dict[int, int], dict[int, int]]:
    """Cycle shape of g together with its eigenspace dimensions."""
    return g.cycle_shape, g.eigenspace_dims


def power_cycle_shape(shape: dict[int, int], m: int) -> dict[int, int]:
    """Cycle shape of g^m from that of g: k^b becomes (k/(k,m))^{b (k,m)}."""
    result: dict[int, int] = {}
    for k, b in shape.items():
        d = gcd(k, m)
        result[k // d] = result.get(k // d, 0) + b * d
    return {k: b for k, b in sorted(result.items()) if b}


def format_cycle_shape(shape: dict[int, int]) -> str:
    """Write a shape as 1^-1 5^5."""
    return " ".join(f"{k}^{b}" for k, b in sorted(shape.items()))


def fixed_lattice(g: LatticeAut, j: int = 1) -> EvenLattice:
    """The sublattice fixed by g^j, with an LLL-reduced basis.

    The embedding rows give the basis in the coordinates of g's lattice.
    """
    lattice = g.lattice
    n = lattice.rank
    h = g.power(j).matrix
    name = f"{lattice.name}^(g^{j})" if lattice.name else ""
    units = identity_matrix(n)
    if [list(row) for row in h] == units:
        embedding = tuple(tuple(Fraction(x) for x in row) for row in units)
        return EvenLattice(lattice.gram, name=name, embedding=embedding)
    shifted = [[h[r][c] - int(r == c) for c in range(n)] for r in range(n)]
    kernel = integer_kernel(shifted, columns=n)
    if not kernel:
        return EvenLattice((), name=name, embedding=())
    gram = _int_mul(_int_mul(kernel, lattice.gram), transpose(kernel))
    reduced, transform = lll_reduce_gram(gram)
    basis = _int_mul(transform, kernel)
    return EvenLattice(
        tuple(map(tuple, reduced)),
        name=name,
        embedding=tuple(tuple(Fraction(x) for x in row) for row in basis),
    )


def orthogonal_index(g: LatticeAut, j: int = 1) -> int:
    """d^2 = |L^{g perp} / (1 - g) L| for the power g^j."""
    lattice = g.lattice
    n = lattice.rank
    fixed = fixed_lattice(g, j)
    if fixed.rank == n:
        return 1
    basis = [[int(x) for x in row] for row in (fixed.embedding or ())]
    constraints = _int_mul(basis, lattice.gram) if basis else []
    complement = integer_kernel(constraints, columns=n)
    h = g.power(j).matrix
    images = [[int(r == c) - h[r][c] for r in range(n)] for c in range(n)]
    coordinates = []
    for image in images:
        solution = solve_linear(transpose(complement), image)
        if solution.particular is None:  # pragma: no cover - (1-g)L lies in the complement
            msg = "Image of 1 - g is not orthogonal to the fixed lattice"
            raise ArithmeticError(msg)
        coordinates.append([int(x) for x in solution.particular])
    diagonal = [x for x in smith_diagonal(transpose(coordinates)) if x]
    if len(diagonal) != len(complement):  # pragma: no cover
        msg = "(1 - g)L does not have full rank in the orthogonal complement"
        raise ArithmeticError(msg)
    index = 1
    for x in diagonal:
        index *= abs(x)
    return index


# --- lifts ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignCharacter:
    """Character (-1)^{(alpha, g^{k/2} alpha)} on the fixed lattice of g^k.

    ``w`` is written in the coordinates of ``lattice`` and satisfies
    e((w, alpha)) = (-1)^{(alpha, g^{k/2} alpha)}; ``signs`` holds the
    parities on the basis.
    """

    power: int
    lattice: EvenLattice
    signs: tuple[int, ...]
    w: tuple[Fraction, ...]

    @property
    def trivial(self) -> bool:
        """Whether the character is identically 1."""
        return not any(self.signs)

    @property
    def functional(self) -> tuple[Fraction, ...]:
        """(w, b_i) for the basis vectors b_i."""
        return tuple(Fraction(s, 2) for s in self.signs)


@dataclass(frozen=True)
class LiftData:
    """Order of the standard lift and its sign characters on even powers."""

    order: int
    characters: dict[int, SignCharacter]


def _sign_character(g: LatticeAut, k: int, seed: int) -> SignCharacter:
    fixed = fixed_lattice(g, k)
    basis = [[int(x) for x in row] for row in (fixed.embedding or ())]
    half = g.power(k // 2)
    lattice = g.lattice

    def parity(alpha: Sequence[int]) -> int:
        return int(lattice.inner(alpha, half.apply(alpha))) % 2

    signs = tuple(parity(b) for b in basis)
    w = tuple(mat_vec(fixed.gram_inverse, [Fraction(s, 2) for s in signs])) if basis else ()
    rng = random.Random(seed + k)
    for _ in range(100 if basis else 0):
        x = [rng.randint(-3, 3) for _ in basis]
        alpha = [sum(c * b[i] for c, b in zip(x, basis, strict=True)) for i in range(lattice.rank)]
        if parity(alpha) != sum(c * s for c, s in zip(x, signs, strict=True)) % 2:
            msg = f"Sign of g^{k} is not a character on the fixed lattice"
            raise ArithmeticError(msg)
    return SignCharacter(k, fixed, signs, w)


def lift_data(g: LatticeAut, seed: int = 24) -> LiftData:
    """Order of the standard lift phi_g and the characters describing phi_g^k for even k."""
    n = g.order
    lattice = g.lattice
    order = n
    if n % 2 == 0:
        half = g.power(n // 2)
        units = identity_matrix(lattice.rank)
        if any(lattice.inner(e, half.apply(e)) % 2 for e in units):
            order = 2 * n
    characters = {k: _sign_character(g, k, seed) for k in range(0, n, 2)} if n % 2 == 0 else {}
    logger.debug(
        "lift of order %d; nontrivial sign characters on powers %s",
        order,
        [k for k, c in characters.items() if not c.trivial],
    )
    return LiftData(order, characters)


@dataclass(frozen=True)
class TwistedData:
    """Conformal weights rho_i of the twisted modules, the type and the d^2 factors."""

    rho: tuple[Fraction, ...]
    type: int
    d_squared: tuple[int, ...]


def _oscillator_weight(g: LatticeAut) -> Fraction:
    m = g.order
    dims = g.eigenspace_dims
    return sum((Fraction(j * (m - j) * dims[j]) for j in range(1, m)), Fraction(0)) / (4 * m * m)


def twisted_weight_and_type(g: LatticeAut, lift: LiftData | None = None) -> TwistedData:
    """rho_i for every power of the standard lift and the type t = n^2 rho_1 mod n.

    Raises:
        ValueError: If the lift has order 2n or the lattice is not unimodular.
        ArithmeticError: If the weights violate the integrality constraints.

    """
    lattice = g.lattice
    if not lattice.unimodular:
        msg = "Twisted weights need a unimodular lattice"
        raise ValueError(msg)
    lift = lift if lift is not None else lift_data(g)
    n = g.order
    if lift.order != n:
        msg = f"Standard lift has order {lift.order} = 2n; pass a corrected lift or a square"
        raise ValueError(msg)
    rho = []
    for i in range(n):
        weight = _oscillator_weight(g.power(i))
        character = lift.characters.get(i)
        if character is not None and not character.trivial:
            weight += coset_minimum(character.lattice.gram_inverse, character.functional) / 2
        rho.append(weight)
    scaled = rho[1] * n * n if n > 1 else Fraction(0)
    if scaled.denominator != 1:
        msg = f"rho_1 = {rho[1]} is not in (1/{n * n})Z"
        raise ArithmeticError(msg)
    t = int(scaled) % n
    for i, value in enumerate(rho):
        modulus = Fraction(gcd(i, n), n)
        if ((value - Fraction(i * i * t, n * n)) / modulus).denominator != 1:
            msg = f"rho_{i} = {value} is not congruent to {i * i * t}/{n * n} mod {modulus}"
            raise ArithmeticError(msg)
    d_squared = tuple(orthogonal_index(g, i) for i in range(n))
    logger.info("type %d, rho = %s", t, [str(x) for x in rho])
    return TwistedData(tuple(rho), t, d_squared)
