"""Trace functions and V_1 dimensions of cyclic orbifolds of lattice VOAs.

An automorphism g of order n and type 0 of an even unimodular lattice L lifts
to the lattice VOA V_L. The untwisted traces T(1, 0, d) are closed forms
theta(L^{g^d}) / eta_{g^d}; every other T(1, i, j) is the image of one of them
under an element of SL2(Z), and the orbifold character is the sum over all
sectors of their fixed-point projections.
"""

import heapq
import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from .automorphisms import BaseAutomorphismSpec
from .config import candidate_table
from .enums import Generator
from .lattice import (
    LatticeAut,
    LiftData,
    TwistedData,
    fixed_lattice,
    format_cycle_shape,
    lift_data,
    power_cycle_shape,
    twisted_weight_and_type,
)
from .modular import GammaElement, ModularObject, SL2Word, act_and_expand
from .qseries import PuiseuxSeries
from .quadform import fusion_group, is_isotropic, perp, span

logger = logging.getLogger(__name__)

Row = tuple[int, int]


@dataclass(frozen=True)
class OrbifoldRun:
    """A type 0 automorphism together with its standard lift data."""

    automorphism: LatticeAut
    lift: LiftData
    twisted: TwistedData
    name: str = ""

    @property
    def order(self) -> int:
        """Order n of the automorphism."""
        return self.automorphism.order

    @cached_property
    def sources(self) -> dict[int, ModularObject]:
        """Closed forms T(1, 0, d) for d in Z_n."""
        return {d: source_function(self, d) for d in range(self.order)}

    @cached_property
    def routes(self) -> dict[Row, tuple[int, SL2Word]]:
        """For each (i, j), a source d and a word gamma with (0, d) gamma = (i, j)."""
        return cheapest_words(self.order)


def prepare_run(g: LatticeAut, *, seed: int = 24, name: str = "") -> OrbifoldRun:
    """Compute the lift and twisted data of g.

    Raises:
        ValueError: If g does not have type 0 or the lattice is not unimodular.

    """
    lift = lift_data(g, seed=seed)
    twisted = twisted_weight_and_type(g, lift)
    if twisted.type != 0:
        msg = f"{name or 'Automorphism'} has type {twisted.type}; only type 0 is supported"
        raise ValueError(msg)
    shape = format_cycle_shape(g.cycle_shape)
    logger.info("%s: order %d, cycle shape %s", name or "run", g.order, shape)
    return OrbifoldRun(g, lift, twisted, name)


def source_function(run: OrbifoldRun, d: int) -> ModularObject:
    """T(1, 0, d) = theta_{L^{g^d}} (with the sign character of phi_g^d) / eta_{g^d}."""
    g = run.automorphism
    d %= run.order
    shape = power_cycle_shape(g.cycle_shape, d)
    character = run.lift.characters.get(d)
    if character is not None and not character.trivial:
        theta = ModularObject.theta(character.lattice, None, character.w)
    else:
        theta = ModularObject.theta(fixed_lattice(g, d))
    obj = theta * ModularObject.eta_quotient({k: -b for k, b in shape.items()})
    obj.check_weight_zero()
    return obj


def cheapest_words(n: int) -> dict[Row, tuple[int, SL2Word]]:
    """Shortest words reaching every row (i, j) mod n from some (0, d).

    Words are ranked by their number of S letters first, then by their number
    of T^k letters.
    """
    s = GammaElement.s()
    counter = itertools.count()
    heap = [(0, 0, (0, d), d, next(counter), ()) for d in range(n)]
    heapq.heapify(heap)
    routes: dict[Row, tuple[int, SL2Word]] = {}
    while heap:
        s_count, t_count, row, source, _, letters = heapq.heappop(heap)
        if row in routes:
            continue
        routes[row] = (source, SL2Word(letters))
        moves = [((Generator.S, 1), s.act_on_row(row, n), 1, 0)]
        moves += [
            ((Generator.T, k), GammaElement.t(k).act_on_row(row, n), 0, 1) for k in range(1, n)
        ]
        for letter, image, ds, dt in moves:
            if image in routes:
                continue
            word = (*letters, letter)
            heapq.heappush(heap, (s_count + ds, t_count + dt, image, source, next(counter), word))
    return routes


def trace_function(run: OrbifoldRun, i: int, j: int, truncation: Fraction | int) -> PuiseuxSeries:
    """Expansion of T(1, i, j, tau) below the truncation order."""
    n = run.order
    row = (i % n, j % n)
    source, word = run.routes[row]
    logger.debug("T(1,%d,%d) from T(1,0,%d) via %s", row[0], row[1], source, word)
    return act_and_expand(run.sources[source], word, truncation)


def sector_traces(run: OrbifoldRun, i: int, truncation: Fraction | int) -> dict[int, PuiseuxSeries]:
    """T(1, i, j) for all j, computing one representative per T-orbit.

    (i, j0) T^k = (i, j0 + k i), so T(1, i, j0 + k i, tau) = T(1, i, j0, tau + k).
    """
    n = run.order
    i %= n
    step = gcd(i, n)
    base = {j0: trace_function(run, i, j0, truncation) for j0 in range(step)}
    modulus = n // step
    inverse = pow(i // step, -1, modulus) if modulus > 1 else 0
    traces = {}
    for j in range(n):
        j0 = j % step
        k = (j - j0) // step * inverse % modulus
        traces[j] = base[j0] if k == 0 else base[j0].translate(k)
    return traces


def _check_exponents(series: PuiseuxSeries, n: int, label: str) -> None:
    for exponent in series.terms:
        if (exponent * n).denominator != 1:
            msg = f"{label} has the exponent {exponent} outside (1/{n})Z"
            raise ArithmeticError(msg)


def sector_character(traces: Mapping[int, PuiseuxSeries], n: int, i: int) -> dict[Fraction, int]:
    """Coefficients of chi_{W(i,0)} = (1/n) sum_j T(1, i, j).

    Raises:
        ArithmeticError: If a coefficient is not a nonnegative integer or an
            exponent is not integral.

    """
    total = traces[0]
    for j in range(1, n):
        total = total + traces[j]
    for j, series in traces.items():
        _check_exponents(series, n, f"T(1,{i},{j})")
    character = total.scale(Fraction(1, n))
    coefficients = character.integer_coefficients(nonnegative=True)
    odd = [e for e in coefficients if e.denominator != 1]
    if odd:
        msg = f"Sector {i} has non-integral exponents {[str(e) for e in odd]}"
        raise ArithmeticError(msg)
    return coefficients


def self_dual_check(n: int) -> bool:
    """Whether H = {(i, 0)} is isotropic with H = H^perp in the type 0 fusion group."""
    group = fusion_group(n, 0)
    h = span(group, [(1 % n, 0)])
    return is_isotropic(group, h) and perp(group, h).elements == h.elements


@dataclass(frozen=True)
class OrbifoldResult:
    """Sector characters and V_1 dimensions of one orbifold run."""

    name: str
    order: int
    cycle_shape: dict[int, int]
    type: int
    rho: tuple[Fraction, ...]
    d_squared: tuple[int, ...]
    sectors: tuple[dict[Fraction, int], ...]
    dim_v1_fixed: int
    dim_v1_orbifold: int
    self_dual: bool
    candidates: tuple[str, ...] = ()

    def to_json(self) -> dict[str, object]:
        """JSON-ready dictionary."""
        return {
            "name": self.name,
            "order": self.order,
            "cycle_shape": format_cycle_shape(self.cycle_shape),
            "type": self.type,
            "rho": [str(x) for x in self.rho],
            "d_squared": list(self.d_squared),
            "sectors": [
                {"i": i, "coefficients": [[str(e), c] for e, c in sorted(sector.items())]}
                for i, sector in enumerate(self.sectors)
            ],
            "dim_v1_fixed": self.dim_v1_fixed,
            "dim_v1_orbifold": self.dim_v1_orbifold,
            "self_dual": self.self_dual,
            "candidates": list(self.candidates),
        }


def orbifold_v1_dim(run: OrbifoldRun, truncation: Fraction | int = 4) -> OrbifoldResult:
    """Sector characters chi_{W(i,0)}, dim V_1^G and dim V_1^orb.

    Raises:
        ValueError: If the truncation does not reach the q^0 coefficients.
        ArithmeticError: If a sector character is not a nonnegative integral
            q-series, which signals a wrong lift or sign upstream.

    """
    truncation = Fraction(truncation)
    if truncation <= 0:
        msg = f"Truncation {truncation} does not reach the weight one space"
        raise ValueError(msg)
    n = run.order
    sectors = []
    for i in range(n):
        coefficients = sector_character(sector_traces(run, i, truncation), n, i)
        logger.debug("sector %d: %s", i, {str(e): c for e, c in coefficients.items()})
        sectors.append(coefficients)
    vacuum = sectors[0].get(Fraction(-1), 0)
    if vacuum != 1:
        msg = f"Fixed-point character starts with {vacuum} q^-1 instead of the vacuum"
        raise ArithmeticError(msg)
    dim_fixed = sectors[0].get(Fraction(0), 0)
    dim_orbifold = sum(sector.get(Fraction(0), 0) for sector in sectors)
    self_dual = self_dual_check(n)
    if not self_dual:  # pragma: no cover - holds for every n when t = 0
        msg = f"{{(i,0)}} is not self-dual in the fusion group of order {n}"
        raise ArithmeticError(msg)
    g = run.automorphism
    result = OrbifoldResult(
        name=run.name,
        order=n,
        cycle_shape=g.cycle_shape,
        type=run.twisted.type,
        rho=run.twisted.rho,
        d_squared=run.twisted.d_squared,
        sectors=tuple(sectors),
        dim_v1_fixed=dim_fixed,
        dim_v1_orbifold=dim_orbifold,
        self_dual=self_dual,
        candidates=tuple(candidates_by_dim(dim_orbifold)),
    )
    logger.info("%s: dim V1^G = %d, dim V1^orb = %d", run.name or "run", dim_fixed, dim_orbifold)
    return result


def candidates_by_dim(
    dim: int, table: Mapping[int, Sequence[str]] | None = None
) -> list[str]:
    """Feasible affine structures with the given dim V_1."""
    table = candidate_table() if table is None else table
    return list(table.get(dim, ()))


def multiplier_check(run: OrbifoldRun, truncation: Fraction | int = 4) -> dict[str, bool]:
    """Check the type 0 multipliers on the sources.

    T(1, 0, d) must be invariant under tau -> tau + 1, and acting by S twice
    must give T(1, 0, -d).
    """
    n = run.order
    truncation = Fraction(truncation)
    results = {"T": True, "S": True}
    for d, source in run.sources.items():
        expansion = source.expand(truncation)
        if not source.translate(1).expand(truncation).equals(expansion):
            logger.warning("T(1,0,%d) is not invariant under T", d)
            results["T"] = False
        twice = act_and_expand(source, SL2Word(((Generator.S, 2),)), truncation)
        if not twice.equals(run.sources[-d % n].expand(truncation)):
            logger.warning("S^2 T(1,0,%d) differs from T(1,0,%d)", d, -d % n)
            results["S"] = False
    return results


def run_orbifold(
    spec: BaseAutomorphismSpec | LatticeAut, terms: int = 4, *, seed: int = 24
) -> OrbifoldResult:
    """Build the automorphism, check it has type 0, and compute its orbifold data."""
    if isinstance(spec, LatticeAut):
        g, name = spec, spec.lattice.name
    else:
        g, name = spec.build(), spec.name
    run = prepare_run(g, seed=seed, name=name)
    result = orbifold_v1_dim(run, terms)
    expected = {} if isinstance(spec, LatticeAut) else spec.expected
    for key, value in expected.items():
        found = getattr(result, key, None)
        if found is not None and found != value:
            logger.warning("%s: %s = %s, recorded %s", name, key, found, value)
    return result
