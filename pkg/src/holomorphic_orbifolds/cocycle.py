"""Normalised abelian 3-cocycles (F, Omega) on finite abelian groups.

Values are roots of unity and are stored additively: an entry k of a table
with modulus N stands for e(k / N).
"""

import itertools
import logging
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .exactmath import Cyc, root_of_unity, smith_normal_form
from .quadform import Element, FiniteAbelianGroup, FiniteQuadraticModule, Subgroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AbelianCocycle:
    """Tables of F: D^3 -> mu_N and Omega: D^2 -> mu_N, indexed by element position."""

    group: FiniteAbelianGroup
    modulus: int
    f: tuple[int, ...]
    omega: tuple[int, ...]

    def __post_init__(self) -> None:
        size = self.group.size
        if len(self.f) != size**3 or len(self.omega) != size**2:
            msg = f"Tables do not match a group of order {size}"
            raise ValueError(msg)
        object.__setattr__(self, "f", tuple(x % self.modulus for x in self.f))
        object.__setattr__(self, "omega", tuple(x % self.modulus for x in self.omega))

    @classmethod
    def tabulate(
        cls,
        group: FiniteAbelianGroup,
        modulus: int,
        f: Callable[[Element, Element, Element], int],
        omega: Callable[[Element, Element], int],
    ) -> "AbelianCocycle":
        """Evaluate exponent functions on every tuple of elements."""
        elements = group.elements()
        return cls(
            group=group,
            modulus=modulus,
            f=tuple(f(a, b, c) for a in elements for b in elements for c in elements),
            omega=tuple(omega(a, b) for a in elements for b in elements),
        )

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup) -> "AbelianCocycle":
        """F = 1 and Omega = 1."""
        size = group.size
        return cls(group, 1, (0,) * size**3, (0,) * size**2)

    def f_exponent(self, a: Element, b: Element, c: Element) -> int:
        """k with F(a, b, c) = e(k / modulus)."""
        index = self.group.index
        size = self.group.size
        return self.f[(index(a) * size + index(b)) * size + index(c)]

    def omega_exponent(self, a: Element, b: Element) -> int:
        """k with Omega(a, b) = e(k / modulus)."""
        return self.omega[self.group.index(a) * self.group.size + self.group.index(b)]

    def F(self, a: Element, b: Element, c: Element) -> Cyc:  # noqa: N802
        """Associator value."""
        return root_of_unity(self.f_exponent(a, b, c), self.modulus)

    def Omega(self, a: Element, b: Element) -> Cyc:  # noqa: N802
        """Braiding value."""
        return root_of_unity(self.omega_exponent(a, b), self.modulus)

    def with_f(self, a: Element, b: Element, c: Element, exponent: int) -> "AbelianCocycle":
        """Copy with one associator entry replaced."""
        index = self.group.index
        size = self.group.size
        position = (index(a) * size + index(b)) * size + index(c)
        f = list(self.f)
        f[position] = exponent
        return AbelianCocycle(self.group, self.modulus, tuple(f), self.omega)

    def to_json(self) -> dict[str, object]:
        """Tables as exponent lists over the stored modulus."""
        return {
            "orders": list(self.group.orders),
            "modulus": self.modulus,
            "F": list(self.f),
            "Omega": list(self.omega),
        }


@dataclass(frozen=True)
class CocycleCheck:
    """Result of verifying the abelian cocycle identities."""

    valid: bool
    violation: str | None = None
    witness: tuple[Element, ...] = ()


def verify_abelian_cocycle(cocycle: AbelianCocycle) -> CocycleCheck:
    """Check normalisation, the pentagon identity and both hexagon identities."""
    group = cocycle.group
    elements = group.elements()
    size = len(elements)
    n = cocycle.modulus
    add = [[group.index(group.add(x, y)) for y in elements] for x in elements]
    f = cocycle.f
    w = cocycle.omega

    def fv(a: int, b: int, c: int) -> int:
        return f[(a * size + b) * size + c]

    def wv(a: int, b: int) -> int:
        return w[a * size + b]

    zero = group.index(group.zero())
    for a, b in itertools.product(range(size), repeat=2):
        if fv(a, b, zero) or fv(a, zero, b) or fv(zero, a, b):
            return CocycleCheck(False, "normalisation of F", (elements[a], elements[b]))
        if wv(a, zero) or wv(zero, a):
            return CocycleCheck(False, "normalisation of Omega", (elements[a],))

    for a, b, c in itertools.product(range(size), repeat=3):
        bc, ab = add[b][c], add[a][b]
        hexagon_1 = (
            -fv(a, b, c) + wv(a, bc) - fv(b, c, a) - wv(a, b) + fv(b, a, c) - wv(a, c)
        )
        if hexagon_1 % n:
            return CocycleCheck(False, "first hexagon", (elements[a], elements[b], elements[c]))
        hexagon_2 = (
            fv(a, b, c) + wv(ab, c) + fv(c, a, b) - wv(b, c) - fv(a, c, b) - wv(a, c)
        )
        if hexagon_2 % n:
            return CocycleCheck(False, "second hexagon", (elements[a], elements[b], elements[c]))

    for a, b, c, d in itertools.product(range(size), repeat=4):
        pentagon = (
            fv(a, b, c)
            - fv(a, b, add[c][d])
            + fv(a, add[b][c], d)
            - fv(add[a][b], c, d)
            + fv(b, c, d)
        )
        if pentagon % n:
            return CocycleCheck(
                False, "pentagon", (elements[a], elements[b], elements[c], elements[d])
            )
    return CocycleCheck(True)


def braiding_b(cocycle: AbelianCocycle) -> dict[tuple[Element, Element, Element], Cyc]:
    """B(a, b, c) = F(b, a, c)^-1 Omega(a, b) F(a, b, c)."""
    elements = cocycle.group.elements()
    table = {}
    for a, b, c in itertools.product(elements, repeat=3):
        exponent = (
            -cocycle.f_exponent(b, a, c)
            + cocycle.omega_exponent(a, b)
            + cocycle.f_exponent(a, b, c)
        )
        table[a, b, c] = root_of_unity(exponent, cocycle.modulus)
    return table


def q_from_omega(cocycle: AbelianCocycle) -> dict[Element, Fraction]:
    """Quadratic form with Omega(a, a) = e(q(a)).

    Raises:
        ValueError: If the diagonal of Omega is not a quadratic function.

    """
    group = cocycle.group
    q = {
        x: Fraction(cocycle.omega_exponent(x, x) % cocycle.modulus, cocycle.modulus)
        for x in group.elements()
    }
    for x in group.elements():
        for k in range(group.element_order(x) + 1):
            if (q[group.scale(k, x)] - k * k * q[x]).denominator != 1:
                msg = f"Omega(a, a) is not quadratic: q({k} * {x}) != {k}^2 q({x})"
                raise ValueError(msg)
    return q


def standard_cocycle(module: FiniteQuadraticModule) -> AbelianCocycle:
    """Abelian 3-cocycle whose Omega diagonal realises the quadratic form of module.

    On each cyclic factor Z_m with q(1) = k / 2m the associator is
    F(x, y, z) = e(k x c(y, z) / 2) where c is the carry of y + z, and
    Omega(x, y) = e(k x y / 2m); the cross terms of the form enter Omega as a
    bicharacter.
    """
    orders = module.orders
    factors = range(len(orders))
    numerators = []
    for i, m in enumerate(orders):
        value = module.form[i][i] / 2
        k = value * 2 * m
        if k.denominator != 1 or (m % 2 and k.numerator % 2):
            msg = f"q(e_{i}) = {value} is not a quadratic value on Z_{m}"
            raise ValueError(msg)
        numerators.append(int(k))
    modulus = 2
    for i in factors:
        modulus = lcm(modulus, 2 * orders[i])
        for j in factors:
            modulus = lcm(modulus, module.form[i][j].denominator)

    def f(x: Element, y: Element, z: Element) -> int:
        total = 0
        for i in factors:
            if y[i] + z[i] >= orders[i]:
                total += numerators[i] * x[i] * (modulus // 2)
        return total

    def omega(x: Element, y: Element) -> int:
        total = Fraction(0)
        for i in factors:
            total += Fraction(numerators[i] * x[i] * y[i], 2 * orders[i])
            for j in range(i + 1, len(orders)):
                total += module.form[i][j] * x[i] * y[j]
        return int(total * modulus)

    return AbelianCocycle.tabulate(module, modulus, f, omega)


@dataclass(frozen=True)
class CoboundaryWitness:
    """2-cochain phi on H with (F, Omega)|_H = (d phi, phi(a, b) / phi(b, a))."""

    elements: tuple[Element, ...]
    phi: dict[tuple[Element, Element], Fraction]


def trivialize_on_isotropic(
    cocycle: AbelianCocycle, subgroup: Subgroup
) -> CoboundaryWitness | None:
    """Solve for a 2-cochain trivialising the restriction to a subgroup.

    The problem is linear over Q/Z in the exponents: with U A V = D in Smith
    form it is solvable exactly when the rows of U * target beyond the rank
    are integral.

    Returns:
        The witness, or None when the restriction is not a coboundary.

    """
    group = cocycle.group
    members = tuple(sorted(subgroup.elements))
    size = len(members)
    position = {x: i for i, x in enumerate(members)}

    def unknown(a: int, b: int) -> int:
        return a * size + b

    rows: list[list[int]] = []
    target: list[Fraction] = []
    for a, b, c in itertools.product(range(size), repeat=3):
        x, y, z = members[a], members[b], members[c]
        row = [0] * (size * size)
        # d phi(x, y, z) = phi(y, z) - phi(x + y, z) + phi(x, y + z) - phi(x, y)
        row[unknown(b, c)] += 1
        row[unknown(position[group.add(x, y)], c)] -= 1
        row[unknown(a, position[group.add(y, z)])] += 1
        row[unknown(a, b)] -= 1
        rows.append(row)
        target.append(Fraction(cocycle.f_exponent(x, y, z), cocycle.modulus))
    for a, b in itertools.product(range(size), repeat=2):
        row = [0] * (size * size)
        row[unknown(a, b)] += 1
        row[unknown(b, a)] -= 1
        rows.append(row)
        target.append(Fraction(cocycle.omega_exponent(members[a], members[b]), cocycle.modulus))

    u, d, v = smith_normal_form(rows)
    rotated = [
        sum((u[i][j] * target[j] for j in range(len(target))), Fraction(0))
        for i in range(len(rows))
    ]
    unknowns = size * size
    psi: list[Fraction] = []
    for i in range(len(rows)):
        pivot = d[i][i] if i < unknowns else 0
        if pivot:
            psi.append(rotated[i] / pivot)
        elif rotated[i].denominator != 1:
            logger.debug("Restriction to a subgroup of order %d is not a coboundary", size)
            return None
    psi.extend(Fraction(0) for _ in range(unknowns - len(psi)))
    phi_values = [
        sum((v[i][j] * psi[j] for j in range(unknowns)), Fraction(0)) for i in range(unknowns)
    ]
    phi = {
        (members[a], members[b]): phi_values[unknown(a, b)] % 1
        for a, b in itertools.product(range(size), repeat=2)
    }
    _check_witness(cocycle, members, phi, rows, target)
    return CoboundaryWitness(members, phi)


def _check_witness(
    cocycle: AbelianCocycle,
    members: tuple[Element, ...],
    phi: dict[tuple[Element, Element], Fraction],
    rows: list[list[int]],
    target: list[Fraction],
) -> None:
    size = len(members)
    values = [phi[members[k // size], members[k % size]] for k in range(size * size)]
    for row, expected in zip(rows, target, strict=True):
        total = sum((c * x for c, x in zip(row, values, strict=True) if c), Fraction(0))
        if (total - expected).denominator != 1:  # pragma: no cover - guarded by the Smith form
            msg = f"Coboundary witness fails on a cocycle of modulus {cocycle.modulus}"
            raise ArithmeticError(msg)


def q_vanishes_on(cocycle: AbelianCocycle, subgroup: Subgroup) -> bool:
    """True when q_Omega vanishes on the subgroup."""
    return all(
        cocycle.omega_exponent(x, x) % cocycle.modulus == 0 for x in subgroup.elements
    )
