"""Finite quadratic modules, Weil representations, Verlinde fusion and orbifold fusion groups."""

import itertools
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm, prod
from typing import Protocol

import sympy

from .exactmath import (
    Cyc,
    cyc_mat_equal,
    cyc_mat_mul,
    inverse,
    phase,
    root_of_unity,
    smith_normal_form,
    sqrt_rational,
)

logger = logging.getLogger(__name__)

Element = tuple[int, ...]

MAX_ENUMERATION = 10_000


def _mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


class QuadraticGroup(Protocol):
    """Finite abelian group with a quadratic form, enumerable element by element."""

    @property
    def size(self) -> int: ...

    def elements(self) -> tuple[Element, ...]: ...

    def zero(self) -> Element: ...

    def add(self, x: Element, y: Element) -> Element: ...

    def q(self, x: Element) -> Fraction: ...

    def b(self, x: Element, y: Element) -> Fraction: ...


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups Z_{d1} x Z_{d2} x ... given by their orders."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(int(d) for d in self.orders)
        if any(d < 1 for d in orders):
            msg = f"Cyclic orders must be positive, got {orders}"
            raise ValueError(msg)
        object.__setattr__(self, "orders", orders)

    @property
    def size(self) -> int:
        """Number of elements."""
        return prod(self.orders)

    @property
    def exponent(self) -> int:
        """Least common multiple of the element orders."""
        return reduce(lcm, self.orders, 1)

    def zero(self) -> Element:
        """Neutral element."""
        return (0,) * len(self.orders)

    def reduce(self, x: Sequence[int]) -> Element:
        """Normal form of an integer coordinate vector."""
        return tuple(int(v) % d for v, d in zip(x, self.orders, strict=True))

    def add(self, x: Element, y: Element) -> Element:
        """Group law."""
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders, strict=True))

    def neg(self, x: Element) -> Element:
        """Inverse element."""
        return tuple(-a % d for a, d in zip(x, self.orders, strict=True))

    def scale(self, k: int, x: Element) -> Element:
        """k-fold sum of x."""
        return tuple(k * a % d for a, d in zip(x, self.orders, strict=True))

    def element_order(self, x: Element) -> int:
        """Order of x."""
        return reduce(lcm, (d // gcd(a, d) for a, d in zip(x, self.orders, strict=True)), 1)

    def elements(self) -> tuple[Element, ...]:
        """All elements in lexicographic order."""
        if self.size > MAX_ENUMERATION:
            msg = f"Group of order {self.size} is too large to enumerate (limit {MAX_ENUMERATION})"
            raise ValueError(msg)
        return tuple(itertools.product(*(range(d) for d in self.orders)))

    def index(self, x: Element) -> int:
        """Position of x in :meth:`elements`."""
        position = 0
        for a, d in zip(x, self.orders, strict=True):
            position = position * d + a
        return position


@dataclass(frozen=True)
class FiniteQuadraticModule(FiniteAbelianGroup):
    """Finite abelian group with a quadratic form q: D -> Q/Z.

    The form is stored as a rational symmetric matrix on the cyclic
    generators: q(e_i) = form[i][i] / 2 and b(e_i, e_j) = form[i][j], so that
    q(x) = x^T form x / 2 mod 1. ``projection`` maps coordinates of the
    presentation the module was built from onto the cyclic generators.
    """

    form: tuple[tuple[Fraction, ...], ...] = ()
    projection: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        super().__post_init__()
        form = tuple(tuple(Fraction(x) for x in row) for row in self.form)
        object.__setattr__(self, "form", form)
        k = len(self.orders)
        if len(form) != k or any(len(row) != k for row in form):
            msg = f"Form must be {k}x{k} to match the cyclic orders {self.orders}"
            raise ValueError(msg)
        for i, d in enumerate(self.orders):
            for j in range(k):
                if form[i][j] != form[j][i]:
                    msg = "Form must be symmetric"
                    raise ValueError(msg)
                if (d * form[i][j]).denominator != 1:
                    msg = f"b(e_{i}, e_{j}) = {form[i][j]} is not killed by the order {d}"
                    raise ValueError(msg)
            if (d * d * form[i][i] / 2).denominator != 1:
                msg = f"q is not well defined on the cyclic factor of order {d}"
                raise ValueError(msg)

    @classmethod
    def from_presentation(
        cls,
        relations: Sequence[Sequence[int]],
        form: Sequence[Sequence[Fraction | int]],
    ) -> "FiniteQuadraticModule":
        """Build Z^k / (row span of relations) with q(x) = x^T form x / 2.

        Args:
            relations: Integer rows spanning the relation lattice.
            form: Rational symmetric matrix on the k original generators.

        Returns:
            Module in invariant-factor coordinates; ``element_of`` maps
            original coordinates into it.

        """
        _, d, v = smith_normal_form(relations)
        k = len(form)
        diagonal = [d[i][i] if i < len(d) else 0 for i in range(k)]
        if any(x == 0 for x in diagonal):
            msg = "Relations do not have full rank: the group is infinite"
            raise ValueError(msg)
        keep = [i for i in range(k) if diagonal[i] != 1]
        v_inverse = inverse(v)
        # new generator i is row i of V^-1 in the old coordinates
        rows = [v_inverse[i] for i in keep]
        new_form = [
            [
                sum(
                    (
                        rows[a][s] * Fraction(form[s][t]) * rows[b][t]
                        for s in range(k)
                        for t in range(k)
                    ),
                    Fraction(0),
                )
                for b in range(len(keep))
            ]
            for a in range(len(keep))
        ]
        projection = tuple(tuple(v[s][i] for i in keep) for s in range(k))
        return cls(
            orders=tuple(diagonal[i] for i in keep),
            form=tuple(tuple(row) for row in new_form),
            projection=projection,
        )

    def element_of(self, x: Sequence[int]) -> Element:
        """Coordinates (in the building presentation) -> element of the module."""
        if not self.projection:
            return self.reduce(x)
        image = [
            sum(int(x[s]) * self.projection[s][i] for s in range(len(x)))
            for i in range(len(self.orders))
        ]
        return self.reduce(image)

    def q(self, x: Element) -> Fraction:
        """Quadratic form value in [0, 1)."""
        total = Fraction(0)
        for i, a in enumerate(x):
            if not a:
                continue
            total += a * a * self.form[i][i] / 2
            for j in range(i + 1, len(x)):
                total += a * x[j] * self.form[i][j]
        return _mod1(total)

    def b(self, x: Element, y: Element) -> Fraction:
        """Associated bilinear form b(x, y) = q(x + y) - q(x) - q(y)."""
        total = Fraction(0)
        for i, a in enumerate(x):
            if a:
                for j, c in enumerate(y):
                    if c:
                        total += a * c * self.form[i][j]
        return _mod1(total)

    def negated(self) -> "FiniteQuadraticModule":
        """Same group with the form -q."""
        return FiniteQuadraticModule(
            orders=self.orders,
            form=tuple(tuple(-x for x in row) for row in self.form),
            projection=self.projection,
        )

    def is_nondegenerate(self) -> bool:
        """True when b(x, -) vanishes identically only for x = 0."""
        r = len(self.orders)
        generators = [tuple(int(j == i) for j in range(r)) for i in range(r)]
        return all(
            any(self.b(x, e) for e in generators) for x in self.elements() if any(x)
        )

    def to_json(self) -> dict[str, object]:
        """Orders and generator values of q and b."""
        return {
            "orders": list(self.orders),
            "form": [[str(x) for x in row] for row in self.form],
        }


def fqm_from_gram(gram: Sequence[Sequence[int]]) -> FiniteQuadraticModule:
    """Discriminant form L'/L of the even lattice with the given Gram matrix.

    Raises:
        ValueError: If the Gram matrix is odd, non-symmetric or singular.

    """
    n = len(gram)
    if any(len(row) != n for row in gram):
        msg = "Gram matrix must be square"
        raise ValueError(msg)
    if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
        msg = "Gram matrix must be symmetric"
        raise ValueError(msg)
    if any(int(gram[i][i]) % 2 for i in range(n)):
        msg = "Gram matrix has an odd diagonal entry"
        raise ValueError(msg)
    if sympy.Matrix(gram).det() == 0:
        msg = "Gram matrix is singular"
        raise ValueError(msg)
    # the dual basis G^-1 e_i generates L'/L; relations are the rows of G
    return FiniteQuadraticModule.from_presentation(
        [[int(x) for x in row] for row in gram], inverse(gram)
    )


def gauss_sum(m: QuadraticGroup) -> Cyc:
    """Sum of e(q(x)) over the module."""
    values = [m.q(x) for x in m.elements()]
    conductor = reduce(lcm, (v.denominator for v in values), 1)
    counts: dict[int, Fraction] = {}
    for v in values:
        key = v.numerator * (conductor // v.denominator)
        counts[key] = counts.get(key, Fraction(0)) + 1
    return Cyc(conductor, counts)


def gauss_sum_signature(m: QuadraticGroup) -> int:
    """Signature mod 8 from the Gauss sum: sum e(q) = sqrt(|D|) e(sign / 8).

    Raises:
        ValueError: If the Gauss sum does not have modulus sqrt(|D|), which
            happens exactly for degenerate forms.

    """
    normalised = gauss_sum(m) / sqrt_rational(m.size)
    for sigma in range(8):
        if normalised == root_of_unity(sigma, 8):
            return sigma
    msg = "Gauss sum is not sqrt(|D|) times an eighth root of unity: the form is degenerate"
    raise ValueError(msg)


def level(m: QuadraticGroup) -> int:
    """Smallest N >= 1 with N q(x) = 0 for every x."""
    return reduce(lcm, (m.q(x).denominator for x in m.elements()), 1)


def gram_signature(gram: Sequence[Sequence[Fraction | int]]) -> int:
    """Real signature p - q of a symmetric matrix.

    All roots of the characteristic polynomial are real, so Descartes' rule
    counts them exactly.
    """
    x = sympy.Symbol("x")
    coefficients = list(sympy.Matrix(gram).charpoly(x).all_coeffs())

    def sign_changes(values: Sequence[sympy.Expr]) -> int:
        signs = [1 if v > 0 else -1 for v in values if v != 0]
        return sum(1 for a, b in itertools.pairwise(signs) if a != b)

    degree = len(coefficients) - 1
    positive = sign_changes(coefficients)
    negative = sign_changes([c * (-1) ** (degree - i) for i, c in enumerate(coefficients)])
    return positive - negative


# --- Weil representation ------------------------------------------------------


def weil_rep(m: QuadraticGroup) -> tuple[list[list[Cyc]], list[list[Cyc]]]:
    """Weil representation matrices (rho(S), rho(T)) in the basis of m.elements().

    rho(T) is diagonal with e(q(x)); rho(S)_{xy} = e(-sign/8) / sqrt|D| e(-b(x, y)).
    """
    sigma = gauss_sum_signature(m)
    elements = m.elements()
    scale = root_of_unity(-sigma, 8) / sqrt_rational(m.size)
    s_matrix = [[scale * phase(-m.b(x, y)) for y in elements] for x in elements]
    t_matrix = [
        [phase(m.q(x)) if i == j else Cyc.rational(0) for j in range(len(elements))]
        for i, x in enumerate(elements)
    ]
    return s_matrix, t_matrix


def check_modular_relations(
    s_matrix: list[list[Cyc]], t_matrix: list[list[Cyc]]
) -> tuple[bool, bool]:
    """Return ((ST)^3 == S^2, S^4 == +-1) as exact matrix identities."""
    s2 = cyc_mat_mul(s_matrix, s_matrix)
    st = cyc_mat_mul(s_matrix, t_matrix)
    st3 = cyc_mat_mul(cyc_mat_mul(st, st), st)
    s4 = cyc_mat_mul(s2, s2)
    n = len(s_matrix)
    scalar = s4[0][0]
    is_scalar = cyc_mat_equal(
        s4, [[scalar if i == j else Cyc.rational(0) for j in range(n)] for i in range(n)]
    )
    return cyc_mat_equal(st3, s2), is_scalar and (scalar in (1, -1))


# --- subgroups ----------------------------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a quadratic group given by generators and its element set."""

    generators: tuple[Element, ...]
    elements: frozenset[Element]

    @property
    def order(self) -> int:
        """Number of elements."""
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.elements


def _closure(m: QuadraticGroup, base: frozenset[Element], g: Element) -> frozenset[Element]:
    result = set(base)
    frontier = list(base)
    while frontier:
        nxt = []
        for h in frontier:
            y = m.add(h, g)
            if y not in result:
                result.add(y)
                nxt.append(y)
        frontier = nxt
    return frozenset(result)


def span(m: QuadraticGroup, generators: Sequence[Element]) -> Subgroup:
    """Subgroup generated by the given elements."""
    elements = frozenset([m.zero()])
    kept: list[Element] = []
    for g in generators:
        if g not in elements:
            elements = _closure(m, elements, g)
            kept.append(g)
    return Subgroup(tuple(kept), elements)


def _subgroup_of(m: QuadraticGroup, elements: frozenset[Element]) -> Subgroup:
    generated = span(m, [])
    for x in sorted(elements):
        if x not in generated.elements:
            generated = span(m, [*generated.generators, x])
    return generated


def _check_size(m: QuadraticGroup) -> None:
    if m.size > MAX_ENUMERATION:
        msg = f"Module of order {m.size} exceeds the enumeration limit {MAX_ENUMERATION}"
        raise ValueError(msg)


def is_isotropic(m: QuadraticGroup, h: Subgroup) -> bool:
    """True when q vanishes on the subgroup."""
    return all(m.q(x) == 0 for x in h.elements)


def isotropic_subgroups(m: QuadraticGroup) -> list[Subgroup]:
    """All subgroups on which q vanishes, ordered by size then elements.

    Raises:
        ValueError: If the module is too large to enumerate.

    """
    _check_size(m)
    isotropic = [x for x in m.elements() if m.q(x) == 0]
    start = span(m, [])
    found: dict[frozenset[Element], Subgroup] = {start.elements: start}
    frontier = [start]
    while frontier:
        nxt = []
        for h in frontier:
            for g in isotropic:
                if g in h.elements or any(m.b(g, x) for x in h.generators):
                    continue
                bigger = _closure(m, h.elements, g)
                if bigger not in found:
                    found[bigger] = Subgroup((*h.generators, g), bigger)
                    nxt.append(found[bigger])
        frontier = nxt
    return sorted(found.values(), key=lambda h: (h.order, sorted(h.elements)))


def perp(m: QuadraticGroup, h: Subgroup) -> Subgroup:
    """Orthogonal complement {x : b(x, h) = 0 for all h in H}."""
    _check_size(m)
    members = frozenset(
        x for x in m.elements() if all(m.b(x, g) == 0 for g in h.generators)
    )
    return _subgroup_of(m, members)


# --- isomorphism --------------------------------------------------------------


def fqm_isomorphic(
    a: FiniteQuadraticModule, b: FiniteQuadraticModule
) -> tuple[bool, tuple[Element, ...] | None]:
    """Search for an isometry a -> b.

    Returns:
        (found, images of the cyclic generators of a under the witness).

    """
    _check_size(a)
    _check_size(b)
    if a.size != b.size or sorted(a.orders) != sorted(b.orders):
        return False, None
    k = len(a.orders)
    basis = [tuple(1 if j == i else 0 for j in range(k)) for i in range(k)]
    candidates = [
        [
            y
            for y in b.elements()
            if b.element_order(y) == a.orders[i] and b.q(y) == a.q(basis[i])
        ]
        for i in range(k)
    ]

    def search(chosen: list[Element]) -> tuple[Element, ...] | None:
        i = len(chosen)
        if i == k:
            return tuple(chosen) if span(b, chosen).order == b.size else None
        for y in candidates[i]:
            if all(b.b(y, chosen[j]) == a.b(basis[i], basis[j]) for j in range(i)):
                found = search([*chosen, y])
                if found is not None:
                    return found
        return None

    witness = search([])
    return witness is not None, witness


# --- fusion group of a cyclic orbifold ----------------------------------------


@dataclass(frozen=True)
class FusionGroupData:
    """Fusion group of the irreducible modules of V^G for G cyclic of order n.

    Elements are pairs (i, j) in Z_n x Z_n with the twisted law
    (i, j) + (k, l) = (i + k, j + l + c_d(i, k)), d = 2t mod n, where
    c_d(i, k) = d when the representatives of i and k add up to n or more.
    """

    n: int
    t: int

    def __post_init__(self) -> None:
        if self.n < 1:
            msg = f"Order must be positive, got {self.n}"
            raise ValueError(msg)
        object.__setattr__(self, "t", self.t % self.n)

    @property
    def d(self) -> int:
        """Twist parameter 2t mod n."""
        return 2 * self.t % self.n

    @property
    def size(self) -> int:
        """|D| = n^2."""
        return self.n * self.n

    def cocycle(self, i: int, k: int) -> int:
        """Representative 2-cocycle c_d."""
        return 0 if i % self.n + k % self.n < self.n else self.d

    def zero(self) -> Element:
        """Class of the untwisted vacuum module."""
        return (0, 0)

    def elements(self) -> tuple[Element, ...]:
        """Pairs (i, j) in lexicographic order."""
        return tuple(itertools.product(range(self.n), repeat=2))

    def add(self, x: Element, y: Element) -> Element:
        """Twisted group law."""
        (i, j), (k, l) = x, y
        return (i + k) % self.n, (j + l + self.cocycle(i, k)) % self.n

    def contragredient(self, x: Element) -> Element:
        """Index of the contragredient module (-i, -j - c_d(i, -i))."""
        i, j = x
        return -i % self.n, (-j - self.cocycle(i, -i % self.n)) % self.n

    def q(self, x: Element) -> Fraction:
        """Conformal weight mod 1: ij/n + i^2 t / n^2."""
        i, j = x[0] % self.n, x[1] % self.n
        return _mod1(Fraction(i * j, self.n) + Fraction(i * i * self.t, self.n * self.n))

    def b(self, x: Element, y: Element) -> Fraction:
        """Bilinear form of q."""
        return _mod1(self.q(self.add(x, y)) - self.q(x) - self.q(y))

    def lam(self, i: int, k: int) -> Cyc:
        """Twisting factor e(-2 t i k / n^2) of the S-matrix."""
        i, k = i % self.n, k % self.n
        return phase(Fraction(-2 * self.t * i * k, self.n * self.n))

    @cached_property
    def s_matrix(self) -> list[list[Cyc]]:
        """S_{(i,j),(k,l)} = (1/n) e(-(il + jk)/n) lambda_{i,k}."""
        elements = self.elements()
        return [
            [
                phase(Fraction(-(i * l + j * k), self.n)) * self.lam(i, k) * Fraction(1, self.n)
                for (k, l) in elements
            ]
            for (i, j) in elements
        ]

    def t_matrix(self, central_charge: int = 24) -> list[list[Cyc]]:
        """Diagonal e(q - c/24)."""
        elements = self.elements()
        shift = Fraction(central_charge, 24)
        return [
            [phase(self.q(x) - shift) if a == c else Cyc.rational(0) for c in range(len(elements))]
            for a, x in enumerate(elements)
        ]

    def module(self) -> FiniteQuadraticModule:
        """Invariant-factor form of the group with q; element_of maps (i, j) into it."""
        n, t = self.n, self.t
        # (1,0) and (0,1) generate; n*(1,0) = (0,d) and (0,1) has order n
        relations = [[0, n], [n, -self.d]]
        form = [[Fraction(2 * t, n * n), Fraction(1, n)], [Fraction(1, n), Fraction(0)]]
        return FiniteQuadraticModule.from_presentation(relations, form)

    def underlying_orders(self) -> tuple[int, int]:
        """(n^2 / (n, d), (n, d))."""
        g = gcd(self.n, self.d)
        return self.n * self.n // g, g

    def to_json(self) -> dict[str, object]:
        """Group law, weights, S and T as JSON-ready data."""
        elements = self.elements()
        t_matrix = self.t_matrix()
        return {
            "order": self.n,
            "type": self.t,
            "d": self.d,
            "elements": [list(x) for x in elements],
            "law": [[list(self.add(x, y)) for y in elements] for x in elements],
            "q": {f"{i},{j}": str(self.q((i, j))) for i, j in elements},
            "contragredient": {f"{i},{j}": list(self.contragredient((i, j))) for i, j in elements},
            "S": [[s.to_json() for s in row] for row in self.s_matrix],
            "T": [t_matrix[a][a].to_json() for a in range(len(elements))],
        }


def fusion_group(n: int, t: int) -> FusionGroupData:
    """Fusion group data of an order-n orbifold of type t."""
    return FusionGroupData(n, t)


# --- Verlinde formula ---------------------------------------------------------


def _contragredient_permutation(s_matrix: Sequence[Sequence[Cyc]]) -> list[int]:
    s2 = cyc_mat_mul(s_matrix, s_matrix)
    permutation = []
    for i, row in enumerate(s2):
        nonzero = [j for j, x in enumerate(row) if not x.is_zero()]
        if len(nonzero) != 1 or row[nonzero[0]] != 1:
            msg = f"S^2 is not a permutation matrix (row {i})"
            raise ValueError(msg)
        permutation.append(nonzero[0])
    return permutation


def verlinde_fusion(
    s_matrix: Sequence[Sequence[Cyc]], vacuum: int = 0
) -> list[list[list[Fraction]]]:
    """Fusion coefficients N[a][b][c] = sum_u S_au S_bu S_c'u / S_vu.

    Raises:
        ZeroDivisionError: If a vacuum-row entry of S vanishes.
        ValueError: If S^2 is not a permutation.
        ArithmeticError: If a coefficient is not rational.

    """
    size = len(s_matrix)
    if any(len(row) != size for row in s_matrix):
        msg = "S must be square"
        raise ValueError(msg)
    if any(s_matrix[i][j] != s_matrix[j][i] for i in range(size) for j in range(i)):
        msg = "S must be symmetric"
        raise ValueError(msg)
    dual = _contragredient_permutation(s_matrix)
    for u in range(size):
        if s_matrix[vacuum][u].is_zero():
            msg = f"S has a zero entry in the vacuum row at column {u}"
            raise ZeroDivisionError(msg)
    monomials = [[entry.as_monomial() for entry in row] for row in s_matrix]
    if all(m is not None for row in monomials for m in row):
        return _verlinde_monomial(monomials, dual, vacuum)  # type: ignore[arg-type]
    quotient = [
        [s_matrix[a][u] / s_matrix[vacuum][u] for u in range(size)] for a in range(size)
    ]
    result = []
    for a in range(size):
        plane = []
        for b in range(size):
            weights = [quotient[a][u] * s_matrix[b][u] for u in range(size)]
            row = []
            for c in range(size):
                value = Cyc.sum(weights[u] * s_matrix[dual[c]][u] for u in range(size))
                row.append(_rational_or_raise(value))
            plane.append(row)
        result.append(plane)
    return result


def _rational_or_raise(value: Cyc) -> Fraction:
    rational = value.to_rational()
    if rational is None:
        msg = f"Fusion coefficient {value!r} is not rational"
        raise ArithmeticError(msg)
    return rational


def _verlinde_monomial(
    monomials: list[list[tuple[Fraction, Fraction]]], dual: list[int], vacuum: int
) -> list[list[list[Fraction]]]:
    size = len(monomials)
    conductor = reduce(lcm, (x.denominator for row in monomials for _, x in row), 1)
    coef = [[c for c, _ in row] for row in monomials]
    expo = [[int(x * conductor) for _, x in row] for row in monomials]
    result = []
    for a in range(size):
        plane = []
        for b in range(size):
            base_c = [
                coef[a][u] * coef[b][u] / coef[vacuum][u] for u in range(size)
            ]
            base_e = [expo[a][u] + expo[b][u] - expo[vacuum][u] for u in range(size)]
            row = []
            for c in range(size):
                terms: dict[int, Fraction] = {}
                cd = dual[c]
                for u in range(size):
                    key = (base_e[u] + expo[cd][u]) % conductor
                    terms[key] = terms.get(key, Fraction(0)) + base_c[u] * coef[cd][u]
                row.append(_rational_or_raise(Cyc(conductor, terms)))
            plane.append(row)
        result.append(plane)
    return result


def s_matrix_identities(group: FusionGroupData) -> bool:
    """Check S_{a u} S_{b u} = S_{a+b, u} S_{0 u} for all a, b, u."""
    elements = group.elements()
    index = {x: i for i, x in enumerate(elements)}
    s = group.s_matrix
    for a, x in enumerate(elements):
        for b, y in enumerate(elements):
            c = index[group.add(x, y)]
            for u in range(len(elements)):
                if s[a][u] * s[b][u] != s[c][u] * s[0][u]:
                    return False
    return True


