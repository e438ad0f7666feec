"""SL2(Z) action on closed forms built from generalised eta factors and lattice theta components."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, gcd

from .enums import Generator
from .exactmath import Cyc, mat_vec, phase, sqrt_rational
from .lattice import EvenLattice, coset_theta, discriminant_representatives, theta_series
from .qseries import PuiseuxSeries, euler_power

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GammaElement:
    """Element (a b; c d) of SL2(Z)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            msg = f"Matrix ({self.a} {self.b}; {self.c} {self.d}) does not have determinant 1"
            raise ValueError(msg)

    @classmethod
    def identity(cls) -> "GammaElement":
        """The identity matrix."""
        return cls(1, 0, 0, 1)

    @classmethod
    def s(cls) -> "GammaElement":
        """S = (0 -1; 1 0)."""
        return cls(0, -1, 1, 0)

    @classmethod
    def t(cls, power: int = 1) -> "GammaElement":
        """T^power = (1 power; 0 1)."""
        return cls(1, power, 0, 1)

    @classmethod
    def generator(cls, letter: Generator, power: int = 1) -> "GammaElement":
        """Matrix of a single word letter."""
        if letter is Generator.T:
            return cls.t(power)
        result = cls.identity()
        for _ in range(power % 4):
            result = result @ cls.s()
        return result

    def __matmul__(self, other: "GammaElement") -> "GammaElement":
        return GammaElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "GammaElement":
        """Inverse matrix."""
        return GammaElement(self.d, -self.b, -self.c, self.a)

    def act_on_row(self, row: tuple[int, int], n: int) -> tuple[int, int]:
        """(i, j) * gamma modulo n."""
        i, j = row
        return (i * self.a + j * self.c) % n, (i * self.b + j * self.d) % n


@dataclass(frozen=True)
class SL2Word:
    """Product of letters S^k, T^k, read left to right."""

    letters: tuple[tuple[Generator, int], ...] = ()

    def product(self) -> GammaElement:
        """The matrix the word multiplies out to."""
        result = GammaElement.identity()
        for letter, power in self.letters:
            result = result @ GammaElement.generator(letter, power)
        return result

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(
            letter.value if power == 1 else f"{letter.value}^{power}"
            for letter, power in self.letters
        )

    @classmethod
    def parse(cls, text: str) -> "SL2Word":
        """Parse "S T^-2 S"."""
        letters = []
        for token in text.split():
            symbol, _, power = token.partition("^")
            letters.append((Generator.parse(symbol), int(power or 1)))
        return cls(tuple(letters))


def word_for(gamma: GammaElement) -> SL2Word:
    """Continued-fraction word in S and T^k whose product is gamma."""
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    letters: list[tuple[Generator, int]] = []
    while c != 0:
        k = a // c
        if k:
            letters.append((Generator.T, k))
            a, b = a - k * c, b - k * d
        letters.append((Generator.S, 1))
        a, b, c, d = c, d, -a, -b
    if a == 1:
        if b:
            letters.append((Generator.T, b))
    else:
        letters += [(Generator.S, 1), (Generator.S, 1)]
        if b:
            letters.append((Generator.T, -b))
    word = SL2Word(tuple(letters))
    if word.product() != gamma:  # pragma: no cover - the reduction is exact
        msg = f"Word {word} does not multiply to {gamma}"
        raise ArithmeticError(msg)
    return word


@lru_cache(maxsize=None)
def dedekind_sum(d: int, c: int) -> Fraction:
    """s(d, c) = sum_{k=1}^{c-1} ((k/c)) ((kd/c)).

    Raises:
        ValueError: If c is not positive or gcd(d, c) != 1.

    """
    if c <= 0:
        msg = f"Dedekind sum needs a positive modulus, got {c}"
        raise ValueError(msg)
    if gcd(d, c) != 1:
        msg = f"Dedekind sum needs coprime arguments, got ({d}, {c})"
        raise ValueError(msg)

    def sawtooth(x: Fraction) -> Fraction:
        return Fraction(0) if x.denominator == 1 else x - floor(x) - Fraction(1, 2)

    return sum(
        (sawtooth(Fraction(k, c)) * sawtooth(Fraction(k * d, c)) for k in range(1, c)), Fraction(0)
    )


def _eta_angle(gamma: GammaElement) -> Fraction:
    return Fraction(gamma.a + gamma.d, 24 * gamma.c) - dedekind_sum(gamma.d, gamma.c) / 2


def eta_multiplier(gamma: GammaElement) -> Cyc:
    """epsilon with eta(gamma tau) = epsilon (-i(c tau + d))^{1/2} eta(tau), for c > 0."""
    if gamma.c <= 0:
        msg = "The eta multiplier formula here needs c > 0"
        raise ValueError(msg)
    return phase(_eta_angle(gamma))


# --- closed forms -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class EtaFactor:
    """eta((alpha tau + beta) / delta)^exponent with 0 <= beta < delta."""

    alpha: int
    beta: int
    delta: int
    exponent: int

    def __post_init__(self) -> None:
        if self.alpha <= 0 or self.delta <= 0:
            argument = f"({self.alpha} tau + {self.beta}) / {self.delta}"
            msg = f"Eta argument {argument} must have positive scale"
            raise ValueError(msg)

    @classmethod
    def normalised(
        cls, alpha: int, beta: int, delta: int, exponent: int
    ) -> tuple[Cyc, "EtaFactor"]:
        """Reduce to lowest terms with 0 <= beta < delta, returning the phase picked up."""
        common = gcd(gcd(alpha, beta), delta)
        alpha, beta, delta = alpha // common, beta // common, delta // common
        k, beta = divmod(beta, delta)
        return phase(Fraction(k * exponent, 24)), cls(alpha, beta, delta, exponent)

    @property
    def scale(self) -> Fraction:
        """alpha / delta."""
        return Fraction(self.alpha, self.delta)

    @property
    def leading_exponent(self) -> Fraction:
        """Exponent of the first q-power."""
        return Fraction(self.exponent * self.alpha, 24 * self.delta)

    def translate(self, k: int) -> tuple[Cyc, "EtaFactor"]:
        """The factor at tau + k."""
        beta = self.beta + k * self.alpha
        return EtaFactor.normalised(self.alpha, beta, self.delta, self.exponent)

    def invert(self) -> tuple[Cyc, Fraction, "EtaFactor"]:
        """The factor at -1/tau as (multiplier, radicand, new factor).

        The value is multiplier * sqrt(radicand) * (-i tau)^{exponent/2} * new factor(tau).
        """
        # eta((beta tau - alpha) / (delta tau)) = eta(gamma U tau) with U upper triangular
        g = gcd(self.beta, self.delta)
        a_, c_ = self.beta // g, self.delta // g
        # x a_ + y c_ = 1
        x = pow(a_, -1, c_)
        y = (1 - x * a_) // c_
        gamma = GammaElement(a_, -y, c_, x)
        epsilon = phase(_eta_angle(gamma) * self.exponent)
        radicand = Fraction(g, self.alpha) ** self.exponent
        shift, image = EtaFactor.normalised(
            g * g, -g * gamma.d * self.alpha, self.alpha * self.delta, self.exponent
        )
        return epsilon * shift, radicand, image

    def expand(self, order: Fraction) -> PuiseuxSeries:
        """Expansion with every exponent below order exact."""
        lead = self.leading_exponent
        step = self.scale
        count = max(0, ceil((order - lead) / step))
        coefficients = euler_power(self.exponent, count)
        base = Fraction(self.beta, self.delta)
        terms = {
            lead + k * step: phase(base * k + base * self.exponent / 24) * c
            for k, c in enumerate(coefficients)
            if c
        }
        return PuiseuxSeries(terms, order)

    def describe(self) -> str:
        """Text such as eta((t+1)/5)^-6."""
        top = f"{self.alpha if self.alpha != 1 else ''}t"
        if self.beta:
            top = f"({top}+{self.beta})"
        argument = top if self.delta == 1 else f"{top}/{self.delta}"
        return f"eta({argument})^{self.exponent}"


def eta_transform(factor: EtaFactor, gamma: GammaElement) -> tuple[EtaFactor, Cyc, Fraction]:
    """Rewrite factor(gamma tau) as multiplier * automorphy factor * new factor(tau).

    Returns:
        Tuple (new factor, multiplier including the square roots of the radicands,
        weight exponent/2 of the formal automorphy factor).

    """
    multiplier = Cyc.rational(1)
    radicand = Fraction(1)
    current = factor
    for letter, power in word_for(gamma).letters:
        if letter is Generator.T:
            shift, current = current.translate(power)
            multiplier = multiplier * shift
            continue
        for _ in range(power % 4):
            step, extra, current = current.invert()
            multiplier = multiplier * step
            radicand *= extra
    return current, multiplier * sqrt_rational(radicand), Fraction(factor.exponent, 2)


def _canonical_component(
    lattice: EvenLattice, shift: Sequence[Fraction], functional: Sequence[Fraction]
) -> tuple[Cyc, "ThetaComponent"]:
    """Reduce shift and functional mod 1; theta_{v,u+m} = e(v . m) theta_{v,u}."""
    reduced_shift = tuple(Fraction(x) % 1 for x in shift)
    whole = [floor(Fraction(u)) for u in functional]
    reduced_functional = tuple(Fraction(u) - w for u, w in zip(functional, whole, strict=True))
    angle = sum((s * w for s, w in zip(reduced_shift, whole, strict=True)), Fraction(0))
    return phase(angle), ThetaComponent(lattice, reduced_shift, reduced_functional)


def _dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, y, strict=True)), Fraction(0))


@dataclass(frozen=True)
class ThetaComponent:
    """theta_{v,u}(tau) = sum over y in v + Z^r of e(y . u) q^{y^T G y / 2}.

    ``shift`` is v in lattice coordinates and ``functional`` is u = G w for the
    character vector w, so that e((w, alpha)) = e(y . u).
    """

    lattice: EvenLattice
    shift: tuple[Fraction, ...]
    functional: tuple[Fraction, ...]

    @classmethod
    def of(
        cls,
        lattice: EvenLattice,
        v: Sequence[Fraction | int] | None = None,
        w: Sequence[Fraction | int] | None = None,
    ) -> tuple[Cyc, "ThetaComponent"]:
        """Component for a shift v and character vector w (both in lattice coordinates)."""
        zero = [Fraction(0)] * lattice.rank
        v = [Fraction(x) for x in v] if v is not None else zero
        u = mat_vec(lattice.gram, w) if w is not None else zero
        return _canonical_component(lattice, v, u)

    @property
    def weight(self) -> Fraction:
        """Modular weight rank/2."""
        return Fraction(self.lattice.rank, 2)

    def translate(self, k: int) -> tuple[Cyc, "ThetaComponent"]:
        """theta_{v,u}(tau + k) = e(-k (v,v)/2) theta_{v, u + k G v}(tau)."""
        gv = mat_vec(self.lattice.gram, list(self.shift))
        factor, image = _canonical_component(
            self.lattice, self.shift, [u + k * x for u, x in zip(self.functional, gv, strict=True)]
        )
        return factor * phase(-k * _dot(self.shift, gv) / 2), image

    def invert(self) -> list[tuple[Cyc, "ThetaComponent"]]:
        """theta_{v,u}(-1/tau) without its (-i tau)^{rank/2} factor.

        Poisson summation gives |D|^{-1/2} e(v . u) times the sum over y in
        Z^r / G Z^r of theta_{G^{-1}(y - u), G v}.
        """
        lattice = self.lattice
        v = list(self.shift)
        kappa = sqrt_rational(Fraction(1, abs(lattice.determinant)))
        kappa *= phase(_dot(v, list(self.functional)))
        functional = mat_vec(lattice.gram, v)
        inverse = lattice.gram_inverse
        result = []
        for y in discriminant_representatives(lattice):
            shift = mat_vec(inverse, [a - b for a, b in zip(y, self.functional, strict=True)])
            factor, image = _canonical_component(lattice, shift, functional)
            result.append((kappa * factor, image))
        return result

    def expand(self, order: Fraction) -> PuiseuxSeries:
        """Expansion below order."""
        lattice = self.lattice
        if lattice.rank == 0:
            return PuiseuxSeries.constant(1, order)
        trivial = not any(self.shift) and not any(self.functional)
        if lattice.rank == 24 and lattice.unimodular and trivial:
            return theta_series(lattice, truncation=order)
        return coset_theta(lattice.gram, self.shift, self.functional, order)

    def describe(self) -> str:
        """Text such as theta[A4^6^(g^1); v=(0,0,0,0); u=(0,0,0,1/2)]."""
        name = self.lattice.name or f"rank {self.lattice.rank}"
        v = ",".join(str(x) for x in self.shift)
        u = ",".join(str(x) for x in self.functional)
        return f"theta[{name}; v=({v}); u=({u})]"


@dataclass(frozen=True)
class ModularTerm:
    """coefficient * prod eta factors * theta component (or 1)."""

    coefficient: Cyc
    etas: tuple[EtaFactor, ...] = ()
    theta: ThetaComponent | None = None

    @property
    def weight(self) -> Fraction:
        """Formal modular weight."""
        eta_weight = Fraction(sum(f.exponent for f in self.etas), 2)
        return eta_weight + (self.theta.weight if self.theta is not None else 0)

    def describe(self) -> str:
        """Text rendering."""
        parts = [f.describe() for f in self.etas]
        if self.theta is not None:
            parts.append(self.theta.describe())
        return f"({self.coefficient!r}) " + " ".join(parts or ["1"])


def _merge_etas(factors: Iterable[EtaFactor]) -> tuple[EtaFactor, ...]:
    exponents: dict[tuple[int, int, int], int] = {}
    for f in factors:
        key = (f.alpha, f.beta, f.delta)
        exponents[key] = exponents.get(key, 0) + f.exponent
    return tuple(sorted(EtaFactor(*key, e) for key, e in exponents.items() if e))


@dataclass(frozen=True)
class ModularObject:
    """Finite sum of ModularTerms, representing a function on the upper half plane."""

    terms: tuple[ModularTerm, ...] = field(default_factory=tuple)

    @classmethod
    def collect(cls, terms: Iterable[ModularTerm]) -> "ModularObject":
        """Merge terms with the same closed form and drop zero coefficients."""
        merged: dict[tuple[tuple[EtaFactor, ...], ThetaComponent | None], Cyc] = {}
        for term in terms:
            key = (_merge_etas(term.etas), term.theta)
            merged[key] = merged[key] + term.coefficient if key in merged else term.coefficient
        return cls(tuple(
            ModularTerm(coefficient, etas, theta)
            for (etas, theta), coefficient in merged.items()
            if not coefficient.is_zero()
        ))

    @classmethod
    def eta_quotient(
        cls,
        shape: dict[int, int] | Sequence[tuple[int, int]],
        coefficient: Cyc | Fraction | int = 1,
    ) -> "ModularObject":
        """coefficient * prod_k eta(k tau)^{b_k}."""
        pairs = shape.items() if isinstance(shape, dict) else shape
        etas = tuple(EtaFactor(k, 0, 1, b) for k, b in pairs if b)
        return cls.collect([ModularTerm(Cyc.coerce(coefficient), etas)])

    @classmethod
    def theta(
        cls,
        lattice: EvenLattice,
        v: Sequence[Fraction | int] | None = None,
        w: Sequence[Fraction | int] | None = None,
    ) -> "ModularObject":
        """A single theta component theta_{L,v,w}."""
        coefficient, component = ThetaComponent.of(lattice, v, w)
        return cls((ModularTerm(coefficient, (), component),))

    @classmethod
    def constant(cls, value: Cyc | Fraction | int) -> "ModularObject":
        """A constant function."""
        return cls.collect([ModularTerm(Cyc.coerce(value))])

    def __add__(self, other: "ModularObject") -> "ModularObject":
        return ModularObject.collect([*self.terms, *other.terms])

    def __mul__(self, other: "ModularObject") -> "ModularObject":
        products = []
        for left in self.terms:
            for right in other.terms:
                if left.theta is not None and right.theta is not None:
                    msg = "Products of two theta components are not supported"
                    raise ValueError(msg)
                products.append(ModularTerm(
                    left.coefficient * right.coefficient,
                    (*left.etas, *right.etas),
                    left.theta if left.theta is not None else right.theta,
                ))
        return ModularObject.collect(products)

    def check_weight_zero(self) -> None:
        """Raise ArithmeticError unless every term has weight 0."""
        for term in self.terms:
            if term.weight != 0:
                msg = (
                    "Automorphy factors do not cancel: "
                    f"term {term.describe()} has weight {term.weight}"
                )
                raise ArithmeticError(msg)

    def translate(self, k: int) -> "ModularObject":
        """tau -> F(tau + k)."""
        images = []
        for term in self.terms:
            coefficient = term.coefficient
            etas = []
            for factor in term.etas:
                shift, image = factor.translate(k)
                coefficient = coefficient * shift
                etas.append(image)
            component = term.theta
            if component is not None:
                shift, component = component.translate(k)
                coefficient = coefficient * shift
            images.append(ModularTerm(coefficient, tuple(etas), component))
        return ModularObject.collect(images)

    def invert(self) -> "ModularObject":
        """tau -> F(-1/tau), dropping the (-i tau) powers of each term."""
        images = []
        for term in self.terms:
            coefficient = term.coefficient
            etas = []
            radicand = Fraction(1)
            for factor in term.etas:
                multiplier, extra, image = factor.invert()
                coefficient = coefficient * multiplier
                radicand *= extra
                etas.append(image)
            if radicand != 1:
                coefficient = coefficient * sqrt_rational(radicand)
            if term.theta is None:
                images.append(ModularTerm(coefficient, tuple(etas)))
                continue
            images.extend(
                ModularTerm(coefficient * factor, tuple(etas), component)
                for factor, component in term.theta.invert()
            )
        return ModularObject.collect(images)

    def act(self, word: SL2Word | GammaElement) -> "ModularObject":
        """F(gamma tau) for gamma the product of the word (letters applied left to right)."""
        if isinstance(word, GammaElement):
            word = word_for(word)
        result = self
        for letter, power in word.letters:
            if letter is Generator.T:
                result = result.translate(power)
                continue
            for _ in range(power % 4):
                result = result.invert()
        return result

    def expand(self, truncation: Fraction | int) -> PuiseuxSeries:
        """q-expansion exact below truncation."""
        truncation = Fraction(truncation)
        total = PuiseuxSeries({}, truncation)
        groups: dict[tuple[EtaFactor, ...], list[ModularTerm]] = {}
        for term in self.terms:
            groups.setdefault(term.etas, []).append(term)
        for etas, terms in groups.items():
            leads = [f.leading_exponent for f in etas]
            lead = sum(leads, Fraction(0))
            # theta parts start at q^0 or later
            body = PuiseuxSeries({}, truncation - lead)
            for term in terms:
                part = (
                    term.theta.expand(truncation - lead) if term.theta is not None
                    else PuiseuxSeries.constant(1, truncation - lead)
                )
                body = body + part.scale(term.coefficient)
            for factor, own in zip(etas, leads, strict=True):
                body = body * factor.expand(truncation - lead + own)
            total = total + body.truncate(truncation)
        return total

    def describe(self) -> str:
        """One line per term."""
        return "\n".join(term.describe() for term in self.terms) or "0"


def theta_vv_transform(
    lattice: EvenLattice,
    v: Sequence[Fraction | int] | None,
    w: Sequence[Fraction | int] | None,
    gamma: GammaElement,
) -> list[tuple[Cyc, ThetaComponent]]:
    """theta_{L,v,w}(gamma tau) as a combination of components, automorphy factor dropped."""
    image = ModularObject.theta(lattice, v, w).act(gamma)
    return [(term.coefficient, term.theta) for term in image.terms if term.theta is not None]


def act_and_expand(
    obj: ModularObject, gamma: GammaElement | SL2Word, truncation: Fraction | int
) -> PuiseuxSeries:
    """Expansion of obj(gamma tau).

    Raises:
        ArithmeticError: If some term does not have weight 0.

    """
    obj.check_weight_zero()
    image = obj.act(gamma)
    image.check_weight_zero()
    logger.debug("acted by %s: %d terms", gamma, len(image.terms))
    return image.expand(truncation)
