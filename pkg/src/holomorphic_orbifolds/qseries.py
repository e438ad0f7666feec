"""Truncated Puiseux q-expansions and the standard eta, Eisenstein and discriminant series."""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import ceil, lcm

import sympy

from .enums import SeriesOp
from .exactmath import Cyc, phase

Scalar = Cyc | Fraction | int


def _is_integral(x: Fraction) -> bool:
    return x.denominator == 1


class PuiseuxSeries:
    """Finite sum of c_e q^e with rational e, exact below the truncation order.

    All exponents below ``order`` are represented; exponents at or above it are
    unknown. ``denominator`` is a common denominator of the stored exponents.
    """

    __slots__ = ("denominator", "order", "terms")

    def __init__(self, terms: Mapping[Fraction, Scalar], order: Fraction | int) -> None:
        self.order = Fraction(order)
        clean: dict[Fraction, Cyc] = {}
        for exponent, value in terms.items():
            exponent = Fraction(exponent)
            if exponent >= self.order:
                continue
            coefficient = Cyc.coerce(value)
            if coefficient.terms:
                clean[exponent] = coefficient
        self.terms = dict(sorted(clean.items()))
        self.denominator = reduce(lcm, (e.denominator for e in self.terms), 1)

    @classmethod
    def constant(cls, value: Scalar, order: Fraction | int) -> "PuiseuxSeries":
        """Constant series known below the given order."""
        return cls({Fraction(0): value}, order)

    @classmethod
    def from_coefficients(
        cls, coefficients: Iterable[Scalar], start: Fraction | int = 0, step: Fraction | int = 1
    ) -> "PuiseuxSeries":
        """Series with the given coefficients at start, start + step, ...; exact up to the end."""
        start, step = Fraction(start), Fraction(step)
        values = list(coefficients)
        return cls({start + k * step: v for k, v in enumerate(values)}, start + len(values) * step)

    @property
    def valuation(self) -> Fraction:
        """Exponent of the lowest nonzero stored term (the order if none)."""
        for exponent, value in self.terms.items():
            if not value.is_zero():
                return exponent
        return self.order

    def coeff_at(self, exponent: Fraction | int) -> Cyc:
        """Exact coefficient of q^exponent.

        Raises:
            ArithmeticError: If the exponent is not below the truncation order.

        """
        exponent = Fraction(exponent)
        if exponent >= self.order:
            msg = f"Exponent {exponent} beyond truncation order {self.order}"
            raise ArithmeticError(msg)
        return self.terms.get(exponent, Cyc(1))

    def truncate(self, order: Fraction | int) -> "PuiseuxSeries":
        """Forget everything at or above order."""
        order = Fraction(order)
        if order > self.order:
            msg = f"Cannot extend truncation order {self.order} to {order}"
            raise ArithmeticError(msg)
        return PuiseuxSeries(self.terms, order)

    def component_extract(self, residue: Fraction | int) -> "PuiseuxSeries":
        """Keep the terms whose exponent is congruent to residue modulo 1."""
        residue = Fraction(residue)
        return PuiseuxSeries(
            {e: v for e, v in self.terms.items() if _is_integral(e - residue)}, self.order
        )

    def q_shift(self, shift: Fraction | int) -> "PuiseuxSeries":
        """Multiply by q^shift."""
        shift = Fraction(shift)
        return PuiseuxSeries({e + shift: v for e, v in self.terms.items()}, self.order + shift)

    def substitute(self, scale: Fraction | int) -> "PuiseuxSeries":
        """Series of f(scale * tau), i.e. q -> q^scale."""
        scale = Fraction(scale)
        if scale <= 0:
            msg = f"Scale must be positive, got {scale}"
            raise ValueError(msg)
        return PuiseuxSeries({e * scale: v for e, v in self.terms.items()}, self.order * scale)

    def translate(self, shift: Fraction | int) -> "PuiseuxSeries":
        """Series of f(tau + shift): the coefficient of q^e picks up e(e * shift)."""
        shift = Fraction(shift)
        return PuiseuxSeries(
            {e: v * phase(e * shift) for e, v in self.terms.items()}, self.order
        )

    def scale(self, factor: Scalar) -> "PuiseuxSeries":
        """Multiply every coefficient by a scalar."""
        return PuiseuxSeries({e: v * factor for e, v in self.terms.items()}, self.order)

    def rational_coefficients(self) -> dict[Fraction, Fraction]:
        """Coefficients as rationals.

        Raises:
            ArithmeticError: If some coefficient is irrational.

        """
        result = {}
        for exponent, value in self.terms.items():
            rational = value.to_rational()
            if rational is None:
                msg = f"Coefficient of q^{exponent} is not rational: {value!r}"
                raise ArithmeticError(msg)
            if rational:
                result[exponent] = rational
        return result

    def integer_coefficients(self, *, nonnegative: bool = False) -> dict[Fraction, int]:
        """Coefficients as integers, optionally requiring nonnegativity.

        Raises:
            ArithmeticError: If a coefficient is not an integer (or negative when required).

        """
        result = {}
        for exponent, value in self.rational_coefficients().items():
            if value.denominator != 1:
                msg = f"Coefficient of q^{exponent} is not an integer: {value}"
                raise ArithmeticError(msg)
            if nonnegative and value < 0:
                msg = f"Coefficient of q^{exponent} is negative: {value}"
                raise ArithmeticError(msg)
            result[exponent] = int(value)
        return result

    def is_zero(self) -> bool:
        """All known coefficients vanish."""
        return all(v.is_zero() for v in self.terms.values())

    def equals(self, other: "PuiseuxSeries") -> bool:
        """Termwise equality below the smaller truncation order."""
        order = min(self.order, other.order)
        return (self.truncate(order) - other.truncate(order)).is_zero()

    def __add__(self, other: "PuiseuxSeries | Scalar") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.order)
        order = min(self.order, other.order)
        acc: dict[Fraction, Cyc] = {}
        for series in (self, other):
            for e, v in series.terms.items():
                if e < order:
                    acc[e] = acc[e] + v if e in acc else v
        return PuiseuxSeries(acc, order)

    __radd__ = __add__

    def __neg__(self) -> "PuiseuxSeries":
        return self.scale(-1)

    def __sub__(self, other: "PuiseuxSeries | Scalar") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            other = PuiseuxSeries.constant(other, self.order)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "PuiseuxSeries":
        return (-self) + other

    def __mul__(self, other: "PuiseuxSeries | Scalar") -> "PuiseuxSeries":
        if not isinstance(other, PuiseuxSeries):
            return self.scale(other)
        order = min(self.order + other.valuation, other.order + self.valuation)
        acc: dict[Fraction, list[Cyc]] = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = e1 + e2
                if e < order:
                    acc.setdefault(e, []).append(v1 * v2)
        return PuiseuxSeries({e: Cyc.sum(parts) for e, parts in acc.items()}, order)

    __rmul__ = __mul__

    def inverse(self) -> "PuiseuxSeries":
        """Multiplicative inverse.

        Raises:
            ArithmeticError: If no nonzero lowest term is known.

        """
        v = self.valuation
        if v >= self.order:
            msg = "Division by a series with zero lowest term"
            raise ArithmeticError(msg)
        step = Fraction(1, self.denominator)
        count = ceil((self.order - v) / step)
        a = [self.terms.get(v + k * step, Cyc(1)) for k in range(count)]
        lead = a[0].inverse()
        nonzero = [k for k in range(1, count) if a[k].terms]
        w = [lead]
        for k in range(1, count):
            w.append(-lead * Cyc.sum(a[i] * w[k - i] for i in nonzero if i <= k))
        return PuiseuxSeries({-v + k * step: w[k] for k in range(count)}, self.order - 2 * v)

    def __truediv__(self, other: "PuiseuxSeries | Scalar") -> "PuiseuxSeries":
        if isinstance(other, PuiseuxSeries):
            return self * other.inverse()
        return self.scale(Cyc.coerce(other).inverse())

    def __pow__(self, exponent: int) -> "PuiseuxSeries":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = PuiseuxSeries.constant(1, self.order - self.valuation)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __repr__(self) -> str:
        body = " + ".join(f"({v!r})q^{e}" for e, v in self.terms.items())
        return f"PuiseuxSeries({body or '0'}, order={self.order})"

    def to_json(self) -> list[list[object]]:
        """Serialize as [exponent_num, exponent_den, coefficient] triples."""
        return [
            [e.numerator, e.denominator, v.to_json()]
            for e, v in self.terms.items()
            if not v.is_zero()
        ]


def series_arith(
    a: PuiseuxSeries, b: PuiseuxSeries | int, op: SeriesOp | str
) -> PuiseuxSeries:
    """Apply a binary operation; for POW the right operand is an integer exponent."""
    op = SeriesOp(op)
    if op is SeriesOp.POW:
        if not isinstance(b, int):
            msg = "Power operand must be an integer"
            raise ValueError(msg)
        return a**b
    if not isinstance(b, PuiseuxSeries):
        msg = f"Operation {op.value} needs a series operand"
        raise ValueError(msg)
    if op is SeriesOp.ADD:
        return a + b
    if op is SeriesOp.MUL:
        return a * b
    return a / b


@lru_cache(maxsize=None)
def euler_power(exponent: int, count: int) -> tuple[int, ...]:
    """First count coefficients of prod_{m >= 1} (1 - x^m)^exponent.

    Uses n*c_n = -exponent * sum_k sigma(k) c_{n-k}, from the logarithmic derivative.
    """
    c = [1]
    for n in range(1, count):
        total = sum(int(sympy.divisor_sigma(k)) * c[n - k] for k in range(1, n + 1))
        value = -exponent * total
        if value % n:  # pragma: no cover - coefficients are integers
            msg = f"Non-integral Euler product coefficient at {n}"
            raise ArithmeticError(msg)
        c.append(value // n)
    return tuple(c)


def _product_series(scale: Fraction, exponent: int, relative_order: Fraction) -> PuiseuxSeries:
    """prod (1 - q^{scale*m})^exponent known below relative_order."""
    count = max(0, ceil(relative_order / scale))
    coefficients = euler_power(exponent, count)
    return PuiseuxSeries(
        {k * scale: c for k, c in enumerate(coefficients) if c}, relative_order
    )


def eta_expand(scale: Fraction | int, truncation: Fraction | int) -> PuiseuxSeries:
    """Expansion of eta(scale * tau) below the given order, via Euler's pentagonal theorem."""
    scale, truncation = Fraction(scale), Fraction(truncation)
    if scale <= 0:
        msg = f"Scale must be positive, got {scale}"
        raise ValueError(msg)
    terms: dict[Fraction, int] = {}
    # eta(tau) = sum_n (-1)^n q^{(6n+1)^2/24}
    n = 0
    while True:
        added = False
        for m in {n, -n}:
            exponent = scale * Fraction((6 * m + 1) ** 2, 24)
            if exponent < truncation:
                terms[exponent] = -1 if m % 2 else 1
                added = True
        if not added and scale * Fraction((6 * n - 1) ** 2, 24) >= truncation:
            break
        n += 1
    return PuiseuxSeries(terms, truncation)


def partition_expand(scale: Fraction | int, truncation: Fraction | int) -> PuiseuxSeries:
    """Expansion of 1/eta(scale * tau) below the given order."""
    scale, truncation = Fraction(scale), Fraction(truncation)
    lead = -scale / 24
    body = _product_series(scale, -1, truncation - lead)
    return body.q_shift(lead)


@dataclass(frozen=True)
class EtaQuotientSpec:
    """prefactor * prod eta(scale * tau)^exponent."""

    factors: tuple[tuple[Fraction, int], ...]
    prefactor: Cyc = field(default_factory=lambda: Cyc.rational(1))

    def __post_init__(self) -> None:
        for scale, exponent in self.factors:
            if scale <= 0:
                msg = f"Eta factor scale must be positive, got {scale}"
                raise ValueError(msg)
            if exponent == 0:
                msg = "Eta factor exponents must be nonzero"
                raise ValueError(msg)

    @property
    def leading_q_shift(self) -> Fraction:
        """Exponent of the leading term, sum of scale*exponent/24."""
        return sum((Fraction(s) * e / 24 for s, e in self.factors), Fraction(0))

    @property
    def weight(self) -> Fraction:
        """Modular weight, half the sum of exponents."""
        return Fraction(sum(e for _, e in self.factors), 2)

    def expand(self, truncation: Fraction | int) -> PuiseuxSeries:
        """Expansion known below the given order."""
        truncation = Fraction(truncation)
        lead = self.leading_q_shift
        relative = truncation - lead
        result = PuiseuxSeries.constant(self.prefactor, relative)
        for scale, exponent in self.factors:
            result = result * _product_series(Fraction(scale), exponent, relative)
        return result.q_shift(lead)

    def describe(self) -> str:
        """Human readable product, e.g. eta(1)^-1 eta(5)^5."""
        body = " ".join(f"eta({s}t)^{e}" for s, e in self.factors)
        return f"{self.prefactor!r} * {body}" if self.prefactor != 1 else body


def eta_quotient_from_cycle_shape(
    shape: Mapping[int, int], truncation: Fraction | int | None = None
) -> EtaQuotientSpec:
    """Eta product prod eta(k tau)^{b_k} of a cycle shape.

    The truncation argument is accepted for symmetry with the expansion helpers;
    call ``expand`` on the result to obtain the series.
    """
    del truncation
    factors = tuple((Fraction(k), b) for k, b in sorted(shape.items()) if b)
    if not factors:
        msg = "Cycle shape must be nonempty"
        raise ValueError(msg)
    return EtaQuotientSpec(factors)


def eisenstein(weight: int, truncation: int) -> PuiseuxSeries:
    """Normalised Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.

    Args:
        weight: Even weight, 2 <= weight <= 14.
        truncation: Integer truncation order.

    """
    if weight % 2 or not 2 <= weight <= 14:
        msg = f"Unsupported Eisenstein weight: {weight}"
        raise ValueError(msg)
    bernoulli = sympy.bernoulli(weight)
    bernoulli_value = Fraction(int(sympy.numer(bernoulli)), int(sympy.denom(bernoulli)))
    factor = Fraction(-2 * weight) / bernoulli_value
    coefficients = [Fraction(1)] + [
        factor * int(sympy.divisor_sigma(n, weight - 1)) for n in range(1, truncation)
    ]
    return PuiseuxSeries.from_coefficients(coefficients)


def delta(truncation: Fraction | int) -> PuiseuxSeries:
    """The discriminant q * prod (1 - q^m)^24."""
    return eta_quotient_from_cycle_shape({1: 24}).expand(truncation)
