"""Exact rational and cyclotomic arithmetic, integer normal forms and linear solving."""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm

import sympy

logger = logging.getLogger(__name__)

Rat = Fraction
Vector = list[Fraction]
QMatrix = list[list[Fraction]]
IntMatrix = list[list[int]]

_X = sympy.Symbol("x")


@lru_cache(maxsize=None)
def _cyclotomic_tail(m: int) -> tuple[int, tuple[tuple[int, int], ...]]:
    """Degree of the m-th cyclotomic polynomial and its nonzero lower terms."""
    coefficients = sympy.Poly(sympy.cyclotomic_poly(m, _X), _X).all_coeffs()
    degree = len(coefficients) - 1
    tail = tuple(
        (degree - position, int(value))
        for position, value in enumerate(coefficients)
        if position > 0 and value != 0
    )
    return degree, tail


class Cyc:
    """Element of the cyclotomic field of conductor M.

    Stored as a sparse map from residues r mod M to rational coefficients of
    e(r/M). The spanning set is redundant, so equality goes through the
    canonical remainder modulo the M-th cyclotomic polynomial.
    """

    __slots__ = ("_canonical", "conductor", "terms")

    def __init__(self, conductor: int, terms: Mapping[int, Fraction | int] | None = None) -> None:
        if conductor < 1:
            msg = f"Conductor must be positive, got {conductor}"
            raise ValueError(msg)
        self.conductor = conductor
        clean: dict[int, Fraction] = {}
        for residue, value in (terms or {}).items():
            key = residue % conductor
            total = clean.get(key, Fraction(0)) + value
            if total:
                clean[key] = total
            else:
                clean.pop(key, None)
        self.terms = clean
        self._canonical: dict[int, Fraction] | None = None

    @classmethod
    def rational(cls, value: Fraction | int) -> "Cyc":
        """Embed a rational number."""
        return cls(1, {0: Fraction(value)})

    @staticmethod
    def coerce(value: "Cyc | Fraction | int") -> "Cyc":
        """Return value as a Cyc."""
        if isinstance(value, Cyc):
            return value
        return Cyc.rational(value)

    @staticmethod
    def sum(values: Iterable["Cyc | Fraction | int"]) -> "Cyc":
        """Add many elements at once on their common conductor."""
        items = [Cyc.coerce(value) for value in values]
        if not items:
            return Cyc(1)
        conductor = reduce(lcm, (item.conductor for item in items), 1)
        acc: dict[int, Fraction] = {}
        for item in items:
            scale = conductor // item.conductor
            for residue, value in item.terms.items():
                key = residue * scale
                acc[key] = acc.get(key, Fraction(0)) + value
        return Cyc(conductor, acc)

    def lift(self, conductor: int) -> "Cyc":
        """Rewrite over a multiple of the current conductor."""
        if conductor % self.conductor:
            msg = f"Cannot lift conductor {self.conductor} to {conductor}"
            raise ValueError(msg)
        scale = conductor // self.conductor
        return Cyc(conductor, {r * scale: v for r, v in self.terms.items()})

    def canonical(self) -> dict[int, Fraction]:
        """Coefficients of the remainder modulo the cyclotomic polynomial."""
        if self._canonical is None:
            self._canonical = _reduce_terms(self.conductor, self.terms)
        return self._canonical

    def is_zero(self) -> bool:
        """Return True when the element is exactly zero."""
        return not self.canonical()

    def to_rational(self) -> Fraction | None:
        """Return the rational value, or None if the element is irrational."""
        canonical = self.canonical()
        if not canonical:
            return Fraction(0)
        if set(canonical) == {0}:
            return canonical[0]
        return None

    def as_monomial(self) -> tuple[Fraction, Fraction] | None:
        """Return (c, x) with self = c*e(x) when stored as a single term."""
        if len(self.terms) != 1:
            return None
        (residue, value), = self.terms.items()
        return value, Fraction(residue, self.conductor)

    def galois(self, k: int) -> "Cyc":
        """Apply the automorphism e(1/M) -> e(k/M); k must be a unit mod M."""
        if gcd(k, self.conductor) != 1:
            msg = f"{k} is not a unit modulo {self.conductor}"
            raise ValueError(msg)
        return Cyc(self.conductor, {r * k: v for r, v in self.terms.items()})

    def conjugate(self) -> "Cyc":
        """Complex conjugate."""
        return Cyc(self.conductor, {-r: v for r, v in self.terms.items()})

    def inverse(self) -> "Cyc":
        """Multiplicative inverse via the product of the other Galois conjugates."""
        if self.is_zero():
            msg = "Division by zero in cyclotomic field"
            raise ZeroDivisionError(msg)
        monomial = self.as_monomial()
        if monomial is not None:
            value, exponent = monomial
            return Cyc(exponent.denominator, {-exponent.numerator: 1 / value})
        rational = self.to_rational()
        if rational is not None:
            return Cyc.rational(1 / rational)
        others = Cyc.rational(1)
        for k in range(2, self.conductor):
            if gcd(k, self.conductor) == 1:
                others = others * self.galois(k)
        norm = (self * others).to_rational()
        if norm is None:  # pragma: no cover - the norm of a field element is rational
            msg = "Field norm is not rational"
            raise ArithmeticError(msg)
        return others * (1 / norm)

    def __add__(self, other: "Cyc | Fraction | int") -> "Cyc":
        return Cyc.sum((self, other))

    __radd__ = __add__

    def __neg__(self) -> "Cyc":
        return Cyc(self.conductor, {r: -v for r, v in self.terms.items()})

    def __sub__(self, other: "Cyc | Fraction | int") -> "Cyc":
        return Cyc.sum((self, -Cyc.coerce(other)))

    def __rsub__(self, other: "Cyc | Fraction | int") -> "Cyc":
        return Cyc.sum((other, -self))

    def __mul__(self, other: "Cyc | Fraction | int") -> "Cyc":
        if not isinstance(other, Cyc):
            factor = Fraction(other)
            return Cyc(self.conductor, {r: v * factor for r, v in self.terms.items()})
        conductor = lcm(self.conductor, other.conductor)
        left = self.lift(conductor).terms
        right = other.lift(conductor).terms
        if len(left) > len(right):
            left, right = right, left
        acc: dict[int, Fraction] = {}
        for r1, v1 in left.items():
            for r2, v2 in right.items():
                key = (r1 + r2) % conductor
                acc[key] = acc.get(key, Fraction(0)) + v1 * v2
        return Cyc(conductor, acc)

    __rmul__ = __mul__

    def __truediv__(self, other: "Cyc | Fraction | int") -> "Cyc":
        if isinstance(other, Cyc):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __rtruediv__(self, other: "Fraction | int") -> "Cyc":
        return self.inverse() * Fraction(other)

    def __pow__(self, exponent: int) -> "Cyc":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Cyc.rational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyc.rational(other)
        if not isinstance(other, Cyc):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = ", ".join(f"{r}: {v}" for r, v in sorted(self.terms.items()))
        return f"Cyc({self.conductor}, {{{body}}})"

    def to_json(self) -> dict[str, object]:
        """Serialize as a canonical cyclotomic coordinate list."""
        rational = self.to_rational()
        if rational is not None:
            return {"conductor": 1, "coefficients": [[0, str(rational)]]}
        return {
            "conductor": self.conductor,
            "coefficients": [[r, str(v)] for r, v in sorted(self.canonical().items())],
        }


def _reduce_terms(conductor: int, terms: Mapping[int, Fraction]) -> dict[int, Fraction]:
    degree, tail = _cyclotomic_tail(conductor)
    coefficients = [Fraction(0)] * conductor
    for residue, value in terms.items():
        coefficients[residue] += value
    # x^degree = -sum(c_k x^k) over the tail
    for top in range(conductor - 1, degree - 1, -1):
        value = coefficients[top]
        if not value:
            continue
        coefficients[top] = Fraction(0)
        shift = top - degree
        for power, coefficient in tail:
            coefficients[shift + power] -= value * coefficient
    return {r: v for r, v in enumerate(coefficients[:degree]) if v}


def root_of_unity(a: int, m: int) -> Cyc:
    """Return e(a/m)."""
    if m < 1:
        msg = f"Order must be positive, got {m}"
        raise ValueError(msg)
    return Cyc(m, {a: 1})


def phase(x: Fraction) -> Cyc:
    """Return e(x) for a rational x."""
    x = Fraction(x)
    return root_of_unity(x.numerator, x.denominator)


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> Cyc:
    if p == 2:
        return root_of_unity(1, 8) + root_of_unity(-1, 8)
    acc: dict[int, Fraction] = {}
    for a in range(p):
        key = a * a % p
        acc[key] = acc.get(key, Fraction(0)) + 1
    gauss = Cyc(p, acc)
    if p % 4 == 1:
        return gauss
    return gauss * root_of_unity(-1, 4)


def sqrt_rational(value: Fraction | int) -> Cyc:
    """Positive square root of a nonnegative rational inside a cyclotomic field."""
    value = Fraction(value)
    if value < 0:
        msg = f"Square root of negative rational {value}"
        raise ValueError(msg)
    if value == 0:
        return Cyc(1)
    radicand = value.numerator * value.denominator
    square, free = 1, 1
    for prime, multiplicity in sympy.factorint(radicand).items():
        square *= prime ** (multiplicity // 2)
        if multiplicity % 2:
            free *= prime
    result = Cyc.rational(Fraction(square, value.denominator))
    for prime in sympy.factorint(free):
        result = result * _sqrt_prime(prime)
    return result


# --- matrices -----------------------------------------------------------------


def to_fraction_matrix(rows: Sequence[Sequence[Fraction | int]]) -> QMatrix:
    """Copy a matrix into Fractions."""
    return [[Fraction(x) for x in row] for row in rows]


def identity_matrix(n: int) -> IntMatrix:
    """The n x n identity matrix."""
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(rows: Sequence[Sequence[object]]) -> list[list[object]]:
    """Transpose a rectangular matrix."""
    return [list(col) for col in zip(*rows, strict=True)] if rows else []


def mat_mul(
    a: Sequence[Sequence[Fraction | int]], b: Sequence[Sequence[Fraction | int]]
) -> QMatrix:
    """Product of two rational matrices."""
    columns = list(zip(*b, strict=True)) if b else []
    return [[sum((Fraction(x) * y for x, y in zip(row, col, strict=True)), Fraction(0))
             for col in columns] for row in a]


def mat_vec(a: Sequence[Sequence[Fraction | int]], v: Sequence[Fraction | int]) -> Vector:
    """Matrix times column vector."""
    return [sum((Fraction(x) * y for x, y in zip(row, v, strict=True)), Fraction(0)) for row in a]


def cyc_mat_mul(a: Sequence[Sequence[Cyc]], b: Sequence[Sequence[Cyc]]) -> list[list[Cyc]]:
    """Product of two cyclotomic matrices."""
    columns = list(zip(*b, strict=True)) if b else []
    return [[Cyc.sum(x * y for x, y in zip(row, col, strict=True)) for col in columns] for row in a]


def cyc_mat_equal(a: Sequence[Sequence[Cyc]], b: Sequence[Sequence[Cyc]]) -> bool:
    """Exact entrywise equality."""
    if len(a) != len(b):
        return False
    return all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb, strict=True))
        for ra, rb in zip(a, b, strict=True)
    )


def determinant(a: Sequence[Sequence[Fraction | int]]) -> Fraction:
    """Exact determinant."""
    if not a:
        return Fraction(1)
    value = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction)
                           else x for x in row] for row in a]).det(method="bareiss")
    return Fraction(int(sympy.numer(value)), int(sympy.denom(value)))


def rref(a: Sequence[Sequence[Fraction | int]]) -> tuple[QMatrix, list[int], QMatrix]:
    """Reduced row echelon form R, pivot columns, and the transform T with T*A = R."""
    rows = to_fraction_matrix(a)
    m = len(rows)
    n = len(rows[0]) if m else 0
    transform = to_fraction_matrix(identity_matrix(m))
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, m) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        transform[r], transform[pivot] = transform[pivot], transform[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        transform[r] = [x * inv for x in transform[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r], strict=True)]
                transform[i] = [x - f * y for x, y in zip(transform[i], transform[r], strict=True)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots, transform


def rational_rank(a: Sequence[Sequence[Fraction | int]]) -> int:
    """Rank over the rationals."""
    return len(rref(a)[1]) if a else 0


def inverse(a: Sequence[Sequence[Fraction | int]]) -> QMatrix:
    """Inverse of a square rational matrix."""
    n = len(a)
    augmented = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    reduced, pivots, _ = rref(augmented)
    if pivots[:n] != list(range(n)):
        msg = "Matrix is singular"
        raise ValueError(msg)
    return [row[n:] for row in reduced]


@dataclass(frozen=True)
class AffineSolutionSpace:
    """Solution set {particular + span(kernel_basis)} of A*x = b."""

    particular: tuple[Fraction, ...] | None
    kernel_basis: tuple[tuple[Fraction, ...], ...]

    @property
    def consistent(self) -> bool:
        """Whether the system has any solution."""
        return self.particular is not None


def solve_linear(
    a: Sequence[Sequence[Fraction | int]], b: Sequence[Fraction | int]
) -> AffineSolutionSpace:
    """Solve A*x = b exactly.

    Args:
        a: Coefficient matrix.
        b: Right hand side, one entry per row of a.

    Returns:
        The affine solution space (particular is None when inconsistent).

    """
    if len(a) != len(b):
        msg = f"Dimension mismatch: {len(a)} rows but {len(b)} right hand side entries"
        raise ValueError(msg)
    n = len(a[0]) if a else 0
    augmented = [[*row, rhs] for row, rhs in zip(a, b, strict=True)]
    reduced, pivots, _ = rref(augmented) if augmented else ([], [], [])
    if n in pivots:
        return AffineSolutionSpace(None, ())
    particular = [Fraction(0)] * n
    for row_index, column in enumerate(pivots):
        particular[column] = reduced[row_index][n]
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for f in free:
        vector = [Fraction(0)] * n
        vector[f] = Fraction(1)
        for row_index, column in enumerate(pivots):
            vector[column] = -reduced[row_index][f]
        kernel.append(tuple(vector))
    return AffineSolutionSpace(tuple(particular), tuple(kernel))


# --- integer normal forms -----------------------------------------------------


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form U*A*V = D with unimodular U, V and d1 | d2 | ...

    Args:
        a: Integer matrix (m x n).

    Returns:
        Tuple (U, D, V).

    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [[int(x) for x in row] for row in a]
    u = identity_matrix(m)
    v = identity_matrix(n)

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, k: int) -> None:
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src], strict=True)]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src], strict=True)]

    def add_col(src: int, dst: int, k: int) -> None:
        for row in d:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            candidates = [
                (abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]
            ]
            if not candidates:
                return u, d, v
            _, pi, pj = min(candidates)
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = d[t][t]
            clean = True
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    clean = clean and not d[i][t]
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    clean = clean and not d[t][j]
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p), None
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


def smith_diagonal(a: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (including trailing zeros up to min(m, n))."""
    _, d, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Row-style Hermite normal form: a basis of the integer row span."""
    a = [[int(x) for x in row] for row in rows if any(row)]
    if not a:
        return []
    n = len(a[0])
    r = 0
    for c in range(n):
        while True:
            nonzero = [i for i in range(r, len(a)) if a[i][c]]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(a[i][c]))
            a[r], a[best] = a[best], a[r]
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r], strict=True)]
            if all(not a[i][c] for i in range(r + 1, len(a))):
                break
        if r < len(a) and a[r][c]:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r], strict=True)]
            r += 1
            if r == len(a):
                break
    return a[:r]


def integer_kernel(a: Sequence[Sequence[int]], columns: int | None = None) -> IntMatrix:
    """Saturated integer basis (as rows) of {x in Z^n : A*x = 0}."""
    n = len(a[0]) if a else (columns or 0)
    if not a:
        return identity_matrix(n)
    _, d, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(len(d), n)) if d[i][i])
    return [[v[row][j] for row in range(n)] for j in range(rank, n)]


def clear_denominators(values: Iterable[Fraction | int]) -> int:
    """Least common multiple of the denominators."""
    return reduce(lcm, (Fraction(x).denominator for x in values), 1)
