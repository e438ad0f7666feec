"""Exact linear feasibility over Q>=0, Z and Z>=0, with certificates."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Any

from .enums import FeasibilityStatus
from .exactmath import (
    QMatrix,
    clear_denominators,
    mat_vec,
    rref,
    smith_normal_form,
    to_fraction_matrix,
)

logger = logging.getLogger(__name__)

DEFAULT_PIVOT_BUDGET = 1_000_000


class BudgetExhaustedError(ArithmeticError):
    """Raised internally when a pivot or node budget runs out."""


@dataclass(frozen=True)
class FeasibilityResult:
    """Verdict of a feasibility question with its witness or certificate."""

    status: FeasibilityStatus
    witness: tuple[Fraction, ...] | None = None
    certificate: object = None
    detail: str = ""

    @property
    def feasible(self) -> bool:
        """Whether a witness was found."""
        return self.status.feasible


@dataclass(frozen=True)
class VariableBounds:
    """Range of one variable over {A*x = b, x >= 0}; upper None means unbounded."""

    lower: Fraction
    upper: Fraction | None

    @property
    def bounded(self) -> bool:
        """Whether the maximum is finite."""
        return self.upper is not None


@dataclass
class _PivotCounter:
    budget: int
    used: int = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.budget:
            msg = f"Pivot budget of {self.budget} exhausted"
            raise BudgetExhaustedError(msg)


def _reduce_system(
    a: Sequence[Sequence[Fraction | int]], b: Sequence[Fraction | int]
) -> tuple[QMatrix, list[Fraction], QMatrix, tuple[Fraction, ...] | None]:
    """Drop dependent rows.

    Returns:
        (rows, rhs, transform, farkas); farkas is set when the system is inconsistent.

    """
    m = len(a)
    n = len(a[0]) if m else 0
    augmented = [[*map(Fraction, row), Fraction(rhs)] for row, rhs in zip(a, b, strict=True)]
    reduced, pivots, transform = rref(augmented)
    if n in pivots:
        r = pivots.index(n)
        y = tuple(transform[r])
        # row r reads 0 = 1 after normalisation, so y*A = 0 and y*b = 1
        return [], [], [], tuple(-x for x in y)
    rank = len(pivots)
    rows = [reduced[i][:n] for i in range(rank)]
    rhs = [reduced[i][n] for i in range(rank)]
    return rows, rhs, transform[:rank], None


class _Tableau:
    """Dense simplex tableau with Bland's rule."""

    def __init__(
        self, rows: QMatrix, rhs: list[Fraction], basis: list[int], counter: _PivotCounter
    ) -> None:
        self.rows = [[*row, value] for row, value in zip(rows, rhs, strict=True)]
        self.basis = basis
        self.counter = counter
        self.objective: list[Fraction] = []

    def set_costs(self, costs: list[Fraction]) -> None:
        """Install reduced costs for the given cost vector (minimisation)."""
        objective = [*costs, Fraction(0)]
        for r, column in enumerate(self.basis):
            c = objective[column]
            if c:
                objective = [x - c * y for x, y in zip(objective, self.rows[r], strict=True)]
        self.objective = objective

    def pivot(self, r: int, c: int) -> None:
        self.counter.tick()
        row = self.rows[r]
        inv = 1 / row[c]
        row = [x * inv for x in row]
        self.rows[r] = row
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                f = other[c]
                self.rows[i] = [x - f * y for x, y in zip(other, row, strict=True)]
        if self.objective[c]:
            f = self.objective[c]
            self.objective = [x - f * y for x, y in zip(self.objective, row, strict=True)]
        self.basis[r] = c

    def optimize(self, allowed: int) -> bool:
        """Run the simplex on columns < allowed; return False when unbounded."""
        while True:
            entering = next((c for c in range(allowed) if self.objective[c] < 0), None)
            if entering is None:
                return True
            best: tuple[Fraction, int, int] | None = None
            for r, row in enumerate(self.rows):
                if row[entering] > 0:
                    key = (row[-1] / row[entering], self.basis[r], r)
                    if best is None or key[:2] < best[:2]:
                        best = key
            if best is None:
                return False
            self.pivot(best[2], entering)

    def solution(self, n: int) -> list[Fraction]:
        x = [Fraction(0)] * n
        for r, column in enumerate(self.basis):
            if column < n:
                x[column] = self.rows[r][-1]
        return x


def _phase_one(
    rows: QMatrix, rhs: list[Fraction], counter: _PivotCounter
) -> tuple[_Tableau, list[Fraction] | None]:
    """Phase one; returns the tableau and the dual vector u when infeasible."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    signs = [Fraction(-1) if value < 0 else Fraction(1) for value in rhs]
    flipped = [[s * x for x in row] + [Fraction(int(i == j)) for j in range(m)]
               for i, (s, row) in enumerate(zip(signs, rows, strict=True))]
    tableau = _Tableau(flipped, [s * v for s, v in zip(signs, rhs, strict=True)],
                       list(range(n, n + m)), counter)
    tableau.set_costs([Fraction(0)] * n + [Fraction(1)] * m)
    tableau.optimize(n + m)
    if -tableau.objective[-1] == 0:
        return tableau, None
    # reduced cost of artificial i is 1 - u_i
    u = [1 - tableau.objective[n + i] for i in range(m)]
    return tableau, [s * ui for s, ui in zip(signs, u, strict=True)]


def check_farkas(
    a: Sequence[Sequence[Fraction | int]], b: Sequence[Fraction | int], y: Sequence[Fraction]
) -> bool:
    """Whether y*A >= 0 and y*b < 0, which rules out A*x = b with x >= 0."""
    if len(y) != len(a):
        return False
    n = len(a[0]) if a else 0
    products = [sum((y[i] * a[i][j] for i in range(len(a))), Fraction(0)) for j in range(n)]
    return all(p >= 0 for p in products) and sum(
        (yi * bi for yi, bi in zip(y, b, strict=True)), Fraction(0)
    ) < 0


def lp_feasible_nonneg(
    a: Sequence[Sequence[Fraction | int]],
    b: Sequence[Fraction | int],
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> FeasibilityResult:
    """Decide whether {x : A*x = b, x >= 0} is nonempty.

    Args:
        a: Constraint matrix.
        b: Right hand side.
        pivot_budget: Maximum number of simplex pivots.

    Returns:
        FEASIBLE_RATIONAL with a witness, INFEASIBLE_RATIONAL with a Farkas vector y
        (y*A >= 0 and y*b < 0), or INCONCLUSIVE when the budget runs out.

    """
    if len(a) != len(b):
        msg = f"Dimension mismatch: {len(a)} rows but {len(b)} right hand side entries"
        raise ValueError(msg)
    n = len(a[0]) if a else 0
    if not a:
        return FeasibilityResult(FeasibilityStatus.FEASIBLE_RATIONAL, tuple([Fraction(0)] * n))
    rows, rhs, transform, farkas = _reduce_system(a, b)
    if farkas is not None:
        return FeasibilityResult(FeasibilityStatus.INFEASIBLE_RATIONAL, certificate=farkas,
                                 detail="inconsistent equations")
    if not rows:
        return FeasibilityResult(FeasibilityStatus.FEASIBLE_RATIONAL, tuple([Fraction(0)] * n))
    counter = _PivotCounter(pivot_budget)
    try:
        tableau, dual = _phase_one(rows, rhs, counter)
    except BudgetExhaustedError as exc:
        return FeasibilityResult(FeasibilityStatus.INCONCLUSIVE, detail=str(exc))
    logger.debug("phase one finished after %d pivots", counter.used)
    if dual is None:
        witness = tuple(tableau.solution(n))
        return FeasibilityResult(FeasibilityStatus.FEASIBLE_RATIONAL, witness)
    # y = -u in the reduced system, pulled back through the row transform
    y = tuple(
        -sum((dual[r] * transform[r][i] for r in range(len(dual))), Fraction(0))
        for i in range(len(a))
    )
    if not check_farkas(a, b, y):  # pragma: no cover - guarded by LP duality
        msg = "Farkas certificate failed verification"
        raise ArithmeticError(msg)
    return FeasibilityResult(FeasibilityStatus.INFEASIBLE_RATIONAL, certificate=y)


def _feasible_tableau(
    a: Sequence[Sequence[Fraction | int]], b: Sequence[Fraction | int], counter: _PivotCounter
) -> tuple[_Tableau, int]:
    rows, rhs, _, farkas = _reduce_system(a, b)
    n = len(a[0]) if a else 0
    if farkas is not None:
        msg = "Polytope is empty"
        raise ValueError(msg)
    if not rows:
        empty = _Tableau([], [], [], counter)
        empty.objective = [Fraction(0)] * (n + 1)
        return empty, n
    tableau, dual = _phase_one(rows, rhs, counter)
    if dual is not None:
        msg = "Polytope is empty"
        raise ValueError(msg)
    # drive zero-level artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(tableau.rows):
        if tableau.basis[r] >= n:
            column = next((c for c in range(n) if tableau.rows[r][c]), None)
            if column is None:
                del tableau.rows[r]
                del tableau.basis[r]
                continue
            tableau.pivot(r, column)
        r += 1
    tableau.rows = [[*row[:n], row[-1]] for row in tableau.rows]
    return tableau, n


def var_bounds(
    a: Sequence[Sequence[Fraction | int]],
    b: Sequence[Fraction | int],
    index: int,
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> VariableBounds:
    """Exact minimum and maximum of x[index] over {A*x = b, x >= 0}.

    Raises:
        ValueError: If the polytope is empty.

    """
    counter = _PivotCounter(pivot_budget)
    values = []
    for sign in (1, -1):
        tableau, n = _feasible_tableau(a, b, counter)
        if not 0 <= index < n:
            msg = f"Variable index {index} out of range for {n} variables"
            raise ValueError(msg)
        costs = [Fraction(0)] * n
        costs[index] = Fraction(sign)
        tableau.set_costs(costs)
        if not tableau.optimize(n):
            values.append(None)
        else:
            values.append(tableau.solution(n)[index])
    lower = values[0]
    if lower is None:  # pragma: no cover - x >= 0 bounds the minimum
        lower = Fraction(0)
    return VariableBounds(lower, values[1])


def _scaled_rows(
    a: Sequence[Sequence[Fraction | int]], b: Sequence[Fraction | int]
) -> tuple[list[list[int]], list[int]]:
    scaled_a: list[list[int]] = []
    scaled_b: list[int] = []
    for row, rhs in zip(a, b, strict=True):
        factor = clear_denominators([*row, rhs])
        scaled_a.append([int(Fraction(x) * factor) for x in row])
        scaled_b.append(int(Fraction(rhs) * factor))
    return scaled_a, scaled_b


def integer_solvable(
    a: Sequence[Sequence[Fraction | int]], b: Sequence[Fraction | int]
) -> FeasibilityResult:
    """Decide A*x = b over the integers via the Smith normal form.

    Rational rows are first scaled by the lcm of their denominators.
    """
    if len(a) != len(b):
        msg = f"Dimension mismatch: {len(a)} rows but {len(b)} right hand side entries"
        raise ValueError(msg)
    n = len(a[0]) if a else 0
    scaled_a, scaled_b = _scaled_rows(a, b)
    if not scaled_a:
        return FeasibilityResult(FeasibilityStatus.FEASIBLE_INTEGER, tuple([Fraction(0)] * n))
    u, d, v = smith_normal_form(scaled_a)
    c = [sum(x * y for x, y in zip(row, scaled_b, strict=True)) for row in u]
    y = [0] * n
    for i, value in enumerate(c):
        divisor = d[i][i] if i < n else 0
        if divisor == 0:
            if value:
                return FeasibilityResult(
                    FeasibilityStatus.INFEASIBLE_INTEGER,
                    certificate={"row": i, "divisor": 0, "value": value, "multiplier": u[i]},
                    detail="inconsistent over the rationals",
                )
            continue
        if value % divisor:
            return FeasibilityResult(
                FeasibilityStatus.INFEASIBLE_INTEGER,
                certificate={"row": i, "divisor": divisor, "value": value, "multiplier": u[i]},
                detail=f"{divisor} does not divide {value}",
            )
        y[i] = value // divisor
    x = tuple(Fraction(sum(v[j][k] * y[k] for k in range(n))) for j in range(n))
    return FeasibilityResult(FeasibilityStatus.FEASIBLE_INTEGER, x)


def check_divisibility(
    a: Sequence[Sequence[Fraction | int]],
    b: Sequence[Fraction | int],
    certificate: dict[str, object],
) -> bool:
    """Re-check an obstruction from :func:`integer_solvable`.

    The integer combination u of the scaled rows has every coefficient divisible
    by the divisor while u*b is not (divisor 0: coefficients vanish, u*b does not).
    """
    scaled_a, scaled_b = _scaled_rows(a, b)
    u = certificate["multiplier"]
    divisor = certificate["divisor"]
    if not isinstance(u, list | tuple) or not isinstance(divisor, int) or len(u) != len(scaled_a):
        return False
    n = len(scaled_a[0]) if scaled_a else 0
    combined = [sum(u[i] * scaled_a[i][j] for i in range(len(u))) for j in range(n)]
    value = sum(x * y for x, y in zip(u, scaled_b, strict=True))
    if divisor == 0:
        return all(c == 0 for c in combined) and value != 0
    return all(c % divisor == 0 for c in combined) and value % divisor != 0


@dataclass
class _Search:
    """Depth-first search recording every node, so the tree can be replayed.

    Nodes are dicts with the fixed assignment and a ``kind``:

    - ``rational``: the LP is empty, with its Farkas vector
    - ``integer``: no integer solution, with its divisibility certificate
    - ``residual``: every variable is fixed and the equations fail
    - ``bounds``: variables with LP maximum below 1 are set to 0 in ``child``
    - ``branch``: one child per value of ``variable`` in ``values``
    """

    a: QMatrix
    b: list[Fraction]
    branch_budget: int
    node_budget: int
    pivot_budget: int
    nodes: int = 0
    branched: bool = False
    augmented: bool = False

    def restricted(self, fixed: dict[int, int]) -> tuple[QMatrix, list[Fraction], list[int]]:
        return restrict_system(self.a, self.b, fixed)

    def run(
        self, fixed: dict[int, int], depth: int
    ) -> tuple[tuple[Fraction, ...] | None, dict[str, Any]]:
        self.nodes += 1
        if self.nodes > self.node_budget:
            msg = f"Node budget of {self.node_budget} exhausted"
            raise BudgetExhaustedError(msg)
        n = len(self.a[0])
        node: dict[str, Any] = {"fixed": dict(sorted(fixed.items()))}
        rows, rhs, free = self.restricted(fixed)
        if not free:
            if all(v == 0 for v in rhs):
                return tuple(Fraction(fixed[j]) for j in range(n)), node
            return None, {**node, "kind": "residual"}
        lp = lp_feasible_nonneg(rows, rhs, self.pivot_budget)
        if lp.status is FeasibilityStatus.INCONCLUSIVE:
            raise BudgetExhaustedError(lp.detail)
        if not lp.feasible:
            return None, {**node, "kind": "rational", "farkas": lp.certificate}
        witness = lp.witness or ()
        if all(x.denominator == 1 for x in witness):
            full = dict(fixed)
            full.update({j: int(x) for j, x in zip(free, witness, strict=True)})
            return tuple(Fraction(full[j]) for j in range(n)), node
        integral = integer_solvable(rows, rhs)
        if not integral.feasible:
            return None, {**node, "kind": "integer", "obstruction": integral.certificate}
        bounds = {
            j: var_bounds(rows, rhs, position, self.pivot_budget)
            for position, j in enumerate(free)
        }
        zeroed = {
            j: 0 for j, bound in bounds.items() if bound.upper is not None and bound.upper < 1
        }
        # a single augmentation at the root, then at every node below a branch
        if zeroed and (self.branched or not self.augmented):
            self.augmented = True
            logger.debug("fixing %d variables with upper bound below 1", len(zeroed))
            found, child = self.run({**fixed, **zeroed}, depth)
            return found, {**node, "kind": "bounds", "zeroed": sorted(zeroed), "child": child}
        if depth >= self.branch_budget:
            msg = f"Branch depth {self.branch_budget} exhausted"
            raise BudgetExhaustedError(msg)
        ranges = [
            (floor(bound.upper) - ceil(bound.lower), j, ceil(bound.lower), floor(bound.upper))
            for j, bound in bounds.items()
            if bound.upper is not None
        ]
        if not ranges:
            msg = "No bounded variable to branch on"
            raise BudgetExhaustedError(msg)
        _, j, low, high = min(ranges)
        self.branched = True
        children = []
        for value in range(low, high + 1):
            found, child = self.run({**fixed, j: value}, depth + 1)
            if found is not None:
                return found, node
            children.append(child)
        return None, {
            **node, "kind": "branch", "variable": j, "values": [low, high], "children": children
        }


def restrict_system(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction], fixed: dict[int, int]
) -> tuple[QMatrix, list[Fraction], list[int]]:
    """The system in the free variables once the variables in fixed take their values."""
    free = [j for j in range(len(a[0])) if j not in fixed]
    rows = [[row[j] for j in free] for row in a]
    rhs = [
        value - sum((row[j] * k for j, k in fixed.items()), Fraction(0))
        for row, value in zip(a, b, strict=True)
    ]
    return rows, rhs, free


def nonneg_integer_feasible(
    a: Sequence[Sequence[Fraction | int]],
    b: Sequence[Fraction | int],
    branch_budget: int = 40,
    node_budget: int = 20_000,
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> FeasibilityResult:
    """Branch and prune over nonnegative integers.

    At the root, variables whose LP maximum is below 1 are fixed to zero once.
    The variable with the smallest finite range is then branched on; below a
    branch the zero-fixing is repeated at every node. Every node is pruned by
    the rational LP and by integer solvability.

    Args:
        a: Constraint matrix.
        b: Right hand side.
        branch_budget: Maximum branching depth.
        node_budget: Maximum number of search nodes.
        pivot_budget: Simplex pivot budget per LP.

    Returns:
        FEASIBLE_NONNEG_INTEGER with a witness, INFEASIBLE_NONNEG_INTEGER with the
        search tree as certificate, or INCONCLUSIVE.

    """
    if len(a) != len(b):
        msg = f"Dimension mismatch: {len(a)} rows but {len(b)} right hand side entries"
        raise ValueError(msg)
    rows = to_fraction_matrix(a)
    if not rows or not rows[0]:
        consistent = all(Fraction(x) == 0 for x in b)
        status = (FeasibilityStatus.FEASIBLE_NONNEG_INTEGER if consistent
                  else FeasibilityStatus.INFEASIBLE_NONNEG_INTEGER)
        n = len(rows[0]) if rows else 0
        return FeasibilityResult(status, tuple([Fraction(0)] * n) if consistent else None)
    search = _Search(rows, [Fraction(x) for x in b], branch_budget, node_budget, pivot_budget)
    try:
        found, tree = search.run({}, 0)
    except BudgetExhaustedError as exc:
        return FeasibilityResult(FeasibilityStatus.INCONCLUSIVE, detail=str(exc))
    if found is not None:
        if mat_vec(rows, found) != [Fraction(x) for x in b]:  # pragma: no cover
            msg = "Integer witness failed verification"
            raise ArithmeticError(msg)
        return FeasibilityResult(FeasibilityStatus.FEASIBLE_NONNEG_INTEGER, found)
    detail = "branching" if search.branched else "bound_augmentation"
    return FeasibilityResult(
        FeasibilityStatus.INFEASIBLE_NONNEG_INTEGER,
        certificate={"nodes": search.nodes, "tree": tree},
        detail=detail,
    )


def verify_branch_tree(
    a: Sequence[Sequence[Fraction | int]],
    b: Sequence[Fraction | int],
    tree: dict[str, Any],
    pivot_budget: int = DEFAULT_PIVOT_BUDGET,
) -> bool:
    """Replay a search tree from :func:`nonneg_integer_feasible` against A*x = b.

    Leaves must carry certificates that re-verify on their restricted systems.
    Zero-fixing must be justified by an LP maximum below 1, and a branch must
    cover every integer value its variable can take.
    """
    rows = to_fraction_matrix(a)
    rhs = [Fraction(x) for x in b]
    stack: list[tuple[dict[str, Any], dict[int, int]]] = [(tree, {})]
    while stack:
        node, fixed = stack.pop()
        if {int(k): v for k, v in node.get("fixed", {}).items()} != fixed:
            return False
        sub_a, sub_b, free = restrict_system(rows, rhs, fixed)
        if node.get("kind") in ("bounds", "branch"):
            children = _replay_children(node, fixed, sub_a, sub_b, free, pivot_budget)
            if children is None:
                return False
            stack.extend(children)
        elif not _leaf_holds(node, sub_a, sub_b, free):
            return False
    return True


def _leaf_holds(node: dict[str, Any], a: QMatrix, b: list[Fraction], free: list[int]) -> bool:
    kind = node.get("kind")
    if kind == "residual":
        return not free and any(v != 0 for v in b)
    if kind == "rational":
        return check_farkas(a, b, [Fraction(y) for y in node["farkas"]])
    if kind == "integer":
        return check_divisibility(a, b, node["obstruction"])
    return False


def _replay_children(
    node: dict[str, Any],
    fixed: dict[int, int],
    a: QMatrix,
    b: list[Fraction],
    free: list[int],
    pivot_budget: int,
) -> list[tuple[dict[str, Any], dict[int, int]]] | None:
    """Children of a bounds or branch node with their assignments, or None if unjustified."""
    if node["kind"] == "bounds":
        zeroed = node["zeroed"]
        uppers = [
            _bounds_or_none(a, b, free.index(j), pivot_budget) if j in free else None
            for j in zeroed
        ]
        if any(u is None or u.upper is None or u.upper >= 1 for u in uppers):
            return None
        return [(node["child"], {**fixed, **dict.fromkeys(zeroed, 0)})]
    j = node["variable"]
    low, high = node["values"]
    children = node["children"]
    bound = _bounds_or_none(a, b, free.index(j), pivot_budget) if j in free else None
    if (
        bound is None
        or bound.upper is None
        or low > ceil(bound.lower)
        or high < floor(bound.upper)
        or len(children) != max(0, high - low + 1)
    ):
        return None
    return [(child, {**fixed, j: low + k}) for k, child in enumerate(children)]


def _bounds_or_none(
    a: QMatrix, b: Sequence[Fraction], index: int, pivot_budget: int
) -> VariableBounds | None:
    try:
        return var_bounds(a, b, index, pivot_budget)
    except ValueError:
        return None
