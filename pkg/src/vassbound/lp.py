"""Exact rational linear programming.

Primal simplex over fractions.Fraction with Bland's anti-cycling rule, so
every run terminates and every reported point, value and verdict is exact.
Feasibility is decided by a phase-one program with artificial variables;
unboundedness by an entering column with no blocking row.

All variables are free: sign conditions must be stated as constraints.  The
solver internally splits every variable into a nonnegative pair, normalizes
all constraints to <=-form, and adds one slack per row, which keeps the
standard-form bookkeeping uniform.

Also hosts cone membership (is a target vector a nonnegative combination of
generators?) as an LP feasibility query with an exactly verified witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction
RatVector = tuple[Fraction, ...]

MAXIMIZE = "max"
MINIMIZE = "min"

LEQ = "<="
EQ = "="
GEQ = ">="

OPTIMAL = "optimal"
FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def rat_vector(xs: Iterable) -> RatVector:
    return tuple(rat(x) for x in xs)


def dot(a: Sequence, b: Sequence) -> Fraction:
    assert len(a) == len(b)
    return sum((rat(x) * rat(y) for x, y in zip(a, b)), Fraction(0))


@dataclass(frozen=True)
class Constraint:
    coeffs: RatVector
    relation: str
    rhs: Fraction

    def holds_at(self, point: Sequence[Fraction]) -> bool:
        lhs = dot(self.coeffs, point)
        if self.relation == LEQ:
            return lhs <= self.rhs
        if self.relation == GEQ:
            return lhs >= self.rhs
        return lhs == self.rhs


def constraint(coeffs: Iterable, relation: str, rhs) -> Constraint:
    if relation not in (LEQ, EQ, GEQ):
        raise ValueError(f"unknown relation {relation!r}")
    return Constraint(rat_vector(coeffs), relation, rat(rhs))


@dataclass(frozen=True)
class LinearProgram:
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    objective: Optional[tuple[str, RatVector]] = None  # None means feasibility only

    def __post_init__(self) -> None:
        n = len(self.variables)
        for c in self.constraints:
            if len(c.coeffs) != n:
                raise ValueError(f"constraint arity {len(c.coeffs)} != {n} variables")
        if self.objective is not None:
            sense, coeffs = self.objective
            if sense not in (MAXIMIZE, MINIMIZE):
                raise ValueError(f"unknown objective sense {sense!r}")
            if len(coeffs) != n:
                raise ValueError("objective arity does not match variable count")


def feasibility(variables: Sequence[str], constraints: Iterable[Constraint]) -> LinearProgram:
    return LinearProgram(tuple(variables), tuple(constraints), None)


def program(
    sense: str,
    objective: Iterable,
    variables: Sequence[str],
    constraints: Iterable[Constraint],
) -> LinearProgram:
    return LinearProgram(tuple(variables), tuple(constraints), (sense, rat_vector(objective)))


@dataclass(frozen=True)
class LpOutcome:
    status: str
    value: Optional[Fraction] = None
    point: Optional[RatVector] = None

    @property
    def is_feasible(self) -> bool:
        return self.status in (OPTIMAL, FEASIBLE)


def check_point(lp: LinearProgram, point: Sequence[Fraction]) -> bool:
    """Exact satisfaction check of every constraint."""
    return all(c.holds_at(point) for c in lp.constraints)


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    pivot = tableau[row][col]
    tableau[row] = [x / pivot for x in tableau[row]]
    prow = tableau[row]
    for i, r in enumerate(tableau):
        if i == row:
            continue
        factor = r[col]
        if factor:
            tableau[i] = [x - factor * p for x, p in zip(r, prow)]
    basis[row] = col


def _simplex_min(
    tableau: list[list[Fraction]], basis: list[int], costs: list[Fraction], ncols: int
) -> str:
    """Minimize costs over the system in `tableau` (rows are equalities with a
    feasible basis).  Bland's rule: enter the lowest-index column with a
    negative reduced cost, leave by minimum ratio with lowest basic index on
    ties.  Returns "optimal" or "unbounded"."""
    zero = Fraction(0)
    while True:
        reduced = list(costs)
        for i, b in enumerate(basis):
            cb = costs[b]
            if cb:
                row = tableau[i]
                for j in range(ncols):
                    if row[j]:
                        reduced[j] -= cb * row[j]
        enter = -1
        for j in range(ncols):
            if reduced[j] < zero:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best: Optional[Fraction] = None
        for i, row in enumerate(tableau):
            a = row[enter]
            if a > zero:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(tableau, basis, leave, enter)


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve an exact LP.  Outcomes are values, never exceptions: Optimal
    carries a vertex point and the exact objective value, Feasible a point,
    and Infeasible/Unbounded are exact verdicts.

    Normalization: variables are free unless some constraint row is a pure
    sign condition (a*x_i >= 0 with a > 0, or the negated form), in which case
    the row is absorbed into a single nonnegative column; remaining free
    variables are split into nonnegative pairs.  Inequalities get slacks,
    equalities keep a single row and enter phase one through an artificial."""
    nvars = len(lp.variables)
    zero = Fraction(0)
    one = Fraction(1)

    nonneg = [False] * nvars
    sign_rows: set[int] = set()
    for idx, c in enumerate(lp.constraints):
        nz = [(i, a) for i, a in enumerate(c.coeffs) if a != 0]
        if len(nz) == 1 and c.rhs == 0 and c.relation in (LEQ, GEQ):
            i, a = nz[0]
            if (c.relation == GEQ and a > 0) or (c.relation == LEQ and a < 0):
                nonneg[i] = True
                sign_rows.add(idx)

    col_of: list[tuple[int, Optional[int]]] = []
    cols = 0
    for i in range(nvars):
        if nonneg[i]:
            col_of.append((cols, None))
            cols += 1
        else:
            col_of.append((cols, cols + 1))
            cols += 2

    def emit(coeffs: Sequence[Fraction], negate: bool) -> list[Fraction]:
        row = [zero] * cols
        for i, a in enumerate(coeffs):
            if a == 0:
                continue
            if negate:
                a = -a
            p, q = col_of[i]
            row[p] = a
            if q is not None:
                row[q] = -a
        return row

    rows: list[tuple[list[Fraction], Fraction, bool]] = []  # (coeffs, rhs, has_slack)
    for idx, c in enumerate(lp.constraints):
        if idx in sign_rows:
            continue
        if c.relation == LEQ:
            rows.append((emit(c.coeffs, False), c.rhs, True))
        elif c.relation == GEQ:
            rows.append((emit(c.coeffs, True), -c.rhs, True))
        else:
            rows.append((emit(c.coeffs, False), c.rhs, False))

    m = len(rows)
    nslack = sum(1 for _, _, s in rows if s)
    structural = cols + nslack

    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    art_rows: list[int] = []
    slack_idx = 0
    for i, (coeffs, rhs, has_slack) in enumerate(rows):
        row = list(coeffs) + [zero] * nslack + [rhs]
        slack_col = -1
        if has_slack:
            slack_col = cols + slack_idx
            row[slack_col] = one
            slack_idx += 1
        if rhs < zero:
            row = [-x for x in row]
        tableau.append(row)
        if slack_col >= 0 and row[slack_col] == one:
            basis.append(slack_col)
        else:
            basis.append(structural + len(art_rows))  # artificial, installed below
            art_rows.append(i)

    artificial_cols = list(range(structural, structural + len(art_rows)))
    if artificial_cols:
        art_of_row = {r: structural + k for k, r in enumerate(art_rows)}
        for i, row in enumerate(tableau):
            ext = [zero] * len(artificial_cols)
            if i in art_of_row:
                ext[art_of_row[i] - structural] = one
            tableau[i] = row[:-1] + ext + [row[-1]]

        costs1 = [zero] * (structural + len(artificial_cols))
        for c in artificial_cols:
            costs1[c] = one
        status = _simplex_min(tableau, basis, costs1, structural + len(artificial_cols))
        assert status == OPTIMAL, "phase-one objective is bounded below by zero"
        artset = set(artificial_cols)
        value1 = sum(
            (tableau[i][-1] for i in range(len(tableau)) if basis[i] in artset), zero
        )
        if value1 != zero:
            return LpOutcome(INFEASIBLE)
        # Drive leftover zero-valued artificials out of the basis.
        drop_rows = []
        for i in range(len(tableau)):
            if basis[i] in artset:
                pivot_col = -1
                for j in range(structural):
                    if tableau[i][j] != zero:
                        pivot_col = j
                        break
                if pivot_col >= 0:
                    _pivot(tableau, basis, i, pivot_col)
                else:
                    drop_rows.append(i)  # redundant row
        if drop_rows:
            dropset = set(drop_rows)
            tableau = [r for i, r in enumerate(tableau) if i not in dropset]
            basis = [b for i, b in enumerate(basis) if i not in dropset]
        tableau = [row[:structural] + [row[-1]] for row in tableau]

    def extract_point() -> RatVector:
        values = [zero] * structural
        for i, b in enumerate(basis):
            values[b] = tableau[i][-1]
        out = []
        for p, q in col_of:
            out.append(values[p] - (values[q] if q is not None else zero))
        return tuple(out)

    if lp.objective is None:
        point = extract_point()
        assert check_point(lp, point), "feasible point must satisfy every constraint"
        return LpOutcome(FEASIBLE, None, point)

    sense, obj = lp.objective
    costs2 = [zero] * structural
    for i, c in enumerate(obj):
        if sense == MAXIMIZE:
            c = -c
        p, q = col_of[i]
        costs2[p] = c
        if q is not None:
            costs2[q] = -c
    status = _simplex_min(tableau, basis, costs2, structural)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED)
    point = extract_point()
    return _finish(lp, point)


def _finish(lp: LinearProgram, point: RatVector) -> LpOutcome:
    assert check_point(lp, point), "solver point must satisfy every constraint"
    if lp.objective is None:
        return LpOutcome(FEASIBLE, None, point)
    _, obj = lp.objective
    return LpOutcome(OPTIMAL, dot(obj, point), point)


def in_cone(
    target: Sequence[int], generators: Iterable[Sequence[int]]
) -> tuple[bool, Optional[dict[tuple[int, ...], Fraction]]]:
    """Is `target` a nonnegative rational combination of `generators`?

    Returns (True, witness) with exactly verified coefficients, or
    (False, None).  Duplicated generators collapse.
    """
    gens = sorted({tuple(g) for g in generators})
    target_t = tuple(target)
    d = len(target_t)
    for g in gens:
        if len(g) != d:
            raise ValueError("generator dimension mismatch")
    if not gens:
        return (all(x == 0 for x in target_t), {} if all(x == 0 for x in target_t) else None)

    names = tuple(f"a{i}" for i in range(len(gens)))
    cons = []
    for i in range(d):
        cons.append(constraint([g[i] for g in gens], EQ, target_t[i]))
    for j in range(len(gens)):
        row = [0] * len(gens)
        row[j] = 1
        cons.append(constraint(row, GEQ, 0))
    out = solve(feasibility(names, cons))
    if not out.is_feasible:
        return (False, None)
    assert out.point is not None
    witness = {g: c for g, c in zip(gens, out.point)}
    combo = tuple(
        sum((c * g[i] for g, c in witness.items()), Fraction(0)) for i in range(d)
    )
    assert combo == tuple(Fraction(x) for x in target_t), "cone witness must recombine exactly"
    assert all(c >= 0 for c in witness.values())
    return (True, witness)
