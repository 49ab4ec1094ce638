"""Hyperplane classification of short-cycle effect sets.

A covering normal is a nonzero n with v . n <= 0 for every short-cycle effect
v.  Strongly connected instances fall in exactly one of four classes:

  A  no covering normal exists
  B  covering normals exist, but each has a negative component
  C  some strictly positive covering normal exists
  D  some nonnegative covering normal exists, but no strictly positive one

A and B force non-termination.  Class C admits a *good normal*: a strictly
positive covering normal whose hyperplane touches the effect cone exactly on
its reversible part, i.e. v . n = 0 iff -v lies back in the cone of effects.
Checking that biconditional over the finite effect set suffices; it then
extends to the whole cone.

All decisions run through exact LP probes.  The nonzero-normal and good-normal
programs are homogeneous (any solution scales), so each probe pins a
normalization: a unit component for existence probes, sum-one for the
epsilon-maximizing programs.  Without the sum-one row the good-normal program
of the construction would be unbounded whenever a good normal exists at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import lp
from .increments import Effect, IncSet


class NotCategoryC(RuntimeError):
    """Raised when a good normal is requested for an instance outside class C."""


@dataclass(frozen=True)
class GoodNormal:
    """Strictly positive covering normal with its neutral effects.

    neutral == {v in Inc : v . normal == 0} == {v in Inc : -v in cone(Inc)}.
    """

    normal: lp.RatVector
    neutral: frozenset[Effect]


@dataclass(frozen=True)
class Category:
    tag: str  # "A" | "B" | "C" | "D"
    normal: Optional[lp.RatVector] = None  # covering normal evidence (B, D)
    good: Optional[GoodNormal] = None  # class C evidence

    def evidence_normal(self) -> Optional[lp.RatVector]:
        if self.good is not None:
            return self.good.normal
        return self.normal


def _cover_rows(effects, nvars: int, d: int):
    rows = []
    for v in effects:
        row = [Fraction(0)] * nvars
        for i, x in enumerate(v):
            row[i] = Fraction(x)
        rows.append(lp.constraint(row, lp.LEQ, 0))
    return rows


def has_normal(inc: IncSet) -> bool:
    """Does any nonzero covering normal exist?  Decided by 2d probes, one per
    pinned component sign; any nonzero normal rescales into one of them.  An
    empty effect set is covered vacuously."""
    effects = inc.sorted_effects()
    d = inc.dimension
    if not effects:
        return True
    names = [f"n{i}" for i in range(d)]
    for i in range(d):
        for sign in (1, -1):
            pin_row = [Fraction(0)] * d
            pin_row[i] = Fraction(1)
            cons = _cover_rows(effects, d, d)
            cons.append(lp.constraint(pin_row, lp.EQ, sign))
            if lp.solve(lp.feasibility(names, cons)).is_feasible:
                return True
    return False


def find_normal(inc: IncSet) -> Optional[lp.RatVector]:
    """A covering normal if one exists (same probes as has_normal)."""
    effects = inc.sorted_effects()
    d = inc.dimension
    names = [f"n{i}" for i in range(d)]
    if not effects:
        return (Fraction(1),) + (Fraction(0),) * (d - 1)
    for i in range(d):
        for sign in (1, -1):
            pin_row = [Fraction(0)] * d
            pin_row[i] = Fraction(1)
            cons = _cover_rows(effects, d, d)
            cons.append(lp.constraint(pin_row, lp.EQ, sign))
            out = lp.solve(lp.feasibility(names, cons))
            if out.is_feasible:
                return out.point
    return None


def find_nonnegative_normal(inc: IncSet) -> Optional[lp.RatVector]:
    """A covering normal n >= 0, n != 0, if one exists; d probes pinning one
    component to 1."""
    effects = inc.sorted_effects()
    d = inc.dimension
    names = [f"n{i}" for i in range(d)]
    for i in range(d):
        cons = _cover_rows(effects, d, d)
        for j in range(d):
            row = [Fraction(0)] * d
            row[j] = Fraction(1)
            cons.append(lp.constraint(row, lp.GEQ, 0))
        pin_row = [Fraction(0)] * d
        pin_row[i] = Fraction(1)
        cons.append(lp.constraint(pin_row, lp.EQ, 1))
        out = lp.solve(lp.feasibility(names, cons))
        if out.is_feasible:
            return out.point
    return None


def has_positive_normal(inc: IncSet) -> bool:
    """Does a strictly positive covering normal exist?  Maximize the margin
    epsilon subject to covering, n >= epsilon * 1 and sum(n) = 1; positivity
    of the optimum is the verdict.  The sum-one row bounds the otherwise
    homogeneous program."""
    effects = inc.sorted_effects()
    d = inc.dimension
    names = [f"n{i}" for i in range(d)] + ["eps"]
    nvars = d + 1
    cons = _cover_rows(effects, nvars, d)
    for i in range(d):
        row = [Fraction(0)] * nvars
        row[i] = Fraction(1)
        row[d] = Fraction(-1)
        cons.append(lp.constraint(row, lp.GEQ, 0))  # n_i >= eps
    cons.append(lp.constraint([Fraction(1)] * d + [Fraction(0)], lp.EQ, 1))
    objective = [Fraction(0)] * d + [Fraction(1)]
    out = lp.solve(lp.program(lp.MAXIMIZE, objective, names, cons))
    return out.status == lp.OPTIMAL and out.value is not None and out.value > 0


def good_normal(inc: IncSet) -> GoodNormal:
    """Compute a good normal for a class-C effect set.

    First the reversible part I = {v : -v in cone(Inc)} is identified by cone
    membership queries.  The normal is then synthesized by maximizing epsilon
    subject to

        u . n  =  0        for u in I
        v . n <= -epsilon   for v in Inc minus I
        n    >=  epsilon * 1,   sum(n) = 1

    There is a good normal iff the optimum has epsilon > 0, and then n is one.
    Raises NotCategoryC otherwise.
    """
    effects = inc.sorted_effects()
    d = inc.dimension
    reversible = [v for v in effects if lp.in_cone(tuple(-x for x in v), effects)[0]]
    rev_set = set(reversible)

    names = [f"n{i}" for i in range(d)] + ["eps"]
    nvars = d + 1
    cons = []
    for u in reversible:
        row = [Fraction(0)] * nvars
        for i, x in enumerate(u):
            row[i] = Fraction(x)
        cons.append(lp.constraint(row, lp.EQ, 0))
    for v in effects:
        if v in rev_set:
            continue
        row = [Fraction(0)] * nvars
        for i, x in enumerate(v):
            row[i] = Fraction(x)
        row[d] = Fraction(1)
        cons.append(lp.constraint(row, lp.LEQ, 0))  # v.n + eps <= 0
    for i in range(d):
        row = [Fraction(0)] * nvars
        row[i] = Fraction(1)
        row[d] = Fraction(-1)
        cons.append(lp.constraint(row, lp.GEQ, 0))
    cons.append(lp.constraint([Fraction(1)] * d + [Fraction(0)], lp.EQ, 1))
    objective = [Fraction(0)] * d + [Fraction(1)]
    out = lp.solve(lp.program(lp.MAXIMIZE, objective, names, cons))
    if out.status != lp.OPTIMAL or out.value is None or out.value <= 0:
        raise NotCategoryC("no strictly positive covering normal with the required contact set")
    assert out.point is not None
    normal = out.point[:d]
    gn = GoodNormal(normal, frozenset(reversible))
    problems = good_normal_failures(inc, gn, cone_check=False)
    assert not problems, problems
    return gn


def good_normal_failures(inc: IncSet, gn: GoodNormal, cone_check: bool = True) -> list[str]:
    """Exact re-check of every good-normal invariant.  With cone_check the
    biconditional against cone membership is re-established from scratch via
    in_cone (independent of the optimizer that produced the normal)."""
    failures: list[str] = []
    d = inc.dimension
    if len(gn.normal) != d:
        return [f"normal arity {len(gn.normal)} != dimension {d}"]
    for i, c in enumerate(gn.normal):
        if c <= 0:
            failures.append(f"normal component {i + 1} not strictly positive ({c})")
    zero_set = set()
    for v in inc.sorted_effects():
        p = lp.dot(gn.normal, v)
        if p > 0:
            failures.append(f"effect {v} not covered (product {p} > 0)")
        elif p == 0:
            zero_set.add(v)
    if zero_set != set(gn.neutral):
        failures.append(
            f"neutral set mismatch: recorded {sorted(gn.neutral)}, actual {sorted(zero_set)}"
        )
    if cone_check:
        effects = inc.sorted_effects()
        for v in effects:
            member, _ = lp.in_cone(tuple(-x for x in v), effects)
            if member != (v in zero_set):
                failures.append(
                    f"effect {v}: -v in cone is {member} but product-zero is {v in zero_set}"
                )
    return failures


def classify(inc: IncSet) -> Category:
    """Total, deterministic classification into A, B, C or D.

    An empty effect set (a component with no cycles) lands in C by convention
    with a uniform positive normal; the downstream analysis then reports a
    constant bound.
    """
    if has_positive_normal(inc):
        return Category("C", None, good_normal(inc))
    nn = find_nonnegative_normal(inc)
    if nn is not None:
        return Category("D", nn, None)
    anyn = find_normal(inc)
    if anyn is not None:
        assert any(c < 0 for c in anyn)
        return Category("B", anyn, None)
    return Category("A", None, None)
