"""The recursive degree analysis.

For a strongly connected class-C instance with good normal n, the neutral
restriction keeps exactly the transitions lying on some short cycle whose
effect is orthogonal to n.  Runs spend all but linearly many steps inside
that restriction, and conversely its components can be driven for a full
extra factor of n, so

    complexity(A) = Theta(n * max over components C of complexity(A^n | C))

which turns the degree computation into a recursion over restrictions: no
neutral component means Theta(n); a component equal to the whole instance can
never satisfy that equation, so the instance is non-terminating; otherwise
the degree is one plus the maximum over the children.  The recursion depth is
bounded by the dimension, hence Theta(n^k) with k between 1 and d.

Membership of a transition in the restriction is decided by least-weight
paths: weight every edge by -(update . n).  No cycle weighs negative under a
good normal, so Bellman-Ford applies, and (q, u, q') lies on a neutral cycle
iff the least weight from q' back to q is exactly update . n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import lp
from .core import Vass, fingerprint, is_strongly_connected, scc_decompose
from .geometry import Category, GoodNormal, classify
from .increments import compute_inc
from .linear import WlrCertificate, WlrEntry, check_linear, check_linear_scc


class AnalysisError(RuntimeError):
    """Internal invariant violation inside the analyzer."""

    code = "internal"


class NegativeCycleDetected(AnalysisError):
    """The supplied normal admits a weight-negative cycle, so it violates the
    good-normal invariants; signals an internal consistency failure."""

    code = "negative-cycle"


class DepthExceeded(AnalysisError):
    """Recursion deeper than the dimension permits; signals an internal bug."""

    code = "depth-exceeded"


RULE_BASE = "k0-base"
RULE_RECURSE = "recursive-max"
RULE_FIXPOINT = "fixpoint"


@dataclass(frozen=True)
class DerivationTree:
    """One node per analyzed sub-VASS: which good normal was used, which rule
    fired, and the per-component subtrees."""

    fingerprint: str
    states: tuple[str, ...]
    rule: str
    normal: Optional[lp.RatVector]
    exponent: Optional[int]
    children: tuple["DerivationTree", ...] = ()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)


NON_TERMINATING = "non-terminating"
CONSTANT = "constant"
LINEAR = "linear"
POLYNOMIAL = "polynomial"
CATEGORY_D = "category-d"


@dataclass(frozen=True)
class Verdict:
    kind: str
    reason: Optional[str] = None
    certificate: Optional[WlrEntry] = None
    exponent: Optional[int] = None
    tree: Optional[DerivationTree] = None
    category: Optional[Category] = None

    def describe(self) -> str:
        if self.kind == NON_TERMINATING:
            return "NonTerminating"
        if self.kind == CONSTANT:
            return "ConstantBound"
        if self.kind == LINEAR:
            return "Linear"
        if self.kind == POLYNOMIAL:
            return f"Theta(n^{self.exponent})"
        return "CategoryD"


def build_restriction(vass: Vass, gn: GoodNormal) -> Vass:
    """Sub-VASS over the same states keeping the transitions that lie on some
    short cycle orthogonal to the good normal.

    Edge weights are -(update . normal); a least-weight path from the target
    back to the source closes the tightest cycle through the transition, and
    the transition stays iff that cycle is exactly neutral.  An extra
    relaxation round asserts the absence of negative cycles, which doubles as
    a sanity check on the supplied normal.
    """
    n = gn.normal
    if len(n) != vass.dimension:
        raise AnalysisError("normal arity does not match dimension")
    weights = {t: -lp.dot(n, t.update) for t in vass.transitions}
    states = vass.states
    dist_from: dict[str, dict[str, Fraction]] = {}
    for source in states:
        dist: dict[str, Fraction] = {source: Fraction(0)}
        for _ in range(len(states) - 1):
            changed = False
            for t in vass.transitions:
                if t.source in dist:
                    cand = dist[t.source] + weights[t]
                    if t.target not in dist or cand < dist[t.target]:
                        dist[t.target] = cand
                        changed = True
            if not changed:
                break
        for t in vass.transitions:
            if t.source in dist and (
                t.target not in dist or dist[t.source] + weights[t] < dist[t.target]
            ):
                raise NegativeCycleDetected(
                    f"cycle of positive normal-product reachable from {source}"
                )
        dist_from[source] = dist

    kept = tuple(
        t
        for t in vass.transitions
        if dist_from[t.target].get(t.source) == lp.dot(n, t.update)
    )
    return Vass(vass.dimension, states, kept)


def _same_vass(a: Vass, b: Vass) -> bool:
    return set(a.states) == set(b.states) and set(a.transitions) == set(b.transitions)


def analyze_scc(vass: Vass, depth_budget: Optional[int] = None) -> Verdict:
    """Verdict for one strongly connected VASS.

    No cycles at all gives a constant bound; classes A and B are
    non-terminating; class D is flagged without a bound claim (the true
    complexity can be exponential or worse, see the simulator); class C runs
    the restriction recursion described in the module docstring.
    """
    if depth_budget is None:
        depth_budget = vass.dimension + 1
    if depth_budget < 0:
        raise DepthExceeded(f"recursion exceeded dimension bound on {vass.states}")
    if not is_strongly_connected(vass):
        raise ValueError("analyze_scc expects a strongly connected VASS")

    inc = compute_inc(vass)
    if not inc.effects:
        return Verdict(CONSTANT, reason="no cycles; runs stop within |Q| steps")

    cat = classify(inc)
    if cat.tag in ("A", "B"):
        why = (
            "no covering normal exists"
            if cat.tag == "A"
            else "every covering normal has a negative component"
        )
        return Verdict(NON_TERMINATING, reason=f"category {cat.tag}: {why}", category=cat)
    if cat.tag == "D":
        return Verdict(
            CATEGORY_D,
            reason="only singular (some-component-zero) covering normals exist",
            category=cat,
        )

    gn = cat.good
    assert gn is not None
    restricted = build_restriction(vass, gn)
    components = [c for c in scc_decompose(restricted) if c.vass.transitions]
    fp = fingerprint(vass)

    if not components:
        entry = check_linear_scc(vass, inc)
        if entry is None:
            raise AnalysisError(
                "empty neutral restriction must admit a linear ranking certificate"
            )
        tree = DerivationTree(fp, vass.states, RULE_BASE, gn.normal, 1)
        return Verdict(LINEAR, certificate=entry, exponent=1, tree=tree, category=cat)

    if len(components) == 1 and _same_vass(components[0].vass, vass):
        tree = DerivationTree(fp, vass.states, RULE_FIXPOINT, gn.normal, None)
        return Verdict(
            NON_TERMINATING,
            reason="neutral restriction reproduces the whole component",
            tree=tree,
            category=cat,
        )

    children = [analyze_scc(c.vass, depth_budget - 1) for c in components]
    subtrees = []
    exponents = []
    for comp, child in zip(components, children):
        if child.kind == NON_TERMINATING:
            tree = DerivationTree(
                fp,
                vass.states,
                RULE_RECURSE,
                gn.normal,
                None,
                (child.tree,) if child.tree else (),
            )
            return Verdict(
                NON_TERMINATING,
                reason=f"neutral component {comp.states} is non-terminating: {child.reason}",
                tree=tree,
                category=cat,
            )
        if child.kind == CONSTANT:
            exponents.append(0)
            subtrees.append(
                DerivationTree(fingerprint(comp.vass), comp.states, RULE_BASE, None, 0)
            )
        elif child.kind in (LINEAR, POLYNOMIAL):
            exponents.append(child.exponent)
            subtrees.append(child.tree)
        else:
            raise AnalysisError(
                f"neutral component {comp.states} classified {child.kind}; "
                "components of a class-C restriction are always class C"
            )

    k = 1 + max(exponents)
    if not 1 <= k <= vass.dimension:
        raise DepthExceeded(f"computed exponent {k} outside 1..{vass.dimension}")
    tree = DerivationTree(fp, vass.states, RULE_RECURSE, gn.normal, k, tuple(subtrees))
    return Verdict(POLYNOMIAL, exponent=k, tree=tree, category=cat)


@dataclass(frozen=True)
class SccAnalysis:
    states: tuple[str, ...]
    verdict: Verdict


@dataclass(frozen=True)
class AnalysisResult:
    vass: Vass
    sccs: tuple[SccAnalysis, ...]  # reverse topological order
    linear_certificate: Optional[WlrCertificate]
    linear_blame: Optional[tuple[str, ...]]

    @property
    def is_linear(self) -> bool:
        return self.linear_certificate is not None

    def non_terminating(self) -> bool:
        return any(s.verdict.kind == NON_TERMINATING for s in self.sccs)

    def overall(self) -> str:
        """Summary token for reports.  Per-component verdicts are the ground
        truth; degrees are not composed across components."""
        if self.non_terminating():
            return "NonTerminating"
        if any(s.verdict.kind == CATEGORY_D for s in self.sccs):
            return "CategoryD"
        if self.is_linear:
            return "Linear"
        bearing = [s for s in self.sccs if s.verdict.kind != CONSTANT]
        if len(bearing) == 1:
            return bearing[0].verdict.describe()
        return "Mixed"


def analyze(vass: Vass) -> AnalysisResult:
    """Analyze every strongly connected component independently and decide
    global linearity.  Degrees of different components are deliberately not
    combined: counter growth accumulated inside one component feeds the next,
    and no cross-component composition rule is claimed here."""
    sccs = tuple(
        SccAnalysis(comp.states, analyze_scc(comp.vass)) for comp in scc_decompose(vass)
    )
    cert, blame = check_linear(vass)
    return AnalysisResult(vass, sccs, cert, blame)
