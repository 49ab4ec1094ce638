"""Linear termination decision via weighted linear ranking functions.

A weighted linear map assigns mu(q, v) = normal . v + weight(q).  It ranks a
strongly connected VASS when it drops by at least epsilon > 0 along every
transition, which is a per-transition linear condition:

    weight(p) - weight(q) >= normal . u + epsilon      for every (p, u, q)

Termination complexity is linear exactly when every strongly connected
component admits such a map.  The synthesis program is homogeneous, so instead
of minimizing the mean drop we solve the feasibility system with the drop
pinned to 1; any feasible point is already a certificate with epsilon = 1.
The dichotomy is sharp: a component with no such map has at least quadratic
termination complexity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import lp
from .core import SccComponent, Vass, scc_decompose
from .increments import IncSet


@dataclass(frozen=True)
class WlrEntry:
    """Per-component certificate: normal (entrywise >= 0), one weight per
    state, and the strict drop epsilon > 0."""

    states: tuple[str, ...]
    normal: lp.RatVector
    weights: dict[str, Fraction]
    epsilon: Fraction

    def __hash__(self) -> int:
        return hash((self.states, self.normal, tuple(sorted(self.weights.items())), self.epsilon))


@dataclass(frozen=True)
class WlrCertificate:
    entries: tuple[WlrEntry, ...]


def entry_failures(vass: Vass, entry: WlrEntry) -> list[str]:
    """Exact re-check of one certificate entry against the transitions inside
    its component.  Returns human-readable violations; empty means valid."""
    failures: list[str] = []
    if len(entry.normal) != vass.dimension:
        return [f"normal arity {len(entry.normal)} != dimension {vass.dimension}"]
    if entry.epsilon <= 0:
        failures.append(f"epsilon {entry.epsilon} is not positive")
    for i, c in enumerate(entry.normal):
        if c < 0:
            failures.append(f"normal component {i + 1} is negative ({c})")
    members = set(entry.states)
    if set(entry.weights) != members:
        failures.append("weights do not cover exactly the component states")
        return failures
    for t in vass.transitions:
        if t.source in members and t.target in members:
            drop = entry.weights[t.source] - entry.weights[t.target]
            needed = lp.dot(entry.normal, t.update) + entry.epsilon
            if drop < needed:
                failures.append(
                    f"transition {t}: weight drop {drop} < required {needed}"
                )
    return failures


def check_linear_scc(vass: Vass, inc: Optional[IncSet] = None) -> Optional[WlrEntry]:
    """Synthesize a WLR certificate for a strongly connected VASS, or None.

    None is a proof of non-linearity for the component: its termination
    complexity is then at least quadratic (or infinite).  When `inc` is
    supplied the returned certificate is additionally cross-checked against
    it: every short-cycle effect must land strictly below the hyperplane.
    """
    d = vass.dimension
    if not vass.transitions:
        # No transitions, nothing to rank; a vacuous certificate.
        return WlrEntry(
            vass.states,
            (Fraction(0),) * d,
            {q: Fraction(0) for q in vass.states},
            Fraction(1),
        )

    variables = [f"n{i}" for i in range(d)] + [f"h_{q}" for q in vass.states]
    idx = {name: i for i, name in enumerate(variables)}
    nvars = len(variables)
    constraints = []
    for t in vass.transitions:
        row = [Fraction(0)] * nvars
        for i, u in enumerate(t.update):
            row[i] = Fraction(-u)
        row[idx[f"h_{t.source}"]] += 1
        row[idx[f"h_{t.target}"]] -= 1
        constraints.append(lp.constraint(row, lp.GEQ, 1))
    for i in range(d):
        row = [Fraction(0)] * nvars
        row[i] = Fraction(1)
        constraints.append(lp.constraint(row, lp.GEQ, 0))

    out = lp.solve(lp.feasibility(variables, constraints))
    if not out.is_feasible:
        return None
    assert out.point is not None
    normal = out.point[:d]
    weights = {q: out.point[idx[f"h_{q}"]] for q in vass.states}
    entry = WlrEntry(vass.states, normal, weights, Fraction(1))
    assert not entry_failures(vass, entry)
    if inc is not None:
        for e in inc.effects:
            assert lp.dot(normal, e) < 0, "certified component has a non-dropping cycle"
    return entry


def check_linear(vass: Vass) -> tuple[Optional[WlrCertificate], Optional[tuple[str, ...]]]:
    """Whole-VASS linear decision, one certificate entry per strongly
    connected component with at least one transition.  Components without
    transitions contribute only constantly many steps and are skipped.
    Returns (certificate, None) or (None, blamed component states)."""
    entries = []
    for comp in scc_decompose(vass):
        if not comp.vass.transitions:
            continue
        entry = check_linear_scc(comp.vass)
        if entry is None:
            return None, comp.states
        entries.append(entry)
    return WlrCertificate(tuple(entries)), None


def certificate_failures(vass: Vass, cert: WlrCertificate) -> list[str]:
    """Exact verification of a whole-VASS certificate: the entries must cover
    exactly the transition-bearing components, each validly."""
    failures: list[str] = []
    expected = {
        comp.states: comp.vass
        for comp in scc_decompose(vass)
        if comp.vass.transitions
    }
    seen = set()
    for entry in cert.entries:
        key = tuple(entry.states)
        if key not in expected:
            failures.append(f"entry for {key} does not match any transition-bearing SCC")
            continue
        if key in seen:
            failures.append(f"duplicate entry for SCC {key}")
            continue
        seen.add(key)
        failures.extend(entry_failures(expected[key], entry))
    missing = set(expected) - seen
    for key in sorted(missing):
        failures.append(f"no entry for transition-bearing SCC {key}")
    return failures


def verify_wlr(vass: Vass, cert: WlrCertificate) -> bool:
    return not certificate_failures(vass, cert)
