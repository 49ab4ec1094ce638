"""Core data model for vector addition systems with states.

A VASS is a finite automaton over d nonnegative integer counters whose
transitions add a vector in {-1,0,1}^d to the counters.  This module owns the
structural types (states, transitions, configurations, paths), input
validation, strongly connected component decomposition, and the short-cycle
path algebra that the analyzers build on.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence


class VassError(ValueError):
    """A structural error in a VASS description."""

    code = "vass"


class EmptyStateSet(VassError):
    code = "empty-states"


class DimensionMismatch(VassError):
    code = "dimension"


class UpdateOutOfRange(VassError):
    code = "update-range"


class UnknownState(VassError):
    code = "unknown-state"


class DuplicateTransition(VassError):
    code = "duplicate-transition"


class DuplicateState(VassError):
    code = "duplicate-state"


@dataclass(frozen=True)
class Transition:
    source: str
    update: tuple[int, ...]
    target: str

    def __str__(self) -> str:
        body = " ".join(str(e) for e in self.update)
        return f"{self.source} -> {self.target} [{body}]"


@dataclass(frozen=True)
class Vass:
    """A d-dimensional VASS.  State order is declaration order and is the
    canonical ordering used for all deterministic output."""

    dimension: int
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def out_map(self) -> dict[str, list[Transition]]:
        out: dict[str, list[Transition]] = {s: [] for s in self.states}
        for t in self.transitions:
            out[t.source].append(t)
        return out

    def restrict(self, keep: Iterable[str]) -> "Vass":
        """Sub-VASS over a subset of states, keeping transitions with both
        endpoints inside the subset.  Declaration order is preserved."""
        kept = set(keep)
        states = tuple(s for s in self.states if s in kept)
        trans = tuple(
            t for t in self.transitions if t.source in kept and t.target in kept
        )
        return Vass(self.dimension, states, trans)

    def state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}


@dataclass(frozen=True)
class Configuration:
    """A control state paired with nonnegative counters.  Its size is the
    maximum counter value."""

    state: str
    counters: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(c < 0 for c in self.counters):
            raise ValueError(f"negative counter in configuration {self}")

    def size(self) -> int:
        return max(self.counters)

    def __str__(self) -> str:
        return f"{self.state}({','.join(str(c) for c in self.counters)})"


@dataclass(frozen=True)
class Path:
    """An alternating state/update sequence.  Consecutive steps must chain."""

    start: str
    steps: tuple[Transition, ...]

    def __post_init__(self) -> None:
        prev = self.start
        for t in self.steps:
            if t.source != prev:
                raise ValueError(f"path step {t} does not start in {prev}")
            prev = t.target

    def states(self) -> list[str]:
        seq = [self.start]
        seq.extend(t.target for t in self.steps)
        return seq

    @property
    def end(self) -> str:
        return self.steps[-1].target if self.steps else self.start

    def __len__(self) -> int:
        return len(self.steps)

    def is_cycle(self) -> bool:
        return len(self.steps) >= 1 and self.end == self.start

    def is_in(self, vass: Vass) -> bool:
        trans = set(vass.transitions)
        return all(t in trans for t in self.steps)

    def __str__(self) -> str:
        parts = [self.start]
        for t in self.steps:
            parts.append(f"-({','.join(str(e) for e in t.update)})->")
            parts.append(t.target)
        return " ".join(parts)


def vector_add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def path_effect(path: Path, dimension: int | None = None) -> tuple[int, ...]:
    """Entrywise sum of the update vectors along the path.  A zero-length
    path has the zero effect, but then the dimension must be supplied."""
    if not path.steps:
        if dimension is None:
            raise ValueError("effect of a zero-length path needs an explicit dimension")
        return (0,) * dimension
    eff = path.steps[0].update
    for t in path.steps[1:]:
        eff = vector_add(eff, t.update)
    return eff


def validate(
    dimension: int,
    states: Sequence[str],
    transitions: Iterable[tuple[str, Sequence[int], str]],
) -> Vass:
    """Build a Vass from raw parts, enforcing every structural invariant.

    Raises EmptyStateSet, DimensionMismatch, UpdateOutOfRange, UnknownState or
    DuplicateTransition.  Duplicate transition lines are rejected rather than
    silently deduplicated; they usually indicate a modeling error.
    """
    if dimension < 1:
        raise DimensionMismatch(f"dimension must be positive, got {dimension}")
    state_tuple = tuple(states)
    if not state_tuple:
        raise EmptyStateSet("a VASS needs at least one state")
    seen_states = set()
    for s in state_tuple:
        if s in seen_states:
            raise DuplicateState(f"state {s!r} declared twice")
        seen_states.add(s)

    built: list[Transition] = []
    seen: set[Transition] = set()
    for source, update, target in transitions:
        if source not in seen_states:
            raise UnknownState(f"transition source {source!r} is not a declared state")
        if target not in seen_states:
            raise UnknownState(f"transition target {target!r} is not a declared state")
        upd = tuple(int(e) for e in update)
        if len(upd) != dimension:
            raise DimensionMismatch(
                f"update {upd} has arity {len(upd)}, expected {dimension}"
            )
        if any(e not in (-1, 0, 1) for e in upd):
            raise UpdateOutOfRange(f"update {upd} has an entry outside {{-1,0,1}}")
        t = Transition(source, upd, target)
        if t in seen:
            raise DuplicateTransition(f"duplicate transition {t}")
        seen.add(t)
        built.append(t)
    return Vass(dimension, state_tuple, tuple(built))


@dataclass(frozen=True)
class SccComponent:
    states: tuple[str, ...]
    vass: Vass


def scc_decompose(vass: Vass) -> list[SccComponent]:
    """Strongly connected components in reverse topological order.

    Iterative Tarjan; an SCC is emitted only once all SCCs it can reach have
    been emitted, which is exactly reverse topological order.  Each component
    carries the restriction of the VASS to its states.
    """
    succ: dict[str, list[str]] = {s: [] for s in vass.states}
    for t in vass.transitions:
        succ[t.source].append(t.target)

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    onstack: set[str] = set()
    stack: list[str] = []
    components: list[list[str]] = []
    counter = 0

    for root in vass.states:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack.add(root)
        work: list[tuple[str, Iterable[str]]] = [(root, iter(succ[root]))]
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in onstack and index[w] < low[node]:
                    low[node] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                components.append(comp)

    order = vass.state_index()
    result = []
    for comp in components:
        comp.sort(key=order.__getitem__)
        result.append(SccComponent(tuple(comp), vass.restrict(comp)))
    return result


def is_strongly_connected(vass: Vass) -> bool:
    return len(scc_decompose(vass)) == 1


def decompose_short_cycles(path: Path, vass: Vass) -> tuple[list[Path], Path]:
    """Greedy decomposition of a path into short cycles.

    Repeatedly removes the first-occurring cycle of length at most |Q| (the
    earliest position at which a control state repeats within a window of
    |Q| steps) until none remains.  Returns the removed cycles in removal
    order plus the residual path, whose length is at most |Q| - 1.
    """
    limit = len(vass.states)
    cycles: list[Path] = []
    steps = list(path.steps)
    start = path.start
    while True:
        states = [start]
        states.extend(t.target for t in steps)
        found = None
        for j in range(1, len(states)):
            lo = max(0, j - limit)
            for i in range(lo, j):
                if states[i] == states[j]:
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            break
        i, j = found
        cycles.append(Path(states[i], tuple(steps[i:j])))
        steps = steps[:i] + steps[j:]
    residual = Path(start, tuple(steps))
    assert len(residual) <= max(limit - 1, 0)
    return cycles, residual


def canonical_text(vass: Vass) -> str:
    """Canonical text rendering: sorted states, sorted transitions, normalized
    whitespace.  Used for certificate binding via fingerprints."""
    lines = [f"dim {vass.dimension}"]
    lines.append("states " + " ".join(sorted(vass.states)))
    for t in sorted(vass.transitions, key=lambda t: (t.source, t.update, t.target)):
        lines.append(str(t))
    return "\n".join(lines) + "\n"


def fingerprint(vass: Vass) -> str:
    return hashlib.sha256(canonical_text(vass).encode("utf-8")).hexdigest()
