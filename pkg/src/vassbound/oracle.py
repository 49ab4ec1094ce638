"""Exact brute-force semantics for desk-scale instances.

Computes the worst-case number of steps among zero-avoiding runs (every
counter strictly positive at every configuration) by memoized longest-path
search over the configuration graph.  The search returns one of three
results per start: the exact maximum, "infinite" when a configuration repeats
along the current branch (repeating that cycle forever is a zero-avoiding
run, its net effect being zero), or "budget" when the configured limits on
distinct configurations or expansions are hit.  Runs whose counters grow
forever never repeat a configuration and therefore surface as budget
exhaustion, not as infinity; agreement checks against the analyzer must
treat budget results as unknowns.

Values are exact maxima, independent of traversal order; for terminating
instances the explored zero-avoiding graph is acyclic and the memoized DFS
visits each configuration once.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, TextIO

from .core import Configuration, Vass

EXACT = "exact"
INFINITE = "infinite"
BUDGET = "budget"

DEFAULT_MAX_CONFIGS = 1_000_000
DEFAULT_MAX_EXPANSIONS = 10_000_000


@dataclass(frozen=True)
class Budget:
    max_configs: int = DEFAULT_MAX_CONFIGS
    max_expansions: int = DEFAULT_MAX_EXPANSIONS

    def __post_init__(self) -> None:
        if self.max_configs <= 0 or self.max_expansions <= 0:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class RunOutcome:
    status: str  # exact | infinite | budget
    value: Optional[int]
    configs: int
    expansions: int


class _Search:
    """Shared memo tables and budget accounting for one instance.  Memo and
    on-path sets are kept per control state so configuration keys stay plain
    counter tuples (cheap to build and hash in the hot loop)."""

    __slots__ = ("succ", "memo", "onpath", "budget", "expansions", "stored")

    def __init__(self, vass: Vass, budget: Budget) -> None:
        index = vass.state_index()
        succ: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in vass.states]
        for t in vass.transitions:
            succ[index[t.source]].append((t.update, index[t.target]))
        self.succ = succ
        self.memo: list[dict[tuple[int, ...], int]] = [{} for _ in vass.states]
        self.onpath: list[set[tuple[int, ...]]] = [set() for _ in vass.states]
        self.budget = budget
        self.expansions = 0
        self.stored = 0

    def run(self, state_idx: int, counters: tuple[int, ...]) -> tuple[str, Optional[int]]:
        """Longest zero-avoiding run from one start; see module docstring for
        the three outcomes.  Iterative DFS: frames carry the generated
        successors and the best resolved child value so far."""
        memo = self.memo
        onpath = self.onpath
        succ = self.succ
        max_configs = self.budget.max_configs
        max_expansions = self.budget.max_expansions
        expansions = self.expansions

        cached = memo[state_idx].get(counters)
        if cached is not None:
            return (EXACT, cached)

        add = int.__add__

        def generate(state: int, cnts: tuple[int, ...]):
            children = []
            for update, target in succ[state]:
                nxt = tuple(map(add, cnts, update))
                if min(nxt) >= 1:
                    children.append((target, nxt))
            return children

        status = EXACT
        onpath[state_idx].add(counters)
        expansions += len(succ[state_idx])
        # frame: [state, counters, children, next position, best value]
        stack: list[list] = [[state_idx, counters, generate(state_idx, counters), 0, 0]]
        while stack:
            frame = stack[-1]
            children = frame[2]
            pos = frame[3]
            if pos < len(children):
                frame[3] = pos + 1
                cstate, ccnts = children[pos]
                known = memo[cstate].get(ccnts)
                if known is not None:
                    if known >= frame[4]:
                        frame[4] = known + 1
                    continue
                if ccnts in onpath[cstate]:
                    status = INFINITE
                    break
                if (
                    self.stored + len(stack) >= max_configs
                    or expansions >= max_expansions
                ):
                    status = BUDGET
                    break
                onpath[cstate].add(ccnts)
                expansions += len(succ[cstate])
                stack.append([cstate, ccnts, generate(cstate, ccnts), 0, 0])
            else:
                stack.pop()
                state, cnts = frame[0], frame[1]
                onpath[state].discard(cnts)
                best = frame[4]
                memo[state][cnts] = best
                self.stored += 1
                if stack:
                    parent = stack[-1]
                    if best >= parent[4]:
                        parent[4] = best + 1
        self.expansions = expansions
        if status != EXACT:
            # Clear in-flight path markers so the table stays reusable.
            for frame in stack:
                onpath[frame[0]].discard(frame[1])
            return (status, None)
        return (EXACT, memo[state_idx][counters])


def longest_run(
    vass: Vass, start: Configuration, budget: Budget = Budget()
) -> RunOutcome:
    """Exact worst-case zero-avoiding run length from one configuration.

    The start must be strictly positive (a configuration touching zero admits
    no zero-avoiding run at all)."""
    if any(c < 1 for c in start.counters):
        raise ValueError("start configuration must be strictly positive")
    if len(start.counters) != vass.dimension:
        raise ValueError("start configuration has wrong dimension")
    search = _Search(vass, budget)
    index = vass.state_index()
    status, value = search.run(index[start.state], start.counters)
    return RunOutcome(status, value, search.stored, search.expansions)


@dataclass(frozen=True)
class OracleEntry:
    n: int
    status: str
    value: Optional[int]
    configs: int
    expansions: int


@dataclass(frozen=True)
class OracleResult:
    entries: tuple[OracleEntry, ...]

    def sample_pairs(self) -> list[tuple[int, int]]:
        return [(e.n, e.value) for e in self.entries if e.status == EXACT]


def _start_vectors(dimension: int, n: int, sweep: bool) -> list[tuple[int, ...]]:
    all_n = (n,) * dimension
    if not sweep or n == 1:
        return [all_n]
    # Every strictly positive vector whose maximum entry is exactly n.  The
    # all-n vector is expected to dominate by monotonicity; sweeping validates
    # that empirically instead of assuming it.
    vectors: set[tuple[int, ...]] = set()

    def rec(prefix: tuple[int, ...]) -> None:
        if len(prefix) == dimension:
            if max(prefix) == n:
                vectors.add(prefix)
            return
        for v in range(1, n + 1):
            rec(prefix + (v,))

    rec(())
    return sorted(vectors)


def termination_complexity(
    vass: Vass, n: int, budget: Budget = Budget(), sweep: Optional[bool] = None
) -> OracleEntry:
    """max over starts of size n of the exact longest run.

    The definition maximizes over all configurations whose largest counter is
    exactly n.  For small two-dimensional instances the full start sweep is
    evaluated; otherwise only the all-n vector per state (the maximizer under
    counter monotonicity, which the sweep validates at small scale).
    The memo table is shared across starts for the same n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if sweep is None:
        sweep = vass.dimension <= 2 and n <= 16
    search = _Search(vass, budget)
    best = 0
    for counters in _start_vectors(vass.dimension, n, sweep):
        for idx in range(len(vass.states)):
            status, value = search.run(idx, counters)
            if status == INFINITE:
                return OracleEntry(n, INFINITE, None, search.stored, search.expansions)
            if status == BUDGET:
                return OracleEntry(n, BUDGET, None, search.stored, search.expansions)
            if value > best:
                best = value
    return OracleEntry(n, EXACT, best, search.stored, search.expansions)


def simulate(
    vass: Vass, ns: Iterable[int], budget: Budget = Budget(), sweep: Optional[bool] = None
) -> OracleResult:
    return OracleResult(
        tuple(termination_complexity(vass, n, budget, sweep) for n in ns)
    )


def parse_range(spec: str) -> list[int]:
    """n-range grammar: "start:end" doubles from start to end, and
    "start:end:step" walks arithmetically."""
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise ValueError(f"bad range {spec!r}: expected start:end or start:end:step")
    try:
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"bad range {spec!r}: {exc}") from None
    if len(parts) == 2:
        start, end = values
        if start < 1 or end < start:
            raise ValueError(f"bad range {spec!r}: need 1 <= start <= end")
        ns = []
        n = start
        while n <= end:
            ns.append(n)
            n *= 2
        return ns
    start, end, step = values
    if start < 1 or end < start or step < 1:
        raise ValueError(f"bad range {spec!r}: need 1 <= start <= end and step >= 1")
    return list(range(start, end + 1, step))


def write_csv(result: OracleResult, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "L", "status"])
    for e in result.entries:
        writer.writerow([e.n, e.value if e.value is not None else "", e.status])


class InsufficientSamples(ValueError):
    pass


@dataclass(frozen=True)
class ExponentFit:
    exponent: float
    ratios: tuple[float, ...]


def fit_exponent(samples: Iterable[tuple[int, int]]) -> ExponentFit:
    """Least-squares slope of log L against log n, plus the consecutive
    growth ratios.  Needs at least three finite positive samples at strictly
    increasing n; around doublings the slope reads as the growth exponent."""
    pts = [(n, v) for n, v in samples if v is not None and v > 0]
    if len(pts) < 3:
        raise InsufficientSamples(f"need at least 3 positive samples, got {len(pts)}")
    if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
        raise InsufficientSamples("samples must have strictly increasing n")
    xs = [math.log(n) for n, _ in pts]
    ys = [math.log(v) for _, v in pts]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    ratios = tuple(b[1] / a[1] for a, b in zip(pts, pts[1:]))
    return ExponentFit(slope, ratios)
