"""Effects of short cycles.

Inc is the set of counter effects of all cycles of length at most |Q|.  It is
computed by the layered dynamic program over E^k(q, q'), the effects of paths
of length exactly k from q to q', rather than by enumerating cycles: the
number of short cycles can be exponential in |Q| while the effect sets stay
within the box [-|Q|, |Q|]^d.  Short cycles, not simple cycles: deciding
whether a vector is the effect of a simple cycle is NP-complete already in
dimension one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

from .core import Path, Transition, Vass, path_effect, vector_add

Effect = tuple[int, ...]


@dataclass(frozen=True)
class IncSet:
    """Set of short-cycle effects, with optional witness cycles.

    `state_count` is |Q| of the originating VASS; every effect entry lies in
    [-state_count, state_count].  Witness cycles, when present, have length
    at most state_count and recompute exactly to their key.
    """

    dimension: int
    effects: frozenset[Effect]
    state_count: Optional[int] = None
    witnesses: Optional[Mapping[Effect, Path]] = None

    def sorted_effects(self) -> list[Effect]:
        return sorted(self.effects)

    def __iter__(self):
        return iter(self.sorted_effects())


def from_effects(dimension: int, effects, state_count: Optional[int] = None) -> IncSet:
    """IncSet over an explicit effect collection (used by tests and by the
    geometry layer when no VASS is in play)."""
    effs = frozenset(tuple(int(x) for x in e) for e in effects)
    for e in effs:
        if len(e) != dimension:
            raise ValueError(f"effect {e} has wrong dimension")
    return IncSet(dimension, effs, state_count)


def compute_inc(vass: Vass, want_witnesses: bool = False) -> IncSet:
    """All short-cycle effects of `vass` by the layered DP.

    E^1(q,q') holds the updates of direct transitions; E^k extends E^{k-1} by
    one transition.  Inc is the union of E^k(q,q) over k <= |Q|.  When
    `want_witnesses` is set, one realizing cycle per effect is reconstructed
    from back-pointers; reconstruction is deterministic (transitions in
    declaration order, predecessor effects in sorted order).
    """
    n = len(vass.states)
    out = vass.out_map()

    layer: dict[tuple[str, str], set[Effect]] = {}
    for t in vass.transitions:
        layer.setdefault((t.source, t.target), set()).add(t.update)

    # back[(k, origin, endpoint, effect)] = (effect at k-1, closing transition)
    back: dict[tuple[int, str, str, Effect], tuple[Effect, Transition]] = {}
    effects: set[Effect] = set()
    found_at: dict[tuple[str, Effect], int] = {}

    def harvest(current: dict[tuple[str, str], set[Effect]], k: int) -> None:
        for (q, qp), effs in current.items():
            if q == qp:
                for e in effs:
                    effects.add(e)
                    found_at.setdefault((q, e), k)

    harvest(layer, 1)
    prev = layer
    for k in range(2, n + 1):
        nxt: dict[tuple[str, str], set[Effect]] = {}
        for (q, mid), effs in prev.items():
            succ = out[mid]
            if not succ:
                continue
            ordered = sorted(effs) if want_witnesses else effs
            for t in succ:
                bucket = nxt.setdefault((q, t.target), set())
                for e in ordered:
                    combined = vector_add(e, t.update)
                    if combined not in bucket:
                        bucket.add(combined)
                        if want_witnesses:
                            back[(k, q, t.target, combined)] = (e, t)
        harvest(nxt, k)
        prev = nxt

    witnesses: Optional[dict[Effect, Path]] = None
    if want_witnesses:
        order = vass.state_index()
        witnesses = {}
        for e in sorted(effects):
            k, q = _best_site(found_at, e, order)
            cycle = _reconstruct(vass, back, k, q, e)
            assert path_effect(cycle) == e and cycle.is_cycle() and len(cycle) <= n
            witnesses[e] = cycle

    return IncSet(vass.dimension, frozenset(effects), n, witnesses)


def _best_site(
    found_at: dict[tuple[str, Effect], int], effect: Effect, order: dict[str, int]
) -> tuple[int, str]:
    best = min(
        ((k, order[q], q) for (q, e), k in found_at.items() if e == effect),
    )
    return best[0], best[2]


def _reconstruct(
    vass: Vass,
    back: dict[tuple[int, str, str, Effect], tuple[Effect, Transition]],
    k: int,
    start: str,
    effect: Effect,
) -> Path:
    steps: list[Transition] = []
    cur_state = start
    cur_effect = effect
    cur_k = k
    while cur_k > 1:
        prev_effect, t = back[(cur_k, start, cur_state, cur_effect)]
        steps.append(t)
        cur_state = t.source
        cur_effect = prev_effect
        cur_k -= 1
    head = None  # length-1 remainder: a direct transition start -> cur_state
    for t in vass.transitions:
        if t.source == start and t.target == cur_state and t.update == cur_effect:
            head = t
            break
    assert head is not None, "DP back-pointers must bottom out in a transition"
    steps.append(head)
    steps.reverse()
    return Path(start, tuple(steps))


def enumerate_short_cycle_effects(vass: Vass) -> frozenset[Effect]:
    """Brute-force oracle: walk every path of length <= |Q| from every state
    and collect the effects of those that close into a cycle.  Exponential;
    desk-scale instances only."""
    n = len(vass.states)
    out = vass.out_map()
    found: set[Effect] = set()

    def walk(origin: str, state: str, depth: int, effect: Effect) -> None:
        for t in out[state]:
            new_effect = vector_add(effect, t.update)
            if t.target == origin:
                found.add(new_effect)
            if depth + 1 < n:
                walk(origin, t.target, depth + 1, new_effect)

    zero = (0,) * vass.dimension
    for s in vass.states:
        walk(s, s, 0, zero)
    return frozenset(found)
