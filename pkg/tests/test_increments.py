import random

from vassbound.core import path_effect, scc_decompose, validate
from vassbound.increments import compute_inc, enumerate_short_cycle_effects

from helpers import corpus_vass, random_vass


def test_inc_fig2a_matches_worked_example():
    inc = compute_inc(corpus_vass("fig2a"))
    assert inc.effects == frozenset({(-1, 1), (-2, 2), (1, -1), (2, -2), (-1, 0)})


def test_inc_fig2c_q2_restriction():
    comps = scc_decompose(corpus_vass("fig2c"))
    q2 = next(c for c in comps if c.states == ("q2",))
    assert compute_inc(q2.vass).effects == frozenset({(-1, 0), (1, -1)})


def test_inc_no_cycles_is_empty():
    v = validate(2, ["q"], [])
    assert compute_inc(v).effects == frozenset()
    chain = validate(1, ["a", "b"], [("a", (1,), "b")])
    assert compute_inc(chain).effects == frozenset()


def test_inc_matches_brute_force_enumeration():
    rng = random.Random(321321)
    for _ in range(150):
        v = random_vass(rng, max_states=4, dimension=2, density=0.5)
        assert compute_inc(v).effects == enumerate_short_cycle_effects(v)


def test_inc_entries_within_state_count_box():
    rng = random.Random(777)
    for _ in range(80):
        v = random_vass(rng, max_states=4, dimension=2, density=0.6)
        inc = compute_inc(v)
        n = len(v.states)
        assert len(inc.effects) <= (2 * n + 1) ** v.dimension
        for e in inc.effects:
            assert all(-n <= x <= n for x in e)


def test_witnesses_recompute_to_their_keys():
    rng = random.Random(4242)
    for _ in range(60):
        v = random_vass(rng, max_states=4, dimension=2, density=0.5)
        inc = compute_inc(v, want_witnesses=True)
        assert set(inc.witnesses) == set(inc.effects)
        for effect, cycle in inc.witnesses.items():
            assert cycle.is_cycle()
            assert len(cycle) <= len(v.states)
            assert cycle.is_in(v)
            assert path_effect(cycle) == effect


def test_witnesses_deterministic():
    v = corpus_vass("fig2a")
    first = compute_inc(v, want_witnesses=True)
    second = compute_inc(v, want_witnesses=True)
    assert {e: str(w) for e, w in first.witnesses.items()} == {
        e: str(w) for e, w in second.witnesses.items()
    }
