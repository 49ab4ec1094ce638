import random
from fractions import Fraction

import pytest

from vassbound import lp
from vassbound.analyzer import (
    CATEGORY_D,
    CONSTANT,
    LINEAR,
    NON_TERMINATING,
    POLYNOMIAL,
    NegativeCycleDetected,
    analyze,
    analyze_scc,
    build_restriction,
)
from vassbound.core import Path, scc_decompose, validate
from vassbound.geometry import GoodNormal, classify
from vassbound.increments import compute_inc
from vassbound.linear import entry_failures

from helpers import corpus_vass, random_strongly_connected_vass


def transitions_on_neutral_short_cycles(vass, normal):
    """Direct enumeration oracle for the neutral restriction: walk all cycles
    of length <= |Q| and keep transitions on those with zero normal-product."""
    out = vass.out_map()
    n = len(vass.states)
    kept = set()

    def walk(origin, state, steps):
        for t in out[state]:
            trail = steps + [t]
            if t.target == origin:
                eff = [0] * vass.dimension
                for s in trail:
                    for i, x in enumerate(s.update):
                        eff[i] += x
                if lp.dot(normal, eff) == 0:
                    kept.update(trail)
            if len(trail) < n:
                walk(origin, t.target, trail)

    for s in vass.states:
        walk(s, s, [])
    return kept


def test_restriction_fig2a_keeps_only_self_loops():
    v = corpus_vass("fig2a")
    gn = GoodNormal((Fraction(1), Fraction(1)),
                    frozenset({(-1, 1), (-2, 2), (1, -1), (2, -2)}))
    r = build_restriction(v, gn)
    assert set(r.transitions) == {v.transitions[0], v.transitions[3]}


def test_restriction_fig2b_drops_decrementing_loop():
    # derived by enumerating all short cycles through each transition
    v = corpus_vass("fig2b")
    gn = GoodNormal((Fraction(1), Fraction(1)),
                    frozenset({(-1, 1), (1, -1), (2, -2)}))
    r = build_restriction(v, gn)
    assert set(r.transitions) == set(v.transitions) - {v.transitions[0]}


def test_restriction_empty_when_all_products_negative():
    v = validate(2, ["q"], [("q", (-1, 0), "q"), ("q", (0, -1), "q")])
    gn = GoodNormal((Fraction(1), Fraction(1)), frozenset())
    assert build_restriction(v, gn).transitions == ()


def test_restriction_flags_bad_normal():
    v = corpus_vass("fig2a")
    # (1,1) negated: the self-loops now have positive products -> negative cycle
    with pytest.raises(NegativeCycleDetected):
        build_restriction(v, GoodNormal((Fraction(-1), Fraction(-1)), frozenset()))


def test_restriction_matches_enumeration_oracle():
    rng = random.Random(20180712)
    checked = 0
    for _ in range(150):
        v = random_strongly_connected_vass(rng, max_states=4, dimension=2)
        inc = compute_inc(v)
        cat = classify(inc)
        if cat.tag != "C":
            continue
        r = build_restriction(v, cat.good)
        expected = transitions_on_neutral_short_cycles(v, cat.good.normal)
        assert set(r.transitions) == expected
        checked += 1
    assert checked > 40


def test_analyze_scc_fig2a_quadratic():
    verdict = analyze_scc(corpus_vass("fig2a"))
    assert verdict.kind == POLYNOMIAL
    assert verdict.exponent == 2
    tree = verdict.tree
    assert tree.rule == "recursive-max"
    assert len(tree.children) == 2
    assert all(c.rule == "k0-base" and c.exponent == 1 for c in tree.children)
    assert {tuple(c.states) for c in tree.children} == {("q1",), ("q2",)}


def test_analyze_scc_fig2b_non_terminating_fixpoint():
    verdict = analyze_scc(corpus_vass("fig2b"))
    assert verdict.kind == NON_TERMINATING
    assert "non-terminating" in verdict.reason


def test_analyze_scc_fig4_category_d():
    verdict = analyze_scc(corpus_vass("fig4"))
    assert verdict.kind == CATEGORY_D


def test_analyze_scc_single_state_no_loop_constant():
    verdict = analyze_scc(validate(2, ["q"], []))
    assert verdict.kind == CONSTANT


def test_analyze_scc_zero_loop_non_terminating():
    verdict = analyze_scc(validate(1, ["q"], [("q", (0,), "q")]))
    assert verdict.kind == NON_TERMINATING


def test_analyze_scc_growth_loop_non_terminating():
    verdict = analyze_scc(validate(1, ["q"], [("q", (1,), "q")]))
    assert verdict.kind == NON_TERMINATING
    assert verdict.category.tag == "B"


def test_analyze_fig2c_all_linear():
    res = analyze(corpus_vass("fig2c"))
    verdicts = {s.states: s.verdict.kind for s in res.sccs}
    assert verdicts == {("q1",): LINEAR, ("q2",): LINEAR}
    assert res.is_linear
    assert res.overall() == "Linear"
    for s in res.sccs:
        sub = res.vass.restrict(s.states)
        assert not entry_failures(sub, s.verdict.certificate)


def test_analyze_fig2a_summary():
    res = analyze(corpus_vass("fig2a"))
    assert res.overall() == "Theta(n^2)"
    assert not res.is_linear


def test_analyze_fig5_category_d():
    res = analyze(corpus_vass("fig5"))
    assert res.overall() == "CategoryD"
    assert len(res.sccs) == 1 and res.sccs[0].verdict.kind == CATEGORY_D


def test_three_dim_cubic_nesting():
    # Two-level nesting: under the uniform normal the restriction splits into
    # a quadratic two-state gadget (whose connector cycle (0,1,-1) is
    # compensated by the third-state loop (0,-1,1)) plus that linear
    # compensator, so the degree recursion reaches 1 + max(2, 1) = 3.
    v = validate(3, ["c1", "c2", "d"], [
        ("c1", (-1, 1, 0), "c1"),
        ("c1", (0, 0, 0), "c2"),
        ("c2", (1, -1, 0), "c2"),
        ("c2", (0, 1, -1), "c1"),
        ("d", (0, -1, 1), "d"),
        ("c1", (0, 0, -1), "d"),
        ("d", (0, 0, -1), "c1"),
    ])
    verdict = analyze_scc(v)
    assert verdict.kind == POLYNOMIAL
    assert verdict.exponent == 3
    assert verdict.tree.depth() == 3


def test_polynomial_exponent_bounds():
    rng = random.Random(8181)
    for _ in range(120):
        v = random_strongly_connected_vass(rng, max_states=3, dimension=2)
        verdict = analyze_scc(v)
        if verdict.kind == POLYNOMIAL:
            assert 1 <= verdict.exponent <= v.dimension
        if verdict.kind == LINEAR:
            sub_failures = entry_failures(v, verdict.certificate)
            assert not sub_failures


def test_analyzer_deterministic():
    v = corpus_vass("fig2a")
    assert analyze_scc(v) == analyze_scc(v)
