import random
from fractions import Fraction

from vassbound import lp
from vassbound.core import scc_decompose, validate
from vassbound.increments import compute_inc
from vassbound.linear import (
    WlrCertificate,
    WlrEntry,
    check_linear,
    check_linear_scc,
    entry_failures,
    verify_wlr,
)

from helpers import corpus_vass, random_strongly_connected_vass


def independent_linear_test(vass) -> bool:
    """Direct encoding of the half-space characterization: a strictly
    positive normal putting every short-cycle effect strictly below zero.
    Scaling gives the normalization n >= 1, products <= -1."""
    inc = compute_inc(vass)
    d = vass.dimension
    cons = []
    for i in range(d):
        row = [Fraction(0)] * d
        row[i] = Fraction(1)
        cons.append(lp.constraint(row, lp.GEQ, 1))
    for v in inc.sorted_effects():
        cons.append(lp.constraint([Fraction(x) for x in v], lp.LEQ, -1))
    out = lp.solve(lp.feasibility([f"n{i}" for i in range(d)], cons))
    return out.is_feasible


def test_fig2c_components_are_linear():
    v = corpus_vass("fig2c")
    for comp in scc_decompose(v):
        entry = check_linear_scc(comp.vass, compute_inc(comp.vass))
        assert entry is not None
        assert not entry_failures(comp.vass, entry)


def test_fig2a_not_linear():
    v = corpus_vass("fig2a")
    assert check_linear_scc(v, compute_inc(v)) is None
    cert, blame = check_linear(v)
    assert cert is None
    assert set(blame) == {"q1", "q2"}


def test_single_decrementing_loop_linear():
    v = validate(1, ["q"], [("q", (-1,), "q")])
    entry = check_linear_scc(v)
    assert entry is not None
    assert entry.normal[0] > 0
    assert entry.epsilon > 0


def test_check_linear_fig2c_whole():
    v = corpus_vass("fig2c")
    cert, blame = check_linear(v)
    assert blame is None
    assert verify_wlr(v, cert)
    assert {e.states for e in cert.entries} == {("q1",), ("q2",)}


def test_acyclic_vass_vacuously_linear():
    v = validate(2, ["a", "b"], [("a", (1, 1), "b")])
    cert, blame = check_linear(v)
    assert blame is None
    assert cert.entries == ()
    assert verify_wlr(v, cert)


def test_verify_rejects_negated_normal_entry():
    v = corpus_vass("fig2c")
    cert, _ = check_linear(v)
    entry = cert.entries[0]
    bad_normal = (-entry.normal[0],) + entry.normal[1:]
    if bad_normal[0] == 0:
        bad_normal = (Fraction(-1),) + entry.normal[1:]
    bad = WlrCertificate(
        (WlrEntry(entry.states, bad_normal, entry.weights, entry.epsilon),)
        + cert.entries[1:]
    )
    assert not verify_wlr(v, bad)


def test_verify_rejects_zero_epsilon():
    v = corpus_vass("fig2c")
    cert, _ = check_linear(v)
    entry = cert.entries[0]
    bad = WlrCertificate(
        (WlrEntry(entry.states, entry.normal, entry.weights, Fraction(0)),)
        + cert.entries[1:]
    )
    assert not verify_wlr(v, bad)


def test_verify_requires_full_scc_coverage():
    v = corpus_vass("fig2c")
    cert, _ = check_linear(v)
    assert not verify_wlr(v, WlrCertificate(cert.entries[:1]))


def test_dichotomy_matches_independent_formulation():
    rng = random.Random(90125)
    agree_linear = 0
    agree_not = 0
    for _ in range(120):
        v = random_strongly_connected_vass(rng, max_states=3, dimension=2)
        entry = check_linear_scc(v, compute_inc(v))
        independent = independent_linear_test(v)
        assert (entry is not None) == independent
        if independent:
            agree_linear += 1
        else:
            agree_not += 1
    assert agree_linear > 10 and agree_not > 10


def test_certificates_pass_verification_in_bulk():
    rng = random.Random(555)
    for _ in range(60):
        v = random_strongly_connected_vass(rng, max_states=3, dimension=2)
        entry = check_linear_scc(v)
        if entry is not None:
            assert not entry_failures(v, entry)
