"""Acceptance criteria 1-8, one test each.

Each test runs the corresponding verification suite (the same code behind
``addchow verify``) and checks both the outcome and the runtime budget.
"""

from __future__ import annotations

import time
from math import factorial

import pytest

from addchow.cycles import boundary, totaro_c2
from addchow.field import var
from addchow.forms import reg
from addchow.perm import enumerate_shuffles, phi_domain, phi_map
from addchow.verify import RunConfig, curve_corpus, run_suite


def timed(name, cfg=RunConfig()):
    start = time.perf_counter()
    results = run_suite(name, cfg)
    return results, time.perf_counter() - start


def failures(results):
    return [f"{r.check_id}: {r.detail}" for r in results if not r.ok]


def ids(results, prefix):
    return [r for r in results if r.check_id.startswith(prefix)]


def test_criterion_1_shuffle_lemmas():
    results, elapsed = timed("shuffle", RunConfig(max_n=6))
    assert not failures(results)
    pairs = {(r, s) for r in range(7) for s in range(7) if r + s <= 6}
    for k in (1, 2, 3):
        got = {r.check_id for r in ids(results, f"Lemma multiple-shuffle {k},")}
        assert got == {f"Lemma multiple-shuffle {k}, (r,s)=({r},{s})" for r, s in pairs}
    assert len(ids(results, "phi")) == 3 * len(pairs)
    # cardinality of each phi image, recomputed here
    for kind in ("phi1", "phi2", "phi3"):
        for r, s in pairs:
            sig_t, tau_t = phi_domain(kind, r, s)
            image = {phi_map(kind, a, b, r, s) for a in enumerate_shuffles(sig_t) for b in enumerate_shuffles(tau_t)}
            assert len(image) == factorial(r + s + 1) // (factorial(r) * factorial(s))
    assert elapsed < 30


def test_criterion_2_delta_calculus():
    results, elapsed = timed("delta", RunConfig(max_n=5))
    assert not failures(results)
    assert len(ids(results, "Corollary delta-squared")) == 6  # n = 0..5
    assert len(ids(results, "Lemma delta-identity")) >= 5  # n <= 4 at least
    assert ids(results, "Lemma partial-delta") and ids(results, "Theorem delta-commutes")
    assert elapsed < 10


def test_criterion_3_totaro_boundary():
    start = time.perf_counter()
    a, b1, b2 = var("a"), var("b1"), var("b2")
    c2 = totaro_c2(a, b1, b2)
    want = {(1 / a, b1): 1, (1 / a, b2): 1, (1 / a, b1 * b2): -1}
    got = {(t.a[0], t.box[0]): k for t, k in boundary(c2)}
    assert got == want
    assert time.perf_counter() - start < 1


@pytest.mark.xfail(strict=True, reason=(
    "chain-level Leibniz fails for the shuffle product: shuffles that differ "
    "only in where a face slot sits among the other factor's slots give equal "
    "terms, so some faces are counted 2 or 3 times; concatenation Leibniz and "
    "graded commutativity hold"))
def test_criterion_4_leibniz():
    results, elapsed = timed("leibniz")
    assert all(r.ok for r in ids(results, "Proposition Leibniz (concatenation)"))
    assert all(r.ok for r in ids(results, "Remark graded-commutativity"))
    assert elapsed < 10
    assert not failures(results)


def test_criterion_5_derivation():
    results, elapsed = timed("derivation")
    assert not failures(results)
    cases = {r.check_id for r in ids(results, "Proposition Connes-derivation")}
    assert cases == {f"Proposition Connes-derivation, (r1,r2)=({p},{q})"
                     for p, q in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]}
    (sign,) = ids(results, "global sign epsilon,")
    assert sign.value in (1, -1)
    assert ids(results, "Lemma cycle-C2 boundary")[0].ok  # the (0,0) case rests on criterion 3
    assert elapsed < 60


def test_criterion_6_regulator():
    results, elapsed = timed("forms", RunConfig(max_n=4))
    assert not failures(results)
    assert len(ids(results, "reg kills boundaries")) == len(curve_corpus())
    assert len(ids(results, "Corollary (n+1)d")) == 5  # n = 0..4
    assert ids(results, "Lemma differential R-relation")
    (sign,) = ids(results, "global sign epsilon'")
    assert sign.value in (1, -1)
    assert elapsed < 10


def test_criterion_7_mixed_complexes():
    results, elapsed = timed("mixedcx", RunConfig(fixtures=100))
    assert not failures(results)
    assert len(ids(results, "Theorem Connes-periodicity, random fixture")) == 100
    assert ids(results, "Theorem Connes-periodicity, span")
    assert elapsed < 60


def test_criterion_8_out_of_reach_results_stated():
    # The identifications of ACH_0 and CCH_0 with forms quantify over all cycles
    # and are not computed.  Their computable shadow is checked instead:
    # boundaries map to zero under reg and delta-images map to exact forms.
    results = run_suite("forms", RunConfig(max_n=4))
    shadow = ids(results, "reg kills boundaries") + ids(results, "Corollary (n+1)d")
    assert shadow and all(r.ok for r in shadow)
    assert all(reg(boundary(c)).is_zero() for _, c in curve_corpus())
