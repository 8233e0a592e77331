from __future__ import annotations

import warnings

import pytest
from hypothesis import given

from conftest import pi_terms
from paramproc import hoterm as H
from paramproc import pi as P
from paramproc.config import ExploreConfig
from paramproc.correspondence import named_examples
from paramproc.encoder import encode
from paramproc.holts import (HO_TAU, HoLabel, InputSupplier, PayloadKind, classify_payload,
                             ho_is_divergent, ho_step, ho_weak_step)
from paramproc.pilts import TAU, ActionLabel, Divergence, candidate_names, is_divergent, step, weak_step
from paramproc.syntax import name_payload, parse_ho, parse_pi
from paramproc.triggers import TriggerKind, make_trigger


def labels(p):
    return {str(t.label) for t in step(p)}


# -- first order ------------------------------------------------------------------

def test_input_ranges_over_candidates():
    p = parse_pi("a(x).x<c>.0")
    cands = candidate_names(p)
    assert cands == ["a", "c", "n"]
    moves = {str(t.label): t.target for t in step(p)}
    assert set(moves) == {f"a({b})" for b in cands}
    assert P.alpha_eq(moves["a(n)"], parse_pi("n<c>.0"))


def test_more_fresh_inputs():
    p = parse_pi("a(x).0")
    assert labels(p) == {"a(a)", "a(n)"}
    assert len(step(p, ExploreConfig(fresh_inputs=3))) == 4


def test_tau_prefix_encoding():
    p = parse_pi("(nu a)(a.b<c>.0 | a<>)")
    (t,) = step(p)
    assert t.label == TAU
    assert P.congruent(t.target, parse_pi("b<c>.0"))


def test_free_and_bound_output():
    assert labels(parse_pi("a<b>.0")) == {"a<b>"}
    (t,) = step(parse_pi("(nu c)a<c>.c(x).0"))
    assert t.label.kind == "bout" and t.label.subject == "a"
    c = t.label.obj
    assert c not in {"a"} and P.alpha_eq(t.target, P.PIn(c, "x", P.NIL))


def test_restricted_subject_blocks():
    assert step(parse_pi("(nu a)a<b>.0")) == []
    assert step(parse_pi("(nu a)a(x).0")) == []


def test_close_rule():
    (t,) = [t for t in step(parse_pi("(nu c)a<c>.c<b>.0 | a(x).x(y).0")) if t.label.is_tau]
    assert P.congruent(t.target, parse_pi("(nu c)(c<b>.0 | c(y).0)"))


def test_replication_spawns_copy():
    p = parse_pi("!a(x).x<b>.0 | a<c>.0")
    taus = [t.target for t in step(p) if t.label.is_tau]
    assert len(taus) == 1
    assert P.congruent(taus[0], parse_pi("!a(x).x<b>.0 | c<b>.0"))


def test_section_example_taus():
    pq = named_examples()["PQ"]
    (t1,) = [t for t in step(pq) if t.label.is_tau]
    assert P.congruent(t1.target, parse_pi("(nu d)((nu c)d<c>.0 | d(y).0)"))
    (t2,) = step(t1.target)
    assert t2.label == TAU
    assert P.congruent(t2.target, parse_pi("(nu d)(nu c)(0 | 0)"))
    assert [str(t.label) for t in step(pq) if not t.label.is_tau] != []
    assert step(t2.target) == []


def test_weak_step():
    p = parse_pi("(nu t)(t.a<> | t<>)")
    out = weak_step(p, ActionLabel("bout", "a", "d"))
    assert not out.truncated
    assert any(P.congruent(q, P.NIL) for q in out)
    assert [P.struct_key(q) for q in weak_step(P.NIL, None)] == [P.struct_key(P.NIL)]


def test_weak_step_chain():
    r1 = named_examples()["R1"]
    after_a = weak_step(r1, ActionLabel("in", "a", "e"))
    ends = [q for s in after_a for q in weak_step(s, ActionLabel("bout", "c", "f"))]
    assert any(P.congruent(q, P.NIL) for q in ends)


def test_weak_step_truncation_is_flagged():
    p = parse_pi("a<b>.0 | !a(x).(a<x>.0 | a<x>.0)")
    out = weak_step(p, None, ExploreConfig(max_tau_depth=3, max_states=50))
    assert out.truncated


@pytest.mark.parametrize("text, verdict", [
    ("(nu a)(!a(x).a<x>.0 | a<b>.0)", Divergence.DIVERGENT),
    ("a<b>.0", Divergence.CONVERGENT),
    ("0", Divergence.CONVERGENT),
    ("(nu a)(a<b>.0 | a(x).0)", Divergence.CONVERGENT),
])
def test_divergence(text, verdict):
    assert is_divergent(parse_pi(text)) is verdict


def test_divergence_unknown_on_growth():
    p = parse_pi("a<a>.0 | !a(x).(x<a>.0 | x<a>.0)")
    assert is_divergent(p, ExploreConfig(max_tau_depth=6, max_states=200)) is Divergence.UNKNOWN


@given(pi_terms())
def test_transition_invariants(p):
    bound = P.bound_names(p)
    for t in step(p):
        assert t.target == P.canonical(t.target)
        if t.label.kind == "bout":
            # the extruded name is new to the environment and was private in p
            assert t.label.obj != t.label.subject
            assert t.label.obj not in P.free_names(p)
            assert bound
        if not t.label.is_tau:
            assert t.label.subject in P.free_names(p)


def test_nil_has_no_moves():
    assert step(P.NIL) == []
    assert ho_step(H.NIL) == []


# -- higher order -----------------------------------------------------------------

def test_output_axiom():
    t = parse_ho("a<b(X).X>.c<>.0")
    (lbl, u), = ho_step(t)
    assert lbl == HoLabel("out", "a", parse_ho("b(X).X"))
    assert u == parse_ho("c<>.0")


def test_extrusion_rule():
    (lbl, u), = ho_step(parse_ho("(nu d)a<lam(Z).Z@(d)>.0"))
    assert lbl.kind == "out" and len(lbl.extruded) == 1
    assert lbl.extruded[0] in H.free_names(lbl.payload)
    assert u == H.NIL


def test_unused_restriction_is_not_extruded():
    (lbl, _), = ho_step(parse_ho("(nu d)a<b<>.0>.d<>.0"))
    assert lbl.extruded == ()


def test_replicated_output():
    t = parse_ho("!a<b<>.0>.0")
    (lbl, u), = ho_step(t)
    assert lbl.subject == "a" and H.congruent(u, t)


def test_input_uses_supply():
    t = parse_ho("a(X).(X | X)")
    supply = InputSupplier((parse_ho("b<>.0"), H.NIL))
    got = {H.struct_key(u) for _, u in ho_step(t, supply)}
    assert got == {H.struct_key(parse_ho("b<>.0 | b<>.0")), H.struct_key(H.NIL)}


def test_ill_kinded_input_has_no_move():
    t = parse_ho("a(X).X@(b)")
    supply = InputSupplier((make_trigger(TriggerKind.NAME, "m"), make_trigger(TriggerKind.PLAIN, "m")))
    moves = ho_step(t, supply)
    assert [H.struct_key(u) for _, u in moves] == [H.struct_key(parse_ho("m<lam(Y).Y@(b)>.0"))]


def test_encoded_section_example():
    t = H.normalize(encode(named_examples()["PQ"]))
    states = [t]
    for _ in range(2):
        (lbl, u), = [m for m in ho_step(states[-1], InputSupplier(())) if m[0].is_tau]
        states.append(u)
    assert ho_step(states[-1], InputSupplier(())) == []
    want = encode(parse_pi("(nu d)(nu c)(0 | 0)"))
    assert H.congruent(states[-1], want)


def test_communication_extrudes():
    t = parse_ho("(nu c)a<lam(Z).Z@(c)>.0 | a(X).X@(lam(x).x<>.0)")
    (lbl, u), = [m for m in ho_step(t) if m[0].is_tau]
    assert H.congruent(u, parse_ho("(nu c)c<>.0"))


def test_weak_trigger_input_then_forward():
    r1 = encode(named_examples()["R1"])
    trig = make_trigger(TriggerKind.PROCESS, "m")
    after = ho_weak_step(r1, HoLabel("in", "a", trig))
    assert not after.truncated
    outs = [lbl for s in after for lbl, _ in ho_step(s, InputSupplier(())) if lbl.subject == "m"]
    assert outs


def _c_outputs(t, limit=3):
    """Most outputs on c along one internal run of ``t`` (no other inputs)."""
    none = InputSupplier(())
    best = 0
    for s in ho_weak_step(t, HO_TAU, none):
        for lbl, u in ho_step(s, none):
            if lbl.kind == "out" and lbl.subject == "c":
                best = max(best, 1 + (_c_outputs(u, limit - 1) if limit > 1 else 0))
    return best


def test_two_c_outputs_after_distinguishing_context():
    ctx = parse_ho("(nu a)(X | (nu m)(a<lam(Z).m<Z>.0>.0 | m(X1).(X1@(d) | X1@(d))))")
    ex = named_examples()
    assert _c_outputs(H.plug(ctx, "X", encode(ex["R2"]))) == 2
    assert _c_outputs(H.plug(ctx, "X", encode(ex["R1"]))) == 1


@pytest.mark.parametrize("text, kind", [
    ("lam(Z).Z@(d)", PayloadKind.PROCESS_ABSTRACTION),
    ("lam(x).x<b>", PayloadKind.NAME_ABSTRACTION),
    ("b<>.0", PayloadKind.PLAIN),
    ("(lam(X).X)@(b<>.0)", PayloadKind.PLAIN),
])
def test_classify_payload(text, kind):
    assert classify_payload(parse_ho(text)) is kind


def test_mixed_parameters_warn():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert classify_payload(parse_ho("lam(x,Y).Y@(x)")) is PayloadKind.NAME_ABSTRACTION
    assert caught


def test_ho_divergence():
    assert ho_is_divergent(encode(parse_pi("(nu a)(!a(x).a<x>.0 | a<b>.0)"))) is Divergence.DIVERGENT
    assert ho_is_divergent(parse_ho("a<>.0")) is Divergence.CONVERGENT


@given(pi_terms())
def test_step_commutes_with_normalize(p):
    t = encode(p)
    supply = InputSupplier((name_payload("a"), make_trigger(TriggerKind.PROCESS, "m")))
    raw = {(str(lbl), H.struct_key(u)) for lbl, u in ho_step(t, supply)}
    norm = {(str(lbl), H.struct_key(H.normalize(u))) for lbl, u in ho_step(H.normalize(t), supply)}
    assert raw == norm
