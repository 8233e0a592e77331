from __future__ import annotations

from hypothesis import given

from conftest import pi_terms
from paramproc import hoterm as H
from paramproc import pi as P
from paramproc.correspondence import named_examples
from paramproc.encoder import check_compositionality, encode
from paramproc.syntax import parse_ho, parse_pi


def test_output_clause():
    assert encode(parse_pi("a<b>.0")) == H.HOut("a", H.HAbs(("Z",), H.HApp(H.HVar("Z"), ("b",))), H.NIL)


def test_input_clause():
    t = encode(parse_pi("a(x).x<c>.0"))
    assert isinstance(t, H.HIn) and t.var == "Y"
    assert t.body == H.HApp(H.HVar("Y"), (H.HAbs(("x",), encode(parse_pi("x<c>.0"))),))


def test_homomorphic_parts():
    assert encode(P.NIL) == H.NIL
    assert encode(parse_pi("(nu c)(0 | 0)")) == H.HRes("c", H.HPar(H.NIL, H.NIL))
    rep = encode(parse_pi("!a(x).0"))
    assert isinstance(rep, H.HRepIn) and H.HIn(rep.subj, rep.var, rep.body) == encode(parse_pi("a(x).0"))


def test_counterexample_translation():
    want = parse_ho("(nu b)(a(Y).Y@(lam(x).(nu d)b<lam(Z).Z@(d)>.0)"
                    " | b(Y).Y@(lam(x).(nu d)c<lam(Z).Z@(d)>.0))")
    assert H.alpha_eq(encode(named_examples()["R1"]), want)


def test_compositionality_examples():
    for text in ["a<b>.0 | b(x).0", "(nu c)c<a>.0", "!a(x).x<b>.0", "0"]:
        assert check_compositionality(parse_pi(text))


@given(pi_terms())
def test_compositional(p):
    assert check_compositionality(p)


@given(pi_terms())
def test_name_preservation(p):
    t = encode(p)
    assert H.free_names(t) == P.free_names(p)
    assert H.is_closed(t)
    assert H.free_names(H.normalize(t)) == P.free_names(p)


@given(pi_terms())
def test_no_replicated_outputs(p):
    def walk(t):
        assert not isinstance(t, H.HRepOut)
        for v in vars(t).values():
            if isinstance(v, H.HoTerm.__args__):
                walk(v)
            elif isinstance(v, tuple):
                for a in v:
                    if isinstance(a, H.HoTerm.__args__):
                        walk(a)
    walk(encode(p))
