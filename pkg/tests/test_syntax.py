from __future__ import annotations

import pytest
from hypothesis import given

from conftest import pi_terms
from paramproc import hoterm as H
from paramproc import pi as P
from paramproc.encoder import encode
from paramproc.syntax import ParseError, parse, parse_ho, parse_pi, show, show_ho, show_pi


def test_pi_grammar():
    p = parse_pi("!a(x).x<b>.0 | (nu c)c(y).0")
    assert p == P.PPar(P.PRep("a", "x", P.POut("x", "b", P.NIL)),
                       P.PRes("c", P.PIn("c", "y", P.NIL)))


def test_par_binds_loosest():
    p = parse_pi("a<b>.0 | b<a>.0 | 0")
    assert isinstance(p, P.PPar)
    assert parse_pi("(nu c)a<c>.0 | b<c>.0") == P.PPar(P.PRes("c", P.POut("a", "c", P.NIL)),
                                                       P.POut("b", "c", P.NIL))


def test_pi_sugar():
    # a.P receives into an unused variable; b<> sends a private name
    p = parse_pi("a.b<>")
    assert isinstance(p, P.PIn) and p.subj == "a"
    assert isinstance(p.body, P.PRes) and p.body.body == P.POut("b", p.body.name, P.NIL)
    assert p.var not in P.free_names(p.body)


def test_ho_grammar():
    t = parse_ho("a(X).X | a<lam(Z).Z@(b)>.0 | !c<0>.0 | lam(x,Y).Y@(x)")
    want = H.hpar(H.HIn("a", "X", H.HVar("X")),
                  H.HOut("a", H.HAbs(("Z",), H.HApp(H.HVar("Z"), ("b",))), H.NIL),
                  H.HRepOut("c", H.NIL, H.NIL),
                  H.HAbs(("x", "Y"), H.HApp(H.HVar("Y"), ("x",))))
    assert H.alpha_eq(t, want)


def test_ho_name_sugar_matches_encoding():
    assert parse_ho("a<b>.0") == encode(parse_pi("a<b>.0"))
    assert H.alpha_eq(parse_ho("a(x).x<c>.0"), encode(parse_pi("a(x).x<c>.0")))


def test_closed_terms():
    with pytest.raises(ParseError):
        parse_ho("a<X>.0", closed=True)
    assert parse_ho("a(X).X", closed=True)


@pytest.mark.parametrize("text, column", [
    ("a<b", 4),
    ("a(x).", 6),
    ("a<b>.0 |", 9),
    ("(nu c c<>", 8),
    ("a<b>.0 $", 8),
])
def test_parse_error_positions(text, column):
    with pytest.raises(ParseError, match=f"column {column}"):
        parse_pi(text)


def test_pi_rejects_higher_order_constructs():
    for text in ["a(X).0", "a<lam(x).0>.0", "X", "!a<b>.0"]:
        with pytest.raises(ParseError):
            parse_pi(text)


def test_parse_dispatch():
    assert parse("0", "pi") == P.NIL
    assert parse("0", "hopi") == H.NIL
    with pytest.raises(ValueError):
        parse("0", "lambda")


def test_show_is_stable():
    text = "(nu b)(a(x).(nu d)b<d>.0 | b(x1).(nu d1)c<d1>.0)"
    assert show_pi(parse_pi(text)) == text
    assert show(parse_pi(text)) == text
    assert show_ho(parse_ho("lam(x).x<b>")) == "lam(x).x<lam(Z).Z@(b)>.0"


@given(pi_terms())
def test_round_trip_pi(p):
    assert P.alpha_eq(parse_pi(show_pi(p)), p)


@given(pi_terms())
def test_round_trip_ho(p):
    t = encode(p)
    assert H.alpha_eq(parse_ho(show_ho(t)), t)
    n = H.normalize(t)
    assert H.alpha_eq(parse_ho(show_ho(n)), n)
