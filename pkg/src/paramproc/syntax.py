"""Concrete text syntax for both calculi.

pi::

    0   a(x).P   a<b>.P   (nu c)P   P | Q   !a(x).P   ( P )

Sugar: a bare ``a`` or ``a.P`` is an input whose variable is unused, and
``a<>.P`` is ``(nu d)a<d>.P`` with ``d`` fresh. A missing continuation is ``0``.

higher-order, in addition::

    X   a(X).T   a<T>.T'   !a<T>.T'   lam(U1,...,Un).T   T@(K1,...,Kn)

Here ``a.T`` is ``a(X).T`` with ``X`` unused and ``a<>.T`` is ``a<0>.T``. The
pi-style prefixes remain available as sugar for their encodings: ``a<b>.T``
(``b`` a bare name) means ``a<lam(Z).Z@(b)>.T`` and ``a(x).T`` (``x`` a name
variable) means ``a(Y).Y@(lam(x).T)``.

``|`` has the lowest precedence; prefixes, restriction and ``lam`` take a
single unary term as body, so ``a(x).P | Q`` is ``(a(x).P) | Q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import hoterm as H
from . import pi as P
from .names import fresh_name, is_process_var

_TOKEN = re.compile(r"\s*(?:(?P<id>[A-Za-z_][A-Za-z0-9_']*)|(?P<zero>0)|(?P<sym>[()<>.|!,@])|(?P<bad>\S))")
KEYWORDS = {"nu", "lam"}


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.pos = pos


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos and m.lastgroup is None:
            break
        if m.lastgroup is None:
            break
        if m.lastgroup == "bad":
            raise ParseError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, higher_order: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.ho = higher_order
        self.fresh_taken = {t.text for t in self.toks if t.kind == "id"}

    # token helpers
    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind in ("sym", "zero") and t.text == text

    def take(self, text: str | None = None) -> _Tok:
        t = self.peek()
        if text is not None and not (t.kind in ("sym", "zero") and t.text == text):
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def ident(self, what: str = "identifier") -> str:
        t = self.peek()
        if t.kind != "id" or t.text in KEYWORDS:
            self.fail(f"expected {what}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    def name(self) -> str:
        n = self.ident("name")
        if is_process_var(n):
            self.fail(f"expected a name, found process variable {n!r}", back=1)
        return n

    def fail(self, msg: str, back: int = 0):
        raise ParseError(msg, self.text, self.toks[max(self.i - back, 0)].pos)

    def fresh(self, hint: str) -> str:
        n = fresh_name(self.fresh_taken, hint)
        self.fresh_taken.add(n)
        return n

    # grammar
    def parse(self):
        t = self.par()
        if self.peek().kind != "eof":
            self.fail(f"unexpected {self.peek().text!r}")
        return t

    def par(self):
        items = [self.unary()]
        while self.at("|"):
            self.take("|")
            items.append(self.unary())
        out = items[-1]
        for t in reversed(items[:-1]):
            out = H.HPar(t, out) if self.ho else P.PPar(t, out)
        return out

    def cont(self):
        if self.at("."):
            self.take(".")
            return self.unary()
        return H.NIL if self.ho else P.NIL

    def unary(self):
        if self.at("!"):
            self.take("!")
            pos = self.i
            t = self.prefix(replicated=True)
            if t is None:
                self.i = pos
                self.fail("replication must guard an input" + (" or output" if self.ho else ""))
            return t
        if self.at("(") and self.peek(1).kind == "id" and self.peek(1).text == "nu":
            self.take("(")
            self.i += 1
            names = [self.name()]
            while not self.at(")"):
                if self.at(","):
                    self.take(",")
                names.append(self.name())
            self.take(")")
            body = self.unary()
            return H.hres(names, body) if self.ho else P.res(names, body)
        t = self.peek()
        if t.kind == "id" and t.text == "lam":
            if not self.ho:
                self.fail("abstraction is not part of the pi-calculus")
            self.i += 1
            self.take("(")
            params = [self.ident("parameter")]
            while self.at(","):
                self.take(",")
                params.append(self.ident("parameter"))
            self.take(")")
            self.take(".")
            try:
                return H.HAbs(tuple(params), self.unary())
            except ValueError as e:
                self.fail(str(e))
        if t.kind == "id" and not is_process_var(t.text):
            return self.prefix(replicated=False)
        return self.postfix()

    def prefix(self, replicated: bool):
        t = self.peek()
        if t.kind != "id" or is_process_var(t.text) or t.text in KEYWORDS:
            return None
        subj = self.name()
        if self.at("("):
            self.take("(")
            var = self.ident("variable")
            self.take(")")
            body = self.cont()
            return self._input(subj, var, body, replicated)
        if self.at("<"):
            self.take("<")
            if self.at(">"):
                self.take(">")
                body = self.cont()
                if self.ho:
                    return (H.HRepOut if replicated else H.HOut)(subj, H.NIL, body)
                if replicated:
                    self.fail("replicated output is not part of the pi-calculus")
                d = self.fresh("d")
                return P.PRes(d, P.POut(subj, d, body))
            if self.peek().kind == "id" and not is_process_var(self.peek().text) \
                    and self.peek().text not in KEYWORDS and self.at(">", 1):
                obj = self.name()
                self.take(">")
                body = self.cont()
                if not self.ho:
                    if replicated:
                        self.fail("replicated output is not part of the pi-calculus")
                    return P.POut(subj, obj, body)
                return (H.HRepOut if replicated else H.HOut)(subj, name_payload(obj), body)
            if not self.ho:
                if self.peek().kind == "id" and not is_process_var(self.peek().text):
                    self.name()
                    self.take(">")
                self.fail("pi output objects must be names")
            payload = self.par()
            self.take(">")
            body = self.cont()
            return (H.HRepOut if replicated else H.HOut)(subj, payload, body)
        # CCS-style input a.P
        body = self.cont()
        if self.ho:
            var = fresh_name(H.free_process_vars(body) | self.fresh_taken, "X")
            self.fresh_taken.add(var)
            return (H.HRepIn if replicated else H.HIn)(subj, var, body)
        var = self.fresh("x")
        return (P.PRep if replicated else P.PIn)(subj, var, body)

    def _input(self, subj, var, body, replicated):
        if not self.ho:
            if is_process_var(var):
                self.fail(f"pi inputs bind name variables, not {var!r}", back=2)
            return (P.PRep if replicated else P.PIn)(subj, var, body)
        if is_process_var(var):
            return (H.HRepIn if replicated else H.HIn)(subj, var, body)
        y = fresh_name(H.free_process_vars(body), "Y")
        return (H.HRepIn if replicated else H.HIn)(subj, y, H.HApp(H.HVar(y), (H.HAbs((var,), body),)))

    def postfix(self):
        t = self.atom()
        while self.at("@"):
            self.take("@")
            self.take("(")
            args = [self.arg()]
            while self.at(","):
                self.take(",")
                args.append(self.arg())
            self.take(")")
            t = H.HApp(t, tuple(args))
        return t

    def arg(self):
        t = self.peek()
        if t.kind == "id" and not is_process_var(t.text) and t.text not in KEYWORDS \
                and (self.at(",", 1) or self.at(")", 1)):
            self.i += 1
            return t.text
        return self.par()

    def atom(self):
        t = self.peek()
        if t.kind == "zero":
            self.i += 1
            return H.NIL if self.ho else P.NIL
        if t.kind == "id" and is_process_var(t.text):
            if not self.ho:
                self.fail("process variables are not part of the pi-calculus")
            self.i += 1
            return H.HVar(t.text)
        if self.at("("):
            self.take("(")
            inner = self.par()
            self.take(")")
            if self.at("@") and not self.ho:
                self.fail("application is not part of the pi-calculus")
            return inner
        self.fail(f"unexpected {t.text or 'end of input'!r}")


def name_payload(n: str) -> H.HoTerm:
    """``lam(Z).Z@(n)``: the process that represents the name ``n``."""
    return H.HAbs(("Z",), H.HApp(H.HVar("Z"), (n,)))


def parse_pi(text: str) -> P.PiProcess:
    return _Parser(text, higher_order=False).parse()


def parse_ho(text: str, closed: bool = False) -> H.HoTerm:
    t = _Parser(text, higher_order=True).parse()
    if closed and H.free_process_vars(t):
        raise ParseError(f"free process variable(s) {sorted(H.free_process_vars(t))} in closed term",
                         text, 0)
    return t


def parse(text: str, calculus: str = "pi"):
    if calculus == "pi":
        return parse_pi(text)
    if calculus in ("ho", "hopi"):
        return parse_ho(text)
    raise ValueError(f"unknown calculus {calculus!r}")


# -- printing ---------------------------------------------------------------------

def show_pi(p: P.PiProcess) -> str:
    return _pi(p, top=True)


def _pi(p, top=False):
    match p:
        case P.PNil():
            return "0"
        case P.PIn(a, x, body):
            return f"{a}({x}).{_pi(body)}"
        case P.PRep(a, x, body):
            return f"!{a}({x}).{_pi(body)}"
        case P.POut(a, b, body):
            return f"{a}<{b}>.{_pi(body)}"
        case P.PRes(c, body):
            return f"(nu {c}){_pi(body)}"
        case P.PPar():
            # right-nested like the parser; a parallel left operand keeps its parentheses
            items = []
            while isinstance(p, P.PPar):
                items.append(p.left)
                p = p.right
            items.append(p)
            s = " | ".join(_pi(q) for q in items)
            return s if top else f"({s})"
    raise TypeError(p)


def show_ho(t: H.HoTerm) -> str:
    return _ho(t, top=True)


def _ho(t, top=False):
    match t:
        case H.HNil():
            return "0"
        case H.HVar(x):
            return x
        case H.HIn(a, x, body):
            return f"{a}({x}).{_ho(body)}"
        case H.HRepIn(a, x, body):
            return f"!{a}({x}).{_ho(body)}"
        case H.HOut(a, pay, body):
            return f"{a}<{_ho(pay, top=True)}>.{_ho(body)}"
        case H.HRepOut(a, pay, body):
            return f"!{a}<{_ho(pay, top=True)}>.{_ho(body)}"
        case H.HRes(c, body):
            return f"(nu {c}){_ho(body)}"
        case H.HAbs(params, body):
            return f"lam({','.join(params)}).{_ho(body)}"
        case H.HApp(f, args):
            head = _ho(f) if isinstance(f, (H.HVar, H.HApp, H.HNil)) else f"({_ho(f, top=True)})"
            parts = [a if isinstance(a, str) else _ho(a, top=True) for a in args]
            return f"{head}@({', '.join(parts)})"
        case H.HPar():
            items = []
            while isinstance(t, H.HPar):
                items.append(t.left)
                t = t.right
            items.append(t)
            s = " | ".join(_ho(q) for q in items)
            return s if top else f"({s})"
    raise TypeError(t)


def show(t) -> str:
    return show_ho(t) if isinstance(t, H.HoTerm.__args__) else show_pi(t)
