"""Trigger factorization of a term placed in a context.

``E[A]`` is rewritten so that ``E`` holds a trigger on a fresh name ``m`` and
``A`` sits in a replicated forwarder on ``m`` beside it. The trigger and the
forwarder are picked by the payload kind of ``A``; an outer abstraction prefix
of ``E`` is kept outside the new restriction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

from . import hoterm as H
from .equivalence import forwarder
from .holts import PayloadKind, classify_payload
from .names import is_process_var
from .syntax import parse_ho
from .triggers import TriggerKind, make_trigger


class FactorizationError(ValueError):
    pass


@dataclass(frozen=True)
class ContextHole:
    """A term with one distinguished process variable marking the hole."""

    hole: str
    body: H.HoTerm

    def __post_init__(self):
        if not is_process_var(self.hole):
            raise ValueError(f"hole {self.hole!r} must be a process variable")

    def fill(self, a: H.HoTerm) -> H.HoTerm:
        return H.subst_term(self.body, a, self.hole)

    @classmethod
    def parse(cls, text: str, hole: str = "X") -> "ContextHole":
        return cls(hole, parse_ho(text))


class ContextKind(enum.Enum):
    PLAIN = "plainContext"
    ABSTRACTION_PREFIXED = "abstractionPrefixed"


@dataclass(frozen=True)
class ContextShape:
    kind: ContextKind
    params: tuple[str, ...] = ()
    inner: H.HoTerm | None = None
    # the prefix as written, one parameter vector per abstraction
    layers: tuple[tuple[str, ...], ...] = ()


def classify_context(e: ContextHole) -> ContextShape:
    """Strip the maximal abstraction prefix of the beta-reduced context.

    Binders keep their written names so that clashes with the payload are
    reported against what the caller wrote.
    """
    t = H.beta(e.body)
    layers: list[tuple[str, ...]] = []
    while isinstance(t, H.HAbs):
        if e.hole in t.params:
            raise FactorizationError(f"prefix rebinds the hole {e.hole}")
        layers.append(t.params)
        t = t.body
    if not layers:
        return ContextShape(ContextKind.PLAIN, (), t)
    params = tuple(u for layer in layers for u in layer)
    return ContextShape(ContextKind.ABSTRACTION_PREFIXED, params, t, tuple(layers))


_TRIGGER = {
    PayloadKind.PLAIN: TriggerKind.PLAIN,
    PayloadKind.PROCESS_ABSTRACTION: TriggerKind.PROCESS,
    PayloadKind.NAME_ABSTRACTION: TriggerKind.NAME,
}


def clause(e: ContextHole, a: H.HoTerm) -> tuple[int, int]:
    """``(context shape, payload kind)`` as a pair of 1-based indices."""
    shape = 1 if classify_context(e).kind is ContextKind.PLAIN else 2
    return shape, list(_TRIGGER).index(classify_payload(a)) + 1


def factorize(e: ContextHole, a: H.HoTerm, m: str) -> H.HoTerm:
    if m in H.free_names(e.body) | H.free_names(a):
        raise FactorizationError(f"{m!r} is not fresh for the context and the payload")
    if H.free_process_vars(a):
        raise FactorizationError("the payload must be closed")
    shape = classify_context(e)
    trigger = make_trigger(_TRIGGER[classify_payload(a)], m)
    if clash := set(shape.params) & H.free_names(a):
        raise FactorizationError(f"payload mentions prefix parameters {sorted(clash)}")
    inner = H.subst_term(shape.inner, trigger, e.hole)
    out = H.HRes(m, H.HPar(inner, forwarder(a, m)))
    for layer in reversed(shape.layers):
        out = H.HAbs(layer, out)
    return out


# -- a family of test cases covering every clause ---------------------------------

_PAYLOADS = {
    PayloadKind.PLAIN: ["b<>.0", "b(X).X", "(nu c)(b<c>.0 | c<>.0)", "!b(x).x<>.0"],
    PayloadKind.PROCESS_ABSTRACTION: ["lam(Z).(Z | b<>.0)", "lam(Z).b<Z>.0", "lam(Z).b(Y).(Z | Y)"],
    PayloadKind.NAME_ABSTRACTION: ["lam(x).x<b>", "lam(x).(x<>.0 | b<x>.0)", "lam(x).x(X).X"],
}

# contexts in which a payload of the given kind is well-kinded; the hole is X
_CONTEXTS = {
    PayloadKind.PLAIN: ["a<>.X", "X | c<>.0", "a(Y).(X | Y)", "c<X>.0", "X | X"],
    PayloadKind.PROCESS_ABSTRACTION: ["X@(c<>.0)", "a(Y).X@(Y)", "c<X>.0 | a<>.0", "X@(lam(y).y<>.0)"],
    PayloadKind.NAME_ABSTRACTION: ["X@(d)", "a(y).X@(y)", "c<X>.0", "(nu e)(X@(e) | e(X1).X1)"],
}

_PREFIXES = ["", "lam(W).", "lam(w).", "lam(w).lam(W)."]


def _prefixed(prefix: str, ctx: str) -> str:
    if not prefix:
        return ctx
    body = ctx
    if "W" in prefix:
        body = f"({body} | W)"
    elif "w" in prefix:
        body = f"({body} | w<>.0)"
    return prefix + body


def factorization_corpus() -> Iterator[tuple[ContextHole, H.HoTerm]]:
    """Context/payload pairs over all six clauses, the ``A@(d)`` example first."""
    yield ContextHole.parse("X@(d)"), parse_ho("lam(x).x<b>")
    for kind, ctxs in _CONTEXTS.items():
        for ctx in ctxs:
            for pi, prefix in enumerate(_PREFIXES):
                for ai, a in enumerate(_PAYLOADS[kind]):
                    # keep the family moderate: every payload under the bare
                    # context, one payload per prefixed variant
                    if prefix and ai != pi % len(_PAYLOADS[kind]):
                        continue
                    yield ContextHole.parse(_prefixed(prefix, ctx)), parse_ho(a)
