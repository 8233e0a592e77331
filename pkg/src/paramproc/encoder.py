"""Translation of pi-calculus processes into the higher-order calculus.

Inputs become higher-order inputs that apply the received term to the
continuation abstracted on the input variable; outputs send the abstraction
``lam(Z).Z@(n)`` that represents the name ``n``. Every other operator is
translated homomorphically.
"""

from __future__ import annotations

from functools import lru_cache

from . import hoterm as H
from . import pi as P
from .syntax import name_payload

INPUT_VAR = "Y"


@lru_cache(maxsize=100_000)
def encode(p: P.PiProcess) -> H.HoTerm:
    match p:
        case P.PNil():
            return H.NIL
        case P.PIn(a, x, body):
            return H.HIn(a, INPUT_VAR, _apply_input(x, encode(body)))
        case P.PRep(a, x, body):
            return H.HRepIn(a, INPUT_VAR, _apply_input(x, encode(body)))
        case P.POut(a, b, body):
            return H.HOut(a, name_payload(b), encode(body))
        case P.PRes(c, body):
            return H.HRes(c, encode(body))
        case P.PPar(l, r):
            return H.HPar(encode(l), encode(r))
    raise TypeError(f"not a pi process: {p!r}")


def _apply_input(x: str, body: H.HoTerm) -> H.HoTerm:
    return H.HApp(H.HVar(INPUT_VAR), (H.HAbs((x,), body),))


def check_compositionality(p: P.PiProcess) -> bool:
    """Check, node by node, that the translation of every operator is its fixed
    context filled with the translations of the operands."""
    enc = encode(p)
    match p:
        case P.PNil():
            return enc == H.NIL
        case P.PPar(l, r):
            ok = enc == H.HPar(encode(l), encode(r))
            return ok and check_compositionality(l) and check_compositionality(r)
        case P.PRes(c, body):
            return enc == H.HRes(c, encode(body)) and check_compositionality(body)
        case P.POut(a, b, body):
            return enc == H.HOut(a, name_payload(b), encode(body)) and check_compositionality(body)
        case P.PIn(a, x, body):
            return enc == H.HIn(a, INPUT_VAR, _apply_input(x, encode(body))) and check_compositionality(body)
        case P.PRep(a, x, body):
            inner = encode(P.PIn(a, x, body))
            return (isinstance(enc, H.HRepIn) and H.HIn(enc.subj, enc.var, enc.body) == inner
                    and check_compositionality(body))
    raise TypeError(p)
