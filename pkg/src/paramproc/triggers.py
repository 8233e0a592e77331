"""The three trigger processes used as probing inputs."""

from __future__ import annotations

import enum

from . import hoterm as H


class TriggerKind(enum.Enum):
    PLAIN = "tr"
    PROCESS = "trD"
    NAME = "trd"


def make_trigger(kind: TriggerKind, m: str) -> H.HoTerm:
    """``m<0>.0``, ``lam(Z).m<Z>.0`` or ``lam(z).m<lam(Y).Y@(z)>.0``."""
    match kind:
        case TriggerKind.PLAIN:
            return H.HOut(m, H.NIL, H.NIL)
        case TriggerKind.PROCESS:
            return H.HAbs(("Z",), H.HOut(m, H.HVar("Z"), H.NIL))
        case TriggerKind.NAME:
            return H.HAbs(("z",), H.HOut(m, H.HAbs(("Y",), H.HApp(H.HVar("Y"), ("z",))), H.NIL))
    raise ValueError(kind)
