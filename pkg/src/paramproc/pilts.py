"""Early labelled transition semantics for the pi-calculus."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from . import explore
from . import pi as P
from .config import DEFAULT, ExploreConfig
from .names import fresh_name, fresh_names


@dataclass(frozen=True)
class ActionLabel:
    """``tau``, input ``a(b)``, free output ``a<b>`` or bound output ``a<(b)>``."""

    kind: str
    subject: str | None = None
    obj: str | None = None

    def __post_init__(self):
        if self.kind not in ("tau", "in", "out", "bout"):
            raise ValueError(f"unknown action kind {self.kind!r}")
        if (self.kind == "tau") != (self.subject is None):
            raise ValueError("only tau has no subject")

    @property
    def is_tau(self) -> bool:
        return self.kind == "tau"

    @property
    def is_output(self) -> bool:
        return self.kind in ("out", "bout")

    def __str__(self) -> str:
        match self.kind:
            case "tau":
                return "tau"
            case "in":
                return f"{self.subject}({self.obj})"
            case "out":
                return f"{self.subject}<{self.obj}>"
            case _:
                return f"{self.subject}<({self.obj})>"


TAU = ActionLabel("tau")


@dataclass(frozen=True)
class Transition:
    source: P.PiProcess
    label: ActionLabel
    target: P.PiProcess


# A raw move is one of
#   ("tau", target)
#   ("in", subject, cont)            cont(name) -> target
#   ("out", subject, obj, bound, target)
# computed on a term whose binders are all distinct from each other and from
# every name that can be received, so no renaming is needed on the way up.

def _moves(p: P.PiProcess) -> list[tuple]:
    match p:
        case P.PNil():
            return []
        case P.PIn(a, x, body):
            return [("in", a, lambda b, body=body, x=x: P.subst_name(body, b, x))]
        case P.PRep(a, x, body):
            return [("in", a, lambda b, body=body, x=x, p=p: P.PPar(P.subst_name(body, b, x), p))]
        case P.POut(a, b, body):
            return [("out", a, b, False, body)]
        case P.PRes(c, body):
            out = []
            for m in _moves(body):
                match m:
                    case ("tau", t):
                        out.append(("tau", P.PRes(c, t)))
                    case ("in", a, cont) if a != c:
                        out.append(("in", a, lambda b, cont=cont: P.PRes(c, cont(b))))
                    case ("out", a, b, bound, t) if a != c:
                        if b == c:
                            out.append(("out", a, c, True, t))
                        else:
                            out.append(("out", a, b, bound, P.PRes(c, t)))
            return out
        case P.PPar(l, r):
            ml, mr = _moves(l), _moves(r)
            out = []
            for m in ml:
                out.append(_lift(m, lambda t: P.PPar(t, r)))
            for m in mr:
                out.append(_lift(m, lambda t: P.PPar(l, t)))
            for left, right, flip in ((ml, mr, False), (mr, ml, True)):
                for o in left:
                    if o[0] != "out":
                        continue
                    _, a, b, bound, t1 = o
                    for i in right:
                        if i[0] != "in" or i[1] != a:
                            continue
                        t2 = i[2](b)
                        body = P.PPar(t2, t1) if flip else P.PPar(t1, t2)
                        out.append(("tau", P.PRes(b, body) if bound else body))
            return out
    raise TypeError(f"not a pi process: {p!r}")


def _lift(m, wrap):
    match m:
        case ("tau", t):
            return ("tau", wrap(t))
        case ("in", a, cont):
            return ("in", a, lambda b: wrap(cont(b)))
        case ("out", a, b, bound, t):
            return ("out", a, b, bound, wrap(t))
    raise AssertionError(m)


def candidate_names(p: P.PiProcess, extra: Iterable[str] = (), k: int = 1) -> list[str]:
    """Input objects tried for ``p``: its free names, ``extra``, and ``k`` fresh names."""
    known = set(P.free_names(p)) | set(extra)
    return sorted(known) + fresh_names(known, k, "n")


def extrusion_name(p: P.PiProcess, extra: Iterable[str] = ()) -> str:
    """The name every bound output of ``p`` is reported with."""
    return fresh_name(set(P.free_names(p)) | set(extra), "e")


@lru_cache(maxsize=100_000)
def _step(p: P.PiProcess, extra: frozenset[str], k: int) -> tuple[tuple[ActionLabel, P.PiProcess], ...]:
    cands = candidate_names(p, extra, k)
    ext = extrusion_name(p, extra)
    work = P._uniquify(p, frozenset(cands) | {ext})
    seen: dict[tuple, tuple] = {}

    def add(label, target):
        target = P.canonical(target)
        seen.setdefault((label, P.struct_key(target)), (label, target))

    for m in _moves(work):
        match m:
            case ("tau", t):
                add(TAU, t)
            case ("in", a, cont):
                for b in cands:
                    add(ActionLabel("in", a, b), cont(b))
            case ("out", a, b, False, t):
                add(ActionLabel("out", a, b), t)
            case ("out", a, c, True, t):
                add(ActionLabel("bout", a, ext), P.subst_name(t, ext, c))
    return tuple(seen.values())


def step(p: P.PiProcess, cfg: ExploreConfig = DEFAULT, extra: Iterable[str] = ()) -> list[Transition]:
    """Every one-step transition of ``p``.

    Input objects range over :func:`candidate_names`; bound outputs always carry
    :func:`extrusion_name`, so two processes checked against the same ``extra``
    names agree on it.
    """
    return [Transition(p, lbl, t) for lbl, t in _step(p, frozenset(extra), cfg.fresh_inputs)]


@dataclass(frozen=True)
class PiSemantics:
    """Adapter used by the generic explorers."""

    cfg: ExploreConfig = DEFAULT
    extra: frozenset[str] = frozenset()

    def key(self, p):
        return P.struct_key(p)

    def moves(self, p):
        return _step(p, self.extra, self.cfg.fresh_inputs)


@dataclass
class WeakResult:
    targets: list[P.PiProcess]
    truncated: bool

    def __iter__(self):
        return iter(self.targets)

    def __len__(self):
        return len(self.targets)


def weak_step(p: P.PiProcess, label: ActionLabel | None, cfg: ExploreConfig = DEFAULT,
              extra: Iterable[str] = ()) -> WeakResult:
    """Targets of ``p ==label==> q``; ``None`` or ``tau`` may take zero steps.

    Names are supplied relative to ``fn(p) | extra`` throughout the search, so an
    input label may carry any name and a bound output is reported with
    ``extrusion_name(p, extra)`` and then renamed to the requested object.
    """
    extra = set(extra) | P.free_names(p)
    if label is not None and label.kind == "in":
        extra.add(label.obj)
    sem = PiSemantics(cfg, frozenset(extra))
    if label is not None and label.kind == "bout":
        ext = extrusion_name(p, extra)
        r = explore.weak_reach(sem, p, lambda lbl: lbl.kind == "bout" and lbl.subject == label.subject,
                               cfg.max_tau_depth, cfg.max_states)
        return WeakResult([P.canonical(P.subst_name(q, label.obj, ext)) for q in r], r.truncated)
    match_fn = None if label is None or label.is_tau else (lambda lbl: lbl == label)
    r = explore.weak_reach(sem, p, match_fn, cfg.max_tau_depth, cfg.max_states)
    return WeakResult(list(r), r.truncated)


class Divergence(enum.Enum):
    DIVERGENT = "divergent"
    CONVERGENT = "convergent"
    UNKNOWN = "unknown"


def tau_graph(p: P.PiProcess, cfg: ExploreConfig = DEFAULT):
    return explore.tau_graph(PiSemantics(cfg), p, cfg.max_states, cfg.max_tau_depth)


def is_divergent(p: P.PiProcess, cfg: ExploreConfig = DEFAULT) -> Divergence:
    edges, truncated = tau_graph(p, cfg)
    if explore.has_cycle(edges):
        return Divergence.DIVERGENT
    if truncated:
        return Divergence.UNKNOWN
    return Divergence.CONVERGENT
