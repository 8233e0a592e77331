"""Labelled transition semantics for the higher-order calculus.

Transitions are derived from the application-free form of a term and targets
are normalized, which closes the relation under structural congruence.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from . import explore
from . import hoterm as H
from .config import DEFAULT, ExploreConfig
from .names import fresh_name, fresh_names, is_process_var
from .pilts import Divergence
from .syntax import name_payload
from .triggers import TriggerKind, make_trigger


class PayloadKind(enum.Enum):
    PLAIN = "plain"
    PROCESS_ABSTRACTION = "processAbstraction"
    NAME_ABSTRACTION = "nameAbstraction"


def classify_payload(a: H.HoTerm) -> PayloadKind:
    a = H.normalize(a)
    if not isinstance(a, H.HAbs):
        return PayloadKind.PLAIN
    kinds = {is_process_var(u) for u in a.params}
    if len(kinds) > 1:
        warnings.warn(f"abstraction mixes name and process parameters: {a.params}", stacklevel=2)
    if is_process_var(a.params[0]):
        return PayloadKind.PROCESS_ABSTRACTION
    return PayloadKind.NAME_ABSTRACTION


@dataclass(frozen=True)
class HoLabel:
    """``tau``, input ``a(A)``, or output ``(c1..cn)a<A>`` extruding ``c1..cn``."""

    kind: str
    subject: str | None = None
    payload: H.HoTerm | None = None
    extruded: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("tau", "in", "out"):
            raise ValueError(f"unknown action kind {self.kind!r}")
        if self.kind != "out" and self.extruded:
            raise ValueError("only outputs extrude names")

    @property
    def is_tau(self) -> bool:
        return self.kind == "tau"

    def __str__(self) -> str:
        from .syntax import show_ho

        match self.kind:
            case "tau":
                return "tau"
            case "in":
                return f"{self.subject}({show_ho(self.payload)})"
        ext = f"(nu {' '.join(self.extruded)})" if self.extruded else ""
        return f"{ext}{self.subject}<{show_ho(self.payload)}>"


HO_TAU = HoLabel("tau")


@dataclass(frozen=True)
class InputSupplier:
    """The finite set of terms fed to input transitions."""

    terms: tuple[H.HoTerm, ...]

    def names(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for t in self.terms:
            out |= H.free_names(t)
        return out


def default_supply(t: H.HoTerm, cfg: ExploreConfig = DEFAULT, extra: Iterable[str] = ()) -> InputSupplier:
    """Triggers on a fresh name, name payloads for the candidate names, and ``0``."""
    known = set(H.free_names(t)) | set(extra)
    m = fresh_name(known, "m")
    cands = sorted(known) + fresh_names(known | {m}, cfg.fresh_inputs, "n")
    terms = [make_trigger(k, m) for k in TriggerKind]
    terms += [name_payload(b) for b in cands]
    terms.append(H.NIL)
    return InputSupplier(tuple(terms))


# Raw moves, computed on a beta-normal term whose binders are apart from every
# name of the supply:
#   ("tau", target) | ("in", subject, cont) | ("out", subject, extruded, payload, target)

def _moves(t: H.HoTerm) -> list[tuple]:
    match t:
        case H.HNil() | H.HVar() | H.HAbs() | H.HApp():
            return []
        case H.HIn(a, x, body):
            return [("in", a, lambda A, body=body, x=x: H.subst_term(body, A, x))]
        case H.HRepIn(a, x, body):
            return [("in", a, lambda A, body=body, x=x, t=t: H.HPar(H.subst_term(body, A, x), t))]
        case H.HOut(a, pay, body):
            return [("out", a, (), pay, body)]
        case H.HRepOut(a, pay, body):
            return [("out", a, (), pay, H.HPar(body, t))]
        case H.HRes(c, body):
            out = []
            for m in _moves(body):
                match m:
                    case ("tau", u):
                        out.append(("tau", H.HRes(c, u)))
                    case ("in", a, cont) if a != c:
                        out.append(("in", a, lambda A, cont=cont: H.HRes(c, cont(A))))
                    case ("out", a, ext, pay, u) if a != c:
                        if c in H.free_names(pay):
                            out.append(("out", a, (c,) + ext, pay, u))
                        else:
                            out.append(("out", a, ext, pay, H.HRes(c, u)))
            return out
        case H.HPar(l, r):
            ml, mr = _moves(l), _moves(r)
            out = [_lift(m, lambda u: H.HPar(u, r)) for m in ml]
            out += [_lift(m, lambda u: H.HPar(l, u)) for m in mr]
            for left, right, flip in ((ml, mr, False), (mr, ml, True)):
                for o in left:
                    if o[0] != "out":
                        continue
                    _, a, ext, pay, t1 = o
                    for i in right:
                        if i[0] != "in" or i[1] != a:
                            continue
                        t2 = i[2](pay)
                        out.append(("tau", H.hres(ext, H.HPar(t2, t1) if flip else H.HPar(t1, t2))))
            return out
    raise TypeError(f"not a higher-order term: {t!r}")


def _lift(m, wrap):
    match m:
        case ("tau", u):
            return ("tau", wrap(u))
        case ("in", a, cont):
            return ("in", a, lambda A: wrap(cont(A)))
        case ("out", a, ext, pay, u):
            return ("out", a, ext, pay, wrap(u))
    raise AssertionError(m)


def _name_order(t: H.HoTerm) -> list[str]:
    """Free names of ``t`` in order of first occurrence."""
    seen: list[str] = []
    fn = H.free_names(t)

    def go(q):
        for n in _occurrences(q):
            if n in fn and n not in seen:
                seen.append(n)

    go(t)
    return seen


def _occurrences(t):
    match t:
        case H.HNil() | H.HVar():
            return
        case H.HIn(a, _, b) | H.HRepIn(a, _, b):
            yield a
            yield from _occurrences(b)
        case H.HOut(a, p, b) | H.HRepOut(a, p, b):
            yield a
            yield from _occurrences(p)
            yield from _occurrences(b)
        case H.HPar(l, r):
            yield from _occurrences(l)
            yield from _occurrences(r)
        case H.HRes(c, b):
            yield from (n for n in _occurrences(b) if n != c)
        case H.HAbs(ps, b):
            yield from (n for n in _occurrences(b) if n not in ps)
        case H.HApp(f, args):
            yield from _occurrences(f)
            for a in args:
                if isinstance(a, str):
                    yield a
                else:
                    yield from _occurrences(a)


def extrusion_names(t: H.HoTerm, count: int, extra: Iterable[str] = ()) -> list[str]:
    return fresh_names(set(H.free_names(t)) | set(extra), count, "e")


@lru_cache(maxsize=50_000)
def _step(t: H.HoTerm, supply: InputSupplier, extra: frozenset[str]) -> tuple[tuple[HoLabel, H.HoTerm], ...]:
    base = H.beta(t)
    avoid = supply.names() | extra | H.free_names(t)
    work = H._uniquify(base, frozenset(avoid))
    seen: dict[tuple, tuple] = {}

    def add(label, target):
        try:
            target = H.beta(target)
        except H.ApplicationError:
            return
        seen.setdefault((label, H.struct_key(target)), (label, target))

    for m in _moves(work):
        match m:
            case ("tau", u):
                add(HO_TAU, u)
            case ("in", a, cont):
                for A in supply.terms:
                    add(HoLabel("in", a, A), cont(A))
            case ("out", a, ext, pay, u):
                order = [n for n in _name_order(pay) if n in ext]
                new = extrusion_names(t, len(order), extra | supply.names())
                ren = dict(zip(order, new))
                pay2 = H.normalize(H.substitute(pay, names=ren))
                add(HoLabel("out", a, pay2, tuple(new)), H.substitute(u, names=ren))
    return tuple(seen.values())


@dataclass(frozen=True)
class HoSemantics:
    """Adapter for the generic explorers.

    With ``supply=None`` each state gets :func:`default_supply` relative to
    ``fn(state) | extra``.
    """

    cfg: ExploreConfig = DEFAULT
    supply: InputSupplier | None = None
    extra: frozenset[str] = frozenset()

    def key(self, t):
        return H.struct_key(t)

    def moves(self, t):
        supply = self.supply if self.supply is not None else default_supply(t, self.cfg, self.extra)
        return _step(t, supply, self.extra)


def ho_step(t: H.HoTerm, supply: InputSupplier | None = None, cfg: ExploreConfig = DEFAULT,
            extra: Iterable[str] = ()) -> list[tuple[HoLabel, H.HoTerm]]:
    """Every one-step transition of ``t`` with inputs drawn from ``supply``.

    Inputs whose instantiation is ill-kinded (for example a process fed where a
    name abstraction is expected) have no transition.
    """
    return list(HoSemantics(cfg, supply, frozenset(extra)).moves(t))


@dataclass
class HoWeakResult:
    targets: list[H.HoTerm]
    truncated: bool

    def __iter__(self):
        return iter(self.targets)

    def __len__(self):
        return len(self.targets)


def ho_weak_step(t: H.HoTerm, label: HoLabel | None, supply: InputSupplier | None = None,
                 cfg: ExploreConfig = DEFAULT, extra: Iterable[str] = ()) -> HoWeakResult:
    """Targets of ``t ==label==> u``.

    Inputs match on subject and payload up to structural congruence. Outputs
    match on subject, extruded-name count and payload; their extruded names are
    renamed to the ones the label carries.
    """
    extra = set(extra) | H.free_names(t)
    if label is not None and label.kind == "in" and supply is None:
        supply = InputSupplier(default_supply(t, cfg, extra).terms + (label.payload,))
    sem = HoSemantics(cfg, supply, frozenset(extra))
    if label is None or label.is_tau:
        r = explore.weak_reach(sem, t, None, cfg.max_tau_depth, cfg.max_states)
        return HoWeakResult(list(r), r.truncated)
    if label.kind == "in":
        want = H.struct_key(label.payload)
        r = explore.weak_reach(
            sem, t,
            lambda lbl: lbl.kind == "in" and lbl.subject == label.subject and H.struct_key(lbl.payload) == want,
            cfg.max_tau_depth, cfg.max_states)
        return HoWeakResult(list(r), r.truncated)
    moves, truncated = explore.weak_moves(
        sem, t, lambda lbl: lbl.kind == "out" and lbl.subject == label.subject
        and len(lbl.extruded) == len(label.extruded), cfg.max_tau_depth, cfg.max_states)
    want = H.struct_key(label.payload)
    targets = []
    for lbl, u in moves:
        ren = dict(zip(lbl.extruded, label.extruded))
        if H.struct_key(H.substitute(lbl.payload, names=ren)) == want:
            targets.append(H.normalize(H.substitute(u, names=ren)))
    return HoWeakResult(targets, truncated)


def ho_tau_graph(t: H.HoTerm, cfg: ExploreConfig = DEFAULT):
    return explore.tau_graph(HoSemantics(cfg, InputSupplier(())), t, cfg.max_states, cfg.max_tau_depth)


def ho_is_divergent(t: H.HoTerm, cfg: ExploreConfig = DEFAULT) -> Divergence:
    edges, truncated = ho_tau_graph(t, cfg)
    if explore.has_cycle(edges):
        return Divergence.DIVERGENT
    if truncated:
        return Divergence.UNKNOWN
    return Divergence.CONVERGENT


# -- administrative steps -------------------------------------------------------
#
# A restricted name whose only receiver is one replicated input at top level,
# and which is never handed out as a name, is a private server: nobody else can
# ever receive on it, so a communication with it commutes with every other
# step and can always be taken.

def _roles(t: H.HoTerm, c: str):
    """Yield how ``c`` is used in ``t``: 'in', 'out' or 'other'."""
    match t:
        case H.HNil() | H.HVar():
            return
        case H.HIn(a, _, b) | H.HRepIn(a, _, b):
            if a == c:
                yield "in"
            yield from _roles(b, c)
        case H.HOut(a, p, b) | H.HRepOut(a, p, b):
            if a == c:
                yield "other" if isinstance(t, H.HRepOut) else "out"
            yield from _roles(p, c)
            yield from _roles(b, c)
        case H.HPar(l, r):
            yield from _roles(l, c)
            yield from _roles(r, c)
        case H.HRes(_, b) | H.HAbs(_, b):
            yield from _roles(b, c)
        case H.HApp(f, args):
            yield from _roles(f, c)
            for a in args:
                if a == c:
                    yield "other"
                elif not isinstance(a, str):
                    yield from _roles(a, c)


def _private_server(members, c) -> H.HRepIn | None:
    servers = [m for m in members if isinstance(m, H.HRepIn) and m.subj == c]
    if len(servers) != 1:
        return None
    roles = [r for m in members for r in _roles(m, c)]
    if roles.count("in") != 1 or "other" in roles:
        return None
    return servers[0]


def _deliver(srv: H.HRepIn, payload: H.HoTerm) -> H.HoTerm:
    return H.beta(H.subst_term(srv.body, payload, srv.var))


def settle(t: H.HoTerm, limit: int = 64) -> H.HoTerm:
    """Fire top-level outputs to private servers.

    The result is reachable from ``t`` by internal steps and weakly bisimilar
    to it.
    """
    for _ in range(limit):
        fired = False
        out = []
        for names, members in H.groups(t):
            for c in names:
                srv = _private_server(members, c)
                if srv is None:
                    continue
                new = []
                for m in members:
                    if isinstance(m, H.HOut) and m.subj == c:
                        try:
                            new += [m.body, _deliver(srv, m.payload)]
                            fired = True
                            continue
                        except H.ApplicationError:
                            pass
                    new.append(m)
                members = new
            out.append(H.hres(names, H.hpar(*members)))
        if not fired:
            return t
        t = H.beta(H.hpar(*out))
    return t


def inline_servers(t: H.HoTerm, limit: int = 8) -> H.HoTerm:
    """Replace every output to a private server, however deeply nested, by what
    the server would run, and drop the server.

    A server whose body uses its own name is kept. The result does the same
    visible things as ``t`` with fewer internal steps.
    """
    for _ in range(limit):
        changed = False
        out = []
        for names, members in H.groups(t):
            for c in names:
                srv = _private_server(members, c)
                if srv is None or c in H.free_names(srv.body):
                    continue
                try:
                    members = [_inline(m, c, srv) for m in members if m is not srv]
                except H.ApplicationError:
                    continue
                changed = True
            out.append(H.hres(names, H.hpar(*members)))
        if not changed:
            return t
        t = H.beta(H.hpar(*out))
    return t


def _inline(t: H.HoTerm, c: str, srv: H.HRepIn) -> H.HoTerm:
    go = lambda u: _inline(u, c, srv)  # noqa: E731
    match t:
        case H.HNil() | H.HVar():
            return t
        case H.HOut(a, p, b) if a == c:
            return H.HPar(go(b), _deliver(srv, go(p)))
        case H.HIn(a, x, b) | H.HRepIn(a, x, b):
            return type(t)(a, x, go(b))
        case H.HOut(a, p, b) | H.HRepOut(a, p, b):
            return type(t)(a, go(p), go(b))
        case H.HPar(l, r):
            return H.HPar(go(l), go(r))
        case H.HRes(n, b):
            return H.HRes(n, go(b))
        case H.HAbs(ps, b):
            return H.HAbs(ps, go(b))
        case H.HApp(f, args):
            return H.HApp(go(f), tuple(a if isinstance(a, str) else go(a) for a in args))
    raise TypeError(t)
