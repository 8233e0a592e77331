"""Bisimulation checkers for both calculi.

All checkers explore a finite portion of the pair graph (see :mod:`paramproc.game`)
and answer ``equivalent``, ``inequivalent`` (with a replayable witness) or
``unknown`` when a bound cut the search short.
"""

from __future__ import annotations

import re

from dataclasses import dataclass, field
from typing import Iterable

from . import canon, explore
from . import hoterm as H
from . import pi as P
from .config import DEFAULT, ExploreConfig
from .game import Alternative, Challenge, solve
from .holts import HoSemantics, InputSupplier, PayloadKind, classify_payload, inline_servers, settle
from .names import fresh_name, fresh_names, is_process_var
from .pilts import PiSemantics
from .syntax import name_payload, show_ho, show_pi
from .triggers import TriggerKind, make_trigger
from .verdict import Result, Step, Verdict, combine

__all__ = [
    "TriggerKind", "make_trigger", "forwarder", "ground_bisim", "local_bisim_bounded",
    "normal_bisim", "context_probe", "image_probe", "trace_set", "compare_traces",
    "probe_supply", "image_contexts", "trigger_contexts", "Result", "Verdict",
]


# -- shared plumbing ----------------------------------------------------------------

def _responses(sem, state, label, strong: bool, cfg: ExploreConfig, match=None):
    """Moves of ``state`` answering ``label``: ``([(label, target)], truncated)``."""
    match = match or (lambda lbl: lbl == label)
    if strong:
        return [(lbl, t) for lbl, t in sem.moves(state) if (label.is_tau and lbl.is_tau) or
                (not lbl.is_tau and not label.is_tau and match(lbl))], False
    if label.is_tau:
        r = explore.tau_closure(sem, state, cfg.max_tau_depth, cfg.max_states)
        return [(label, t) for t in r], r.truncated
    return explore.weak_moves(sem, state, match, cfg.max_tau_depth, cfg.max_states)


def _pair_key(root_names: frozenset[str], fn, key):
    def pair_key(pair):
        l, r = pair
        generated = (fn(l) | fn(r)) - root_names
        if not generated:
            return (key(l), key(r))
        return canon.joint_key(None, None, sorted(generated),
                               lambda env: (key(l, env), key(r, env)))
    return pair_key


def _orient(side: str, mine, theirs):
    return (mine, theirs) if side == "left" else (theirs, mine)


# -- first-order ----------------------------------------------------------------------

def ground_bisim(p: P.PiProcess, q: P.PiProcess, cfg: ExploreConfig = DEFAULT,
                 strength: str = "weak") -> Verdict:
    """Ground bisimilarity: labels, including received names, must coincide."""
    return _pi_game(p, q, cfg, strength == "strong", family=None)


def local_bisim_bounded(p: P.PiProcess, q: P.PiProcess, cfg: ExploreConfig = DEFAULT,
                        strength: str = "weak") -> Verdict:
    """Local bisimilarity with bound outputs tested against ``0`` and ``cfg.r_family``.

    In each ``R`` of the family the free name ``cfg.r_hole`` stands for the
    extruded name. The answer is tagged as bounded.
    """
    family = (P.NIL,) + tuple(r for r in cfg.r_family if r != P.NIL)
    v = _pi_game(p, q, cfg, strength == "strong", family=family)
    v.bounded = True
    return v


def _pi_game(p, q, cfg, strong, family):
    root = frozenset(P.free_names(p) | P.free_names(q))
    if family:
        for r in family:
            root |= P.free_names(r) - {cfg.r_hole}

    def expand(pair):
        l, r = pair
        sem = PiSemantics(cfg, root | P.free_names(l) | P.free_names(r))
        out = []
        for side, mine, theirs in (("left", l, r), ("right", r, l)):
            for lbl, t in sem.moves(mine):
                resp, trunc = _responses(sem, theirs, lbl, strong, cfg)
                alts = []
                for rl, u in resp:
                    if family and lbl.kind == "bout":
                        pairs = [_orient(side, _compose(t, lbl.obj, rr, cfg.r_hole),
                                         _compose(u, lbl.obj, rr, cfg.r_hole)) for rr in family]
                    else:
                        pairs = [_orient(side, t, u)]
                    alts.append(Alternative(str(rl), show_pi(u), pairs))
                out.append(Challenge(side, str(lbl), show_pi(t), alts, trunc))
        return out

    return solve((p, q), expand, _pair_key(root, P.free_names, P.struct_key),
                 lambda pr: P.struct_key(pr[0]) == P.struct_key(pr[1]), cfg.max_states)


def _compose(t: P.PiProcess, b: str, r: P.PiProcess, hole: str) -> P.PiProcess:
    return P.canonical(P.PRes(b, P.par(t, P.subst_name(r, b, hole))))


# -- higher-order: normal bisimulation ---------------------------------------------

def forwarder(payload: H.HoTerm, m: str) -> H.HoTerm:
    """Replicated server on ``m`` handing out ``payload`` according to its kind."""
    z = fresh_name(H.all_idents(payload), "Z")
    match classify_payload(payload):
        case PayloadKind.PLAIN:
            return H.HRepIn(m, z, payload)
        case PayloadKind.PROCESS_ABSTRACTION:
            return H.HRepIn(m, z, H.HApp(payload, (H.HVar(z),)))
        case PayloadKind.NAME_ABSTRACTION:
            return H.HRepIn(m, z, H.HApp(H.HVar(z), (payload,)))
    raise AssertionError


def normal_bisim(t1: H.HoTerm, t2: H.HoTerm, cfg: ExploreConfig = DEFAULT,
                 strong: bool = False, name_inputs: bool = True) -> Verdict:
    """Normal bisimilarity.

    Inputs are probed with the three triggers on a fresh name; outputs are
    matched by payload kind and the residuals are composed with a replicated
    forwarder of the payload on a fresh name. With ``name_inputs`` inputs are
    additionally probed with ``lam(Y).Y@(n)`` for every free name ``n`` of the
    compared terms and one fresh one, and with ``lam(z).z<0>.0``: the first
    applies a forwarded name abstraction, the second uses a forwarded name as a
    channel. Neither is reachable through the three triggers alone.
    Abstractions are compared on their instances.
    """
    t1, t2 = H.normalize(t1), H.normalize(t2)
    if H.free_process_vars(t1) or H.free_process_vars(t2):
        raise ValueError("normal bisimulation compares closed terms")
    if isinstance(t1, H.HAbs) or isinstance(t2, H.HAbs):
        return _compare_abstractions(t1, t2, cfg, strong, name_inputs)
    # First run up to expansion and parallel context: outputs to private
    # servers are inlined and common components dropped, which keeps forwarders
    # from growing the pair graph without end. Dropping common parts can turn
    # related pairs into unrelated ones, so only an equivalent answer is kept.
    v = _normal_game(t1, t2, cfg, strong, name_inputs, up_to=True)
    if v.equivalent:
        return v
    return _normal_game(t1, t2, cfg, strong, name_inputs)


def _compare_abstractions(t1, t2, cfg, strong, name_inputs) -> Verdict:
    def shape(t):
        return tuple(is_process_var(u) for u in t.params) if isinstance(t, H.HAbs) else None

    if shape(t1) != shape(t2):
        return Verdict(Result.INEQUIVALENT, [Step("left", "shape", show_ho(t1)),
                                             Step("right", "shape", show_ho(t2))])
    known = H.free_names(t1) | H.free_names(t2)
    names = iter(fresh_names(known, len(t1.params), "n"))
    m = fresh_name(known | set(fresh_names(known, len(t1.params), "n")), "m")
    choices: list[list] = []
    for u in t1.params:
        if is_process_var(u):
            choices.append([make_trigger(k, m) for k in TriggerKind])
        else:
            choices.append([next(names)])
    verdicts = []
    for args in _product(choices):
        inst = []
        for t in (t1, t2):
            try:
                inst.append(H.normalize(H.HApp(t, tuple(args))))
            except H.ApplicationError:
                inst.append(None)
        if inst[0] is None and inst[1] is None:
            continue
        if inst[0] is None or inst[1] is None:
            side = "left" if inst[0] is None else "right"
            return Verdict(Result.INEQUIVALENT, [Step(side, "instance-ill-kinded", _show_args(args))])
        verdicts.append(normal_bisim(inst[0], inst[1], cfg, strong, name_inputs))
    return combine(verdicts)


def _product(choices):
    if not choices:
        yield []
        return
    for head in choices[0]:
        for rest in _product(choices[1:]):
            yield [head] + rest


def _show_args(args):
    return "(" + ",".join(a if isinstance(a, str) else show_ho(a) for a in args) + ")"


def _normal_supply(known: frozenset[str], root: frozenset[str], cfg: ExploreConfig,
                   name_inputs: bool) -> InputSupplier:
    m = fresh_name(known, "m")
    terms = [make_trigger(k, m) for k in TriggerKind]
    if name_inputs:
        cands = sorted(root) + fresh_names(known | {m}, cfg.fresh_inputs, "n")
        terms += [name_payload(n) for n in cands]
        terms.append(NAME_USER)
    return InputSupplier(tuple(terms))


# a name abstraction that signals on the name it is given
NAME_USER = H.HAbs(("z",), H.HOut("z", H.NIL, H.NIL))


def strip_common(pair: tuple[H.HoTerm, H.HoTerm]) -> tuple[H.HoTerm, H.HoTerm]:
    """Remove the parallel components the two sides have in common."""
    l, r = pair
    lc = {}
    for c in H.components(l):
        lc.setdefault(H.struct_key(c), []).append(c)
    rest_r = []
    common = False
    for c in H.components(r):
        same = lc.get(H.struct_key(c))
        if same:
            same.pop()
            common = True
        else:
            rest_r.append(c)
    if not common:
        return pair
    return H.hpar(*(c for cs in lc.values() for c in cs)), H.hpar(*rest_r)


def _normal_game(t1, t2, cfg, strong, name_inputs, up_to=False) -> Verdict:
    root = frozenset(H.free_names(t1) | H.free_names(t2))

    def expand(pair):
        l, r = pair
        known = root | H.free_names(l) | H.free_names(r)
        supply = _normal_supply(known, root, cfg, name_inputs)
        sem = HoSemantics(cfg, supply, known)
        out = []
        for side, mine, theirs in (("left", l, r), ("right", r, l)):
            for lbl, t in sem.moves(mine):
                if lbl.kind != "out":
                    resp, trunc = _responses(sem, theirs, lbl, strong, cfg)
                    alts = [Alternative(str(rl), show_ho(u), [_orient(side, t, u)]) for rl, u in resp]
                    out.append(Challenge(side, str(lbl), show_ho(t), alts, trunc))
                    continue
                kind = classify_payload(lbl.payload)
                resp, trunc = _responses(
                    sem, theirs, lbl, strong, cfg,
                    match=lambda rl, lbl=lbl, kind=kind: rl.kind == "out" and rl.subject == lbl.subject
                    and classify_payload(rl.payload) is kind)
                alts = []
                for rl, u in resp:
                    used = known | set(lbl.extruded) | set(rl.extruded) | supply.names()
                    m2 = fresh_name(used, "m")
                    mine2 = H.normalize(H.hres(lbl.extruded, H.HPar(t, forwarder(lbl.payload, m2))))
                    theirs2 = H.normalize(H.hres(rl.extruded, H.HPar(u, forwarder(rl.payload, m2))))
                    alts.append(Alternative(str(rl), show_ho(u), [_orient(side, mine2, theirs2)]))
                out.append(Challenge(side, str(lbl), show_ho(t), alts, trunc))
        return out

    def simplify(pair):
        if strong:
            return strip_common(pair) if up_to else pair
        if up_to:
            return strip_common((inline_servers(pair[0]), inline_servers(pair[1])))
        return settle(pair[0]), settle(pair[1])

    return solve((t1, t2), expand, _pair_key(root, H.free_names, H.struct_key),
                 lambda pr: H.struct_key(pr[0]) == H.struct_key(pr[1]), cfg.max_states, simplify)


# -- higher-order: bounded context probing -------------------------------------------

@dataclass(frozen=True)
class TraceSet:
    """Weak visible traces of one term, up to a length bound.

    Output steps are recorded as ``("out", subject, payload kind)``, input steps
    as ``("in", subject, payload key)``. ``paths`` keeps one concrete run per
    trace for witnesses; ``truncated`` is set when a state bound cut the search.
    """

    traces: frozenset
    paths: dict = field(compare=False, hash=False, repr=False)
    truncated: bool = False


def trace_set(t: H.HoTerm, supply: InputSupplier, cfg: ExploreConfig = DEFAULT,
              extra: frozenset[str] = frozenset(), forward: bool = False) -> TraceSet:
    """Bounded weak trace set of ``t`` with inputs drawn from ``supply``.

    After an output the residual keeps the extruded names restricted and drops
    the payload, or, with ``forward``, runs next to a replicated forwarder of it.
    """
    t = H.normalize(t)
    known = frozenset(extra) | H.free_names(t) | supply.names()
    fwd = fresh_names(known, cfg.max_trace_len, "f")
    sem = HoSemantics(cfg, supply, known | frozenset(fwd))
    budget = cfg.max_states
    truncated = False
    paths = {(): []}
    level = {(): {H.struct_key(t): t}}
    for depth in range(cfg.max_trace_len + 1):
        closed: dict[tuple, dict] = {}
        for tr, states in level.items():
            pool: dict = {}
            for s in states.values():
                r = explore.tau_closure(sem, s, cfg.max_tau_depth, cfg.max_states)
                truncated |= r.truncated
                pool.update(r.states)
            closed[tr] = pool
        if depth == cfg.max_trace_len:
            break
        nxt: dict[tuple, dict] = {}
        for tr, pool in closed.items():
            for s in pool.values():
                for lbl, u in sem.moves(s):
                    if lbl.is_tau:
                        continue
                    if lbl.kind == "in":
                        obs = ("in", lbl.subject, H.struct_key(lbl.payload))
                    else:
                        obs = ("out", lbl.subject, classify_payload(lbl.payload).value)
                        rest = H.HPar(u, forwarder(lbl.payload, fwd[depth])) if forward else u
                        u = H.normalize(H.hres(lbl.extruded, rest))
                    tr2 = tr + (obs,)
                    bucket = nxt.setdefault(tr2, {})
                    if tr2 not in paths:
                        paths[tr2] = paths[tr] + [(str(lbl), u)]
                    k = H.struct_key(u)
                    if k in bucket:
                        continue
                    if budget <= 0:
                        truncated = True
                        continue
                    budget -= 1
                    bucket[k] = u
        level = nxt
        if not level:
            break
    return TraceSet(frozenset(paths), paths, truncated)


def compare_traces(left: TraceSet, right: TraceSet, bounded: bool = True) -> Verdict:
    """Refute when one side has a trace the other, fully explored, lacks."""
    hits = ("states",) if left.truncated or right.truncated else ()
    for side, mine, theirs in (("left", left, right), ("right", right, left)):
        missing = sorted(mine.traces - theirs.traces, key=lambda tr: (len(tr), str(tr)))
        if missing and not theirs.truncated:
            tr = missing[0]
            other = "right" if side == "left" else "left"
            steps = [Step(side, lbl, show_ho(u)) for lbl, u in mine.paths[tr]]
            steps.append(Step(other, "none", "-"))
            return Verdict(Result.INEQUIVALENT, steps, hits, bounded=bounded)
    if hits:
        return Verdict(Result.UNKNOWN, bounds_hit=hits, bounded=bounded)
    return Verdict(Result.EQUIVALENT, bounded=bounded)


def probe_supply(names: Iterable[str], cfg: ExploreConfig = DEFAULT,
                 triggers: bool = False) -> InputSupplier:
    """Name payloads for ``names`` plus fresh ones, optionally with the triggers."""
    known = set(names)
    m = fresh_name(known, "m")
    cands = sorted(known) + fresh_names(known | {m}, cfg.fresh_inputs, "n")
    terms = [make_trigger(k, m) for k in TriggerKind] if triggers else []
    terms += [name_payload(n) for n in cands]
    return InputSupplier(tuple(terms))


def context_probe(t1: H.HoTerm, t2: H.HoTerm, contexts: Iterable[tuple[str, H.HoTerm]] | None = None,
                  cfg: ExploreConfig = DEFAULT, supply: InputSupplier | None = None,
                  forward: bool = False) -> Verdict:
    """Compare the bounded trace sets of ``C[t1]`` and ``C[t2]`` for each context.

    ``contexts`` are ``(hole_variable, term)`` pairs; when omitted,
    ``cfg.context_family`` is used, and the empty hole alone if that is empty
    too. The default supply feeds name payloads for the free names of the
    filled terms and one fresh name.
    """
    contexts = list(contexts if contexts is not None else cfg.context_family) or [("X", H.HVar("X"))]
    filled = [(H.normalize(H.plug(c, x, t1)), H.normalize(H.plug(c, x, t2))) for x, c in contexts]
    known = frozenset().union(*(H.free_names(a) | H.free_names(b) for a, b in filled))
    if supply is None:
        supply = probe_supply(known, cfg)
    verdicts = []
    for (x, c), (a, b) in zip(contexts, filled):
        v = compare_traces(trace_set(a, supply, cfg, known, forward),
                           trace_set(b, supply, cfg, known, forward))
        if v.inequivalent:
            v.witness.insert(0, Step("both", "context", re.sub(rf"\b{re.escape(x)}\b(?!')", "[.]", show_ho(c))))
            return v
        verdicts.append(v)
    out = combine(verdicts)
    out.bounded = True
    return out


def pi_contexts(names: Iterable[str]) -> list[P.PiProcess]:
    """Small first-order contexts, with the hole written as the process variable ``X``.

    The hole itself, restriction of each name, and restriction of each name
    around a sender and a receiver on it.
    """
    names = sorted(names)
    other = fresh_name(names, "k")
    out: list = [None]
    for n in names:
        out.append(("res", n, None))
        out.append(("res", n, P.POut(n, other, P.NIL)))
        out.append(("res", n, P.PIn(n, "x", P.POut("x", n, P.NIL))))
    return out


def image_contexts(names: Iterable[str]) -> list[tuple[str, H.HoTerm]]:
    """Translations of :func:`pi_contexts` as higher-order contexts on hole ``X``."""
    from .encoder import encode

    hole = H.HVar("X")
    out = []
    for c in pi_contexts(names):
        match c:
            case None:
                out.append(("X", hole))
            case ("res", n, None):
                out.append(("X", H.HRes(n, hole)))
            case ("res", n, r):
                out.append(("X", H.HRes(n, H.HPar(hole, encode(r)))))
    return out


def image_probe(p: P.PiProcess, q: P.PiProcess, cfg: ExploreConfig = DEFAULT) -> Verdict:
    """Probe the translations of ``p`` and ``q`` with translated first-order
    contexts and name inputs only."""
    from .encoder import encode

    names = P.free_names(p) | P.free_names(q)
    return context_probe(encode(p), encode(q), image_contexts(names), cfg,
                         probe_supply(names, cfg))


def trigger_contexts(names: Iterable[str]) -> list[tuple[str, H.HoTerm]]:
    """Contexts that hand each kind of trigger to the term on every free name,
    plus the empty hole."""
    names = sorted(names)
    m = fresh_name(names, "m")
    hole = H.HVar("X")
    out = [("X", hole)]
    for n in names:
        for kind in TriggerKind:
            out.append(("X", H.HPar(hole, H.HOut(n, make_trigger(kind, m), H.NIL))))
    return out
