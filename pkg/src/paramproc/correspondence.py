"""Clause-by-clause matching between the transitions of a pi process and those
of its translation, plus the corpora these checks run over.

Forward checks start from the moves of ``p`` and look for the corresponding
moves of ``encode(p)``; backward checks go the other way and also reject any
move of ``encode(p)`` that is not of one of the five expected shapes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx

from . import explore
from . import hoterm as H
from . import pi as P
from .config import DEFAULT, ExploreConfig
from .encoder import encode
from .equivalence import normal_bisim
from .holts import HoSemantics, InputSupplier, ho_is_divergent, ho_tau_graph, settle
from .names import fresh_name
from .pilts import Divergence, PiSemantics, candidate_names, extrusion_name, is_divergent, tau_graph
from .syntax import name_payload, parse_pi, show_ho, show_pi
from .triggers import TriggerKind, make_trigger

CLAUSES = (1, 2, 3, 4, 5)


@dataclass
class Tally:
    checked: int = 0
    passed: int = 0
    failed: int = 0
    unknown: int = 0

    def add(self, outcome: str):
        self.checked += 1
        setattr(self, outcome, getattr(self, outcome) + 1)


@dataclass(frozen=True)
class Exhibit:
    """A move that found no partner: where it started, what was looked for,
    and what the other side could do instead."""

    direction: str
    clause: int
    source: str
    transition: str
    expected: str
    observed: tuple[str, ...]


@dataclass
class CorrespondenceReport:
    forward: dict[int, Tally] = field(default_factory=lambda: {c: Tally() for c in CLAUSES})
    backward: dict[int, Tally] = field(default_factory=lambda: {c: Tally() for c in CLAUSES})
    exhibits: list[Exhibit] = field(default_factory=list)

    def tallies(self, direction: str) -> dict[int, Tally]:
        return self.forward if direction == "forward" else self.backward

    @property
    def failed(self) -> int:
        return sum(t.failed for d in (self.forward, self.backward) for t in d.values())

    @property
    def unknown(self) -> int:
        return sum(t.unknown for d in (self.forward, self.backward) for t in d.values())

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def merge(self, other: "CorrespondenceReport") -> "CorrespondenceReport":
        for direction in ("forward", "backward"):
            mine = self.tallies(direction)
            for c, t in other.tallies(direction).items():
                for f in ("checked", "passed", "failed", "unknown"):
                    setattr(mine[c], f, getattr(mine[c], f) + getattr(t, f))
        self.exhibits.extend(other.exhibits)
        return self

    def to_records(self) -> str:
        result = "inequivalent" if self.failed else "unknown" if self.unknown else "equivalent"
        lines = [f"RESULT {result}"]
        for direction in ("forward", "backward"):
            for c, t in self.tallies(direction).items():
                lines.append(f"CLAUSE {direction} {c} checked={t.checked} passed={t.passed} "
                             f"failed={t.failed} unknown={t.unknown}")
        for e in self.exhibits:
            lines.append(f"EXHIBIT {e.direction} {e.clause} {e.source} | {e.transition} | "
                         f"{e.expected} | {'; '.join(e.observed) or '-'}")
        lines.append("BOUNDS hit=none")
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_records()


# -- residual relations ---------------------------------------------------------------

def _related(candidates, target: H.HoTerm, weak: bool, cfg: ExploreConfig) -> str:
    """'passed', 'failed' or 'unknown' for some candidate being related to
    ``target``, strongly or weakly.

    Congruence is tried on every candidate before a bounded normal
    bisimulation runs on any of them. In the weak case both sides first take
    their administrative steps.
    """
    key = (lambda t: H.struct_key(settle(t))) if weak else H.struct_key
    want = key(target)
    if any(key(c) == want for c in candidates):
        return "passed"
    best = "failed"
    for c in candidates:
        v = normal_bisim(c, target, cfg, strong=not weak)
        if v.equivalent:
            return "passed"
        if v.unknown:
            best = "unknown"
    return best


def trigger_residual(t: H.HoTerm, m: str, b: str) -> H.HoTerm:
    """``(m)(t | !m(Y).Y@(b))``: what a consumed process trigger leaves behind
    once the name ``b`` is supplied to it."""
    fwd = H.HRepIn(m, "Y", H.HApp(H.HVar("Y"), (b,)))
    return H.normalize(H.HRes(m, H.HPar(t, fwd)))


# -- moves, strong or weak ------------------------------------------------------------

def _moves(sem, start, weak: bool, cfg: ExploreConfig):
    """One-step moves, or ``==> -l-> ==>`` moves (tau meaning one or more steps)."""
    if not weak:
        return list(sem.moves(start))
    visible, _ = explore.weak_moves(sem, start, lambda lbl: True, cfg.max_tau_depth, cfg.max_states)
    taus = {}
    for s in explore.tau_closure(sem, start, cfg.max_tau_depth, cfg.max_states):
        for lbl, t in sem.moves(s):
            if lbl.is_tau:
                for u in explore.tau_closure(sem, t, cfg.max_tau_depth, cfg.max_states):
                    taus.setdefault(sem.key(u), (lbl, u))
    return visible + list(taus.values())


def _name_of_payload(pay: H.HoTerm) -> str | None:
    """``n`` when ``pay`` is ``lam(Z).Z@(n)`` up to alpha, else None."""
    match H.normalize(pay):
        case H.HAbs((z,), H.HApp(H.HVar(f), (n,))) if f == z and isinstance(n, str):
            return n
    return None


def _input_moves(moves, subject, payload):
    key = H.struct_key(payload)
    return [t for lbl, t in moves
            if lbl.kind == "in" and lbl.subject == subject and H.struct_key(lbl.payload) == key]


# -- forward ---------------------------------------------------------------------

def check_forward(p: P.PiProcess, cfg: ExploreConfig = DEFAULT, weak: bool = False) -> CorrespondenceReport:
    """Every move of ``p`` must be answered by the matching move of its translation."""
    rep = CorrespondenceReport()
    enc = encode(p)
    names = P.free_names(p)
    pi_sem = PiSemantics(cfg)
    cands = candidate_names(p, k=cfg.fresh_inputs)
    m = fresh_name(set(cands) | names | {extrusion_name(p)}, "m")
    extra = frozenset(cands) | {m}

    out_moves = _moves(HoSemantics(cfg, InputSupplier(()), extra), enc, weak, cfg)
    in_moves = {}

    def inputs(payload):
        key = H.struct_key(payload)
        if key not in in_moves:
            in_moves[key] = _moves(HoSemantics(cfg, InputSupplier((payload,)), extra), enc, weak, cfg)
        return in_moves[key]

    def record(clause, lbl, target, expected, found, weak_rel=False):
        outcome = _related(found, encode(target), weak_rel, cfg)
        rep.forward[clause].add(outcome)
        if outcome == "failed":
            rep.exhibits.append(Exhibit("forward", clause, show_pi(p), f"{lbl} -> {show_pi(target)}",
                                        expected, tuple(show_ho(t) for t in found)))

    for lbl, target in _moves(pi_sem, p, weak, cfg):
        match lbl.kind:
            case "in":
                a, b = lbl.subject, lbl.obj
                pay = name_payload(b)
                record(1, lbl, target, f"{a}({show_ho(pay)})", _input_moves(inputs(pay), a, pay))
                trig = make_trigger(TriggerKind.PROCESS, m)
                found = [trigger_residual(t, m, b) for t in _input_moves(inputs(trig), a, trig)]
                if weak:
                    # the steps p took after the input only start once the
                    # name reaches the forwarded abstraction
                    found = [u for r in found for u in explore.tau_closure(
                        HoSemantics(cfg, InputSupplier(()), extra), r, cfg.max_tau_depth + 1, cfg.max_states)]
                record(2, lbl, target, f"{a}({show_ho(trig)})", found, weak_rel=True)
            case "out":
                a, b = lbl.subject, lbl.obj
                found = [t for hl, t in out_moves if hl.kind == "out" and hl.subject == a
                         and not hl.extruded and _name_of_payload(hl.payload) == b]
                record(3, lbl, target, f"{a}<{show_ho(name_payload(b))}>", found)
            case "bout":
                a, e = lbl.subject, lbl.obj
                found = [H.substitute(t, names={hl.extruded[0]: e}) for hl, t in out_moves
                         if hl.kind == "out" and hl.subject == a and len(hl.extruded) == 1
                         and _name_of_payload(hl.payload) == hl.extruded[0]]
                record(4, lbl, target, f"(nu {e}){a}<{show_ho(name_payload(e))}>", found)
            case "tau":
                record(5, lbl, target, "tau", [t for hl, t in out_moves if hl.is_tau])
    return rep


# -- backward --------------------------------------------------------------------

def check_backward(p: P.PiProcess, cfg: ExploreConfig = DEFAULT, weak: bool = False) -> CorrespondenceReport:
    """Every move of the translation of ``p`` must come from a move of ``p``.

    Inputs are supplied with the representation of each candidate name and the
    process trigger; an output whose payload does not represent a name is a
    failure of clause 3 (or 4 when it extrudes).
    """
    rep = CorrespondenceReport()
    enc = encode(p)
    cands = candidate_names(p, k=cfg.fresh_inputs)
    m = fresh_name(set(cands) | P.free_names(p) | {extrusion_name(p)}, "m")
    trig = make_trigger(TriggerKind.PROCESS, m)
    supply = InputSupplier(tuple(name_payload(b) for b in cands) + (trig,))
    trig_key = H.struct_key(trig)
    pi_moves = _moves(PiSemantics(cfg), p, weak, cfg)

    def partners(kind, subject=None, obj=None):
        return [(lbl, t) for lbl, t in pi_moves
                if lbl.kind == kind and lbl.subject == subject and (obj is None or lbl.obj == obj)]

    def record(clause, hl, t, expected, outcome, observed):
        rep.backward[clause].add(outcome)
        if outcome == "failed":
            rep.exhibits.append(Exhibit("backward", clause, show_pi(p), f"{hl} -> {show_ho(t)}",
                                        expected, observed))

    def against(clause, hl, t, found, expected, weak_rel=False):
        outcome = _related([encode(q) for _, q in found], t, weak_rel, cfg)
        record(clause, hl, t, expected, outcome, tuple(f"{lbl} -> {show_pi(q)}" for lbl, q in found))

    for hl, t in _moves(HoSemantics(cfg, supply, frozenset(cands) | {m}), enc, weak, cfg):
        match hl.kind:
            case "tau":
                against(5, hl, t, partners("tau"), "tau")
            case "in" if H.struct_key(hl.payload) == trig_key:
                for b in cands:
                    against(2, hl, trigger_residual(t, m, b), partners("in", hl.subject, b),
                            f"{hl.subject}({b})", weak_rel=True)
            case "in":
                b = _name_of_payload(hl.payload)
                against(1, hl, t, partners("in", hl.subject, b), f"{hl.subject}({b})")
            case "out" if not hl.extruded:
                b = _name_of_payload(hl.payload)
                if b is None:
                    record(3, hl, t, "a name representation", "failed", (show_ho(hl.payload),))
                    continue
                against(3, hl, t, partners("out", hl.subject, b), f"{hl.subject}<{b}>")
            case "out":
                b = _name_of_payload(hl.payload)
                if len(hl.extruded) != 1 or b != hl.extruded[0]:
                    record(4, hl, t, "one extruded name representation", "failed", (str(hl),))
                    continue
                found = [(lbl, P.subst_name(q, b, lbl.obj)) for lbl, q in partners("bout", hl.subject)]
                against(4, hl, t, found, f"{hl.subject}<({b})>")
    return rep


def check(p: P.PiProcess, cfg: ExploreConfig = DEFAULT, weak: bool = False) -> CorrespondenceReport:
    return check_forward(p, cfg, weak).merge(check_backward(p, cfg, weak))


def check_corpus(corpus: Iterable[P.PiProcess], cfg: ExploreConfig = DEFAULT,
                 weak: bool = False) -> CorrespondenceReport:
    rep = CorrespondenceReport()
    for p in corpus:
        rep.merge(check(p, cfg, weak))
    return rep


# -- divergence ------------------------------------------------------------------

def divergence_pair(p: P.PiProcess, cfg: ExploreConfig = DEFAULT) -> tuple[Divergence, Divergence]:
    return is_divergent(p, cfg), ho_is_divergent(encode(p), cfg)


def tau_graphs_isomorphic(p: P.PiProcess, cfg: ExploreConfig = DEFAULT) -> bool | None:
    """Whether the internal-step graphs of ``p`` and of its translation are
    isomorphic; None when either exploration was cut short."""
    graphs = []
    for edges, truncated in (tau_graph(p, cfg), ho_tau_graph(encode(p), cfg)):
        if truncated:
            return None
        g = nx.DiGraph()
        g.add_nodes_from(edges)
        g.add_edges_from((k, n) for k, succ in edges.items() for n in succ)
        graphs.append(g)
    return nx.is_isomorphic(*graphs)


# -- corpora ---------------------------------------------------------------------

ALPHABET = ("a", "b", "c")

NAMED_EXAMPLES = {
    "PQ": "(nu c)a(x).x<c>.0 | (nu d)a<d>.d(y).0",
    "R1": "(nu b)(a.b<> | b.c<>)",
    "R2": "(nu b)(a.b<> | b.c<> | b.c<>)",
}


@dataclass(frozen=True)
class ExhaustiveDepth:
    depth: int


@dataclass(frozen=True)
class RandomShape:
    count: int
    max_depth: int


class CorpusError(ValueError):
    pass


def named_examples() -> dict[str, P.PiProcess]:
    return {k: parse_pi(v) for k, v in NAMED_EXAMPLES.items()}


def generate_corpus(seed: int, shape: ExhaustiveDepth | RandomShape,
                    alphabet: Iterable[str] = ALPHABET) -> list[P.PiProcess]:
    """A deterministic list of distinct processes (up to alpha), ending with
    the named examples."""
    alphabet = tuple(alphabet)
    match shape:
        case ExhaustiveDepth(d):
            if not 0 <= d <= 3:
                raise CorpusError(f"exhaustive depth must be between 0 and 3, got {d}")
            terms = list(enumerate_terms(d, alphabet))
        case RandomShape(n, d):
            if n < 0 or d < 0:
                raise CorpusError("count and depth must be non-negative")
            terms = random_terms(seed, n, d, alphabet)
        case _:
            raise CorpusError(f"unknown corpus shape {shape!r}")
    return _distinct(terms + list(named_examples().values()))


def _distinct(terms: list[P.PiProcess]) -> list[P.PiProcess]:
    seen = set()
    out = []
    for t in terms:
        k = P.alpha_canonical(t)
        if k not in seen:
            seen.add(k)
            out.append(t)
    return out


def enumerate_terms(depth: int, names: tuple[str, ...]) -> Iterator[P.PiProcess]:
    """All processes of nesting depth at most ``depth`` whose free names are
    among ``names``; binders get one canonical name per nesting level."""
    yield from _enum(depth, names)


def _enum(depth: int, names: tuple[str, ...]) -> list[P.PiProcess]:
    return list(_enum_cached(depth, names))


_CACHE: dict[tuple, tuple[P.PiProcess, ...]] = {}


def _enum_cached(depth: int, names: tuple[str, ...]) -> tuple[P.PiProcess, ...]:
    key = (depth, names)
    if key in _CACHE:
        return _CACHE[key]
    out: list[P.PiProcess] = [P.NIL]
    if depth > 0:
        x = f"x{len(names)}"
        r = f"r{len(names)}"
        sub = _enum_cached(depth - 1, names)
        bound_sub = _enum_cached(depth - 1, names + (x,))
        for a in names:
            out += [P.PIn(a, x, q) for q in bound_sub]
        for a in names:
            for b in names:
                out += [P.POut(a, b, q) for q in sub]
        out += [P.PRes(r, q) for q in _enum_cached(depth - 1, names + (r,))]
        out += [P.PPar(q1, q2) for q1 in sub for q2 in sub]
        for a in names:
            out += [P.PRep(a, x, q) for q in bound_sub]
    _CACHE[key] = tuple(out)
    return _CACHE[key]


def random_terms(seed: int, count: int, max_depth: int, names: tuple[str, ...]) -> list[P.PiProcess]:
    """``count`` distinct random processes of depth at most ``max_depth``."""
    rng = random.Random(seed)
    seen = set()
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * count + 100:
        attempts += 1
        t = _random_term(rng, max_depth, names)
        k = P.alpha_canonical(t)
        if k not in seen:
            seen.add(k)
            out.append(t)
    return out


def _random_term(rng: random.Random, depth: int, names: tuple[str, ...]) -> P.PiProcess:
    if depth == 0 or rng.random() < 0.15:
        return P.NIL
    x = f"x{len(names)}"
    match rng.choice(("in", "out", "out", "res", "par", "rep")):
        case "in":
            return P.PIn(rng.choice(names), x, _random_term(rng, depth - 1, names + (x,)))
        case "out":
            return P.POut(rng.choice(names), rng.choice(names), _random_term(rng, depth - 1, names))
        case "res":
            r = f"r{len(names)}"
            return P.PRes(r, _random_term(rng, depth - 1, names + (r,)))
        case "par":
            return P.PPar(_random_term(rng, depth - 1, names), _random_term(rng, depth - 1, names))
        case _:
            return P.PRep(rng.choice(names), x, _random_term(rng, depth - 1, names + (x,)))

