"""Canned worked examples with stored expectations.

Each example runs the library end to end and reports pass or fail together
with the observations it compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import hoterm as H
from . import pi as P
from .config import DEFAULT, ExploreConfig
from .correspondence import named_examples
from .encoder import encode
from .equivalence import context_probe, ground_bisim, normal_bisim
from .factorization import ContextHole, factorize
from .holts import HoSemantics, InputSupplier
from .pilts import PiSemantics
from .syntax import parse_ho, parse_pi, show, show_ho

EXAMPLES = ("sec31-trace", "sec33-counterexample", "sec4-factorization")

# (a)([.] | T): hands a process trigger to the input on a, then runs the
# received abstraction twice on d
COUNTER_CONTEXT = "(nu a)(X | (nu m)(a<lam(Z).m<Z>.0>.0 | m(X1).(X1@(d) | X1@(d))))"


@dataclass
class ReproResult:
    name: str
    passed: bool
    details: list[str] = field(default_factory=list)

    def to_records(self) -> str:
        lines = [f"REPRO {self.name} {'pass' if self.passed else 'fail'}"]
        lines += [f"NOTE {d}" for d in self.details]
        return "\n".join(lines)


def tau_run(sem, start, limit: int = 16) -> tuple[list, bool]:
    """Follow internal steps while they are unique; returns the states and
    whether the run ended because no internal step was left."""
    states = [start]
    for _ in range(limit):
        taus = {sem.key(t): t for lbl, t in sem.moves(states[-1]) if lbl.is_tau}
        if len(taus) != 1:
            return states, not taus
        states.append(next(iter(taus.values())))
    return states, False


def handshake_trace(cfg: ExploreConfig = DEFAULT) -> ReproResult:
    pq = named_examples()["PQ"]
    want = parse_pi("(nu d)(nu c)(0 | 0)")
    run, stopped = tau_run(PiSemantics(cfg), pq)
    notes = ["pi: " + " -> ".join(show(s) for s in run)]
    ok = stopped and len(run) == 3 and P.congruent(run[-1], want)

    hrun, hstopped = tau_run(HoSemantics(cfg, InputSupplier(())), encode(pq))
    notes.append("encoded: " + " -> ".join(show_ho(H.normalize(s)) for s in hrun))
    ok &= hstopped and len(hrun) == 3 and H.alpha_eq(H.normalize(hrun[-1]), H.normalize(encode(want)))
    # every intermediate state is the translation of the pi state
    ok &= all(H.struct_key(h) == H.struct_key(encode(s)) for s, h in zip(run, hrun))
    return ReproResult("sec31-trace", ok, notes)


def counterexample(cfg: ExploreConfig = DEFAULT) -> ReproResult:
    ex = named_examples()
    r1, r2 = ex["R1"], ex["R2"]
    g = ground_bisim(r1, r2, cfg)
    probe = context_probe(encode(r1), encode(r2), [("X", parse_ho(COUNTER_CONTEXT))], cfg)
    n = normal_bisim(encode(r1), encode(r2), cfg)
    # the refuting trace is the right side's: two outputs on c
    c_outs = [s for s in probe.witness if s.side == "right" and s.label.startswith("(nu") and ")c<" in s.label]
    notes = [f"ground {g.result.value}", f"probe {probe.result.value}", f"normal {n.result.value}"]
    notes += [f"witness {s.side} {s.label}" for s in probe.witness]
    ok = (g.equivalent and probe.inequivalent and n.inequivalent and len(c_outs) == 2
          and probe.witness[-1].side == "left" and probe.witness[-1].label == "none")
    return ReproResult("sec33-counterexample", ok, notes)


def name_abstraction_factorization(cfg: ExploreConfig = DEFAULT) -> ReproResult:
    e = ContextHole.parse("X@(d)")
    a = parse_ho("lam(x).x<b>")
    f = factorize(e, a, "m")
    direct = H.normalize(e.fill(a))
    expected = parse_ho("(nu m)(m<lam(Y).Y@(d)>.0 | !m(Z).Z@(lam(x).x<b>))")
    v = normal_bisim(direct, f, cfg)
    notes = [f"E[A] = {show_ho(direct)}", f"factorized = {show_ho(f)}", f"normal {v.result.value}"]
    ok = (H.alpha_eq(direct, H.normalize(parse_ho("d<b>.0"))) and H.congruent(f, expected)
          and v.equivalent)
    return ReproResult("sec4-factorization", ok, notes)


def run(name: str, cfg: ExploreConfig = DEFAULT) -> ReproResult:
    match name:
        case "sec31-trace":
            return handshake_trace(cfg)
        case "sec33-counterexample":
            return counterexample(cfg)
        case "sec4-factorization":
            return name_abstraction_factorization(cfg)
    raise ValueError(f"unknown example {name!r}; expected one of {', '.join(EXAMPLES)}")
