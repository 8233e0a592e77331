"""Helpers for comparing every pair of a corpus without running a full
bisimulation check on each pair.

A fingerprint is a bounded weak trace set over a fixed alphabet. Bisimilar
terms have equal trace sets, and names outside a compared pair behave like
fresh ones, so two terms with different fingerprints can never be found
equivalent. Terms whose exploration hit a bound get no fingerprint and are
compared with everything.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from . import explore
from . import hoterm as H
from . import pi as P
from .config import DEFAULT, ExploreConfig
from .equivalence import NAME_USER, trace_set
from .holts import InputSupplier
from .names import fresh_name
from .pilts import PiSemantics
from .syntax import name_payload
from .triggers import TriggerKind, make_trigger


def pi_fingerprint(p: P.PiProcess, names: Iterable[str], cfg: ExploreConfig = DEFAULT,
                   length: int = 2) -> frozenset | None:
    """Weak traces of ``p`` up to ``length`` visible steps; inputs receive
    only ``names``."""
    names = frozenset(names)
    sem = PiSemantics(cfg, names)
    traces = {()}
    level = {(): [p]}
    for _ in range(length):
        nxt: dict[tuple, dict] = {}
        for tr, states in level.items():
            for s in states:
                moves, truncated = explore.weak_moves(sem, s, lambda lbl: True,
                                                      cfg.max_tau_depth, cfg.max_states)
                if truncated:
                    return None
                for lbl, u in moves:
                    if lbl.kind == "in" and lbl.obj not in names:
                        continue
                    nxt.setdefault(tr + (str(lbl),), {})[P.struct_key(u)] = u
        traces.update(nxt)
        level = {tr: list(states.values()) for tr, states in nxt.items()}
    return frozenset(traces)


def normal_supply(names: Iterable[str]) -> InputSupplier:
    """The inputs of normal bisimulation for a fixed alphabet: the three
    triggers, a representation of every name, and a name user."""
    names = sorted(names)
    m = fresh_name(names, "m")
    terms = [make_trigger(k, m) for k in TriggerKind]
    terms += [name_payload(n) for n in names]
    terms.append(NAME_USER)
    return InputSupplier(tuple(terms))


def normal_fingerprint(t: H.HoTerm, names: Iterable[str], cfg: ExploreConfig = DEFAULT,
                       length: int = 2) -> frozenset | None:
    """Weak traces of ``t`` in the game normal bisimulation plays: outputs are
    seen by subject and payload kind and leave a forwarder behind."""
    ts = trace_set(t, normal_supply(names), cfg.with_(max_trace_len=length), forward=True)
    return None if ts.truncated else ts.traces


def compatible(fa: tuple, fb: tuple) -> bool:
    """Layered fingerprints agree wherever both layers are known."""
    return all(x is None or y is None or x == y for x, y in zip(fa, fb))


def candidate_pairs(prints: Sequence[tuple]) -> list[tuple[int, int]]:
    """Index pairs ``i < j`` whose layered fingerprints are compatible.

    Items are grouped on the first layer; items without one are paired with
    everything.
    """
    groups: dict[Hashable, list[int]] = defaultdict(list)
    wild = []
    for i, fp in enumerate(prints):
        (wild if fp[0] is None else groups[fp[0]]).append(i)
    out = set()
    for g in groups.values():
        out.update((i, j) for i, j in combinations(g, 2) if compatible(prints[i], prints[j]))
    for w in wild:
        out.update((min(w, k), max(w, k)) for k in range(len(prints))
                   if k != w and compatible(prints[w], prints[k]))
    return sorted(out)
