"""Calculus-independent exploration over labelled transition systems.

A *semantics* is any hashable object with ``key(state)`` and ``moves(state)``,
the latter returning ``(label, target)`` pairs whose labels expose ``is_tau``.
Results of closures are cached, so returned :class:`Reach` values must be
treated as read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Hashable


@dataclass
class Reach:
    """States reached by a bounded search, keyed by structural key."""

    states: dict[Hashable, object] = field(default_factory=dict)
    truncated: bool = False

    def __iter__(self):
        return iter(self.states.values())

    def __len__(self):
        return len(self.states)


@lru_cache(maxsize=50_000)
def tau_closure(sem, start, max_depth: int, max_states: int) -> Reach:
    """All states reachable by at most ``max_depth`` internal steps (BFS)."""
    out = Reach({sem.key(start): start})
    frontier = [start]
    for _ in range(max_depth):
        nxt = []
        for s in frontier:
            for label, t in sem.moves(s):
                if not label.is_tau:
                    continue
                k = sem.key(t)
                if k in out.states:
                    continue
                if len(out.states) >= max_states:
                    out.truncated = True
                    continue
                out.states[k] = t
                nxt.append(t)
        frontier = nxt
        if not frontier:
            break
    else:
        for s in frontier:
            if any(lbl.is_tau and sem.key(t) not in out.states for lbl, t in sem.moves(s)):
                out.truncated = True
                break
    return out


def weak_moves(sem, start, match: Callable[[object], bool], max_depth: int,
               max_states: int) -> tuple[list[tuple[object, object]], bool]:
    """``start ==> -label-> ==>`` for every visible label accepted by ``match``.

    Returns de-duplicated ``(label, target)`` pairs and a truncation flag.
    """
    before = tau_closure(sem, start, max_depth, max_states)
    truncated = before.truncated
    seen: dict[tuple, tuple] = {}
    for s in before:
        for label, t in sem.moves(s):
            if label.is_tau or not match(label):
                continue
            after = tau_closure(sem, t, max_depth, max_states)
            truncated |= after.truncated
            for u in after:
                seen.setdefault((label, sem.key(u)), (label, u))
    return list(seen.values()), truncated


def weak_reach(sem, start, match: Callable[[object], bool], max_depth: int,
               max_states: int) -> Reach:
    """Targets of ``==> -label-> ==>`` (``match`` is None means the empty weak step)."""
    before = tau_closure(sem, start, max_depth, max_states)
    if match is None:
        return before
    out = Reach(truncated=before.truncated)
    for s in before:
        for label, t in sem.moves(s):
            if label.is_tau or not match(label):
                continue
            after = tau_closure(sem, t, max_depth, max_states)
            out.truncated |= after.truncated
            for k, u in after.states.items():
                out.states.setdefault(k, u)
    return out


def tau_graph(sem, start, max_states: int,
              max_depth: int | None = None) -> tuple[dict[Hashable, list[Hashable]], bool]:
    """Adjacency of the internal-step graph reachable from ``start``, explored
    breadth first up to ``max_states`` states and ``max_depth`` levels.

    Nodes on the last level keep their edges to nodes already found, so a
    cycle closing there is still seen.
    """
    nodes = {sem.key(start): start}
    edges: dict[Hashable, list[Hashable]] = {}
    frontier = [sem.key(start)]
    truncated = False
    level = 0
    while frontier:
        last = max_depth is not None and level >= max_depth
        nxt = []
        for k in frontier:
            succ = []
            for label, t in sem.moves(nodes[k]):
                if not label.is_tau:
                    continue
                kt = sem.key(t)
                if kt not in nodes:
                    if last or len(nodes) >= max_states:
                        truncated = True
                        continue
                    nodes[kt] = t
                    nxt.append(kt)
                if kt not in succ:
                    succ.append(kt)
            edges[k] = succ
        if last:
            break
        frontier = nxt
        level += 1
    return edges, truncated


def has_cycle(edges: dict[Hashable, list[Hashable]]) -> bool:
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {k: WHITE for k in edges}
    for root in edges:
        if colour[root] != WHITE:
            continue
        stack = [(root, iter(edges[root]))]
        colour[root] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                c = colour.get(nxt, BLACK)
                if c == GREY:
                    return True
                if c == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, iter(edges[nxt])))
                    advanced = True
                    break
            if not advanced:
                colour[node] = BLACK
                stack.pop()
    return False


def longest_path_exceeds(edges, start, bound: int) -> bool:
    """True if an acyclic internal-step path from ``start`` is longer than ``bound``."""
    memo: dict[Hashable, int] = {}

    def longest(k):
        if k in memo:
            return memo[k]
        memo[k] = 0
        best = 0
        for n in edges.get(k, ()):
            best = max(best, 1 + longest(n))
            if best > bound:
                break
        memo[k] = best
        return best

    return longest(start) > bound
