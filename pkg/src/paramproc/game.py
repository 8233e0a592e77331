"""Bounded bisimulation games over pairs of states.

A checker supplies ``expand(pair)``, which lists the challenges of a pair. A
challenge is met when some alternative has all of its pairs in the relation.
The reachable pairs are explored breadth first and the greatest fixed point is
computed twice: optimistically (unexplored pairs and truncated searches count
as met) to refute, and pessimistically (they count as failed) to confirm.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable

from .verdict import Result, Step, Verdict


@dataclass
class Alternative:
    label: str
    term: str
    pairs: list[tuple]


@dataclass
class Challenge:
    side: str
    label: str
    term: str
    alternatives: list[Alternative]
    truncated: bool = False


@dataclass
class _Node:
    pair: tuple
    challenges: list[tuple[Challenge, list[list[Hashable]]]] = field(default_factory=list)
    expanded: bool = False
    trivial: bool = False


def solve(root: tuple, expand: Callable[[tuple], list[Challenge]],
          pair_key: Callable[[tuple], Hashable], trivially_related: Callable[[tuple], bool],
          max_pairs: int, simplify: Callable[[tuple], tuple] | None = None) -> Verdict:
    """Play the game from ``root``.

    ``simplify`` rewrites every pair reached from the root before it enters
    the graph; an up-to technique plugged in here makes an equivalent answer
    cheaper to reach but its refutations are only as trustworthy as the
    technique. The root itself is played as given.
    """
    simplify = simplify or (lambda p: p)
    nodes: dict[Hashable, _Node] = {}
    root_key = pair_key(root)
    nodes[root_key] = _Node(root)
    queue = deque([root_key])
    expanded = 0
    pairs_hit = False
    search_hit = False
    next_check = 8
    while queue:
        k = queue.popleft()
        node = nodes[k]
        if trivially_related(node.pair):
            node.trivial = True
            continue
        if expanded >= max_pairs:
            pairs_hit = True
            continue
        expanded += 1
        node.expanded = True
        for ch in expand(node.pair):
            search_hit |= ch.truncated
            alt_keys = []
            for alt in ch.alternatives:
                keys = []
                for p in alt.pairs:
                    p = simplify(p)
                    pk = pair_key(p)
                    if pk not in nodes:
                        nodes[pk] = _Node(p)
                        queue.append(pk)
                    keys.append(pk)
                alt_keys.append(keys)
            node.challenges.append((ch, alt_keys))
        if expanded >= next_check:
            # refute early when the optimistic fixpoint already excludes the root
            next_check += 8
            stats = {"pairs": len(nodes), "expanded": expanded}
            removed = _fixpoint(nodes, optimistic=True)
            if root_key in removed:
                hits = ("search",) if search_hit else ()
                return Verdict(Result.INEQUIVALENT, _witness(root_key, nodes, removed), hits, stats=stats)
            # and confirm early when the explored pairs already close up
            if root_key not in _fixpoint(nodes, optimistic=False):
                return Verdict(Result.EQUIVALENT, stats=stats)

    stats = {"pairs": len(nodes), "expanded": expanded}
    hits = tuple(n for n, hit in (("pairs", pairs_hit), ("search", search_hit)) if hit)

    removed = _fixpoint(nodes, optimistic=True)
    if root_key in removed:
        return Verdict(Result.INEQUIVALENT, _witness(root_key, nodes, removed), hits, stats=stats)
    if not hits:
        return Verdict(Result.EQUIVALENT, bounds_hit=hits, stats=stats)
    if root_key not in _fixpoint(nodes, optimistic=False):
        return Verdict(Result.EQUIVALENT, bounds_hit=hits, stats=stats)
    return Verdict(Result.UNKNOWN, bounds_hit=hits, stats=stats)


def _fixpoint(nodes: dict[Hashable, _Node], optimistic: bool) -> dict[Hashable, tuple[int, int]]:
    """Pairs outside the greatest fixed point, with (round, failing challenge)."""
    removed: dict[Hashable, tuple[int, int]] = {}
    if not optimistic:
        for k, n in nodes.items():
            if not n.expanded and not n.trivial:
                removed[k] = (0, -1)
    live = [k for k, n in nodes.items() if n.expanded]
    rnd = 1
    while True:
        newly = {}
        for k in live:
            if k in removed:
                continue
            for i, (ch, alts) in enumerate(nodes[k].challenges):
                if optimistic and ch.truncated:
                    continue
                if not any(all(p not in removed for p in alt) for alt in alts):
                    newly[k] = (rnd, i)
                    break
        if not newly:
            return removed
        removed.update(newly)
        rnd += 1


def _witness(k: Hashable, nodes: dict[Hashable, _Node], removed) -> list[Step]:
    steps: list[Step] = []
    while k in removed:
        _, ci = removed[k]
        if ci < 0:
            break
        ch, alts = nodes[k].challenges[ci]
        steps.append(Step(ch.side, ch.label, ch.term))
        other = "right" if ch.side == "left" else "left"
        best = None
        for alt, keys in zip(ch.alternatives, alts):
            bad = [p for p in keys if p in removed]
            if not bad:
                continue
            nxt = min(bad, key=lambda p: removed[p][0])
            if best is None or removed[nxt][0] < removed[best[1]][0]:
                best = (alt, nxt)
        if best is None:
            steps.append(Step(other, "none", "-"))
            break
        alt, k = best
        steps.append(Step(other, alt.label, alt.term))
    return steps
