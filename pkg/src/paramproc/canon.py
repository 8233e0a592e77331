"""Canonical keys modulo structural congruence.

Both calculi share the same recipe. A term is split into its restricted names
and its guarded parallel components (prefixes, replications, variables,
abstractions). Restrictions that bind nothing are dropped, restrictions whose
name is only ever used as the subject of same-polarity prefixes are dropped
together with those (dead) prefixes, and the remaining components are grouped
by the restricted names they share. Groups and components are then sorted so
that congruent terms receive the same string.

Bound names are rendered as ``#<level>`` tokens; user identifiers cannot start
with ``#`` so tokens never collide with free names. The sort is a heuristic
when two components differ only in how they use the restricted names of their
group; in that case two congruent terms may still get different keys. This
only costs extra states during exploration, never soundness.
"""

from __future__ import annotations

import re
from typing import Callable, Hashable, Sequence

_SENTINEL = re.compile("\x00g(\\d+)\x00")
ANON = "•"


class Splitter:
    """Calculus-specific hooks used by :func:`assemble`."""

    def free(self, comp) -> frozenset[str]:  # pragma: no cover - interface
        raise NotImplementedError

    def key(self, comp, env: dict[str, str], depth: int) -> str:  # pragma: no cover
        raise NotImplementedError

    def dead_polarity(self, comp, name: str) -> str | None:  # pragma: no cover
        """Return 'in'/'out' if ``name`` occurs in ``comp`` only as its top subject."""
        raise NotImplementedError


def _gc(restricted: list[str], comps: list, sp: Splitter) -> tuple[list[str], list]:
    changed = True
    while changed:
        changed = False
        fns = [sp.free(c) for c in comps]
        keep = []
        for name in restricted:
            users = [i for i, f in enumerate(fns) if name in f]
            if not users:
                changed = True
                continue
            pols = {sp.dead_polarity(comps[i], name) for i in users}
            if None not in pols and len(pols) == 1:
                drop = set(users)
                comps = [c for i, c in enumerate(comps) if i not in drop]
                fns = [f for i, f in enumerate(fns) if i not in drop]
                changed = True
                continue
            keep.append(name)
        restricted = keep
    return restricted, comps


def _groups(restricted: list[str], comps: list, sp: Splitter):
    parent = {n: n for n in restricted}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    rset = set(restricted)
    comp_names = []
    for c in comps:
        ns = [n for n in restricted if n in sp.free(c)]
        comp_names.append(ns)
        for n in ns[1:]:
            parent[find(n)] = find(ns[0])
    groups: dict[str, tuple[list[str], list]] = {}
    loose = []
    for c, ns in zip(comps, comp_names):
        if not ns:
            loose.append(c)
            continue
        root = find(ns[0])
        groups.setdefault(root, ([], []))[1].append(c)
    for n in restricted:
        if n in rset and find(n) in groups:
            groups[find(n)][0].append(n)
    return list(groups.values()), loose


def assemble(restricted: list[str], comps: list, sp: Splitter,
             env: dict[str, str], depth: int) -> str:
    restricted, comps = _gc(restricted, comps, sp)
    groups, loose = _groups(restricted, comps, sp)
    pieces = [sp.key(c, env, depth) for c in loose]
    for names, members in groups:
        inner = depth + len(names)
        sent = dict(env)
        sent.update({n: f"\x00{depth}:{i}\x00" for i, n in enumerate(names)})
        pat = re.compile(f"\x00{depth}:(\\d+)\x00")
        strs = sorted((sp.key(c, sent, inner) for c in members), key=lambda s: pat.sub(ANON, s))
        order: list[str] = []
        for m in pat.finditer("|".join(strs)):
            if m.group(1) not in order:
                order.append(m.group(1))
        toks = {idx: f"#{depth + j}" for j, idx in enumerate(order)}
        strs = sorted(pat.sub(lambda m: toks[m.group(1)], s) for s in strs)
        pieces.append("(ν" + ",".join(toks[i] for i in order) + ")[" + "|".join(strs) + "]")
    if not pieces:
        return "0"
    pieces.sort()
    return pieces[0] if len(pieces) == 1 else "{" + "|".join(pieces) + "}"


def joint_key(left: str, right: str, generated: Sequence[str],
              render: Callable[[dict[str, str]], tuple[str, str]]) -> Hashable:
    """Pair key treating ``generated`` free names up to a joint renaming."""
    if not generated:
        return (left, right)
    env = {n: f"\x00g{i}\x00" for i, n in enumerate(sorted(generated))}
    kl, kr = render(env)
    order: list[str] = []
    for m in _SENTINEL.finditer(kl + "\x01" + kr):
        if m.group(1) not in order:
            order.append(m.group(1))
    toks = {idx: f"${j}" for j, idx in enumerate(order)}
    sub = lambda s: _SENTINEL.sub(lambda m: toks[m.group(1)], s)  # noqa: E731
    return (sub(kl), sub(kr))


def components(restricted: list[str], comps: list, sp: Splitter) -> list[tuple[list[str], list]]:
    """Independent parallel components after garbage collection, each as
    ``(restricted names, members)``; members of a loose component stand alone."""
    restricted, comps = _gc(restricted, comps, sp)
    groups, loose = _groups(restricted, comps, sp)
    return [([], [c]) for c in loose] + groups
