"""Name utilities shared by both calculi.

Names are plain strings. An identifier whose first character is uppercase is a
process variable; everything else is a name (constant or name variable, the
distinction being fixed by binding position rather than spelling).
"""

from __future__ import annotations

from typing import Iterable


def is_process_var(ident: str) -> bool:
    return ident[:1].isupper()


def fresh_name(avoid: Iterable[str], hint: str = "n") -> str:
    """Return the first of ``hint, hint1, hint2, ...`` not in ``avoid``.

    Deterministic in ``avoid``: the same avoid set always yields the same name.
    """
    avoid = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    base = hint.rstrip("0123456789") or hint
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def fresh_names(avoid: Iterable[str], count: int, hint: str = "n") -> list[str]:
    taken = set(avoid)
    out = []
    for _ in range(count):
        n = fresh_name(taken, hint)
        taken.add(n)
        out.append(n)
    return out
