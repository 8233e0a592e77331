"""Terms of the first-order (name-passing) pi-calculus.

    P, Q ::= 0 | m(x).P | m<n>.P | (nu c)P | P | Q | !m(x).P

Replication only appears in guarded-input form. Restriction binds a name
constant, input binds a name variable; both are plain strings here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from . import canon
from .names import fresh_name


@dataclass(frozen=True)
class PNil:
    pass


@dataclass(frozen=True)
class PIn:
    subj: str
    var: str
    body: "PiProcess"


@dataclass(frozen=True)
class POut:
    subj: str
    obj: str
    body: "PiProcess"


@dataclass(frozen=True)
class PRes:
    name: str
    body: "PiProcess"


@dataclass(frozen=True)
class PPar:
    left: "PiProcess"
    right: "PiProcess"


@dataclass(frozen=True)
class PRep:
    subj: str
    var: str
    body: "PiProcess"


PiProcess = Union[PNil, PIn, POut, PRes, PPar, PRep]

def _cached_hash(self):
    # terms are immutable trees that serve as cache keys everywhere; hash once
    d = self.__dict__
    h = d.get("_hash")
    if h is None:
        h = hash((self._tag,) + tuple([d[f] for f in self._hash_fields]))
        object.__setattr__(self, "_hash", h)
    return h


for _cls in (PNil, PIn, POut, PRes, PPar, PRep):
    _cls._tag = _cls.__name__
    _cls._hash_fields = tuple(_cls.__dataclass_fields__)
    _cls.__hash__ = _cached_hash

NIL = PNil()


def par(*procs: PiProcess) -> PiProcess:
    """Right-nested parallel composition with nil units removed."""
    items = [p for p in procs if not isinstance(p, PNil)]
    if not items:
        return NIL
    out = items[-1]
    for p in reversed(items[:-1]):
        out = PPar(p, out)
    return out


def res(names, body: PiProcess) -> PiProcess:
    for n in reversed(list(names)):
        body = PRes(n, body)
    return body


@lru_cache(maxsize=200_000)
def free_names(p: PiProcess) -> frozenset[str]:
    match p:
        case PNil():
            return frozenset()
        case PIn(a, x, body) | PRep(a, x, body):
            return (free_names(body) - {x}) | {a}
        case POut(a, b, body):
            return free_names(body) | {a, b}
        case PRes(c, body):
            return free_names(body) - {c}
        case PPar(l, r):
            return free_names(l) | free_names(r)
    raise TypeError(f"not a pi process: {p!r}")


@lru_cache(maxsize=200_000)
def bound_names(p: PiProcess) -> frozenset[str]:
    match p:
        case PNil():
            return frozenset()
        case PIn(_, x, body) | PRep(_, x, body):
            return bound_names(body) | {x}
        case POut(_, _, body):
            return bound_names(body)
        case PRes(c, body):
            return bound_names(body) | {c}
        case PPar(l, r):
            return bound_names(l) | bound_names(r)
    raise TypeError(f"not a pi process: {p!r}")


def all_names(p: PiProcess) -> frozenset[str]:
    return free_names(p) | bound_names(p)


def rename(p: PiProcess, mapping: dict[str, str]) -> PiProcess:
    """Simultaneous capture-avoiding renaming of free names."""
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return p
    match p:
        case PNil():
            return p
        case POut(a, b, body):
            return POut(mapping.get(a, a), mapping.get(b, b), rename(body, mapping))
        case PPar(l, r):
            return PPar(rename(l, mapping), rename(r, mapping))
        case PIn(a, x, body) | PRep(a, x, body):
            x2, inner = _bind(x, body, mapping)
            return type(p)(mapping.get(a, a), x2, rename(body, inner))
        case PRes(c, body):
            c2, inner = _bind(c, body, mapping)
            return PRes(c2, rename(body, inner))
    raise TypeError(f"not a pi process: {p!r}")


def _bind(binder: str, body: PiProcess, mapping: dict[str, str]):
    inner = {k: v for k, v in mapping.items() if k != binder}
    if binder in inner.values():
        new = fresh_name(set(inner.values()) | set(inner) | all_names(body), binder)
        inner[binder] = new
        return new, inner
    return binder, inner


def subst_name(p: PiProcess, new: str, old: str) -> PiProcess:
    """``p{new/old}``: replace free ``old`` by ``new`` avoiding capture."""
    return rename(p, {old: new})


def alpha_canonical(p: PiProcess) -> PiProcess:
    """Rename every binder to a deterministic name; alpha-equivalent inputs agree."""
    taken = set(free_names(p))

    def go(q: PiProcess, env: dict[str, str]) -> PiProcess:
        match q:
            case PNil():
                return q
            case POut(a, b, body):
                return POut(env.get(a, a), env.get(b, b), go(body, env))
            case PPar(l, r):
                return PPar(go(l, env), go(r, env))
            case PIn(a, x, body) | PRep(a, x, body):
                x2 = fresh_name(taken, "x")
                taken.add(x2)
                return type(q)(env.get(a, a), x2, go(body, {**env, x: x2}))
            case PRes(c, body):
                c2 = fresh_name(taken, "c")
                taken.add(c2)
                return PRes(c2, go(body, {**env, c: c2}))
        raise TypeError(q)

    return go(p, {})


def alpha_eq(p: PiProcess, q: PiProcess) -> bool:
    return alpha_canonical(p) == alpha_canonical(q)


def flatten(p: PiProcess) -> PiProcess:
    """Flatten parallel composition and drop nil units (no scope changes)."""
    match p:
        case PNil() | POut(_, _, PNil()):
            return p
        case POut(a, b, body):
            return POut(a, b, flatten(body))
        case PIn(a, x, body) | PRep(a, x, body):
            return type(p)(a, x, flatten(body))
        case PRes(c, body):
            return PRes(c, flatten(body))
        case PPar():
            return par(*(flatten(q) for q in _par_items(p)))
    raise TypeError(p)


def _par_items(p: PiProcess) -> list[PiProcess]:
    if isinstance(p, PPar):
        return _par_items(p.left) + _par_items(p.right)
    return [p]


def canonical(p: PiProcess) -> PiProcess:
    """State representative: flattened and alpha-canonical."""
    return alpha_canonical(flatten(p))


# -- keys modulo structural congruence -------------------------------------

def _uniquify(p: PiProcess, avoid: frozenset[str] = frozenset()) -> PiProcess:
    """Rename binders apart from each other, from free names and from ``avoid``."""
    taken = set(all_names(p)) | set(avoid)

    def go(q: PiProcess, env: dict[str, str]) -> PiProcess:
        match q:
            case PNil():
                return q
            case POut(a, b, body):
                return POut(env.get(a, a), env.get(b, b), go(body, env))
            case PPar(l, r):
                return PPar(go(l, env), go(r, env))
            case PIn(a, x, body) | PRep(a, x, body):
                x2 = fresh_name(taken, x)
                taken.add(x2)
                return type(q)(env.get(a, a), x2, go(body, {**env, x: x2}))
            case PRes(c, body):
                c2 = fresh_name(taken, c)
                taken.add(c2)
                return PRes(c2, go(body, {**env, c: c2}))
        raise TypeError(q)

    return go(p, {})


def _split(p: PiProcess, restricted: list[str], comps: list) -> None:
    match p:
        case PNil():
            return
        case PRes(c, body):
            restricted.append(c)
            _split(body, restricted, comps)
        case PPar(l, r):
            _split(l, restricted, comps)
            _split(r, restricted, comps)
        case _:
            comps.append(p)


class _PiSplitter(canon.Splitter):
    def free(self, comp):
        return free_names(comp)

    def dead_polarity(self, comp, name):
        match comp:
            case PIn(a, x, body) | PRep(a, x, body) if a == name:
                return "in" if name not in free_names(body) or name == x else None
            case POut(a, b, body) if a == name and b != name:
                return "out" if name not in free_names(body) else None
        return None

    def key(self, comp, env, depth):
        n = lambda s: env.get(s, s)  # noqa: E731
        match comp:
            case PIn(a, x, body) | PRep(a, x, body):
                tok = f"#{depth}"
                bang = "!" if isinstance(comp, PRep) else ""
                return f"{bang}{n(a)}({tok}).{_key(body, {**env, x: tok}, depth + 1)}"
            case POut(a, b, body):
                return f"{n(a)}<{n(b)}>.{_key(body, env, depth)}"
        raise TypeError(comp)


_SPLITTER = _PiSplitter()


def _key(p: PiProcess, env: dict[str, str], depth: int) -> str:
    restricted: list[str] = []
    comps: list = []
    _split(p, restricted, comps)
    return canon.assemble(restricted, comps, _SPLITTER, env, depth)


@lru_cache(maxsize=200_000)
def _unique(p: PiProcess) -> PiProcess:
    return _uniquify(p)


def struct_key(p: PiProcess, env: dict[str, str] | None = None) -> str:
    """Key identifying ``p`` up to alpha, structural congruence and dead code."""
    if env is None:
        return _cached_key(p)
    return _key(_unique(p), env, 0)


@lru_cache(maxsize=200_000)
def _cached_key(p: PiProcess) -> str:
    return _key(_unique(p), {}, 0)


def congruent(p: PiProcess, q: PiProcess) -> bool:
    return struct_key(p) == struct_key(q)


def size(p: PiProcess) -> int:
    match p:
        case PNil():
            return 1
        case PIn(_, _, b) | PRep(_, _, b) | POut(_, _, b) | PRes(_, b):
            return 1 + size(b)
        case PPar(l, r):
            return 1 + size(l) + size(r)
    raise TypeError(p)


def depth(p: PiProcess) -> int:
    """Nesting depth; every operator except nil adds one level."""
    match p:
        case PNil():
            return 0
        case PIn(_, _, b) | PRep(_, _, b) | POut(_, _, b) | PRes(_, b):
            return 1 + depth(b)
        case PPar(l, r):
            return 1 + max(depth(l), depth(r))
    raise TypeError(p)
