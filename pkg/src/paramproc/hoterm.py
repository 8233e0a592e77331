"""Terms of the higher-order calculus with name and process parameterization.

    T ::= 0 | X | u(X).T | u<T'>.T | T | T' | (nu c)T | !u(X).T | !u<T'>.T
        | lam(U1,...,Un).T | T@(K1,...,Kn)

Parameters ``Ui`` are name variables (lowercase) or process variables
(uppercase). Application arguments are names (``str``) or terms. Applications
reduce by structural congruence, ``(lam(U).T)@(K) == T{K/U}``, which
:func:`normalize` performs eagerly everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from . import canon
from .names import fresh_name, is_process_var


class ApplicationError(ValueError):
    """An application that cannot reduce: non-abstraction head."""


class ArityError(ApplicationError):
    pass


class KindError(ApplicationError):
    pass


class NormalizationError(RuntimeError):
    """Beta reduction did not terminate within the configured fuel."""


@dataclass(frozen=True)
class HNil:
    pass


@dataclass(frozen=True)
class HVar:
    name: str


@dataclass(frozen=True)
class HIn:
    subj: str
    var: str
    body: "HoTerm"


@dataclass(frozen=True)
class HOut:
    subj: str
    payload: "HoTerm"
    body: "HoTerm"


@dataclass(frozen=True)
class HPar:
    left: "HoTerm"
    right: "HoTerm"


@dataclass(frozen=True)
class HRes:
    name: str
    body: "HoTerm"


@dataclass(frozen=True)
class HRepIn:
    subj: str
    var: str
    body: "HoTerm"


@dataclass(frozen=True)
class HRepOut:
    subj: str
    payload: "HoTerm"
    body: "HoTerm"


@dataclass(frozen=True)
class HAbs:
    params: tuple[str, ...]
    body: "HoTerm"

    def __post_init__(self):
        if not self.params:
            raise ValueError("abstraction needs at least one parameter")
        if len(set(self.params)) != len(self.params):
            raise ValueError(f"abstraction parameters must be distinct: {self.params}")


@dataclass(frozen=True)
class HApp:
    fn: "HoTerm"
    args: tuple  # each a name (str) or an HoTerm


HoTerm = Union[HNil, HVar, HIn, HOut, HPar, HRes, HRepIn, HRepOut, HAbs, HApp]

def _cached_hash(self):
    # terms are immutable trees that serve as cache keys everywhere; hash once
    d = self.__dict__
    h = d.get("_hash")
    if h is None:
        h = hash((self._tag,) + tuple([d[f] for f in self._hash_fields]))
        object.__setattr__(self, "_hash", h)
    return h


for _cls in (HNil, HVar, HIn, HOut, HPar, HRes, HRepIn, HRepOut, HAbs, HApp):
    _cls._tag = _cls.__name__
    _cls._hash_fields = tuple(_cls.__dataclass_fields__)
    _cls.__hash__ = _cached_hash

NIL = HNil()


def hpar(*terms: HoTerm) -> HoTerm:
    items = [t for t in terms if not isinstance(t, HNil)]
    if not items:
        return NIL
    out = items[-1]
    for t in reversed(items[:-1]):
        out = HPar(t, out)
    return out


def hres(names, body: HoTerm) -> HoTerm:
    for n in reversed(list(names)):
        body = HRes(n, body)
    return body


# -- free and bound identifiers ---------------------------------------------

@lru_cache(maxsize=400_000)
def _free(t: HoTerm) -> tuple[frozenset[str], frozenset[str]]:
    """(free names, free process variables)."""
    match t:
        case HNil():
            return frozenset(), frozenset()
        case HVar(x):
            return frozenset(), frozenset({x})
        case HIn(a, x, body) | HRepIn(a, x, body):
            n, p = _free(body)
            return n | {a}, p - {x}
        case HOut(a, pay, body) | HRepOut(a, pay, body):
            n1, p1 = _free(pay)
            n2, p2 = _free(body)
            return n1 | n2 | {a}, p1 | p2
        case HPar(l, r):
            n1, p1 = _free(l)
            n2, p2 = _free(r)
            return n1 | n2, p1 | p2
        case HRes(c, body):
            n, p = _free(body)
            return n - {c}, p
        case HAbs(params, body):
            n, p = _free(body)
            return n - set(params), p - set(params)
        case HApp(f, args):
            n, p = _free(f)
            for a in args:
                if isinstance(a, str):
                    n = n | {a}
                else:
                    n2, p2 = _free(a)
                    n, p = n | n2, p | p2
            return n, p
    raise TypeError(f"not a higher-order term: {t!r}")


def free_names(t: HoTerm) -> frozenset[str]:
    return _free(t)[0]


def free_process_vars(t: HoTerm) -> frozenset[str]:
    return _free(t)[1]


@lru_cache(maxsize=400_000)
def all_idents(t: HoTerm) -> frozenset[str]:
    """Every identifier occurring in ``t``, free or bound."""
    match t:
        case HNil():
            return frozenset()
        case HVar(x):
            return frozenset({x})
        case HIn(a, x, body) | HRepIn(a, x, body):
            return all_idents(body) | {a, x}
        case HOut(a, pay, body) | HRepOut(a, pay, body):
            return all_idents(pay) | all_idents(body) | {a}
        case HPar(l, r):
            return all_idents(l) | all_idents(r)
        case HRes(c, body):
            return all_idents(body) | {c}
        case HAbs(params, body):
            return all_idents(body) | set(params)
        case HApp(f, args):
            out = all_idents(f)
            for a in args:
                out = out | ({a} if isinstance(a, str) else all_idents(a))
            return out
    raise TypeError(t)


def is_closed(t: HoTerm) -> bool:
    return not free_process_vars(t)


# -- substitution -------------------------------------------------------------

def substitute(t: HoTerm, names: dict[str, str] | None = None,
               procs: dict[str, HoTerm] | None = None) -> HoTerm:
    """Simultaneous capture-avoiding substitution of names and process variables."""
    names = {k: v for k, v in (names or {}).items() if k != v}
    procs = dict(procs or {})
    if not names and not procs:
        return t
    danger_n = set(names.values())
    danger_p: set[str] = set()
    for v in procs.values():
        n, p = _free(v)
        danger_n |= n
        danger_p |= p
    return _subst(t, names, procs, frozenset(danger_n), frozenset(danger_p))


def _subst(t, nm, pm, dn, dp):
    if not nm and not pm:
        return t
    match t:
        case HNil():
            return t
        case HVar(x):
            return pm.get(x, t)
        case HIn(a, x, body) | HRepIn(a, x, body):
            x2, nm2, pm2 = _binder(x, body, nm, pm, dn, dp)
            return type(t)(nm.get(a, a), x2, _subst(body, nm2, pm2, dn, dp))
        case HOut(a, pay, body) | HRepOut(a, pay, body):
            return type(t)(nm.get(a, a), _subst(pay, nm, pm, dn, dp), _subst(body, nm, pm, dn, dp))
        case HPar(l, r):
            return HPar(_subst(l, nm, pm, dn, dp), _subst(r, nm, pm, dn, dp))
        case HRes(c, body):
            c2, nm2, pm2 = _binder(c, body, nm, pm, dn, dp)
            return HRes(c2, _subst(body, nm2, pm2, dn, dp))
        case HAbs(params, body):
            new_params = []
            nm2, pm2 = nm, pm
            for u in params:
                u2, nm2, pm2 = _binder(u, body, nm2, pm2, dn, dp, extra=set(params))
                new_params.append(u2)
            return HAbs(tuple(new_params), _subst(body, nm2, pm2, dn, dp))
        case HApp(f, args):
            return HApp(_subst(f, nm, pm, dn, dp),
                        tuple(nm.get(a, a) if isinstance(a, str) else _subst(a, nm, pm, dn, dp)
                              for a in args))
    raise TypeError(t)


def _binder(u, body, nm, pm, dn, dp, extra=()):
    if is_process_var(u):
        pm = {k: v for k, v in pm.items() if k != u}
        if u in dp:
            new = fresh_name(dp | set(pm) | all_idents(body) | set(extra), u)
            pm[u] = HVar(new)
            return new, nm, pm
        return u, nm, pm
    nm = {k: v for k, v in nm.items() if k != u}
    if u in dn:
        new = fresh_name(dn | set(nm) | all_idents(body) | set(extra), u)
        nm[u] = new
        return new, nm, pm
    return u, nm, pm


def subst_name(t: HoTerm, new: str, old: str) -> HoTerm:
    """``t{new/old}`` for names."""
    return substitute(t, names={old: new})


def subst_term(t: HoTerm, a: HoTerm, x: str) -> HoTerm:
    """Higher-order substitution ``t{a/x}``."""
    if not is_process_var(x):
        raise KindError(f"{x!r} is a name variable; cannot substitute a term for it")
    if not isinstance(a, (HNil, HVar, HIn, HOut, HPar, HRes, HRepIn, HRepOut, HAbs, HApp)):
        raise KindError(f"cannot substitute {a!r} for process variable {x!r}")
    return substitute(t, procs={x: a})


def instantiate(f: HAbs, args) -> HoTerm:
    """Body of ``f`` with its parameters replaced by ``args`` (no further reduction)."""
    if len(args) != len(f.params):
        raise ArityError(f"abstraction of arity {len(f.params)} applied to {len(args)} argument(s)")
    nm: dict[str, str] = {}
    pm: dict[str, HoTerm] = {}
    for u, k in zip(f.params, args):
        if is_process_var(u):
            if isinstance(k, str):
                raise KindError(f"process parameter {u} given name {k!r}")
            pm[u] = k
        else:
            if not isinstance(k, str):
                raise KindError(f"name parameter {u} given a process")
            nm[u] = k
    return substitute(f.body, nm, pm)


# -- normalization --------------------------------------------------------------

DEFAULT_FUEL = 20_000


def beta(t: HoTerm, fuel: int = DEFAULT_FUEL) -> HoTerm:
    """Reduce every application, flatten parallel composition, drop nil units."""
    if fuel == DEFAULT_FUEL:
        return _beta_default(t)
    return _beta(t, [fuel])


@lru_cache(maxsize=200_000)
def _beta_default(t: HoTerm) -> HoTerm:
    return _beta(t, [DEFAULT_FUEL])


def _beta(t, budget):
    match t:
        case HNil() | HVar():
            return t
        case HIn(a, x, body) | HRepIn(a, x, body):
            return type(t)(a, x, _beta(body, budget))
        case HOut(a, pay, body) | HRepOut(a, pay, body):
            return type(t)(a, _beta(pay, budget), _beta(body, budget))
        case HPar():
            items = []
            for part in _par_items(t):
                items.extend(_par_items(_beta(part, budget)))
            return hpar(*items)
        case HRes(c, body):
            return HRes(c, _beta(body, budget))
        case HAbs(params, body):
            return HAbs(params, _beta(body, budget))
        case HApp():
            # iterate rather than recurse so that fuel, not the stack, bounds a
            # chain of redexes
            while isinstance(t, HApp):
                f2 = _beta(t.fn, budget)
                args2 = tuple(a if isinstance(a, str) else _beta(a, budget) for a in t.args)
                if isinstance(f2, (HVar, HApp)):
                    return HApp(f2, args2)
                if not isinstance(f2, HAbs):
                    raise ApplicationError(f"cannot apply a non-abstraction: {f2!r}")
                budget[0] -= 1
                if budget[0] < 0:
                    raise NormalizationError("application reduction exceeded its fuel")
                t = instantiate(f2, args2)
            return _beta(t, budget)
    raise TypeError(t)


def _par_items(t: HoTerm) -> list[HoTerm]:
    if isinstance(t, HPar):
        return _par_items(t.left) + _par_items(t.right)
    if isinstance(t, HNil):
        return []
    return [t]


def alpha_canonical(t: HoTerm) -> HoTerm:
    taken = set(free_names(t)) | set(free_process_vars(t))

    def bind(u, env):
        new = fresh_name(taken, "X" if is_process_var(u) else "x")
        taken.add(new)
        return new, {**env, u: new}

    def bind_c(c, env):
        new = fresh_name(taken, "c")
        taken.add(new)
        return new, {**env, c: new}

    def go(q, env):
        n = lambda s: env.get(s, s)  # noqa: E731
        match q:
            case HNil():
                return q
            case HVar(x):
                return HVar(n(x))
            case HIn(a, x, body) | HRepIn(a, x, body):
                x2, env2 = bind(x, env)
                return type(q)(n(a), x2, go(body, env2))
            case HOut(a, pay, body) | HRepOut(a, pay, body):
                return type(q)(n(a), go(pay, env), go(body, env))
            case HPar(l, r):
                return HPar(go(l, env), go(r, env))
            case HRes(c, body):
                c2, env2 = bind_c(c, env)
                return HRes(c2, go(body, env2))
            case HAbs(params, body):
                ps = []
                env2 = env
                for u in params:
                    u2, env2 = bind(u, env2)
                    ps.append(u2)
                return HAbs(tuple(ps), go(body, env2))
            case HApp(f, args):
                return HApp(go(f, env), tuple(n(a) if isinstance(a, str) else go(a, env) for a in args))
        raise TypeError(q)

    return go(t, {})


@lru_cache(maxsize=100_000)
def normalize(t: HoTerm) -> HoTerm:
    """Normal form: applications reduced, parallel flattened, nil units removed,
    bound identifiers renamed canonically. Restriction structure is kept."""
    return alpha_canonical(beta(t))


def alpha_eq(t1: HoTerm, t2: HoTerm) -> bool:
    return alpha_canonical(t1) == alpha_canonical(t2)


# -- structural keys -----------------------------------------------------------

def _uniquify(t: HoTerm, avoid: frozenset[str] = frozenset()) -> HoTerm:
    """Rename binders apart from each other, from free identifiers and from ``avoid``."""
    taken = set(all_idents(t)) | set(avoid)

    def bind(u, env):
        new = fresh_name(taken, u)
        taken.add(new)
        return new, {**env, u: new}

    def go(q, env):
        n = lambda s: env.get(s, s)  # noqa: E731
        match q:
            case HNil():
                return q
            case HVar(x):
                return HVar(n(x))
            case HIn(a, x, body) | HRepIn(a, x, body):
                x2, env2 = bind(x, env)
                return type(q)(n(a), x2, go(body, env2))
            case HOut(a, pay, body) | HRepOut(a, pay, body):
                return type(q)(n(a), go(pay, env), go(body, env))
            case HPar(l, r):
                return HPar(go(l, env), go(r, env))
            case HRes(c, body):
                c2, env2 = bind(c, env)
                return HRes(c2, go(body, env2))
            case HAbs(params, body):
                ps = []
                env2 = env
                for u in params:
                    u2, env2 = bind(u, env2)
                    ps.append(u2)
                return HAbs(tuple(ps), go(body, env2))
            case HApp(f, args):
                return HApp(go(f, env), tuple(n(a) if isinstance(a, str) else go(a, env) for a in args))
        raise TypeError(q)

    return go(t, {})


def _split(t, restricted, comps):
    match t:
        case HNil():
            return
        case HRes(c, body):
            restricted.append(c)
            _split(body, restricted, comps)
        case HPar(l, r):
            _split(l, restricted, comps)
            _split(r, restricted, comps)
        case _:
            comps.append(t)


class _HoSplitter(canon.Splitter):
    def free(self, comp):
        return free_names(comp)

    def dead_polarity(self, comp, name):
        match comp:
            case HIn(a, _, body) | HRepIn(a, _, body) if a == name:
                return "in" if name not in free_names(body) else None
            case HOut(a, pay, body) | HRepOut(a, pay, body) if a == name:
                if name in free_names(pay) or name in free_names(body):
                    return None
                return "out"
        return None

    def key(self, comp, env, depth):
        return _comp_key(comp, env, depth)


_SPLITTER = _HoSplitter()


def _comp_key(t, env, depth):
    n = lambda s: env.get(s, s)  # noqa: E731
    match t:
        case HVar(x):
            return n(x)
        case HIn(a, x, body) | HRepIn(a, x, body):
            tok = f"#{depth}"
            bang = "!" if isinstance(t, HRepIn) else ""
            return f"{bang}{n(a)}({tok}).{_key(body, {**env, x: tok}, depth + 1)}"
        case HOut(a, pay, body) | HRepOut(a, pay, body):
            bang = "!" if isinstance(t, HRepOut) else ""
            return f"{bang}{n(a)}<{_key(pay, env, depth)}>.{_key(body, env, depth)}"
        case HAbs(params, body):
            env2 = dict(env)
            toks = []
            for i, u in enumerate(params):
                tok = f"#{depth + i}" + ("P" if is_process_var(u) else "")
                env2[u] = tok
                toks.append(tok)
            return f"lam({','.join(toks)}).{_key(body, env2, depth + len(params))}"
        case HApp(f, args):
            head = _comp_key(f, env, depth)
            parts = [n(a) if isinstance(a, str) else _key(a, env, depth) for a in args]
            return f"[{head}]@({','.join(parts)})"
    raise TypeError(t)


def _key(t, env, depth):
    restricted: list[str] = []
    comps: list = []
    _split(t, restricted, comps)
    return canon.assemble(restricted, comps, _SPLITTER, env, depth)


@lru_cache(maxsize=200_000)
def _prepared(t: HoTerm) -> HoTerm:
    return _uniquify(beta(t))


@lru_cache(maxsize=200_000)
def _cached_key(t: HoTerm) -> str:
    return _key(_prepared(t), {}, 0)


def struct_key(t: HoTerm, env: dict[str, str] | None = None) -> str:
    """Key identifying ``t`` up to alpha, beta, structural congruence and dead code."""
    if env is None:
        return _cached_key(t)
    return _key(_prepared(t), env, 0)


def groups(t: HoTerm) -> list[tuple[list[str], list[HoTerm]]]:
    """Parallel components of ``t`` as ``(restricted names, guarded members)``,
    with no restricted name shared between two components."""
    restricted: list[str] = []
    comps: list = []
    _split(_prepared(t), restricted, comps)
    return canon.components(restricted, comps, _SPLITTER)


def components(t: HoTerm) -> list[HoTerm]:
    return [hres(names, hpar(*members)) for names, members in groups(t)]


def congruent(t1: HoTerm, t2: HoTerm) -> bool:
    return struct_key(t1) == struct_key(t2)


def size(t: HoTerm) -> int:
    match t:
        case HNil() | HVar():
            return 1
        case HIn(_, _, b) | HRepIn(_, _, b) | HRes(_, b) | HAbs(_, b):
            return 1 + size(b)
        case HOut(_, p, b) | HRepOut(_, p, b):
            return 1 + size(p) + size(b)
        case HPar(l, r):
            return 1 + size(l) + size(r)
        case HApp(f, args):
            return 1 + size(f) + sum(1 if isinstance(a, str) else size(a) for a in args)
    raise TypeError(t)


def plug(context: HoTerm, hole: str, filler: HoTerm) -> HoTerm:
    """Fill every occurrence of the hole variable literally.

    Unlike :func:`subst_term`, binders of the context may capture free names of
    the filler, which is how testing contexts such as ``(nu a)([.] | T)`` work.
    """
    match context:
        case HVar(x):
            return filler if x == hole else context
        case HNil():
            return context
        case HIn(a, x, body) | HRepIn(a, x, body):
            return context if x == hole else type(context)(a, x, plug(body, hole, filler))
        case HOut(a, pay, body) | HRepOut(a, pay, body):
            return type(context)(a, plug(pay, hole, filler), plug(body, hole, filler))
        case HPar(l, r):
            return HPar(plug(l, hole, filler), plug(r, hole, filler))
        case HRes(c, body):
            return HRes(c, plug(body, hole, filler))
        case HAbs(params, body):
            return context if hole in params else HAbs(params, plug(body, hole, filler))
        case HApp(f, args):
            return HApp(plug(f, hole, filler),
                        tuple(a if isinstance(a, str) else plug(a, hole, filler) for a in args))
    raise TypeError(context)
