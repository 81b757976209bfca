"""Safety judgments for catch/throw terms.

A term is *safe* when no coroutine touches the local environment of another
coroutine. Three equivalent formulations are implemented independently and
cross-checked by the test suite:

  * use_sets / is_safe: synthesize, per free label, the set of variables the
    corresponding coroutine uses, then require that no Lam binder occurs in a
    use set of a label free in its body;
  * safe_named: thread the visible-variable list per coroutine down
    the term and test membership at each variable;
  * safe_db: the index-form judgment over depth vectors, used by
    the translation and the machines.

Keep the three independent: they are each other's oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import OpenMuTermError, TermPath
from .plist import NIL, PList
from .terms import (
    App,
    Catch,
    Lam,
    NamedTermCT,
    NApp,
    NCatch,
    NLam,
    NThrow,
    NVar,
    TermCT,
    Throw,
    Var,
)

# ---------------------------------------------------------------------------
# Use sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UseSets:
    """Variables used by the current coroutine and by each free label's coroutine."""

    current: frozenset[str]
    per_label: dict[str, frozenset[str]]


def use_sets(t: NamedTermCT) -> UseSets:
    match t:
        case NVar(name):
            return UseSets(frozenset({name}), {})
        case NApp(fn, arg):
            left, right = use_sets(fn), use_sets(arg)
            merged = dict(left.per_label)
            for label, names in right.per_label.items():
                merged[label] = merged.get(label, frozenset()) | names
            return UseSets(left.current | right.current, merged)
        case NLam(param, body):
            inner = use_sets(body)
            return UseSets(
                inner.current - {param},
                {label: names - {param} for label, names in inner.per_label.items()},
            )
        case NCatch(label, body):
            inner = use_sets(body)
            rest = {name: names for name, names in inner.per_label.items() if name != label}
            return UseSets(inner.current | inner.per_label.get(label, frozenset()), rest)
        case NThrow(label, body):
            inner = use_sets(body)
            out = dict(inner.per_label)
            out[label] = inner.per_label.get(label, frozenset()) | inner.current
            return UseSets(frozenset(), out)
    raise TypeError(f"not a named catch/throw term: {t!r}")


def is_safe(t: NamedTermCT) -> bool:
    """True iff for every subterm \\x. u and every label free in u, x is not in u's use set for that label."""
    match t:
        case NVar():
            return True
        case NApp(fn, arg):
            return is_safe(fn) and is_safe(arg)
        case NLam(param, body):
            body_uses = use_sets(body)
            if any(param in names for names in body_uses.per_label.values()):
                return False
            return is_safe(body)
        case NCatch(_, body) | NThrow(_, body):
            return is_safe(body)
    raise TypeError(f"not a named catch/throw term: {t!r}")

# ---------------------------------------------------------------------------
# Visibility form on named terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VisibleEnv:
    """A visible-variable list plus one snapshot of it per label in scope.

    Lists are scope snapshots; duplicates are allowed and lookup is leftmost.
    """

    v: tuple[str, ...] = ()
    v_mu: dict[str, tuple[str, ...]] = field(default_factory=dict)


def safe_named(t: NamedTermCT, env: VisibleEnv | None = None) -> bool:
    """Visibility judgment: every variable must be visible in its own coroutine.

    Every free label of t must be in env.v_mu (for closed terms the empty env
    works); a miss raises OpenMuTermError.
    """
    env = env or VisibleEnv()
    return _safe_named(t, env.v, dict(env.v_mu), ())


def _safe_named(t: NamedTermCT, v: tuple[str, ...], v_mu: dict[str, tuple[str, ...]], path: TermPath) -> bool:
    match t:
        case NVar(name):
            return name in v
        case NApp(fn, arg):
            return _safe_named(fn, v, v_mu, path + ("fn",)) and _safe_named(arg, v, v_mu, path + ("arg",))
        case NLam(param, body):
            return _safe_named(body, (param,) + v, v_mu, path + ("body",))
        case NCatch(label, body):
            return _safe_named(body, v, {**v_mu, label: v}, path + ("body",))
        case NThrow(label, body):
            if label not in v_mu:
                raise OpenMuTermError(label, len(v_mu), path)
            return _safe_named(body, v_mu[label], v_mu, path + ("body",))
    raise TypeError(f"not a named catch/throw term: {t!r}")

# ---------------------------------------------------------------------------
# Index form
# ---------------------------------------------------------------------------


def safe_db(t: TermCT, depth: int = 0, vec: PList = NIL, table: PList = NIL) -> bool:
    """Index-form safety judgment.

    depth counts Lam binders from the root; vec holds the binder depths
    visible in the current coroutine (newest first, strictly decreasing);
    table holds one such vector per label in scope. A variable at index g
    refers to the binder at depth depth - g and is safe iff that depth is a
    member of vec.
    """
    return _safe_db(t, depth, vec, table, ())


def _safe_db(t: TermCT, depth: int, vec: PList, table: PList, path: TermPath) -> bool:
    match t:
        case Var(index):
            return (depth - index) in vec
        case App(fn, arg):
            return _safe_db(fn, depth, vec, table, path + ("fn",)) and _safe_db(arg, depth, vec, table, path + ("arg",))
        case Lam(body):
            assert not vec or depth + 1 > vec.head, "visibility vector must stay strictly decreasing"
            return _safe_db(body, depth + 1, vec.cons(depth + 1), table, path + ("body",))
        case Catch(body):
            return _safe_db(body, depth, vec, table.cons(vec), path + ("body",))
        case Throw(label, body):
            if label >= len(table):
                raise OpenMuTermError(label, len(table), path)
            return _safe_db(body, depth, table[label], table, path + ("body",))
    raise TypeError(f"not a catch/throw term: {t!r}")
