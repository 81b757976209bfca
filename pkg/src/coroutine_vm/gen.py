"""Seeded random term generators.

Every generator emits closed terms and is deterministic for a given Random
instance. The getctx/setctx generators thread the visible-variable state the
same way the visibility judgment does (Lam pushes, getctx snapshots, setctx
restores), choosing variables from the visible list only, so their output is
well-scoped by construction and translates without error. The catch/throw
generators come in two flavors: visibility-respecting (safe by construction)
and arbitrary-closed (variables drawn from all binders in scope, so a mix of
safe and unsafe terms, which is what the equivalence and lift suites need).

Binder names are globally distinct within one term (x0, x1, ... / k0, k1,
...), which keeps the shadowing question out of the equivalence suites.
"""

from __future__ import annotations

import random

from .terms import (
    App,
    Catch,
    GetContext,
    Lam,
    NamedTermCT,
    NamedTermGS,
    NApp,
    NCatch,
    NGetContext,
    NLam,
    NSetContext,
    NThrow,
    NVar,
    SetContext,
    TermCT,
    TermGS,
    Throw,
    Var,
)

# Relative weights for feasible constructors.
_W_VAR, _W_APP, _W_LAM, _W_CAPTURE, _W_RESTORE = 5, 4, 3, 2, 2


def _pick(rng: random.Random, choices: list[tuple[str, int]]) -> str:
    names = [name for name, _ in choices]
    weights = [w for _, w in choices]
    return rng.choices(names, weights=weights, k=1)[0]


class _Names:
    def __init__(self):
        self.vars = 0
        self.labels = 0

    def var(self) -> str:
        self.vars += 1
        return f"x{self.vars - 1}"

    def label(self) -> str:
        self.labels += 1
        return f"k{self.labels - 1}"


def _gen_named(rng, size, names, visible, bound, labels, calculus, safe_only):
    """Shared recursion for the named generators.

    visible: names visible in the current coroutine (newest first).
    bound: every Lam binder in scope (what unsafe-ok variables draw from).
    labels: (label, visible-snapshot) pairs, newest first.
    """
    var_pool = visible if safe_only else bound
    choices = []
    if var_pool:
        choices.append(("var", _W_VAR))
    if size >= 3:
        choices.append(("app", _W_APP))
    if size >= 2:
        choices.append(("lam", _W_LAM))
        choices.append(("capture", _W_CAPTURE))
        if labels:
            choices.append(("restore", _W_RESTORE))
    if not choices or (size <= 1 and var_pool):
        if var_pool:
            return NVar(rng.choice(var_pool))
        choices = [("lam", 1)]  # no binder in scope yet: introduce one

    match _pick(rng, choices):
        case "var":
            return NVar(rng.choice(var_pool))
        case "app":
            left = rng.randint(1, size - 2)
            fn = _gen_named(rng, left, names, visible, bound, labels, calculus, safe_only)
            arg = _gen_named(rng, size - 1 - left, names, visible, bound, labels, calculus, safe_only)
            return NApp(fn, arg)
        case "lam":
            param = names.var()
            body = _gen_named(rng, size - 1, names, (param,) + visible, (param,) + bound, labels, calculus, safe_only)
            return NLam(param, body)
        case "capture":
            label = names.label()
            body = _gen_named(
                rng, size - 1, names, visible, bound, ((label, visible),) + labels, calculus, safe_only
            )
            return NCatch(label, body) if calculus == "ct" else NGetContext(label, body)
        case "restore":
            label, snapshot = labels[rng.randrange(len(labels))]
            restored = snapshot if safe_only else visible
            body = _gen_named(rng, size - 1, names, restored, bound, labels, calculus, safe_only)
            return NThrow(label, body) if calculus == "ct" else NSetContext(label, body)
    raise AssertionError("unreachable")


def gen_named_ct(rng: random.Random, size: int, unsafe_ok: bool = False) -> NamedTermCT:
    """A closed named catch/throw term; with unsafe_ok, safety is not enforced."""
    return _gen_named(rng, max(1, size), _Names(), (), (), (), "ct", safe_only=not unsafe_ok)


def gen_named_gs(rng: random.Random, size: int) -> NamedTermGS:
    """A closed, visibility-respecting named getctx/setctx term."""
    return _gen_named(rng, max(1, size), _Names(), (), (), (), "gs", safe_only=True)


def gen_gs_db(rng: random.Random, size: int) -> TermGS:
    """A closed, well-scoped index-form getctx/setctx term.

    Local validity depends only on visible-vector lengths, so the generator
    threads just those.
    """
    return _gen_gs_db(rng, max(1, size), 0, ())


def _gen_gs_db(rng, size, visible_len, snapshot_lens):
    choices = []
    if visible_len > 0:
        choices.append(("var", _W_VAR))
    if size >= 3:
        choices.append(("app", _W_APP))
    if size >= 2:
        choices.append(("lam", _W_LAM))
        choices.append(("capture", _W_CAPTURE))
        if snapshot_lens:
            choices.append(("restore", _W_RESTORE))
    if not choices or (size <= 1 and visible_len > 0):
        if visible_len > 0:
            return Var(rng.randrange(visible_len))
        choices = [("lam", 1)]

    match _pick(rng, choices):
        case "var":
            return Var(rng.randrange(visible_len))
        case "app":
            left = rng.randint(1, size - 2)
            return App(
                _gen_gs_db(rng, left, visible_len, snapshot_lens),
                _gen_gs_db(rng, size - 1 - left, visible_len, snapshot_lens),
            )
        case "lam":
            return Lam(_gen_gs_db(rng, size - 1, visible_len + 1, snapshot_lens))
        case "capture":
            return GetContext(_gen_gs_db(rng, size - 1, visible_len, (visible_len,) + snapshot_lens))
        case "restore":
            label = rng.randrange(len(snapshot_lens))
            return SetContext(label, _gen_gs_db(rng, size - 1, snapshot_lens[label], snapshot_lens))
    raise AssertionError("unreachable")


def gen_ct_db(rng: random.Random, size: int) -> TermCT:
    """A closed index-form catch/throw term, arbitrary (often unsafe)."""
    return _gen_ct_db(rng, max(1, size), 0, 0)


def _gen_ct_db(rng, size, lam_depth, label_depth):
    choices = []
    if lam_depth > 0:
        choices.append(("var", _W_VAR))
    if size >= 3:
        choices.append(("app", _W_APP))
    if size >= 2:
        choices.append(("lam", _W_LAM))
        choices.append(("capture", _W_CAPTURE))
        if label_depth > 0:
            choices.append(("restore", _W_RESTORE))
    if not choices or (size <= 1 and lam_depth > 0):
        if lam_depth > 0:
            return Var(rng.randrange(lam_depth))
        choices = [("lam", 1)]

    match _pick(rng, choices):
        case "var":
            return Var(rng.randrange(lam_depth))
        case "app":
            left = rng.randint(1, size - 2)
            return App(
                _gen_ct_db(rng, left, lam_depth, label_depth),
                _gen_ct_db(rng, size - 1 - left, lam_depth, label_depth),
            )
        case "lam":
            return Lam(_gen_ct_db(rng, size - 1, lam_depth + 1, label_depth))
        case "capture":
            return Catch(_gen_ct_db(rng, size - 1, lam_depth, label_depth + 1))
        case "restore":
            return Throw(rng.randrange(label_depth), _gen_ct_db(rng, size - 1, lam_depth, label_depth))
    raise AssertionError("unreachable")
