"""Term syntax for the two calculi, in named and index form.

Named terms are what the parser produces and the printer renders; index terms
are what the safety judgment, the translation and the machines consume. Both
calculi share variable/application/abstraction nodes; they differ only in the
control pair (catch/throw vs getctx/setctx).

Index terms use 0-based indices in two separate name spaces:
  * variable indices count intervening Lam binders (catch/throw calculus) or
    positions in the current coroutine's visible vector (getctx/setctx
    calculus);
  * label indices count intervening Catch / GetContext binders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

# ---------------------------------------------------------------------------
# Named terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class NVar:
    name: str


@dataclass(frozen=True, slots=True)
class NApp:
    fn: "NamedTerm"
    arg: "NamedTerm"


@dataclass(frozen=True, slots=True)
class NLam:
    param: str
    body: "NamedTerm"


@dataclass(frozen=True, slots=True)
class NCatch:
    label: str
    body: "NamedTerm"


@dataclass(frozen=True, slots=True)
class NThrow:
    label: str
    body: "NamedTerm"


@dataclass(frozen=True, slots=True)
class NGetContext:
    label: str
    body: "NamedTerm"


@dataclass(frozen=True, slots=True)
class NSetContext:
    label: str
    body: "NamedTerm"


NamedTermCT = Union[NVar, NApp, NLam, NCatch, NThrow]
NamedTermGS = Union[NVar, NApp, NLam, NGetContext, NSetContext]
NamedTerm = Union[NamedTermCT, NamedTermGS]

# ---------------------------------------------------------------------------
# Index (de Bruijn) terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Var:
    index: int


@dataclass(frozen=True, slots=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class Lam:
    body: "Term"


@dataclass(frozen=True, slots=True)
class Catch:
    body: "TermCT"


@dataclass(frozen=True, slots=True)
class Throw:
    label: int
    body: "TermCT"


@dataclass(frozen=True, slots=True)
class GetContext:
    body: "TermGS"


@dataclass(frozen=True, slots=True)
class SetContext:
    label: int
    body: "TermGS"


TermCT = Union[Var, App, Lam, Catch, Throw]
TermGS = Union[Var, App, Lam, GetContext, SetContext]
Term = Union[TermCT, TermGS]

PREFIX_NODES = (NLam, NCatch, NThrow, NGetContext, NSetContext, Lam, Catch, Throw, GetContext, SetContext)

# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def print_term(t: NamedTerm | Term) -> str:
    """Render a term in the concrete syntax.

    Prefix-form bodies extend maximally to the right, so a prefix form is
    parenthesized whenever it appears to the left of an application or as an
    argument; parse(print_term(t)) == t for named terms. Index terms render
    variables as #k and binders without names (`\\.`, `catch.`, `get.`).
    """
    match t:
        case NVar(name):
            return name
        case Var(index):
            return f"#{index}"
        case NApp(fn, arg) | App(fn, arg):
            fn_s = _wrap(fn, also_app=False)
            arg_s = _wrap(arg, also_app=True)
            return f"{fn_s} {arg_s}"
        case NLam(param, body):
            return f"\\{param}. {print_term(body)}"
        case NCatch(label, body):
            return f"catch {label}. {print_term(body)}"
        case NThrow(label, body):
            return f"throw {label} {print_term(body)}"
        case NGetContext(label, body):
            return f"getctx {label}. {print_term(body)}"
        case NSetContext(label, body):
            return f"setctx {label} {print_term(body)}"
        case Lam(body):
            return f"\\. {print_term(body)}"
        case Catch(body):
            return f"catch. {print_term(body)}"
        case Throw(label, body):
            return f"throw {label} {print_term(body)}"
        case GetContext(body):
            return f"get. {print_term(body)}"
        case SetContext(label, body):
            return f"set {label} {print_term(body)}"
    raise TypeError(f"not a term: {t!r}")


def _wrap(t: NamedTerm | Term, also_app: bool) -> str:
    text = print_term(t)
    if isinstance(t, PREFIX_NODES) or (also_app and isinstance(t, (NApp, App))):
        return f"({text})"
    return text

# ---------------------------------------------------------------------------
# Closedness / scope checks on index terms
# ---------------------------------------------------------------------------


def is_closed_ct(t: TermCT, lam_depth: int = 0, label_depth: int = 0) -> bool:
    """True iff every Var resolves under the Lam binders and every Throw under the Catch binders."""
    match t:
        case Var(index):
            return index < lam_depth
        case App(fn, arg):
            return is_closed_ct(fn, lam_depth, label_depth) and is_closed_ct(arg, lam_depth, label_depth)
        case Lam(body):
            return is_closed_ct(body, lam_depth + 1, label_depth)
        case Catch(body):
            return is_closed_ct(body, lam_depth, label_depth + 1)
        case Throw(label, body):
            return label < label_depth and is_closed_ct(body, lam_depth, label_depth)
    raise TypeError(f"not a catch/throw term: {t!r}")


def is_scoped_gs(t: TermGS, visible_len: int = 0, snapshot_lens: tuple[int, ...] = ()) -> bool:
    """True iff local and label indices stay in range.

    Local indices are positions in the current coroutine's visible vector, so
    validity depends only on the vector *lengths*: Lam grows the current
    length by one, GetContext snapshots it, SetContext restores a snapshot.
    """
    match t:
        case Var(index):
            return index < visible_len
        case App(fn, arg):
            return is_scoped_gs(fn, visible_len, snapshot_lens) and is_scoped_gs(arg, visible_len, snapshot_lens)
        case Lam(body):
            return is_scoped_gs(body, visible_len + 1, snapshot_lens)
        case GetContext(body):
            return is_scoped_gs(body, visible_len, (visible_len,) + snapshot_lens)
        case SetContext(label, body):
            if label >= len(snapshot_lens):
                return False
            return is_scoped_gs(body, snapshot_lens[label], snapshot_lens)
    raise TypeError(f"not a getctx/setctx term: {t!r}")


def gs_to_ct_named(t: NamedTermGS) -> NamedTermCT:
    """Keyword swap getctx→catch / setctx→throw, leaving everything else alone."""
    match t:
        case NVar():
            return t
        case NApp(fn, arg):
            return NApp(gs_to_ct_named(fn), gs_to_ct_named(arg))
        case NLam(param, body):
            return NLam(param, gs_to_ct_named(body))
        case NGetContext(label, body):
            return NCatch(label, gs_to_ct_named(body))
        case NSetContext(label, body):
            return NThrow(label, gs_to_ct_named(body))
    raise TypeError(f"not a named getctx/setctx term: {t!r}")


def ct_to_gs_named(t: NamedTermCT) -> NamedTermGS:
    """Keyword swap catch→getctx / throw→setctx."""
    match t:
        case NVar():
            return t
        case NApp(fn, arg):
            return NApp(ct_to_gs_named(fn), ct_to_gs_named(arg))
        case NLam(param, body):
            return NLam(param, ct_to_gs_named(body))
        case NCatch(label, body):
            return NGetContext(label, ct_to_gs_named(body))
        case NThrow(label, body):
            return NSetContext(label, ct_to_gs_named(body))
    raise TypeError(f"not a named catch/throw term: {t!r}")
