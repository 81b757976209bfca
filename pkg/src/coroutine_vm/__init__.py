"""Workbench for functional coroutines.

Two calculi (catch/throw with global indices, getctx/setctx with local ones),
the safety judgments that carve out the coroutine-respecting fragment, the
translation between the calculi, three Krivine-style machines, and lock-step
checkers that validate the machines against each other.
"""

from .bisim import (
    LockstepReport,
    SimulationMaps,
    deep_eq,
    diamond_closure,
    diamond_state,
    flatten,
    lockstep,
    star_closure,
    star_state,
)
from .debruijn import to_debruijn_ct, to_debruijn_gs
from .errors import (
    NotSafeError,
    NotVisibleError,
    OpenMuTermError,
    OpenTermError,
    ParseError,
    UnboundNameError,
    UnsafeLocalIndexError,
    WorkbenchError,
)
from .machines import (
    ClosureCT,
    ClosureGS,
    ClosureIT,
    RunResult,
    StateCT,
    StateGS,
    StateIT,
    TraceEvent,
    initial_ct,
    initial_gs,
    initial_it,
    run,
    step_ct,
    step_gs,
    step_it,
)
from .gen import gen_ct_db, gen_gs_db, gen_named_ct, gen_named_gs
from .parser import parse, parse_ct, parse_gs
from .plist import NIL, PList, plist
from .safety import UseSets, VisibleEnv, is_safe, safe_db, safe_named, use_sets
from .terms import (
    App,
    Catch,
    GetContext,
    Lam,
    NApp,
    NCatch,
    NGetContext,
    NLam,
    NSetContext,
    NThrow,
    NVar,
    SetContext,
    Throw,
    Var,
    ct_to_gs_named,
    gs_to_ct_named,
    is_closed_ct,
    is_scoped_gs,
    print_term,
)
from .translate import down, lift

__all__ = [
    "LockstepReport",
    "SimulationMaps",
    "deep_eq",
    "diamond_closure",
    "diamond_state",
    "flatten",
    "lockstep",
    "star_closure",
    "star_state",
    "to_debruijn_ct",
    "to_debruijn_gs",
    "NotSafeError",
    "NotVisibleError",
    "OpenMuTermError",
    "OpenTermError",
    "ParseError",
    "UnboundNameError",
    "UnsafeLocalIndexError",
    "WorkbenchError",
    "ClosureCT",
    "ClosureGS",
    "ClosureIT",
    "RunResult",
    "StateCT",
    "StateGS",
    "StateIT",
    "TraceEvent",
    "initial_ct",
    "initial_gs",
    "initial_it",
    "run",
    "step_ct",
    "step_gs",
    "step_it",
    "parse",
    "parse_ct",
    "parse_gs",
    "NIL",
    "PList",
    "plist",
    "UseSets",
    "VisibleEnv",
    "is_safe",
    "safe_db",
    "safe_named",
    "use_sets",
    "print_term",
    "down",
    "lift",
    "gen_ct_db",
    "gen_gs_db",
    "gen_named_ct",
    "gen_named_gs",
    "App",
    "Catch",
    "GetContext",
    "Lam",
    "NApp",
    "NCatch",
    "NGetContext",
    "NLam",
    "NSetContext",
    "NThrow",
    "NVar",
    "SetContext",
    "Throw",
    "Var",
    "ct_to_gs_named",
    "gs_to_ct_named",
    "is_closed_ct",
    "is_scoped_gs",
]
