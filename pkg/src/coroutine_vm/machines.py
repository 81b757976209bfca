"""Three environment machines and a fuel-bounded runner.

All three are Krivine-style: weak head reduction, arguments pushed as
closures, an abstraction meeting an empty stack is the final configuration.

  * ct machine: catch/throw terms with global indices; catch snapshots the
    current stack per label, throw reinstates a snapshot.
  * gs machine: getctx/setctx terms with local indices; a label maps to a
    (local environment, stack) pair, so getctx/setctx capture and restore
    both.
  * it machine: getctx/setctx terms with the global environment of the ct
    machine plus the depth/vector/table indirection that resolves local
    indices at run time.

Step functions are pure: they return the next state (or Final/Stuck) and
never mutate. Environments, stacks, vectors and tables are persistent lists,
so every capture is O(1) and shares structure.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Union

from .errors import OpenTermError, WorkbenchError
from .plist import NIL, PList
from .terms import (
    App,
    Catch,
    GetContext,
    Lam,
    SetContext,
    Term,
    TermCT,
    TermGS,
    Throw,
    Var,
    is_closed_ct,
    is_scoped_gs,
    print_term,
)

UNBOUND_VAR = "unbound_var"
UNBOUND_MU = "unbound_mu"

DEFAULT_MAX_STEPS = 1_000_000
MAX_STEPS_ENV_VAR = "COROUTINE_VM_MAX_STEPS"


def default_max_steps() -> int:
    """Fuel default, overridable through the COROUTINE_VM_MAX_STEPS env var."""
    raw = os.environ.get(MAX_STEPS_ENV_VAR)
    if not raw:
        return DEFAULT_MAX_STEPS
    try:
        return int(raw)
    except ValueError:
        raise WorkbenchError(f"{MAX_STEPS_ENV_VAR} must be an integer, got {raw!r}") from None

# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ClosureCT:
    term: TermCT
    env: PList  # of ClosureCT
    mu_env: PList  # of stacks (PList of ClosureCT)


@dataclass(frozen=True, slots=True)
class StateCT:
    term: TermCT
    env: PList
    mu_env: PList
    stack: PList  # of ClosureCT

    def closure(self) -> ClosureCT:
        return ClosureCT(self.term, self.env, self.mu_env)


@dataclass(frozen=True, slots=True)
class ClosureGS:
    term: TermGS
    lenv: PList  # of ClosureGS
    lenv_mu: PList  # of local environments
    mu_env: PList  # of stacks; same length as lenv_mu (same labels)


@dataclass(frozen=True, slots=True)
class StateGS:
    term: TermGS
    lenv: PList
    lenv_mu: PList
    mu_env: PList
    stack: PList

    def closure(self) -> ClosureGS:
        return ClosureGS(self.term, self.lenv, self.lenv_mu, self.mu_env)


@dataclass(frozen=True, slots=True)
class ClosureIT:
    term: TermGS
    depth: int
    vec: PList  # of binder depths, strictly decreasing
    table: PList  # of vectors; same length as mu_env
    env: PList  # of ClosureIT, global
    mu_env: PList  # of stacks


@dataclass(frozen=True, slots=True)
class StateIT:
    term: TermGS
    depth: int
    vec: PList
    table: PList
    env: PList
    mu_env: PList
    stack: PList

    def closure(self) -> ClosureIT:
        return ClosureIT(self.term, self.depth, self.vec, self.table, self.env, self.mu_env)


State = Union[StateCT, StateGS, StateIT]
Closure = Union[ClosureCT, ClosureGS, ClosureIT]

# ---------------------------------------------------------------------------
# Step outcomes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Next:
    state: State


@dataclass(frozen=True, slots=True)
class Final:
    closure: Closure


@dataclass(frozen=True, slots=True)
class Stuck:
    reason: str


StepOutcome = Union[Next, Final, Stuck]

# ---------------------------------------------------------------------------
# Transition rules
# ---------------------------------------------------------------------------


def step_ct(s: StateCT) -> StepOutcome:
    match s.term:
        case Var(index):
            if index >= len(s.env):
                return Stuck(UNBOUND_VAR)
            entered: ClosureCT = s.env[index]
            return Next(StateCT(entered.term, entered.env, entered.mu_env, s.stack))
        case App(fn, arg):
            pushed = ClosureCT(arg, s.env, s.mu_env)
            return Next(StateCT(fn, s.env, s.mu_env, s.stack.cons(pushed)))
        case Lam(body):
            if not s.stack:
                return Final(s.closure())
            return Next(StateCT(body, s.env.cons(s.stack.head), s.mu_env, s.stack.tail))
        case Catch(body):
            return Next(StateCT(body, s.env, s.mu_env.cons(s.stack), s.stack))
        case Throw(label, body):
            if label >= len(s.mu_env):
                return Stuck(UNBOUND_MU)
            return Next(StateCT(body, s.env, s.mu_env, s.mu_env[label]))
    raise TypeError(f"not a catch/throw term: {s.term!r}")


def step_gs(s: StateGS) -> StepOutcome:
    match s.term:
        case Var(index):
            if index >= len(s.lenv):
                return Stuck(UNBOUND_VAR)
            entered: ClosureGS = s.lenv[index]
            return Next(StateGS(entered.term, entered.lenv, entered.lenv_mu, entered.mu_env, s.stack))
        case App(fn, arg):
            pushed = ClosureGS(arg, s.lenv, s.lenv_mu, s.mu_env)
            return Next(StateGS(fn, s.lenv, s.lenv_mu, s.mu_env, s.stack.cons(pushed)))
        case Lam(body):
            if not s.stack:
                return Final(s.closure())
            return Next(StateGS(body, s.lenv.cons(s.stack.head), s.lenv_mu, s.mu_env, s.stack.tail))
        case GetContext(body):
            return Next(StateGS(body, s.lenv, s.lenv_mu.cons(s.lenv), s.mu_env.cons(s.stack), s.stack))
        case SetContext(label, body):
            if len(s.lenv_mu) != len(s.mu_env) or label >= len(s.lenv_mu):
                return Stuck(UNBOUND_MU)
            return Next(StateGS(body, s.lenv_mu[label], s.lenv_mu, s.mu_env, s.mu_env[label]))
    raise TypeError(f"not a getctx/setctx term: {s.term!r}")


def step_it(s: StateIT) -> StepOutcome:
    match s.term:
        case Var(index):
            if index >= len(s.vec):
                return Stuck(UNBOUND_VAR)
            resolved = s.depth - s.vec[index]
            if resolved < 0 or resolved >= len(s.env):
                return Stuck(UNBOUND_VAR)
            entered: ClosureIT = s.env[resolved]
            return Next(
                StateIT(entered.term, entered.depth, entered.vec, entered.table, entered.env, entered.mu_env, s.stack)
            )
        case App(fn, arg):
            pushed = ClosureIT(arg, s.depth, s.vec, s.table, s.env, s.mu_env)
            return Next(StateIT(fn, s.depth, s.vec, s.table, s.env, s.mu_env, s.stack.cons(pushed)))
        case Lam(body):
            if not s.stack:
                return Final(s.closure())
            deeper = s.depth + 1
            return Next(
                StateIT(body, deeper, s.vec.cons(deeper), s.table, s.env.cons(s.stack.head), s.mu_env, s.stack.tail)
            )
        case GetContext(body):
            return Next(
                StateIT(body, s.depth, s.vec, s.table.cons(s.vec), s.env, s.mu_env.cons(s.stack), s.stack)
            )
        case SetContext(label, body):
            if len(s.table) != len(s.mu_env) or label >= len(s.table):
                return Stuck(UNBOUND_MU)
            return Next(StateIT(body, s.depth, s.table[label], s.table, s.env, s.mu_env, s.mu_env[label]))
    raise TypeError(f"not a getctx/setctx term: {s.term!r}")

# ---------------------------------------------------------------------------
# Initial states
# ---------------------------------------------------------------------------


def initial_ct(t: TermCT) -> StateCT:
    if not is_closed_ct(t):
        raise OpenTermError("ct machine needs a closed term (variable and label indices in range)")
    return StateCT(t, NIL, NIL, NIL)


def initial_gs(t: TermGS) -> StateGS:
    if not is_scoped_gs(t):
        raise OpenTermError("gs machine needs a closed, well-scoped term")
    return StateGS(t, NIL, NIL, NIL, NIL)


def initial_it(t: TermGS) -> StateIT:
    if not is_scoped_gs(t):
        raise OpenTermError("it machine needs a closed, well-scoped term")
    return StateIT(t, 0, NIL, NIL, NIL, NIL, NIL)

# ---------------------------------------------------------------------------
# Rule classification (shared by the tracer and the determinism checks)
# ---------------------------------------------------------------------------

RULE_VAR = "var"
RULE_APP = "app"
RULE_LAM = "lam"
RULE_CAPTURE = "catch_or_get"
RULE_RESTORE = "throw_or_set"
RULE_FINAL = "final"
RULE_STUCK = "stuck"


def _var_guard(s: State) -> bool:
    term = s.term
    if isinstance(s, StateCT):
        return term.index < len(s.env)
    if isinstance(s, StateGS):
        return term.index < len(s.lenv)
    if term.index >= len(s.vec):
        return False
    return 0 <= s.depth - s.vec[term.index] < len(s.env)


def _restore_guard(s: State) -> bool:
    if isinstance(s, StateCT):
        return s.term.label < len(s.mu_env)
    labels = s.lenv_mu if isinstance(s, StateGS) else s.table
    return len(labels) == len(s.mu_env) and s.term.label < len(labels)


def applicable_rules(s: State) -> list[str]:
    """Names of every rule whose guard holds in s.

    Written as independent guard checks (not a match) so the determinism
    property "exactly one rule applies in every reachable state" is tested
    against something other than the step functions' own dispatch.
    """
    rules = []
    term = s.term
    if isinstance(term, Var) and _var_guard(s):
        rules.append(RULE_VAR)
    if isinstance(term, App):
        rules.append(RULE_APP)
    if isinstance(term, Lam) and s.stack:
        rules.append(RULE_LAM)
    if isinstance(term, Lam) and not s.stack:
        rules.append(RULE_FINAL)
    if isinstance(term, (Catch, GetContext)):
        rules.append(RULE_CAPTURE)
    if isinstance(term, (Throw, SetContext)) and _restore_guard(s):
        rules.append(RULE_RESTORE)
    return rules

# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEvent:
    """One machine transition (or the terminal configuration), serializable."""

    step: int
    machine: str
    rule: str
    head: str
    stack_depth: int
    mu_count: int


@dataclass(frozen=True)
class RunResult:
    kind: str  # "final", "stuck", "fuel_exhausted"
    steps: int
    closure: Closure | None = None
    reason: str | None = None
    last_state: State | None = None
    events: tuple[TraceEvent, ...] | None = None


MACHINES: dict[str, tuple[Callable[..., State], Callable[[State], StepOutcome]]] = {
    "ct": (initial_ct, step_ct),
    "gs": (initial_gs, step_gs),
    "it": (initial_it, step_it),
}


def _mu_count(s: State) -> int:
    return len(s.mu_env)


def _transition_rule(s: State) -> str:
    match s.term:
        case Var():
            return RULE_VAR
        case App():
            return RULE_APP
        case Lam():
            return RULE_LAM
        case Catch() | GetContext():
            return RULE_CAPTURE
        case Throw() | SetContext():
            return RULE_RESTORE
    raise TypeError(f"not a term: {s.term!r}")


def run(term: Term, machine: str, max_steps: int | None = None, collect_trace: bool = False) -> RunResult:
    """Iterate a machine from its initial state until final, stuck, or out of fuel.

    steps counts applied transitions; a term that is already a value finishes
    in 0 steps. The trace, when collected, has one event per transition plus a
    terminal final/stuck event (fuel exhaustion ends the trace without one).
    """
    if machine not in MACHINES:
        raise ValueError(f"unknown machine {machine!r} (expected 'ct', 'gs' or 'it')")
    initial, _ = MACHINES[machine]
    return run_from(initial(term), machine, max_steps, collect_trace)


def run_from(state: State, machine: str, max_steps: int | None = None, collect_trace: bool = False) -> RunResult:
    """Like run, but starting from an arbitrary machine state."""
    _, step = MACHINES[machine]
    fuel = default_max_steps() if max_steps is None else max_steps
    events: list[TraceEvent] | None = [] if collect_trace else None
    steps = 0
    while True:
        outcome = step(state)
        if isinstance(outcome, Final):
            if events is not None:
                events.append(
                    TraceEvent(steps, machine, RULE_FINAL, print_term(state.term), len(state.stack), _mu_count(state))
                )
            return RunResult("final", steps, closure=outcome.closure, events=_freeze(events))
        if isinstance(outcome, Stuck):
            if events is not None:
                events.append(
                    TraceEvent(steps, machine, RULE_STUCK, print_term(state.term), len(state.stack), _mu_count(state))
                )
            return RunResult("stuck", steps, reason=outcome.reason, last_state=state, events=_freeze(events))
        if steps >= fuel:
            return RunResult("fuel_exhausted", steps, last_state=state, events=_freeze(events))
        if events is not None:
            events.append(
                TraceEvent(steps, machine, _transition_rule(state), print_term(state.term), len(state.stack), _mu_count(state))
            )
        state = outcome.state
        steps += 1


def _freeze(events: list[TraceEvent] | None) -> tuple[TraceEvent, ...] | None:
    return None if events is None else tuple(events)
