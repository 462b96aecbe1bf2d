"""Concrete semantics: deterministic runs, a bounded BFS reachability oracle,
and the witness invariant built from a halted run."""
from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .checker import Labeling
from .errors import InputError, RunNotHalted
from .model import BAD, Config, Transition, TransitionSystem, apply_update, eval_guard, validate_system
from .polyhedra import VPolytope

HALTED = "halted"
BUDGET_EXHAUSTED = "step-budget-exhausted"
STUCK_NONDETERMINISTIC = "stuck-nondeterministic"


@dataclass(frozen=True)
class Run:
    """``configs[i]`` is the configuration after ``i`` steps."""

    configs: tuple[Config, ...]
    status: str
    # transitions enabled at the last config when the run got stuck
    conflict: tuple[Transition, ...] = ()

    @property
    def last(self) -> Config:
        return self.configs[-1]


def _require_valid(s: TransitionSystem) -> None:
    problems = validate_system(s)
    if problems:
        raise InputError("invalid transition system: " + "; ".join(problems))


def enabled(s: TransitionSystem, cfg: Config) -> list[Transition]:
    return [t for t in s.outgoing(cfg.state) if eval_guard(t.guard, cfg.values, s.dim)]


def successors(s: TransitionSystem, cfg: Config) -> list[Config]:
    return [Config(t.target, apply_update(t.update, cfg.values, s.dim)) for t in enabled(s, cfg)]


def run(s: TransitionSystem, max_steps: int) -> Run:
    """Fire the unique enabled transition until halting, the step budget, or a nondeterministic choice."""
    _require_valid(s)
    cfg = s.initial_config
    configs = [cfg]
    while True:
        ts = enabled(s, cfg)
        if not ts:
            return Run(tuple(configs), HALTED)
        if len(ts) > 1:
            return Run(tuple(configs), STUCK_NONDETERMINISTIC, tuple(ts))
        if len(configs) - 1 >= max_steps:
            return Run(tuple(configs), BUDGET_EXHAUSTED)
        t = ts[0]
        cfg = Config(t.target, apply_update(t.update, cfg.values, s.dim))
        configs.append(cfg)


def reach_oracle(s: TransitionSystem, max_steps: int) -> set[Config]:
    """Every configuration reachable in at most ``max_steps`` steps (breadth first, exact)."""
    _require_valid(s)
    seen = {s.initial_config}
    frontier = [s.initial_config]
    for _ in range(max_steps):
        nxt = []
        for cfg in frontier:
            for succ in successors(s, cfg):
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        if not nxt:
            break
        frontier = nxt
    return seen


def labeling_from_configs(s: TransitionSystem, configs: Iterable[Config]) -> dict[str, VPolytope]:
    """Label each state with the hull of the given configurations at it; the bad state stays empty."""
    points: dict[str, list] = {st.name: [] for st in s.states}
    for cfg in configs:
        if cfg.state.kind != BAD:
            points[cfg.state.name].append(cfg.values)
    return {name: VPolytope(s.dim, dict.fromkeys(pts)) for name, pts in points.items()}


def build_witness(s: TransitionSystem, r: Run) -> Labeling:
    if r.status != HALTED:
        raise RunNotHalted(f"witness needs a halted run, got status {r.status!r}")
    return labeling_from_configs(s, r.configs)
