"""Complete h^m computation by a generalized Bellman-Ford fixpoint.

Values for every atom set of size <= m start at infinity (0 for subsets of
the initial state) and only decrease until no relaxation step applies.
Oversized regressed sets are evaluated as the max over their size <= m
subsets.  The result is written into the shared heuristic table.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass

from .htable import HeuristicTable
from .model import INF, ZERO, AtomSet, Cost, Mode, Problem
from .sequential import applicable_seq, regress_seq
from .temporal import TempState, relax_state, successors_temporal

log = logging.getLogger(__name__)

# An edge is (delta, components); its value under current labels is
# delta + max over components (offset + subset-eval of the atom set).
Component = tuple[AtomSet, Cost]
Edge = tuple[Cost, tuple[Component, ...]]


@dataclass
class GbfStats:
    sets: int
    rounds: int
    mutex_pairs: int
    unreachable: int

    def line(self) -> str:
        return (
            f"gbf: {self.sets} sets, {self.rounds} relaxation rounds, "
            f"{self.mutex_pairs} mutex pairs, {self.unreachable} unreachable sets"
        )


def _all_sets(n_atoms: int, m: int) -> list[AtomSet]:
    out = []
    for size in range(1, m + 1):
        for combo in itertools.combinations(range(n_atoms), size):
            out.append(frozenset(combo))
    return out


def _subsets_upto(atoms: AtomSet, m: int) -> list[AtomSet]:
    ids = sorted(atoms)
    out = []
    for size in range(1, min(m, len(ids)) + 1):
        for combo in itertools.combinations(ids, size):
            out.append(frozenset(combo))
    return out


def _seq_edges(problem: Problem, s: AtomSet) -> list[Edge]:
    out = []
    for a in problem.actions:
        if applicable_seq(a, s):
            out.append((a.cost, ((regress_seq(s, a), ZERO),)))
    return out


def _temporal_edges(problem: Problem, s: AtomSet) -> list[Edge]:
    edges, _ = successors_temporal(problem, TempState(s))
    return [(e.delta, tuple(relax_state(e.state))) for e in edges]


class _Gbf:
    def __init__(self, problem: Problem, m: int, temporal: bool):
        self.problem = problem
        self.m = m
        self.sets = _all_sets(len(problem.atoms), m)
        self.value: dict[AtomSet, Cost] = {
            s: (ZERO if s <= problem.init else INF) for s in self.sets
        }
        edge_fn = _temporal_edges if temporal else _seq_edges
        self.edges: dict[AtomSet, list[Edge]] = {}
        self.parents: dict[AtomSet, set[AtomSet]] = {s: set() for s in self.sets}
        for s in self.sets:
            if s <= problem.init:
                self.edges[s] = []
                continue
            es = edge_fn(problem, s)
            self.edges[s] = es
            for _, comps in es:
                for atoms, _ in comps:
                    for d in _subsets_upto(atoms, m):
                        self.parents[d].add(s)
        self.rounds = 0

    def _subset_eval(self, atoms: AtomSet) -> Cost:
        if not atoms:
            return ZERO
        if len(atoms) <= self.m:
            return self.value[atoms]
        best: Cost = ZERO
        for d in _subsets_upto(atoms, self.m):
            v = self.value[d]
            if v > best:
                best = v
                if best == INF:
                    break
        return best

    def _relax(self, s: AtomSet) -> Cost:
        best: Cost = INF
        for delta, comps in self.edges[s]:
            worst: Cost = ZERO
            for atoms, offset in comps:
                v = offset + self._subset_eval(atoms)
                if v > worst:
                    worst = v
                    if worst == INF:
                        break
            if worst != INF and delta + worst < best:
                best = delta + worst
        return best

    def run_worklist(self) -> None:
        queue = deque(s for s in self.sets if not s <= self.problem.init)
        queued = set(queue)
        while queue:
            s = queue.popleft()
            queued.discard(s)
            self.rounds += 1
            new = self._relax(s)
            if new < self.value[s]:
                self.value[s] = new
                for p in self.parents[s]:
                    if p not in queued and not p <= self.problem.init:
                        queue.append(p)
                        queued.add(p)

    def run_sweep(self) -> None:
        order = sorted(self.sets, key=lambda s: (len(s), sorted(s)))
        changed = True
        while changed:
            changed = False
            self.rounds += 1
            for s in order:
                if s <= self.problem.init:
                    continue
                new = self._relax(s)
                if new < self.value[s]:
                    self.value[s] = new
                    changed = True

    def stats(self) -> GbfStats:
        mutex = sum(1 for s, v in self.value.items() if len(s) == 2 and v == INF)
        unreachable = sum(1 for v in self.value.values() if v == INF)
        return GbfStats(len(self.sets), self.rounds, mutex, unreachable)


def _compute(problem: Problem, table: HeuristicTable, m: int, temporal: bool,
             strategy: str) -> GbfStats:
    if m < 1:
        raise ValueError("m must be >= 1")
    gbf = _Gbf(problem, m, temporal)
    if strategy == "worklist":
        gbf.run_worklist()
    elif strategy == "sweep":
        gbf.run_sweep()
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    for s in sorted(gbf.sets, key=lambda x: (len(x), sorted(x))):
        table.store(s, gbf.value[s])
    stats = gbf.stats()
    log.info(stats.line())
    return stats


def compute_hm_seq(problem: Problem, table: HeuristicTable, m: int,
                   strategy: str = "worklist") -> GbfStats:
    """Least fixpoint of the sequential h^m equation for all sets of size <= m."""
    return _compute(problem, table, m, temporal=False, strategy=strategy)


def compute_hm_temporal(problem: Problem, table: HeuristicTable, m: int,
                        strategy: str = "worklist") -> GbfStats:
    """Temporal/parallel h^m over pure-goal states (E, {}), using the relaxed
    view of each successor; right-shift cuts are never applied here."""
    if problem.mode is Mode.SEQUENTIAL:
        raise ValueError("temporal h^m needs a temporal or parallel problem")
    return _compute(problem, table, m, temporal=True, strategy=strategy)


def compute_base_heuristic(problem: Problem, table: HeuristicTable, m: int,
                           strategy: str = "worklist") -> GbfStats:
    """Mode-appropriate complete h^m (sequential or temporal recursion)."""
    if problem.mode is Mode.SEQUENTIAL:
        return compute_hm_seq(problem, table, m, strategy)
    return compute_hm_temporal(problem, table, m, strategy)
