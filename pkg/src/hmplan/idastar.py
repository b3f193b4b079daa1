"""Cost-bounded iterative-deepening A* over a regression space, with a
fixed-capacity closed-hash transposition table and footnote-style bound
schedule: each iteration's bound is the least f-value pruned in the previous
one, never a fixed increment.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .htable import HeuristicTable
from .metrics import NORMAL, Recorder
from .model import INF, ZERO, Cost, Mode, Plan, PlanStep

_SOLVED = object()


class TranspositionTable:
    """Closed hash table of updated lower bounds for expanded, unsolved
    states.  Lookup is a single probe plus a full state equality check; on
    collision the entry closer to the root is kept."""

    def __init__(self, capacity: int = 1 << 16) -> None:
        if capacity < 1:
            raise ValueError("capacity must be positive")
        self.capacity = capacity
        self._slots: list[tuple[object, Cost, int] | None] = [None] * capacity
        self.stores = 0
        self.hits = 0

    def _index(self, key) -> int:
        return hash(key) % self.capacity

    def get(self, key) -> Cost | None:
        slot = self._slots[self._index(key)]
        if slot is not None and slot[0] == key:
            self.hits += 1
            return slot[1]
        return None

    def put(self, key, value: Cost, depth: int) -> None:
        i = self._index(key)
        slot = self._slots[i]
        if slot is None:
            self._slots[i] = (key, value, depth)
            self.stores += 1
        elif slot[0] == key:
            self._slots[i] = (key, max(slot[1], value), min(slot[2], depth))
        elif depth < slot[2]:
            self._slots[i] = (key, value, depth)
            self.stores += 1


@dataclass
class SearchStats:
    expansions: int = 0
    iterations: int = 0
    elapsed_s: float = 0.0
    bounds: list[Cost] = field(default_factory=list)


@dataclass
class SearchResult:
    outcome: str  # solved | unsolvable | limit
    cost: Cost | None = None
    plan: Plan | None = None
    next_bound: Cost | None = None
    stats: SearchStats = field(default_factory=SearchStats)


class IdaStar:
    def __init__(
        self,
        space,
        table: HeuristicTable,
        use_tt: bool = True,
        tt_capacity: int = 1 << 16,
        right_shift: bool = False,
        cycle_check: bool = True,
        recorder: Recorder | None = None,
        phase: str = "ida",
    ) -> None:
        self.space = space
        self.table = table
        self.tt = TranspositionTable(tt_capacity) if use_tt else None
        self.right_shift = right_shift
        self.cycle_check = cycle_check
        self.recorder = recorder
        self.phase = phase
        self.stats = SearchStats()
        self._solution: list = []

    def run(self, upper_limit: Cost = INF) -> SearchResult:
        space = self.space
        root = space.root()
        start = time.monotonic()
        if self.recorder:
            self.recorder.reset_iterations()
        try:
            if space.is_final(root):
                plan = build_plan(self.space, [])
                return SearchResult("solved", ZERO, plan, stats=self.stats)
            bound = space.evaluate(self.table, root)
            if self.tt is not None:
                cached = self.tt.get(space.key(root))
                if cached is not None and cached > bound:
                    bound = cached
            while True:
                if bound == INF:
                    return SearchResult("unsolvable", stats=self.stats)
                if bound > upper_limit:
                    return SearchResult("limit", next_bound=bound, stats=self.stats)
                self.stats.iterations += 1
                self.stats.bounds.append(bound)
                if self.recorder:
                    self.recorder.begin_iteration()
                    self.recorder.bound(self.phase, bound)
                self._solution = []
                result = self._dfs(root, ZERO, bound, (), None)
                if result is _SOLVED:
                    edges = list(reversed(self._solution))
                    plan = build_plan(self.space, edges)
                    if self.recorder:
                        self.recorder.bound(self.phase, plan.metric)
                    return SearchResult("solved", plan.metric, plan, stats=self.stats)
                value, _clean = result
                assert value > bound
                bound = value
        finally:
            self.stats.elapsed_s = time.monotonic() - start

    def _dfs(self, state, g: Cost, bound: Cost, path: tuple, pred):
        """Returns _SOLVED or (value, clean).

        The value is the least pruned f below this node, with branches that
        closed a cycle on the current path left out: every remaining
        contribution exceeds the bound, so the schedule always advances, and
        the optimal path is cycle-free so it is never the branch left out.
        Leaving cycles out makes the value path-dependent, though, so only
        clean values (no cycle pruned anywhere below) may be cached.
        """
        space = self.space
        if space.is_final(state):
            if g > bound:
                return g, True
            return _SOLVED
        h = space.evaluate(self.table, state)
        key = space.key(state)
        if self.tt is not None:
            cached = self.tt.get(key)
            if cached is not None and cached > h:
                h = cached
        f = g + h
        if f > bound:
            return f, True
        edges, cut_count = space.successors(state, pred, self.right_shift)
        self.stats.expansions += 1
        if self.recorder:
            self.recorder.expansion(
                NORMAL, space.size(state), tuple(space.size(e.state) for e in edges)
            )
        scored = sorted(
            ((e.delta + space.evaluate(self.table, e.state), e) for e in edges),
            key=lambda it: (it[0], tuple(a.index for a in it[1].actions)),
        )
        subtree_min: Cost = INF
        clean = True
        next_path = path + (state,)
        for est, edge in scored:
            if self.cycle_check and any(edge.state == anc for anc in next_path):
                clean = False
                continue
            r = self._dfs(edge.state, g + edge.delta, bound, next_path, state)
            if r is _SOLVED:
                self._solution.append(edge)
                return _SOLVED
            value, child_clean = r
            clean = clean and child_clean
            if value < subtree_min:
                subtree_min = value
        # Right-shift cuts make the updated cost path-dependent, so the
        # transposition table is not fed from expansions the rule touched.
        if self.tt is not None and cut_count == 0 and clean:
            new_h = subtree_min - g if subtree_min != INF else INF
            if new_h > h:
                self.tt.put(key, new_h, len(path))
        return subtree_min, clean


def build_plan(space, edges) -> Plan:
    """Turn a root-to-final regression path into a forward plan."""
    mode = space.problem.mode
    steps: list[PlanStep] = []
    if mode is Mode.SEQUENTIAL:
        # The edge taken first from the goal holds the action executed last.
        t = Fraction(0)
        metric: Cost = ZERO
        for edge in reversed(edges):
            for a in edge.actions:
                steps.append(PlanStep(t, a))
                t += 1
                metric = metric + a.cost
        return Plan(steps, metric)
    makespan: Cost = ZERO
    for edge in edges:
        makespan = makespan + edge.delta
    # Walking root -> final is walking backwards in time from the end.
    elapsed: Cost = ZERO
    for edge in edges:
        for a in edge.actions:
            start = makespan - elapsed - a.dur
            steps.append(PlanStep(Fraction(start), a))
        elapsed = elapsed + edge.delta
    return Plan(steps, makespan)
