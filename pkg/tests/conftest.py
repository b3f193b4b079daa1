"""Shared oracles and generators.

The oracles here are deliberately independent of the planner's search code:
sequential costs come from forward Dijkstra over full world states, parallel
makespans from forward breadth-first search over compatible action sets.
The temporal oracle is a blind (heuristic-free) Dijkstra over the regression
graph; it shares only the transition relation with the planner.
"""

from __future__ import annotations

import heapq
import itertools
import random
from fractions import Fraction

import pytest

from hmplan.model import INF, ZERO, Atom, AtomSet, GroundAction, Mode, Problem
from hmplan.temporal import TempState, compatible, final_temporal, successors_temporal


def forward_dijkstra(problem: Problem) -> dict[AtomSet, Fraction]:
    """Cheapest action-cost to reach every reachable world state."""
    start = problem.init
    dist: dict[AtomSet, Fraction] = {start: ZERO}
    heap: list[tuple[Fraction, int, AtomSet]] = [(ZERO, 0, start)]
    tick = itertools.count(1)
    while heap:
        d, _, s = heapq.heappop(heap)
        if d > dist.get(s, INF):
            continue
        for a in problem.actions:
            if a.pre <= s:
                s2 = (s - a.delete) | a.add
                nd = d + a.cost
                if nd < dist.get(s2, INF):
                    dist[s2] = nd
                    heapq.heappush(heap, (nd, next(tick), s2))
    return dist


def achieve_cost(dist: dict[AtomSet, Fraction], goals: AtomSet):
    """Cheapest cost to reach any world state containing all the goals."""
    return min((d for s, d in dist.items() if goals <= s), default=INF)


def seq_optimal(problem: Problem):
    return achieve_cost(forward_dijkstra(problem), problem.goal)


def _compatible_subsets(actions: list[GroundAction]):
    """All nonempty pairwise-compatible subsets, generated recursively."""
    out: list[tuple[GroundAction, ...]] = []

    def rec(i: int, picked: tuple[GroundAction, ...]) -> None:
        for j in range(i, len(actions)):
            a = actions[j]
            if all(compatible(a, b) for b in picked):
                out.append(picked + (a,))
                rec(j + 1, picked + (a,))

    rec(0, ())
    return out


def parallel_makespan(problem: Problem):
    """Forward breadth-first search, one layer of compatible actions per step."""
    if problem.goal <= problem.init:
        return ZERO
    frontier = {problem.init}
    seen = set(frontier)
    depth = 0
    n_states = 1 << len(problem.atoms)
    while frontier and depth <= n_states:
        depth += 1
        nxt = set()
        for s in frontier:
            applicable = [a for a in problem.actions if a.pre <= s]
            for subset in _compatible_subsets(applicable):
                s2 = s
                for a in subset:
                    s2 = s2 - a.delete
                for a in subset:
                    s2 = s2 | a.add
                if problem.goal <= s2:
                    return Fraction(depth)
                if s2 not in seen:
                    seen.add(s2)
                    nxt.add(s2)
        frontier = nxt
    return INF


def temporal_makespan(problem: Problem, cap: int = 200_000):
    """Blind Dijkstra over the temporal regression graph (no heuristic,
    no right-shift, no transposition table)."""
    root = TempState(problem.goal)
    dist: dict[TempState, Fraction] = {root: ZERO}
    heap: list[tuple[Fraction, int, TempState]] = [(ZERO, 0, root)]
    tick = itertools.count(1)
    popped = 0
    while heap:
        d, _, s = heapq.heappop(heap)
        if d > dist.get(s, INF):
            continue
        popped += 1
        assert popped <= cap, "temporal oracle exceeded its search cap"
        if final_temporal(s, problem.init):
            return d
        edges, _ = successors_temporal(problem, s)
        for e in edges:
            nd = d + e.delta
            if nd < dist.get(e.state, INF):
                dist[e.state] = nd
                heapq.heappush(heap, (nd, next(tick), e.state))
    return INF


def regression_states(problem: Problem, cap: int = 100_000) -> set[AtomSet]:
    """All states reachable by blind sequential regression from the goal."""
    from hmplan.sequential import successors_seq

    seen = {problem.goal}
    stack = [problem.goal]
    while stack:
        s = stack.pop()
        assert len(seen) <= cap
        for e in successors_seq(problem, s):
            if e.state not in seen:
                seen.add(e.state)
                stack.append(e.state)
    return seen


def random_problem(rng: random.Random, max_atoms: int = 10,
                   max_actions: int = 15, mode: Mode = Mode.SEQUENTIAL) -> Problem:
    n = rng.randint(4, max_atoms)
    atoms = [Atom(i, f"x{i}") for i in range(n)]
    ids = list(range(n))
    actions = []
    for k in range(rng.randint(3, max_actions)):
        add = frozenset(rng.sample(ids, rng.randint(1, 2)))
        rest = [i for i in ids if i not in add]
        delete = frozenset(rng.sample(rest, min(len(rest), rng.randint(0, 2))))
        pre = frozenset(rng.sample(ids, rng.randint(0, min(3, n))))
        if mode is Mode.SEQUENTIAL:
            cost = Fraction(rng.choice([1, 1, 1, 2, 3]), rng.choice([1, 1, 2]))
            dur = Fraction(1)
        else:
            cost = Fraction(1)
            dur = Fraction(1) if mode is Mode.PARALLEL else \
                Fraction(rng.choice([1, 2, 3, 3]), rng.choice([1, 1, 2]))
        actions.append(GroundAction(k, f"a{k}", pre, add, delete, cost, dur))
    init = frozenset(rng.sample(ids, rng.randint(1, n)))
    goal = frozenset(rng.sample(ids, rng.randint(1, min(3, n))))
    return Problem(atoms, actions, init, goal, mode, f"random-{mode.value}")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
