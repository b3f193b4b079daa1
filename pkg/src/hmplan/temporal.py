"""Temporal regression: states (E, F), compatibility, time-advance successors,
right-shift cuts, the relaxed view used for evaluation, and the storage rule
for states that still carry in-progress actions.

A state pairs the subgoal atoms E needed at the current time point with the
set F of actions already chosen that span that point; each entry (a, d) in F
started d time units before the current point, with 0 < d < dur(a).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .htable import HeuristicTable
from .model import EMPTY, ZERO, AtomSet, Cost, GroundAction, Problem

FEntry = tuple[GroundAction, Fraction]


@dataclass(frozen=True)
class TempState:
    goals: AtomSet
    in_progress: tuple[FEntry, ...] = ()
    # Edge annotations describing how this state was produced from its
    # predecessor: atoms carried over by no-ops, and the real actions chosen
    # there.  Needed only by the right-shift rule, so excluded from identity.
    noop_carried: AtomSet = field(default=EMPTY, compare=False)
    pred_chosen: tuple[GroundAction, ...] = field(default=(), compare=False)

    def __repr__(self) -> str:
        f = ", ".join(f"({a.name}, {d})" for a, d in self.in_progress)
        return f"TempState({set(self.goals) or '{}'}, [{f}])"


def compatible(a: GroundAction, b: GroundAction) -> bool:
    """Two actions may overlap in time iff neither deletes a precondition or
    add effect of the other."""
    return not (
        a.delete & b.pre
        or a.delete & b.add
        or b.delete & a.pre
        or b.delete & a.add
    )


def final_temporal(s: TempState, init: AtomSet) -> bool:
    return not s.in_progress and s.goals <= init


def temp_size(s: TempState) -> int:
    atoms = s.goals
    for a, _ in s.in_progress:
        atoms = atoms | a.pre
    return len(atoms)


def relaxed_atoms(s: TempState) -> AtomSet:
    """E joined with the preconditions of every in-progress action."""
    atoms = s.goals
    for a, _ in s.in_progress:
        atoms = atoms | a.pre
    return atoms


def relax_state(s: TempState) -> list[tuple[AtomSet, Cost]]:
    """Relax (E, F) to plain atom-set components with time offsets.

    For each offset d in F the preconditions of all actions started at least
    d units back must hold jointly d units before the current point; dropping
    F entirely leaves E plus all preconditions at offset 0.  Components are
    returned in decreasing offset order.
    """
    if not s.in_progress:
        return [(s.goals, ZERO)]
    out: list[tuple[AtomSet, Cost]] = []
    offsets = sorted({d for _, d in s.in_progress}, reverse=True)
    for dk in offsets:
        comp: AtomSet = frozenset()
        for a, d in s.in_progress:
            if d >= dk:
                comp = comp | a.pre
        out.append((comp, dk))
    all_pre = relaxed_atoms(s)
    out.append((all_pre, ZERO))
    return out


def storage_value(s: TempState, found_cost: Cost) -> tuple[AtomSet, Cost]:
    """Convert a bound for (E, F) into one for the plain atom set.

    A plan achieving all the atoms also achieves the state at most max d
    later through inertia, so that slack is subtracted (clamped at zero)
    before the value may enter the heuristic table.
    """
    if not s.in_progress:
        return s.goals, found_cost
    max_d = max(d for _, d in s.in_progress)
    value = found_cost - max_d
    if value < 0:
        value = ZERO
    return relaxed_atoms(s), value


def right_shift_forbids(pred: TempState | None, cur: TempState, a: GroundAction) -> bool:
    """True iff a must not establish anything at cur: every atom of cur.E
    that a adds was carried from the predecessor by a no-op, so a could have
    been scheduled later, ending at the predecessor's time point instead.

    The cut is only sound when that later scheduling is actually available:
    a must not delete any of the predecessor's goals, and must be compatible
    with its in-progress actions and with the establishers chosen there."""
    if pred is None:
        return False
    added = a.add & cur.goals
    if not added or not added <= cur.noop_carried:
        return False
    if a.delete & pred.goals:
        return False
    if any(not compatible(a, b) for b, _ in pred.in_progress):
        return False
    return all(compatible(a, c) for c in cur.pred_chosen)


@dataclass(frozen=True)
class TempEdge:
    state: TempState
    delta: Cost  # time advance
    actions: tuple[GroundAction, ...]  # real actions chosen at this point


def successors_temporal(
    problem: Problem,
    s: TempState,
    pred: TempState | None = None,
    use_right_shift: bool = False,
) -> tuple[list[TempEdge], int]:
    """All successor states, advancing time to the next action start.

    Each atom of E gets an establisher: a real action adding it, or a no-op.
    Chosen actions must be pairwise compatible, compatible with everything in
    F, and nothing (chosen or in F) may delete a no-op'd atom.  Returns the
    edge list and the number of establisher candidates removed by the
    right-shift rule (0 unless use_right_shift).
    """
    goal_ids = sorted(s.goals)
    f_actions = [a for a, _ in s.in_progress]
    cut_count = 0

    # Establisher candidates per atom; None encodes the no-op.
    options: list[list[GroundAction | None]] = []
    for p in goal_ids:
        cands: list[GroundAction | None] = [None]
        for a in problem.adders[p]:
            if use_right_shift and right_shift_forbids(pred, s, a):
                cut_count += 1
                continue
            if all(compatible(a, b) for b in f_actions):
                cands.append(a)
        options.append(cands)

    edges: list[TempEdge] = []
    seen: set[tuple[tuple[int, ...], AtomSet]] = set()
    for choice in itertools.product(*options):
        chosen: dict[int, GroundAction] = {}
        noops: set[int] = set()
        for p, a in zip(goal_ids, choice):
            if a is None:
                noops.add(p)
            else:
                chosen[a.index] = a
        if not chosen and not s.in_progress:
            continue  # pure stutter
        sig = (tuple(sorted(chosen)), frozenset(noops))
        if sig in seen:
            continue
        seen.add(sig)
        acts = [chosen[i] for i in sorted(chosen)]
        if any(a.delete & noops for a in acts):
            continue
        if any(a.delete & noops for a in f_actions):
            continue
        ok = True
        for a, b in itertools.combinations(acts, 2):
            if not compatible(a, b):
                ok = False
                break
        if not ok:
            continue

        # Offsets: durations of chosen positive-duration actions plus F.
        offsets: list[FEntry] = [(a, a.dur) for a in acts if a.dur > 0]
        offsets.extend(s.in_progress)
        zero_pre: AtomSet = frozenset()
        for a in acts:
            if a.dur == 0:
                zero_pre = zero_pre | a.pre
        noop_set = frozenset(noops)
        released = zero_pre
        if not offsets:
            advance: Cost = ZERO
            new_f: tuple[FEntry, ...] = ()
        else:
            advance = min(d for _, d in offsets)
            remaining = []
            for a, d in offsets:
                if d == advance:
                    released = released | a.pre
                else:
                    remaining.append((a, d - advance))
            new_f = tuple(sorted(remaining, key=lambda e: (e[0].index, e[1])))
        new_e = noop_set | released
        # An atom counts as no-op-carried only if persistence is its sole
        # reason for being a goal; atoms also required as preconditions stay
        # required no matter how the carried copy came about.
        state = TempState(new_e, new_f, noop_carried=noop_set - released,
                          pred_chosen=tuple(acts))
        edges.append(TempEdge(state, advance, tuple(acts)))
    return edges, cut_count


class TemporalSpace:
    """Search-space interface over temporal regression (also covers parallel
    planning, where every duration is 1)."""

    def __init__(self, problem: Problem):
        self.problem = problem

    def root(self) -> TempState:
        return TempState(self.problem.goal)

    def is_final(self, s: TempState) -> bool:
        return final_temporal(s, self.problem.init)

    def successors(self, s: TempState, pred: TempState | None = None,
                   right_shift: bool = False):
        return successors_temporal(self.problem, s, pred, right_shift)

    def evaluate(self, table: HeuristicTable, s: TempState) -> Cost:
        best: Cost = ZERO
        for comp, offset in relax_state(s):
            v = offset + table.eval(comp)
            if v > best:
                best = v
        return best

    def size(self, s: TempState) -> int:
        return temp_size(s)

    def key(self, s: TempState) -> TempState:
        return s

    def atoms_of(self, s: TempState) -> AtomSet:
        return relaxed_atoms(s)

    def from_atoms(self, atoms: AtomSet) -> TempState:
        return TempState(atoms)

    def store_value(self, table: HeuristicTable, s: TempState, cost: Cost) -> None:
        atoms, value = storage_value(s, cost)
        table.store(atoms, value)
