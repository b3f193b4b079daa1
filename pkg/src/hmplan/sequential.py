"""Sequential regression search space over atom sets."""

from __future__ import annotations

from dataclasses import dataclass

from .htable import HeuristicTable
from .model import AtomSet, Cost, GroundAction, Problem


def applicable_seq(action: GroundAction, s: AtomSet) -> bool:
    """An action regresses s iff it deletes nothing in s and adds something in s."""
    return not (action.delete & s) and bool(action.add & s)


def regress_seq(s: AtomSet, action: GroundAction) -> AtomSet:
    assert applicable_seq(action, s)
    return (s - action.add) | action.pre


def final_seq(s: AtomSet, init: AtomSet) -> bool:
    return s <= init


@dataclass(frozen=True)
class SeqEdge:
    state: AtomSet
    delta: Cost
    actions: tuple[GroundAction, ...]  # single regressing action


def successors_seq(problem: Problem, s: AtomSet) -> list[SeqEdge]:
    """One edge per applicable action, in action index order."""
    out = []
    for a in problem.actions:
        if applicable_seq(a, s):
            out.append(SeqEdge(regress_seq(s, a), a.cost, (a,)))
    return out


class SequentialSpace:
    """Uniform search-space interface used by IDA* and IDAO*."""

    def __init__(self, problem: Problem):
        self.problem = problem

    def root(self) -> AtomSet:
        return self.problem.goal

    def is_final(self, s: AtomSet) -> bool:
        return final_seq(s, self.problem.init)

    def successors(self, s: AtomSet, pred=None, right_shift: bool = False):
        """Returns (edges, cut_count); sequential search has no cut rule."""
        return successors_seq(self.problem, s), 0

    def evaluate(self, table: HeuristicTable, s: AtomSet) -> Cost:
        return table.eval(s)

    def size(self, s: AtomSet) -> int:
        return len(s)

    def key(self, s: AtomSet) -> AtomSet:
        return s

    def atoms_of(self, s: AtomSet) -> AtomSet:
        return s

    def from_atoms(self, atoms: AtomSet) -> AtomSet:
        return atoms

    def store_value(self, table: HeuristicTable, s: AtomSet, cost: Cost) -> None:
        table.store(s, cost)
