"""Ground planning model: atoms, actions, problems, plans, exact cost arithmetic.

Costs and durations are exact rationals (fractions.Fraction); the single
permitted non-rational value is INF, which absorbs under addition and is
maximal under comparison.  Finite values must never be floats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

INF = float("inf")

# A cost is either a Fraction (finite) or INF.
Cost = Fraction | float

ZERO = Fraction(0)
ONE = Fraction(1)

AtomSet = frozenset[int]

EMPTY: AtomSet = frozenset()


def rat(value, denominator: int | None = None) -> Fraction:
    """Build an exact rational from an int, string ("3/2", "1.204") or pair."""
    if denominator is not None:
        return Fraction(value, denominator)
    return Fraction(value)


def ceil_cost(x: Cost) -> Cost:
    if x == INF:
        return INF
    return Fraction(-((-x.numerator) // x.denominator))


def fmt_cost(x: Cost) -> str:
    if x == INF:
        return "inf"
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class Mode(enum.Enum):
    SEQUENTIAL = "sequential"
    PARALLEL = "parallel"
    TEMPORAL = "temporal"


@dataclass(frozen=True)
class Atom:
    id: int
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.id}, {self.name!r})"


@dataclass(frozen=True, eq=False)
class GroundAction:
    """STRIPS action with exact cost and duration.  Identity-hashed: two
    actions are the same only if they are the same object of one Problem.

    `persistent` (pre minus delete) is derived in __post_init__; those atoms
    must remain true over the action's whole execution interval.
    """

    index: int
    name: str
    pre: AtomSet
    add: AtomSet
    delete: AtomSet
    cost: Fraction = ONE
    dur: Fraction = ONE
    persistent: AtomSet = field(init=False)

    def __post_init__(self) -> None:
        if self.add & self.delete:
            raise ValueError(f"action {self.name}: add and delete sets overlap")
        if not isinstance(self.cost, Fraction) or self.cost <= 0:
            raise ValueError(f"action {self.name}: cost must be a positive rational")
        if not isinstance(self.dur, Fraction) or self.dur < 0:
            raise ValueError(f"action {self.name}: duration must be a rational >= 0")
        object.__setattr__(self, "persistent", self.pre - self.delete)

    def __repr__(self) -> str:
        return f"GroundAction({self.name!r})"


class Problem:
    """Immutable ground planning problem."""

    def __init__(
        self,
        atoms: list[Atom],
        actions: list[GroundAction],
        init: AtomSet,
        goal: AtomSet,
        mode: Mode = Mode.SEQUENTIAL,
        name: str = "problem",
    ) -> None:
        ids = {a.id for a in atoms}
        if ids != set(range(len(atoms))):
            raise ValueError("atom ids must be contiguous 0..n-1")
        universe = frozenset(ids)
        for s, what in [(init, "init"), (goal, "goal")]:
            if not s <= universe:
                raise ValueError(f"{what} references undeclared atoms")
        for a in actions:
            if not (a.pre | a.add | a.delete) <= universe:
                raise ValueError(f"action {a.name} references undeclared atoms")
        if mode is Mode.PARALLEL and any(a.dur != 1 for a in actions):
            raise ValueError("parallel mode requires all durations equal to 1")
        self.name = name
        self.atoms = tuple(atoms)
        self.actions = tuple(actions)
        self.init = frozenset(init)
        self.goal = frozenset(goal)
        self.mode = mode
        self._name_of = {a.id: a.name for a in atoms}
        self._id_of = {a.name: a.id for a in atoms}
        if len(self._id_of) != len(atoms):
            raise ValueError("atom names must be unique")
        # atom id -> actions adding it, in action index order
        adders: list[list[GroundAction]] = [[] for _ in atoms]
        for act in actions:
            for p in act.add:
                adders[p].append(act)
        self.adders = tuple(tuple(v) for v in adders)

    def atom_name(self, atom_id: int) -> str:
        return self._name_of[atom_id]

    def atom_id(self, name: str) -> int:
        return self._id_of[name]

    def atom_set(self, *names: str) -> AtomSet:
        return frozenset(self._id_of[n] for n in names)

    def set_names(self, s: AtomSet) -> frozenset[str]:
        return frozenset(self._name_of[i] for i in s)

    def __repr__(self) -> str:
        return (
            f"Problem({self.name!r}, atoms={len(self.atoms)}, "
            f"actions={len(self.actions)}, mode={self.mode.value})"
        )


@dataclass(frozen=True)
class PlanStep:
    start: Fraction
    action: GroundAction


@dataclass
class Plan:
    """A sequential plan (start times 0,1,2,...) or a temporal schedule."""

    steps: list[PlanStep]
    metric: Cost

    def sorted_steps(self) -> list[PlanStep]:
        return sorted(self.steps, key=lambda st: (st.start, st.action.index))

    def format(self, mode: Mode) -> str:
        lines = []
        if mode is Mode.SEQUENTIAL:
            for i, st in enumerate(self.sorted_steps()):
                lines.append(f"{i}: ({st.action.name})")
        else:
            for st in self.sorted_steps():
                lines.append(
                    f"{fmt_cost(st.start)}: ({st.action.name}) [{fmt_cost(st.action.dur)}]"
                )
        return "\n".join(lines)


def round_durations_up(problem: Problem) -> Problem:
    """Replace every duration with its ceiling (zero stays zero)."""
    actions = [
        GroundAction(
            index=a.index,
            name=a.name,
            pre=a.pre,
            add=a.add,
            delete=a.delete,
            cost=a.cost,
            dur=Fraction(ceil_cost(a.dur)),
        )
        for a in problem.actions
    ]
    return Problem(
        atoms=list(problem.atoms),
        actions=actions,
        init=problem.init,
        goal=problem.goal,
        mode=problem.mode,
        name=problem.name,
    )
