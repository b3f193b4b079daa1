"""Small built-in example problems used by the tests and documentation."""

from __future__ import annotations

from fractions import Fraction

from .model import Atom, GroundAction, Mode, Problem

DIRECTIONS = ("d1", "d2", "d3", "d4", "d5")


def _build(atom_names, action_specs, init, goal, mode, name):
    ids = {n: i for i, n in enumerate(atom_names)}
    atoms = [Atom(i, n) for n, i in ids.items()]
    actions = []
    for idx, (aname, pre, add, delete, cost, dur) in enumerate(action_specs):
        actions.append(
            GroundAction(
                index=idx,
                name=aname,
                pre=frozenset(ids[p] for p in pre),
                add=frozenset(ids[p] for p in add),
                delete=frozenset(ids[p] for p in delete),
                cost=Fraction(cost),
                dur=Fraction(dur),
            )
        )
    return Problem(
        atoms=atoms,
        actions=actions,
        init=frozenset(ids[p] for p in init),
        goal=frozenset(ids[p] for p in goal),
        mode=mode,
        name=name,
    )


def satellite(goal_images: tuple[str, ...] = ("d4", "d5"),
              mode: Mode = Mode.SEQUENTIAL) -> Problem:
    """One-satellite observation problem: point, power on, calibrate, image.

    The instrument must be calibrated while pointing at d2 and powered on;
    initially the satellite points at d1.
    """
    atom_names = [f"point {d}" for d in DIRECTIONS]
    atom_names += ["on", "cal"]
    atom_names += [f"img {d}" for d in goal_images]
    specs = []
    for a in DIRECTIONS:
        for b in DIRECTIONS:
            if a != b:
                specs.append(
                    (f"turn {a} {b}", [f"point {a}"], [f"point {b}"], [f"point {a}"], 1, 1)
                )
    specs.append(("power-on", [], ["on"], [], 1, 1))
    specs.append(("calibrate", ["point d2", "on"], ["cal"], [], 1, 1))
    for d in goal_images:
        specs.append(
            (f"take-image {d}", [f"point {d}", "on", "cal"], [f"img {d}"], [], 1, 1)
        )
    return _build(
        atom_names,
        specs,
        init=["point d1"],
        goal=[f"img {d}" for d in goal_images],
        mode=mode,
        name=f"satellite-{len(goal_images)}",
    )


def chain(n: int = 5, mode: Mode = Mode.SEQUENTIAL, durs=None) -> Problem:
    """p0 -> p1 -> ... -> pn, one unary action per link."""
    if durs is None:
        durs = [1] * n
    atom_names = [f"p{i}" for i in range(n + 1)]
    specs = [
        (f"step{i}", [f"p{i}"], [f"p{i+1}"], [], 1, durs[i]) for i in range(n)
    ]
    return _build(atom_names, specs, ["p0"], [f"p{n}"], mode, f"chain-{n}")


def growing(depth: int = 3, width: int = 3, mode: Mode = Mode.SEQUENTIAL) -> Problem:
    """Each goal-layer atom needs all `width` atoms of the layer below, so
    regressed states grow by a factor of `width` per step."""
    # Layer k holds width**(depth-k) atoms; the single atom of the last layer
    # is the goal, the base layer is the initial state.
    atom_names = []
    layers = [[f"a{k}_{j}" for j in range(width ** (depth - k))] for k in range(depth + 1)]
    for layer in layers:
        atom_names.extend(layer)
    specs = []
    for k in range(1, depth + 1):
        for j, atom in enumerate(layers[k]):
            pre = layers[k - 1][j * width:(j + 1) * width]
            specs.append((f"make {atom}", pre, [atom], [], 1, 1))
    return _build(
        atom_names, specs, layers[0], layers[depth], mode, f"growing-{depth}x{width}"
    )


def unsolvable(mode: Mode = Mode.SEQUENTIAL) -> Problem:
    """The goal needs two atoms every action pair makes mutually exclusive."""
    atom_names = ["s", "x", "y"]
    specs = [
        ("make-x", ["s"], ["x"], ["y"], 1, 1),
        ("make-y", ["s"], ["y"], ["x"], 1, 1),
    ]
    return _build(atom_names, specs, ["s"], ["x", "y"], mode, "unsolvable")


def temporal_mix() -> Problem:
    """Rational durations with room for overlap: two independent products and
    a zero-duration packaging step."""
    atom_names = ["raw", "part-a", "part-b", "boxed"]
    specs = [
        ("mill-a", ["raw"], ["part-a"], [], 1, Fraction(3, 2)),
        ("mill-b", ["raw"], ["part-b"], [], 1, Fraction(5, 2)),
        ("box", ["part-a", "part-b"], ["boxed"], [], 1, 0),
    ]
    return _build(atom_names, specs, ["raw"], ["boxed"], Mode.TEMPORAL, "temporal-mix")
