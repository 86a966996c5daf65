"""Grid tiling instances: validation, exact solving, and generators.

An instance is a k x k grid of cells, each holding a subset of [N] x [N].
A solution picks one pair per cell so that second coordinates are
non-decreasing left-to-right within every row and first coordinates are
non-decreasing bottom-to-top within every column.  Cell (x, y) sits in
column x and row y, with (1, 1) at the bottom left.

The brute-force solver here is deliberately simple: it is the independent
oracle that the path-routing side of the package is checked against.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import BudgetExceededError

Pair = tuple[int, int]
Cell = tuple[int, int]

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class GridTilingInstance:
    """A k x k grid of cells, each with a set of candidate pairs from [N] x [N]."""

    k: int
    N: int
    sets: Mapping[Cell, frozenset[Pair]]

    def __post_init__(self):
        norm = {}
        for cell, pairs in dict(self.sets).items():
            key = (int(cell[0]), int(cell[1]))
            norm[key] = frozenset((int(a), int(b)) for a, b in pairs)
        object.__setattr__(self, "sets", norm)

    def cells(self) -> Iterator[Cell]:
        """All cell coordinates in row-major order (x fast, y slow)."""
        for y in range(1, self.k + 1):
            for x in range(1, self.k + 1):
                yield (x, y)

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "N": self.N,
            "sets": {
                f"{x},{y}": [list(p) for p in sorted(self.sets.get((x, y), ()))]
                for (x, y) in self.cells()
                if (x, y) in self.sets
            },
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "GridTilingInstance":
        try:
            k = int(data["k"])
            n = int(data["N"])
            sets = {}
            for key, pairs in data["sets"].items():
                x_str, y_str = key.split(",")
                sets[(int(x_str), int(y_str))] = frozenset(
                    (int(a), int(b)) for a, b in pairs
                )
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed grid tiling instance: {exc}") from exc
        return cls(k=k, N=n, sets=sets)


@dataclass(frozen=True)
class GTAssignment:
    """One chosen pair per cell; a candidate grid tiling solution."""

    choice: Mapping[Cell, Pair]

    def __post_init__(self):
        norm = {
            (int(x), int(y)): (int(a), int(b))
            for (x, y), (a, b) in dict(self.choice).items()
        }
        object.__setattr__(self, "choice", norm)


def validate_instance(inst: GridTilingInstance) -> list[str]:
    """Return a list of invariant violations; empty means the instance is valid."""
    violations = []
    if not isinstance(inst.k, int) or inst.k < 1:
        violations.append(f"k must be a positive integer, got {inst.k!r}")
    if not isinstance(inst.N, int) or inst.N < 2:
        violations.append(f"N must be an integer >= 2, got {inst.N!r}")
    if violations:
        return violations
    expected = {(x, y) for x in range(1, inst.k + 1) for y in range(1, inst.k + 1)}
    present = set(inst.sets)
    for cell in sorted(expected - present):
        violations.append(f"missing set for cell {cell}")
    for cell in sorted(present - expected):
        violations.append(f"unexpected cell {cell} outside [1,{inst.k}]^2")
    for cell in sorted(present & expected):
        for a, b in sorted(inst.sets[cell]):
            if not (1 <= a <= inst.N and 1 <= b <= inst.N):
                violations.append(
                    f"cell {cell}: pair ({a},{b}) outside [1,{inst.N}]^2"
                )
    return violations


def check_gt_solution(inst: GridTilingInstance, asg: GTAssignment) -> bool:
    """True iff ``asg`` picks a member of every cell's set and is monotone.

    Monotone means: second coordinates non-decreasing as x grows within each
    row, first coordinates non-decreasing as y grows within each column.
    """
    cells = list(inst.cells())
    missing = [c for c in cells if c not in asg.choice]
    if missing:
        raise ValueError(f"assignment is not total; missing cells {missing}")
    for cell in cells:
        if asg.choice[cell] not in inst.sets.get(cell, frozenset()):
            return False
    for y in range(1, inst.k + 1):
        for x in range(1, inst.k):
            if asg.choice[(x, y)][1] > asg.choice[(x + 1, y)][1]:
                return False
    for x in range(1, inst.k + 1):
        for y in range(1, inst.k):
            if asg.choice[(x, y)][0] > asg.choice[(x, y + 1)][0]:
                return False
    return True


def solve_gt_brute_force(
    inst: GridTilingInstance, budget: int = DEFAULT_BUDGET
) -> GTAssignment | None:
    """Exhaustive backtracking over cells in row-major order.

    Returns a valid assignment, or None iff no assignment satisfies
    ``check_gt_solution``.  Partial assignments violating a row or column
    condition are pruned immediately.  Raises BudgetExceededError when more
    than ``budget`` candidate pairs have been tried.
    """
    violations = validate_instance(inst)
    if violations:
        raise ValueError("invalid instance: " + "; ".join(violations))
    order = list(inst.cells())
    candidates = {cell: sorted(inst.sets[cell]) for cell in order}
    choice: dict[Cell, Pair] = {}
    expansions = 0

    def backtrack(pos: int) -> bool:
        nonlocal expansions
        if pos == len(order):
            return True
        x, y = order[pos]
        for a, b in candidates[(x, y)]:
            expansions += 1
            if expansions > budget:
                raise BudgetExceededError(budget)
            if x > 1 and choice[(x - 1, y)][1] > b:
                continue
            if y > 1 and choice[(x, y - 1)][0] > a:
                continue
            choice[(x, y)] = (a, b)
            if backtrack(pos + 1):
                return True
            del choice[(x, y)]
        return False

    if backtrack(0):
        return GTAssignment(dict(choice))
    return None


def generate_planted(k: int, N: int, noise: int = 0, seed: int = 0) -> GridTilingInstance:
    """Instance with a deterministic monotone assignment planted in every cell.

    Cell (x, y) always contains (min(y, N), min(x, N)), which is monotone by
    construction, plus ``noise`` uniformly random extra pairs per cell.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if noise < 0:
        raise ValueError(f"noise must be >= 0, got {noise}")
    rng = random.Random(seed)
    sets = {}
    for y in range(1, k + 1):
        for x in range(1, k + 1):
            pairs = {(min(y, N), min(x, N))}
            for _ in range(noise):
                pairs.add((rng.randint(1, N), rng.randint(1, N)))
            sets[(x, y)] = frozenset(pairs)
    return GridTilingInstance(k=k, N=N, sets=sets)


def generate_random(k: int, N: int, density: float, seed: int = 0) -> GridTilingInstance:
    """Instance where each pair joins each cell independently with probability ``density``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    rng = random.Random(seed)
    sets = {}
    for y in range(1, k + 1):
        for x in range(1, k + 1):
            sets[(x, y)] = frozenset(
                (a, b)
                for a in range(1, N + 1)
                for b in range(1, N + 1)
                if rng.random() < density
            )
    return GridTilingInstance(k=k, N=N, sets=sets)
