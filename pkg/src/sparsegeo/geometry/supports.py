"""Support families and lifting functions."""

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..errors import MissingOrigin

Point = Tuple[int, ...]


@dataclass(frozen=True)
class SupportFamily:
    """Distinct supports of a square system with their multiplicities.

    ``classes[l]`` is the l-th distinct support (points sorted
    lexicographically), ``multiplicities[l]`` how many equations share it,
    and ``class_of[i]`` the class of equation i.
    """

    n: int
    classes: Tuple[Tuple[Point, ...], ...]
    multiplicities: Tuple[int, ...]
    class_of: Tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def support_of(self, i: int) -> Tuple[Point, ...]:
        return self.classes[self.class_of[i]]

    def equations_of(self, ell: int) -> List[int]:
        return [i for i, c in enumerate(self.class_of) if c == ell]


def group_supports(deltas: Sequence[Sequence[Sequence[int]]]) -> SupportFamily:
    """Group equal supports into classes, ordered by first appearance."""
    n = len(deltas)
    origin = (0,) * n
    keys: List[frozenset] = []
    classes: List[Tuple[Point, ...]] = []
    counts: List[int] = []
    class_of: List[int] = []
    for i, delta in enumerate(deltas):
        pts = [tuple(int(x) for x in q) for q in delta]
        for q in pts:
            if len(q) != n:
                raise ValueError(f"support point {q} of equation {i} is not in dimension {n}")
            if any(x < 0 for x in q):
                raise ValueError(f"support point {q} of equation {i} has a negative entry")
        key = frozenset(pts)
        if origin not in key:
            raise MissingOrigin(f"support of equation {i} does not contain the origin")
        if key in keys:
            ell = keys.index(key)
            counts[ell] += 1
        else:
            ell = len(keys)
            keys.append(key)
            classes.append(tuple(sorted(key)))
            counts.append(1)
        class_of.append(ell)
    return SupportFamily(n=n, classes=tuple(classes), multiplicities=tuple(counts), class_of=tuple(class_of))


@dataclass(frozen=True)
class LiftingFunction:
    """Integer heights on the points of every class, zero at the origin."""

    values: Tuple[Tuple[Tuple[Point, int], ...], ...]

    def table(self, ell: int) -> Dict[Point, int]:
        return dict(self.values[ell])

    def __call__(self, ell: int, q: Point) -> int:
        for p, w in self.values[ell]:
            if p == q:
                return w
        raise KeyError(q)

    @classmethod
    def from_tables(cls, family: SupportFamily, tables: Sequence[Dict[Point, int]]) -> "LiftingFunction":
        vals = []
        for ell, pts in enumerate(family.classes):
            vals.append(tuple((q, int(tables[ell][q])) for q in pts))
        return cls(values=tuple(vals))


def lifting_range(family: SupportFamily, rho: int, cap: Optional[int] = None) -> int:
    """Upper end of the sampling set for lifting values.

    The full set is {1, ..., rho * 2^(N_1 + ... + N_s)} with N_l the class
    sizes; ``cap`` optionally truncates it.
    """
    full = rho * 2 ** sum(family.sizes)
    return full if cap is None else max(1, min(full, cap))


def random_lifting(family: SupportFamily, rho: int, rng: random.Random, cap: Optional[int] = None) -> LiftingFunction:
    """Random lifting with values in {1, ..., lifting_range} and 0 at the origin."""
    if rho < 2:
        raise ValueError("rho must be at least 2")
    top = lifting_range(family, rho, cap)
    origin = (0,) * family.n
    tables = []
    for pts in family.classes:
        table = {}
        for q in pts:
            table[q] = 0 if q == origin else rng.randint(1, top)
        tables.append(table)
    return LiftingFunction.from_tables(family, tables)
