"""Profiles of filtered modules and the rim geometry between two rows.

A profile lists rank-1 filtration factors from the top quotient (row 1)
down to the submodule (last row).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from grasscat.errors import DomainError
from grasscat.subsets import (
    KSubset,
    _check_same,
    cyc,
    format_subset,
    interlacing_degree,
    parse_subset,
    shift_subset,
)


@dataclass(frozen=True)
class Profile:
    n: int
    rows: tuple[KSubset, ...]

    def __post_init__(self):
        rows = tuple(self.rows)
        if not rows:
            raise DomainError("a profile needs at least one row")
        for r in rows:
            if r.n != self.n or r.k != rows[0].k:
                raise DomainError("all rows must share (k, n)")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, n: int, rows: Iterable[Iterable[int]]) -> "Profile":
        return cls(n, tuple(KSubset(n, tuple(r)) for r in rows))

    @classmethod
    def parse(cls, text: str, n: int) -> "Profile":
        return cls(n, tuple(parse_subset(part, n) for part in text.split("|")))

    @property
    def k(self) -> int:
        return self.rows[0].k

    @property
    def m(self) -> int:
        return len(self.rows)

    rank = m

    def __str__(self) -> str:
        return "|".join(format_subset(r.elements, self.n) for r in self.rows)

    def __lt__(self, other: "Profile") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (self.n, self.k, self.m, tuple(r.elements for r in self.rows))

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "rows": [list(r.elements) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "Profile":
        out = cls.of(int(data["n"]), data["rows"])
        if "k" in data and int(data["k"]) != out.k:
            raise DomainError("k does not match the row length")
        return out


@dataclass(frozen=True)
class QuasiBox:
    start: int
    end: int
    edges: tuple[int, ...]
    size: int
    cosize: int
    is_box: bool

    @property
    def arc(self) -> tuple[int, int]:
        return (self.start, self.end)


def rim_difference(I: KSubset, J: KSubset) -> list[int]:
    """Close-packed gap d(0..n) between the rims of L_I (upper) and L_J (lower)."""
    _check_same(I, J)
    n = I.n
    d = [0]
    for j in range(1, n + 1):
        d.append(d[-1] + (j in J.elements) - (j in I.elements))
    low = min(d)
    return [x - low for x in d]


def _arcs(d: Sequence[int], n: int) -> list[tuple[int, int]]:
    zeros = [j for j in range(1, n + 1) if d[j] == 0]
    arcs = []
    for a, z in enumerate(zeros):
        nxt = zeros[(a + 1) % len(zeros)]
        length = (nxt - z) % n or n
        if length > 1 or (len(zeros) == 1 and any(d)):
            arcs.append((z, nxt))
    return arcs


def quasi_boxes(I: KSubset, J: KSubset) -> list[QuasiBox]:
    d = rim_difference(I, J)
    n = I.n
    out = []
    for z, nxt in _arcs(d, n):
        length = (nxt - z) % n or n
        edges = tuple(cyc(z + t, n) for t in range(1, length + 1))
        inI = [e in I.elements for e in edges]
        inJ = [e in J.elements for e in edges]
        # rectangle: upper rim has a single peak, lower rim a single valley
        upper = inI == sorted(inI)
        lower = inJ == sorted(inJ, reverse=True)
        size = sum(inI)
        out.append(QuasiBox(z, nxt, edges, size, length - size, upper and lower))
    return out


def branching_points(I: KSubset, J: KSubset) -> list[int]:
    d = rim_difference(I, J)
    return [j for j in range(1, I.n + 1) if d[j] == 0]


def _collapse_labels(I: KSubset, J: KSubset) -> list[int]:
    both = set(I.elements) & set(J.elements)
    union = set(I.elements) | set(J.elements)
    return [i for i in range(1, I.n + 1) if i in union and i not in both]


def collapse(I: KSubset, J: KSubset) -> tuple[KSubset, KSubset]:
    """Remove common labels and common non-labels, then relabel in order."""
    _check_same(I, J)
    if I == J:
        raise DomainError("degenerate collapse")
    keep = _collapse_labels(I, J)
    psi = {lab: i + 1 for i, lab in enumerate(keep)}
    n2 = len(keep)
    return (
        KSubset(n2, tuple(psi[i] for i in I.elements if i in psi)),
        KSubset(n2, tuple(psi[j] for j in J.elements if j in psi)),
    )


def is_three_boxes(I: KSubset, J: KSubset) -> bool:
    if I == J:
        return False
    qb = quasi_boxes(*collapse(I, J))
    return len(qb) == 3 and all(b.is_box for b in qb)


def a_shift(I: KSubset, J: KSubset, a: int) -> tuple[KSubset, KSubset]:
    _check_same(I, J)
    if I == J:
        raise DomainError("degenerate collapse")
    keep = _collapse_labels(I, J)
    n2 = len(keep)
    psi = {lab: i for i, lab in enumerate(keep)}
    common = set(I.elements) & set(J.elements)

    def move(S: KSubset) -> KSubset:
        moved = {keep[(psi[i] + a) % n2] for i in S.elements if i in psi}
        return KSubset(S.n, tuple(moved | common))

    return move(I), move(J)


def content(P: Profile) -> Counter:
    c: Counter = Counter()
    for r in P.rows:
        c.update(r.elements)
    return c


def multiplicity_vector(P: Profile) -> tuple[int, ...]:
    c = content(P)
    return tuple(c[i] for i in range(1, P.n + 1))


def is_weakly_column_decreasing(P: Profile) -> bool:
    rows = [r.elements for r in P.rows]
    return all(
        rows[i][j] >= rows[i + 1][j] for i in range(len(rows) - 1) for j in range(P.k)
    )


def is_canonical(P: Profile) -> bool:
    if not is_weakly_column_decreasing(P):
        return False
    top, bottom = P.rows[0].elements, P.rows[-1].elements
    return all(bottom[j] >= top[j - 1] for j in range(1, P.k))


def is_interlacing(P: Profile) -> bool:
    rows = P.rows
    return all(
        interlacing_degree(rows[a], rows[b]) is not None
        for a in range(len(rows))
        for b in range(a + 1, len(rows))
    )


def cyclic_permutations(P: Profile) -> list[Profile]:
    rows = P.rows
    return [Profile(P.n, rows[i:] + rows[:i]) for i in range(len(rows))]


def canonical_rotation(P: Profile) -> Optional[Profile]:
    """The canonical cyclic permutation of P, if one exists."""
    for Q in cyclic_permutations(P):
        if is_canonical(Q):
            return Q
    return None


def profile_shift(P: Profile, a: int) -> Profile:
    return Profile(P.n, tuple(shift_subset(r, a) for r in P.rows))


SUBSET, COMPLEMENT = "subset", "complement"


def increase(P: Profile, j: int, mode: str = SUBSET) -> Profile:
    """Insert a new label j+1; in subset mode it joins every row."""
    if not 1 <= j <= P.n:
        raise DomainError(f"j={j} outside [1, {P.n}]")
    if mode not in (SUBSET, COMPLEMENT):
        raise DomainError(f"unknown mode {mode!r}")
    rows = []
    for r in P.rows:
        new = [i if i <= j else i + 1 for i in r.elements]
        if mode == SUBSET:
            new.append(j + 1)
        rows.append(KSubset(P.n + 1, tuple(new)))
    return Profile(P.n + 1, tuple(rows))


def decrease(P: Profile, j: int, mode: str = SUBSET) -> Profile:
    """Delete label j; subset mode needs j in every row, complement mode in none."""
    if not 1 <= j <= P.n:
        raise DomainError(f"j={j} outside [1, {P.n}]")
    if mode == SUBSET:
        if not all(j in r.elements for r in P.rows):
            raise DomainError("label not common to all rows")
    elif mode == COMPLEMENT:
        if any(j in r.elements for r in P.rows):
            raise DomainError("label present in some row")
    else:
        raise DomainError(f"unknown mode {mode!r}")
    rows = tuple(
        KSubset(P.n - 1, tuple(i if i < j else i - 1 for i in r.elements if i != j))
        for r in P.rows
    )
    return Profile(P.n - 1, rows)


def full_reduction(P: Profile) -> Profile:
    """Apply decreases until no label is common to all rows or absent from all."""
    while True:
        for j in range(P.n, 0, -1):
            if all(j in r.elements for r in P.rows) and P.k > 1:
                P = decrease(P, j, SUBSET)
                break
            if not any(j in r.elements for r in P.rows) and P.n - P.k > 1:
                P = decrease(P, j, COMPLEMENT)
                break
        else:
            return P
