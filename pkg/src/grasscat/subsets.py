"""Cyclic combinatorics of k-subsets of [n] = {1, ..., n}.

All labels are 1-based and reduced modulo n into [1, n].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Optional

from grasscat.errors import DomainError


def cyc(i: int, n: int) -> int:
    """Reduce an integer label into [1, n]."""
    return (i - 1) % n + 1


@total_ordering
@dataclass(frozen=True)
class KSubset:
    n: int
    elements: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        els = tuple(sorted(int(e) for e in self.elements))
        if len(set(els)) != len(els):
            raise DomainError(f"repeated labels in {els}")
        if els and (els[0] < 1 or els[-1] > self.n):
            raise DomainError(f"labels {els} outside [1, {self.n}]")
        if not els:
            raise DomainError("a k-subset needs k >= 1")
        object.__setattr__(self, "elements", els)

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> "KSubset":
        return cls(n, tuple(cyc(e, n) for e in elements))

    @property
    def k(self) -> int:
        return len(self.elements)

    def __contains__(self, i: int) -> bool:
        return cyc(i, self.n) in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __lt__(self, other: "KSubset") -> bool:
        return (self.n, self.elements) < (other.n, other.elements)

    def __str__(self) -> str:
        return format_subset(self.elements, self.n)

    def complement(self) -> tuple[int, ...]:
        s = set(self.elements)
        return tuple(i for i in range(1, self.n + 1) if i not in s)

    def indicator(self) -> tuple[int, ...]:
        s = set(self.elements)
        return tuple(1 if i in s else 0 for i in range(1, self.n + 1))

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "elements": list(self.elements)}

    @classmethod
    def from_json(cls, data: dict) -> "KSubset":
        out = cls(int(data["n"]), tuple(data["elements"]))
        if "k" in data and int(data["k"]) != out.k:
            raise DomainError("k does not match the number of elements")
        return out


def format_subset(elements: Iterable[int], n: int) -> str:
    """Paper-style label string: digits run together when n < 10."""
    els = list(elements)
    if n < 10:
        return "".join(str(e) for e in els)
    return " ".join(str(e) for e in els)


def parse_subset(text: str, n: int) -> KSubset:
    text = text.strip()
    if any(c in text for c in " ,"):
        parts = [p for p in text.replace(",", " ").split() if p]
        return KSubset(n, tuple(int(p) for p in parts))
    if n >= 10:
        raise DomainError(f"ambiguous subset {text!r} for n={n}; separate labels")
    return KSubset(n, tuple(int(c) for c in text))


def peaks(I: KSubset) -> frozenset[int]:
    """Labels i with i not in I and i+1 in I (cyclically)."""
    n = I.n
    s = set(I.elements)
    return frozenset(i for i in range(1, n + 1) if i not in s and cyc(i + 1, n) in s)


def valleys(I: KSubset) -> frozenset[int]:
    """Labels i with i in I and i+1 not in I (cyclically)."""
    n = I.n
    s = set(I.elements)
    return frozenset(i for i in s if cyc(i + 1, n) not in s)


def cyclic_runs(I: KSubset) -> int:
    """Number of maximal cyclic intervals of I."""
    if I.k == I.n:
        return 1
    return len(valleys(I))


def _check_same(I: KSubset, J: KSubset) -> None:
    if I.n != J.n or I.k != J.k:
        raise DomainError(f"mismatched (k, n): ({I.k},{I.n}) vs ({J.k},{J.n})")


def interlacing_degree(I: KSubset, J: KSubset) -> Optional[int]:
    """r when I and J are r-interlacing, None when they do not interlace."""
    _check_same(I, J)
    a = set(I.elements) - set(J.elements)
    b = set(J.elements) - set(I.elements)
    if not a:
        return 0
    merged = sorted([(x, 0) for x in a] + [(x, 1) for x in b])
    tags = [t for _, t in merged]
    if all(tags[i] != tags[i + 1] for i in range(len(tags) - 1)):
        return len(a)
    return None


def shift_subset(I: KSubset, a: int) -> KSubset:
    return KSubset(I.n, tuple(cyc(e + a, I.n) for e in I.elements))


def all_subsets(k: int, n: int) -> list[KSubset]:
    from itertools import combinations

    return [KSubset(n, c) for c in combinations(range(1, n + 1), k)]
