"""Closed-form counts and exhaustive generators of profiles."""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterator

import numpy as np

from grasscat.profiles import Profile, is_canonical, multiplicity_vector
from grasscat.roots import RootVector, q
from grasscat.subsets import KSubset


def partition_counts(r: int) -> tuple[int, int, int]:
    """Partitions r = r1 + r2 + r3 into positive parts, by number of distinct parts."""
    counts = [0, 0, 0]
    for a in range(1, r + 1):
        for b in range(1, a + 1):
            c = r - a - b
            if 1 <= c <= b:
                counts[len({a, b, c}) - 1] += 1
    return counts[0], counts[1], counts[2]


def n_kn(k: int, n: int) -> int:
    """Number of rank-2 profiles with exactly three boxes, by the closed formula."""
    total = 0
    for r in range(3, k + 1):
        p1, p2, p3 = partition_counts(r)
        weight3 = 2 * r * p1 + 6 * r * p2 + 12 * r * p3  # three times the coefficient
        assert weight3 % 3 == 0
        total += weight3 // 3 * comb(n, 2 * r) * comb(n - 2 * r, k - r)
    return total


def _indicator_matrix(k: int, n: int) -> tuple[list[tuple[int, ...]], np.ndarray]:
    subs = list(combinations(range(1, n + 1), k))
    A = np.zeros((len(subs), n), dtype=np.int8)
    for r, s in enumerate(subs):
        A[r, [e - 1 for e in s]] = 1
    return subs, A


def _three_box_mask(steps: np.ndarray) -> np.ndarray:
    """Rows whose cyclic step word is three tents resting on a common floor.

    steps[:, j] = [j in J] - [j in I].  After collapsing the zero steps the
    word must have six runs, and its minimum must be reached three times.
    """
    rows, n = steps.shape
    nz = steps != 0
    doubled = np.concatenate([steps, steps], axis=1)
    idx = np.where(np.concatenate([nz, nz], axis=1), np.arange(2 * n)[None, :], -1)
    last = np.maximum.accumulate(idx, axis=1)
    # previous nonzero strictly before position n + j
    prev_pos = last[:, n - 1 : 2 * n - 1]
    prev_val = np.take_along_axis(doubled, np.maximum(prev_pos, 0), axis=1)
    changes = (nz & (steps != prev_val)).sum(axis=1)
    d = np.cumsum(steps, axis=1)
    floor = d.min(axis=1, keepdims=True)
    arcs = (nz & (d == floor)).sum(axis=1)
    return (changes == 6) & (arcs == 3)


def iter_three_box_rank2(k: int, n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Ordered pairs (I, J), I the top row, forming exactly three boxes."""
    subs, A = _indicator_matrix(k, n)
    for a in range(len(subs)):
        steps = A.astype(np.int16) - A[a].astype(np.int16)
        for b in np.flatnonzero(_three_box_mask(steps)):
            yield subs[a], subs[b]


def count_three_box_rank2(k: int, n: int) -> int:
    subs, A = _indicator_matrix(k, n)
    A16 = A.astype(np.int16)
    return int(sum(_three_box_mask(A16 - A16[a]).sum() for a in range(len(subs))))


def enumerate_three_box_rank2(k: int, n: int) -> list[Profile]:
    return [Profile.of(n, [I, J]) for I, J in iter_three_box_rank2(k, n)]


def _column_chains(subs: list[KSubset], m: int) -> Iterator[tuple[KSubset, ...]]:
    """m-tuples of subsets that decrease weakly in every column."""

    def below(a: KSubset, b: KSubset) -> bool:
        return all(x >= y for x, y in zip(a.elements, b.elements))

    def extend(chain):
        if len(chain) == m:
            yield tuple(chain)
            return
        for s in subs:
            if below(chain[-1], s):
                yield from extend(chain + [s])

    for s in subs:
        yield from extend([s])


def enumerate_canonical_real(k: int, n: int, m: int) -> list[Profile]:
    """Canonical m-row profiles whose multiplicity vector has q = 2, sorted."""
    subs = [KSubset(n, c) for c in combinations(range(1, n + 1), k)]
    out = []
    for rows in _column_chains(subs, m):
        P = Profile(n, rows)
        if not is_canonical(P):
            continue
        if q(RootVector(n, k, multiplicity_vector(P))) == 2:
            out.append(P)
    return sorted(out, key=Profile.sort_key)


# rows of the twelve imaginary patterns, as indices into i_1 < ... < i_9
IMAGINARY_PATTERNS = [
    ((1, 5, 7), (3, 6, 9), (2, 4, 8)),
    ((2, 6, 8), (1, 4, 7), (3, 5, 9)),
    ((3, 7, 9), (2, 5, 8), (1, 4, 6)),
    ((1, 4, 8), (3, 6, 9), (2, 5, 7)),
    ((2, 5, 9), (1, 4, 7), (3, 6, 8)),
    ((1, 3, 6), (2, 5, 8), (4, 7, 9)),
    ((2, 4, 7), (3, 6, 9), (1, 5, 8)),
    ((3, 5, 8), (1, 4, 7), (2, 6, 9)),
    ((4, 6, 9), (2, 5, 8), (1, 3, 7)),
    ((1, 4, 7), (3, 6, 9), (2, 5, 8)),
    ((2, 5, 8), (1, 4, 7), (3, 6, 9)),
    ((3, 6, 9), (2, 5, 8), (1, 4, 7)),
]
RIGID_PATTERNS = 9  # the first nine are rigid for n = 9


def enumerate_imaginary_rank3(n: int) -> list[tuple[Profile, bool]]:
    """Instantiate the twelve patterns; the flag marks the nine rigid ones."""
    out = []
    if n < 9:
        return out
    for idx in combinations(range(1, n + 1), 9):
        for p, pat in enumerate(IMAGINARY_PATTERNS):
            rows = [[idx[i - 1] for i in row] for row in pat]
            out.append((Profile.of(n, rows), p < RIGID_PATTERNS))
    return out
