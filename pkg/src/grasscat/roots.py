"""The root system J_{k,n} realised on the lattice Z^n(k).

Generators are labelled 1..n: label i < n is alpha_i = -e_i + e_{i+1}, and
label n is beta = e_1 + ... + e_k.  The diagram is the path 1 - 2 - ... - (n-1)
with node n joined to node k.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from grasscat.errors import DomainError
from grasscat.profiles import Profile, multiplicity_vector


class RootType(enum.Enum):
    REAL = "RealRoot"
    IMAGINARY = "ImaginaryRoot"
    NOT_ROOT = "NotRoot"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RootVector:
    n: int
    k: int
    x: tuple[int, ...]

    def __post_init__(self):
        x = tuple(int(v) for v in self.x)
        if len(x) != self.n:
            raise DomainError(f"expected {self.n} entries, got {len(x)}")
        if not 1 <= self.k < self.n:
            raise DomainError(f"need 1 <= k < n, got k={self.k}, n={self.n}")
        if sum(x) % self.k:
            raise DomainError("not in Z^n(k)")
        object.__setattr__(self, "x", x)

    def __add__(self, other: "RootVector") -> "RootVector":
        _same(self, other)
        return RootVector(self.n, self.k, tuple(a + b for a, b in zip(self.x, other.x)))

    def __neg__(self) -> "RootVector":
        return RootVector(self.n, self.k, tuple(-a for a in self.x))

    def scale(self, c: int) -> "RootVector":
        return RootVector(self.n, self.k, tuple(c * a for a in self.x))


@dataclass(frozen=True)
class SimpleRootCoords:
    c_beta: int
    c: tuple[int, ...]

    def __str__(self) -> str:
        return format_coords(self)


def _same(v: RootVector, w: RootVector) -> None:
    if (v.n, v.k) != (w.n, w.k):
        raise DomainError("mismatched (n, k)")


def q(v: RootVector) -> Fraction:
    s = sum(v.x)
    return sum(a * a for a in v.x) + Fraction(2 - v.k, v.k * v.k) * s * s


def bilinear(v: RootVector, w: RootVector) -> Fraction:
    _same(v, w)
    return sum(a * b for a, b in zip(v.x, w.x)) + Fraction(2 - v.k, v.k * v.k) * sum(
        v.x
    ) * sum(w.x)


def simple_root(n: int, k: int, i: int) -> RootVector:
    if i == n:
        return RootVector(n, k, tuple(1 if j < k else 0 for j in range(n)))
    if not 1 <= i < n:
        raise DomainError(f"no generator {i}")
    x = [0] * n
    x[i - 1], x[i] = -1, 1
    return RootVector(n, k, tuple(x))


def beta(n: int, k: int) -> RootVector:
    return simple_root(n, k, n)


def pairing(v: RootVector, i: int) -> Fraction:
    """<v, alpha_i^vee>, equal to B(v, alpha_i) since every generator has norm 2."""
    return bilinear(v, simple_root(v.n, v.k, i))


def reflect(v: RootVector, i: int) -> RootVector:
    n, k = v.n, v.k
    x = list(v.x)
    if i == n:
        s = sum(x)
        r = sum(x[k:]) - Fraction(2 * s, k)
        if r.denominator != 1:
            raise DomainError("reflection left the lattice")
        for j in range(k):
            x[j] += int(r)
        return RootVector(n, k, tuple(x))
    if not 1 <= i < n:
        raise DomainError(f"no generator {i}")
    x[i - 1], x[i] = x[i], x[i - 1]
    return RootVector(n, k, tuple(x))


def apply_word(v: RootVector, word: Sequence[int]) -> RootVector:
    """Apply s_{w1} s_{w2} ... s_{wl} to v; the rightmost letter acts first."""
    for i in reversed(word):
        v = reflect(v, i)
    return v


def to_simple_coords(v: RootVector) -> SimpleRootCoords:
    s = sum(v.x)
    if s % v.k:
        raise DomainError("not in Z^n(k)")
    cb = s // v.k
    c, acc = [], 0
    for i in range(v.n - 1):
        acc += v.x[i] - (cb if i < v.k else 0)
        c.append(-acc)
    return SimpleRootCoords(cb, tuple(c))


def from_simple_coords(n: int, k: int, sc: SimpleRootCoords) -> RootVector:
    if len(sc.c) != n - 1:
        raise DomainError(f"expected {n - 1} alpha coefficients")
    c = (0,) + tuple(sc.c) + (0,)
    x = [c[i] - c[i + 1] + (sc.c_beta if i < k else 0) for i in range(n)]
    return RootVector(n, k, tuple(x))


def format_coords(sc: SimpleRootCoords) -> str:
    terms = []
    for coef, name in [(sc.c_beta, "β")] + [(c, f"α{i + 1}") for i, c in enumerate(sc.c)]:
        if coef == 0:
            continue
        mag = "" if abs(coef) == 1 else str(abs(coef))
        sign = "-" if coef < 0 else "+"
        terms.append((sign, mag + name))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, t in terms[1:]:
        out += sign + t
    return out


def diagram_edges(n: int, k: int) -> list[tuple[int, int]]:
    edges = [(i, i + 1) for i in range(1, n - 1)]
    edges.append((k, n))
    return edges


def _support_connected(n: int, k: int, support: set[int]) -> bool:
    if not support:
        return False
    adj: dict[int, set[int]] = {i: set() for i in support}
    for a, b in diagram_edges(n, k):
        if a in support and b in support:
            adj[a].add(b)
            adj[b].add(a)
    start = next(iter(support))
    seen, stack = {start}, [start]
    while stack:
        for b in adj[stack.pop()]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen == support


def _coeffs(v: RootVector) -> list[int]:
    sc = to_simple_coords(v)
    return list(sc.c) + [sc.c_beta]


def classify(v: RootVector) -> RootType:
    """Decide real / imaginary / not a root by reflection descent."""
    coeffs = _coeffs(v)
    if not any(coeffs):
        raise DomainError("zero vector")
    if any(c > 0 for c in coeffs) and any(c < 0 for c in coeffs):
        return RootType.NOT_ROOT
    if all(c <= 0 for c in coeffs):
        v = -v
        coeffs = [-c for c in coeffs]
    n = v.n
    while True:
        if sum(coeffs) == 1:
            return RootType.REAL
        for i in range(1, n + 1):
            if pairing(v, i) > 0:
                v = reflect(v, i)
                coeffs = _coeffs(v)
                if any(c < 0 for c in coeffs):
                    return RootType.NOT_ROOT
                break
        else:
            support = {i + 1 for i, c in enumerate(coeffs) if c}
            if _support_connected(n, v.k, support):
                return RootType.IMAGINARY
            return RootType.NOT_ROOT


def profile_vector(P: Profile) -> RootVector:
    return RootVector(P.n, P.k, multiplicity_vector(P))


def profile_root(P: Profile) -> tuple[Fraction, RootType, SimpleRootCoords]:
    v = profile_vector(P)
    return q(v), classify(v), to_simple_coords(v)


def vector(n: int, k: int, x: Iterable[int]) -> RootVector:
    x = list(x)
    return RootVector(n, k, tuple(x) + (0,) * (n - len(x)))
