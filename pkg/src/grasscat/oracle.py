"""Exact linear-algebra models of Cohen-Macaulay B_{k,n}-modules over F_p.

The working model is the lattice-flag picture.  A module of rank s is a
chain of Z-lattices L_0 <= L_1 <= ... <= L_n = t^{-d} L_0 inside K^s, with
d = n - k and t L_j <= L_{j-1}; x_j is the inclusion and y_j is
multiplication by t.  Normalising L_0 = Z^s, the chain is recorded by the
t-stable subspaces W_j = t^d L_j / t^d L_0 of V = (F_p[t]/t^d)^s.  Every
question asked here (Hom, Ext^1, covers, syzygies, quotients) reduces to
finite linear algebra on V without any truncation error.

`TruncatedModule` gives the quiver-representation model (x/y matrices over
F_p[t]/t^N) used as an independent cross-check on small cases.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import sympy
from sympy.polys.matrices import DomainMatrix

from grasscat import linalg as la
from grasscat.errors import DomainError, RecoveryError
from grasscat.profiles import Profile
from grasscat.subsets import KSubset, cyc

DEFAULT_PRIME = 32003
SECOND_PRIME = 65537


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True, eq=False)
class FlagModule:
    """A graded CM module as a chain of t-stable subspaces W_0 = 0 <= ... <= W_n = V.

    `levels[i]` is the degree of the i-th basis vector e_i of L_0; the
    coordinate t^e e_i of V then sits at level levels[i] - e.  Every W_j is
    spanned by homogeneous vectors.
    """

    k: int
    n: int
    s: int
    p: int
    W: tuple[np.ndarray, ...]
    levels: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def d(self) -> int:
        return self.n - self.k

    @property
    def dimV(self) -> int:
        return self.s * self.d

    def dims(self) -> tuple[int, ...]:
        return tuple(w.shape[0] for w in self.W)

    def content(self) -> tuple[int, ...]:
        """Multiplicity of each label j in the filtration factors."""
        dm = self.dims()
        return tuple(self.s - (dm[j] - dm[j - 1]) for j in range(1, self.n + 1))

    def check(self) -> None:
        s, d, p = self.s, self.d, self.p
        if len(self.W) != self.n + 1:
            raise DomainError("need n + 1 subspaces")
        if len(self.levels) != s:
            raise DomainError("need one level per coordinate")
        if self.W[0].shape[0] != 0 or self.W[-1].shape[0] != s * d:
            raise DomainError("chain must run from 0 to V")
        lev = coord_levels(self.levels, d)
        for j in range(1, self.n + 1):
            if not la.contains(self.W[j], self.W[j - 1], p):
                raise DomainError(f"W_{j - 1} not inside W_{j}")
            if not la.contains(self.W[j - 1], la.tshift(self.W[j], s, d), p):
                raise DomainError(f"t W_{j} not inside W_{j - 1}")
        for j, w in enumerate(self.W):
            if sum(_level_dims(w, lev, p).values()) != w.shape[0]:
                raise DomainError(f"W_{j} is not graded")

    def __repr__(self) -> str:
        return f"FlagModule(k={self.k}, n={self.n}, s={self.s}, p={self.p}, dims={self.dims()})"


def coord_levels(levels: Sequence[int], D: int) -> np.ndarray:
    """Level of each coordinate t^e e_i in the (coordinate, power) layout."""
    return np.array([a - e for a in levels for e in range(D)], dtype=np.int64)


def _level_dims(w: np.ndarray, lev: np.ndarray, p: int) -> dict[int, int]:
    out = {}
    for ell in np.unique(lev):
        r = la.rank(w[:, lev == ell], p) if w.shape[0] else 0
        if r:
            out[int(ell)] = r
    return out


def _graded_complement(S: np.ndarray, T: np.ndarray, lev: np.ndarray, p: int) -> np.ndarray:
    """Homogeneous rows completing span(S) to span(S) + span(T), both graded."""
    dim = lev.size
    out = []
    for ell in np.unique(lev):
        cols = lev == ell
        Tl = np.zeros((T.shape[0], dim), dtype=np.int64)
        Tl[:, cols] = T[:, cols]
        Sl = np.zeros((S.shape[0], dim), dtype=np.int64)
        Sl[:, cols] = S[:, cols]
        comp = la.complement_rows(Sl, Tl, p)
        out.extend(comp)
    if not out:
        return np.zeros((0, dim), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def _module(k, n, s, p, spaces, levels) -> FlagModule:
    d = n - k
    W = tuple(la.row_basis(np.asarray(w, dtype=np.int64).reshape(-1, s * d), p, s * d) for w in spaces)
    return FlagModule(k, n, s, p, W, tuple(int(a) for a in levels))


def rank1_heights(I: KSubset) -> list[int]:
    """c_j = number of labels i <= j outside I, for j = 0..n."""
    c = [0]
    for j in range(1, I.n + 1):
        c.append(c[-1] + (j not in I.elements))
    return c


def build_rank1(I: KSubset, p: int = DEFAULT_PRIME, level: int = 0) -> FlagModule:
    k, n = I.k, I.n
    d = n - k
    if d < 1:
        raise DomainError("need k < n")
    spaces = []
    for c in rank1_heights(I):
        spaces.append(np.eye(d, dtype=np.int64)[d - c :])
    return _module(k, n, 1, p, spaces, (level,))


def empty_module(k: int, n: int, p: int) -> FlagModule:
    return FlagModule(k, n, 0, p, tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(n + 1)), ())


def direct_sum(*mods: FlagModule) -> FlagModule:
    M0 = mods[0]
    k, n, p, d = M0.k, M0.n, M0.p, M0.d
    for M in mods:
        if (M.k, M.n, M.p) != (k, n, p):
            raise DomainError("summands must share (k, n, p)")
    s = sum(M.s for M in mods)
    spaces = []
    for j in range(n + 1):
        blocks = []
        off = 0
        for M in mods:
            w = M.W[j]
            if w.shape[0]:
                z = np.zeros((w.shape[0], s * d), dtype=np.int64)
                z[:, off * d : (off + M.s) * d] = w
                blocks.append(z)
            off += M.s
        spaces.append(np.vstack(blocks) if blocks else np.zeros((0, s * d), dtype=np.int64))
    levels = tuple(a for M in mods for a in M.levels)
    return _module(k, n, s, p, spaces, levels)


def _generators(M: FlagModule, j: int) -> np.ndarray:
    """Module generators of W_j: a complement of t W_j inside W_j."""
    w = M.W[j]
    if w.shape[0] == 0:
        return w
    tw = la.tshift(w, M.s, M.d)
    return la.complement_rows(tw, w, M.p)


# -- the dimension lattice and the profile ------------------------------------


def column_levels(M: FlagModule) -> list[list[int]]:
    """Degrees of a homogeneous basis of each L_j, in decreasing order.

    These are the layer heights of the dimension lattice at vertex j.
    """
    d, p = M.d, M.p
    lev = coord_levels(M.levels, d)
    if M.s == 0:
        return [[] for _ in range(M.n + 1)]
    lo, hi = min(M.levels), max(M.levels) + d + 1
    out = []
    for w in M.W:
        ld = _level_dims(w, lev, p)
        count = [ld.get(ell - d, 0) + sum(a >= ell for a in M.levels) for ell in range(lo, hi + 2)]
        heights = []
        for i, ell in enumerate(range(lo, hi + 1)):
            heights += [ell] * (count[i] - count[i + 1])
        out.append(sorted(heights, reverse=True))
    return out


def graded_profile(M: FlagModule) -> Profile:
    """Peel the dimension lattice from the top: row r is the r-th highest rim."""
    if M.s == 0:
        raise RecoveryError("zero module has no profile")
    h = column_levels(M)
    rows = []
    for r in range(M.s):
        steps = [h[j][r] - h[j - 1][r] for j in range(1, M.n + 1)]
        if any(x not in (0, 1) for x in steps):
            raise RecoveryError("layer heights do not form a rim")
        rows.append(KSubset(M.n, tuple(j for j, x in zip(range(1, M.n + 1), steps) if x == 0)))
    return Profile(M.n, tuple(rows))


# -- Hom ---------------------------------------------------------------------


def hom_space(M: FlagModule, N: FlagModule, degree: Optional[int] = None) -> np.ndarray:
    """Basis of H = {F in Mat(F_p[t]/t^d) : F W_j(M) <= W_j(N) for all j}.

    Hom(M, N) is the preimage of H in Mat(Z), and contains t^d Mat(Z).  With
    `degree` set, only homogeneous maps of that degree are returned.
    Returned shape: (dim H, N.s, M.s, d).
    """
    if (M.k, M.n, M.p) != (N.k, N.n, N.p):
        raise DomainError("modules over different algebras")
    s, s2, d, p = M.s, N.s, M.d, M.p
    nvar = s2 * s * d
    if nvar == 0:
        return np.zeros((0, s2, s, d), dtype=np.int64)
    if degree is None:
        keep = np.arange(nvar)
    else:
        # F e_b = sum t^e e'_a has degree levels'[a] - e - levels[b]
        e_need = np.array(N.levels)[:, None] - np.array(M.levels)[None, :] - degree
        mask = np.zeros((s2, s, d), dtype=bool)
        for a in range(s2):
            for b in range(s):
                if 0 <= e_need[a, b] < d:
                    mask[a, b, e_need[a, b]] = True
        keep = np.flatnonzero(mask.reshape(-1))
        if keep.size == 0:
            return np.zeros((0, s2, s, d), dtype=np.int64)
    rows = []
    for j in range(1, N.n):
        B = _generators(M, j)
        if B.shape[0] == 0:
            continue
        C = la.annihilator(N.W[j], s2 * d, p)
        if C.shape[0] == 0:
            continue
        C3 = C.reshape(-1, s2, d)
        B3 = B.reshape(-1, s, d)
        K = np.zeros((C3.shape[0], B3.shape[0], s2, s, d), dtype=np.int64)
        for e in range(d):
            K[..., e] = np.einsum("rag,cbg->rcab", C3[:, :, e:], B3[:, :, : d - e]) % p
        rows.append(K.reshape(-1, nvar)[:, keep])
    if rows:
        sol = la.nullspace(np.vstack(rows), p)
    else:
        sol = np.eye(keep.size, dtype=np.int64)
    full = np.zeros((sol.shape[0], nvar), dtype=np.int64)
    full[:, keep] = sol
    return full.reshape(-1, s2, s, d)


def hom_dim(M: FlagModule, N: FlagModule) -> int:
    """dim_F of Hom(M, N) / t^d Mat(Z)."""
    return hom_space(M, N).shape[0]


def hom_colength(M: FlagModule, N: FlagModule) -> int:
    """Length of Mat(Z) / Hom(M, N); independent of the normalisation d."""
    return M.s * N.s * M.d - hom_dim(M, N)


def is_morphism(F: np.ndarray, M: FlagModule, N: FlagModule) -> bool:
    L = la.lin(F % M.p)
    for j in range(M.n + 1):
        if M.W[j].shape[0] == 0:
            continue
        img = (M.W[j] @ L.T) % M.p
        if not la.contains(N.W[j], img, M.p):
            return False
    return True


# -- projective cover and syzygy ---------------------------------------------


@dataclass(frozen=True, eq=False)
class Cover:
    U: tuple[int, ...]
    P: FlagModule
    pi: np.ndarray  # s x sP over F_p[t]/t^d
    G0: np.ndarray  # sP x sOmega, a basis of ker(pi)
    G0_left: np.ndarray  # sOmega x sP, left inverse of G0
    omega: FlagModule


def projective(u: int, k: int, n: int) -> KSubset:
    """The rank-1 projective with its generator at vertex u."""
    return KSubset(n, tuple(cyc(u + i, n) for i in range(1, k + 1)))


def _window(M: FlagModule) -> list[np.ndarray]:
    """Subspaces t^{2d} L_j / t^{2d} L_0 of (F_p[t]/t^{2d})^s for j = 0..2n."""
    s, d = M.s, M.d
    D = 2 * d
    out = []
    for j in range(2 * M.n + 1):
        if j <= M.n:
            w = M.W[j].reshape(-1, s, d)
            z = np.zeros((w.shape[0], s, D), dtype=np.int64)
            z[:, :, d:] = w
        else:
            w = M.W[j - M.n].reshape(-1, s, d)
            lift = np.zeros((w.shape[0], s, D), dtype=np.int64)
            lift[:, :, :d] = w
            tail = np.zeros((s * d, s, D), dtype=np.int64)
            for a in range(s):
                for e in range(d):
                    tail[a * d + e, a, d + e] = 1
            z = np.concatenate([lift, tail])
        out.append(z.reshape(-1, s * D))
    return out


def projective_cover_indices(M: FlagModule) -> tuple[int, ...]:
    return cover(M).U


def cover(M: FlagModule) -> Cover:
    """Graded minimal projective cover; each summand sits at its generator's degree."""
    if "cover" in M._cache:
        return M._cache["cover"]
    k, n, s, p, d = M.k, M.n, M.s, M.p, M.d
    if s == 0:
        raise DomainError("zero module has no cover")
    D = 2 * d
    U = _window(M)
    lev = coord_levels(M.levels, D)
    gens: list[tuple[int, np.ndarray, int]] = []
    for j in range(1, n + 1):
        rad = np.vstack([U[j - 1], la.tshift(U[j + 1], s, D)])
        for g in _graded_complement(rad, U[j], lev, p):
            level = int(lev[np.flatnonzero(g)[0]]) + D
            gens.append((j, g.reshape(s, D), level))
    cols = []
    summands = []
    for u, g, level in gens:
        Pu = projective(u, k, n)
        cu = rank1_heights(Pu)[u]
        shift = D - cu
        if g[:, :shift].any():
            raise AssertionError("generator lift not divisible as expected")
        col = np.zeros((s, d), dtype=np.int64)
        top = min(d, D - shift)
        col[:, :top] = g[:, shift : shift + top]
        cols.append(col)
        summands.append(build_rank1(Pu, p, level - cu))
    pi = np.stack(cols, axis=1)  # s x sP x d
    P = direct_sum(*summands)
    sP = P.s
    A0 = pi[:, :, 0]
    _, piv = la.rref(A0, p)
    if len(piv) != s:
        raise AssertionError("cover map is not surjective")
    free = [c for c in range(sP) if c not in set(piv)]
    A = pi[:, piv, :]
    Bf = pi[:, free, :]
    X = la.pmul(la.pinv(A, p), Bf, p)
    G0 = np.zeros((sP, len(free), d), dtype=np.int64)
    G0[piv] = (-X) % p
    for i, f in enumerate(free):
        G0[f, i, 0] = 1
    G0_left = np.zeros((len(free), sP, d), dtype=np.int64)
    for i, f in enumerate(free):
        G0_left[i, f, 0] = 1
    so = len(free)
    if so == 0:
        omega = empty_module(k, n, p)
    else:
        L = la.lin(G0)
        spaces = []
        for j in range(n + 1):
            C = la.annihilator(P.W[j], sP * d, p)
            if C.shape[0] == 0:
                spaces.append(np.eye(so * d, dtype=np.int64))
            else:
                spaces.append(la.nullspace((C @ L) % p, p))
        omega = _module(k, n, so, p, spaces, [P.levels[f] for f in free])
    out = Cover(tuple(u for u, _, _ in gens), P, pi, G0, G0_left, omega)
    M._cache["cover"] = out
    return out


def syzygy(M: FlagModule) -> FlagModule:
    """First syzygy of the minimal projective cover, i.e. tau^{-1}(M)."""
    return cover(M).omega


# -- Ext^1 and extensions ----------------------------------------------------


def _ext_data(M: FlagModule, N: FlagModule, degree: Optional[int] = None):
    """(basis of H_{Omega M, N}, rows spanning the image of Hom(P, N))."""
    cv = cover(M)
    if cv.omega.s == 0 or N.s == 0:
        return np.zeros((0, N.s, cv.omega.s, M.d), dtype=np.int64), None
    H_om = hom_space(cv.omega, N, degree)
    H_p = hom_space(cv.P, N, degree)
    width = N.s * cv.omega.s * M.d
    imgs = [la.pmul(F, cv.G0, M.p).reshape(-1) for F in H_p]
    img = np.array(imgs, dtype=np.int64) if imgs else np.zeros((0, width), dtype=np.int64)
    return H_om, img


def ext1(M: FlagModule, N: FlagModule, degree: Optional[int] = None) -> int:
    """dim_F Ext^1(M, N), or of its graded piece of the given degree."""
    H_om, img = _ext_data(M, N, degree)
    if H_om.shape[0] == 0:
        return 0
    return H_om.shape[0] - la.rank(img, M.p)


def ext_classes(M: FlagModule, N: FlagModule, degree: Optional[int] = None) -> np.ndarray:
    """Representatives in H_{Omega M, N} of a basis of Ext^1(M, N)."""
    H_om, img = _ext_data(M, N, degree)
    if H_om.shape[0] == 0:
        return H_om
    flat = H_om.reshape(H_om.shape[0], -1)
    reps = la.complement_rows(img, flat, M.p)
    return reps.reshape(-1, *H_om.shape[1:])


def extension(M: FlagModule, N: FlagModule, g: np.ndarray) -> FlagModule:
    """Middle term of 0 -> N -> E -> M -> 0 for the class of g: Omega M -> N.

    Coordinates of E are (N, M); built as the pushout of the cover of M.
    The class must be homogeneous of degree 0 for E to be graded.
    """
    cv = cover(M)
    p, d = M.p, M.d
    sN, s = N.s, M.s
    top = np.concatenate([la.peye(sN, d), la.pmul(g % p, cv.G0_left, p)], axis=1)
    bottom = np.concatenate([np.zeros((s, sN, d), dtype=np.int64), cv.pi], axis=1)
    Phi = np.concatenate([top, bottom], axis=0)
    L = la.lin(Phi)
    src = direct_sum(N, cv.P)
    spaces = [(w @ L.T) % p for w in src.W]
    E = _module(M.k, M.n, sN + s, p, spaces, N.levels + M.levels)
    E.check()
    return E


def random_extension(M: FlagModule, N: FlagModule, seed=0) -> FlagModule:
    """A generic degree-0 extension of M by N."""
    rng = _rng(seed)
    reps = ext_classes(M, N, degree=0)
    if reps.shape[0] == 0:
        return direct_sum(N, M)
    coef = rng.integers(1, M.p, size=reps.shape[0])
    g = np.tensordot(coef, reps, axes=1) % M.p
    return extension(M, N, g)


def regrade(M: FlagModule, shift: int) -> FlagModule:
    """The same module with every degree raised by `shift`."""
    return FlagModule(M.k, M.n, M.s, M.p, M.W, tuple(a + shift for a in M.levels))


def ext_degrees(M: FlagModule, N: FlagModule) -> dict[int, int]:
    """Nonzero graded pieces {degree: dim} of Ext^1(M, N)."""
    om = cover(M).omega
    if om.s == 0 or N.s == 0:
        return {}
    lo = min(N.levels) - max(om.levels) - M.d + 1
    hi = max(N.levels) - min(om.levels)
    out = {}
    for deg in range(lo, hi + 1):
        e = ext1(M, N, deg)
        if e:
            out[deg] = e
    return out


def nonsplit_extension(M: FlagModule, N: FlagModule, seed=0) -> FlagModule:
    """Generic extension in the lowest nonzero degree, N regraded to make it degree 0."""
    degs = ext_degrees(M, N)
    if not degs:
        raise DomainError("Ext^1 vanishes; every extension splits")
    return random_extension(M, regrade(N, -min(degs)), seed)


def packed_level(M: FlagModule, J: KSubset) -> int:
    """Degree placing the rim of L_J right under the lowest rim of M."""
    h = column_levels(M)
    c = rank1_heights(J)
    return min(h[j][-1] - c[j] for j in range(M.n + 1))


def build_from_profile(P: Profile, seed=0, p: int = DEFAULT_PRIME) -> FlagModule:
    """Iterated generic extension with factors P.rows (top row = quotient).

    Each new factor is placed close-packed under the previous one and glued
    by a generic extension class of degree 0.
    """
    rng = _rng(seed)
    M = build_rank1(P.rows[0], p)
    for row in P.rows[1:]:
        M = random_extension(M, build_rank1(row, p, packed_level(M, row)), rng)
    return M


# -- endomorphisms: indecomposability and isomorphism -------------------------


def _charpoly_factors(A: np.ndarray, p: int) -> int:
    F = sympy.GF(p)
    dm = DomainMatrix([[F(int(v)) for v in row] for row in A], A.shape, F)
    coeffs = [int(c) for c in dm.charpoly()]
    x = sympy.Symbol("x")
    poly = sympy.Poly(coeffs, x, modulus=p)
    return len(poly.factor_list()[1])


def is_indecomposable(M: FlagModule, trials: int = 20, seed=0) -> bool:
    """Monte Carlo test that End(M) is local; a False verdict is certain.

    Uses degree-0 endomorphisms: a graded module is indecomposable exactly
    when that algebra is local.
    """
    if M.s <= 1:
        return M.s == 1
    rng = _rng(seed)
    H = hom_space(M, M, degree=0)
    for _ in range(trials):
        coef = rng.integers(0, M.p, size=H.shape[0])
        phi = np.tensordot(coef, H, axes=1) % M.p
        if _charpoly_factors(phi[:, :, 0], M.p) > 1:
            return False
    return True


def are_isomorphic(M: FlagModule, N: FlagModule, trials: int = 50, seed=0) -> bool:
    if (M.k, M.n, M.s, M.p) != (N.k, N.n, N.s, N.p):
        return False
    if M.dims() != N.dims():
        return False
    if M.s == 0:
        return True
    rng = _rng(seed)
    H = hom_space(M, N)
    for _ in range(trials):
        coef = rng.integers(0, M.p, size=H.shape[0])
        F = np.tensordot(coef, H, axes=1) % M.p
        if la.rank(F[:, :, 0], M.p) == M.s:
            return True
    return False


def is_rigid(M: FlagModule) -> bool:
    return ext1(M, M) == 0


# -- increase / decrease at module level (lattice chains) ---------------------


def increase_module(M: FlagModule, j: int, mode: str = "subset") -> FlagModule:
    """Insert a vertex after j with x = Id (subset) or x = t Id (complement)."""
    k, n, s, p, d = M.k, M.n, M.s, M.p, M.d
    if not 1 <= j <= n:
        raise DomainError(f"j={j} outside [1, {n}]")
    if mode == "subset":
        spaces = list(M.W[: j + 1]) + [M.W[j]] + list(M.W[j + 1 :])
        return _module(k + 1, n + 1, s, p, spaces, M.levels)
    if mode != "complement":
        raise DomainError(f"unknown mode {mode!r}")
    d2 = d + 1
    spaces = []
    for i in range(n + 2):
        if i <= j:
            w = M.W[i].reshape(-1, s, d)
            z = np.zeros((w.shape[0], s, d2), dtype=np.int64)
            z[:, :, 1:] = w
            spaces.append(z.reshape(-1, s * d2))
        else:
            w = M.W[i - 1].reshape(-1, s, d)
            z = np.zeros((w.shape[0], s, d2), dtype=np.int64)
            z[:, :, :d] = w
            tail = np.zeros((s, s, d2), dtype=np.int64)
            tail[np.arange(s), np.arange(s), d] = 1
            spaces.append(np.concatenate([z, tail]).reshape(-1, s * d2))
    return _module(k, n + 1, s, p, spaces, M.levels)


def decrease_module(M: FlagModule, j: int, mode: str = "subset") -> FlagModule:
    """Remove vertex j, where x_j is an isomorphism (subset) or t Id (complement)."""
    k, n, s, p, d = M.k, M.n, M.s, M.p, M.d
    dm = M.dims()
    if not 1 <= j <= n:
        raise DomainError(f"j={j} outside [1, {n}]")
    if mode == "subset":
        if dm[j] != dm[j - 1]:
            raise DomainError("label not common to all rows")
        spaces = list(M.W[:j]) + list(M.W[j + 1 :])
        return _module(k - 1, n - 1, s, p, spaces, M.levels)
    if mode != "complement":
        raise DomainError(f"unknown mode {mode!r}")
    if dm[j] - dm[j - 1] != s or d < 2:
        raise DomainError("label present in some row")
    d2 = d - 1
    spaces = []
    for i in range(n):
        if i < j:
            w = M.W[i].reshape(-1, s, d)
            if w[:, :, 0].any():
                raise AssertionError("expected t-divisible subspace")
            spaces.append(w[:, :, 1:].reshape(-1, s * d2))
        else:
            w = M.W[i + 1].reshape(-1, s, d)
            spaces.append(w[:, :, :d2].reshape(-1, s * d2))
    return _module(k, n - 1, s, p, spaces, M.levels)


# -- the quiver-representation model ------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncatedModule:
    """x/y matrices over F_p[t]/t^N; X[j-1] is x_j : V_{j-1} -> V_j."""

    k: int
    n: int
    s: int
    p: int
    N: int
    X: np.ndarray  # (n, s, s, N)
    Y: np.ndarray  # (n, s, s, N)

    def relations_hold(self) -> bool:
        p, s, N = self.p, self.s, self.N
        t = np.zeros((s, s, N), dtype=np.int64)
        if N > 1:
            t[np.arange(s), np.arange(s), 1] = 1
        for j in range(self.n):
            if not np.array_equal(la.pmul(self.X[j], self.Y[j], p), t):
                return False
            if not np.array_equal(la.pmul(self.Y[j], self.X[j], p), t):
                return False
        d = self.n - self.k
        for start in range(self.n):
            comp = la.peye(s, N)
            for step in range(self.n):
                comp = la.pmul(self.X[(start + step) % self.n], comp, p)
            target = np.zeros((s, s, N), dtype=np.int64)
            if d < N:
                target[np.arange(s), np.arange(s), d] = 1
            if not np.array_equal(comp, target):
                return False
        return True

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": "grasscat/1",
                "k": self.k,
                "n": self.n,
                "s": self.s,
                "p": self.p,
                "N": self.N,
                "X": self.X.tolist(),
                "Y": self.Y.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "TruncatedModule":
        data = json.loads(text)
        return cls(
            data["k"],
            data["n"],
            data["s"],
            data["p"],
            data["N"],
            np.array(data["X"], dtype=np.int64).reshape(data["n"], data["s"], data["s"], data["N"]),
            np.array(data["Y"], dtype=np.int64).reshape(data["n"], data["s"], data["s"], data["N"]),
        )


def truncated_rank1(I: KSubset, N: int, p: int = DEFAULT_PRIME) -> TruncatedModule:
    n = I.n
    X = np.zeros((n, 1, 1, N), dtype=np.int64)
    Y = np.zeros((n, 1, 1, N), dtype=np.int64)
    for i in range(1, n + 1):
        one, tee = (X, Y) if i in I.elements else (Y, X)
        one[i - 1, 0, 0, 0] = 1
        if N > 1:
            tee[i - 1, 0, 0, 1] = 1
    return TruncatedModule(I.k, n, 1, p, N, X, Y)


def _laurent_mul(A: dict, B: dict, p: int) -> dict:
    """Product of matrices with Laurent coefficients stored as {power: matrix}."""
    out: dict = {}
    for ea, ma in A.items():
        for eb, mb in B.items():
            out[ea + eb] = (out.get(ea + eb, 0) + ma @ mb) % p
    return {e: m for e, m in out.items() if np.any(m)}


def to_truncated(M: FlagModule, N: Optional[int] = None) -> TruncatedModule:
    """Quiver-representation matrices of a flag module, modulo t^N.

    Bases are chosen step by step: B_j = B_{j-1} g_j D_j^{-1} with g_j constant
    and D_j = diag(t, .., t, 1, .., 1), closing up with B_n = t^{-d} B_0.
    """
    k, n, s, p, d = M.k, M.n, M.s, M.p, M.d
    N = N if N is not None else 2 * n
    eye = np.eye(s, dtype=np.int64)
    Binv = {0: eye.copy()}  # B_{j-1}^{-1}
    X = np.zeros((n, s, s, N), dtype=np.int64)
    Y = np.zeros((n, s, s, N), dtype=np.int64)
    Bprev = {0: eye.copy()}  # B_{j-1}
    for j in range(1, n):
        r = M.W[j].shape[0] - M.W[j - 1].shape[0]
        w = M.W[j].reshape(-1, s, d)
        # coordinates of t^{1-d} B_{j-1}^{-1} w modulo t
        q = np.zeros((w.shape[0], s), dtype=np.int64)
        for e, m in Binv.items():
            src = d - 1 - e
            if 0 <= src < d:
                q = (q + w[:, :, src] @ m.T) % p
        Q = la.row_basis(q, p, s)
        if Q.shape[0] != r:
            raise AssertionError("unexpected step dimension")
        g = np.vstack([Q, la.complement_rows(Q, eye, p)]).T % p
        ginv = la.inverse(g, p)
        Dt = np.diag([1] * r + [0] * (s - r)).astype(np.int64)
        D1 = eye - Dt
        # X_j = D_j g^{-1}, Y_j = g t D_j^{-1}
        X[j - 1, :, :, 0] = (D1 @ ginv) % p
        if N > 1:
            X[j - 1, :, :, 1] = (Dt @ ginv) % p
            Y[j - 1, :, :, 1] = (g @ D1) % p
        Y[j - 1, :, :, 0] = (g @ Dt) % p
        Binv = _laurent_mul({0: (D1 @ ginv) % p, 1: (Dt @ ginv) % p}, Binv, p)
        Bprev = _laurent_mul(Bprev, {0: (g @ D1) % p, -1: (g @ Dt) % p}, p)
    # closing step: X_n = t^d B_{n-1}, Y_n = t^{1-d} B_{n-1}^{-1}
    for e, m in Bprev.items():
        pw = e + d
        if pw < 0:
            raise AssertionError("closing map is not integral")
        if pw < N:
            X[n - 1, :, :, pw] = (X[n - 1, :, :, pw] + m) % p
    for e, m in Binv.items():
        pw = e + 1 - d
        if pw < 0:
            raise AssertionError("closing map is not integral")
        if pw < N:
            Y[n - 1, :, :, pw] = (Y[n - 1, :, :, pw] + m) % p
    return TruncatedModule(k, n, s, p, N, X, Y)


def truncated_hom_dim(M: TruncatedModule, N: TruncatedModule) -> int:
    """dim_F of tuples (F_j) with F_j x_j = x_j F_{j-1} and F_{j-1} y_j = y_j F_j."""
    if (M.k, M.n, M.p, M.N) != (N.k, N.n, N.p, N.N):
        raise DomainError("modules over different truncations")
    n, s, s2, T, p = M.n, M.s, N.s, M.N, M.p
    blk = s2 * s * T
    nvar = n * blk

    rows = []
    for j in range(1, n + 1):
        cur = (j % n) * blk  # F_j (vertex n stored at index 0)
        prv = (j - 1) * blk
        # F_j X^M_j - X^N_j F_{j-1} = 0
        R = np.zeros((s2 * s * T, nvar), dtype=np.int64)
        R[:, cur : cur + blk] += _right_op(M.X[j - 1], s2, T)
        R[:, prv : prv + blk] -= _left_op(N.X[j - 1], s, T)
        rows.append(R % p)
        # F_{j-1} Y^M_j - Y^N_j F_j = 0
        R = np.zeros((s2 * s * T, nvar), dtype=np.int64)
        R[:, prv : prv + blk] += _right_op(M.Y[j - 1], s2, T)
        R[:, cur : cur + blk] -= _left_op(N.Y[j - 1], s, T)
        rows.append(R % p)
    A = np.vstack(rows)
    return nvar - la.rank(A, p)


def truncated_ext1(M: TruncatedModule, N: TruncatedModule) -> int:
    """dim Ext^1(M, N) from the truncated model.

    Hom(M, N/t^T N) is Hom(M, N)/t^T (dimension s_M s_N T) plus the t^T-torsion
    of Ext^1, which is all of it once T is large.
    """
    return truncated_hom_dim(M, N) - M.s * N.s * M.N


def _left_op(A: np.ndarray, s: int, T: int) -> np.ndarray:
    """Matrix of F -> A F on F of shape (r, s, T), A of shape (r2, r, T)."""
    r2, r, _ = A.shape
    out = np.zeros((r2, s, T, r, s, T), dtype=np.int64)
    for e in range(T):
        for g in range(T - e):
            for b in range(s):
                out[:, b, g + e, :, b, g] = A[:, :, e]
    return out.reshape(r2 * s * T, r * s * T)


def _right_op(B: np.ndarray, r: int, T: int) -> np.ndarray:
    """Matrix of F -> F B on F of shape (r, s, T), B of shape (s, s2, T)."""
    s, s2, _ = B.shape
    out = np.zeros((r, s2, T, r, s, T), dtype=np.int64)
    for e in range(T):
        for g in range(T - e):
            for a in range(r):
                out[a, :, g + e, a, :, g] = B[:, :, e].T
    return out.reshape(r * s2 * T, r * s * T)


def truncated_increase(M: TruncatedModule, j: int, mode: str = "subset") -> TruncatedModule:
    """Insert vertex j+1 with x = Id, y = t Id (subset) or x = t Id, y = Id."""
    s, N = M.s, M.N
    one = la.peye(s, N)
    tee = np.zeros((s, s, N), dtype=np.int64)
    if N > 1:
        tee[np.arange(s), np.arange(s), 1] = 1
    x_new, y_new = (one, tee) if mode == "subset" else (tee, one)
    X = np.concatenate([M.X[:j], x_new[None], M.X[j:]])
    Y = np.concatenate([M.Y[:j], y_new[None], M.Y[j:]])
    k = M.k + 1 if mode == "subset" else M.k
    return TruncatedModule(k, M.n + 1, s, M.p, N, X, Y)


def truncated_direct_sum(A: TruncatedModule, B: TruncatedModule) -> TruncatedModule:
    s = A.s + B.s
    X = np.zeros((A.n, s, s, A.N), dtype=np.int64)
    Y = np.zeros_like(X)
    X[:, : A.s, : A.s] = A.X
    X[:, A.s :, A.s :] = B.X
    Y[:, : A.s, : A.s] = A.Y
    Y[:, A.s :, A.s :] = B.Y
    return TruncatedModule(A.k, A.n, s, A.p, A.N, X, Y)
