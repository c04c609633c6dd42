import numpy as np
import pytest

from grasscat import linalg as la
from grasscat import oracle as O
from grasscat.errors import DomainError
from grasscat.profiles import Profile, increase
from grasscat.subsets import KSubset, all_subsets, peaks

PRIMES = (O.DEFAULT_PRIME, O.SECOND_PRIME)


def P(text, n=9):
    return Profile.parse(text, n)


def build(text, n=9, seed=0, p=O.DEFAULT_PRIME):
    return O.build_from_profile(P(text, n), seed, p)


def test_rank1_truncated_relations():
    for I in all_subsets(3, 9)[:20]:
        M = O.build_rank1(I)
        M.check()
        T = O.to_truncated(M)
        assert T.N == 18 and T.relations_hold()
        assert O.truncated_hom_dim(T, O.truncated_rank1(I, 18)) == O.truncated_hom_dim(T, T)


def test_cover_of_rank1_sits_at_peaks():
    assert O.projective_cover_indices(O.build_rank1(KSubset(9, (1, 5, 6)))) == (4, 9)
    for I in all_subsets(3, 8):
        assert set(O.projective_cover_indices(O.build_rank1(I))) == peaks(I)


def test_projective_cover_of_projective():
    for j in range(1, 10):
        Pj = O.build_rank1(O.projective(j, 3, 9))
        assert O.projective_cover_indices(Pj) == (j,)
        assert O.syzygy(Pj).s == 0


def test_cover_fixture_359_246():
    # computed by the oracle and frozen
    assert O.projective_cover_indices(build("359|246")) == (1, 2, 4, 8)


def test_syzygy_rank1():
    om = O.syzygy(O.build_rank1(KSubset(9, (1, 2, 4))))
    assert om.s == 1
    assert O.are_isomorphic(om, O.build_rank1(KSubset(9, (3, 5, 6))))
    assert O.graded_profile(om) == P("356")


def test_hom_contains_identity():
    M = build("147|258")
    assert O.hom_dim(M, M) >= 1
    eye = np.zeros((M.s, M.s, M.d), dtype=np.int64)
    eye[np.arange(M.s), np.arange(M.s), 0] = 1
    assert O.is_morphism(eye, M, M)


def test_rank1_modules_are_rigid():
    for I in all_subsets(3, 9):
        assert O.ext1(O.build_rank1(I), O.build_rank1(I)) == 0


def test_nonrigid_369_258_147():
    for p in PRIMES:
        M = build("369|258|147", p=p)
        assert O.is_indecomposable(M)
        assert O.ext1(M, M) == 2


def test_three_box_pairs_rigid_indecomposable():
    for text in ("147|258", "258|147", "359|246", "135|246"):
        M = build(text)
        assert O.is_indecomposable(M)
        assert O.is_rigid(M)


def test_indecomposability_examples():
    L = O.build_rank1(KSubset(9, (1, 4, 7)))
    assert O.is_indecomposable(L)
    assert not O.is_indecomposable(O.direct_sum(L, L))
    M = build("147|258")
    assert not O.is_indecomposable(O.direct_sum(M, M))
    # case (D) of the imaginary analysis is absent from the paper's list
    assert not O.is_indecomposable(build("147|258|369"))


def test_isomorphism_examples():
    M = build("147|258", seed=0)
    assert O.are_isomorphic(M, build("147|258", seed=5))
    assert not O.are_isomorphic(M, build("258|147"))
    assert not O.are_isomorphic(M, O.direct_sum(O.build_rank1(KSubset(9, (1, 4, 7))), O.build_rank1(KSubset(9, (2, 5, 8)))))


@pytest.mark.parametrize(
    "text",
    ["147", "147|258", "359|246", "369|258|147", "157|369|248", "359|258|147|146", "169|147|358"],
)
def test_graded_profile_reads_back_the_input(text):
    for seed in range(3):
        M = build(text, seed=seed)
        M.check()
        assert O.graded_profile(M) == P(text)
        assert M.content() == tuple(sum(i in r.elements for r in P(text).rows) for i in range(1, 10))


@pytest.mark.parametrize(
    "a,b",
    [("124", "356"), ("356", "124"), ("137", "246"), ("135|246", "124"), ("147|258", "147|258"), ("369|258|147", "369|258|147"), ("157|369|248", "157|369|248")],
)
def test_ext1_matches_truncated_model(a, b):
    for p in PRIMES:
        M, N = build(a, p=p), build(b, p=p)
        expected = O.ext1(M, N)
        for T in (18, 36):
            assert O.truncated_ext1(O.to_truncated(M, T), O.to_truncated(N, T)) == expected


def test_ext_symmetry():
    for a, b in [("124", "356"), ("137", "246"), ("147|258", "369"), ("135|246", "357")]:
        M, N = build(a), build(b)
        assert O.ext1(M, N) == O.ext1(N, M)


def test_truncated_relations_after_build_and_syzygy():
    M = build("359|258|147|146")
    assert O.to_truncated(M).relations_hold()
    assert O.to_truncated(O.syzygy(M)).relations_hold()


def test_truncated_json_round_trip():
    T = O.to_truncated(build("147|258"))
    U = O.TruncatedModule.from_json(T.to_json())
    assert np.array_equal(T.X, U.X) and np.array_equal(T.Y, U.Y)
    assert U.relations_hold()


def test_increase_module_matches_profile_increase():
    for text in ("147|258", "359|246", "369|258|147"):
        M = build(text)
        for j in (1, 4, 9):
            for mode in ("subset", "complement"):
                Mi = O.increase_module(M, j, mode)
                Mi.check()
                assert O.graded_profile(Mi) == increase(P(text), j, mode)
                assert O.is_rigid(Mi) == O.is_rigid(M)
                assert O.is_indecomposable(Mi) == O.is_indecomposable(M)


def test_increase_truncated_agrees():
    M, N = build("147|258"), build("359|246")
    base = O.truncated_hom_dim(O.to_truncated(M), O.to_truncated(N))
    for mode in ("subset", "complement"):
        Ti = O.truncated_increase(O.to_truncated(M), 4, mode)
        Ni = O.truncated_increase(O.to_truncated(N), 4, mode)
        assert Ti.relations_hold()
        assert O.truncated_hom_dim(Ti, Ni) == base


def test_hom_colength_invariant_under_inc_dec():
    M, N = build("147|258"), build("135|246")
    c = O.hom_colength(M, N)
    for mode in ("subset", "complement"):
        Mi, Ni = O.increase_module(M, 5, mode), O.increase_module(N, 5, mode)
        assert O.hom_colength(Mi, Ni) == c
        Md, Nd = O.decrease_module(Mi, 6, mode), O.decrease_module(Ni, 6, mode)
        assert O.hom_colength(Md, Nd) == c


def test_decrease_preconditions():
    M = build("147|258")
    with pytest.raises(DomainError):
        O.decrease_module(M, 1)
    with pytest.raises(DomainError):
        O.decrease_module(M, 1, "complement")


def test_direct_sum_and_primes_agree():
    for text in ("147|258", "169|147|358", "157|369|248"):
        verdicts = set()
        for p in PRIMES:
            M = build(text, p=p)
            verdicts.add((O.is_indecomposable(M), O.ext1(M, M), O.projective_cover_indices(M)))
        assert len(verdicts) == 1


def test_linalg_basics():
    p = 7
    A = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert la.rank(A, p) == 2
    N = la.nullspace(A, p)
    assert not ((A @ N.T) % p).any()
    B = np.array([[2, 1], [1, 1]])
    assert np.array_equal((B @ la.inverse(B, p)) % p, np.eye(2, dtype=np.int64))
