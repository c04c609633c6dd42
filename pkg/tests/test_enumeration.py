from math import comb

from grasscat.artube import TABLE1, census_39, table1
from grasscat.enumeration import (
    IMAGINARY_PATTERNS,
    count_three_box_rank2,
    enumerate_canonical_real,
    enumerate_imaginary_rank3,
    enumerate_three_box_rank2,
    n_kn,
    partition_counts,
)
from grasscat.profiles import Profile, collapse, cyclic_permutations, is_canonical, is_interlacing, is_three_boxes
from grasscat.roots import RootType, profile_root
from grasscat.subsets import all_subsets, interlacing_degree


def partitions_by_brute_force(r):
    counts = [0, 0, 0]
    seen = set()
    for a in range(1, r):
        for b in range(1, r):
            c = r - a - b
            if c >= 1:
                key = tuple(sorted((a, b, c)))
                if key not in seen:
                    seen.add(key)
                    counts[len(set(key)) - 1] += 1
    return tuple(counts)


def test_partition_counts():
    assert partition_counts(3) == (1, 0, 0)
    assert partition_counts(4) == (0, 1, 0)
    assert partition_counts(6) == (1, 1, 1)
    assert partition_counts(2) == (0, 0, 0)
    for r in range(3, 25):
        assert partition_counts(r) == partitions_by_brute_force(r)


def test_n_kn_examples():
    assert n_kn(4, 8) == 120
    assert n_kn(3, 6) == 2
    assert n_kn(3, 9) == 168 == 2 * comb(9, 6)
    for n in range(4, 12):
        assert n_kn(2, n) == 0


def test_three_box_enumeration_small():
    assert [str(Q) for Q in enumerate_three_box_rank2(3, 6)] == ["135|246", "246|135"]
    assert len(enumerate_three_box_rank2(4, 8)) == 120
    assert count_three_box_rank2(3, 9) == 168


def test_vectorised_count_matches_slow_predicate():
    for k, n in [(3, 6), (3, 7), (3, 8), (4, 8)]:
        slow = sum(
            is_three_boxes(I, J) for I in all_subsets(k, n) for J in all_subsets(k, n) if I != J
        )
        assert slow == count_three_box_rank2(k, n) == n_kn(k, n)


def test_formula_matches_brute_force_moderate():
    for k in range(3, 6):
        for n in range(2 * k, 12):
            assert count_three_box_rank2(k, n) == n_kn(k, n)


def test_canonical_real_table():
    got = enumerate_canonical_real(3, 9, 3)
    assert [str(Q) for Q in got] == [str(Q) for Q in sorted(table1(), key=Profile.sort_key)]
    assert "258|147|136" in TABLE1 and "479|369|258" in TABLE1
    for Q in got:
        assert is_canonical(Q) and is_interlacing(Q)
        assert profile_root(Q)[1] == RootType.REAL


def test_canonical_real_rank1_and_rank2():
    assert len(enumerate_canonical_real(3, 9, 1)) == comb(9, 3)
    for Q in enumerate_canonical_real(3, 9, 2):
        I, J = Q.rows
        I2, J2 = collapse(I, J)
        assert interlacing_degree(I2, J2) == 3


def test_imaginary_patterns():
    got = enumerate_imaginary_rank3(9)
    assert len(got) == 12
    rigid = {Q for Q, flag in got if flag}
    census_imag = {e.profile for e in census_39() if e.root_type == RootType.IMAGINARY}
    assert rigid == census_imag
    assert all(profile_root(Q)[1] == RootType.IMAGINARY for Q, _ in got)
    assert len(enumerate_imaginary_rank3(10)) == 12 * comb(10, 9)
    assert enumerate_imaginary_rank3(8) == []
    assert len(IMAGINARY_PATTERNS) == 12


def test_census_profiles_distinct():
    real = [Q for P in table1() for Q in cyclic_permutations(P)]
    assert len(set(real)) == 216
    imag = {Q for Q, flag in enumerate_imaginary_rank3(9) if flag}
    assert not set(real) & imag
