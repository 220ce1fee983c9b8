"""Farey fractions, standard words, palindromes, and basic pairs."""

from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bqtool.errors import NotAdmissible, NotNeighbours, NotPrimitive
from bqtool.farey import (
    BasicPair,
    Fraction,
    Mod2Type,
    cyclic_shifts,
    enumerate_primitives,
    exponent_sums,
    farey_sum,
    fraction_of_word,
    free_reduce,
    invert_word,
    is_neighbour,
    is_palindrome,
    mod2_type,
    palindromic_representative,
    rewrite_in_pair,
    standard_word,
)

import oracles


def frac(p: int, q: int) -> Fraction:
    return Fraction(p, q)


reduced_fractions = st.tuples(
    st.integers(min_value=-30, max_value=30), st.integers(min_value=1, max_value=30)
).filter(lambda pq: math.gcd(abs(pq[0]), pq[1]) == 1)


# ---------------------------------------------------------------------------
# fractions and mediants
# ---------------------------------------------------------------------------


class TestFraction:
    def test_normalization_and_level(self):
        assert frac(2, 4) == frac(1, 2)
        assert frac(-2, 4) == frac(-1, 2)
        assert frac(1, 0).is_infinity
        assert frac(1, 2).level == 3
        assert frac(-3, 4).level == 7

    def test_ordering_is_rational_order(self):
        assert frac(1, 3) < frac(1, 2) < frac(2, 3) < frac(1, 1)
        assert frac(-1, 2) < frac(0, 1)

    def test_str(self):
        assert str(frac(2, 3)) == "2/3"
        assert str(frac(1, 0)) == "1/0"


class TestMediant:
    def test_base_identification(self):
        assert farey_sum(frac(0, 1), frac(1, 0)) == frac(1, 1)

    def test_simple_mediant(self):
        assert farey_sum(frac(1, 2), frac(1, 1)) == frac(2, 3)

    def test_determinant_one_but_not_adjacent_fractions(self):
        # |1*3 - 2*1| = 1, so these are neighbours and the mediant exists
        assert farey_sum(frac(1, 2), frac(1, 3)) == frac(2, 5)

    def test_not_neighbours(self):
        with pytest.raises(NotNeighbours):
            farey_sum(frac(1, 3), frac(1, 1))

    @given(reduced_fractions, st.integers(min_value=-5, max_value=5))
    def test_mediant_is_neighbour_of_both(self, pq, k):
        # build a genuine neighbour of p/q: (kp+r)/(kq+s) for Bezout (r,s)
        p, q = pq
        # solve p*s - q*r = 1
        g, r0, s0 = _ext_gcd(p, q)
        r, s = -s0, r0
        r, s = r + k * p, s + k * q
        if s < 0 or (s == 0 and r < 0):
            r, s = -r, -s
        f1, f2 = Fraction(p, q), Fraction(r, s)
        if not is_neighbour(f1, f2):
            return
        m = farey_sum(f1, f2)
        assert is_neighbour(m, f1) and is_neighbour(m, f2)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


# ---------------------------------------------------------------------------
# standard words
# ---------------------------------------------------------------------------


class TestStandardWord:
    @pytest.mark.parametrize(
        "p,q,expected",
        [
            (0, 1, "a"),
            (1, 0, "b"),
            (1, 1, "ab"),
            (1, 2, "aab"),
            (2, 1, "abb"),
            (2, 3, "aabab"),
            (-1, 2, "Baa"),
            (-1, 1, "Ba"),
        ],
    )
    def test_examples(self, p, q, expected):
        assert standard_word(frac(p, q)) == expected

    @given(reduced_fractions)
    def test_matches_independent_recursion(self, pq):
        p, q = pq
        assert standard_word(frac(p, q)) == oracles.sb_word(p, q)

    @given(reduced_fractions)
    def test_length_is_level(self, pq):
        p, q = pq
        assert len(standard_word(frac(p, q))) == abs(p) + q

    @given(reduced_fractions)
    def test_exponent_convention(self, pq):
        # e_a counts the q side, e_b the p side
        p, q = pq
        e_a, e_b = exponent_sums(standard_word(frac(p, q)))
        assert (e_b, e_a) == (p, q)

    def test_negative_word_is_reversed_mirror(self):
        for p, q in [(1, 2), (2, 3), (3, 5), (1, 1)]:
            w = standard_word(frac(p, q))
            mirrored = w[::-1].translate(str.maketrans("bB", "Bb"))
            assert standard_word(frac(-p, q)) == mirrored


class TestFractionOfWord:
    @pytest.mark.parametrize(
        "w,p,q",
        [("aba", 1, 2), ("ab", 1, 1), ("a", 0, 1), ("b", 1, 0), ("Baa", -1, 2)],
    )
    def test_examples(self, w, p, q):
        assert fraction_of_word(w) == frac(p, q)

    def test_imprimitive(self):
        with pytest.raises(NotPrimitive):
            fraction_of_word("aabb")
        with pytest.raises(NotPrimitive):
            fraction_of_word("abab")

    @given(reduced_fractions)
    def test_round_trip(self, pq):
        p, q = pq
        f = frac(p, q)
        assert fraction_of_word(standard_word(f)) == f

    @given(reduced_fractions, st.integers(min_value=0, max_value=40))
    def test_round_trip_on_cyclic_shift(self, pq, k):
        p, q = pq
        w = standard_word(frac(p, q))
        shift = w[k % len(w):] + w[: k % len(w)]
        assert fraction_of_word(shift) == frac(p, q)

    @given(reduced_fractions)
    def test_inverse_word_same_class_up_to_sign(self, pq):
        # the inverse of w_{p/q} lies in the class of the mirrored fraction
        p, q = pq
        w = standard_word(frac(p, q))
        g = fraction_of_word(invert_word(w))
        assert g in (frac(p, q), frac(-p, q)) or (q == 0 and g.is_infinity)


# ---------------------------------------------------------------------------
# parity types and pairs
# ---------------------------------------------------------------------------


class TestMod2:
    @pytest.mark.parametrize(
        "p,q,t",
        [
            (1, 2, Mod2Type.T_B),
            (3, 5, Mod2Type.T_AB),
            (0, 1, Mod2Type.T_A),
            (1, 0, Mod2Type.T_B),
            (1, 1, Mod2Type.T_AB),
        ],
    )
    def test_examples(self, p, q, t):
        assert mod2_type(frac(p, q)) == t

    @given(reduced_fractions)
    def test_parity_matches_word_exponents(self, pq):
        p, q = pq
        e_a, e_b = exponent_sums(standard_word(frac(p, q)))
        assert mod2_type(frac(p, q)).value == (abs(e_b) % 2, abs(e_a) % 2)

    def test_member_types_distinct(self):
        for pair in BasicPair:
            assert len(pair.member_types) == 2


class TestRewrite:
    def test_second_member_collapses(self):
        assert rewrite_in_pair("ab", BasicPair.A_AB) == "b"

    def test_identity_pair(self):
        assert rewrite_in_pair("aab", BasicPair.AB) == "aab"

    def test_substitution_example(self):
        assert rewrite_in_pair("aab", BasicPair.A_AB) == "ab"

    @given(reduced_fractions)
    def test_expansion_reproduces_conjugate(self, pq):
        # re-expanding the rewritten word gives back the same primitive class
        p, q = pq
        w = standard_word(frac(p, q))
        for pair, (xa, xb) in [
            (BasicPair.A_AB, ("a", "ab")),
            (BasicPair.B_AB, ("b", "ab")),
        ]:
            rewritten = rewrite_in_pair(w, pair)
            table = {
                "a": xa,
                "b": xb,
                "A": invert_word(xa),
                "B": invert_word(xb),
            }
            expanded = free_reduce("".join(table[ch] for ch in rewritten))
            assert fraction_of_word(expanded) == frac(p, q)


class TestPalindromes:
    def test_examples(self):
        assert palindromic_representative(frac(1, 2), BasicPair.AB) == "aba"
        assert palindromic_representative(frac(1, 1), BasicPair.A_AB) == "b"

    def test_not_admissible(self):
        with pytest.raises(NotAdmissible):
            palindromic_representative(frac(1, 1), BasicPair.AB)

    def test_odd_length(self):
        for p, q in [(1, 2), (2, 3), (3, 4), (5, 7), (3, 8)]:
            f = frac(p, q)
            for pair in BasicPair:
                if mod2_type(f) in pair.member_types:
                    w = palindromic_representative(f, pair)
                    assert len(w) % 2 == 1
                    assert is_palindrome(w)

    def test_uniqueness_small(self):
        # exactly one palindromic cyclic shift, checked exhaustively
        for n in range(2, 13):
            for p in range(1, n):
                if math.gcd(p, n - p) != 1:
                    continue
                f = frac(p, n - p)
                for pair in BasicPair:
                    if mod2_type(f) not in pair.member_types:
                        continue
                    w = rewrite_in_pair(standard_word(f), pair)
                    count = sum(1 for s in cyclic_shifts(w) if is_palindrome(s))
                    assert count == 1, (f, pair)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


class TestEnumerate:
    def test_depth_one(self):
        got = dict(enumerate_primitives(1))
        assert got == {frac(0, 1): "a", frac(1, 0): "b"}

    def test_depth_two_adds_diagonals(self):
        got = dict(enumerate_primitives(2))
        assert got[frac(1, 1)] == "ab"
        assert got[frac(-1, 1)] == "Ba"
        assert len(got) == 4

    def test_depth_three_positive_entries(self):
        got = dict(enumerate_primitives(3))
        assert got[frac(1, 2)] == "aab"
        assert got[frac(2, 1)] == "abb"

    def test_count_of_positive_entries(self):
        n = 20
        got = [f for f, _w in enumerate_primitives(n) if f.p > 0 and f.q > 0]
        expected = sum(
            1
            for total in range(2, n + 1)
            for p in range(1, total)
            if math.gcd(p, total - p) == 1
        )
        assert len(got) == expected

    def test_deterministic_and_sorted(self):
        one = enumerate_primitives(9)
        two = enumerate_primitives(9)
        assert one == two
        keys = [f.key() for f, _w in one]
        assert keys == sorted(keys)

    def test_all_words_standard(self):
        for f, w in enumerate_primitives(8):
            assert w == standard_word(f)
