"""Exact combinatorics of primitive pairs in a rank-2 free group.

Fractions p/q in lowest terms (plus 1/0 for infinity) enumerate the primitive
conjugacy classes; this module provides Farey arithmetic (neighbour test,
mediant), the standard word of a fraction, recovery of the fraction from an
arbitrary primitive word, mod-2 parity types, rewriting in a basic generator
pair, and the unique palindromic cyclic representative.

Words are plain strings over the letters ``a``, ``b`` with capitals denoting
inverses (``A`` = a⁻¹, ``B`` = b⁻¹).  Rewritten words reuse the same symbols
to denote the pair's first and second member.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator

from .errors import (
    CapExceeded,
    NoPalindromeFound,
    NotAdmissible,
    NotNeighbours,
    NotPrimitive,
)

#: Words longer than this are refused rather than built.
WORD_LENGTH_CAP = 10**6


# ---------------------------------------------------------------------------
# fractions
# ---------------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class Fraction:
    """A reduced fraction p/q with q ≥ 0; (1, 0) represents infinity.

    Normalization happens on construction: the sign lives in ``p``, the pair
    is reduced to lowest terms, and both infinities collapse to ``1/0``.
    Integers are arbitrary precision, so levels can grow without overflow.
    """

    p: int
    q: int

    def __post_init__(self) -> None:
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a fraction")
        if q < 0:
            p, q = -p, -q
        if q == 0:
            p = 1  # both infinities name the same region
        g = math.gcd(abs(p), q)
        if g > 1:
            p //= g
            q //= g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def level(self) -> int:
        """Word length |p| + q of the standard word."""
        return abs(self.p) + self.q

    @property
    def is_infinity(self) -> bool:
        return self.q == 0

    def __lt__(self, other: "Fraction") -> bool:
        # Cross-multiplication is sign-safe because q ≥ 0 on both sides,
        # and puts 1/0 above every finite fraction.
        return self.p * other.q < other.p * self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def key(self) -> tuple[int, int]:
        """Deterministic sort key: level first, then numeric order."""
        return (self.level, self.p)


def is_neighbour(f1: Fraction, f2: Fraction) -> bool:
    """Farey neighbour test |p·s − q·r| = 1 for p/q and r/s."""
    return abs(f1.p * f2.q - f1.q * f2.p) == 1


def farey_sum(f1: Fraction, f2: Fraction) -> Fraction:
    """Mediant (p+r)/(q+s) of two Farey neighbours.

    The two infinities are a single fraction ``1/0``, but as a mediant
    operand the sign of infinity matters: ``1/0`` combines with positive
    fractions and with ``0/1`` as +∞, and with negative fractions as −∞
    (i.e. as the pair (−1, 0)), matching the circle order of regions.
    """
    if not is_neighbour(f1, f2):
        raise NotNeighbours(f"{f1} and {f2} are not Farey neighbours")
    p1, q1 = f1.p, f1.q
    p2, q2 = f2.p, f2.q
    if q1 == 0 and p2 < 0:
        p1 = -1
    if q2 == 0 and p1 < 0:
        p2 = -1
    return Fraction(p1 + p2, q1 + q2)


class Mod2Type(enum.Enum):
    """Parity class of a fraction: (p mod 2, q mod 2); (0,0) cannot occur."""

    T_A = (0, 1)
    T_B = (1, 0)
    T_AB = (1, 1)

    def __str__(self) -> str:
        return self.name


def mod2_type(f: Fraction) -> Mod2Type:
    """Parity type of ``f``; the three values partition all fractions."""
    return Mod2Type((f.p % 2, f.q % 2))


class BasicPair(enum.Enum):
    """The three basic generator pairs, named by their member words."""

    AB = ("a", "b")
    A_AB = ("a", "ab")
    B_AB = ("b", "ab")

    @property
    def member_types(self) -> frozenset[Mod2Type]:
        return {
            BasicPair.AB: frozenset({Mod2Type.T_A, Mod2Type.T_B}),
            BasicPair.A_AB: frozenset({Mod2Type.T_A, Mod2Type.T_AB}),
            BasicPair.B_AB: frozenset({Mod2Type.T_B, Mod2Type.T_AB}),
        }[self]

    @property
    def cli_name(self) -> str:
        return {"AB": "ab", "A_AB": "a-ab", "B_AB": "b-ab"}[self.name]

    @classmethod
    def from_cli_name(cls, name: str) -> "BasicPair":
        for pair in cls:
            if pair.cli_name == name:
                return pair
        raise ValueError(f"unknown pair {name!r}")

    def __str__(self) -> str:
        return "(%s,%s)" % self.value


# ---------------------------------------------------------------------------
# word helpers
# ---------------------------------------------------------------------------

_LETTERS = frozenset("abAB")


def invert_word(w: str) -> str:
    """Inverse of a word: reverse it and invert each letter."""
    return w[::-1].swapcase()


def free_reduce(w: str) -> str:
    """Freely reduce: cancel adjacent inverse letters until none remain."""
    out: list[str] = []
    for ch in w:
        if ch not in _LETTERS:
            raise ValueError(f"letter {ch!r} is not one of a, b, A, B")
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def cyclic_reduce(w: str) -> str:
    """Cyclically reduce a freely reduced word (trim inverse wraparounds)."""
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1].swapcase():
        i += 1
        j -= 1
    return w[i:j]


def is_cyclically_reduced(w: str) -> bool:
    return w == free_reduce(w) and w == cyclic_reduce(w)


def exponent_sums(w: str) -> tuple[int, int]:
    """(e_a, e_b): net exponent of a and of b in ``w``."""
    return (w.count("a") - w.count("A"), w.count("b") - w.count("B"))


def cyclic_shifts(w: str) -> Iterator[str]:
    for i in range(len(w)):
        yield w[i:] + w[:i]


def is_palindrome(w: str) -> bool:
    return w == w[::-1]


# ---------------------------------------------------------------------------
# standard words
# ---------------------------------------------------------------------------


def _positive_standard_word(p: int, q: int) -> str:
    """Standard word for p/q with p, q ≥ 0: q letters ``a``, p letters ``b``,
    assembled in mediant order (the juxtaposition recursion in closed form)."""
    n = p + q
    prev = 0
    out: list[str] = []
    for i in range(1, n + 1):
        cur = (i * p) // n
        out.append("a" if cur == prev else "b")
        prev = cur
    return "".join(out)


def standard_word(f: Fraction, cap: int = WORD_LENGTH_CAP) -> str:
    """The standard word of a fraction.

    Built by the mediant recursion seeded with 0/1 ↦ a, 1/0 ↦ b on the
    positive side and −1/0 ↦ b⁻¹, 0/1 ↦ a on the negative side, where the
    mediant's word is the juxtaposition smaller·larger.  The word for a
    negative fraction is the reversed positive word with b inverted.
    """
    if f.level > cap:
        raise CapExceeded(f"standard word of {f} has length {f.level} > cap {cap}")
    w = _positive_standard_word(abs(f.p), f.q)
    if f.p < 0:
        w = w[::-1].replace("b", "B")
    return w


def fraction_of_word(w: str) -> Fraction:
    """Fraction of an arbitrary word representing a primitive class.

    Reduces cyclically, reads exponent sums, normalizes orientation (so the
    net ``a``-exponent is ≥ 0), and verifies the result is a cyclic
    permutation of the standard word.  Raises NotPrimitive otherwise.
    """
    wc = cyclic_reduce(free_reduce(w))
    if not wc:
        raise NotPrimitive("trivial word")
    e_a, e_b = exponent_sums(wc)
    if math.gcd(abs(e_a), abs(e_b)) != 1:
        raise NotPrimitive(f"exponent sums ({e_a}, {e_b}) are not coprime")
    if e_a < 0 or (e_a == 0 and e_b < 0):
        wc = invert_word(wc)
        e_a, e_b = -e_a, -e_b
    f = Fraction(e_b, e_a)
    s = standard_word(f)
    if len(wc) == len(s) and wc in s + s:
        return f
    raise NotPrimitive(f"{w!r} is not conjugate to a standard word")


def enumerate_primitives(n: int) -> list[tuple[Fraction, str]]:
    """All (fraction, standard word) pairs with |p| + q ≤ n, in
    (level, numeric) order.  Includes the negative wedge; infinity is 1/0."""
    if n < 1:
        return []
    fractions = [Fraction(1, 0)]
    for q in range(1, n + 1):
        for p in range(-(n - q), n - q + 1):
            if (p != 0 or q == 1) and math.gcd(abs(p), q) == 1:
                fractions.append(Fraction(p, q))
    fractions.sort(key=Fraction.key)
    return [(f, standard_word(f)) for f in fractions]


# ---------------------------------------------------------------------------
# rewriting and palindromes
# ---------------------------------------------------------------------------

_REWRITE: dict[BasicPair, dict[str, str]] = {
    # images of the old generators in the pair alphabet (a = first member,
    # b = second member): for (a, ab): a = x, b = x⁻¹y;
    # for (b, ab): b = x, a = yx⁻¹.
    BasicPair.AB: {"a": "a", "b": "b"},
    BasicPair.A_AB: {"a": "a", "b": "Ab"},
    BasicPair.B_AB: {"a": "bA", "b": "a"},
}


def rewrite_in_pair(w: str, pair: BasicPair) -> str:
    """Rewrite a word over (a, b) as a freely reduced word in the pair
    alphabet (symbols a/b reused for the pair's first/second member)."""
    images = _REWRITE[pair]
    parts: list[str] = []
    for ch in w:
        img = images[ch.lower()]
        parts.append(img if ch.islower() else invert_word(img))
    return free_reduce("".join(parts))


def palindromic_representative(f: Fraction, pair: BasicPair) -> str:
    """The unique palindromic cyclic shift of ``f``'s word rewritten in
    ``pair``.  The result has odd length in the pair alphabet.

    Raises NotAdmissible when ``f``'s parity type is not a member type of
    the pair, and NoPalindromeFound on an internal-invariant breach (a
    rewritten primitive without exactly one palindromic shift).
    """
    if mod2_type(f) not in pair.member_types:
        raise NotAdmissible(f"{f} has type {mod2_type(f)}, not a member of {pair}")
    v = cyclic_reduce(rewrite_in_pair(standard_word(f), pair))
    pals = [s for s in cyclic_shifts(v) if is_palindrome(s)]
    if len(pals) != 1:
        raise NoPalindromeFound(
            f"{f} rewritten in {pair} has {len(pals)} palindromic shifts"
        )
    return pals[0]
