"""Word-algebra suite: product examples, Hopf axioms, Lyndon words.

The Hopf checks run with exact rational coefficients over explicit small
corpora; random words come from seeded generators.
"""

import random
from fractions import Fraction
from itertools import product as iproduct

import pytest

from feynsec.errors import DomainError
from feynsec.words import (Alphabet, LinComb, TensorComb, absorbing_zero_alphabet,
                           antipode_quasi, antipode_shuffle, convolution_check,
                           coproduct, counit, is_lyndon, lyndon_words,
                           min_pairing_alphabet, quasi_shuffle, quasi_shuffle_lincomb,
                           shuffle, shuffle_lincomb, shuffle_recursive)


def lc(*words):
    out = LinComb.zero()
    for w in words:
        out = out + LinComb.of(tuple(w))
    return out


# -- shuffle ----------------------------------------------------------------

def test_shuffle_example_ab_c():
    assert shuffle("ab", "c") == lc("abc", "acb", "cab")


def test_shuffle_unit():
    assert shuffle("", "w") == lc("w")
    assert shuffle("w", "") == lc("w")


def test_shuffle_multiplicity():
    assert shuffle("a", "a") == LinComb.of(("a", "a"), 2)


def test_shuffle_total_mass():
    from math import comb
    rng = random.Random(7)
    for _ in range(20):
        u = tuple(rng.choice("abc") for _ in range(rng.randint(0, 4)))
        v = tuple(rng.choice("abc") for _ in range(rng.randint(0, 4)))
        assert shuffle(u, v).total_mass() == comb(len(u) + len(v), len(u))


def test_shuffle_recursive_matches_combinatorial():
    assert shuffle_recursive("ab", "c") == shuffle("ab", "c")
    assert shuffle_recursive("", "") == lc("")
    assert shuffle_recursive("a", "bc") == lc("abc", "bac", "bca")
    rng = random.Random(11)
    for _ in range(40):
        u = tuple(rng.choice("abc") for _ in range(rng.randint(0, 5)))
        v = tuple(rng.choice("abc") for _ in range(rng.randint(0, 5)))
        assert shuffle_recursive(u, v) == shuffle(u, v)


def test_shuffle_commutative_associative():
    rng = random.Random(13)
    for _ in range(25):
        u, v, w = (tuple(rng.choice("ab") for _ in range(rng.randint(0, 3))) for _ in range(3))
        assert shuffle(u, v) == shuffle(v, u)
        left = shuffle_lincomb(shuffle(u, v), lc(w))
        right = shuffle_lincomb(lc(u), shuffle(v, w))
        assert left == right


# -- quasi-shuffle -----------------------------------------------------------

MIN_ABC = min_pairing_alphabet("abc")


def test_quasi_shuffle_base_example():
    out = quasi_shuffle("a", "b", MIN_ABC)
    assert out == lc("ab", "ba") + LinComb.of(("a",))  # (a,b) = min = a


def test_quasi_shuffle_unit():
    assert quasi_shuffle("", "ww", MIN_ABC) == lc("ww")


def test_quasi_shuffle_depth_example():
    # (a)*(bc) = abc + bac + bca + (a,b)c + b(a,c)
    out = quasi_shuffle("a", "bc", MIN_ABC)
    expected = lc("abc", "bac", "bca") + LinComb.of(("a", "c")) + LinComb.of(("b", "a"))
    assert out == expected


def test_quasi_shuffle_missing_pairing():
    with pytest.raises(DomainError):
        quasi_shuffle("a", "b", Alphabet())


def test_quasi_shuffle_reduces_to_shuffle_with_absorbing_zero():
    alpha = absorbing_zero_alphabet("abc")
    rng = random.Random(17)
    for _ in range(30):
        u = tuple(rng.choice("abc") for _ in range(rng.randint(0, 4)))
        v = tuple(rng.choice("abc") for _ in range(rng.randint(0, 4)))
        assert quasi_shuffle(u, v, alpha) == shuffle(u, v)


def test_quasi_shuffle_commutative_associative():
    rng = random.Random(19)
    for _ in range(25):
        u, v, w = (tuple(rng.choice("abc") for _ in range(rng.randint(0, 3))) for _ in range(3))
        assert quasi_shuffle(u, v, MIN_ABC) == quasi_shuffle(v, u, MIN_ABC)
        left = quasi_shuffle_lincomb(quasi_shuffle(u, v, MIN_ABC), lc(w), MIN_ABC)
        right = quasi_shuffle_lincomb(lc(u), quasi_shuffle(v, w, MIN_ABC), MIN_ABC)
        assert left == right


def test_pairing_commutative_associative_on_shipped_alphabets():
    from feynsec.polylog import zsum_alphabet
    zs = zsum_alphabet()
    letters = [(1, Fraction(1, 2)), (2, Fraction(3)), (1, Fraction(-1))]
    for alpha, pool in ((MIN_ABC, list("abc")), (zs, letters)):
        for a, b in iproduct(pool, pool):
            assert alpha.pair(a, b) == alpha.pair(b, a)
        for a, b, c in iproduct(pool, pool, pool):
            assert alpha.pair(alpha.pair(a, b), c) == alpha.pair(a, alpha.pair(b, c))


# -- coalgebra ---------------------------------------------------------------

def test_coproduct_examples():
    assert coproduct("") == TensorComb({((), ()): 1})
    assert coproduct("a") == TensorComb({((), ("a",)): 1, (("a",), ()): 1})
    assert coproduct("ab") == TensorComb({
        ((), ("a", "b")): 1,
        (("b",), ("a",)): 1,
        (("a", "b"), ()): 1,
    })


def test_counit():
    assert counit("") == 1
    assert counit("ab") == 0
    assert counit(LinComb.of((), 3) + LinComb.of(("a", "b"), 2)) == 3


def test_coassociativity():
    # (Delta x id) o Delta == (id x Delta) o Delta on words of length <= 4
    for length in range(5):
        for word in iproduct("ab", repeat=length):
            left = {}
            right = {}
            for (suf, pre), c in coproduct(word).terms.items():
                for (s2, p2), c2 in coproduct(suf).terms.items():
                    key = (s2, p2, pre)
                    left[key] = left.get(key, 0) + c * c2
                for (s2, p2), c2 in coproduct(pre).terms.items():
                    key = (suf, s2, p2)
                    right[key] = right.get(key, 0) + c * c2
            left = {k: v for k, v in left.items() if v}
            right = {k: v for k, v in right.items() if v}
            assert left == right


def _tensor_product_compat(word_pairs, product):
    """Delta(u . v) == Delta(u) . Delta(v) with componentwise products."""
    for u, v in word_pairs:
        lhs = {}
        for w, c in product(lc(u), lc(v)).terms.items():
            for key, c2 in coproduct(w).terms.items():
                lhs[key] = lhs.get(key, Fraction(0)) + c * c2
        rhs = {}
        for (su, pu), cu in coproduct(u).terms.items():
            for (sv, pv), cv in coproduct(v).terms.items():
                first = product(lc(su), lc(sv))
                second = product(lc(pu), lc(pv))
                for w1, c1 in first.terms.items():
                    for w2, c2 in second.terms.items():
                        key = (w1, w2)
                        rhs[key] = rhs.get(key, Fraction(0)) + cu * cv * c1 * c2
        lhs = {k: v for k, v in lhs.items() if v}
        rhs = {k: v for k, v in rhs.items() if v}
        assert lhs == rhs, (u, v)


def _short_words(max_len, letters="ab"):
    out = []
    for length in range(max_len + 1):
        out.extend(iproduct(letters, repeat=length))
    return out


def test_bialgebra_compatibility_shuffle():
    words = _short_words(2, "ab")
    pairs = [(u, v) for u in words for v in words if len(u) + len(v) <= 3]
    _tensor_product_compat(pairs, shuffle_lincomb)


def test_bialgebra_compatibility_quasi_shuffle():
    words = _short_words(2, "ab")
    pairs = [(u, v) for u in words for v in words if len(u) + len(v) <= 3]
    _tensor_product_compat(pairs, lambda x, y: quasi_shuffle_lincomb(x, y, MIN_ABC))


# -- antipodes ---------------------------------------------------------------

def test_antipode_shuffle_examples():
    assert antipode_shuffle(LinComb.of(())) == lc("")
    assert antipode_shuffle(LinComb.of(("a", "b"))) == LinComb.of(("b", "a"))
    assert antipode_shuffle(LinComb.of(("a", "b", "c"))) == LinComb.of(("c", "b", "a"), -1)


def test_antipode_quasi_examples():
    assert antipode_quasi(("a",), MIN_ABC) == LinComb.of(("a",), -1)
    # S(ab) = -ab - S(b)*(a) = ba + (b,a) with min pairing -> ba + a
    out = antipode_quasi(("a", "b"), MIN_ABC)
    assert out == LinComb.of(("b", "a")) + LinComb.of(("a",))


def test_antipode_quasi_degenerate_matches_shuffle():
    alpha = absorbing_zero_alphabet("abc")
    for word in _short_words(4, "abc"):
        if not word:
            continue
        assert antipode_quasi(word, alpha) == antipode_shuffle(LinComb.of(word))


def test_antipode_convolution_identity():
    # m o (S x id) o Delta = counit * unit, for both algebras
    for word in _short_words(4, "abc"):
        expected = lc("") if not word else LinComb.zero()
        got_sh = convolution_check(word, antipode_shuffle, shuffle_lincomb)
        assert got_sh == expected, ("shuffle", word)
        got_qs = convolution_check(
            word, lambda x: sum((antipode_quasi(w, MIN_ABC).scale(c) for w, c in x.terms.items()),
                                LinComb.zero()),
            lambda x, y: quasi_shuffle_lincomb(x, y, MIN_ABC))
        assert got_qs == expected, ("quasi", word)


# -- Lyndon words ------------------------------------------------------------

def brute_lyndon(letters, max_len):
    """Independent oracle: test every word against every proper suffix."""
    out = []
    for length in range(1, max_len + 1):
        for word in iproduct(letters, repeat=length):
            if all(word < word[j:] for j in range(1, len(word))):
                out.append(word)
    return sorted(out, key=lambda w: (len(w), w))


def test_lyndon_examples():
    assert lyndon_words("ab", 2) == [("a",), ("b",), ("a", "b")]
    assert lyndon_words("a", 3) == [("a",)]
    three = [w for w in lyndon_words("ab", 3) if len(w) == 3]
    assert three == [("a", "a", "b"), ("a", "b", "b")]


def test_lyndon_against_bruteforce():
    assert lyndon_words("ab", 4) == brute_lyndon("ab", 4)
    assert lyndon_words("abc", 3) == brute_lyndon("abc", 3)


def test_is_lyndon_suffix_condition():
    assert is_lyndon(("a", "b"))
    assert not is_lyndon(("b", "a"))
    assert not is_lyndon(("a", "a"))
    assert not is_lyndon(())


def _rank_of_vectors(rows):
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [v * inv for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def test_lyndon_shuffles_span_each_weight():
    """Shuffle products of Lyndon words of total length n span all words of
    length n (exact rational rank check), for n <= 4 over two letters."""
    letters = "ab"
    lyndon = lyndon_words(letters, 4)
    for n in range(1, 5):
        basis_words = list(iproduct(letters, repeat=n))
        index = {w: i for i, w in enumerate(basis_words)}
        rows = []

        def expand(product_so_far, remaining):
            if remaining == 0:
                rows.append(product_so_far)
                return
            for w in lyndon:
                if len(w) <= remaining:
                    expand(shuffle_lincomb(product_so_far, lc(w)), remaining - len(w))

        expand(lc(()), n)
        matrix = []
        for comb in rows:
            vec = [Fraction(0)] * len(basis_words)
            for w, c in comb.terms.items():
                vec[index[w]] = c
            matrix.append(vec)
        assert _rank_of_vectors(matrix) == len(basis_words), f"length {n} not spanned"
