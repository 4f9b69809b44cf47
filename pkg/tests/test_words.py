from hypothesis import given, strategies as st

from branchtor.words import (
    CyclicWord,
    conjugate_equal,
    cyclic_reduce,
    format_word,
    inverse,
    least_rotation,
    multiply,
    parse,
    power,
    primitive_root,
    reduce,
)

letters = st.sampled_from([1, -1, 2, -2, 3, -3])
raw_words = st.lists(letters, max_size=14).map(tuple)
words = raw_words.map(reduce)


def test_parse_and_format():
    assert parse("abAB") == (1, 2, -1, -2)
    assert parse("aA") == ()
    assert parse("1") == ()
    assert format_word(()) == "1"
    assert format_word(parse("baaB")) == "baaB"


def test_parse_rejects_letters_above_rank():
    import pytest

    with pytest.raises(ValueError):
        parse("c", rank=2)


@given(raw_words)
def test_reduce_is_idempotent_and_reduced(w):
    r = reduce(w)
    assert reduce(r) == r
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))


@given(words, words, words)
def test_multiply_is_associative_with_inverses(u, v, w):
    assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))
    assert multiply(u, inverse(u)) == ()


@given(words, st.integers(-4, 4))
def test_power_adds_exponents(w, n):
    assert multiply(power(w, n), power(w, 2)) == power(w, n + 2)


@given(words, words)
def test_conjugates_share_a_cyclic_word(w, c):
    if not w:
        return
    a = CyclicWord.of(w)
    b = CyclicWord.of(multiply(c, w, inverse(c)))
    assert a == b and conjugate_equal(a, b) and hash(a) == hash(b)


@given(words)
def test_cyclic_reduce_reassembles(w):
    core, c = cyclic_reduce(w)
    assert multiply(c, core.word, inverse(c)) == w


@given(words.filter(bool))
def test_canonical_is_least_rotation(w):
    core = CyclicWord.of(w)
    assert core.canonical == min(core.rotations(), key=lambda r: [(abs(x), x < 0) for x in r])
    assert least_rotation(core.canonical) == core.canonical


@given(words.filter(bool), st.integers(1, 4))
def test_primitive_root_recovers_the_exponent(w, n):
    root, k = primitive_root(CyclicWord.of(w))
    assert primitive_root(root.power(n)) == (root, n)
    assert root.power(k) == CyclicWord.of(w)


def test_letter_order_is_a_A_b_B():
    assert CyclicWord(parse("bA")).canonical == parse("Ab")
    assert CyclicWord(parse("ba")).canonical == parse("ab")
