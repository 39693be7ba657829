import pytest
from hypothesis import given, strategies as st

from fgcrypt import (
    Alphabet,
    Letter,
    Word,
    compare_words,
    concat,
    format_word,
    free_reduce,
    generators,
    invert,
    parse_word,
)
from fgcrypt.errors import (
    AlphabetMismatchError,
    InvalidLetterError,
    WordSyntaxError,
)

AB = Alphabet(("a", "b"))
ABCD = Alphabet(("a", "b", "c", "d"))


def letters_strategy(q=2, max_len=16):
    return st.lists(
        st.integers(min_value=-q, max_value=q).filter(lambda x: x != 0),
        max_size=max_len)


def words_strategy(alphabet=AB, max_len=12):
    return letters_strategy(alphabet.rank, max_len).map(
        lambda ls: Word(alphabet, ls))


class TestAlphabet:
    def test_basic(self):
        assert ABCD.rank == 4
        assert ABCD.index("c") == 3
        assert str(ABCD.generator(2)) == "b"

    @pytest.mark.parametrize("names", [
        (), ("a", "a"), ("a", ""), ("a", "x y"), ("a", "b^"), ("a", "b|c"),
        ("a", "12"),
    ])
    def test_invalid_names(self, names):
        with pytest.raises(ValueError):
            Alphabet(names)

    def test_unknown_generator(self):
        with pytest.raises(InvalidLetterError):
            ABCD.index("e")


class TestFreeReduce:
    def test_full_cancellation(self):
        w = free_reduce(AB, [Letter(1, 1), Letter(1, -1)])
        assert w.is_identity()
        assert format_word(w) == "1"

    def test_composite_unit(self):
        # d c^-1 d c^-1 . (c d^-2 a^-1 c^-1) . (c d^-2 a^-1 c^-1)
        raw = ([4, -3, 4, -3] + [3, -4, -4, -1, -3] * 2)
        w = free_reduce(ABCD, raw)
        assert format_word(w) == "d c^-1 d^-1 a^-1 d^-2 a^-1 c^-1"

    def test_already_reduced(self):
        w = free_reduce(AB, [2, 1, 1, -2])
        assert w.signed == (2, 1, 1, -2)

    def test_out_of_range(self):
        with pytest.raises(InvalidLetterError):
            free_reduce(AB, [3])

    @given(letters_strategy())
    def test_idempotent(self, raw):
        once = free_reduce(AB, raw)
        assert free_reduce(AB, once.signed) == once

    @given(letters_strategy())
    def test_parity_and_shrink(self, raw):
        w = free_reduce(AB, raw)
        assert len(w) <= len(raw)
        assert (len(w) - len(raw)) % 2 == 0


class TestArithmetic:
    def test_concat_cancel(self):
        assert str(concat(AB.parse("a b"), AB.parse("b^-1 a"))) == "a^2"

    def test_concat_inverse_law(self):
        w = ABCD.parse("b a^2 c d^-1")
        assert concat(w, invert(w)).is_identity()

    def test_concat_no_cancel(self):
        u = ABCD.parse("b a^2")
        v = ABCD.parse("c d")
        assert str(concat(u, v)) == "b a^2 c d"

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatchError):
            concat(AB.parse("a"), ABCD.parse("a"))

    def test_invert(self):
        assert str(invert(AB.parse("b a^2"))) == "a^-2 b^-1"
        assert invert(AB.parse("1")).is_identity()
        assert str(invert(ABCD.parse("d^2 c^-2"))) == "c^2 d^-2"

    def test_pow(self):
        a, b = generators(AB)
        assert str((a * b) ** 3) == "a b a b a b"
        assert (a * b) ** 0 == AB.identity()
        assert (a * b) ** -1 == invert(a * b)

    @given(words_strategy(), words_strategy())
    def test_concat_parity(self, u, v):
        assert (len(concat(u, v)) - len(u) - len(v)) % 2 == 0

    @given(words_strategy(), words_strategy(), words_strategy())
    def test_associative(self, u, v, w):
        assert concat(concat(u, v), w) == concat(u, concat(v, w))

    @given(words_strategy())
    def test_involution(self, w):
        assert invert(invert(w)) == w
        assert len(invert(w)) == len(w)


class TestOrder:
    def test_shorter_first(self):
        assert compare_words(AB.parse("a"), AB.parse("a b")) < 0

    def test_sign_order(self):
        assert compare_words(AB.parse("a"), AB.parse("a^-1")) < 0
        assert AB.parse("a^-1") < AB.parse("b")

    def test_equal(self):
        assert compare_words(AB.parse("a b"), AB.parse("a b")) == 0

    @given(words_strategy(), words_strategy(), words_strategy())
    def test_total_order(self, u, v, w):
        # antisymmetric, transitive, total
        cu, cv = compare_words(u, v), compare_words(v, u)
        assert cu == -cv
        assert (cu == 0) == (u == v)
        if u <= v and v <= w:
            assert u <= w


class TestText:
    def test_demo_unit_round_trip(self):
        text = "d c^-1 d^-1 a^-1 d^-2 a^-1 c^-1"
        assert format_word(parse_word(text, ABCD)) == text

    def test_identity(self):
        assert format_word(parse_word("1", ABCD)) == "1"

    def test_power_unit(self):
        w = parse_word("a^3", AB)
        assert w.signed == (1, 1, 1)
        assert format_word(w) == "a^3"

    def test_unknown_name_position(self):
        with pytest.raises(WordSyntaxError) as err:
            parse_word("a q^2", AB)
        assert err.value.position == 2

    @pytest.mark.parametrize("bad", ["", "a^0", "a^x", "1 a", "a 1"])
    def test_syntax_errors(self, bad):
        with pytest.raises(WordSyntaxError):
            parse_word(bad, AB)

    def test_unreduced_input_is_reduced(self):
        assert parse_word("a a^-1 b", AB) == AB.parse("b")

    @given(words_strategy(alphabet=ABCD))
    def test_round_trip(self, w):
        assert parse_word(format_word(w), ABCD) == w
