import itertools
import random

import pytest

from fgcrypt import (
    Alphabet,
    ElementaryMove,
    WhiteheadMove,
    canonical_minimal_basis,
    concat,
    format_automorphism,
    from_factors,
    from_nielsen_sequence,
    from_whitehead_sequence,
    generators,
    identity_automorphism,
    parse_automorphism,
    parse_moves,
    random_whitehead_automorphism,
)
from fgcrypt.errors import IllegalMoveError, NotRegularError, PreconditionError
from fgcrypt.nielsen import GeneratingTuple

from conftest import random_word

AB = Alphabet(("a", "b"))
ABC = Alphabet(("a", "b", "c"))
ABCD = Alphabet(("a", "b", "c", "d"))
X123 = Alphabet(("x1", "x2", "x3"))

DEMO_SEQ = "T1 3\nT2 1 4\nT2 4 3\nT2 2 3\nT1 3\nT2 1 4\nT2 3 1"
PUBKEY_SEQ = "T2 1 2\nT2 1 2\nT2 3 2\nT1 3\nT2 2 3"


class ScriptedPrg:
    """Deterministic stand-in yielding a fixed list of draws."""

    def __init__(self, values):
        self.values = list(values)

    def next(self):
        return self.values.pop(0)


class TestFromNielsen:
    def test_demo_images(self):
        f = from_nielsen_sequence(parse_moves(DEMO_SEQ), ABCD)
        assert [str(w) for w in f.images] == [
            "a d^2 c^-1", "b c^-1", "c a d^2 c^-1", "d c^-1"]

    def test_pubkey_demo_images(self):
        f = from_nielsen_sequence(parse_moves(PUBKEY_SEQ), X123)
        assert [str(w) for w in f.images] == ["x1 x2^2", "x3^-1", "x2^-1 x3^-1"]

    def test_empty_is_identity(self):
        f = from_nielsen_sequence([], ABCD)
        assert f.is_identity()

    def test_t3_rejected(self):
        with pytest.raises(NotRegularError):
            from_nielsen_sequence([ElementaryMove("T3", 1)], AB)


class TestFromWhitehead:
    def test_inversion(self):
        f = from_whitehead_sequence([WhiteheadMove("INV", 1)], AB)
        assert [str(w) for w in f.images] == ["a^-1", "b"]

    def test_multiplier(self):
        move = WhiteheadMove("W", 1, L=frozenset({2}), M=frozenset({1}))
        f = from_whitehead_sequence([move], AB)
        assert [str(w) for w in f.images] == ["a", "a b"]

    def test_inversion_involution(self):
        f = from_whitehead_sequence([WhiteheadMove("INV", 1)] * 2, AB)
        assert f.is_identity()

    def test_invariants(self):
        with pytest.raises(IllegalMoveError):
            WhiteheadMove("W", 1, M=frozenset({2}))  # a not in M
        with pytest.raises(IllegalMoveError):
            WhiteheadMove("W", 1, L=frozenset({1}), M=frozenset({1}))
        with pytest.raises(IllegalMoveError):
            WhiteheadMove("W", 1, L=frozenset({2}), R=frozenset({2}),
                          M=frozenset({1}))
        with pytest.raises(IllegalMoveError):
            WhiteheadMove("W", 1, M=frozenset({1}))  # identity map


class TestApply:
    def test_demo_unit(self):
        f = from_nielsen_sequence(parse_moves(DEMO_SEQ), ABCD)
        assert str(f.apply(ABCD.parse("d^2 c^-2"))) == \
            "d c^-1 d^-1 a^-1 d^-2 a^-1 c^-1"

    def test_identity_automorphism(self):
        w = ABCD.parse("b a^2 c")
        assert identity_automorphism(ABCD).apply(w) == w

    def test_fourth_unit(self):
        seq = "T2 3 1\nT2 3 1\nT1 2\nT2 2 1\nT2 2 1\nT2 2 1\nT2 2 4\nT2 4 2\nT2 1 3"
        f = from_nielsen_sequence(parse_moves(seq), ABCD)
        assert str(f.apply(ABCD.parse("c^2 b a"))) == \
            "c a^2 c a^2 b^-1 a^3 d a c a^2"


class TestComposePower:
    def test_power7_first_image(self):
        f = from_nielsen_sequence(parse_moves(PUBKEY_SEQ), X123)
        x1, x2, x3 = generators(X123)
        expected = (x1 * x2 ** 2 * x3 ** -1 * x2 * (x2 * x3) ** 2
                    * (x3 * x2 * x3 ** 2 * x2) ** 2 * x3 * x2)
        assert f.power(7).images[0] == expected

    def test_power5_second_image(self):
        f = from_nielsen_sequence(parse_moves(PUBKEY_SEQ), X123)
        x1, x2, x3 = generators(X123)
        assert f.power(5).images[1] == \
            x2 ** -1 * (x3 ** -1 * x2 ** -1 * x3 ** -1) ** 2 * x3 ** -1

    def test_power_one(self):
        f = from_nielsen_sequence(parse_moves(PUBKEY_SEQ), X123)
        assert f.power(1).images == f.images

    def test_power_addition(self):
        f = from_nielsen_sequence(parse_moves(PUBKEY_SEQ), X123)
        for m, n in itertools.product(range(5), repeat=2):
            assert f.power(m + n).images == f.power(m).compose(f.power(n)).images

    def test_compose_order(self):
        # (f o g)(w) = f(g(w))
        f = from_nielsen_sequence([ElementaryMove("T2", 1, 2)], AB)
        g = from_nielsen_sequence([ElementaryMove("T1", 1)], AB)
        w = AB.parse("a")
        assert f.compose(g).apply(w) == f.apply(g.apply(w))


class TestInverse:
    def test_identity(self):
        assert identity_automorphism(AB).inverse().is_identity()

    def test_demo_decryption(self):
        f = from_nielsen_sequence(parse_moves(DEMO_SEQ), ABCD)
        unit = ABCD.parse("d c^-1 d^-1 a^-1 d^-2 a^-1 c^-1")
        assert str(f.inverse().apply(unit)) == "d^2 c^-2"

    def test_double_inverse(self):
        f = from_nielsen_sequence(parse_moves(DEMO_SEQ), ABCD)
        assert f.inverse().inverse().images == f.images

    def test_whitehead_conjugation_identity_exhaustive_rank3(self):
        # over all 45 non-identity multiplier moves at rank 3:
        # images of [INV a, W, INV a] match images of inverse([W])
        count = 0
        for a in (1, 2, 3):
            rest = [x for x in (1, 2, 3) if x != a]
            for assignment in itertools.product(range(4), repeat=2):
                L = frozenset(r for r, where in zip(rest, assignment) if where == 0)
                R = frozenset(r for r, where in zip(rest, assignment) if where == 1)
                M = frozenset(r for r, where in zip(rest, assignment) if where == 2)
                if not (L or R or M):
                    continue
                move = WhiteheadMove("W", a, L, R, M | {a})
                ia = WhiteheadMove("INV", a)
                lhs = from_whitehead_sequence([ia, move, ia], ABC)
                rhs = from_whitehead_sequence([move], ABC).inverse()
                assert lhs.images == rhs.images
                assert from_whitehead_sequence([move], ABC).compose(rhs).is_identity()
                count += 1
        assert count == 45

    def test_random_round_trip(self):
        rng = random.Random(8)
        for _ in range(80):
            q = rng.randint(2, 3)
            alphabet = Alphabet(tuple("abc"[:q]))
            f = random_whitehead_automorphism(
                ScriptedPrg([rng.getrandbits(32) for _ in range(4000)]),
                alphabet, length=rng.randint(1, 10))
            w = random_word(rng, alphabet, 12, min_len=0)
            assert f.inverse().apply(f.apply(w)) == w
            assert f.apply(f.inverse().apply(w)) == w

    def test_homomorphism(self):
        rng = random.Random(9)
        f = from_nielsen_sequence(parse_moves(DEMO_SEQ), ABCD)
        for _ in range(40):
            u = random_word(rng, ABCD, 8, min_len=0)
            v = random_word(rng, ABCD, 8, min_len=0)
            assert f.apply(concat(u, v)) == concat(f.apply(u), f.apply(v))

    def test_basis_preservation(self):
        rng = random.Random(10)
        gens = generators(ABC)
        for _ in range(25):
            f = random_whitehead_automorphism(
                ScriptedPrg([rng.getrandbits(32) for _ in range(4000)]), ABC)
            canon = canonical_minimal_basis(GeneratingTuple(ABC, f.images))
            assert canon.elements == gens


class TestSampler:
    def test_single_zero_bit_trace(self):
        # one factor, bit 0, z-draw 0 -> INV of the first generator
        f = random_whitehead_automorphism(ScriptedPrg([0, 0]), AB, length=1)
        assert f.factors == (WhiteheadMove("INV", 1),)

    def test_identity_avoidance_path(self):
        # bit 1, z -> a = x1, z1 = z2 = z3 = 0 forces the extra assignment
        f = random_whitehead_automorphism(
            ScriptedPrg([1, 0, 0, 0, 0, 0, 0]), AB, length=1)
        (move,) = f.factors
        assert move.kind == "W" and move.a == 1
        assert move.L == frozenset({2}) and not move.R and move.M == frozenset({1})
        assert not f.is_identity()

    def test_never_identity(self):
        rng = random.Random(12)
        for _ in range(60):
            f = random_whitehead_automorphism(
                ScriptedPrg([rng.getrandbits(32) for _ in range(4000)]), AB)
            assert not f.is_identity()

    def test_rank_one_rejected(self):
        with pytest.raises(PreconditionError):
            random_whitehead_automorphism(ScriptedPrg([0, 0]), Alphabet(("a",)))

    def test_default_length_policy(self):
        # first draw fixes the factor count at 4 + (v mod 13)
        values = [3] + [17] * 4000
        f = random_whitehead_automorphism(ScriptedPrg(values), ABC)
        assert len(f.factors) == 7


class TestText:
    def test_round_trip_mixed(self):
        f = from_factors(
            [ElementaryMove("T2", 1, 2),
             WhiteheadMove("INV", 3),
             WhiteheadMove("W", 2, L=frozenset({1}), R=frozenset({4}),
                           M=frozenset({2, 3})),
             ElementaryMove("T1", 4)],
            ABCD)
        text = format_automorphism(f)
        assert parse_automorphism(text, ABCD).images == f.images
        assert "W b ; L = a ; R = d ; M = b c" in text

    def test_parse_demo(self):
        f = parse_automorphism(DEMO_SEQ, ABCD)
        assert str(f.apply(ABCD.parse("d^2 c^-2"))) == \
            "d c^-1 d^-1 a^-1 d^-2 a^-1 c^-1"
