import random

from fgcrypt import Alphabet, GeneratingTuple, Word, concat


def random_word(rng: random.Random, alphabet: Alphabet, max_len: int,
                min_len: int = 1) -> Word:
    n = rng.randint(min_len, max_len)
    letters = []
    for _ in range(n):
        options = [x for i in range(1, alphabet.rank + 1) for x in (i, -i)
                   if not letters or x != -letters[-1]]
        letters.append(rng.choice(options))
    return Word(alphabet, letters)


def random_tuple(rng: random.Random, alphabet: Alphabet, size: int,
                 max_len: int, min_len: int = 1) -> GeneratingTuple:
    return GeneratingTuple(alphabet, tuple(
        random_word(rng, alphabet, max_len, min_len) for _ in range(size)))


def subgroup_ball(generating_words, depth: int) -> set:
    """Brute-force oracle: all products of up to `depth` generator symbols."""
    words = list(generating_words)
    if not words:
        return set()
    identity = words[0].alphabet.identity()
    symbols = [w for u in words for w in (u, u.inverse())]
    seen = {identity}
    frontier = [identity]
    for _ in range(depth):
        nxt = []
        for w in frontier:
            for s in symbols:
                z = concat(w, s)
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return seen
