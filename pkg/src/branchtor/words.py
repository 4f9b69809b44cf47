"""Words and cyclic words in a free group.

A letter is a nonzero int: ``i`` is the i-th generator and ``-i`` its
inverse.  A word is a tuple of letters; the functions here keep words
freely reduced.  Text I/O uses ``a..z`` for generators and upper case for
inverses, so ``abAB`` is the commutator of the first two generators.
"""

from __future__ import annotations

import string
from typing import Iterable, Sequence

Word = tuple[int, ...]


def letter_key(letter: int) -> tuple[int, int]:
    # a < A < b < B < ...
    return (abs(letter), 1 if letter < 0 else 0)


def word_key(word: Sequence[int]) -> tuple[tuple[int, int], ...]:
    return tuple(letter_key(x) for x in word)


def reduce(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def multiply(*words: Sequence[int]) -> Word:
    return reduce(x for w in words for x in w)


def power(word: Sequence[int], n: int) -> Word:
    if n < 0:
        return power(inverse(word), -n)
    return reduce(tuple(word) * n)


def parse(text: str, rank: int | None = None) -> Word:
    """Read a word such as ``abAB``; ``1`` or an empty string is the identity."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    letters = []
    for ch in text:
        if ch in string.ascii_lowercase:
            letters.append(ord(ch) - ord("a") + 1)
        elif ch in string.ascii_uppercase:
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise ValueError(f"bad letter {ch!r} in word {text!r}")
        if rank is not None and abs(letters[-1]) > rank:
            raise ValueError(f"letter {ch!r} exceeds rank {rank}")
    return reduce(letters)


def format_word(word: Sequence[int]) -> str:
    if not word:
        return "1"
    if any(abs(x) > 26 for x in word):
        raise ValueError("text format only covers 26 generators")
    return "".join(
        chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1) for x in word
    )


def is_reduced(word: Sequence[int]) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def is_cyclically_reduced(word: Sequence[int]) -> bool:
    return is_reduced(word) and (len(word) < 2 or word[0] != -word[-1])


def least_rotation(word: Sequence[int]) -> Word:
    word = tuple(word)
    if not word:
        return word
    return min((word[i:] + word[:i] for i in range(len(word))), key=word_key)


class CyclicWord:
    """A cyclically reduced word up to rotation, i.e. a conjugacy class.

    ``word`` keeps the representative it was built from; equality, hashing and
    ordering go through ``canonical``, the lexicographically least rotation.
    """

    __slots__ = ("word", "canonical")

    def __init__(self, letters: Iterable[int]):
        word = tuple(letters)
        if not is_cyclically_reduced(word):
            raise ValueError(f"{format_word(word)} is not cyclically reduced")
        self.word: Word = word
        self.canonical: Word = least_rotation(word)

    @classmethod
    def of(cls, word: Sequence[int]) -> "CyclicWord":
        """Conjugacy class of an arbitrary word."""
        return cyclic_reduce(reduce(word))[0]

    def __len__(self) -> int:
        return len(self.word)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CyclicWord) and self.canonical == other.canonical

    def __hash__(self) -> int:
        return hash(self.canonical)

    def __lt__(self, other: "CyclicWord") -> bool:
        return (len(self), word_key(self.canonical)) < (len(other), word_key(other.canonical))

    def __repr__(self) -> str:
        return f"CyclicWord({format_word(self.word)!r})"

    def __str__(self) -> str:
        return format_word(self.word)

    def inverse(self) -> "CyclicWord":
        return CyclicWord(inverse(self.word))

    def power(self, n: int) -> "CyclicWord":
        if n < 1:
            raise ValueError("power must be positive")
        return CyclicWord(self.word * n)

    def rotations(self) -> list[Word]:
        w = self.word
        return [w[i:] + w[:i] for i in range(len(w))]


def cyclic_reduce(word: Sequence[int]) -> tuple[CyclicWord, Word]:
    """Split a reduced word as ``conjugator * core * conjugator^-1``."""
    word = tuple(word)
    if not is_reduced(word):
        raise ValueError("cyclic_reduce expects a freely reduced word")
    i, j = 0, len(word) - 1
    while i < j and word[i] == -word[j]:
        i += 1
        j -= 1
    return CyclicWord(word[i : j + 1]), word[:i]


def primitive_root(c: CyclicWord) -> tuple[CyclicWord, int]:
    n = len(c)
    if n == 0:
        raise ValueError("the empty word has no primitive root")
    w = c.word
    for period in range(1, n + 1):
        if n % period == 0 and w[:period] * (n // period) == w:
            return CyclicWord(w[:period]), n // period
    raise AssertionError("unreachable")


def conjugate_equal(u: CyclicWord, v: CyclicWord) -> bool:
    return u.canonical == v.canonical
