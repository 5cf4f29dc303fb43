"""The gap-label substitution and generation of level words.

Letters are the indices 0..m of the gap alphabet, stored compactly in
bytes objects.  One refinement step maps

    0 -> 1 0        (the rightmost gap splits, label d_1 then d_0)
    i -> 1 i+1      for 1 <= i <= m-1
    m -> 1          (the smallest gap: the inserted point merges away)

and the label word of the rank-n partition is the n-th image of the
single letter 0.
"""

from __future__ import annotations

from .errors import InvalidDegreeError, InvalidLetterError, ResourceCapError
from .kernels import substitute_word

#: default cap on generated word length (levels grow like beta**n)
MAX_WORD_LENGTH = 50_000_000


def letter_image(letter: int, m: int) -> bytes:
    """Image of a single letter under one refinement step."""
    if m < 2:
        raise InvalidDegreeError(f"degree must be >= 2, got {m}")
    if not 0 <= letter <= m:
        raise InvalidLetterError(f"letter {letter} outside 0..{m}")
    if letter == 0:
        return bytes((1, 0))
    if letter == m:
        return bytes((1,))
    return bytes((1, letter + 1))


def substitute(word: bytes, m: int) -> bytes:
    """Apply one refinement step to every letter of a word."""
    if m < 2:
        raise InvalidDegreeError(f"degree must be >= 2, got {m}")
    if m > 255:
        raise InvalidDegreeError("byte-packed words support degrees up to 255")
    if word and max(word) > m:
        raise InvalidLetterError(f"word contains a letter above {m}")
    return substitute_word(word, m)


def letter_counts(n: int, m: int) -> tuple[int, ...]:
    """Occurrence count of each letter 0..m in the rank-n level word."""
    if n < 0:
        raise ValueError("rank must be >= 0")
    counts = [0] * (m + 1)
    counts[0] = 1
    for _ in range(n):
        nxt = [0] * (m + 1)
        for letter, k in enumerate(counts):
            if not k:
                continue
            nxt[1] += k
            if letter == 0:
                nxt[0] += k
            elif letter < m:
                nxt[letter + 1] += k
        counts = nxt
    return tuple(counts)


def word_length(n: int, m: int) -> int:
    """Exact length of the rank-n level word, via the letter-count recurrence."""
    return sum(letter_counts(n, m))


def level_word(n: int, m: int, max_length: int = MAX_WORD_LENGTH) -> bytes:
    """The label word of the rank-n partition (length #X_n - 1)."""
    if n < 1:
        raise ValueError("rank must be >= 1")
    predicted = word_length(n, m)
    if predicted > max_length:
        raise ResourceCapError(
            f"rank-{n} word has {predicted} letters, above the cap {max_length}"
        )
    word = bytes((0,))
    for _ in range(n):
        word = substitute(word, m)
    return word
