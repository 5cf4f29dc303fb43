"""Pure-Python fallback for the hot inner loops.

Same contracts as the compiled module `_ckernels`; see `kernels` for the
selection logic.  Weights are integer numerators over a common power
denominator, so everything here is exact integer arithmetic.
"""

from __future__ import annotations


def substitute_word(word: bytes, m: int) -> bytes:
    """One refinement step applied letterwise."""
    images = [b"\x01\x00"] + [bytes((1, i + 1)) for i in range(1, m)] + [b"\x01"]
    return b"".join(images[letter] for letter in word)


def refine_weights(labels: bytes, weights: list, a, b, m: int, max_value=0) -> list:
    """Push weight numerators one rank down.

    Walking the weighted points in order: the surviving copy of a point
    keeps a*w, plus b*(previous weight) when the previous gap was the
    smallest letter m (the inserted point lands on this point); every gap
    other than m inserts a new point carrying b*w.
    """
    out = []
    append = out.append
    merge = 0
    for lab, w in zip(labels, weights):
        append(a * w + merge)
        bw = b * w
        if lab != m:
            append(bw)
            merge = 0
        else:
            merge = bw
    return out


def max_pair_ratio(values: list, max_value=0) -> tuple:
    """Scan of consecutive pair-sum ratios.

    For r_j = (v_j + v_{j+1}) / (v_{j+1} + v_{j+2}) returns
    (num, den, argmax) of max_j max(r_j, 1/r_j); first index wins ties.
    """
    if len(values) < 3:
        return 0, 1, -1
    best_n, best_d, best_j = 0, 1, -1
    s0 = values[0] + values[1]
    for j in range(len(values) - 2):
        s1 = values[j + 1] + values[j + 2]
        if s0 >= s1:
            n, d = s0, s1
        else:
            n, d = s1, s0
        if n * best_d > best_n * d:
            best_n, best_d, best_j = n, d, j
        s0 = s1
    return best_n, best_d, best_j


def max_adjacent_ratio(values: list, max_value=0) -> tuple:
    """Like max_pair_ratio but for plain consecutive ratios v_j / v_{j+1}."""
    if len(values) < 2:
        return 0, 1, -1
    best_n, best_d, best_j = 0, 1, -1
    for j in range(len(values) - 1):
        v0, v1 = values[j], values[j + 1]
        if v0 >= v1:
            n, d = v0, v1
        else:
            n, d = v1, v0
        if n * best_d > best_n * d:
            best_n, best_d, best_j = n, d, j
    return best_n, best_d, best_j
