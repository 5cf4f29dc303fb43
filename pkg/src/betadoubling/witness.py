"""Certified non-doubling witness for degrees m >= 3.

Following the address path 1 1 2 2 2 ... from rank 2 downwards pins a
triple of consecutive points whose label window cycles with period m and
whose weight triple evolves by one of two fixed 3x3 matrices per rank.
Every m ranks the product telescopes to a closed form, and the pair-sum
ratio of the resulting triple grows without bound, which rules out the
doubling property.  Everything here is exact rational arithmetic; the
walk can be cross-validated against a fully built level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import FieldElement, PisotField
from .errors import InvalidDegreeError, ResourceCapError
from .levels import Level, CheckResult, normalize_pair
from .ratmat import Mat3, triple_step_merge, triple_step_plain
from .substitution import letter_image


@dataclass(frozen=True)
class WitnessState:
    """Rank, label window, weight triple and location of the witness triple."""

    n: int
    labels: tuple[int, int, int]
    weights: tuple[Fraction, Fraction, Fraction]
    location: FieldElement
    p: tuple[Fraction, Fraction]


def witness_labels(n: int, m: int) -> tuple[int, int, int]:
    """Closed form of the witness label window at rank n (period m in n)."""
    r = 2 + (n - 2) % m
    if r == 2:
        return (1, 2, 1)
    if r == 3:
        return (2, 1, 3)
    return (r - 1, 1, 2)


def initial_witness(field: PisotField, p) -> WitnessState:
    """The rank-2 witness: labels (d_1, d_2, d_1), weights (p1^2, p1p2, p1p2)."""
    if field.m < 3:
        raise InvalidDegreeError(
            "the witness path needs degree >= 3; degree 2 is handled by the "
            "golden-ratio state machine (module golden)"
        )
    p1, p2 = normalize_pair(p)
    return WitnessState(
        2, (1, 2, 1), (p1 * p1, p1 * p2, p1 * p2), field.zero().rescaled(2), (p1, p2)
    )


def step(state: WitnessState) -> WitnessState:
    """Advance the witness one rank.

    The label window advances by substituting the three letters and reading
    the window one slot to the right; the weight triple advances by the
    merge matrix when the first two new letters read (m, 1), i.e. every
    m-th rank, and by the plain matrix otherwise.
    """
    field = state.location.field
    m = field.m
    word = b"".join(letter_image(letter, m) for letter in state.labels)
    new_labels = tuple(word[1:4])
    if (state.n - 1) % m == 0:
        assert state.labels[0] == m and state.labels[1] == 1
        mat = triple_step_merge(state.p)
    else:
        assert state.labels[0] != m and state.labels[1] != m
        mat = triple_step_plain(state.p)
    shift = FieldElement(field, (-1, 1) + (0,) * (m - 2), state.n + 1)  # d_1/beta**(n+1)
    return WitnessState(
        state.n + 1, new_labels, mat.apply(state.weights), state.location + shift,
        state.p,
    )


def walk(field: PisotField, p, steps: int) -> WitnessState:
    """State after the given number of steps from the rank-2 witness."""
    s = initial_witness(field, p)
    for _ in range(steps):
        s = step(s)
    return s


def cycle_power(m: int, p, k: int) -> Mat3:
    """Closed form of the k-th power of the m-rank witness cycle matrix.

    The cycle matrix (one merge step after m-1 plain steps) has first row
    (p2**m, p1**m, 0) and equal second and third rows (0, p1**(m-1)*p2, 0);
    its k-th power keeps that shape with the entries below.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    p1, p2 = normalize_pair(p)
    top_mid = sum(
        p1 ** (m + (m - 1) * i) * p2 ** (k * m - m - (m - 1) * i) for i in range(k)
    )
    mid = p1 ** (k * m - k) * p2**k
    return Mat3.from_rows(
        ((p2 ** (k * m), top_mid, 0), (0, mid, 0), (0, mid, 0))
    )


def witness_ratio(m: int, p, k: int) -> Fraction:
    """Exact pair-sum ratio of the witness triple after k full cycles.

    With t = p1/p2 <= 1:

        R_k = 1 / (2 t**(k(m-1)-1))
            + (sum_{i<k} t**((m-1)i)) / (2 t**(k(m-1)-m))
            + 1/2

    which tends to infinity (second term when t = 1, first term when t < 1).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    p1, p2 = normalize_pair(p)
    if p1 > p2:
        raise ValueError("requires p1 <= p2; mirror the pair first")
    t = p1 / p2
    geom = sum(t ** ((m - 1) * i) for i in range(k))
    return (
        Fraction(1, 2) * t ** (1 - k * (m - 1))
        + geom / 2 * t ** (m - k * (m - 1))
        + Fraction(1, 2)
    )


@dataclass(frozen=True)
class Certificate:
    """Exact witness of unbounded triple imbalance."""

    kind: str                 # "witness-cycle" (m >= 3) or "golden-path" (m = 2)
    index: int                # number of cycles k, or path parameter ell
    ratio: Fraction           # exact imbalance achieved
    threshold: Fraction       # the bound it exceeds
    reflected: bool           # analysis ran on the mirrored pair
    p: tuple[Fraction, Fraction]  # the pair actually analysed


def divergence_certificate(m: int, p, threshold, max_k: int = 100_000) -> Certificate:
    """Smallest k whose cycle ratio exceeds the threshold, by linear scan.

    Pairs with p1 > p2 are mirrored first (the measure for the swapped pair
    is the reflection through 1/2, so doubling is preserved).
    """
    if m < 3:
        raise InvalidDegreeError("degree must be >= 3; see module golden for m = 2")
    p1, p2 = normalize_pair(p)
    reflected = p1 > p2
    if reflected:
        p1, p2 = p2, p1
    threshold = Fraction(threshold)
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    for k in range(1, max_k + 1):
        r = witness_ratio(m, (p1, p2), k)
        if r > threshold:
            return Certificate("witness-cycle", k, r, threshold, reflected, (p1, p2))
    raise ResourceCapError(f"no certificate up to k = {max_k}")


def cross_validate(field: PisotField, p, k: int, level: Level) -> CheckResult:
    """Check the matrix walk against a fully built level at rank k*m + 2.

    Locates the witness point by exact search, then compares the label
    window (against both the walked labels and their closed form) and the
    weight triple, all exactly.
    """
    m = field.m
    n = k * m + 2
    if level.n != n:
        raise ValueError(f"level has rank {level.n}, expected {n}")
    state = walk(field, p, k * m)
    target = state.location.rescaled(n)
    pts = level.all_points()
    idx = None
    for j, pt in enumerate(pts):
        if pt.coeffs == target.coeffs:
            idx = j
            break
    if idx is None:
        return CheckResult(False, "witness-cross-validation", n,
                           detail="witness location not found in the level")
    if idx + 3 > len(level.labels):
        return CheckResult(False, "witness-cross-validation", n, idx,
                           "witness triple runs off the level")
    level_labels = tuple(level.labels[idx:idx + 3])
    if level_labels != state.labels or level_labels != witness_labels(n, m):
        return CheckResult(False, "witness-cross-validation", n, idx,
                           f"labels {level_labels} vs walked {state.labels}")
    if level.weight_triple(idx) != state.weights:
        return CheckResult(False, "witness-cross-validation", n, idx,
                           "weight triple differs from the matrix walk")
    return CheckResult(True, "witness-cross-validation", n, idx)
