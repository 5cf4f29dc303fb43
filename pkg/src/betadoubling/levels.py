"""Partition levels: exact points, gap labels and address weights.

The rank-n level consists of the points reachable from 0 by n left-to-right
applications of the two contractions, sorted, plus the endpoint 1.  The
weight of a point aggregates the probability of every address landing on it,
which is where the overlap structure shows: when a gap carries the smallest
letter, the point inserted by refinement coincides with the next existing
point and the two address bundles merge.

Weights are kept as integer numerators over a common denominator q**n
(q the common denominator of the probability pair), so every scan and
conservation check is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import kernels, substitution
from .algebra import FieldElement, GapAlphabet, PisotField, compare, gap_alphabet
from .errors import (
    AuditFailure,
    InvalidProbabilityError,
    LevelTooSmallError,
    ResourceCapError,
)
from .ratmat import triple_step_merge, triple_step_plain


def probability_pair(p1) -> tuple[Fraction, Fraction]:
    """Validate and complete a probability pair from its first entry."""
    try:
        p1 = Fraction(p1)
    except (TypeError, ValueError) as exc:
        raise InvalidProbabilityError(f"not a rational: {p1!r}") from exc
    if not 0 < p1 < 1:
        raise InvalidProbabilityError(f"p1 must lie strictly between 0 and 1, got {p1}")
    return p1, 1 - p1


def normalize_pair(p) -> tuple[Fraction, Fraction]:
    """Accept (p1, p2) or bare p1 and return a validated Fraction pair."""
    if isinstance(p, tuple):
        p1, p2 = Fraction(p[0]), Fraction(p[1])
        if p1 <= 0 or p2 <= 0 or p1 + p2 != 1:
            raise InvalidProbabilityError(f"invalid probability pair {p}")
        return p1, p2
    return probability_pair(p)


def _weight_base(p) -> tuple[int, int, int]:
    """Integer numerators (a, b) of the pair over their common denominator q."""
    p1, p2 = p
    q = p1.denominator
    if p2.denominator > q:
        q = p2.denominator
    return p1.numerator * (q // p1.denominator), p2.numerator * (q // p2.denominator), q


@lru_cache(maxsize=None)
def _alphabet_for(field: PisotField) -> GapAlphabet:
    return gap_alphabet(field)


@dataclass(eq=False)
class Level:
    """One rank of the partition; treat instances as immutable."""

    field: PisotField
    n: int
    p: tuple[Fraction, Fraction]
    labels: bytes            # gap letters, length #X_n - 1
    wnum: list               # weight numerators, aligned with labels
    wden: int                # q**n
    points: list | None = None

    @property
    def num_points(self) -> int:
        return len(self.labels) + 1

    @property
    def weights(self) -> list[Fraction]:
        return [Fraction(w, self.wden) for w in self.wnum]

    def weight(self, j: int) -> Fraction:
        return Fraction(self.wnum[j], self.wden)

    def weight_triple(self, j: int) -> tuple[Fraction, Fraction, Fraction]:
        """Weights at points j, j+1, j+2."""
        return (self.weight(j), self.weight(j + 1), self.weight(j + 2))

    def all_points(self) -> list:
        """All #X_n points as exact elements at scale n (computed on demand)."""
        if self.points is None:
            alpha = _alphabet_for(self.field)
            pts = [self.field.zero().rescaled(self.n)]
            for lab in self.labels:
                step = FieldElement(self.field, alpha[lab].coeffs, self.n)
                pts.append(pts[-1] + step)
            self.points = pts
        return self.points


def initial_level(field: PisotField, p, with_points: bool = False) -> Level:
    """The rank-1 level: points {0, d_1/beta, 1}, labels (d_1, d_0)."""
    p = normalize_pair(p)
    a, b, q = _weight_base(p)
    points = None
    if with_points:
        alpha = _alphabet_for(field)
        zero = field.zero().rescaled(1)
        points = [zero, FieldElement(field, alpha[1].coeffs, 1), field.one().rescaled(1)]
    return Level(field, 1, p, bytes((1, 0)), [a, b], q, points)


def refine(level: Level, audit: bool = False, max_points: int | None = None) -> Level:
    """Build the next rank from this one.

    Labels advance by the substitution; weights follow the merge rule keyed
    on the smallest gap letter.  When `audit` is set, every merge decision
    is re-derived by exact point comparison and any disagreement raises
    AuditFailure; points are then carried on the result.
    """
    m = level.field.m
    a, b, q = _weight_base(level.p)
    merges = level.labels.count(m)
    predicted = 2 * len(level.labels) - merges + 1
    if max_points is not None and predicted > max_points:
        raise ResourceCapError(
            f"rank {level.n + 1} would have {predicted} points, above cap {max_points}"
        )
    new_labels = substitution.substitute(level.labels, m)
    new_wnum = kernels.refine_weights(
        level.labels, level.wnum, a, b, m, max_value=level.wden * q
    )
    new_points = None
    if audit or level.points is not None:
        n1 = level.n + 1
        old = [pt.rescaled(n1) for pt in level.all_points()]
        step = FieldElement(level.field, (-1, 1) + (0,) * (m - 2), n1)  # d_1/beta**n1
        new_points = []
        for j, lab in enumerate(level.labels):
            new_points.append(old[j])
            inserted = old[j] + step
            if lab != m:
                if audit and compare(inserted, old[j + 1]) >= 0:
                    raise AuditFailure(
                        f"rank {level.n} index {j}: label says split, points disagree"
                    )
                new_points.append(inserted)
            elif audit and inserted != old[j + 1]:
                raise AuditFailure(
                    f"rank {level.n} index {j}: label says merge, points disagree"
                )
        new_points.append(old[-1])
    if audit and sum(new_wnum) != level.wden * q:
        raise AuditFailure(f"rank {level.n + 1}: weight mass is not conserved")
    return Level(level.field, level.n + 1, level.p, new_labels, new_wnum,
                 level.wden * q, new_points)


def build_levels(
    field: PisotField,
    p,
    depth: int,
    with_points: bool = False,
    audit: bool = False,
    max_points: int | None = None,
) -> list[Level]:
    """Levels of rank 1..depth, in order."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    chain = [initial_level(field, p, with_points=with_points or audit)]
    while chain[-1].n < depth:
        chain.append(refine(chain[-1], audit=audit, max_points=max_points))
    return chain


@dataclass(frozen=True)
class ImbalanceReport:
    """Largest two-sided pair-sum ratio over the triples of one level."""

    n: int
    num_points: int
    max_ratio: Fraction
    argmax_index: int


def max_imbalance(level: Level) -> ImbalanceReport:
    """Exact max over triples j of max(r_j, 1/r_j), r_j the pair-sum ratio.

    r_j = (W(x_j) + W(x_{j+1})) / (W(x_{j+1}) + W(x_{j+2})); the scan stops
    at the last fully weighted triple (the endpoint 1 carries no weight).
    Boundedness of this quantity over all ranks is equivalent to the
    measure being doubling.
    """
    if level.n < 2 or level.num_points < 4:
        raise LevelTooSmallError(
            f"imbalance scan needs rank >= 2 and >= 4 points, got rank {level.n}"
        )
    num, den, idx = kernels.max_pair_ratio(level.wnum, max_value=level.wden)
    return ImbalanceReport(level.n, level.num_points, Fraction(num, den), idx)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a structural validation pass."""

    ok: bool
    check: str
    rank: int
    index: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        where = "" if self.index is None else f" at index {self.index}"
        tail = f": {self.detail}" if self.detail else ""
        return f"{status} {self.check} (rank {self.rank}){where}{tail}"


def check_gap_lemma(level: Level) -> CheckResult:
    """Every gap, scaled by beta**n, must be a member of the gap alphabet."""
    alpha = _alphabet_for(level.field)
    pts = level.all_points()
    for j in range(len(pts) - 1):
        scaled = (pts[j + 1] - pts[j]).mul_beta_pow(level.n)
        if alpha.letter_of(scaled) is None:
            return CheckResult(False, "gap-alphabet", level.n, j,
                               "scaled gap is not an alphabet letter")
    return CheckResult(True, "gap-alphabet", level.n)


def check_label_correspondence(level: Level) -> CheckResult:
    """Stored labels must match both the exact gaps and the substitution word."""
    alpha = _alphabet_for(level.field)
    pts = level.all_points()
    for j in range(len(pts) - 1):
        scaled = (pts[j + 1] - pts[j]).mul_beta_pow(level.n)
        letter = alpha.letter_of(scaled)
        if letter is None or letter != level.labels[j]:
            return CheckResult(False, "label-correspondence", level.n, j,
                               f"gap letter {letter} vs stored {level.labels[j]}")
    expected = substitution.level_word(level.n, level.field.m)
    if level.labels != expected:
        j = next(i for i, (x, y) in enumerate(zip(level.labels, expected)) if x != y)
        return CheckResult(False, "label-correspondence", level.n, j,
                           "stored word differs from substitution word")
    return CheckResult(True, "label-correspondence", level.n)


def check_cover_lemma(level: Level) -> CheckResult:
    """Each address interval spans its own basic interval and stays inside two.

    For j <= #X_n - 3:  x_{j+1} <= x_j + beta**-n <= x_{j+2}, checked exactly.
    """
    pts = level.all_points()
    cell = level.field.one().rescaled(level.n)  # beta**-n as an element
    for j in range(len(pts) - 2):
        upper = pts[j] + cell
        if compare(pts[j + 1], upper) > 0:
            return CheckResult(False, "two-interval-cover", level.n, j,
                               "address interval misses its basic interval")
        if compare(upper, pts[j + 2]) > 0:
            return CheckResult(False, "two-interval-cover", level.n, j,
                               "address interval leaks past two basic intervals")
    return CheckResult(True, "two-interval-cover", level.n)


def check_weight_conservation(level: Level) -> CheckResult:
    ok = sum(level.wnum) == level.wden
    return CheckResult(ok, "weight-conservation", level.n,
                       detail="" if ok else "total mass differs from 1")


def check_matrix_consistency(parent: Level, child: Level) -> CheckResult:
    """Triple-propagation matrices must reproduce the directly refined weights.

    Wherever the first two labels of a triple are both non-minimal the plain
    step matrix applies; where they read (smallest letter, d_1) the merge
    matrix applies.  Other patterns are not covered by the two matrices and
    are skipped.
    """
    if child.n != parent.n + 1:
        raise ValueError("child level must be one rank below parent")
    m = parent.field.m
    plain = triple_step_plain(parent.p)
    merge = triple_step_merge(parent.p)
    pos = 0  # index of parent point j inside the child level
    for j in range(len(parent.labels) - 2):
        lab0, lab1 = parent.labels[j], parent.labels[j + 1]
        if lab0 != m and lab1 != m:
            mat = plain
        elif lab0 == m and lab1 == 1:
            mat = merge
        else:
            mat = None
        if mat is not None:
            predicted = mat.apply(parent.weight_triple(j))
            actual = tuple(child.weight(pos + 1 + t) for t in range(3))
            if predicted != actual:
                return CheckResult(False, "triple-matrices", parent.n, j,
                                   f"predicted {predicted}, refined {actual}")
        pos += 1 if lab0 == m else 2
    return CheckResult(True, "triple-matrices", parent.n)
