"""Exact measures of basic intervals and an independent cylinder oracle.

Two routes to the same quantities are kept deliberately separate:

* closed forms: the prefix measures c_i = mu([0, d_i]) solve a small linear
  system and every basic-interval measure is a two-term combination of
  point weights and prefix measures;
* a brute-force oracle that walks the binary address tree to a fixed depth
  and brackets mu of an interval between the mass of cylinders contained in
  it and the mass of cylinders touching it.

The oracle never looks at level weights, so agreement between the two
routes is a real cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .algebra import FieldElement, PisotField
from .errors import LevelTooSmallError, ResourceCapError
from .levels import ImbalanceReport, Level, _weight_base, normalize_pair


@dataclass(frozen=True)
class PrefixMeasures:
    """The exact values c_i = mu([0, d_i]) for the gap alphabet letters.

    c_i = 1 - p2**(m+1-i) / (1 - p1*p2**(m-1)) for 1 <= i <= m, and the
    convention c_0 = mu([0, 1]) = 1 keeps interval formulas uniform at the
    right edge.
    """

    m: int
    p: tuple[Fraction, Fraction]
    values: tuple[Fraction, ...]

    def c(self, i: int) -> Fraction:
        if i == 0:
            return Fraction(1)
        return self.values[i - 1]

    def complement(self, i: int) -> Fraction:
        return 1 - self.c(i)


def prefix_measures(m: int, p) -> PrefixMeasures:
    """Closed-form prefix measures, with their defining relations re-verified."""
    p = normalize_pair(p)
    p1, p2 = p
    denom = 1 - p1 * p2 ** (m - 1)
    values = tuple(1 - p2 ** (m + 1 - i) / denom for i in range(1, m + 1))
    pm = PrefixMeasures(m, p, values)
    for i in range(1, m):
        assert 1 - pm.c(i) == p2 * (1 - pm.c(i + 1))
    assert pm.c(m) == p1 * pm.c(1)
    return pm


def basic_interval_measure(level: Level, j: int, pm: PrefixMeasures | None = None) -> Fraction:
    """Exact mu of the j-th basic interval [a_j, a_{j+1}] of the level.

    Only addresses landing on a_j or on its predecessor can reach into the
    interval; the former contribute through the prefix measure of the
    interval's own label, the latter through the complement at the previous
    label.  The leftmost interval has no predecessor term.
    """
    L = len(level.labels)
    if not 0 <= j < L:
        raise IndexError(f"interval index {j} outside 0..{L - 1}")
    if pm is None:
        pm = prefix_measures(level.field.m, level.p)
    value = level.weight(j) * pm.c(level.labels[j])
    if j > 0:
        value += level.weight(j - 1) * pm.complement(level.labels[j - 1])
    return value


def _interval_measure_nums(level: Level) -> tuple[list, int]:
    """Integer numerators of all basic-interval measures over a common denominator."""
    a, b, q = _weight_base(level.p)
    m = level.field.m
    scaled_one = q**m - a * b ** (m - 1)
    c_num = [scaled_one] + [
        scaled_one - b ** (m + 1 - i) * q ** (i - 1) for i in range(1, m + 1)
    ]
    comp_num = [0] + [b ** (m + 1 - i) * q ** (i - 1) for i in range(1, m + 1)]
    labels, w = level.labels, level.wnum
    out = []
    for j, t in enumerate(labels):
        v = w[j] * c_num[t]
        if j > 0:
            v += w[j - 1] * comp_num[labels[j - 1]]
        out.append(v)
    return out, level.wden * scaled_one


def interval_ratio_scan(level: Level) -> ImbalanceReport:
    """Exact max over adjacent basic intervals of max(ratio, 1/ratio)."""
    if level.num_points < 3:
        raise LevelTooSmallError("ratio scan needs at least 3 points")
    nums, den = _interval_measure_nums(level)
    num, d, idx = kernels.max_adjacent_ratio(nums, max_value=den)
    return ImbalanceReport(level.n, level.num_points, Fraction(num, d), idx)


# ---------------------------------------------------------------------------
# cylinder oracle

@dataclass(frozen=True)
class MeasureBracket:
    """Certified lower/upper bounds on mu of an interval at a given depth."""

    lower: Fraction
    upper: Fraction
    depth: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __contains__(self, value) -> bool:
        return self.lower <= value <= self.upper


def _as_scaled(field: PisotField, x) -> tuple[FieldElement, int]:
    """Normalize an endpoint to (element, positive integer denominator)."""
    if isinstance(x, FieldElement):
        return x, 1
    vec, den = x
    if den <= 0:
        raise ValueError("endpoint denominator must be positive")
    return vec, den


def _sp_cmp(a: tuple[FieldElement, int], b: tuple[FieldElement, int]) -> int:
    """Exact comparison of two scaled endpoints a_vec/a_den vs b_vec/b_den."""
    return (a[0] * b[1] - b[0] * a[1]).sign()


def cylinder_bounds(field: PisotField, p, lo, hi, depth: int,
                    max_nodes: int = 2_000_000) -> MeasureBracket:
    """Bracket mu([lo, hi]) by descending the address tree to the given depth.

    lower sums the weight of addresses whose cylinder lies inside [lo, hi],
    upper those whose cylinder touches it.  Subtrees fully inside or fully
    outside are pruned, so only boundary cylinders are expanded.  Endpoints
    are exact field elements, optionally divided by an integer.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    p = normalize_pair(p)
    a, b, q = _weight_base(p)
    lo = _as_scaled(field, lo)
    hi = _as_scaled(field, hi)
    zero = field.zero()
    one = field.one()
    if _sp_cmp(lo, hi) >= 0:
        raise ValueError("need lo < hi")
    if _sp_cmp(lo, (zero, 1)) < 0 or _sp_cmp(hi, (one, 1)) > 0:
        raise ValueError("endpoints must lie in [0, 1]")
    m = field.m
    d1 = (-1, 1) + (0,) * (m - 2)
    lower = 0
    upper = 0
    nodes = 0
    # stack entries: (left endpoint at scale k, k, weight numerator over q**k)
    stack = [(zero, 0, 1)]
    while stack:
        c, k, wn = stack.pop()
        nodes += 1
        if nodes > max_nodes:
            raise ResourceCapError(f"oracle expanded more than {max_nodes} nodes")
        right = c + FieldElement(field, one.coeffs, k)  # c + beta**-k
        if _sp_cmp((right, 1), lo) < 0 or _sp_cmp((c, 1), hi) > 0:
            continue
        if _sp_cmp((c, 1), lo) >= 0 and _sp_cmp((right, 1), hi) <= 0:
            mass = wn * q ** (depth - k)
            lower += mass
            upper += mass
            continue
        if k == depth:
            upper += wn
            continue
        child = c.rescaled(k + 1)
        stack.append((child, k + 1, wn * a))
        stack.append((child + FieldElement(field, d1, k + 1), k + 1, wn * b))
    total = q**depth
    return MeasureBracket(Fraction(lower, total), Fraction(upper, total), depth)


@dataclass(frozen=True)
class BallRatioBracket:
    """Bracket on mu(B(x, 2r)) / mu(B(x, r)); upper is None when unbounded."""

    lower: Fraction
    upper: Fraction | None
    depth: int

    @property
    def unbounded(self) -> bool:
        return self.upper is None


def ball_ratio_probe(field: PisotField, p, center, radius, depth: int) -> BallRatioBracket:
    """Diagnostic bracket for the doubling quotient at one center and radius.

    Balls are intersected with [0, 1].  The verdict machinery never relies
    on this probe; it exists to spot-check the triple-ratio criteria
    against the raw definition.
    """
    cvec, cden = _as_scaled(field, center)
    rvec, rden = _as_scaled(field, radius)
    if rvec.sign() <= 0:
        raise ValueError("radius must be positive")
    zero, one = field.zero(), field.one()
    if _sp_cmp((cvec, cden), (zero, 1)) < 0 or _sp_cmp((cvec, cden), (one, 1)) > 0:
        raise ValueError("center must lie in [0, 1]")
    den = cden * rden

    def clipped(scale_mult):
        lo_v = cvec * rden - (scale_mult * rvec) * cden
        hi_v = cvec * rden + (scale_mult * rvec) * cden
        lo = (zero, 1) if _sp_cmp((lo_v, den), (zero, 1)) < 0 else (lo_v, den)
        hi = (one, 1) if _sp_cmp((hi_v, den), (one, 1)) > 0 else (hi_v, den)
        return lo, hi

    lo1, hi1 = clipped(1)
    lo2, hi2 = clipped(2)
    small = cylinder_bounds(field, p, lo1, hi1, depth)
    big = cylinder_bounds(field, p, lo2, hi2, depth)
    lower = big.lower / small.upper
    upper = None if small.lower == 0 else big.upper / small.lower
    return BallRatioBracket(lower, upper, depth)
