"""Exact arithmetic in Z[beta] for the m-bonacci number beta.

beta is the unique root in (1, 2) of  x**m = x**(m-1) + ... + x + 1.
Every quantity the partition machinery touches (partition points, gap
lengths, the gap alphabet) lives in Z[beta] scaled by a power of beta, so
elements are stored as an integer coefficient vector of length m together
with a scale exponent n, denoting  (c_0 + c_1*beta + ... + c_{m-1}*beta**(m-1)) / beta**n.

Comparisons are certified: equality is a coefficient test after reduction,
and the sign of a nonzero element is decided by refining a rational
isolating interval for beta until the interval evaluation excludes zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .errors import InvalidDegreeError, InvalidLetterError, SignUndecidedError

#: default isolating-interval width established by make_field
_DEFAULT_WIDTH = Fraction(1, 2**64)


def _min_poly_coeffs(m: int) -> tuple[int, ...]:
    # x**m - x**(m-1) - ... - x - 1, low degree first
    return tuple([-1] * m + [1])


def _poly_at(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@dataclass(frozen=True)
class PisotField:
    """Degree, defining polynomial and a rational isolating interval for beta."""

    m: int
    min_poly: tuple[int, ...]
    lo: Fraction
    hi: Fraction

    def poly_at(self, x: Fraction) -> Fraction:
        return _poly_at(self.min_poly, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def refined(self, max_width: Fraction) -> "PisotField":
        """Return a field whose isolating interval is at most max_width wide."""
        lo, hi = _bisect(self.min_poly, self.lo, self.hi, max_width)
        return PisotField(self.m, self.min_poly, lo, hi)

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.m, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.m - 1), 0)


def _bisect(coeffs, lo: Fraction, hi: Fraction, max_width: Fraction):
    # invariant: P(lo) < 0 < P(hi)
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        v = _poly_at(coeffs, mid)
        if v == 0:
            raise SignUndecidedError("bisection hit an exact rational root")
        if v < 0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def make_field(m: int, max_width: Fraction = _DEFAULT_WIDTH) -> PisotField:
    """Construct the degree-m field with a certified isolating interval in (1,2)."""
    if not isinstance(m, int) or m < 2:
        raise InvalidDegreeError(f"degree must be an integer >= 2, got {m!r}")
    coeffs = _min_poly_coeffs(m)
    lo, hi = Fraction(1), Fraction(2)
    # P(1) = 1 - m < 0 and P(2) = 1 > 0, so (1,2) brackets the dominant root
    assert _poly_at(coeffs, lo) < 0 < _poly_at(coeffs, hi)
    lo, hi = _bisect(coeffs, lo, hi, max_width)
    return PisotField(m, coeffs, lo, hi)


def reduce_coeffs(coeffs, m: int) -> tuple[int, ...]:
    """Rewrite an integer coefficient vector of any length to degree < m.

    Uses beta**i = beta**(i-m) + ... + beta**(i-1) repeatedly from the top.
    The value represented is unchanged.
    """
    c = list(coeffs)
    if len(c) < m:
        c += [0] * (m - len(c))
    for i in range(len(c) - 1, m - 1, -1):
        k = c[i]
        if k:
            c[i] = 0
            for j in range(i - m, i):
                c[j] += k
    return tuple(c[:m])


# ---------------------------------------------------------------------------
# interval arithmetic helpers (rational endpoints, used only for signs/display)

def _imul(a, b):
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def _ipow(base, k: int):
    acc = (Fraction(1), Fraction(1))
    for _ in range(k):
        acc = _imul(acc, base)
    return acc


def _interval_horner(coeffs, lo: Fraction, hi: Fraction):
    """Interval enclosure of sum(c_i * beta**i) given beta in [lo, hi]."""
    box = (lo, hi)
    acc = (Fraction(coeffs[-1]), Fraction(coeffs[-1]))
    for c in reversed(coeffs[:-1]):
        acc = _imul(acc, box)
        acc = (acc[0] + c, acc[1] + c)
    return acc


def _vector_sign(field: PisotField, coeffs) -> int:
    """Certified sign of sum(c_i * beta**i) for a reduced integer vector."""
    if not any(coeffs):
        return 0
    lo, hi = field.lo, field.hi
    # precision budget: generous multiple of the coefficient height, so a
    # genuinely nonzero value always resolves and a dependency bug raises
    height_bits = max(abs(c) for c in coeffs).bit_length()
    budget = 256 + 16 * (height_bits + field.m)
    while True:
        vlo, vhi = _interval_horner(coeffs, lo, hi)
        if vlo > 0:
            return 1
        if vhi < 0:
            return -1
        if (hi - lo).denominator.bit_length() > budget:
            raise SignUndecidedError(
                f"sign of {coeffs} undecided at interval width {hi - lo}"
            )
        lo, hi = _bisect(field.min_poly, lo, hi, (hi - lo) / 16)


@dataclass(frozen=True, eq=False)
class FieldElement:
    """(c_0 + c_1*beta + ... + c_{m-1}*beta**(m-1)) / beta**scale, exactly."""

    field: PisotField = dataclass_field(repr=False)
    coeffs: tuple[int, ...]
    scale: int

    def __post_init__(self):
        if len(self.coeffs) != self.field.m:
            raise ValueError("coefficient vector has wrong length")
        if self.scale < 0:
            raise ValueError("scale must be >= 0")

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_int(cls, field: PisotField, value: int) -> "FieldElement":
        return cls(field, (value,) + (0,) * (field.m - 1), 0)

    # -- scale handling -------------------------------------------------------

    def rescaled(self, scale: int) -> "FieldElement":
        """Same value represented with the given (larger or equal) scale."""
        if scale < self.scale:
            raise ValueError("cannot lower the scale exactly")
        c = self.coeffs
        m = self.field.m
        for _ in range(scale - self.scale):
            c = reduce_coeffs((0,) + c, m)
        return FieldElement(self.field, c, scale)

    def mul_beta_pow(self, k: int) -> "FieldElement":
        """Multiply by beta**k (k may be negative)."""
        new_scale = self.scale - k
        if new_scale >= 0:
            return FieldElement(self.field, self.coeffs, new_scale)
        c = self.coeffs
        m = self.field.m
        for _ in range(-new_scale):
            c = reduce_coeffs((0,) + c, m)
        return FieldElement(self.field, c, 0)

    # -- ring operations ------------------------------------------------------

    def _common(self, other: "FieldElement"):
        if self.field.m != other.field.m:
            raise ValueError("elements belong to different fields")
        s = max(self.scale, other.scale)
        return self.rescaled(s), other.rescaled(s), s

    def __add__(self, other: "FieldElement") -> "FieldElement":
        a, b, s = self._common(other)
        return FieldElement(self.field, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), s)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        a, b, s = self._common(other)
        return FieldElement(self.field, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)), s)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-x for x in self.coeffs), self.scale)

    def __mul__(self, k: int) -> "FieldElement":
        if not isinstance(k, int):
            return NotImplemented
        return FieldElement(self.field, tuple(k * x for x in self.coeffs), self.scale)

    __rmul__ = __mul__

    # -- comparisons ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def sign(self) -> int:
        # the beta**-scale factor is positive, so only the numerator matters
        return _vector_sign(self.field, self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # equivalent values admit several (coeffs, scale) forms

    def __lt__(self, other):
        return compare(self, other) < 0

    def __le__(self, other):
        return compare(self, other) <= 0

    def __gt__(self, other):
        return compare(self, other) > 0

    def __ge__(self, other):
        return compare(self, other) >= 0

    # -- display ----------------------------------------------------------------

    def __repr__(self):
        return f"FieldElement({self.coeffs}, scale={self.scale})"

    def __float__(self):
        lo, hi = to_decimal(self, 15)
        return float((lo + hi) / 2)


def compare(a: FieldElement, b: FieldElement) -> int:
    """-1, 0 or +1 according to the exact order of the two elements."""
    return (a - b).sign()


def to_decimal(x: FieldElement, digits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of x with width at most 10**-digits."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    target = Fraction(1, 10**digits)
    fld = x.field
    for _ in range(128):
        num = _interval_horner(x.coeffs, fld.lo, fld.hi)
        den = _ipow((fld.lo, fld.hi), x.scale)
        inv = (1 / den[1], 1 / den[0])
        lo, hi = _imul(num, inv)
        if hi - lo <= target:
            return lo, hi
        fld = fld.refined(fld.width / 16)
    raise SignUndecidedError("decimal enclosure failed to converge")


@dataclass(frozen=True, eq=False)
class GapAlphabet:
    """The m+1 possible scaled gaps d_0 > d_1 > ... > d_m between partition points.

    d_0 = 1, d_1 = beta - 1, and d_{j+1} = beta*d_j - d_1.  The set is closed
    under the refinement map:  beta*d - d_1 lands back in the set or at 0.
    """

    field: PisotField
    letters: tuple[FieldElement, ...]
    _index: dict = dataclass_field(repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {e.coeffs: j for j, e in enumerate(self.letters)}
        )

    def __getitem__(self, j: int) -> FieldElement:
        if not 0 <= j <= self.field.m:
            raise InvalidLetterError(f"letter index {j} outside 0..{self.field.m}")
        return self.letters[j]

    def __len__(self) -> int:
        return len(self.letters)

    def letter_of(self, x: FieldElement) -> int | None:
        """Index j with d_j == x as a value, or None."""
        if x.scale == 0:
            return self._index.get(x.coeffs)
        for j, e in enumerate(self.letters):
            if x == e:
                return j
        return None


def gap_alphabet(field: PisotField) -> GapAlphabet:
    """Build d_0..d_m and verify the defining recursion and ordering."""
    m = field.m
    d0 = field.one()
    beta = FieldElement(field, reduce_coeffs((0, 1), m), 0)
    d1 = beta - d0
    letters = [d0, d1]
    for _ in range(1, m):
        letters.append(letters[-1].mul_beta_pow(1) - d1)
    alphabet = GapAlphabet(field, tuple(letters))
    for j in range(m):
        if not compare(letters[j], letters[j + 1]) > 0:
            raise AssertionError("gap alphabet is not strictly decreasing")
    if not (letters[m].mul_beta_pow(1) - d1).is_zero():
        raise AssertionError("beta*d_m - d_1 != 0")
    return alphabet


def from_beta_digits(field: PisotField, digits) -> FieldElement:
    """Element sum(a_j / beta**j) from a 0/1 digit sequence a_1, a_2, ..."""
    digits = list(digits)
    n = len(digits)
    acc = field.zero().rescaled(n)
    for j, a in enumerate(digits, start=1):
        if a not in (0, 1):
            raise ValueError("beta-adic digits must be 0 or 1")
        if a:
            acc = acc + field.one().mul_beta_pow(-j)
    return acc
