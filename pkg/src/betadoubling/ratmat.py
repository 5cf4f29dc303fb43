"""Exact rational 3x3 matrices acting on weight triples."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Mat3:
    """Immutable 3x3 matrix with Fraction entries."""

    rows: tuple[tuple[Fraction, Fraction, Fraction], ...]

    @classmethod
    def from_rows(cls, rows) -> "Mat3":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @classmethod
    def identity(cls) -> "Mat3":
        return cls.from_rows(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def __matmul__(self, other: "Mat3") -> "Mat3":
        a, b = self.rows, other.rows
        return Mat3(
            tuple(
                tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3))
                for i in range(3)
            )
        )

    def apply(self, v) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(sum(row[k] * v[k] for k in range(3)) for row in self.rows)

    def __pow__(self, e: int) -> "Mat3":
        if e < 0:
            raise ValueError("only nonnegative powers")
        acc = Mat3.identity()
        base = self
        while e:
            if e & 1:
                acc = acc @ base
            base = base @ base
            e >>= 1
        return acc

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]


def triple_step_plain(p) -> Mat3:
    """One refinement step on a weight triple when neither leading gap merges.

    With (x, y, z) the weights at three consecutive points whose first two
    gap labels are both different from the smallest letter, the first three
    weights one rank down are (p2*x, p1*y, p2*y).
    """
    p1, p2 = p
    return Mat3.from_rows(((p2, 0, 0), (0, p1, 0), (0, p2, 0)))


def triple_step_merge(p) -> Mat3:
    """One refinement step on a weight triple across a merge.

    Applies when the gap labels at the first two points read (smallest
    letter, d_1): the point inserted after the first point lands exactly on
    the second, which then carries p2*x + p1*y.
    """
    p1, p2 = p
    return Mat3.from_rows(((p2, p1, 0), (0, p2, 0), (0, 0, p1)))
