"""Integer feasibility for near-diagonal projection multiplicities in the
approximate intertwining between two diagrams."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .model import ParseError, ValidationError, parse_rational

EMPTY_WINDOW = "multiplicity window empty"
COLUMN_ROOM = "column room exceeded"


@dataclass(frozen=True)
class IntertwineInstance:
    """``m`` is source-by-target; ``delta_prime`` sets the window
    ``((1 - 2 delta') m, (1 - delta') m)`` for each entry."""

    m: tuple[tuple[int, ...], ...]
    u_src: tuple[int, ...]
    u_tgt_bound: tuple[int, ...]
    delta_prime: Fraction

    def __post_init__(self):
        if not self.m or len({len(r) for r in self.m}) != 1 or not self.m[0]:
            raise ValidationError("m must be a nonempty rectangular matrix")
        if any(x < 1 for r in self.m for x in r):
            raise ValidationError("multiplicities must be positive")
        if len(self.u_src) != len(self.m):
            raise ValidationError("u_src length must equal the number of rows of m")
        if len(self.u_tgt_bound) != len(self.m[0]):
            raise ValidationError("u_tgt_bound length must equal the number of columns of m")
        if not 0 < self.delta_prime < Fraction(1, 2):
            raise ValidationError("delta' must lie in (0, 1/2)")

    @classmethod
    def from_dict(cls, d: dict) -> "IntertwineInstance":
        try:
            return cls(
                tuple(tuple(int(x) for x in row) for row in d["m"]),
                tuple(int(x) for x in d["u_src"]),
                tuple(int(x) for x in d["u_tgt_bound"]),
                parse_rational(d["delta_prime"]),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed intertwining instance: {exc!r}") from exc


@dataclass(frozen=True)
class IntertwineResult:
    feasible: bool
    delta: tuple[tuple[int, ...], ...] | None
    violated: str | None = None
    detail: str | None = None


def window(m: int, dp: Fraction) -> tuple[Fraction, Fraction]:
    return (1 - 2 * dp) * m, (1 - dp) * m


def satisfies(inst: IntertwineInstance, delta) -> bool:
    """Both inequality families, checked exactly."""
    for i, row in enumerate(inst.m):
        for j, mij in enumerate(row):
            lo, hi = window(mij, inst.delta_prime)
            if not lo < delta[i][j] < hi:
                return False
    return all(sum(inst.u_src[i] * delta[i][j] for i in range(len(inst.m))) < inst.u_tgt_bound[j]
               for j in range(len(inst.u_tgt_bound)))


def find_projection_multiplicities(inst: IntertwineInstance) -> IntertwineResult:
    """Entrywise-smallest admissible integer matrix, or the first violated constraint.

    The column constraint is increasing in every entry, so testing it at the
    minimal choice decides feasibility exactly.
    """
    delta = []
    for i, row in enumerate(inst.m):
        out = []
        for j, mij in enumerate(row):
            lo, hi = window(mij, inst.delta_prime)
            d = floor(lo) + 1
            if not d < hi:
                return IntertwineResult(False, None, EMPTY_WINDOW,
                                        f"entry ({i}, {j}): ({lo}, {hi}) holds no integer")
            out.append(d)
        delta.append(tuple(out))
    for j, bound in enumerate(inst.u_tgt_bound):
        col = sum(inst.u_src[i] * delta[i][j] for i in range(len(delta)))
        if not col < bound:
            return IntertwineResult(False, None, COLUMN_ROOM,
                                    f"column {j}: minimal sum {col} is not below {bound}")
    return IntertwineResult(True, tuple(delta))
