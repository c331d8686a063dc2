"""The two-vertex family with cross point evaluations between two UHF-type
towers: compression coefficients, extreme-point data, and the flip obstruction.

Everything here runs on its own 2x2 recursion so that it can be checked
against the generic pipeline in :mod:`villadsen.ratios`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (Bracket, InfeasibleError, LevelData, ParseError, SeedSpace,
                    Stratum, ValidationError, VilladsenSystem, parse_rational)

Pair = tuple[int, int]


@dataclass(frozen=True)
class HPParams:
    """``k12[i]`` counts evaluations from summand 1 at level i into summand 2 at
    level i+1; ``k21[i]`` the reverse."""

    dim: int
    n1: tuple[int, ...]
    n2: tuple[int, ...]
    k1: tuple[int, ...]
    k2: tuple[int, ...]
    k12: tuple[int, ...]
    k21: tuple[int, ...]

    def __post_init__(self):
        seqs = (self.n1, self.n2, self.k1, self.k2, self.k12, self.k21)
        if len({len(s) for s in seqs}) != 1:
            raise ValidationError("HP parameter sequences must share one length")
        if any(x < 1 for x in self.n1 + self.n2):
            raise ValidationError("n1, n2 entries must be positive")
        if any(x < 0 for x in self.k1 + self.k2 + self.k12 + self.k21):
            raise ValidationError("evaluation counts must be nonnegative")
        if self.dim <= 0:
            raise ValidationError("seed dimension must be positive")

    @property
    def length(self) -> int:
        return len(self.n1)

    def swapped(self) -> "HPParams":
        return HPParams(self.dim, self.n2, self.n1, self.k2, self.k1, self.k21, self.k12)

    def level(self, i: int):
        """Parameters of level ``i`` (1-based): n1, n2, k1, k2, k12, k21."""
        j = i - 1
        return (self.n1[j], self.n2[j], self.k1[j], self.k2[j], self.k12[j], self.k21[j])

    @classmethod
    def from_dict(cls, d: dict) -> "HPParams":
        try:
            return cls(int(d["dim"]), *(tuple(int(x) for x in d[key])
                                        for key in ("n1", "n2", "k1", "k2", "k12", "k21")))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed HP parameters: {exc!r}") from exc

    def to_dict(self) -> dict:
        return {"dim": self.dim, "n1": list(self.n1), "n2": list(self.n2), "k1": list(self.k1),
                "k2": list(self.k2), "k12": list(self.k12), "k21": list(self.k21)}


def to_system(params: HPParams, seed: SeedSpace | None = None) -> VilladsenSystem:
    seed = seed or SeedSpace(params.dim, (Stratum("X", params.dim),))
    levels = []
    for i in range(1, params.length + 1):
        n1, n2, k1, k2, k12, k21 = params.level(i)
        levels.append(LevelData(((n1, 0), (0, n2)), ((k1, k12), (k21, k2))))
    return VilladsenSystem(seed, (1, 1), tuple(levels))


def sizes(params: HPParams) -> tuple[list[Pair], list[Pair]]:
    """``u`` and ``u~`` at stages ``1..L+1``."""
    u, ut = [(1, 1)], [(1, 1)]
    for i in range(1, params.length + 1):
        n1, n2, k1, k2, k12, k21 = params.level(i)
        a, b = u[-1]
        x, y = ut[-1]
        u.append((n1 * a, n2 * b))
        ut.append(((n1 + k1) * x + k21 * y, k12 * x + (n2 + k2) * y))
    return u, ut


def ratios(params: HPParams) -> list[tuple[Fraction, Fraction]]:
    half = Fraction(params.dim, 2)
    u, ut = sizes(params)
    return [(half * a / x, half * b / y) for (a, b), (x, y) in zip(u, ut)]


def _endpoint_images(params: HPParams, i: int, ut_i: Pair) -> tuple[Fraction, Fraction]:
    n1, n2, k1, k2, k12, k21 = params.level(i)
    x, y = ut_i
    low = Fraction(k21 * y, (n1 + k1) * x + k21 * y)
    high = Fraction((n2 + k2) * y, k12 * x + (n2 + k2) * y)
    return low, high


def compression_coefficients(params: HPParams) -> list[Fraction]:
    _, ut = sizes(params)
    out = []
    for i in range(1, params.length + 1):
        low, high = _endpoint_images(params, i, ut[i - 1])
        out.append(high - low)
    return out


def tail_products(c) -> list[Fraction]:
    """``gap_i = c_i c_{i+1} ... c_L`` for each level ``i``."""
    out = [Fraction(1)]
    for ci in reversed(c):
        out.append(Fraction(ci) * out[-1])
    return out[:0:-1]


@dataclass(frozen=True)
class ExtremeCoordinates:
    s: tuple[Fraction, ...]
    t: tuple[Fraction, ...]
    gaps: tuple[Fraction, ...]
    product: Fraction
    threshold: Fraction
    above_threshold: bool


def extreme_coordinates(params: HPParams, threshold=Fraction(1, 2)) -> ExtremeCoordinates:
    """Truncated surrogates for the coordinates of the two extreme states.

    ``s`` and ``t`` are the pullbacks of the endpoints 0 and 1 of the deepest
    stage interval; their gaps are the tail products of compression coefficients.
    The true coordinates depend on the infinite tail and are not computed.
    """
    c = compression_coefficients(params)
    for i, ci in enumerate(c, start=1):
        if ci <= 0:
            raise InfeasibleError(f"c_{i} = {ci} <= 0: ordering of extreme preimages lost")
    _, ut = sizes(params)
    L = params.length
    s, t = [Fraction(0)] * (L + 1), [Fraction(1)] * (L + 1)
    for i in range(L, 0, -1):
        low, _ = _endpoint_images(params, i, ut[i - 1])
        s[i - 1] = low + c[i - 1] * s[i]
        t[i - 1] = low + c[i - 1] * t[i]
    gaps = tail_products(c)
    threshold = Fraction(threshold)
    product = gaps[0] if gaps else Fraction(1)
    return ExtremeCoordinates(tuple(s[:L]), tuple(t[:L]), tuple(gaps),
                              product, threshold, product > threshold)


def r_infinity_at_extremes(params: HPParams, tail=None) -> tuple[Bracket, Bracket]:
    """Brackets for the limit ratio function at the two extreme states.

    Each per-vertex ratio is nonincreasing in the stage because the coordinate
    part of every map is diagonal, so the deepest value is an upper end. The
    lower end is the deepest value times ``tail`` (a certified lower bound on the
    remaining decay factor) when given, otherwise the deepest value minus the
    largest observed decrement, floored at 0.
    """
    rs = ratios(params)
    last = rs[-1]
    brackets = []
    for v in range(2):
        seq = [r[v] for r in rs]
        if any(b > a for a, b in zip(seq, seq[1:])):
            raise AssertionError("per-vertex ratio increased along the diagram")
        if tail is not None:
            factor = parse_rational(tail)
            if not 0 < factor <= 1:
                raise ValidationError("tail factor must lie in (0, 1]")
            lower = last[v] * factor
        else:
            drop = max(x - last[v] for x in seq)
            lower = max(Fraction(0), last[v] - drop)
        brackets.append(Bracket(lower, last[v]))
    return brackets[0], brackets[1]


@dataclass(frozen=True)
class FlipReport:
    at_tau1: Bracket
    at_tau2: Bracket
    verdict: str


def flip_obstruction(params: HPParams, tail=None) -> FlipReport:
    """An automorphism flipping the state interval must preserve the limit
    ratio function, so disjoint brackets at the two extremes rule it out."""
    b1, b2 = r_infinity_at_extremes(params, tail)
    verdict = "flip obstructed" if b1.disjoint(b2) else "inconclusive"
    return FlipReport(b1, b2, verdict)


def trace_of_projection(params: HPParams, ranks: Pair, stage: int, at: int) -> tuple[Fraction, Fraction]:
    if not 1 <= stage <= at <= params.length + 1:
        raise ValidationError(f"need 1 <= stage <= at <= {params.length + 1}")
    a, b = ranks
    for i in range(stage, at):
        n1, n2, k1, k2, k12, k21 = params.level(i)
        a, b = (n1 + k1) * a + k21 * b, k12 * a + (n2 + k2) * b
    _, ut = sizes(params)
    x, y = ut[at - 1]
    return Fraction(a, x), Fraction(b, y)


def rc_corner(params: HPParams, ranks: Pair, stage: int, at: int) -> tuple[Fraction, int]:
    """Two-term maximum ``max(r(tau_1)/tau_1(p), r(tau_2)/tau_2(p))`` at stage ``at``."""
    t1, t2 = trace_of_projection(params, ranks, stage, at)
    if t1 == 0 or t2 == 0:
        raise InfeasibleError(f"section unbounded at stage {at}; projection is not full")
    r1, r2 = ratios(params)[at - 1]
    a, b = r1 / t1, r2 / t2
    return (a, 0) if a >= b else (b, 1)


def level_table(params: HPParams) -> list[dict]:
    """Per-level rows: compression coefficient, tail gap, and stage data after the level."""
    c = compression_coefficients(params)
    gaps = tail_products(c)
    u, ut = sizes(params)
    rs = ratios(params)
    rows = []
    for i in range(1, params.length + 1):
        rows.append({
            "level": i, "c": c[i - 1], "gap": gaps[i - 1],
            "u1": u[i][0], "u2": u[i][1], "ut1": ut[i][0], "ut2": ut[i][1],
            "r1": rs[i][0], "r2": rs[i][1],
        })
    return rows
