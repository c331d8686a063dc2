"""Generalized comparison radius for single-vertex systems over simplicial
complex seeds, where the ratio function sees the local dimension of points."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import prod
from typing import Mapping, Sequence

from .model import Bracket, ParseError, SeedSpace, ValidationError, parse_rational


def _check_sequences(n_seq: Sequence[int], k_seq: Sequence[int]):
    if len(n_seq) != len(k_seq):
        raise ValidationError(f"n and k lengths differ: {len(n_seq)} vs {len(k_seq)}")
    if any(n < 1 for n in n_seq) or any(k < 0 for k in k_seq):
        raise ValidationError("need n_s >= 1 and k_s >= 0")


def power(n_seq: Sequence[int], s: int) -> int:
    """Number of seed factors at stage ``s``: ``n_1 ... n_{s-1}``."""
    return prod(n_seq[: s - 1])


def matrix_size(n_seq, k_seq, s: int) -> int:
    return prod(n + k for n, k in zip(n_seq[: s - 1], k_seq[: s - 1]))


def partial_product(n_seq, k_seq, m: int) -> Fraction:
    """``P_m = prod_{i <= m} n_i / (n_i + k_i)``; ``P_0 = 1``."""
    out = Fraction(1)
    for n, k in zip(n_seq[:m], k_seq[:m]):
        out *= Fraction(n, n + k)
    return out


@dataclass(frozen=True)
class StratumProfile:
    """Counts of product coordinates lying in each stratum.

    ``counts`` pairs each stratum's ``(label, locdim)`` with how many of the
    ``power`` factors of a point of ``X^power`` sit in it.
    """

    counts: tuple[tuple[str, int, int], ...]

    @classmethod
    def from_counts(cls, seed: SeedSpace, counts: Mapping[str, int]) -> "StratumProfile":
        known = {s.label for s in seed.strata}
        unknown = set(counts) - known
        if unknown:
            raise ValidationError(f"unknown strata: {sorted(unknown)}")
        if any(c < 0 for c in counts.values()):
            raise ValidationError("stratum counts must be nonnegative")
        return cls(tuple((s.label, s.locdim, counts.get(s.label, 0)) for s in seed.strata))

    @classmethod
    def constant(cls, seed: SeedSpace, label: str, power: int) -> "StratumProfile":
        return cls.from_counts(seed, {label: power})

    @property
    def power(self) -> int:
        return sum(c for _, _, c in self.counts)

    @property
    def locdim(self) -> int:
        return sum(d * c for _, d, c in self.counts)

    def label(self) -> str:
        return "+".join(f"{c}x{lab}" for lab, _, c in self.counts if c)


def enumerate_profiles(seed: SeedSpace, power: int) -> list[StratumProfile]:
    """All stratum profiles of ``X^power`` (multisets of per-factor strata)."""
    labels = [s.label for s in seed.strata]
    out = []
    for combo in combinations_with_replacement(labels, power):
        out.append(StratumProfile.from_counts(seed, {lab: combo.count(lab) for lab in labels}))
    return out


def r_s_on_stratum(n_seq, k_seq, s: int, profile: StratumProfile) -> Fraction:
    """Stage-``s`` ratio at a point of the given profile: half its local dimension
    over the stage matrix size."""
    _check_sequences(n_seq, k_seq)
    if not 1 <= s <= len(n_seq) + 1:
        raise ValidationError(f"stage {s} out of range 1..{len(n_seq) + 1}")
    N = power(n_seq, s)
    if profile.power != N:
        raise ValidationError(f"profile covers {profile.power} factors, stage {s} has {N}")
    return Fraction(profile.locdim, 2 * matrix_size(n_seq, k_seq, s))


def tail_bound(n_seq, k_seq, dim: int, s: int, t: int) -> Fraction:
    """Uniform bound on ``|r_s - r_t|``: ``dim/2 * (P_{s-1} - P_{t-1})``."""
    _check_sequences(n_seq, k_seq)
    if not 1 <= s < t <= len(n_seq) + 1:
        raise ValidationError(f"need 1 <= s < t <= {len(n_seq) + 1}, got s={s}, t={t}")
    return Fraction(dim, 2) * (partial_product(n_seq, k_seq, s - 1) - partial_product(n_seq, k_seq, t - 1))


def one_step_bound(n_seq, k_seq, dim: int, s: int) -> Fraction:
    """``dim/2 * k_s * n_1...n_{s-1} / ((n_1+k_1)...(n_s+k_s))``."""
    _check_sequences(n_seq, k_seq)
    if not 1 <= s <= len(n_seq):
        raise ValidationError(f"level {s} out of range")
    return Fraction(dim * k_seq[s - 1] * power(n_seq, s), 2 * matrix_size(n_seq, k_seq, s + 1))


@dataclass(frozen=True)
class Tail:
    """How to treat the infinite product beyond the data.

    ``"truncate"`` declares the tail unknown (lower end 0); ``"certified"``
    carries a user-proved lower bound on ``prod_{i > L} n_i / (n_i + k_i)``.
    """

    kind: str = "truncate"
    lower: Fraction | None = None

    def __post_init__(self):
        if self.kind == "truncate":
            if self.lower is not None:
                raise ValidationError("truncate tail takes no bound")
        elif self.kind == "certified":
            if self.lower is None or not 0 < self.lower <= 1:
                raise ValidationError("certified tail bound must lie in (0, 1]")
        else:
            raise ValidationError(f"unknown tail kind {self.kind!r}")

    @property
    def factor_bracket(self) -> Bracket:
        return Bracket(self.lower if self.kind == "certified" else Fraction(0), Fraction(1))

    @property
    def known(self) -> bool:
        return self.kind == "certified"

    def describe(self) -> str:
        return "truncate" if self.kind == "truncate" else f"certified:{self.lower}"


def parse_tail(text: str | None) -> Tail:
    if text is None or text == "truncate":
        return Tail()
    if text.startswith("certified:"):
        return Tail("certified", parse_rational(text.split(":", 1)[1]))
    raise ParseError(f"tail must be 'truncate' or 'certified:<rational>', got {text!r}")


def r_infty_dirac(n_seq, k_seq, locdim_x: int, tail: Tail = Tail()) -> Bracket:
    """Limit ratio at the Dirac trace of a constant point in a stratum of the
    given per-factor local dimension: ``locdim_x * (1/2) * prod n_i/(n_i+k_i)``."""
    _check_sequences(n_seq, k_seq)
    if locdim_x < 0:
        raise ValidationError("locdim must be nonnegative")
    upper = Fraction(locdim_x, 2) * partial_product(n_seq, k_seq, len(n_seq))
    return tail.factor_bracket.scaled(upper)


def dirac_values(seed: SeedSpace, n_seq, k_seq) -> tuple[Fraction, ...]:
    """Distinct truncated Dirac-trace values, one per stratum local dimension, ascending.

    The truncation factor is common to all strata, so ratios between these
    values are exact at every depth.
    """
    P = partial_product(n_seq, k_seq, len(n_seq))
    return tuple(sorted({Fraction(d, 2) * P for d in seed.locdims}))


@dataclass(frozen=True)
class SeparationReport:
    values_a: tuple[Fraction, ...]
    values_b: tuple[Fraction, ...]
    verdict: str
    max_equal: bool


def seed_separation(seed_a: SeedSpace, seed_b: SeedSpace, n_seq, k_seq) -> SeparationReport:
    """Compare the Dirac value sets of two seeds under the same growth data.

    A constant limit function on one side against a non-constant one on the
    other separates the Cuntz semigroups; equal maxima mean equal radius of
    comparison.
    """
    _check_sequences(n_seq, k_seq)
    va, vb = dirac_values(seed_a, n_seq, k_seq), dirac_values(seed_b, n_seq, k_seq)
    if (len(va) == 1) != (len(vb) == 1):
        verdict = "invariants differ"
    else:
        verdict = "no separation by this invariant"
    return SeparationReport(va, vb, verdict, max(va) == max(vb))


def transitivity_report(seed: SeedSpace, n_seq, k_seq) -> dict:
    """Automorphisms preserve the limit ratio function, so distinct Dirac values
    on extreme traces rule out a transitive action on extreme traces."""
    vals = dirac_values(seed, n_seq, k_seq)
    return {
        "dirac_values": vals,
        "verdict": "not transitive" if len(vals) > 1 else "no obstruction from this invariant",
    }


def rc_corner_uhf(n_seq, k_seq, dim: int, p_rank: int, p_stage: int, tail: Tail = Tail()) -> Bracket:
    """Radius of comparison of the corner cut down by a constant-rank projection.

    ``tau(p)`` is the same for every tracial state, so the supremum over the
    section is attained at Dirac traces of top-dimensional points.
    """
    _check_sequences(n_seq, k_seq)
    if not 1 <= p_stage <= len(n_seq) + 1:
        raise ValidationError(f"projection stage {p_stage} out of range")
    size = matrix_size(n_seq, k_seq, p_stage)
    if not 0 < p_rank <= size:
        raise ValidationError(f"rank {p_rank} must lie in 1..{size}")
    tau_p = Fraction(p_rank, size)
    return r_infty_dirac(n_seq, k_seq, dim, tail).scaled(1 / tau_p)


def stage_rows(seed: SeedSpace, n_seq, k_seq) -> list[dict]:
    """``r_s`` at constant points of each stratum for every stage."""
    rows = []
    for s in range(1, len(n_seq) + 2):
        N = power(n_seq, s)
        for st in seed.strata:
            prof = StratumProfile.constant(seed, st.label, N)
            rows.append({"stage": s, "profile": f"all:{st.label}",
                         "r_s": r_s_on_stratum(n_seq, k_seq, s, prof)})
    return rows
