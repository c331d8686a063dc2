"""Composed multiplicities, size vectors, half-dimension ratios and the
rapid-growth diagnostics."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import intmat
from .intmat import Matrix
from .model import ValidationError, VilladsenSystem

DEFAULT_TOLERANCE = Fraction(1, 1000)
VANISHING_FRACTION = Fraction(1, 100)


@dataclass(frozen=True)
class StageAffine:
    """An affine function on the stage simplex, stored by its vertex values."""

    stage: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def check_against(self, system: VilladsenSystem):
        system.check_stage(self.stage)
        if len(self.values) != system.vertex_count(self.stage):
            raise ValidationError(
                f"stage {self.stage} has {system.vertex_count(self.stage)} vertices, "
                f"got {len(self.values)} values")

    def __sub__(self, other: "StageAffine") -> "StageAffine":
        if other.stage != self.stage:
            raise ValidationError("cannot subtract functions at different stages")
        return StageAffine(self.stage, tuple(a - b for a, b in zip(self.values, other.values)))


@dataclass(frozen=True)
class ComposedMultiplicities:
    start: int
    end: int
    phi: Matrix
    eval: Matrix
    total: Matrix


@lru_cache(maxsize=4096)
def _compose(system: VilladsenSystem, i: int, j: int) -> ComposedMultiplicities:
    if i == j:
        ident = intmat.identity(system.vertex_count(i))
        zero = tuple(tuple(0 for _ in r) for r in ident)
        return ComposedMultiplicities(i, j, ident, zero, ident)
    prev = _compose(system, i, j - 1)
    lv = system.levels[j - 2]
    phi = intmat.matmul(prev.phi, lv.M)
    total = intmat.matmul(prev.total, lv.total)
    return ComposedMultiplicities(i, j, phi, intmat.sub(total, phi), total)


def compose(system: VilladsenSystem, i: int, j: int) -> ComposedMultiplicities:
    """Multiplicities of the composed map from stage ``i`` to stage ``j``.

    ``total = phi + eval``; rows are stage-``i`` vertices, columns stage-``j``
    vertices, so ``compose(i, k).total == compose(i, j).total @ compose(j, k).total``.
    """
    if not 1 <= i < j <= system.n_stages:
        raise ValidationError(f"need 1 <= i < j <= {system.n_stages}, got i={i}, j={j}")
    return _compose(system, i, j)


def _compose_or_identity(system, i, j):
    if i > j:
        raise ValidationError(f"stage ordering violated: {i} > {j}")
    system.check_stage(i)
    system.check_stage(j)
    return _compose(system, i, j)


def compute_u(system: VilladsenSystem, n: int) -> tuple[int, ...]:
    system.check_stage(n)
    return system.u_by_stage[n - 1]


def compute_u_tilde(system: VilladsenSystem, n: int) -> tuple[int, ...]:
    system.check_stage(n)
    return system.u_tilde_by_stage[n - 1]


def r0_stage(system: VilladsenSystem, n: int) -> StageAffine:
    system.seed.require_positive_dim()
    half = Fraction(system.seed.dim, 2)
    u, ut = compute_u(system, n), compute_u_tilde(system, n)
    return StageAffine(n, tuple(half * a / b for a, b in zip(u, ut)))


def pushforward(system: VilladsenSystem, h: StageAffine, to: int) -> StageAffine:
    """Carry ``h`` from its stage to stage ``to`` along the connecting affine maps."""
    h.check_against(system)
    cm = _compose_or_identity(system, h.stage, to)
    ut_n = compute_u_tilde(system, h.stage)
    ut_m = compute_u_tilde(system, to)
    weighted = [ut_n[i] * h.values[i] for i in range(len(ut_n))]
    out = intmat.vec_mat(weighted, cm.total)
    return StageAffine(to, tuple(Fraction(x) / ut_m[j] for j, x in enumerate(out)))


def constant(system: VilladsenSystem, stage: int, value) -> StageAffine:
    return StageAffine(stage, (Fraction(value),) * system.vertex_count(stage))


def telescoping_difference(system: VilladsenSystem, i: int, j: int) -> StageAffine:
    """Closed form of ``pushforward(r_i, j) - r_j``: (dim/2) [E_ij](u_i) / u~_j."""
    system.seed.require_positive_dim()
    cm = _compose_or_identity(system, i, j)
    half = Fraction(system.seed.dim, 2)
    ev_u = intmat.vec_mat(compute_u(system, i), cm.eval)
    ut = compute_u_tilde(system, j)
    return StageAffine(j, tuple(half * a / b for a, b in zip(ev_u, ut)))


def sup_norm(values) -> Fraction:
    return max((abs(Fraction(v)) for v in values), default=Fraction(0))


def cauchy_quantities(system: VilladsenSystem, i: int, j: int) -> tuple[Fraction, Fraction]:
    """The two uniform-Cauchy quantities for the stage pair ``(i, j)``.

    Returns ``(q_phi, q_tilde)`` where ``q_phi = max_j ([E](u_i))_j / u~_j`` and
    ``q_tilde = max_j ([E](u~_i))_j / ([phi + E](u~_i))_j``.
    """
    cm = _compose_or_identity(system, i, j)
    ut_j = compute_u_tilde(system, j)
    ev_u = intmat.vec_mat(compute_u(system, i), cm.eval)
    ev_ut = intmat.vec_mat(compute_u_tilde(system, i), cm.eval)
    q_phi = max(Fraction(a, b) for a, b in zip(ev_u, ut_j))
    q_tilde = max(Fraction(a, b) for a, b in zip(ev_ut, ut_j))
    return q_phi, q_tilde


def min_ratio(system: VilladsenSystem, upto: int | None = None) -> Fraction:
    """Smallest ratio entry over stages ``1..upto``."""
    upto = system.n_stages if upto is None else upto
    return min(min(r0_stage(system, n).values) for n in range(1, upto + 1))


def cauchy_decrements(system: VilladsenSystem, m: int) -> tuple[Fraction, ...]:
    """Per-vertex largest observed decrement ``max_{i<m} (pushforward(r_i, m) - r_m)_j``."""
    r_m = r0_stage(system, m)
    dec = [Fraction(0)] * len(r_m.values)
    for i in range(1, m):
        diff = pushforward(system, r0_stage(system, i), m) - r_m
        dec = [max(a, b) for a, b in zip(dec, diff.values)]
    return tuple(dec)


@dataclass(frozen=True)
class PairDiagnostics:
    start: int
    end: int
    decrement_sup: Fraction
    monotone: bool
    q_phi: Fraction
    q_tilde: Fraction
    lemma_rhs: Fraction
    lemma_holds: bool


@dataclass(frozen=True)
class RapidGrowthReport:
    last_stage: int
    pairs: tuple[PairDiagnostics, ...]
    delta_min: Fraction
    r_last: tuple[Fraction, ...]
    largest_decrement: Fraction
    tolerance: Fraction
    verdict: str
    warnings: tuple[str, ...] = field(default=())


def rapid_growth_report(system: VilladsenSystem, tolerance=DEFAULT_TOLERANCE) -> RapidGrowthReport:
    """Finite-prefix diagnostics for uniform convergence of the ratio functions.

    The verdict is ``"violated"`` only if pushforwards fail to dominate the
    deepest ratios (a self-test that cannot trigger on valid data),
    ``"consistent-with-rapid-growth"`` if the one-step evaluation share into the
    deepest stage is below ``tolerance``, and ``"inconclusive"`` otherwise.
    """
    if system.n_levels < 1:
        raise ValidationError("rapid-growth diagnostics need at least one level")
    tolerance = Fraction(tolerance)
    last = system.n_stages
    half = Fraction(system.seed.dim, 2)
    r_last = r0_stage(system, last)
    delta = min_ratio(system)
    pairs = []
    for i in range(1, last):
        diff = pushforward(system, r0_stage(system, i), last) - r_last
        q_phi, q_tilde = cauchy_quantities(system, i, last)
        rhs = half / delta * q_phi
        pairs.append(PairDiagnostics(
            start=i, end=last,
            decrement_sup=sup_norm(diff.values),
            monotone=all(v >= 0 for v in diff.values),
            q_phi=q_phi, q_tilde=q_tilde,
            lemma_rhs=rhs, lemma_holds=q_tilde <= rhs,
        ))
    if not all(p.monotone for p in pairs):
        verdict = "violated"
    elif pairs[-1].q_tilde < tolerance:
        verdict = "consistent-with-rapid-growth"
    else:
        verdict = "inconclusive"
    warnings = []
    if min(r_last.values) < VANISHING_FRACTION * half:
        warnings.append("r->0 risk: some deepest-stage ratio is below 1% of dim/2; "
                        "the limit function may vanish somewhere")
    return RapidGrowthReport(
        last_stage=last,
        pairs=tuple(pairs),
        delta_min=delta,
        r_last=r_last.values,
        largest_decrement=max(p.decrement_sup for p in pairs),
        tolerance=tolerance,
        verdict=verdict,
        warnings=tuple(warnings),
    )
