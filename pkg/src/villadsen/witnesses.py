"""Finite-stage non-comparison witnesses.

Given an affine ``h`` that sits strictly below the ratio function somewhere,
assemble the integer data of a pair ``q``, ``p`` with ``tau(q) + h(tau) < tau(p)``
for every trace yet ``q`` not below ``p`` in the Cuntz order: ranks ``d_j``,
the Chern degree of ``p`` over a product of spheres, and the trace bound on any
trivial sub-bundle. Every inequality is stored with exact sides and can be
re-checked independently.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from .model import InfeasibleError, ValidationError, VilladsenSystem
from .ratios import (StageAffine, _compose_or_identity, compute_u,
                     compute_u_tilde, pushforward, r0_stage)
from .uhf import (StratumProfile, _check_sequences, matrix_size,
                  partial_product, power, r_s_on_stratum)

_OPS = {"==": operator.eq, "<": operator.lt, "<=": operator.le, ">": operator.gt, ">=": operator.ge}


class NoWitnessError(InfeasibleError):
    """``h`` is not below the ratio function anywhere at the given stage."""


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: Fraction
    op: str
    rhs: Fraction
    holds: bool = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "lhs", Fraction(self.lhs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))
        if self.holds is None:
            object.__setattr__(self, "holds", self.check())

    def check(self) -> bool:
        return _OPS[self.op](self.lhs, self.rhs)


def _strictly_between(lo: Fraction, hi: Fraction) -> int | None:
    """Smallest integer in the open interval ``(lo, hi)``, or ``None``."""
    d = floor(lo) + 1
    return d if d < hi else None


@dataclass(frozen=True)
class WitnessReport:
    stage_n: int
    stage_k: int
    delta: Fraction
    eps: Fraction
    M_bound: Fraction
    S: tuple[int, ...]
    d: tuple[int, ...]
    q_trace: tuple[Fraction, Fraction]
    witness_vertex: int
    chern_degree: int
    trivial_rank_bound: int
    trivial_trace_bound: Fraction
    inequalities: tuple[Inequality, ...]
    verdict: str

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def revalidate(self) -> bool:
        """Re-check every stored inequality and the verdict derived from them."""
        if any(iq.check() != iq.holds for iq in self.inequalities):
            return False
        return self.passed == all(iq.holds for iq in self.inequalities)


def _require_hypotheses(system: VilladsenSystem):
    seed = system.seed
    seed.require_positive_dim()
    if not seed.solid:
        raise ValidationError("witness construction needs a solid seed space")
    if not seed.connected:
        raise ValidationError("witness construction needs a connected seed space")


def default_eps(delta: Fraction, M: Fraction) -> Fraction:
    """Half the largest ``eps`` with ``2 eps / (delta + 3 eps / 4) < delta / (64 (M + 1))``."""
    c = delta / (64 * (M + 1))
    return c * delta / (2 - Fraction(3, 4) * c) / 2


def _attempt(system: VilladsenSystem, h_n: StageAffine, eps) -> WitnessReport:
    n = h_n.stage
    last = system.n_stages
    r_n = r0_stage(system, n)
    gap = tuple(a - b for a, b in zip(r_n.values, h_n.values))
    delta = max(gap)
    if delta <= 0:
        raise NoWitnessError("no witness exists - h dominates r at this stage")
    M = max(h_n.values)
    eps = default_eps(delta, M) if eps is None else Fraction(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    S = tuple(i for i, g in enumerate(gap) if g <= delta / 4)
    ut_n, u_n = compute_u_tilde(system, n), compute_u(system, n)
    small = delta / (64 * (M + 1))
    ineqs = [Inequality("eps small", 2 * eps / (delta + Fraction(3, 4) * eps), "<", small)]

    d = []
    for j, (h, ut) in enumerate(zip(h_n.values, ut_n)):
        dj = _strictly_between(ut * (h + delta / 8), ut * (h + delta / 4))
        if dj is None:
            raise InfeasibleError(
                f"deepen the diagram: no integer rank fits at stage {n}, vertex {j} "
                f"(u~ = {ut}, need u~ > 8/delta = {8 / delta})")
        d.append(dj)
        ineqs.append(Inequality(f"rank window low [{j}]", Fraction(dj, ut) - h, ">", delta / 8))
        ineqs.append(Inequality(f"rank window high [{j}]", Fraction(dj, ut) - h, "<", delta / 4))
        ineqs.append(Inequality(f"rank below (M+1)u~ [{j}]", dj, "<", (M + 1) * ut))
        if j not in S:
            ineqs.append(Inequality(f"sphere fits [{j}]", 2 * dj, "<", u_n[j] * system.seed.dim))

    report = None
    for k in range(n + 1, last + 1):
        cm = _compose_or_identity(system, n, k)
        ut_k = compute_u_tilde(system, k)
        gap_k = pushforward(system, StageAffine(n, gap), k).values
        jk = max(range(len(gap_k)), key=lambda j: (gap_k[j], -j))
        gamma = Fraction(sum(cm.total[i][jk] * ut_n[i] for i in S), ut_k[jk])
        ev_mass = max(Fraction(sum(cm.eval[i][j] * ut_n[i] for i in range(len(ut_n))), ut_k[j])
                      for j in range(len(ut_k)))
        chern = 2 * sum(cm.phi[i][jk] * d[i] for i in range(len(d)) if i not in S)
        rank = (sum(cm.total[i][jk] * d[i] for i in range(len(d)))
                - sum(cm.phi[i][jk] * d[i] for i in range(len(d)) if i not in S))
        trace = Fraction(rank, ut_k[jk])
        step = [
            Inequality(f"gap kept at witness vertex [k={k}]", gap_k[jk], ">", delta - eps),
            Inequality(f"S-mass small [k={k}]", gamma, "<", small),
            Inequality(f"evaluation mass small [k={k}]", ev_mass, "<", small),
            Inequality(f"trivial trace below q [k={k}]", trace, "<", delta / 32),
        ]
        ineqs.extend(step)
        report = (k, jk, chern, rank, trace)
    if report is None:
        raise InfeasibleError(f"deepen the diagram: no stage beyond {n}")
    k, jk, chern, rank, trace = report
    verdict = "pass" if all(iq.holds for iq in ineqs) else "deepen the diagram"
    return WitnessReport(
        stage_n=n, stage_k=k, delta=delta, eps=eps, M_bound=M, S=S, d=tuple(d),
        q_trace=(delta / 32, delta / 16), witness_vertex=jk, chern_degree=chern,
        trivial_rank_bound=rank, trivial_trace_bound=trace,
        inequalities=tuple(ineqs), verdict=verdict,
    )


def build_witness(system: VilladsenSystem, h: StageAffine, eps=None) -> WitnessReport:
    """Search base stages ``n >= h.stage`` for a witness checked at every deeper stage.

    Returns the first passing report, or the first non-passing one with verdict
    ``"deepen the diagram"`` when no base stage passes.
    """
    _require_hypotheses(system)
    h.check_against(system)
    if any(v < 0 for v in h.values):
        raise ValidationError("h must be nonnegative")
    r_h = r0_stage(system, h.stage)
    if max(a - b for a, b in zip(r_h.values, h.values)) <= 0:
        raise NoWitnessError("no witness exists - h dominates r at this stage")
    first, failure = None, None
    for n in range(h.stage, system.n_stages):
        try:
            rep = _attempt(system, pushforward(system, h, n), eps)
        except NoWitnessError:
            continue
        except InfeasibleError as exc:
            failure = failure or exc
            continue
        if rep.passed:
            return rep
        first = first or rep
    if first is not None:
        return first
    raise failure or InfeasibleError(f"deepen the diagram: no stage beyond {h.stage}")


def verify_witness(system: VilladsenSystem, h: StageAffine, report: WitnessReport) -> bool:
    """Rebuild the witness at the report's base stage and compare every field."""
    if not report.revalidate():
        return False
    try:
        again = _attempt(system, pushforward(system, h, report.stage_n), report.eps)
    except InfeasibleError:
        return False
    return again == report


def trivial_subbundle_trace_bound(system: VilladsenSystem, s: int, t: int,
                                  d_profile, S) -> tuple[Fraction, ...]:
    """Per-vertex normalized trace bound at stage ``t`` for a trivial sub-bundle
    of the stage-``s`` projection with ranks ``d_profile``.

    Summands in ``S`` carry no Chern obstruction and count in full; the others
    contribute only their evaluation part.
    """
    if not s < t:
        raise ValidationError(f"need s < t, got s={s}, t={t}")
    cm = _compose_or_identity(system, s, t)
    d = tuple(d_profile)
    if len(d) != system.vertex_count(s):
        raise ValidationError("rank profile length does not match stage")
    S = set(S)
    ut = compute_u_tilde(system, t)
    out = []
    for j in range(len(ut)):
        tot = sum((cm.total if i in S else cm.eval)[i][j] * d[i] for i in range(len(d)))
        out.append(Fraction(tot, ut[j]))
    return tuple(out)


def uhf_trivial_trace_bound(n_seq, k_seq, s: int, t: int) -> Fraction:
    """``1 - prod_{m=s+1}^{t} n_m / (n_m + k_m)``: trivial-part trace bound from the
    block after level ``s`` to the block after level ``t``."""
    _check_sequences(n_seq, k_seq)
    if not 0 <= s < t <= len(n_seq):
        raise ValidationError(f"need 0 <= s < t <= {len(n_seq)}, got s={s}, t={t}")
    return 1 - partial_product(n_seq, k_seq, t) / partial_product(n_seq, k_seq, s)


def check_gap_function(system: VilladsenSystem, h: StageAffine, eps=None) -> str:
    """Classify ``h`` as ``certified-not-gap``, ``dominates-r-at-truncation`` or
    ``indeterminate``.

    Deepest-stage ratios only bound the limit from above, so domination there is
    consistent with ``h`` being a gap function but does not certify it.
    """
    last = system.n_stages
    h_last = pushforward(system, h, last)
    if all(a >= b for a, b in zip(h_last.values, r0_stage(system, last).values)):
        return "dominates-r-at-truncation"
    try:
        rep = build_witness(system, h, eps)
    except (InfeasibleError, ValidationError):
        return "indeterminate"
    return "certified-not-gap" if rep.passed else "indeterminate"


@dataclass(frozen=True)
class UHFWitness:
    base_stage: int
    target_stage: int
    locdim: int
    sphere_dim: int
    r_s: Fraction
    q_trace: tuple[Fraction, Fraction]
    R_t: int
    trivial_rank_bound: int
    trivial_trace_bound: Fraction
    inequalities: tuple[Inequality, ...]
    verdict: str

    def revalidate(self) -> bool:
        if any(iq.check() != iq.holds for iq in self.inequalities):
            return False
        return (self.verdict == "pass") == all(iq.holds for iq in self.inequalities)


def uhf_witness(n_seq, k_seq, profile: StratumProfile, base_stage: int,
                h_value, delta) -> UHFWitness:
    """Witness arithmetic on a single-vertex system at a point of the given
    stratum profile where ``h`` takes ``h_value``.

    The sphere is the boundary of a ball of odd dimension ``d`` (the local
    dimension, lowered by one if even); the trivial part of the pushed
    projection over the product of spheres is bounded at every deeper stage.
    """
    _check_sequences(n_seq, k_seq)
    h_value, delta = Fraction(h_value), Fraction(delta)
    if delta <= 0:
        raise NoWitnessError("no witness exists - delta must be positive")
    last = len(n_seq) + 1
    if not 1 <= base_stage < last:
        raise InfeasibleError("deepen the diagram: need a stage beyond the base")
    size_s = matrix_size(n_seq, k_seq, base_stage)
    r_s = r_s_on_stratum(n_seq, k_seq, base_stage, profile)
    locdim = profile.locdim
    d = locdim if locdim % 2 else locdim - 1
    if d < 1:
        raise InfeasibleError("point has local dimension 0; no sphere available")
    ineqs = [
        Inequality("h small near the point", h_value, "<", r_s - Fraction(3, 4) * delta),
        Inequality("sphere rank close to r",
                   abs(Fraction(d - 1, 2 * size_s) - r_s), "<", delta / 4),
    ]
    R = rank = trace = None
    for t in range(base_stage + 1, last + 1):
        copies = prod_n = power(n_seq, t) // power(n_seq, base_stage)
        size_t = matrix_size(n_seq, k_seq, t)
        R = (d - 1) * copies // 2 + size_t - size_s * prod_n
        rank = R - (d - 1) * copies // 2
        trace = Fraction(rank, size_t)
        closed = 1 - partial_product(n_seq, k_seq, t - 1) / partial_product(n_seq, k_seq, base_stage - 1)
        ineqs.append(Inequality(f"trace bound closed form [t={t}]", trace, "==", closed))
        ineqs.append(Inequality(f"trivial trace below q [t={t}]", trace, "<", delta / 8))
    verdict = "pass" if all(iq.holds for iq in ineqs) else "deepen the diagram"
    return UHFWitness(base_stage, last, locdim, d, r_s, (delta / 8, delta / 4),
                      R, rank, trace, tuple(ineqs), verdict)
