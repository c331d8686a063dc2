"""Finite-stage trace simplices, sections by a projection, and the radius of
comparison of corner algebras."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import intmat
from .model import InfeasibleError, ValidationError, VilladsenSystem
from .ratios import (StageAffine, _compose_or_identity, cauchy_decrements,
                     compute_u_tilde, r0_stage)


@dataclass(frozen=True)
class CornerProjection:
    """A trivial projection at ``stage`` with the given rank in each summand."""

    stage: int
    ranks: tuple[int, ...]

    def check_against(self, system: VilladsenSystem):
        system.check_stage(self.stage)
        ut = compute_u_tilde(system, self.stage)
        if len(self.ranks) != len(ut):
            raise ValidationError(
                f"projection has {len(self.ranks)} ranks, stage {self.stage} has {len(ut)} vertices")
        if any(r < 0 for r in self.ranks) or not any(self.ranks):
            raise ValidationError("ranks must be nonnegative and not all zero")
        for j, (r, size) in enumerate(zip(self.ranks, ut)):
            if r > size:
                raise ValidationError(f"rank {r} exceeds matrix size {size} at vertex {j}")

    def scaled(self, c: int) -> "CornerProjection":
        return CornerProjection(self.stage, tuple(c * r for r in self.ranks))


def unit_projection(system: VilladsenSystem, stage: int) -> CornerProjection:
    return CornerProjection(stage, compute_u_tilde(system, stage))


def trace_of_projection(system: VilladsenSystem, p: CornerProjection, at: int) -> tuple[Fraction, ...]:
    """Value of each extreme stage-``at`` trace on ``p``."""
    p.check_against(system)
    cm = _compose_or_identity(system, p.stage, at)
    ranks_at = intmat.vec_mat(p.ranks, cm.total)
    ut = compute_u_tilde(system, at)
    return tuple(Fraction(a, b) for a, b in zip(ranks_at, ut))


def section_max(r: tuple[Fraction, ...], tau_p: tuple[Fraction, ...]) -> tuple[Fraction, int]:
    """Maximum of ``r`` over the section ``{tau(p) = 1}`` of the simplicial cone.

    The section's vertices are ``tau_j / tau_j(p)``; ties go to the smallest index.
    """
    if any(t <= 0 for t in tau_p):
        raise InfeasibleError("section unbounded: some vertex trace of p vanishes")
    best, arg = None, -1
    for j, (rv, tv) in enumerate(zip(r, tau_p)):
        val = rv / tv
        if best is None or val > best:
            best, arg = val, j
    return best, arg


def rc_corner(system: VilladsenSystem, p: CornerProjection, at: int,
              r: StageAffine | None = None) -> tuple[Fraction, int]:
    """Stage-``at`` surrogate for the radius of comparison of the corner ``p A p``.

    Returns ``(value, argmax_vertex)``.
    """
    tau_p = trace_of_projection(system, p, at)
    r = r0_stage(system, at) if r is None else r
    if r.stage != at:
        raise ValidationError("ratio function must live at the evaluation stage")
    if any(t == 0 for t in tau_p):
        raise InfeasibleError(
            f"section unbounded at stage {at}; deepen the stage or the projection is not full")
    return section_max(r.values, tau_p)


@dataclass(frozen=True)
class RcBracket:
    rc_upper: Fraction
    rc_lower: Fraction
    argmax_vertex: int
    trace_vector: tuple[Fraction, ...]


def rc_bracket(system: VilladsenSystem, p: CornerProjection, at: int) -> RcBracket:
    """Bracket the corner radius of comparison at stage ``at``.

    The upper end uses the stage ratios (which dominate the limit); the lower end
    lowers each ratio by the largest decrement observed so far, floored at 0.
    """
    r = r0_stage(system, at)
    upper, arg = rc_corner(system, p, at, r)
    dec = cauchy_decrements(system, at)
    lowered = StageAffine(at, tuple(max(Fraction(0), a - d) for a, d in zip(r.values, dec)))
    lower, _ = rc_corner(system, p, at, lowered)
    return RcBracket(upper, lower, arg, trace_of_projection(system, p, at))
