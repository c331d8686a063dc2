"""Side-by-side comparison of computable invariants of two systems."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import Bracket, VilladsenSystem
from .ratios import r0_stage
from .traces import rc_bracket, unit_projection
from .uhf import dirac_values


@dataclass(frozen=True)
class ComparisonReport:
    r_sets: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    r_sets_equal: bool
    rc_brackets: tuple[Bracket, Bracket]
    rc_equal: bool
    rc_disjoint: bool
    dirac_sets: tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None
    dirac_shape_differs: bool
    verdict: str
    summary: str


def unit_rc_bracket(system: VilladsenSystem) -> Bracket:
    b = rc_bracket(system, unit_projection(system, 1), system.n_stages)
    return Bracket(b.rc_lower, b.rc_upper)


def compare_invariants(sys_a: VilladsenSystem, sys_b: VilladsenSystem) -> ComparisonReport:
    """Compare deepest-stage ratio sets, unit rc brackets and, for single-vertex
    inputs, the Dirac-trace value sets of the limit ratio function.

    Only a constant-versus-nonconstant Dirac set or disjoint rc brackets count as
    distinguishing; nothing here ever asserts an isomorphism.
    """
    ra = tuple(sorted(set(r0_stage(sys_a, sys_a.n_stages).values)))
    rb = tuple(sorted(set(r0_stage(sys_b, sys_b.n_stages).values)))
    ba, bb = unit_rc_bracket(sys_a), unit_rc_bracket(sys_b)
    dirac = None
    shape_differs = False
    if sys_a.is_uhf() and sys_b.is_uhf():
        da = dirac_values(sys_a.seed, *sys_a.uhf_sequences())
        db = dirac_values(sys_b.seed, *sys_b.uhf_sequences())
        dirac = (da, db)
        shape_differs = (len(da) == 1) != (len(db) == 1)
    disjoint = ba.disjoint(bb)
    distinguished = shape_differs or disjoint
    parts = ["invariants differ" if distinguished else "invariants agree"]
    parts.append("rc equal" if ba == bb else ("rc differ" if disjoint else "rc brackets overlap"))
    return ComparisonReport(
        r_sets=(ra, rb), r_sets_equal=ra == rb,
        rc_brackets=(ba, bb), rc_equal=ba == bb, rc_disjoint=disjoint,
        dirac_sets=dirac, dirac_shape_differs=shape_differs,
        verdict=("invariants distinguished at truncation" if distinguished
                 else "not distinguished at truncation"),
        summary="; ".join(parts),
    )
