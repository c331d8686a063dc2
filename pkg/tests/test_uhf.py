import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from villadsen import uhf
from villadsen.model import (SEED_PRESETS, ParseError, ValidationError,
                             generate_uhf_system)
from villadsen.ratios import r0_stage

VEE = SEED_PRESETS["interval-vee-square"]
SQUARE = SEED_PRESETS["square"]
VEE3 = SEED_PRESETS["interval-vee-square-vee-interval"]


def test_stage_one_point():
    for st_ in VEE.strata:
        prof = uhf.StratumProfile.constant(VEE, st_.label, 1)
        assert uhf.r_s_on_stratum([], [], 1, prof) == Fraction(st_.locdim, 2)


def test_stratum_examples():
    top, low = VEE.strata[1].label, VEE.strata[0].label
    assert uhf.r_s_on_stratum([2, 2], [1, 1], 3, uhf.StratumProfile.constant(VEE, top, 4)) == Fraction(4, 9)
    assert uhf.r_s_on_stratum([2, 2], [1, 1], 3, uhf.StratumProfile.constant(VEE, low, 4)) == Fraction(2, 9)
    with pytest.raises(ValidationError, match="profile covers"):
        uhf.r_s_on_stratum([2, 2], [1, 1], 3, uhf.StratumProfile.constant(VEE, top, 3))


def test_tail_bound_examples():
    assert uhf.tail_bound([2, 4], [0, 0], 2, 1, 3) == 0
    assert uhf.tail_bound([2, 4], [1, 1], 2, 1, 3) == Fraction(7, 15)
    with pytest.raises(ValidationError):
        uhf.tail_bound([2, 4], [1, 1], 2, 3, 3)


@given(st.lists(st.tuples(st.integers(1, 9), st.integers(0, 9)), min_size=1, max_size=8),
       st.integers(1, 4))
def test_one_step_equals_adjacent_tail(nk, dim):
    n, k = zip(*nk)
    for s in range(1, len(n) + 1):
        assert uhf.one_step_bound(n, k, dim, s) == uhf.tail_bound(n, k, dim, s, s + 1)


def _locdim(seed, labels):
    table = {s.label: s.locdim for s in seed.strata}
    return sum(table[x] for x in labels)


def pullback_gap(seed, n, k, s, t, y, evals):
    """Brute force: the pushed stage-``s`` ratio minus ``r_t`` at the explicit point
    ``y`` of ``X^{N_t}``, with evaluation points ``evals`` in ``X^{N_s}``."""
    N_s = uhf.power(n, s)
    size_s, size_t = uhf.matrix_size(n, k, s), uhf.matrix_size(n, k, t)
    r_s = lambda pt: Fraction(_locdim(seed, pt), 2 * size_s)  # noqa: E731
    blocks = [y[i:i + N_s] for i in range(0, len(y), N_s)]
    assert len(blocks) * size_s + len(evals) * size_s == size_t
    pushed = Fraction(size_s, size_t) * (sum(r_s(b) for b in blocks) + sum(r_s(e) for e in evals))
    return pushed - Fraction(_locdim(seed, y), 2 * size_t)


@pytest.mark.parametrize("seed", [SQUARE, VEE, VEE3])
def test_tail_bound_against_pullback_oracle(seed):
    rng = random.Random(11)
    labels = [x.label for x in seed.strata]
    top = max(seed.strata, key=lambda x: x.locdim).label
    for _ in range(15):
        L = rng.randint(1, 3)
        n = [rng.randint(1, 2) for _ in range(L)]
        k = [rng.randint(0, 2) for _ in range(L)]
        for s in range(1, L + 1):
            for t in range(s + 1, L + 2):
                N_s, N_t = uhf.power(n, s), uhf.power(n, t)
                n_evals = uhf.matrix_size(n, k, t) // uhf.matrix_size(n, k, s) - N_t // N_s
                bound = uhf.tail_bound(n, k, seed.dim, s, t)
                worst = Fraction(0)
                for y in product(labels, repeat=N_t):
                    for e in [rng.choice(labels) for _ in range(3)] + [top]:
                        gap = pullback_gap(seed, n, k, s, t, y, [(e,) * N_s] * n_evals)
                        assert 0 <= gap <= bound
                        worst = max(worst, gap)
                assert worst == bound


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(0, 3)), min_size=1, max_size=4))
def test_profiles_decrease_within_bound(nk):
    n, k = zip(*nk)
    L = len(n)
    for s in range(1, L + 1):
        for t in range(s + 1, L + 2):
            if uhf.power(n, s) > 6:
                continue
            for prof in uhf.enumerate_profiles(VEE, uhf.power(n, s)):
                r_s = uhf.r_s_on_stratum(n, k, s, prof)
                # constant extension: each factor repeated n_s ... n_{t-1} times
                mult = uhf.power(n, t) // uhf.power(n, s)
                ext = uhf.StratumProfile(tuple((a, b, c * mult) for a, b, c in prof.counts))
                diff = r_s - uhf.r_s_on_stratum(n, k, t, ext)
                assert 0 <= diff <= uhf.tail_bound(n, k, VEE.dim, s, t)


def test_additivity():
    n, k = [3, 2], [1, 2]
    N = uhf.power(n, 3)
    a = uhf.StratumProfile.from_counts(VEE3, {VEE3.strata[0].label: 2, VEE3.strata[1].label: 4})
    b = uhf.StratumProfile.from_counts(VEE3, {VEE3.strata[1].label: 3, VEE3.strata[2].label: 3})
    assert a.power == b.power == N
    ra, rb = uhf.r_s_on_stratum(n, k, 3, a), uhf.r_s_on_stratum(n, k, 3, b)
    per_unit = Fraction(1, 2 * uhf.matrix_size(n, k, 3))
    assert ra == per_unit * (2 * 1 + 4 * 2) and rb == per_unit * (3 * 2 + 3 * 1)


@given(st.lists(st.tuples(st.integers(1, 5), st.integers(0, 5)), min_size=0, max_size=5))
def test_consistent_with_generic_ratios(nk):
    n, k = (tuple(x) for x in zip(*nk)) if nk else ((), ())
    s = generate_uhf_system(SQUARE, n, k)
    for stage in range(1, len(n) + 2):
        prof = uhf.StratumProfile.constant(SQUARE, SQUARE.strata[0].label, uhf.power(n, stage))
        assert uhf.r_s_on_stratum(n, k, stage, prof) == r0_stage(s, stage).values[0]


def test_dirac_examples():
    assert uhf.r_infty_dirac([2, 3], [0, 0], 3, uhf.Tail("certified", Fraction(1))) == \
        uhf.Bracket(Fraction(3, 2), Fraction(3, 2))
    b = uhf.r_infty_dirac([2, 3], [0, 0], 3)
    assert b.upper == Fraction(3, 2) and b.lower == 0


@given(st.lists(st.tuples(st.integers(1, 9), st.integers(0, 9)), min_size=1, max_size=8))
def test_two_to_one_ratio(nk):
    n, k = zip(*nk)
    lo, hi = uhf.dirac_values(VEE, n, k)
    assert hi == 2 * lo


def test_certified_tail_narrow_bracket():
    n = [4**i for i in range(1, 7)]
    k = [1] * 6
    # prod_{i>6} 4^i/(4^i+1) >= 1 - sum_{i>6} 4^-i = 1 - 4^-6/3
    tail = uhf.Tail("certified", 1 - Fraction(1, 3 * 4**6))
    b = uhf.r_infty_dirac(n, k, 1, tail)
    expected = Fraction(1, 2)
    for x in n:
        expected *= Fraction(x, x + 1)
    assert b.upper == expected
    assert b.upper - b.lower == expected / (3 * 4**6)


def test_tail_descriptor_parsing():
    assert uhf.parse_tail(None) == uhf.Tail()
    assert uhf.parse_tail("certified:9/10").lower == Fraction(9, 10)
    for bad in ["certified:0", "certified:3/2"]:
        with pytest.raises(ValidationError):
            uhf.parse_tail(bad)
    with pytest.raises(ParseError):
        uhf.parse_tail("guess")


def test_seed_separation_examples():
    rep = uhf.seed_separation(SQUARE, VEE, [2, 2, 2], [1, 1, 1])
    assert rep.verdict == "invariants differ" and rep.max_equal
    assert len(rep.values_a) == 1 and rep.values_b == (rep.values_a[0] / 2, rep.values_a[0])
    assert uhf.seed_separation(VEE, VEE, [2], [1]).verdict == "no separation by this invariant"
    rep = uhf.seed_separation(VEE, VEE3, [3, 5], [2, 1])
    assert rep.verdict == "no separation by this invariant" and rep.values_a == rep.values_b


def test_rc_corner_examples():
    assert uhf.rc_corner_uhf([3, 3], [1, 1], 2, 8, 3).upper == Fraction(9, 8)
    unit = uhf.rc_corner_uhf([3, 3], [1, 1], 2, 1, 1)
    assert unit == uhf.r_infty_dirac([3, 3], [1, 1], 2)
    assert uhf.rc_corner_uhf([3, 3], [1, 1], 2, 4, 3).upper == 2 * uhf.rc_corner_uhf([3, 3], [1, 1], 2, 8, 3).upper
    with pytest.raises(ValidationError):
        uhf.rc_corner_uhf([3, 3], [1, 1], 2, 17, 3)


def test_transitivity_and_rows():
    assert uhf.transitivity_report(VEE, [2], [1])["verdict"] == "not transitive"
    assert uhf.transitivity_report(SQUARE, [2], [1])["verdict"] != "not transitive"
    rows = uhf.stage_rows(VEE, [2], [1])
    assert [(r["stage"], r["profile"]) for r in rows] == [
        (1, f"all:{VEE.strata[0].label}"), (1, f"all:{VEE.strata[1].label}"),
        (2, f"all:{VEE.strata[0].label}"), (2, f"all:{VEE.strata[1].label}")]
    assert rows[-1]["r_s"] == Fraction(4, 6)
