"""Random system generators and independent oracles shared by the test modules.

The oracles use the column-vector convention (matrices act on the left, rows
indexed by target) so that they share no code path with the package.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from hypothesis import strategies as st

from villadsen.model import LevelData, SeedSpace, Stratum, VilladsenSystem

SQUARE = SeedSpace(2, (Stratum("square", 2),))


def seed_of_dim(dim: int) -> SeedSpace:
    return SeedSpace(dim, (Stratum("X", dim),))


def random_system(rng: random.Random, max_vertices=4, max_levels=6, max_entry=9,
                  dim=None) -> VilladsenSystem:
    """Random valid system; retries until no column of M+E is zero."""
    dim = dim or rng.randint(1, 4)
    width = rng.randint(1, max_vertices)
    u1 = tuple(rng.randint(1, max_entry) for _ in range(width))
    levels = []
    for _ in range(rng.randint(1, max_levels)):
        nxt = rng.randint(1, max_vertices)
        while True:
            M = tuple(tuple(rng.randint(0, max_entry) if rng.random() < 0.7 else 0
                            for _ in range(nxt)) for _ in range(width))
            E = tuple(tuple(rng.randint(0, max_entry) if rng.random() < 0.5 else 0
                            for _ in range(nxt)) for _ in range(width))
            # u must stay positive, so every column needs some coordinate part
            if all(any(M[i][j] for i in range(width)) for j in range(nxt)):
                break
        levels.append(LevelData(M, E))
        width = nxt
    return VilladsenSystem(seed_of_dim(dim), u1, tuple(levels))


@st.composite
def systems(draw, max_vertices=4, max_levels=6, max_entry=9):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_system(random.Random(seed), max_vertices, max_levels, max_entry)


# ---- oracles -------------------------------------------------------------

def transpose(m):
    return [list(col) for col in zip(*m)]


def mat_apply(m_cols, v):
    """``m_cols`` is target-by-source; returns ``m_cols @ v``."""
    return [sum(a * b for a, b in zip(row, v)) for row in m_cols]


def oracle_sizes(system: VilladsenSystem):
    """``u_n``, ``u~_n`` via target-by-source matrix-vector products."""
    u, ut = [list(system.u1)], [list(system.u1)]
    for lv in system.levels:
        Mt = transpose(lv.M)
        Tt = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(Mt, transpose(lv.E))]
        u.append(mat_apply(Mt, u[-1]))
        ut.append(mat_apply(Tt, ut[-1]))
    return u, ut


def oracle_product(system: VilladsenSystem, i: int, j: int):
    """Target-by-source total multiplicity of the composed map, built left to right."""
    n = len(system.u1) if i == 1 else system.levels[i - 2].s_next
    acc = [[int(a == b) for b in range(n)] for a in range(n)]
    for lv in system.levels[i - 1: j - 1]:
        T = transpose([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(lv.M, lv.E)])
        acc = [[sum(T[r][k] * acc[k][c] for k in range(len(acc))) for c in range(len(acc[0]))]
               for r in range(len(T))]
    return acc


def grid_points(s: int, step: Fraction):
    """Barycentric grid on the (s-1)-simplex with the given step."""
    N = int(1 / step)
    for combo in product(range(N + 1), repeat=s - 1):
        if sum(combo) <= N:
            yield tuple(Fraction(c, N) for c in combo) + (Fraction(N - sum(combo), N),)


def grid_rc(r, tau_p, step=Fraction(1, 64)) -> Fraction:
    """Maximum of ``lambda . r / lambda . tau_p`` over a grid of the stage simplex,
    i.e. of ``r`` over the section ``{tau(p) = 1}``."""
    best = None
    for lam in grid_points(len(r), step):
        den = sum(a * b for a, b in zip(lam, tau_p))
        val = sum(a * b for a, b in zip(lam, r)) / den
        best = val if best is None or val > best else best
    return best
