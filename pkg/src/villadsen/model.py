"""System data model: seed spaces, Bratteli levels with evaluation counts,
and the JSON file format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Sequence

from . import intmat
from .intmat import Matrix


class VilladsenError(Exception):
    """Base class for every error raised by this package."""


class ParseError(VilladsenError):
    """Input could not be read or decoded."""


class ValidationError(VilladsenError, ValueError):
    """Input decoded but violates a structural invariant or precondition."""


class InfeasibleError(VilladsenError):
    """A computation has no answer at the available depth."""


def parse_rational(value: Any) -> Fraction:
    """Read an exact rational from an int, a ``"p/q"`` string or a decimal string.

    Floats are converted through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r}")


@dataclass(frozen=True)
class Bracket:
    """Closed rational interval ``[lower, upper]`` known to contain a limit value."""

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty bracket [{self.lower}, {self.upper}]")

    def disjoint(self, other: "Bracket") -> bool:
        return self.upper < other.lower or other.upper < self.lower

    def scaled(self, c) -> "Bracket":
        c = Fraction(c)
        lo, hi = self.lower * c, self.upper * c
        return Bracket(min(lo, hi), max(lo, hi))


@dataclass(frozen=True)
class Stratum:
    label: str
    locdim: int


@dataclass(frozen=True)
class SeedSpace:
    """Symbolic seed space: its dimension and local-dimension strata.

    Only ``dim`` and the stratum local dimensions ever enter a formula.
    """

    dim: int
    strata: tuple[Stratum, ...]
    k_contractible: bool = True
    solid: bool = True
    connected: bool = True

    def __post_init__(self):
        if self.dim < 0:
            raise ValidationError(f"seed dim must be nonnegative, got {self.dim}")
        if not self.strata:
            raise ValidationError("seed must have at least one stratum")
        for s in self.strata:
            if s.locdim < 0:
                raise ValidationError(f"stratum {s.label!r}: negative locdim {s.locdim}")
            if s.locdim > self.dim:
                raise ValidationError(
                    f"stratum {s.label!r}: locdim {s.locdim} > dim {self.dim}")
        if max(s.locdim for s in self.strata) != self.dim:
            raise ValidationError(f"no stratum attains dim {self.dim}")

    @property
    def locdims(self) -> tuple[int, ...]:
        return tuple(s.locdim for s in self.strata)

    def require_positive_dim(self):
        if self.dim <= 0:
            raise ValidationError("seed dimension must satisfy 0 < dim < infinity")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "strata": [{"label": s.label, "locdim": s.locdim} for s in self.strata],
            "k_contractible": self.k_contractible,
            "solid": self.solid,
            "connected": self.connected,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SeedSpace":
        try:
            dim = d["dim"]
            raw = d.get("strata")
            if raw is None:
                raw = [{"label": "X", "locdim": dim}]
            strata = tuple(Stratum(str(s["label"]), _int(s["locdim"], "locdim")) for s in raw)
            return cls(
                dim=_int(dim, "dim"),
                strata=strata,
                k_contractible=bool(d.get("k_contractible", True)),
                solid=bool(d.get("solid", True)),
                connected=bool(d.get("connected", True)),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed seed: {exc!r}") from exc


def _cube(d: int) -> SeedSpace:
    return SeedSpace(d, (Stratum(f"[0,1]^{d}", d),))


def _wedge(*dims: int) -> SeedSpace:
    strata = tuple(Stratum(f"[0,1]^{d}#{i}", d) for i, d in enumerate(dims))
    return SeedSpace(max(dims), strata)


SEED_PRESETS: dict[str, SeedSpace] = {
    "interval": _cube(1),
    "square": _cube(2),
    "cube": _cube(3),
    "interval-vee-square": _wedge(1, 2),
    "interval-vee-square-vee-interval": _wedge(1, 2, 1),
}


def _int(v, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{what} must be an integer, got {v!r}")
    return v


@dataclass(frozen=True)
class LevelData:
    """One connecting map: coordinate multiplicities ``M`` and evaluation counts ``E``."""

    M: Matrix
    E: Matrix

    @property
    def s_prev(self) -> int:
        return len(self.M)

    @property
    def s_next(self) -> int:
        return len(self.M[0]) if self.M else 0

    @property
    def total(self) -> Matrix:
        return intmat.add(self.M, self.E)


@dataclass(frozen=True)
class VilladsenSystem:
    seed: SeedSpace
    u1: tuple[int, ...]
    levels: tuple[LevelData, ...] = field(default=())

    def __post_init__(self):
        _validate(self)

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    @property
    def n_stages(self) -> int:
        return len(self.levels) + 1

    def vertex_count(self, stage: int) -> int:
        self.check_stage(stage)
        return len(self.u1) if stage == 1 else self.levels[stage - 2].s_next

    def check_stage(self, stage: int):
        if not 1 <= stage <= self.n_stages:
            raise ValidationError(f"stage {stage} out of range 1..{self.n_stages}")

    @cached_property
    def u_by_stage(self) -> tuple[tuple[int, ...], ...]:
        out = [self.u1]
        for lv in self.levels:
            out.append(intmat.vec_mat(out[-1], lv.M))
        return tuple(out)

    @cached_property
    def u_tilde_by_stage(self) -> tuple[tuple[int, ...], ...]:
        out = [self.u1]
        for lv in self.levels:
            out.append(intmat.vec_mat(out[-1], lv.total))
        return tuple(out)

    def truncated(self, max_stage: int) -> "VilladsenSystem":
        if max_stage < 1:
            raise ValidationError("max stage must be at least 1")
        return VilladsenSystem(self.seed, self.u1, self.levels[: max_stage - 1])

    def is_uhf(self) -> bool:
        return len(self.u1) == 1 and self.u1 == (1,) and all(lv.s_next == 1 for lv in self.levels)

    def uhf_sequences(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Recover ``(n, k)`` from a single-vertex system."""
        if not self.is_uhf():
            raise ValidationError("system is not single-vertex with u1 = [1]")
        return (tuple(lv.M[0][0] for lv in self.levels),
                tuple(lv.E[0][0] for lv in self.levels))


def _validate(sys: VilladsenSystem):
    if not sys.u1:
        raise ValidationError("u1 must be nonempty")
    for i, x in enumerate(sys.u1):
        if x <= 0:
            raise ValidationError(f"u1[{i}] = {x} is not positive")
    width = len(sys.u1)
    for n, lv in enumerate(sys.levels, start=1):
        for name, mat in (("M", lv.M), ("E", lv.E)):
            if len(mat) != width:
                raise ValidationError(
                    f"level {n}: {name} has {len(mat)} rows, expected {width}")
            if not mat or len({len(r) for r in mat}) != 1 or len(mat[0]) == 0:
                raise ValidationError(f"level {n}: {name} is ragged or empty")
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x < 0:
                        raise ValidationError(f"level {n}: {name}[{i}][{j}] = {x} is negative")
        if intmat.shape(lv.M) != intmat.shape(lv.E):
            raise ValidationError(f"level {n}: M and E shapes differ")
        for j in range(lv.s_next):
            if sum(intmat.column(lv.total, j)) < 1:
                raise ValidationError(
                    f"level {n}: column {j} of M+E is zero (map not unital into summand {j})")
        width = lv.s_next
    for stage, (u, ut) in enumerate(zip(sys.u_by_stage, sys.u_tilde_by_stage), start=1):
        for j, (a, b) in enumerate(zip(u, ut)):
            if not 0 < a <= b:
                raise ValidationError(
                    f"stage {stage}, vertex {j}: need 0 < u <= u~, got u={a}, u~={b}")


def generate_uhf_system(seed: SeedSpace, n_seq: Sequence[int], k_seq: Sequence[int]) -> VilladsenSystem:
    """Single-vertex system with ``M_s = [[n_s]]`` and ``E_s = [[k_s]]``."""
    if len(n_seq) != len(k_seq):
        raise ValidationError(f"n and k lengths differ: {len(n_seq)} vs {len(k_seq)}")
    for s, (n, k) in enumerate(zip(n_seq, k_seq), start=1):
        if n < 1:
            raise ValidationError(f"n_{s} = {n} must be at least 1")
        if k < 0:
            raise ValidationError(f"k_{s} = {k} must be nonnegative")
    levels = tuple(LevelData(((n,),), ((k,),)) for n, k in zip(n_seq, k_seq))
    return VilladsenSystem(seed, (1,), levels)


def system_from_dict(d: dict) -> VilladsenSystem:
    if not isinstance(d, dict):
        raise ParseError("system file must hold a JSON object")
    if "uhf" in d:
        shorthand = d["uhf"]
        try:
            seed = SeedSpace.from_dict(shorthand)
            n = [_int(x, "n") for x in shorthand["n"]]
            k = [_int(x, "k") for x in shorthand["k"]]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed uhf shorthand: {exc!r}") from exc
        return generate_uhf_system(seed, n, k)
    try:
        seed = SeedSpace.from_dict(d["seed"])
        u1 = tuple(_int(x, "u1 entry") for x in d["u1"])
        levels = []
        for lv in d.get("levels", []):
            M = intmat.freeze([[_int(x, "M entry") for x in row] for row in lv["M"]])
            E = intmat.freeze([[_int(x, "E entry") for x in row] for row in lv["E"]])
            levels.append(LevelData(M, E))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed system: {exc!r}") from exc
    return VilladsenSystem(seed, u1, tuple(levels))


def system_to_dict(sys: VilladsenSystem) -> dict:
    return {
        "seed": sys.seed.to_dict(),
        "u1": list(sys.u1),
        "levels": [{"M": [list(r) for r in lv.M], "E": [list(r) for r in lv.E]}
                   for lv in sys.levels],
    }


def serialize(sys: VilladsenSystem) -> str:
    return json.dumps(system_to_dict(sys), sort_keys=True, indent=2) + "\n"


def read_json(path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: {exc}") from exc


def load_system(path) -> VilladsenSystem:
    return system_from_dict(read_json(path))
