"""Command-line driver: ``python3 -m villadsen <command> ...``.

JSON reports go to stdout; CSV and ``.dat`` tables go to the output directory
(``--out``, else ``$VILLADSEN_OUT``, else ``./villadsen_out``).
Exit codes: 1 parse, 2 validation, 3 infeasible or indeterminate, 4 internal.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import hp, render, uhf
from .compare import compare_invariants, unit_rc_bracket
from .intertwining import IntertwineInstance, find_projection_multiplicities
from .model import (SEED_PRESETS, InfeasibleError, ParseError, SeedSpace,
                    ValidationError, load_system, parse_rational, read_json)
from .ratios import DEFAULT_TOLERANCE, StageAffine, r0_stage, rapid_growth_report
from .traces import CornerProjection, rc_bracket
from .witnesses import build_witness

OUT_ENV = "VILLADSEN_OUT"
EXIT_PARSE, EXIT_VALIDATION, EXIT_INFEASIBLE, EXIT_INTERNAL = 1, 2, 3, 4


class Indeterminate(Exception):
    """A computation finished without a definite answer."""


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    out_dir: Path = Path("villadsen_out")
    tolerance: Fraction = DEFAULT_TOLERANCE
    digits: int = 6
    max_stage: int | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


def _staged(text: str, conv):
    try:
        stage, values = text.split(":", 1)
        return int(stage), tuple(conv(x) for x in values.split(","))
    except ValueError as exc:
        raise ParseError(f"expected <stage>:<v1,v2,...>, got {text!r}") from exc


def _seed(text: str) -> SeedSpace:
    if text in SEED_PRESETS:
        return SEED_PRESETS[text]
    if Path(text).exists():
        return SeedSpace.from_dict(read_json(text))
    raise ParseError(f"unknown seed {text!r}; presets: {', '.join(sorted(SEED_PRESETS))}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./villadsen_out)")
    common.add_argument("--digits", type=int, default=6, help="decimal places in display columns")
    common.add_argument("--tol", default=None, help="rapid-growth tolerance (rational)")
    common.add_argument("--max-stage", type=int, default=None, help="truncate systems to this stage")

    p = _Parser(prog="villadsen", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="load and validate a system file")
    s.add_argument("system")
    s = sub.add_parser("ratios", parents=[common], help="u, u~, r per stage and rapid-growth diagnostics")
    s.add_argument("system")
    s = sub.add_parser("rc", parents=[common], help="radius of comparison of a corner")
    s.add_argument("system")
    s.add_argument("--projection", required=True, help="<stage>:<rank,rank,...>")
    s.add_argument("--at", type=int, required=True, help="evaluation stage")
    s = sub.add_parser("hp", parents=[common], help="two-vertex family report")
    s.add_argument("params")
    s.add_argument("--tail", default=None, help="certified lower bound on the remaining decay")
    s = sub.add_parser("uhf", parents=[common], help="single-vertex system over a stratified seed")
    s.add_argument("--seed", required=True, help="preset name or seed JSON file")
    s.add_argument("--n", required=True)
    s.add_argument("--k", required=True)
    s.add_argument("--tail", default="truncate", help="truncate | certified:<rational>")
    s = sub.add_parser("witness", parents=[common], help="non-comparison witness for h")
    s.add_argument("system")
    s.add_argument("--h", required=True, help="<stage>:<v1,v2,...>")
    s.add_argument("--eps", default=None)
    s = sub.add_parser("intertwine", parents=[common], help="projection multiplicity feasibility")
    s.add_argument("instance")
    s = sub.add_parser("compare", parents=[common], help="compare invariants of two systems")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    out = ns.out or os.environ.get(OUT_ENV) or "villadsen_out"
    tol = parse_rational(ns.tol) if ns.tol is not None else DEFAULT_TOLERANCE
    skip = {"command", "out", "digits", "tol", "max_stage"}
    opts = {k: v for k, v in vars(ns).items() if k not in skip}
    return RunConfig(ns.command, opts, Path(out), tol, ns.digits, ns.max_stage)


def _load(cfg: RunConfig, path: str):
    system = load_system(path)
    if cfg.max_stage is not None and cfg.max_stage < system.n_stages:
        system = system.truncated(cfg.max_stage)
    return system


def _write(cfg: RunConfig, name: str, text: str):
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    (cfg.out_dir / name).write_text(text)


def _cmd_validate(cfg):
    system = _load(cfg, cfg.inputs["system"])
    return {"valid": True, "stages": system.n_stages,
            "vertex_counts": [system.vertex_count(s) for s in range(1, system.n_stages + 1)],
            "u": system.u_by_stage, "u_tilde": system.u_tilde_by_stage}


def _cmd_ratios(cfg):
    system = _load(cfg, cfg.inputs["system"])
    report = rapid_growth_report(system, cfg.tolerance)
    rows = []
    for s in range(1, system.n_stages + 1):
        r = r0_stage(system, s).values
        for j, (a, b) in enumerate(zip(system.u_by_stage[s - 1], system.u_tilde_by_stage[s - 1])):
            rows.append({"stage": s, "vertex": j, "u": a, "u_tilde": b, "r": r[j],
                         "r_decimal": render.decimal_str(r[j], cfg.digits)})
    cols = ["stage", "vertex", "u", "u_tilde", "r", "r_decimal"]
    _write(cfg, "ratios.csv", render.csv_text(rows, cols))
    _write(cfg, "ratios.dat", render.dat_text(rows, ["stage", "vertex", "r"], cfg.digits))
    return report


def _cmd_rc(cfg):
    system = _load(cfg, cfg.inputs["system"])
    stage, ranks = _staged(cfg.inputs["projection"], int)
    return rc_bracket(system, CornerProjection(stage, ranks), cfg.inputs["at"])


def _cmd_hp(cfg):
    params = hp.HPParams.from_dict(read_json(cfg.inputs["params"]))
    tail = cfg.inputs.get("tail")
    table = hp.level_table(params)
    cols = ["level", "c", "gap", "u1", "u2", "ut1", "ut2", "r1", "r2"]
    _write(cfg, "hp_levels.csv", render.csv_text(table, cols))
    _write(cfg, "hp_levels.dat", render.dat_text(table, ["level", "c", "gap", "r1", "r2"], cfg.digits))
    try:
        extremes = hp.extreme_coordinates(params)
    except InfeasibleError:
        extremes = None
    system = hp.to_system(params)
    return {"params": params.to_dict(), "flip": hp.flip_obstruction(params, tail),
            "extreme_coordinates": extremes, "unit_rc": unit_rc_bracket(system),
            "rapid_growth": rapid_growth_report(system, cfg.tolerance).verdict}


def _cmd_uhf(cfg):
    seed = _seed(cfg.inputs["seed"])
    n_seq, k_seq = _int_list(cfg.inputs["n"]), _int_list(cfg.inputs["k"])
    tail = uhf.parse_tail(cfg.inputs["tail"])
    if cfg.max_stage is not None:
        n_seq, k_seq = n_seq[: cfg.max_stage - 1], k_seq[: cfg.max_stage - 1]
    rows = uhf.stage_rows(seed, n_seq, k_seq)
    _write(cfg, "uhf_stages.csv", render.csv_text(rows, ["stage", "profile", "r_s"]))
    _write(cfg, "uhf_stages.dat", render.dat_text(rows, ["stage", "r_s"], cfg.digits))
    last = len(n_seq) + 1
    dirac = {st.label: uhf.r_infty_dirac(n_seq, k_seq, st.locdim, tail) for st in seed.strata}
    return {
        "seed": seed.to_dict(), "n": n_seq, "k": k_seq, "tail": tail.describe(),
        "tail_known": tail.known,
        "dirac_by_stratum": dirac,
        "unit_rc": uhf.rc_corner_uhf(n_seq, k_seq, seed.dim, 1, 1, tail),
        "tail_bound_first_to_last": uhf.tail_bound(n_seq, k_seq, seed.dim, 1, last) if last > 1 else Fraction(0),
        "transitivity": uhf.transitivity_report(seed, n_seq, k_seq),
    }


def _cmd_witness(cfg):
    system = _load(cfg, cfg.inputs["system"])
    stage, values = _staged(cfg.inputs["h"], parse_rational)
    eps = parse_rational(cfg.inputs["eps"]) if cfg.inputs.get("eps") is not None else None
    report = build_witness(system, StageAffine(stage, values), eps)
    if not report.passed:
        raise Indeterminate(report)
    return report


def _cmd_intertwine(cfg):
    inst = IntertwineInstance.from_dict(read_json(cfg.inputs["instance"]))
    result = find_projection_multiplicities(inst)
    if not result.feasible:
        raise Indeterminate(result)
    return result


def _cmd_compare(cfg):
    return compare_invariants(_load(cfg, cfg.inputs["a"]), _load(cfg, cfg.inputs["b"]))


COMMANDS = {
    "validate": _cmd_validate, "ratios": _cmd_ratios, "rc": _cmd_rc, "hp": _cmd_hp,
    "uhf": _cmd_uhf, "witness": _cmd_witness, "intertwine": _cmd_intertwine,
    "compare": _cmd_compare,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        result = COMMANDS[cfg.command](cfg)
    except Indeterminate as exc:
        stdout.write(render.dumps(exc.args[0]))
        return EXIT_INFEASIBLE
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=stderr)
        return EXIT_VALIDATION
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=stderr)
        return EXIT_INFEASIBLE
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INTERNAL
    stdout.write(render.dumps(result))
    return 0


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
