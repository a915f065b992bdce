"""Command-line front end.

Subcommands: ``analyze``, ``witness``, ``classify``, ``delta``, ``equiv``.
Flags may also be set through environment variables prefixed ``SIGNPAT_``
(``SIGNPAT_SAMPLES``, ``SIGNPAT_SEED``, ``SIGNPAT_CAP``, ``SIGNPAT_FORMAT``,
``SIGNPAT_WORKERS``); explicit flags win. Vertices are 1-based in all input
and output.

Exit codes: 0 success, 2 input or configuration error, 3 numerical or
internal failure, 4 census regression.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .checks import CHECKS, cycle_along
from .delta import DeltaReport, delta_verdict
from .engine import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    ClassificationRow,
    ConsistentProven,
    InconsistentProven,
    PatternReport,
    census_mismatches,
    classify_small_tridiagonal,
    find_equivalence,
    verdict,
)
from .errors import CapExceededError, NumericalFailure, PatternParseError, PreconditionError, SignPatError
from .fixtures import EXAMPLES
from .graphs import CompositeCycle
from .pattern import Negate, Permute, SignatureSimilarity, SignPattern, Transpose, parse_patterns, render_pattern
from .witness import WitnessMatrix, calibrate, composite_recipe, simple_recipe

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_REGRESSION = 0, 2, 3, 4
ENV_PREFIX = "SIGNPAT_"
DEFAULT_CAP = 12


@dataclass
class RunConfig:
    command: str
    samples: int
    seed: int
    cap: int
    format: str
    workers: int
    checks: list[str] | None
    timing: bool


class ConfigError(SignPatError):
    pass


def _env(name: str, cast, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {ENV_PREFIX}{name.upper()}: {raw!r}") from exc


def _config(args) -> RunConfig:
    samples = args.samples if args.samples is not None else _env("samples", int, DEFAULT_SAMPLES)
    seed = args.seed if args.seed is not None else _env("seed", int, DEFAULT_SEED)
    cap = args.cap if args.cap is not None else _env("cap", int, DEFAULT_CAP)
    fmt = args.format if args.format is not None else _env("format", str, "table")
    workers = args.workers if args.workers is not None else _env("workers", int, 1)
    if fmt not in ("table", "records"):
        raise ConfigError(f"unknown format {fmt!r}")
    if samples < 0 or cap < 1 or workers < 1:
        raise ConfigError("samples must be >= 0, cap and workers >= 1")
    checks = None
    if getattr(args, "checks", None):
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown check ids: {', '.join(unknown)}; known: {', '.join(CHECKS)}")
    return RunConfig(args.command, samples, seed, cap, fmt, workers, checks, args.timing)


# --------------------------------------------------------------------------
# input


def _read_patterns(args) -> list[tuple[str, SignPattern]]:
    out: list[tuple[str, SignPattern]] = []
    for text in args.pattern or []:
        out.extend(("inline", p) for p in parse_patterns(text))
    for name in args.fixture or []:
        if name not in EXAMPLES:
            raise ConfigError(f"unknown fixture {name!r}; known: {', '.join(EXAMPLES)}")
        out.append((f"fixture:{name}", EXAMPLES[name].pattern))
    for path in args.inputs or []:
        if path == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
        try:
            out.extend((path, p) for p in parse_patterns(text))
        except PatternParseError as exc:
            raise PatternParseError(f"{path}: {exc}") from exc
    if not out:
        raise ConfigError("no input pattern; give a file, '-', --pattern or --fixture")
    return out


# --------------------------------------------------------------------------
# output helpers


class Emitter:
    def __init__(self, cfg: RunConfig, stream=None):
        self.cfg = cfg
        self.stream = stream or sys.stdout

    def header(self, **extra):
        fields = {
            "command": self.cfg.command,
            "seed": self.cfg.seed,
            "samples": self.cfg.samples,
            "cap": self.cfg.cap,
            **extra,
        }
        if self.cfg.format == "records":
            self.record({"type": "header", "tool": "signpat", "version": __version__, **fields})
        else:
            self.line("# signpat " + " ".join(f"{k}={v}" for k, v in fields.items()))

    def record(self, rec: dict):
        self.stream.write(json.dumps(rec) + "\n")

    def line(self, text: str = ""):
        self.stream.write(text + "\n")

    def error(self, source: str, exc: Exception, code: int):
        if self.cfg.format == "records":
            self.record({"type": "error", "source": source, "error": type(exc).__name__, "message": str(exc), "exit_code": code})
        else:
            self.line(f"error [{source}]: {type(exc).__name__}: {exc}")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _fmt_complex(z: complex) -> str:
    if z.imag == 0:
        return _fmt(z.real)
    sign = "+" if z.imag > 0 else "-"
    return f"{_fmt(z.real)}{sign}{_fmt(abs(z.imag))}i"


def _matrix_lines(values: np.ndarray, indent: str) -> list[str]:
    cells = [[_fmt(float(x)) for x in row] for row in values]
    width = max(len(c) for row in cells for c in row)
    return [indent + " ".join(c.rjust(width) for c in row) for row in cells]


def _witness_lines(w: WitnessMatrix, indent: str) -> list[str]:
    out = [f"{indent}frequency {w.frequency}  origin: {w.origin}"]
    if w.epsilon is not None:
        out.append(f"{indent}epsilon {w.epsilon!r}  predicted real count in [{w.predicted[0]}, {w.predicted[1]}]")
    out.extend(_matrix_lines(w.matrix.values, indent + "  "))
    out.append(indent + "eigenvalues: " + ", ".join(_fmt_complex(z) for z in w.eigenvalues))
    return out


def _pattern_text(p: SignPattern) -> str:
    return render_pattern(p).replace("\n", "; ")


def _render_report(em: Emitter, idx: int, source: str, rep: PatternReport):
    em.line(f"pattern {idx} [{source}]: {_pattern_text(rep.pattern)}")
    em.line(f"  structural class: {rep.structural_class}")
    if rep.coefficient_signs is not None:
        em.line(f"  coefficient signs E_1..E_n: {rep.coefficient_signs}")
        em.line(f"  sign rule: {rep.root_count}")
    width = max([len(c.check_id) for c in rep.checks] + [5])
    em.line(f"  {'check'.ljust(width)}  {'role'.ljust(13)}  {'status'.ljust(13)}  rule")
    for c in rep.checks:
        em.line(f"  {c.check_id.ljust(width)}  {c.role.value.ljust(13)}  {c.status.value.ljust(13)}  {c.rule}")
    v = rep.verdict
    if isinstance(v, ConsistentProven):
        em.line(f"  verdict: ConsistentProven frequency ({v.k},{v.n - v.k}) by {', '.join(v.reasons)}")
    elif isinstance(v, InconsistentProven):
        em.line(f"  verdict: InconsistentProven via {v.source}")
        for k, w in enumerate(v.witnesses, 1):
            em.line(f"    witness {k}:")
            for line in _witness_lines(w, "      "):
                em.line(line)
    else:
        em.line("  verdict: Undetermined")
        for key in ("violated", "not_computed"):
            if v.summary.get(key):
                em.line(f"    {key}: {', '.join(v.summary[key])}")
    if rep.sampling is not None:
        hist = "  ".join(f"({a},{b}):{c}" for (a, b), c in sorted(rep.sampling.histogram.items(), reverse=True))
        em.line(f"  sampled frequencies ({rep.sampling.count} draws): {hist}")
        if rep.sampling.min_real_gap is not None:
            em.line(f"  smallest relative gap between real eigenvalues: {rep.sampling.min_real_gap:.3g}")
    for f in rep.calibration_failures:
        em.line(f"  calibration failure: {f}")
    if em.cfg.timing and rep.elapsed is not None:
        em.line(f"  elapsed: {rep.elapsed:.3f} s")


def _exit_for(exc: Exception) -> int:
    if isinstance(exc, (PatternParseError, PreconditionError, ConfigError, CapExceededError)):
        return EXIT_INPUT
    return EXIT_NUMERIC


# --------------------------------------------------------------------------
# subcommands


def cmd_analyze(args, cfg: RunConfig, em: Emitter) -> int:
    pats = _read_patterns(args)
    em.header()
    code = EXIT_OK
    for idx, (source, p) in enumerate(pats, 1):
        try:
            rep = verdict(p, samples=cfg.samples, seed=cfg.seed, cap=cfg.cap, checks=cfg.checks, workers=cfg.workers)
        except SignPatError as exc:
            em.error(source, exc, _exit_for(exc))
            code = max(code, _exit_for(exc))
            continue
        if cfg.format == "records":
            em.record(dict(rep.to_record(timing=cfg.timing), index=idx, source=source))
        else:
            _render_report(em, idx, source, rep)
    return code


def _parse_cycle(text: str, n: int) -> list[int]:
    try:
        verts = [int(x) - 1 for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise ConfigError(f"bad cycle {text!r}; expected comma-separated vertices") from exc
    if not verts or any(not 0 <= v < n for v in verts) or len(set(verts)) != len(verts):
        raise ConfigError(f"bad cycle {text!r} for order {n}")
    return verts


def cmd_witness(args, cfg: RunConfig, em: Emitter) -> int:
    pats = _read_patterns(args)
    if len(pats) != 1:
        raise ConfigError("witness takes exactly one pattern")
    source, p = pats[0]
    if not args.cycle:
        raise ConfigError("give at least one --cycle")
    parts = [cycle_along(p, _parse_cycle(c, p.n)) for c in args.cycle]
    kind = args.kind or ("simple" if len(parts) == 1 else "composite")
    if kind == "simple":
        if len(parts) != 1:
            raise ConfigError("a simple recipe takes exactly one cycle")
        recipe = simple_recipe(parts[0])
    else:
        recipe = composite_recipe(CompositeCycle(tuple(parts)))
    em.header()
    w = calibrate(p, recipe)
    w.reverify()
    if cfg.format == "records":
        em.record(dict(w.to_record(), type="witness", source=source))
    else:
        em.line(f"pattern [{source}]: {_pattern_text(p)}")
        em.line(f"  recipe: {recipe.describe()}")
        for line in _witness_lines(w, "  "):
            em.line(line)
    return EXIT_OK


def _row_lines(row: ClassificationRow) -> str:
    v = row.report.verdict
    if isinstance(v, ConsistentProven):
        detail = f"({v.k},{v.n - v.k}) by {', '.join(v.reasons)}"
    elif isinstance(v, InconsistentProven):
        fr = " vs ".join(str(w.frequency) for w in v.witnesses)
        detail = f"{fr} via {v.source}"
    else:
        detail = "histogram " + " ".join(f"({a},{b}):{c}" for (a, b), c in sorted(row.report.sampling.histogram.items(), reverse=True)) if row.report.sampling else ""
    return f"  {row.word_text.ljust(8)}  {v.kind.ljust(18)}  {detail}"


def cmd_classify(args, cfg: RunConfig, em: Emitter) -> int:
    n = args.order
    if not 2 <= n <= 6:
        raise ConfigError("order must be between 2 and 6")
    samples = cfg.samples if cfg.samples > 0 else DEFAULT_SAMPLES
    check = args.fixture_check if args.fixture_check is not None else n <= 5
    em.header(order=n, fixture_check=check)
    rows = classify_small_tridiagonal(n, samples=samples, seed=cfg.seed, workers=cfg.workers)
    mism = census_mismatches(rows) if check else []
    if cfg.format == "records":
        for row in rows:
            em.record(row.to_record())
        em.record({"type": "census", "order": n, "consistent": sum(r.consistent for r in rows), "words": len(rows), "mismatches": mism})
    else:
        em.line(f"order {n}: {len(rows)} canonical edge words")
        for row in rows:
            em.line(_row_lines(row))
        em.line(f"consistent classes: {sum(r.consistent for r in rows)} of {len(rows)}")
        for m in mism:
            em.line(f"MISMATCH {m}")
    return EXIT_REGRESSION if mism else EXIT_OK


def _render_delta(em: Emitter, idx: int, source: str, rep: DeltaReport):
    em.line(f"pattern {idx} [{source}]: {_pattern_text(rep.pattern)}")
    em.line(f"  singularity: {rep.singularity.value if rep.singularity else 'not computed'}  battery: {rep.battery}")
    width = max([len(c.check_id) for c in rep.conditions] + [9])
    for c in rep.conditions:
        em.line(f"  {c.check_id.ljust(width)}  {c.status.value.ljust(13)}  {c.rule}")
    em.line(f"  outcome: {rep.outcome.value}" + (f" ({rep.evidence})" if rep.evidence else ""))
    if rep.witness is not None:
        for line in _witness_lines(rep.witness, "    "):
            em.line(line)


def cmd_delta(args, cfg: RunConfig, em: Emitter) -> int:
    pats = _read_patterns(args)
    em.header()
    code = EXIT_OK
    for idx, (source, p) in enumerate(pats, 1):
        try:
            rep = delta_verdict(p, samples=cfg.samples, seed=cfg.seed, cap=cfg.cap, workers=cfg.workers)
        except SignPatError as exc:
            em.error(source, exc, _exit_for(exc))
            code = max(code, _exit_for(exc))
            continue
        if cfg.format == "records":
            em.record(dict(rep.to_record(), index=idx, source=source))
        else:
            _render_delta(em, idx, source, rep)
    return code


def _op_text(op) -> str:
    if isinstance(op, Permute):
        return "permute(" + ",".join(str(s + 1) for s in op.sigma) + ")"
    if isinstance(op, SignatureSimilarity):
        return "signature(" + ",".join("+" if d > 0 else "-" for d in op.d) + ")"
    if isinstance(op, Transpose):
        return "transpose"
    if isinstance(op, Negate):
        return "negate"
    return repr(op)


def cmd_equiv(args, cfg: RunConfig, em: Emitter) -> int:
    pats = _read_patterns(args)
    if len(pats) != 2:
        raise ConfigError("equiv takes exactly two patterns")
    (_, p), (_, q) = pats
    em.header()
    ops = find_equivalence(p, q)
    if cfg.format == "records":
        em.record({"type": "equivalence", "equivalent": ops is not None, "operations": [_op_text(o) for o in ops] if ops else None})
    else:
        em.line("equivalent: " + ("yes via " + " then ".join(_op_text(o) for o in ops) if ops else "no"))
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=None, help=f"random members per pattern (default {DEFAULT_SAMPLES})")
    common.add_argument("--seed", type=int, default=None, help=f"sampling seed (default {DEFAULT_SEED})")
    common.add_argument("--cap", type=int, default=None, help=f"largest order for exhaustive enumeration (default {DEFAULT_CAP})")
    common.add_argument("--format", choices=("table", "records"), default=None, help="human table or JSON lines")
    common.add_argument("--workers", type=int, default=None, help="processes for sampling (default 1)")
    common.add_argument("--timing", action="store_true", help="include elapsed times (breaks byte-identical output)")

    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("inputs", nargs="*", help="pattern files; '-' reads stdin; blank lines separate patterns")
    inputs.add_argument("--pattern", action="append", help="inline pattern, rows separated by ';'")
    inputs.add_argument("--fixture", action="append", help="built-in example pattern by name")

    parser = argparse.ArgumentParser(prog="signpat", description="Eigenvalue-frequency analysis of sign patterns.")
    parser.add_argument("--version", action="version", version=f"signpat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common, inputs], help="consistency verdict per pattern")
    a.add_argument("--checks", help="comma-separated check ids to run")

    w = sub.add_parser("witness", parents=[common, inputs], help="build and calibrate a witness matrix")
    w.add_argument("--cycle", action="append", help="directed cycle as comma-separated vertices, e.g. 1,2")
    w.add_argument("--kind", choices=("simple", "composite"), help="unit weights or powers of ten per part")

    c = sub.add_parser("classify", parents=[common], help="census of tridiagonal edge words")
    c.add_argument("order", type=int)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--fixture-check", dest="fixture_check", action="store_true", default=None, help="compare with the tabulated classes (default for n <= 5)")
    g.add_argument("--no-fixture-check", dest="fixture_check", action="store_false")

    sub.add_parser("delta", parents=[common, inputs], help="2-consistency necessary conditions")
    sub.add_parser("equiv", parents=[common, inputs], help="search for an equivalence between two patterns")
    return parser


COMMANDS = {"analyze": cmd_analyze, "witness": cmd_witness, "classify": cmd_classify, "delta": cmd_delta, "equiv": cmd_equiv}


def main(argv=None, stdout=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    out = stdout or sys.stdout
    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    em = Emitter(cfg, out)
    try:
        return COMMANDS[args.command](args, cfg, em)
    except NumericalFailure as exc:
        last = getattr(exc, "last_frequency", None)
        em.error(args.command, exc, EXIT_NUMERIC)
        if last is not None and cfg.format == "table":
            em.line(f"last observed frequency: {last}")
        return EXIT_NUMERIC
    except SignPatError as exc:
        code = _exit_for(exc)
        em.error(args.command, exc, code)
        return code


if __name__ == "__main__":
    sys.exit(main())
