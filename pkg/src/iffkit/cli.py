"""Command-line front door composing the whole toolkit.

Subcommands: ``parse`` and ``fmt`` for reading and canonically rewriting
source files; ``check`` for the static analyses (quantifier scoping, level
stratification, warrant, atomicity); ``eval`` for checking a theory against
a finite interpretation; ``cantor``, ``topos``, and ``metastack`` for the
exhaustive verification suites.  Exit codes are a stable contract: 0 for
success, 1 for check or verification failures, 2 for usage, parse, format,
or cap errors.  All output is deterministic for identical inputs and flags.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from .checks import (
    ERROR,
    INFO,
    Diagnostic,
    check_units,
    has_errors,
    render_diagnostic,
    sort_diagnostics,
)
from .finset import canonical_set, verify_topos_laws
from .metastack import (
    CapExceeded,
    build_universe,
    check_grothendieck_analogs,
    encode_level,
    verify_source_chain,
)
from .modelcheck import (
    ModelCheckError,
    check_theory,
    fixed_point_free_witness,
    fixed_points,
    has_fpp,
    load_interpretation,
    negation_map,
    render_valuation,
    render_value,
    verify_cantor,
)
from .syntax import SyntaxIssue, parse_unit, print_canonical, print_unit_canonical

# ===== PART 1: configuration and plumbing =====

TOPOS_SIZE_BUDGET = 4
CANTOR_SIZE_BUDGET = 4


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: the command plus its validated flags."""

    command: str
    files: tuple = ()
    theory: str = ""
    interp: str = ""
    strict_atomic: bool = False
    warrant: bool = False
    output_format: str = "text"
    max_size: int = 0
    levels: int = 0
    atoms: int = 0
    breadth: int = 0


def _fail(message: str) -> int:
    print(message, file=sys.stderr)
    return 2


def _read_file(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _parse_file(path: str):
    return parse_unit(_read_file(path), path)


def _sexp_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_diagnostic_sexp(d: Diagnostic) -> str:
    """One diagnostic as a single machine-readable s-expression."""
    ns = d.namespace if d.namespace else "-"
    return (
        f"(diagnostic {d.severity} {d.code} {_sexp_str(d.file)} "
        f"{d.line} {d.column} {_sexp_str(ns)} {_sexp_str(d.message)})"
    )


# ===== PART 2: source commands =====


def cmd_parse(cfg: RunConfig) -> int:
    """Parse each file and report its canonical form."""
    for path in cfg.files:
        try:
            unit = _parse_file(path)
        except OSError as exc:
            return _fail(f"{path}: {exc}")
        except SyntaxIssue as exc:
            return _fail(f"{path}:{exc}")
        sys.stdout.write(print_unit_canonical(unit))
    return 0


def cmd_fmt(cfg: RunConfig) -> int:
    """Rewrite each file to canonical form (an idempotent operation)."""
    for path in cfg.files:
        try:
            unit = _parse_file(path)
        except OSError as exc:
            return _fail(f"{path}: {exc}")
        except SyntaxIssue as exc:
            return _fail(f"{path}:{exc}")
        Path(path).write_text(print_unit_canonical(unit), encoding="utf-8")
    return 0


def cmd_check(cfg: RunConfig) -> int:
    """Run the full static pipeline and print diagnostics."""
    units = []
    for path in cfg.files:
        try:
            units.append(_parse_file(path))
        except OSError as exc:
            return _fail(f"{path}: {exc}")
        except SyntaxIssue as exc:
            return _fail(f"{path}:{exc}")
    diags = sort_diagnostics(check_units(units, strict_atomic=cfg.strict_atomic))
    shown = [d for d in diags if cfg.warrant or d.severity != INFO]
    renderer = render_diagnostic_sexp if cfg.output_format == "sexp" else render_diagnostic
    for d in shown:
        print(renderer(d))
    errors = sum(1 for d in diags if d.severity == ERROR)
    if cfg.output_format == "text":
        warnings = sum(1 for d in diags if d.severity == "warning")
        print(f"{errors} error(s), {warnings} warning(s)")
    return 1 if errors else 0


# ===== PART 3: evaluation =====


def cmd_eval(cfg: RunConfig) -> int:
    """Evaluate every axiom of the theory in the interpretation."""
    try:
        unit = _parse_file(cfg.theory)
        interp = load_interpretation(_read_file(cfg.interp))
    except OSError as exc:
        return _fail(str(exc))
    except SyntaxIssue as exc:
        return _fail(f"{cfg.theory}:{exc}")
    except ModelCheckError as exc:
        return _fail(f"{cfg.interp}: {exc}")
    try:
        report = check_theory(unit, interp)
    except ModelCheckError as exc:
        return _fail(str(exc))
    held = 0
    for ax, ok, valuation in report:
        verdict = "holds" if ok else "FAILS"
        print(f"{verdict} {unit.path}:{ax.line}:{ax.column} {print_canonical(ax)}")
        if not ok and valuation is not None:
            print(f"  counterexample: {render_valuation(valuation)}")
        held += ok
    print(f"{held}/{len(report)} axioms hold")
    return 0 if held == len(report) else 1


# ===== PART 4: verification suites =====


def cmd_cantor(cfg: RunConfig) -> int:
    """Sweep the no-surjection and fixed-point-property checks by size."""
    if cfg.max_size > CANTOR_SIZE_BUDGET:
        return _fail(
            f"--max-size {cfg.max_size} is above the enumeration "
            f"budget ({CANTOR_SIZE_BUDGET})"
        )
    failures = 0
    for n in range(cfg.max_size + 1):
        x = canonical_set(n)
        ok, offender = verify_cantor(x)
        checked = (2**n) ** n
        if ok:
            print(f"size {n}: no surjection onto the power set ({checked} functions)")
        else:
            failures += 1
            print(f"size {n}: SURJECTION FOUND {render_value(offender.as_value())}")
    for n in range(1, cfg.max_size + 1):
        y = canonical_set(n)
        if has_fpp(y):
            line = f"size {n}: every endofunction has a fixed point"
            if n != 1:
                failures += 1
                line += " (UNEXPECTED)"
        else:
            w = fixed_point_free_witness(y)
            line = (
                f"size {n}: fixed-point-free endofunction "
                f"{render_value(w.as_value())}"
            )
            if n == 1:
                failures += 1
                line += " (UNEXPECTED)"
        print(line)
    if len(fixed_points(negation_map())) == 0:
        print("truth values: negation is fixed-point free")
    else:
        failures += 1
        print("truth values: negation has a fixed point (UNEXPECTED)")
    return 1 if failures else 0


def cmd_topos(cfg: RunConfig) -> int:
    """Run the classifier/exponential law suite up to the given size."""
    if cfg.max_size > TOPOS_SIZE_BUDGET:
        return _fail(
            f"--max-size {cfg.max_size} is above the enumeration "
            f"budget ({TOPOS_SIZE_BUDGET})"
        )
    naturality = min(2, cfg.max_size)
    failures = verify_topos_laws(max_size=cfg.max_size, naturality_size=naturality)
    if not failures:
        print(f"classifier bijection (sizes <= {cfg.max_size}): ok")
        print(f"exponential bijection (sizes <= {cfg.max_size}): ok")
        print(f"classifier naturality (sizes <= {naturality}): ok")
        print(f"exponential naturality (sizes <= {naturality}): ok")
        return 0
    for line in failures:
        print(f"FAILED: {line}")
    return 1


def cmd_metastack(cfg: RunConfig) -> int:
    """Build a stratified universe and run its invariant and closure checks."""
    try:
        u = build_universe(cfg.atoms, cfg.levels, cfg.breadth)
    except (CapExceeded, ValueError) as exc:
        return _fail(str(exc))
    failures = 0
    for k in range(1, u.depth + 1):
        print(f"level {k}: {len(u.level(k))} sets")
    for k in range(1, u.depth + 1):
        enc = encode_level(u, k)
        if u.holds_at(k, enc):
            failures += 1
            print(f"self-membership at level {k}: VIOLATED")
    print(f"self-membership: {'VIOLATED' if failures else 'ok'} (no level contains itself)")
    if u.depth >= 2:
        grow = all(
            set(u.level(k)) < set(u.level(k + 1)) for k in range(1, u.depth)
        )
        if not grow:
            failures += 1
        print(f"growth chain: {'ok' if grow else 'VIOLATED'}")
        ascent_checked = ascent_cut = 0
        for k in range(1, u.depth):
            enc = encode_level(u, k)
            if len(enc.members) <= u.breadth_cap:
                ascent_checked += 1
                if not u.holds_at(k + 1, enc):
                    failures += 1
                    print(f"ascent at level {k}: VIOLATED")
            else:
                ascent_cut += 1
        print(
            f"ascent: {ascent_checked} level(s) verified, "
            f"{ascent_cut} beyond the breadth cap"
        )
    diags = check_grothendieck_analogs(u)
    for d in diags:
        print(render_diagnostic(d))
    closure_errors = sum(1 for d in diags if d.severity == ERROR)
    failures += closure_errors
    notices = len(diags) - closure_errors
    print(
        f"closure rows: {'VIOLATED' if closure_errors else 'ok'} "
        f"({notices} truncation notice(s))"
    )
    if u.depth >= 2:
        try:
            chain = verify_source_chain(u)
            if chain:
                print("source/target chain: ok")
            else:
                failures += 1
                print("source/target chain: VIOLATED")
        except CapExceeded as exc:
            print(f"source/target chain: truncated ({exc})")
    return 1 if failures else 0


# ===== PART 5: argument parsing =====


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iffkit",
        description="Parse, check, evaluate, and verify stratified theories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse files and print canonical forms")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("fmt", help="rewrite files to canonical form in place")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("check", help="run the static checks over files")
    p.add_argument("files", nargs="+")
    p.add_argument("--strict-atomic", action="store_true")
    p.add_argument("--warrant", action="store_true",
                   help="include informational warrant reports")
    p.add_argument("--format", choices=("text", "sexp"), default="text")

    p = sub.add_parser("eval", help="evaluate a theory in an interpretation")
    p.add_argument("--theory", required=True)
    p.add_argument("--interp", required=True)

    p = sub.add_parser("cantor", help="run the no-surjection suite")
    p.add_argument("--max-size", type=int, default=4)

    p = sub.add_parser("topos", help="run the classifier/exponential suite")
    p.add_argument("--max-size", type=int, default=3)

    p = sub.add_parser("metastack", help="build and verify a stratified universe")
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--atoms", type=int, default=2)
    p.add_argument("--breadth", type=int, default=4)
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        files=tuple(getattr(args, "files", ())),
        theory=getattr(args, "theory", ""),
        interp=getattr(args, "interp", ""),
        strict_atomic=getattr(args, "strict_atomic", False),
        warrant=getattr(args, "warrant", False),
        output_format=getattr(args, "format", "text"),
        max_size=getattr(args, "max_size", 0),
        levels=getattr(args, "levels", 0),
        atoms=getattr(args, "atoms", 0),
        breadth=getattr(args, "breadth", 0),
    )


_COMMANDS = {
    "parse": cmd_parse,
    "fmt": cmd_fmt,
    "check": cmd_check,
    "eval": cmd_eval,
    "cantor": cmd_cantor,
    "topos": cmd_topos,
    "metastack": cmd_metastack,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](_config(args))


if __name__ == "__main__":
    sys.exit(main())
