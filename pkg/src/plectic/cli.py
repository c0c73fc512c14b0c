"""Command-line front end.

Structure files look like::

    vars = 6
    n = 3
    degree_bound = 4
    omega = dx1^dx3^dx5^dx6 + dx2^dx4^dx5^dx6
    cotensor f1 = (x1^2*x3 - x4) dx5^dx6

``#`` starts a comment.  Subcommands:

* ``solve NAME --mode hamilton|constraint`` solves one witness equation for a
  named cotensor (or a literal cotensor expression);
* ``verify SUITE`` runs identity checks on the named cotensors plus
  ``--trials`` random Poisson cotensors.

Exit codes: 0 when everything passed, 1 when a check failed or a witness
does not exist, 2 on input errors.
"""

from __future__ import annotations

import argparse
import logging
import random
import re
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from .graded_algebra import Cotensor
from .homotopy import (
    MAX_ARITY,
    CheckReport,
    check_jacobi,
    check_leibniz_first,
    check_leibniz_second,
    check_leibniz_third,
    check_rogers,
)
from .nplectic import (
    NotPoissonWithinBound,
    NPlecticStructure,
    PoissonCotensor,
    make_poisson,
    random_poisson,
    solve_constraint,
    solve_hamilton,
)
from .pinfty import build_structure_maps, compare_with_homotopy
from .syntax import ParseError, parse_cotensor

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# -- structure files -------------------------------------------------------------


class StructureFileError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = "<string>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.source = source


@dataclass(frozen=True)
class StructureFile:
    vars: int
    n: int
    degree_bound: int
    omega: Cotensor
    cotensors: tuple[tuple[str, Cotensor], ...] = ()

    def structure(self, degree_bound: int | None = None) -> NPlecticStructure:
        bound = self.degree_bound if degree_bound is None else degree_bound
        return NPlecticStructure(self.vars, self.n, self.omega, bound)

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.cotensors]

    def cotensor(self, name: str) -> Cotensor:
        for key, value in self.cotensors:
            if key == name:
                return value
        raise KeyError(name)

    def __str__(self) -> str:
        omega = "" if self.omega.is_zero() else f" {self.omega}"
        lines = [
            f"vars = {self.vars}",
            f"n = {self.n}",
            f"degree_bound = {self.degree_bound}",
            f"omega ={omega}",
        ]
        lines += [f"cotensor {name} = {value}" for name, value in self.cotensors]
        return "\n".join(lines) + "\n"


_LINE = re.compile(
    r"\s*(?:cotensor\s+(?P<name>[A-Za-z_]\w*)|(?P<key>vars|n|degree_bound|omega))\s*=(?P<rhs>.*)$"
)
_INT_KEYS = ("vars", "n", "degree_bound")


def parse_structure_text(text: str, source: str = "<string>") -> StructureFile:
    """Parse a structure file; errors carry 1-based line and column numbers."""

    def fail(msg: str, line: int, col: int):
        raise StructureFileError(msg, line, col, source)

    ints: dict[str, int] = {}
    omega_src: tuple[str, int, int] | None = None
    cot_src: list[tuple[str, str, int, int]] = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last = lineno
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            fail("expected 'vars', 'n', 'degree_bound', 'omega' or 'cotensor NAME' followed by '='", lineno, col)
        rhs, rhs_col = m.group("rhs"), m.start("rhs") + 1
        key = m.group("key")
        if key in _INT_KEYS:
            if key in ints:
                fail(f"duplicate '{key}'", lineno, m.start("key") + 1)
            value = rhs.strip()
            if not re.fullmatch(r"\d+", value):
                fail(f"'{key}' needs a non-negative integer", lineno, rhs_col + len(rhs) - len(rhs.lstrip()))
            ints[key] = int(value)
        elif key == "omega":
            if omega_src is not None:
                fail("duplicate 'omega'", lineno, m.start("key") + 1)
            omega_src = (rhs, lineno, rhs_col)
        else:
            name = m.group("name")
            if any(name == other for other, *_ in cot_src):
                fail(f"duplicate cotensor name '{name}'", lineno, m.start("name") + 1)
            cot_src.append((name, rhs, lineno, rhs_col))
    for key in _INT_KEYS:
        if key not in ints:
            fail(f"missing '{key}'", last + 1, 1)
    if omega_src is None:
        fail("missing 'omega'", last + 1, 1)
    nvars = ints["vars"]
    if nvars < 1:
        fail("'vars' must be positive", last + 1, 1)

    def expr(rhs: str, line: int, col: int, allow_empty: bool) -> Cotensor:
        if not rhs.strip():
            if allow_empty:
                return Cotensor.zero(nvars)
            fail("empty expression", line, col)
        try:
            return parse_cotensor(rhs, nvars)
        except ParseError as exc:
            fail(exc.message, line, col + exc.column - 1)

    omega = expr(*omega_src, allow_empty=True)
    degs = omega.form_degrees()
    if degs and degs != {ints["n"] + 1}:
        fail(f"omega must be a {ints['n'] + 1}-form for n = {ints['n']}, found degrees {sorted(degs)}",
             omega_src[1], omega_src[2])
    cotensors = tuple((name, expr(rhs, line, col, allow_empty=False)) for name, rhs, line, col in cot_src)
    return StructureFile(nvars, ints["n"], ints["degree_bound"], omega, cotensors)


def parse_structure(path: str | Path) -> StructureFile:
    path = Path(path)
    return parse_structure_text(path.read_text(), str(path))


def fixture_path(name: str) -> Path:
    """Path of a shipped structure file, e.g. ``fixture_path("r6_3plectic")``."""
    return Path(str(resources.files("plectic") / "fixtures" / f"{name}.plectic"))


# -- reports ------------------------------------------------------------------------


@dataclass
class ReportLine:
    name: str
    status: str  # pass, fail or unevaluable
    residual_terms: int | None
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    header: list[str] = field(default_factory=list)
    lines: list[ReportLine] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(line.status == "pass" for line in self.lines)

    def add(self, name: str, report: CheckReport, seconds: float, ok: bool | None = None) -> None:
        ok = report.passed if ok is None else ok
        if report.residual is None:
            status, terms = "unevaluable", None
        else:
            status, terms = ("pass" if ok else "fail"), report.residual.term_count()
        self.lines.append(ReportLine(name, status, terms, report.detail, seconds))

    def render(self, machine: bool = False, timing: bool = False) -> str:
        out = []
        if machine:
            for line in self.lines:
                terms = "-" if line.residual_terms is None else str(line.residual_terms)
                fields = [line.name, line.status, terms]
                if timing:
                    fields.append(f"{line.seconds:.3f}")
                out.append("\t".join(fields))
            return "\n".join(out) + ("\n" if out else "")
        out.extend(self.header)
        for line in self.lines:
            if line.residual_terms is None:
                tail = line.detail
            else:
                tail = f"residual terms: {line.residual_terms}"
            text = f"{line.name}: {line.status} ({tail})"
            if timing:
                text += f" [{line.seconds:.3f}s]"
            out.append(text)
        counts = {s: sum(1 for x in self.lines if x.status == s) for s in ("pass", "fail", "unevaluable")}
        if not self.lines:
            out.append("no instances: vacuous pass")
        out.append(f"summary: {counts['pass']} passed, {counts['fail']} failed, "
                   f"{counts['unevaluable']} unevaluable, {len(self.lines)} total")
        return "\n".join(out) + "\n"


# -- verification suites -------------------------------------------------------------


class InputError(ValueError):
    """Bad command-line input; maps to exit code 2."""


DEFAULT_K = {"jacobi": 2, "leibniz1": 1, "leibniz2": 0, "leibniz3": 1, "rogers": 2, "pinfty": 2}
K_RANGE = {
    "jacobi": range(1, MAX_ARITY + 1),
    "leibniz1": range(1, 4),
    "leibniz2": range(0, 3),
    "leibniz3": range(0, 3),
    "rogers": range(2, 3),
    "pinfty": range(1, 4),
}
PINFTY_PROFILES = {
    1: [(1,), (2,), (3,)],
    2: [(1, 1), (1, 2), (1, 3), (2, 2)],
    3: [(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 2, 2)],
}


def _check_k(suite: str, k: int) -> None:
    if k not in K_RANGE[suite]:
        r = K_RANGE[suite]
        raise InputError(f"suite '{suite}' supports k in {r.start}..{r.stop - 1}, got {k}")


def _instances(pool: Sequence[PoissonCotensor], m: int) -> list[tuple[PoissonCotensor, ...]]:
    """One ``m``-tuple per pool element, reading the pool cyclically."""
    return [tuple(pool[(i + j) % len(pool)] for j in range(m)) for i in range(len(pool))] if pool else []


def _suite_checks(suite: str, k: int) -> list[tuple[str, int, Callable[..., CheckReport | tuple]]]:
    """``(label, arity, run)`` triples for one suite."""
    if suite == "jacobi":
        return [(f"jacobi[k={k}]", k, lambda *a: check_jacobi(k, a))]
    if suite == "leibniz1":
        return [(f"leibniz1[k={k}]", k + 2, lambda *a: check_leibniz_first(k, a[:k], a[k:]))]
    if suite == "leibniz2":
        return [(f"leibniz2[k={k}]", k + 4, lambda *a: check_leibniz_second(k, a))]
    if suite == "leibniz3":
        return [(f"leibniz3[k={k}]", k + 3, lambda *a: check_leibniz_third(k, a))]
    if suite == "rogers":
        return [("rogers", 2, lambda *a: check_rogers(*a))]
    checks = []
    for profile in PINFTY_PROFILES[k]:
        def run(*a, profile=profile):
            blocks, start = [], 0
            for p in profile:
                blocks.append(a[start:start + p])
                start += p
            return compare_with_homotopy(build_structure_maps(a[0].structure), profile, blocks)
        checks.append((f"pinfty[p={','.join(map(str, profile))}]", sum(profile), run))
    return checks


def _pool(sf: StructureFile, S: NPlecticStructure, trials: int, seed: int, report: Report) -> list[PoissonCotensor]:
    pool = []
    for name, f in sf.cotensors:
        try:
            pool.append(make_poisson(S, f))
        except NotPoissonWithinBound as exc:
            report.header.append(f"skipped {name}: not Poisson within the bound ({exc.equation} equation)")
    rng = random.Random(seed)
    if trials and S.omega.is_zero():
        report.header.append("trivial structure: no nonzero Poisson cotensors to sample")
        return pool
    for _ in range(trials):
        pool.append(random_poisson(S, rng))
    return pool


def cmd_verify(sf: StructureFile, suite: str, k: int | None, seed: int, trials: int,
               degree_bound: int | None = None) -> Report:
    S = sf.structure(degree_bound)
    suites = list(DEFAULT_K) if suite == "all" else [suite]
    if suite not in DEFAULT_K and suite != "all":
        raise InputError(f"unknown suite '{suite}'")
    report = Report()
    pool = _pool(sf, S, trials, seed, report)
    for name in suites:
        kk = DEFAULT_K[name] if (k is None or suite == "all") else k
        _check_k(name, kk)
        for label, arity, run in _suite_checks(name, kk):
            for i, args in enumerate(_instances(pool, arity)):
                t0 = time.perf_counter()
                out = run(*args)
                dt = time.perf_counter() - t0
                if isinstance(out, CheckReport):
                    report.add(f"{label}#{i}", out, dt)
                else:
                    report.add(f"{label}#{i}", out.structure, dt, ok=out.structure.passed and out.matched)
    return report


def cmd_solve(sf: StructureFile, target: str, mode: str, degree_bound: int | None = None) -> tuple[Report, bool]:
    S = sf.structure(degree_bound)
    if target in sf.names:
        f = sf.cotensor(target)
    else:
        try:
            f = parse_cotensor(target, sf.vars)
        except ParseError as exc:
            raise InputError(f"'{target}' is neither a declared cotensor nor a valid expression ({exc})")
    solver = solve_hamilton if mode == "hamilton" else solve_constraint
    result = solver(S, f)
    report = Report([f"cotensor {target} = {f}", f"mode: {mode}", f"degree bound: {S.degree_bound}"])
    if result.found:
        report.header.append("status: found")
        report.header.append(f"witness: {result.solution}")
    else:
        report.header.append("status: no_solution_within_bound")
    report.header.append(f"kernel basis size: {result.kernel_size()}")
    return report, result.found


# -- entry point -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plectic", description="n-plectic bracket calculator")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver fallbacks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--structure", required=True, help="structure file")
        p.add_argument("--degree-bound", type=int, default=None, help="override the file's degree bound")
        p.add_argument("--machine", action="store_true", help="tab-separated output, one check per line")
        p.add_argument("--timing", action="store_true", help="add per-check timings (output is then not reproducible)")

    solve = sub.add_parser("solve", help="solve a witness equation")
    common(solve)
    solve.add_argument("cotensor", help="declared name or cotensor expression")
    solve.add_argument("--mode", choices=("hamilton", "constraint"), default="hamilton")

    verify = sub.add_parser("verify", help="run identity checks")
    common(verify)
    verify.add_argument("suite", choices=sorted(DEFAULT_K) + ["all"])
    verify.add_argument("--k", type=int, default=None)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--trials", type=int, default=3)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.degree_bound is not None and args.degree_bound < 0:
            raise InputError("--degree-bound must be non-negative")
        sf = parse_structure(args.structure)
        if args.command == "solve":
            report, ok = cmd_solve(sf, args.cotensor, args.mode, args.degree_bound)
            if args.machine:
                text = "\t".join([args.cotensor, args.mode, "found" if ok else "no_solution_within_bound"]) + "\n"
            else:
                text = "\n".join(report.header) + "\n"
            sys.stdout.write(text)
            return EXIT_OK if ok else EXIT_FAIL
        if args.trials < 0:
            raise InputError("--trials must be non-negative")
        report = cmd_verify(sf, args.suite, args.k, args.seed, args.trials, args.degree_bound)
        sys.stdout.write(report.render(args.machine, args.timing))
        return EXIT_OK if report.passed else EXIT_FAIL
    except (InputError, StructureFileError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
