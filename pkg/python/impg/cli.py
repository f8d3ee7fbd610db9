"""Command-line driver.

Results go to stdout and diagnostics to stderr. Exit status is 0 on
success, 1 for syntax errors, diagnostics and compile failures, 2 for
runtime errors and 3 for usage errors.
"""

from __future__ import annotations

import dataclasses
import logging
import sys
from typing import Optional, Sequence

import click

from . import __version__, corpus
from .callnf import as_call, normalize_def
from .code import code_size, dump_code
from .compiler import compile_program
from .config import Settings
from .errors import CompileError, ConfigError, ExecutionError, ImpError, ImpSyntaxError
from .forest import check_data, format_forest
from .objects import flatten
from .stdlib import get_library
from .syntax import Program, Step, format_obj, parse_data, parse_program, print_program
from .typecheck import tc_program
from .vm import run_arrow

logger = logging.getLogger(__name__)

EXIT_FAILED, EXIT_RUNTIME, EXIT_USAGE = 1, 2, 3


def _fail(ctx: click.Context, message: str, code: int = EXIT_FAILED) -> None:
    click.echo(message, err=True)
    ctx.exit(code)


def _settings(ctx: click.Context, **overrides) -> Settings:
    try:
        return Settings.from_env().replace(**overrides)
    except ConfigError as exc:
        _fail(ctx, f"error: {exc}", EXIT_USAGE)


def _load(ctx: click.Context, path: str) -> Program:
    with open(path, encoding="ascii", errors="replace") as handle:
        text = handle.read()
    try:
        return parse_program(text)
    except ImpSyntaxError as exc:
        _fail(ctx, f"{path}: {exc}")


def _compile(ctx: click.Context, path: str, program: Program, settings: Settings):
    try:
        return compile_program(program, exhaustive=settings.exhaustive, optimize=settings.optimize)
    except CompileError as exc:
        for diagnostic in tc_program(program, exhaustive=settings.exhaustive):
            click.echo(diagnostic.render(path), err=True)
        _fail(ctx, f"{path}: {exc}")


@click.group()
@click.version_option(__version__, prog_name="impg")
@click.option("-v", "--verbose", count=True, help="Log progress (-v) or every decision (-vv) to stderr.")
def cli(verbose: int) -> None:
    """Check, compile, run and normalize IMP(G) programs."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--exhaustive", is_flag=True, default=None, help="Also report ambiguous steps.")
@click.pass_context
def check(ctx: click.Context, path: str, exhaustive: Optional[bool]) -> None:
    """Type-check a program and print its diagnostics."""
    settings = _settings(ctx, exhaustive=exhaustive)
    diagnostics = tc_program(_load(ctx, path), exhaustive=settings.exhaustive)
    for diagnostic in diagnostics:
        click.echo(diagnostic.render(), err=True)
    ctx.exit(EXIT_FAILED if diagnostics else 0)


@cli.command(name="compile")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--no-opt", is_flag=True, help="Skip the peephole optimizer.")
@click.option("--dump", is_flag=True, help="Print the code of every definition.")
@click.option("--exhaustive", is_flag=True, default=None, help="Fail on ambiguous steps.")
@click.pass_context
def compile_cmd(ctx: click.Context, path: str, no_opt: bool, dump: bool, exhaustive: Optional[bool]) -> None:
    """Compile a program and summarize or dump its code."""
    settings = _settings(ctx, exhaustive=exhaustive, optimize=False if no_opt else None)
    compiled = _compile(ctx, path, _load(ctx, path), settings)
    for d in compiled.defs:
        click.echo(f"{d.name}: {format_obj(d.dom)} -> {format_obj(d.cod)}  [{code_size(d.code)} instructions]")
        if dump:
            click.echo(f"    {dump_code(d.code)}")


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--arrow", "name", required=True, help="Definition to run.")
@click.option("--data", "literal", required=True, help="Input forest literal, e.g. '5' or '<1, 3>'.")
@click.option("--budget", type=click.IntRange(min=0), default=None, help="Maximum loop-body applications.")
@click.option("--no-opt", is_flag=True, help="Run unoptimized code.")
@click.option("--trace", is_flag=True, default=None, help="Log every machine rule at DEBUG level.")
@click.option("--strict", is_flag=True, default=None, help="Check the input against the definition's domain.")
@click.pass_context
def run(
    ctx: click.Context,
    path: str,
    name: str,
    literal: str,
    budget: Optional[int],
    no_opt: bool,
    trace: Optional[bool],
    strict: Optional[bool],
) -> None:
    """Run one definition on an input forest and print the result."""
    settings = _settings(
        ctx, budget=budget, optimize=False if no_opt else None, trace=trace, strict_data=strict
    )
    program = _load(ctx, path)
    definition = program.find_def(name)
    if definition is None:
        _fail(ctx, f"{path}: no definition named {name}")
    try:
        d = parse_data(literal)
    except ImpSyntaxError as exc:
        _fail(ctx, f"data: {exc}")
    if settings.strict_data and not check_data(d, flatten(definition.dom), _datum_check):
        _fail(ctx, f"data {literal!r} is not an element of {format_obj(definition.dom)}")
    if settings.trace:
        logging.getLogger("impg.vm").setLevel(logging.DEBUG)
    try:
        result = run_arrow(
            name, d, program, settings.budget,
            optimize=settings.optimize, exhaustive=settings.exhaustive, trace=settings.trace,
        )
    except ExecutionError as exc:
        _fail(ctx, f"runtime error: {exc}", EXIT_RUNTIME)
    if isinstance(result, list):
        for diagnostic in result:
            click.echo(diagnostic.render(path), err=True)
        _fail(ctx, f"{path}: {name} cannot be compiled")
    click.echo(format_forest(result))


def _datum_check(obj: str, datum) -> bool:
    return get_library("nat").datum_check(obj, datum)


@cli.command(name="normalize")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--arrow", "name", required=True, help="Definition to rewrite.")
@click.pass_context
def normalize_cmd(ctx: click.Context, path: str, name: str) -> None:
    """Print the program with one definition rewritten as a single call."""
    program = _load(ctx, path)
    compiled = _compile(ctx, path, program, _settings(ctx))
    if compiled.find(name) is None:
        _fail(ctx, f"{path}: no definition named {name}")
    try:
        cf = normalize_def(name, compiled)
    except ImpError as exc:
        _fail(ctx, f"{path}: {exc}")
    defs = tuple(
        dataclasses.replace(d, steps=(Step(as_call(cf), d.cod),)) if d.name == name else d for d in program.defs
    )
    click.echo(print_program(dataclasses.replace(program, defs=defs)), nl=False)


@cli.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def fmt(ctx: click.Context, path: str) -> None:
    """Pretty-print a program."""
    click.echo(print_program(_load(ctx, path)), nl=False)


@cli.command(name="corpus")
@click.argument("name", required=False)
@click.pass_context
def corpus_cmd(ctx: click.Context, name: Optional[str]) -> None:
    """List the shipped example programs, or print one."""
    if name is None:
        for entry in corpus.names():
            click.echo(entry)
        return
    try:
        click.echo(corpus.source(name), nl=False)
    except KeyError as exc:
        _fail(ctx, str(exc.args[0]), EXIT_USAGE)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the ``impg`` script; returns the exit status."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="impg", standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(main())
