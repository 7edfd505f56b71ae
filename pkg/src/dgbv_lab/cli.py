from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import typer

from . import __version__
from .config import ConfigError, EngineSettings, find_settings, load_settings
from .errors import DgbvError, LinearAlgebraError, ModelFileError, PreconditionError
from .frobenius import frobenius_report
from .hodge import check_kahler_identities, hard_lefschetz_check
from .modelfile import dump_model, dump_solution, load_model, parse_class_spec, parse_solution
from .models.library import BundledModel, list_models, load_bundled
from .pipeline import run_checks
from .report import (
    RunReport,
    Section,
    comparison_section,
    error_section,
    frobenius_section,
    kahler_section,
    lefschetz_section,
    obstruction_section,
    solution_section,
)
from .solver import MODES, MCSolution, ObstructionReport, solve, verify_mc
from .templates import GRAMMAR_HELP, MODEL_TEMPLATE, SETTINGS_TEMPLATE

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_OBSTRUCTED = 2
EXIT_INPUT = 3

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

app = typer.Typer(help="dGBV Lab: exact dGBV algebras, Maurer-Cartan solutions and Frobenius manifolds")
models_app = typer.Typer(help="Work with bundled models")
config_app = typer.Typer(help="Inspect engine settings")

app.add_typer(models_app, name="models")
app.add_typer(config_app, name="config")

MODEL_ARGUMENT = typer.Argument(..., help="Model file path or bundled model name.")
FORMAT_OPTION = typer.Option(None, "--format", help="Report format: text or machine.", show_default=False)
ORDER_OPTION = typer.Option(None, "--order", min=1, help="Truncation order N.", show_default=False)


@app.callback()
def main(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", help="Path to the dgbv_lab.yml file."),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress at DEBUG level."),
) -> None:
    """Load settings and configure logging before any command runs."""

    settings = _settings_or_exit(config)
    logging.basicConfig(level="DEBUG" if verbose else settings.log_level, format=LOG_FORMAT)
    ctx.obj = settings


@app.command()
def version() -> None:
    """Print the installed dGBV Lab version."""

    typer.echo(__version__)


@app.command()
def init(
    path: Path = typer.Option(Path("model.yml"), help="Where to write the starter model file."),
    force: bool = typer.Option(False, "--force", help="Overwrite an existing file if present."),
) -> None:
    """Write a starter model file."""

    if path.exists() and not force:
        typer.echo(f"Model file already exists at {path}. Use --force to overwrite.")
        raise typer.Exit(code=EXIT_FAILED)

    path.write_text(MODEL_TEMPLATE.strip() + "\n", encoding="utf-8")
    typer.echo(f"Created starter model at {path}")


@app.command()
def check(
    ctx: typer.Context,
    model: str = MODEL_ARGUMENT,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[Path] = typer.Option(None, "--output", help="Also write the report to this path."),
) -> None:
    """Verify axioms, the integral and the image/kernel conditions; exit 1 on any failure."""

    bundled = _load_model_or_exit(model)
    result = run_checks(bundled)
    report = RunReport(model=bundled.name, command="check", sections=result.sections)
    report.exit_code = EXIT_OK if report.ok else EXIT_FAILED
    _finish(ctx, report, output_format, output)


@app.command("solve")
def solve_command(
    ctx: typer.Context,
    model: str = MODEL_ARGUMENT,
    order: Optional[int] = ORDER_OPTION,
    mode: Optional[str] = typer.Option(None, "--mode", help="analytic or normalized.", show_default=False),
    force: bool = typer.Option(False, "--force", help="Solve even when the checks fail."),
    output: Optional[Path] = typer.Option(None, "--output", help="Write the solution document to this path."),
    output_format: Optional[str] = FORMAT_OPTION,
) -> None:
    """Solve the Maurer-Cartan equation order by order and dump the solution."""

    settings = _settings(ctx)
    mode = mode or settings.mode
    if mode not in MODES:
        typer.echo(f"Error: unknown mode '{mode}', expected one of {', '.join(MODES)}")
        raise typer.Exit(code=EXIT_INPUT)
    bundled = _load_model_or_exit(model)
    report = RunReport(model=bundled.name, command="solve")
    if not force:
        _require_checks(ctx, bundled, report, output_format)

    result = _solve_or_exit(ctx, bundled, report, order or settings.order, mode, output_format)
    algebra = bundled.dgbv
    report.sections.append(solution_section(result, verify_mc(result, algebra)))
    text = dump_solution(result, bundled.name)
    report.sections.append(_round_trip_section(result, text, bundled))
    if output is not None:
        _write_or_exit(output, text)
        typer.echo(f"Wrote solution to {output}")
    report.exit_code = EXIT_OK if report.ok else EXIT_FAILED
    _finish(ctx, report, output_format, None)


@app.command()
def frobenius(
    ctx: typer.Context,
    model: str = MODEL_ARGUMENT,
    order: Optional[int] = ORDER_OPTION,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[Path] = typer.Option(None, "--output", help="Also write the report to this path."),
) -> None:
    """Extract the metric and product tensor and check the Frobenius properties."""

    settings = _settings(ctx)
    bundled = _load_model_or_exit(model)
    report = RunReport(model=bundled.name, command="frobenius")
    result = _solve_or_exit(ctx, bundled, report, order or settings.order, settings.mode, output_format)
    try:
        section = frobenius_section(frobenius_report(bundled.dgbv, result))
    except LinearAlgebraError as exc:
        section = error_section("frobenius", str(exc))
    report.sections.append(section)
    report.exit_code = EXIT_OK if report.ok else EXIT_FAILED
    _finish(ctx, report, output_format, output)


@app.command()
def compare(
    ctx: typer.Context,
    model: str = MODEL_ARGUMENT,
    order: Optional[int] = ORDER_OPTION,
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[Path] = typer.Option(None, "--output", help="Also write the report to this path."),
) -> None:
    """Compare the de Rham and Dolbeault Frobenius structures of a bigraded model."""

    from .models.comparison import compare_structures

    settings = _settings(ctx)
    bundled = _load_model_or_exit(model)
    report = RunReport(model=bundled.name, command="compare")
    if bundled.bigraded is None:
        report.sections.append(error_section("comparison", "model is not bigraded"))
        report.exit_code = EXIT_FAILED
        _finish(ctx, report, output_format, output)
    kahler = check_kahler_identities(bundled.bigraded)
    report.sections.append(kahler_section(kahler))
    if not kahler.ok:
        report.exit_code = EXIT_FAILED
        _finish(ctx, report, output_format, output)
    try:
        comparison = compare_structures(bundled.bigraded, order or settings.order)
    except PreconditionError as exc:
        report.sections.append(error_section("comparison", str(exc)))
        report.exit_code = EXIT_OBSTRUCTED
        _finish(ctx, report, output_format, output)
    report.sections.append(comparison_section(comparison))
    report.exit_code = EXIT_OK if report.ok else EXIT_FAILED
    _finish(ctx, report, output_format, output)


@app.command()
def lefschetz(
    ctx: typer.Context,
    model: str = MODEL_ARGUMENT,
    omega: Optional[str] = typer.Option(
        None, "--omega", help='Class spec such as "e1^e3, e2^e4=-1/2"; defaults to the model\'s own.', show_default=False
    ),
    output_format: Optional[str] = FORMAT_OPTION,
    output: Optional[Path] = typer.Option(None, "--output", help="Also write the report to this path."),
) -> None:
    """Tabulate the ranks of L^k: H^{n-k} -> H^{n+k} on de Rham cohomology."""

    settings = _settings(ctx)
    bundled = _load_model_or_exit(model)
    report = RunReport(model=bundled.name, command="lefschetz")
    spec = omega or settings.lefschetz_omega
    try:
        omega_class = parse_class_spec(spec, bundled.dgbv.basis) if spec else bundled.omega
    except ModelFileError as exc:
        typer.echo(f"Error: {exc}")
        raise typer.Exit(code=EXIT_INPUT)
    if omega_class is None:
        report.sections.append(error_section("lefschetz", "model has no symplectic class; pass --omega"))
    else:
        differential = bundled.bigraded.d if bundled.bigraded is not None else None
        try:
            report.sections.append(lefschetz_section(hard_lefschetz_check(bundled.dgbv, omega_class, differential)))
        except PreconditionError as exc:
            report.sections.append(error_section("lefschetz", str(exc)))
    report.exit_code = EXIT_OK if report.ok else EXIT_FAILED
    _finish(ctx, report, output_format, output)


@models_app.command("list")
def list_bundled() -> None:
    """List the bundled models."""

    for name in list_models():
        typer.echo(f"- {name}: {load_bundled(name).description}")


@models_app.command("dump")
def dump_bundled(
    name: str = typer.Argument(..., help="Bundled model name."),
    output: Optional[Path] = typer.Option(None, "--output", help="Write the model file here instead of stdout."),
) -> None:
    """Write a bundled model in the model file format."""

    text = dump_model(_load_model_or_exit(name))
    if output is None:
        typer.echo(text, nl=False)
        return
    _write_or_exit(output, text)
    typer.echo(f"Wrote {name} to {output}")


@models_app.command("grammar")
def show_grammar() -> None:
    """Print the model file grammar."""

    typer.echo(GRAMMAR_HELP.strip())


@config_app.command("path")
def show_path() -> None:
    """Show the resolved settings path."""

    path = find_settings()
    typer.echo(str(path) if path is not None else "No dgbv_lab.yml found; using defaults")


@config_app.command("validate")
def validate(config: Optional[Path] = typer.Option(None, "--config", help="Path to the dgbv_lab.yml file.")) -> None:
    """Validate the settings file and exit non-zero on errors."""

    _settings_or_exit(config)
    typer.echo("Settings look good ✅")


@config_app.command("init")
def init_settings(
    path: Path = typer.Option(Path("dgbv_lab.yml"), help="Where to write the settings file."),
    force: bool = typer.Option(False, "--force", help="Overwrite an existing file if present."),
) -> None:
    """Write a starter settings file."""

    if path.exists() and not force:
        typer.echo(f"Settings already exist at {path}. Use --force to overwrite.")
        raise typer.Exit(code=EXIT_FAILED)

    path.write_text(SETTINGS_TEMPLATE.strip() + "\n", encoding="utf-8")
    typer.echo(f"Created settings at {path}")


def _settings(ctx: typer.Context) -> EngineSettings:
    return ctx.obj if isinstance(ctx.obj, EngineSettings) else EngineSettings()


def _settings_or_exit(path: Optional[Path]) -> EngineSettings:
    try:
        return load_settings(path)
    except ConfigError as exc:
        typer.echo(f"Error: {exc}")
        raise typer.Exit(code=EXIT_INPUT)


def _load_model_or_exit(ref: str) -> BundledModel:
    path = Path(ref)
    try:
        if path.exists():
            return load_model(path)
        if ref in list_models():
            return load_bundled(ref)
    except ModelFileError as exc:
        typer.echo(f"Error: {exc}")
        raise typer.Exit(code=EXIT_INPUT)
    except DgbvError as exc:
        typer.echo(f"Error: model '{ref}' is invalid: {exc}")
        raise typer.Exit(code=EXIT_INPUT)
    typer.echo(f"Error: '{ref}' is neither a model file nor a bundled model")
    typer.echo(f"Bundled: {', '.join(list_models())}")
    raise typer.Exit(code=EXIT_INPUT)


def _write_or_exit(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        typer.echo(f"Error: cannot write {path}: {exc.strerror}")
        raise typer.Exit(code=EXIT_INPUT)


def _require_checks(ctx: typer.Context, bundled: BundledModel, report: RunReport, output_format: Optional[str]) -> None:
    result = run_checks(bundled)
    if result.ok:
        return
    report.sections.extend(result.sections)
    report.exit_code = EXIT_FAILED
    typer.echo("Checks failed; rerun with --force to solve anyway.")
    _finish(ctx, report, output_format, None)


def _solve_or_exit(
    ctx: typer.Context, bundled: BundledModel, report: RunReport, order: int, mode: str, output_format: Optional[str]
) -> MCSolution:
    try:
        result = solve(bundled.dgbv, bundled.inner_product, order, mode)
    except DgbvError as exc:
        report.sections.append(error_section("solution", str(exc)))
        report.exit_code = EXIT_FAILED
        _finish(ctx, report, output_format, None)
    if isinstance(result, ObstructionReport):
        report.sections.append(obstruction_section(result, bundled.dgbv.basis))
        report.exit_code = EXIT_OBSTRUCTED
        _finish(ctx, report, output_format, None)
    return result


def _round_trip_section(solution: MCSolution, text: str, bundled: BundledModel) -> Section:
    reloaded = parse_solution(text)
    same = reloaded.terms == solution.terms and reloaded.classes == solution.classes
    verified = verify_mc(reloaded, bundled.dgbv).ok
    return Section(
        name="round-trip",
        ok=same and verified,
        summary="solution dump re-ingests bit-exactly" if same else "solution dump differs after re-ingest",
        details=[f"{'✅' if verified else '❌'} re-ingested solution verifies"],
        data={"identical": same, "verified": verified},
    )


def _finish(ctx: typer.Context, report: RunReport, output_format: Optional[str], output: Optional[Path]) -> None:
    fmt = output_format or _settings(ctx).output_format
    if fmt not in ("text", "machine"):
        typer.echo(f"Error: unknown format '{fmt}', expected text or machine")
        raise typer.Exit(code=EXIT_INPUT)
    rendered = report.render(fmt)
    typer.echo(rendered)
    if output is not None:
        _write_or_exit(output, rendered + "\n")
    raise typer.Exit(code=report.exit_code)


if __name__ == "__main__":
    app()
