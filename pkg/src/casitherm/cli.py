"""Command-line front end.

Subcommands: free-energy, entropy, nernst, transition, fig4b, verify.
Sweep commands emit CSV (12 significant digits, comma delimited, LF) and
can additionally render the same rows to a figure file with --plot.
Exit codes: 0 ok, 2 configuration error, 3 convergence error; verify
exits 1 when a criterion fails.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click
from click.core import ParameterSource

from . import acceptance, plotting, reports
from .errors import ConvergenceError, DomainError, MaterialFileError, UndefinedRatioError
from .lifshitz import PlateSystem, free_energy
from .materials import (
    ConductiveDielectric,
    IdealMetal,
    apply_toggles,
    builtin_material_path,
    load_material_named,
    static_permittivity,
)
from .asymptotics import transition_jump
from .thermo import nernst_scan

_CONFIG_EXIT = 2
_CONVERGENCE_EXIT = 3


@dataclass(frozen=True)
class RunConfig:
    """Effective settings of one command after config-file merging."""

    command: str
    mat1: Optional[str] = None
    mat2: Optional[str] = None
    a_values: tuple[float, ...] = ()
    t_values: tuple[float, ...] = ()
    include_conductivity: bool = True
    include_debye: bool = True
    out: Optional[str] = None
    plot: Optional[str] = None
    workers: int = 1
    trunc_rtol: float = 1e-10
    term_epsabs: float = 1e-13


def _parse_range(text: str) -> tuple[float, ...]:
    """A single number, or start:stop:count with an optional :log suffix."""
    parts = text.split(":")
    if len(parts) == 1:
        value = float(parts[0])
        if value <= 0:
            raise click.UsageError(f"value must be > 0, got {text!r}")
        return (value,)
    log = False
    if len(parts) == 4:
        if parts[3] != "log":
            raise click.UsageError(f"bad range suffix in {text!r} (only ':log')")
        log = True
        parts = parts[:3]
    if len(parts) != 3:
        raise click.UsageError(f"range must be start:stop:count(:log), got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    count = int(parts[2])
    if start <= 0 or stop <= 0:
        raise click.UsageError(f"range endpoints must be > 0 in {text!r}")
    if count < 1:
        raise click.UsageError(f"range count must be >= 1 in {text!r}")
    if count == 1:
        return (start,)
    if log:
        ratio = (stop / start) ** (1.0 / (count - 1))
        return tuple(start * ratio**i for i in range(count))
    step = (stop - start) / (count - 1)
    return tuple(start + step * i for i in range(count))


def _load_model(name_or_path: str, include_conductivity: bool, include_debye: bool):
    path = Path(name_or_path)
    if not path.exists():
        try:
            path = builtin_material_path(name_or_path)
        except MaterialFileError:
            raise MaterialFileError(
                f"{name_or_path!r} is neither a file nor a bundled material name"
            )
    name, model = load_material_named(path)
    model = apply_toggles(model, include_conductivity=include_conductivity,
                          include_debye=include_debye)
    return name, model


def _merged(ctx, config: dict, key: str, fallback, config_key: str | None = None):
    """Command line beats config file beats the built-in default.

    ``config_key`` is the user-facing spelling in the JSON file when it
    differs from the click parameter name.
    """
    if ctx.get_parameter_source(key) == ParameterSource.COMMANDLINE:
        return ctx.params[key]
    config_key = config_key or key
    if config_key in config:
        return config[config_key]
    value = ctx.params[key]
    return fallback if value is None else value


def _read_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config file {path!r}: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError(f"config file {path!r} must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run(body):
    try:
        body()
    except (MaterialFileError, DomainError, UndefinedRatioError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(_CONFIG_EXIT)
    except ConvergenceError as exc:
        click.echo(f"convergence error: {exc}", err=True)
        sys.exit(_CONVERGENCE_EXIT)


def _common_options(func):
    for option in reversed((
        click.option("--mat1", default=None, help="Material file or bundled name for plate 1."),
        click.option("--mat2", default=None, help="Material file or bundled name for plate 2 (defaults to mat1)."),
        click.option("--a", "a_spec", default=None, help="Separation in m, or range start:stop:count(:log)."),
        click.option("--t", "t_spec", default=None, help="Temperature in K, or range start:stop:count(:log)."),
        click.option("--include-conductivity", type=bool, default=True, show_default=True,
                     help="Keep dc conductivity in conductive materials."),
        click.option("--include-debye", type=bool, default=True, show_default=True,
                     help="Keep the Debye (orientation) term."),
        click.option("--out", default=None, help="Output file (default: stdout)."),
        click.option("--plot", default=None, help="Also render the rows to this figure file."),
        click.option("--workers", type=int, default=1, show_default=True,
                     help="Process count for sweep evaluation."),
        click.option("--trunc-tol", "trunc_rtol", type=float, default=1e-10, show_default=True,
                     help="Relative truncation tolerance of the frequency sum."),
        click.option("--quad-tol", "term_epsabs", type=float, default=1e-13, show_default=True,
                     help="Absolute tolerance of each term quadrature."),
        click.option("--config", "config_path", default=None,
                     help="JSON file with defaults for these options."),
    )):
        func = option(func)
    return func


def _build_config(ctx, command: str, defaults: dict) -> RunConfig:
    config = _read_config(ctx.params.get("config_path"))
    mat1 = _merged(ctx, config, "mat1", defaults.get("mat1"))
    mat2 = _merged(ctx, config, "mat2", defaults.get("mat2")) or mat1
    a_spec = _merged(ctx, config, "a_spec", defaults.get("a"), config_key="a")
    t_spec = _merged(ctx, config, "t_spec", defaults.get("t"), config_key="t")
    if mat1 is None:
        raise click.UsageError("--mat1 is required")
    if a_spec is None:
        raise click.UsageError("--a is required")
    if t_spec is None:
        raise click.UsageError("--t is required")
    return RunConfig(
        command=command,
        mat1=mat1,
        mat2=mat2,
        a_values=_parse_range(str(a_spec)),
        t_values=_parse_range(str(t_spec)),
        include_conductivity=bool(_merged(ctx, config, "include_conductivity", True)),
        include_debye=bool(_merged(ctx, config, "include_debye", True)),
        out=_merged(ctx, config, "out", None),
        plot=_merged(ctx, config, "plot", None),
        workers=int(_merged(ctx, config, "workers", 1)),
        trunc_rtol=float(_merged(ctx, config, "trunc_rtol", 1e-10, config_key="trunc_tol")),
        term_epsabs=float(_merged(ctx, config, "term_epsabs", 1e-13, config_key="quad_tol")),
    )


@click.group()
@click.version_option()
def main():
    """Thermal Casimir free energy, entropy and pressure between plates."""


@main.command("free-energy")
@_common_options
@click.pass_context
def cmd_free_energy(ctx, **_):
    """Free energy F(a, T) with its zero-temperature decomposition."""

    def body():
        cfg = _build_config(ctx, "free-energy", {})
        _, m1 = _load_model(cfg.mat1, cfg.include_conductivity, cfg.include_debye)
        _, m2 = _load_model(cfg.mat2, cfg.include_conductivity, cfg.include_debye)
        header, rows = reports.free_energy_rows(
            m1, m2, cfg.a_values, cfg.t_values,
            trunc_rtol=cfg.trunc_rtol, term_epsabs=cfg.term_epsabs,
            workers=cfg.workers,
        )
        _emit(reports.rows_to_csv(header, rows), cfg.out)
        if cfg.plot:
            x_col = "T_K" if len(cfg.t_values) > 1 else "a_m"
            plotting.render_xy(cfg.plot, header, rows, x_col, ["F_J_per_m2"],
                               "|F| (J/m^2)", logy=True)

    _run(body)


@main.command("entropy")
@_common_options
@click.pass_context
def cmd_entropy(ctx, **_):
    """Entropy S(a, T) = -dF/dT."""

    def body():
        cfg = _build_config(ctx, "entropy", {})
        _, m1 = _load_model(cfg.mat1, cfg.include_conductivity, cfg.include_debye)
        _, m2 = _load_model(cfg.mat2, cfg.include_conductivity, cfg.include_debye)
        header, rows = reports.entropy_rows(m1, m2, cfg.a_values, cfg.t_values,
                                            workers=cfg.workers)
        _emit(reports.rows_to_csv(header, rows), cfg.out)
        if cfg.plot:
            plotting.render_xy(cfg.plot, header, rows, "T_K", ["S_J_per_m2K"],
                               "S (J m^-2 K^-1)")

    _run(body)


@main.command("nernst")
@_common_options
@click.pass_context
def cmd_nernst(ctx, **_):
    """Low-temperature entropy scan and Nernst-theorem verdict."""

    def body():
        cfg = _build_config(ctx, "nernst", {"t": "300:10:8:log"})
        if len(cfg.a_values) != 1:
            raise click.UsageError("nernst takes a single separation")
        name1, m1 = _load_model(cfg.mat1, cfg.include_conductivity, cfg.include_debye)
        name2, m2 = _load_model(cfg.mat2, cfg.include_conductivity, cfg.include_debye)
        verdict = nernst_scan(PlateSystem(m1, m2, cfg.a_values[0]), cfg.t_values)
        deviation = (
            abs(verdict.limit_estimate / verdict.limit_theory - 1.0)
            if verdict.limit_theory != 0.0
            else float("nan")
        )
        lines = [
            f"materials: {name1} / {name2}",
            f"separation_m: {reports.format_cell(cfg.a_values[0])}",
            f"grid_K: {' '.join(reports.format_cell(t) for t in verdict.T_grid)}",
            f"classification: {verdict.classification}",
            f"out_of_scope_model: {reports.format_cell(verdict.out_of_scope)}",
            f"extrapolated_s0_J_per_m2K: {reports.format_cell(verdict.limit_estimate)}",
            f"theory_limit_J_per_m2K: {reports.format_cell(verdict.limit_theory)}",
            f"uncertainty_J_per_m2K: {reports.format_cell(verdict.uncertainty)}",
            f"relative_deviation: {reports.format_cell(deviation)}",
        ]
        _emit("\n".join(lines) + "\n", cfg.out)

    _run(body)


@main.command("transition")
@_common_options
@click.pass_context
def cmd_transition(ctx, **_):
    """Free-energy jump when the dielectric plate's dc conductivity switches on."""

    def body():
        cfg = _build_config(
            ctx, "transition",
            {"mat1": "ideal-metal", "mat2": "silicon-doped", "a": "5e-6", "t": "300"},
        )
        if len(cfg.a_values) != 1 or len(cfg.t_values) != 1:
            raise click.UsageError("transition takes a single separation and temperature")
        a, T = cfg.a_values[0], cfg.t_values[0]
        name1, m1 = _load_model(cfg.mat1, True, cfg.include_debye)
        name2, m2_on = _load_model(cfg.mat2, True, cfg.include_debye)
        if not isinstance(m2_on, ConductiveDielectric):
            raise click.UsageError("--mat2 must be a conductive material")
        m2_off = apply_toggles(m2_on, include_conductivity=False)
        F1 = free_energy(PlateSystem(m1, m2_off, a), T,
                         trunc_rtol=cfg.trunc_rtol, term_epsabs=cfg.term_epsabs).F
        F2 = free_energy(PlateSystem(m1, m2_on, a), T,
                         trunc_rtol=cfg.trunc_rtol, term_epsabs=cfg.term_epsabs).F
        jump = F2 - F1
        analytic = (
            transition_jump(static_permittivity(m2_off), a, T)
            if isinstance(m1, IdealMetal)
            else float("nan")
        )
        agreement = abs(jump / analytic - 1.0) if analytic == analytic else float("nan")
        lines = [
            f"materials: {name1} / {name2}",
            f"separation_m: {reports.format_cell(a)}",
            f"temperature_K: {reports.format_cell(T)}",
            f"F1_J_per_m2_conductivity_off: {reports.format_cell(F1)}",
            f"F2_J_per_m2_conductivity_on: {reports.format_cell(F2)}",
            f"numeric_jump_J_per_m2: {reports.format_cell(jump)}",
            f"analytic_jump_J_per_m2: {reports.format_cell(analytic)}",
            f"jump_relative_agreement: {reports.format_cell(agreement)}",
            f"relative_change_vs_F1: {reports.format_cell(jump / F1)}",
        ]
        _emit("\n".join(lines) + "\n", cfg.out)

    _run(body)


@main.command("fig4b")
@_common_options
@click.pass_context
def cmd_fig4b(ctx, **_):
    """Relative thermal correction at 100 nm / 500 nm / 1 um, Debye off and on."""

    def body():
        cfg = _build_config(ctx, "fig4b", {"mat1": "mica", "a": "1e-7", "t": "1:300:25"})
        _, model = _load_model(cfg.mat1, cfg.include_conductivity, True)
        header, rows = reports.fig4b_rows(model, cfg.t_values, workers=cfg.workers)
        _emit(reports.rows_to_csv(header, rows), cfg.out)
        if cfg.plot:
            plotting.render_fig4b(cfg.plot, header, rows)

    _run(body)


@main.command("verify")
@click.option("--only", multiple=True, type=int, help="Run only these criterion numbers.")
@click.option("--list", "list_only", is_flag=True, help="List criteria without running.")
def cmd_verify(only, list_only):
    """Run the built-in verification suite."""
    if list_only:
        for number, name in acceptance.criterion_names():
            click.echo(f"{number:2d}  {name}")
        return
    numbers = tuple(only) if only else None
    try:
        results = acceptance.run_all(numbers)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(_CONFIG_EXIT)
    failed = 0
    for res in results:
        click.echo(acceptance.format_result(res))
        failed += not res.passed
    click.echo(f"{len(results) - failed}/{len(results)} criteria passed")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
