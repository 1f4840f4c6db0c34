# backend/app/cli.py
"""
Command-line entry point: python -m app.cli <command> ...

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input or usage.
"""

import functools
import json
import sys
from pathlib import Path

import click

from app.config import SCHEMA_VERSION, Settings, load_settings
from app.core.catalog import fingerprint_match
from app.core.hermitian import skt_verdict
from app.core.lie import is_two_step_solvable, jacobi_residual, series
from app.core.salamon import parse_salamon, print_salamon
from app.errors import SKTError
from app.families.almost_abelian import decide_almost_abelian
from app.families.params import FAMILY_NAMES
from app.families.registry import generate
from app.families.scan import scan_6d
from app.io import algebra_to_doc, dumps, family_from_doc, load_algebra, load_matrix, read_json
from app.logs import set_level
from app.pipeline import run_shear_file


# --- Shared plumbing ---

def _settings(ctx: click.Context, tol: float | None) -> Settings:
    base: Settings = ctx.obj
    return load_settings(tol=tol if tol is not None else base.tol, rank_tol=base.rank_tol)


def reports_errors(fn):
    """Turn library errors into a message on stderr and the error's exit code."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SKTError as exc:
            click.echo(f"error: {exc}", err=True)
            raise click.exceptions.Exit(exc.exit_code)
    return wrapper


def common_options(fn):
    fn = click.option("--json", "as_json", is_flag=True, help="Machine-readable JSON on stdout.")(fn)
    fn = click.option("--tol", type=float, default=None, help="Tolerance for '= 0' decisions.")(fn)
    return fn


def parse_params(pairs: tuple[str, ...]) -> dict:
    """key=value pairs; values are read as JSON when possible, else kept as strings."""
    out = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key.strip():
            raise click.BadParameter(f"expected key=value, got '{pair}'", param_hint="--params")
        try:
            out[key.strip()] = json.loads(raw)
        except json.JSONDecodeError:
            out[key.strip()] = raw.strip()
    return out


def _finish(ok: bool) -> None:
    if not ok:
        raise click.exceptions.Exit(1)


@click.group()
@click.option("--log-level", default=None, help="DEBUG, INFO, WARNING, ... (default from SKT_LOG_LEVEL).")
@click.pass_context
def cli(ctx: click.Context, log_level: str | None) -> None:
    """Two-step solvable SKT Lie algebras: checks, shears, families and scans."""
    settings = load_settings()
    set_level(log_level or settings.log_level)
    ctx.obj = settings


# --- Commands ---

@cli.command()
@click.argument("path", type=click.Path(path_type=Path))
@common_options
@click.pass_context
@reports_errors
def check(ctx, path: Path, tol, as_json: bool) -> None:
    """Jacobi identity, series dimensions and, with g and J present, the SKT verdict."""
    s = _settings(ctx, tol)
    L, H = load_algebra(path)
    residual = jacobi_residual(L)
    jacobi_ok = residual <= s.tol * L.scale() ** 2
    out = {"schema_version": SCHEMA_VERSION, "jacobi_residual": residual, "jacobi": jacobi_ok}
    ok = jacobi_ok
    if jacobi_ok:
        fp = series(L, s.tol, s.rank_tol)
        out["fingerprint"] = fp.as_dict()
        two_step = is_two_step_solvable(L, s.tol, s.rank_tol)
        out["two_step_solvable"] = two_step.solvable
        out["abelian"] = two_step.abelian
        if H is not None:
            report = skt_verdict(H, s.tol)
            out["verdict"] = report.model_dump(mode="json")
            ok = report.verdict.is_skt
    if as_json:
        click.echo(dumps(out))
    else:
        click.echo(f"jacobi residual: {residual:.3e}" + ("" if jacobi_ok else " (violated)"))
        if jacobi_ok:
            fp = out["fingerprint"]
            click.echo(f"derived series: {fp['derived']}")
            click.echo(f"lower central series: {fp['lower_central']}")
            click.echo(f"center: {fp['center_dim']}")
            solvable = "yes" if out["two_step_solvable"] else "no"
            click.echo(f"two-step solvable: {solvable}" + (" (abelian)" if out["abelian"] else ""))
            if "verdict" in out:
                click.echo(f"verdict: {out['verdict']['verdict']}")
    _finish(ok)


@cli.command()
@click.argument("path", type=click.Path(path_type=Path))
@common_options
@click.pass_context
@reports_errors
def shear(ctx, path: Path, tol, as_json: bool) -> None:
    """Shear-data, integrability and ν reports, then the sheared algebra as JSON."""
    s = _settings(ctx, tol)
    run = run_shear_file(path, s.tol)
    if as_json:
        click.echo(dumps({**run.model_dump(mode="json"), "passed": run.passed}))
    else:
        for c in run.conditions:
            click.echo(f"{'ok  ' if c.passed else 'FAIL'} {c.name}: residual {c.residual:.3e}", err=True)
        if run.failing_flags:
            click.echo(f"failing integrability flags: {', '.join(run.failing_flags)}", err=True)
        if run.verdict is not None:
            click.echo(f"verdict: {run.verdict.verdict.value}", err=True)
        if run.algebra is not None:
            click.echo(dumps(run.algebra))
    failing = run.failing()
    if failing:
        click.echo(f"failed: {'; '.join(failing)}", err=True)
    _finish(run.passed)


@cli.command()
@click.argument("name", type=click.Choice(FAMILY_NAMES))
@click.option("--params", "pairs", multiple=True, help="key=value, repeatable; values as JSON.")
@click.option("--file", "param_file", type=click.Path(path_type=Path), default=None,
              help="JSON file with further parameters.")
@common_options
@click.pass_context
@reports_errors
def family(ctx, name: str, pairs, param_file, tol, as_json: bool) -> None:
    """Generate one member of a family and verify it."""
    s = _settings(ctx, tol)
    doc = dict(read_json(param_file)) if param_file else {}
    doc.update(parse_params(pairs))
    doc["family"] = name
    params = family_from_doc(doc)
    L, H = generate(params, s.tol)
    report = skt_verdict(H, s.tol)
    fp = series(L, s.tol, s.rank_tol)
    if as_json:
        click.echo(dumps({
            "schema_version": SCHEMA_VERSION,
            "params": params.model_dump(mode="json"),
            "verdict": report.model_dump(mode="json"),
            "fingerprint": fp.as_dict(),
            "algebra": algebra_to_doc(L, H, tol=0.0),
        }))
    else:
        click.echo(f"{L.name}: dim {L.dim}, verdict {report.verdict.value}")
        click.echo(f"derived series: {list(fp.derived)}, center: {fp.center_dim}")
        if L.dim <= 9:
            click.echo(print_salamon(L, tol=s.tol))
    _finish(report.verdict.is_skt)


@cli.command()
@click.option("--samples", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
@common_options
@click.pass_context
@reports_errors
def scan6d(ctx, samples: int, seed: int, workers: int, tol, as_json: bool) -> None:
    """Seeded sweep over the six-dimensional families."""
    s = _settings(ctx, tol)
    progress = not as_json and sys.stderr.isatty()
    report = scan_6d(samples, seed, s.tol, s.rank_tol, workers=workers, progress=progress)
    summary = report.summary
    if as_json:
        click.echo(report.json_lines())
    else:
        click.echo(f"samples: {summary.samples}, seed: {summary.seed}, failures: {summary.failures}")
        click.echo(f"verdicts: {summary.verdicts}")
        click.echo(f"distinct fingerprints: {len(summary.buckets)}")
        for target, hit in summary.coverage.items():
            click.echo(f"  {'hit ' if hit else 'miss'} {target}")
    _finish(summary.failures == 0)


@cli.command()
@click.argument("path", type=click.Path(path_type=Path))
@common_options
@click.pass_context
@reports_errors
def admissible(ctx, path: Path, tol, as_json: bool) -> None:
    """Decide whether ad(JX) restricted to the Abelian ideal admits an SKT structure."""
    s = _settings(ctx, tol)
    report = decide_almost_abelian(load_matrix(path), tol=s.tol, rank_tol=s.rank_tol)
    if as_json:
        click.echo(dumps({"schema_version": SCHEMA_VERSION, **report.model_dump(mode="json")}))
    elif report.admissible:
        click.echo(f"admissible: case ({report.case}), a = {report.a:.6g}")
    else:
        click.echo(f"inadmissible: {report.reason}")
    _finish(report.admissible)


@cli.command()
@click.argument("notation")
@click.option("--params", "pairs", multiple=True, help="Parameter values, e.g. alpha=0.")
@common_options
@click.pass_context
@reports_errors
def parse(ctx, notation: str, pairs, tol, as_json: bool) -> None:
    """Structure constants of a Salamon tuple such as "(0,0,21)"."""
    s = _settings(ctx, tol)
    L = parse_salamon(notation, parse_params(pairs), tol=s.tol)
    if as_json:
        click.echo(dumps(algebra_to_doc(L)))
        return
    click.echo(f"dim {L.dim}")
    for i, j, k, c in L.entries():
        click.echo(f"[e{i}, e{j}] = {c:g} e{k}")


@cli.command()
@click.argument("path", type=click.Path(path_type=Path))
@click.option("--target", default=None, help='Direct sum to compare with, e.g. "h3 + R^3".')
@click.option("--params", "pairs", multiple=True, help="Parameters shared by the target summands.")
@common_options
@click.pass_context
@reports_errors
def fingerprint(ctx, path: Path, target, pairs, tol, as_json: bool) -> None:
    """Series fingerprint of an algebra file, optionally compared with a named target."""
    s = _settings(ctx, tol)
    L, _ = load_algebra(path)
    fp = series(L, s.tol, s.rank_tol)
    out = {"schema_version": SCHEMA_VERSION, "fingerprint": fp.as_dict()}
    ok = True
    if target:
        ok = fingerprint_match(L, target, parse_params(pairs), s.tol, s.rank_tol)
        out["target"] = target
        out["match"] = ok
    if as_json:
        click.echo(dumps(out))
    else:
        for key, value in fp.as_dict().items():
            click.echo(f"{key}: {value}")
        if target:
            click.echo(f"matches {target}: {'yes' if ok else 'no'}")
    _finish(ok)


def main() -> None:
    cli(prog_name="skt")


if __name__ == "__main__":
    main()
