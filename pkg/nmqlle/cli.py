import functools
import logging
import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional

import click
import numpy as np
import orjson
import yaml
from pydantic import ValidationError

from .benchmark import sweep
from .classes import PRESETS, DatasetError, LabeledDataset, QlleError, RunConfig
from .graph import fit_nm_qlle
from .nodes import pca_fit
from .services import export_report, load_features, load_model, save_model, write_embedding_csv, write_features
from .utils import synth_manifold
from .utils.synth import KINDS

logger = logging.getLogger(__name__)

EXIT_COMPUTE = 1
EXIT_USAGE = 2


def _read_config(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    path = Path(path)
    raw = path.read_bytes()
    suffix = path.suffix.lower()
    if suffix == ".toml":
        doc = tomllib.loads(raw.decode("utf-8"))
    elif suffix in (".yaml", ".yml"):
        doc = yaml.safe_load(raw) or {}
    else:
        doc = orjson.loads(raw)
    if not isinstance(doc, dict):
        raise click.UsageError(f"{path}: config must be a mapping")
    return {key.replace("-", "_"): value for key, value in doc.items()}


def _run_config(config_path: Optional[str], preset: Optional[str], flags: Dict[str, Any]) -> RunConfig:
    """Preset < config file < explicit flags."""
    values: Dict[str, Any] = dict(PRESETS[preset]) if preset else {}
    values.update(_read_config(config_path))
    values.update({key: value for key, value in flags.items() if value is not None})
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise click.UsageError(str(e)) from e


def _load(cfg: RunConfig) -> LabeledDataset:
    if cfg.data is None:
        raise click.UsageError("--data is required")
    return load_features(cfg.data, cfg.format)


def _guard(fn):
    """Map failures onto exit codes: 2 for usage and IO, 1 for compute."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (click.UsageError, click.exceptions.Exit):
            raise
        except (FileNotFoundError, DatasetError, OSError, orjson.JSONDecodeError, yaml.YAMLError,
                tomllib.TOMLDecodeError) as e:
            logger.error(f"{type(e).__name__}: {e}", exc_info=True)
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_USAGE)
        except (QlleError, ValueError, np.linalg.LinAlgError) as e:
            logger.error(f"{type(e).__name__}: {e}", exc_info=True)
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_COMPUTE)

    return wrapper


def _configure_logging(level: Optional[str]):
    root = logging.getLogger()
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        root.addHandler(handler)
        root.setLevel(logging.WARNING)
    if level:
        root.setLevel(level.upper())


@click.group()
@click.option("--log-level", default=None, envvar="NMQLLE_LOG_LEVEL",
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
def cli(log_level: Optional[str]):
    """Quasi-curvature LLE with an explicit out-of-sample map."""
    _configure_logging(log_level)


def _common_options(fn):
    options = [
        click.option("--data", type=click.Path(), help="Feature file (csv or f32bin)."),
        click.option("--format", "fmt", type=click.Choice(["csv", "f32bin"]), help="Overrides the extension."),
        click.option("--d", "dims", help="Target dimension(s): a, a,b,c or a:b:s."),
        click.option("--k", type=int),
        click.option("--eta", type=float),
        click.option("--eta-mode", type=click.Choice(["absolute", "quantile"])),
        click.option("--min-k", type=int),
        click.option("--reg", type=float),
        click.option("--invert-curvature/--no-invert-curvature", default=None),
        click.option("--landmarks", type=int),
        click.option("--hidden", type=int),
        click.option("--ridge", type=float),
        click.option("--seed", type=int),
        click.option("--selection", type=click.Choice(["random", "kmeans"])),
        click.option("--config", "config_path", type=click.Path(), help="JSON, TOML or YAML defaults."),
        click.option("--preset", type=click.Choice(sorted(PRESETS))),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _flags(fmt, dims, k, eta, eta_mode, min_k, reg, invert_curvature, landmarks, hidden, ridge, seed,
           selection, data, **extra) -> Dict[str, Any]:
    return {
        "data": data, "format": fmt, "d": dims, "k": k, "eta": eta, "eta_mode": eta_mode,
        "min_k": min_k, "reg": reg, "invert_curvature": invert_curvature, "landmarks": landmarks,
        "hidden": hidden, "ridge": ridge, "seed": seed, "selection": selection, **extra,
    }


@cli.command()
@click.option("--method", type=click.Choice(["nm-qlle", "pca"]), default=None)
@click.option("--out", type=click.Path(), required=True, help="Model JSON path.")
@_common_options
@_guard
def fit(method, out, config_path, preset, **flags):
    """Train a mapping model and save it as JSON."""
    cfg = _run_config(config_path, preset, _flags(methods=method, out=out, **flags))
    if len(cfg.d) != 1:
        raise click.UsageError("fit takes a single --d")
    method = cfg.methods[0]
    if method not in ("nm_qlle", "pca"):
        raise click.UsageError(f"fit supports nm-qlle and pca, not {method}")
    ds = _load(cfg)
    d = cfg.d[0]

    started = time.perf_counter()
    if method == "pca":
        model = pca_fit(ds.features, d)
    else:
        oos = cfg.oos_config()
        model = fit_nm_qlle(
            ds.features, cfg.qlle_config(d), landmarks=oos.landmarks, hidden=oos.hidden, seed=oos.seed,
            ridge=oos.ridge, selection=oos.selection, kmeans_iters=oos.kmeans_iters,
        )
    elapsed = time.perf_counter() - started
    save_model(model, cfg.out)

    if method == "pca":
        click.echo(f"pca: D={ds.dim} d={d} fit {elapsed:.3f}s -> {cfg.out}")
    else:
        counts = model.neighbor_counts
        click.echo(
            f"nm-qlle: P={model.n_landmarks} d={d} "
            f"k_i min/mean/max={counts.min()}/{counts.mean():.2f}/{counts.max()} "
            f"fit {elapsed:.3f}s -> {cfg.out}"
        )


@cli.command()
@click.argument("model_path", metavar="MODEL", type=click.Path())
@click.option("--data", type=click.Path(), required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "f32bin"]))
@click.option("--out", type=click.Path(), required=True)
@_guard
def transform(model_path, data, fmt, out):
    """Embed a feature file with a saved model; writes label,f0,... CSV."""
    model = load_model(model_path)
    ds = load_features(data, fmt)
    Y = model.transform(ds.features)
    write_embedding_csv(ds.original_labels, Y, out)
    click.echo(f"Embedded {ds.size} rows into d={Y.shape[1]} -> {out}")


@cli.command("sweep")
@click.option("--methods", default=None, help="Comma list of nm-qlle, qlle, pca, original.")
@click.option("--returns", type=int)
@click.option("--out", type=click.Path(), required=True)
@click.option("--report-format", type=click.Choice(["csv", "json"]))
@click.option("--adapt-k/--no-adapt-k", default=None)
@click.option("--timings/--no-timings", default=True, show_default=True,
              help="Without timings, seeded reruns write identical reports.")
@_common_options
@_guard
def sweep_command(methods, returns, out, report_format, adapt_k, timings, config_path, preset, **flags):
    """Precision and per-query time of each method over a range of d."""
    cfg = _run_config(config_path, preset, _flags(
        methods=methods, returns=returns, out=out, report_format=report_format, adapt_k=adapt_k, **flags,
    ))
    ds = _load(cfg)
    if not 1 <= cfg.returns <= ds.size - 1:
        raise click.UsageError(f"--returns must lie in [1, {ds.size - 1}]")

    reports = []
    for method in cfg.methods:
        report = sweep(
            ds, method, cfg.d, qlle=cfg.qlle_config(min(cfg.d)), oos=cfg.oos_config(),
            returns=cfg.returns, adapt_k=cfg.adapt_k,
        )
        reports.append(report)
        best = report.max_precision
        click.echo(
            f"{method}: {len(report.successful)}/{len(report.records)} ok"
            + (f", max precision {best:.4f}" if best is not None else "")
        )
    export_report(reports, cfg.out, cfg.report_format, include_timings=timings)
    if not any(report.successful for report in reports):
        click.echo("Error: no target dimension succeeded", err=True)
        sys.exit(EXIT_COMPUTE)


@cli.command()
@click.option("--kind", type=click.Choice(KINDS), default="swiss_roll", show_default=True)
@click.option("--n", type=int, default=2000, show_default=True)
@click.option("--noise", type=float, default=0.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dim", type=int, default=None, help="Ambient dimension (random orthonormal lift).")
@click.option("--out", type=click.Path(), required=True)
@_guard
def synth(kind, n, noise, seed, dim, out):
    """Write a labelled synthetic manifold (f32bin unless the name ends in .csv).

    f32bin stores float32 features, so exact identities of the generator (the plane
    rank, the parametric equations) only hold to about 1e-7 after reloading. Write
    .csv for full float64 precision.
    """
    ds, _ = synth_manifold(kind, n, noise=noise, seed=seed, dim=dim)
    write_features(ds, out)
    click.echo(f"{kind}: {ds.size} x {ds.dim} -> {out}")


def main():
    cli(prog_name="nmqlle")
