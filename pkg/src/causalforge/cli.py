"""Command line entry points: simulate, learn, eval, run, serve.

Every subcommand is a thin shell over the pipeline: simulate writes a dataset
bundle, learn runs one algorithm on a CSV, eval scores two graph files, run
executes a full TaskConfig, and serve starts the HTTP task service. Exit
codes: 0 success, 1 usage error, 2 task failure.
"""

import json
import sys
from pathlib import Path

import click
import numpy as np

from .exceptions import CausalForgeError
from .graphs import RandomGraphConfig, random_dag
from .io import load_graph, save_dataset, save_graph
from .metrics import evaluate
from .pipeline import ALGORITHMS, CsvSource, TaskConfig, run_task
from .priors import PriorKnowledge
from .simulate import NOISE_FAMILIES, MECHANISMS, NoiseSpec, simulate_iid

_MODEL_ALIASES = {"er": "erdos_renyi", "sf": "scale_free", "lr": "low_rank"}


def _json_argument(blob, what):
    """Accept inline JSON or a path to a JSON file."""
    if blob is None:
        return None
    try:
        return json.loads(blob)
    except json.JSONDecodeError:
        pass
    path = Path(blob)
    if path.exists():
        return json.loads(path.read_text())
    raise click.UsageError(f"--{what} is neither inline JSON nor a readable file")


def _emit(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


@click.group()
def cli():
    """Causal structure learning toolkit."""


@cli.command()
@click.option("--model", default="er", help="graph model: er, sf, lr, or full name")
@click.option("--d", "d", type=int, default=10, help="node count")
@click.option("--e", "e", type=int, default=20, help="edge count")
@click.option("--rank", type=int, default=None, help="rank bound (low_rank only)")
@click.option("--weight-range", default="0.5,2.0", help="lo,hi weight magnitudes")
@click.option("--n", type=int, default=1000, help="sample count")
@click.option("--sem", default="linear", type=click.Choice(MECHANISMS))
@click.option("--noise", default="gauss", type=click.Choice(NOISE_FAMILIES))
@click.option("--noise-scale", type=float, default=1.0)
@click.option("--seed", type=int, default=0)
@click.option("--out", required=True, help="output directory")
def simulate(model, d, e, rank, weight_range, n, sem, noise, noise_scale, seed, out):
    """Sample a random DAG and simulate observations into a dataset bundle."""
    try:
        lo, hi = (float(v) for v in weight_range.split(","))
    except ValueError:
        raise click.UsageError("--weight-range must look like 0.5,2.0")
    cfg = RandomGraphConfig(
        model=_MODEL_ALIASES.get(model, model),
        d=d,
        e=e,
        rank=rank,
        weight_range=(lo, hi),
        seed=seed,
    )
    W = random_dag(cfg)
    ds = simulate_iid(W, n, sem=sem, noise=NoiseSpec(noise, noise_scale), seed=seed)
    where = save_dataset(out, ds)
    click.echo(f"wrote {where}/X.csv, W.json, B.json")


@cli.command()
@click.argument("data")
@click.option("--algo", required=True, type=click.Choice(ALGORITHMS))
@click.option("--config", "config_blob", default=None, help="algorithm params, JSON")
@click.option("--prior", "prior_blob", default=None, help="prior knowledge, JSON")
@click.option("--mask", "lambda_ns", type=float, default=None,
              help="lasso neighborhood-selection weight")
@click.option("--threshold", type=float, default=None, help="edge-weight cutoff")
@click.option("--truth", default=None, help="truth graph JSON for metrics")
@click.option("--seed", type=int, default=0)
@click.option("--out", required=True, help="estimated graph JSON path")
def learn(data, algo, config_blob, prior_blob, lambda_ns, threshold, truth, seed, out):
    """Learn a causal graph from a CSV file."""
    params = _json_argument(config_blob, "config") or {}
    prior_obj = _json_argument(prior_blob, "prior")
    cfg = TaskConfig(
        data_source=CsvSource(path=data, truth_path=truth),
        algorithm=algo,
        params=params,
        prior=None if prior_obj is None else PriorKnowledge.from_dict(prior_obj),
        lambda_ns=lambda_ns,
        threshold=threshold,
        seed=seed,
    )
    result = run_task(cfg)
    save_graph(out, result.graph)
    if result.metrics is not None:
        click.echo(json.dumps(result.metrics.to_dict(), sort_keys=True))


@cli.command("eval")
@click.option("--est", required=True, help="estimated graph JSON")
@click.option("--truth", required=True, help="true graph JSON")
@click.option("--out", default=None, help="metrics JSON path (default stdout)")
def eval_cmd(est, truth, out):
    """Score an estimated graph against the truth."""
    est_g = (load_graph(est) != 0).astype(np.int8)
    true_g = (load_graph(truth) != 0).astype(np.int8)
    report = evaluate(est_g, true_g)
    _emit(report.to_dict(), out)


@cli.command()
@click.argument("config")
@click.option("--out", default=None, help="TaskResult JSON path (default stdout)")
def run(config, out):
    """Execute a full TaskConfig (inline JSON or a path to one)."""
    obj = _json_argument(config, "config")
    result = run_task(TaskConfig.from_dict(obj))
    _emit(result.to_dict(), out)


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
@click.option("--workers", type=int, default=None, help="task worker pool size")
@click.option("--data-dir", default=None, help="task persistence directory")
def serve(host, port, workers, data_dir):
    """Start the HTTP task service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(data_dir=data_dir, workers=workers), host=host, port=port)


def main(argv=None):
    """Dispatch with the documented exit codes instead of click's defaults."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return 0 if exc.exit_code == 0 else 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.exceptions.Abort:
        return 1
    except (CausalForgeError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
