"""Command-line interface: generate, eval, ablate, beta-sweep, serve.

Exit codes are part of the contract: 0 all items ok, 2 when any item or
report cell failed, 1 on usage errors (missing files, malformed inputs).
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from ..corpus import load_triplets
from ..metrics.reports import (
    ALL_METRICS,
    DEFAULT_BETAS,
    ablation_report,
    ablation_report_text,
    beta_sweep,
    beta_sweep_text,
    evaluate_result_dicts,
)
from ..pipeline import VARIANTS, run, run_batch, write_results
from ..recognition import QAPair
from .config import apply_backend_overrides, build_backends, load_config


def _usage_error(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_pipeline(config_path: str | None, backend_overrides: tuple[str, ...]):
    if config_path is not None and not Path(config_path).exists():
        _usage_error(f"config file not found: {config_path}")
    try:
        config = load_config(config_path)
        if backend_overrides:
            config = apply_backend_overrides(config, list(backend_overrides))
        base_dir = Path(config_path).parent if config_path else None
        backends = build_backends(config, base_dir=base_dir)
    except Exception as err:  # noqa: BLE001 - bad config is a usage error
        _usage_error(f"invalid config: {err}")
    return config, backends


def _load_qa_pairs(input_path: str) -> list[QAPair]:
    path = Path(input_path)
    if not path.exists():
        _usage_error(f"input file not found: {input_path}")
    pairs: list[QAPair] = []
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError:
            _usage_error(f"{input_path}:{line_no}: invalid JSON")
        question = raw.get("question") or raw.get("initial_question") or ""
        answer = raw.get("answer") or ""
        pairs.append(QAPair(question=question, answer=answer))
    if not pairs:
        _usage_error(f"{input_path}: no QA pairs")
    return pairs


@click.group()
def main() -> None:
    """Knowledge-enhanced follow-up question generation."""


@main.command()
@click.option("--config", "config_path", default=None, help="Pipeline config JSON.")
@click.option("--input", "input_path", default=None, help="QA JSON-lines file.")
@click.option("--question", default=None, help="Single question (with --answer).")
@click.option("--answer", default=None, help="Single answer (with --question).")
@click.option("--output", "output_path", required=False, default=None)
@click.option("--variant", default=None, type=click.Choice(VARIANTS))
@click.option("--backend", "backend_overrides", multiple=True, help="name=mock|http")
@click.option("--workers", default=4, show_default=True)
def generate(config_path, input_path, question, answer, output_path, variant, backend_overrides, workers):
    """Generate follow-up questions; writes PipelineResult JSON-lines."""
    config, backends = _load_pipeline(config_path, backend_overrides)
    if input_path is None and (question is None or answer is None):
        _usage_error("provide --input or both --question and --answer")
    if input_path is not None:
        corpus = _load_qa_pairs(input_path)
    else:
        if not question or not answer:
            _usage_error("--question and --answer must be non-empty")
        corpus = [QAPair(question=question, answer=answer)]
    if len(corpus) == 1:
        results = [run(corpus[0], config.with_item_seed(0), backends, variant=variant)]
        summary = None
    else:
        results, summary = run_batch(corpus, config, backends, variant=variant, workers=workers)
    if output_path is not None:
        write_results(results, output_path, summary)
    else:
        for result in results:
            click.echo(json.dumps(result.to_dict(), sort_keys=True))
    failed = sum(1 for r in results if not r.ok)
    if failed:
        click.echo(f"{failed}/{len(results)} items failed", err=True)
        sys.exit(2)


@main.command("eval")
@click.option("--results", "results_path", required=True, help="PipelineResult JSON-lines.")
@click.option("--dataset", "dataset_path", required=True, help="Triplet JSON-lines.")
@click.option("--metrics", "metrics_flag", default=None, help="Comma-separated subset.")
@click.option("--config", "config_path", default=None)
@click.option("--output", "output_path", default=None, help="Report JSON path.")
@click.option("--seed", default=0, show_default=True)
def eval_command(results_path, dataset_path, metrics_flag, config_path, output_path, seed):
    """Metric report over generated results and their source dataset."""
    for path in (results_path, dataset_path):
        if not Path(path).exists():
            _usage_error(f"file not found: {path}")
    config, backends = _load_pipeline(config_path, ())
    try:
        result_dicts = [
            json.loads(line)
            for line in Path(results_path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        loaded = load_triplets(dataset_path)
        dataset = [t.to_dict() for t in loaded.triplets]
        metrics = ALL_METRICS
        if metrics_flag:
            requested = tuple(m.strip() for m in metrics_flag.split(",") if m.strip())
            unknown = [m for m in requested if m not in ALL_METRICS]
            if unknown:
                _usage_error(f"unknown metrics: {', '.join(unknown)}")
            metrics = requested
        report = evaluate_result_dicts(result_dicts, dataset, backends, metrics=metrics, seed=seed)
    except SystemExit:
        raise
    except Exception as err:  # noqa: BLE001 - malformed inputs exit 1
        _usage_error(str(err))
    if output_path is not None:
        Path(output_path).write_text(
            json.dumps(report.to_dict(), sort_keys=True, indent=2), encoding="utf-8"
        )
    click.echo(report.to_text())


@main.command()
@click.option("--config", "config_path", default=None)
@click.option("--input", "input_path", required=True, help="QA JSON-lines file.")
@click.option("--output", "output_path", default=None, help="Report JSON path.")
@click.option(
    "--variant",
    "variants",
    multiple=True,
    type=click.Choice(VARIANTS),
    help="Restrict to specific variants (default: all three plus the full pipeline).",
)
@click.option("--backend", "backend_overrides", multiple=True)
def ablate(config_path, input_path, output_path, variants, backend_overrides):
    """Ablation distance table over the pipeline variants."""
    config, backends = _load_pipeline(config_path, backend_overrides)
    corpus = _load_qa_pairs(input_path)
    chosen: list[str | None] = list(variants) if variants else [None, *VARIANTS]
    rows = {}
    any_failed = False
    for variant in chosen:
        label = variant or "full"
        results, summary = run_batch(corpus, config, backends, variant=variant)
        if summary.failed:
            any_failed = True
        rows[label] = [r for r in results if r.ok]
    try:
        report = ablation_report(rows, backends)
    except Exception as err:  # noqa: BLE001
        _usage_error(str(err))
    if output_path is not None:
        Path(output_path).write_text(
            json.dumps(report, sort_keys=True, indent=2), encoding="utf-8"
        )
    click.echo(ablation_report_text(report))
    if any_failed:
        sys.exit(2)


@main.command("beta-sweep")
@click.option("--config", "config_path", default=None)
@click.option("--input", "input_path", required=True, help="QA JSON-lines file.")
@click.option("--output", "output_path", default=None, help="Report JSON path.")
@click.option("--betas", "betas_flag", default=None, help="Comma-separated, e.g. 0,0.5,1,inf")
@click.option("--backend", "backend_overrides", multiple=True)
@click.option("--seed", default=0, show_default=True)
def beta_sweep_command(config_path, input_path, output_path, betas_flag, backend_overrides, seed):
    """Wiki-knowledge quality across the beta weighting sweep."""
    config, backends = _load_pipeline(config_path, backend_overrides)
    corpus = _load_qa_pairs(input_path)
    betas = DEFAULT_BETAS
    if betas_flag:
        try:
            betas = tuple(
                math.inf if term.strip().lower() in ("inf", "infinity") else float(term)
                for term in betas_flag.split(",")
                if term.strip()
            )
        except ValueError:
            _usage_error(f"invalid --betas: {betas_flag!r}")
        if not betas:
            _usage_error("--betas is empty")
    report = beta_sweep(corpus, config, backends, betas=betas, seed=seed)
    if output_path is not None:
        Path(output_path).write_text(
            json.dumps(report, sort_keys=True, indent=2), encoding="utf-8"
        )
    click.echo(beta_sweep_text(report))
    cell_failed = any(
        isinstance(cells.get(metric), dict)
        for cells in report["columns"].values()
        for metric in report["metrics"]
    ) or any(cells.get("failed") for cells in report["columns"].values())
    if cell_failed:
        sys.exit(2)


@main.command()
@click.option("--config", "config_path", default=None)
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--backend", "backend_overrides", multiple=True)
@click.option("--ui-dir", default=None, help="Static UI assets to serve at /.")
@click.option("--snapshot-dir", default=None, help="Session snapshot directory.")
@click.option("--followups", "followup_count", default=3, show_default=True)
def serve(config_path, port, host, backend_overrides, ui_dir, snapshot_dir, followup_count):
    """Run the HTTP service (and the UI when --ui-dir is given)."""
    import uvicorn

    from .service import create_app

    config, backends = _load_pipeline(config_path, backend_overrides)
    if ui_dir is not None and not Path(ui_dir).exists():
        _usage_error(f"ui dir not found: {ui_dir}")
    app = create_app(
        config,
        backends,
        followup_count=followup_count,
        snapshot_dir=snapshot_dir,
        ui_dir=ui_dir,
    )
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
