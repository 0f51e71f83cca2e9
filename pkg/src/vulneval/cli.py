"""Command-line entry points: ingest, build, infer, eval, serve.

Every command is deterministic for a given config and seed (live NVD
fetching aside).  Exit codes: 0 success, 1 runtime failure, 2 usage.
"""

from __future__ import annotations

import difflib
import json
import logging
import sys
from pathlib import Path

import click

from . import corpus, dapt, evalmetrics, inference, instructions, nvd
from .config import Config, ConfigError
from .textclean import clean_description
from .tokenizers import get_tokenizer

logger = logging.getLogger(__name__)


def _load_config(path: str | None, seed: int | None) -> Config:
    try:
        return Config.load(path, seed=seed)
    except (ConfigError, OSError, ValueError) as exc:
        raise click.ClickException(f"bad configuration: {exc}")


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Configuration document (YAML or JSON).")
@click.option("--seed", type=int, default=None, help="Override the RNG seed.")
@click.option("--verbose", is_flag=True, help="Debug-level logging.")
@click.pass_context
def main(ctx, config_path, seed, verbose):
    """Vulnerability-evaluation pipeline."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = _load_config(config_path, seed)


def _load_stores(config: Config, assets, notifications, evaluations):
    paths = {
        "assets": assets or config.assets,
        "notifications": notifications or config.notifications,
        "evaluations": evaluations or config.evaluations,
    }
    for name, value in paths.items():
        if not value:
            raise click.UsageError(f"missing --{name} (or config key)")
    try:
        loaded_assets = corpus.load_store(paths["assets"], corpus.StoreKind.ASSETS)
        loaded_notifications = corpus.load_store(
            paths["notifications"], corpus.StoreKind.NOTIFICATIONS
        )
        loaded_evaluations = corpus.load_store(
            paths["evaluations"], corpus.StoreKind.EVALUATIONS
        )
    except (corpus.StoreError, OSError) as exc:
        raise click.ClickException(str(exc))
    return (
        corpus.index_by_id(loaded_assets, corpus.StoreKind.ASSETS),
        corpus.index_by_id(loaded_notifications, corpus.StoreKind.NOTIFICATIONS),
        loaded_evaluations,
    )


def _usable_contexts(assets, notifications, evaluations):
    contexts, exclusions = [], {}
    for evaluation in evaluations:
        verdict = corpus.validate_evaluation(evaluation)
        if verdict is not corpus.Verdict.USABLE:
            exclusions[verdict.value] = exclusions.get(verdict.value, 0) + 1
            continue
        contexts.append(corpus.join_evaluation(evaluation, assets, notifications))
    return contexts, exclusions


@main.command()
@click.option("--input", "input_path", type=click.Path(exists=True), default=None,
              help="Pre-downloaded NVD JSON document (hermetic ingest).")
@click.option("--fetch", is_flag=True, help="Fetch pages from the NVD API instead.")
@click.option("--pages", type=int, default=1, show_default=True)
@click.option("--page-size", type=int, default=200, show_default=True)
@click.option("--notifications", "notifications_path", type=click.Path(exists=True),
              default=None, help="Organization notifications store to render as well.")
@click.option("--outdir", type=click.Path(), default=None)
@click.pass_obj
def ingest(config: Config, input_path, fetch, pages, page_size, notifications_path, outdir):
    """Render the pretraining corpus and emit the 90:10 split."""
    if not input_path and not fetch:
        raise click.UsageError("provide --input FILE or --fetch")
    out = Path(outdir or config.output_dir) / "dapt"
    try:
        if input_path:
            records = nvd.load_cve_file(input_path)
        else:
            client = nvd.NvdClient(
                endpoint=config.nvd_endpoint,
                api_key=config.nvd_api_key,
                request_delay=config.nvd_request_delay,
            )
            records = list(client.fetch_all(
                page_size=page_size, limit=pages * page_size
            ))
    except (nvd.IngestError, OSError, ValueError) as exc:
        raise click.ClickException(f"ingest failed: {exc}")

    documents = []
    for record in records:
        prepared = dapt.prepare_cve_record(record)
        if prepared is not None:
            documents.append(dapt.render_cve_document(prepared))
    if notifications_path:
        loaded = corpus.load_store(notifications_path, corpus.StoreKind.NOTIFICATIONS)
        for notification in loaded:
            document = dapt.render_notification_document(
                clean_description(notification.description, org_mode=True),
                notification.base_temporal_vector,
            )
            if document is not None:
                documents.append(document)
    if not documents:
        raise click.ClickException("no documents produced; nothing to emit")
    manifest = dapt.emit_dapt_corpus(documents, seed=config.seed, out_dir=out)
    click.echo(json.dumps(manifest, indent=2))


@main.command()
@click.option("--assets", type=click.Path(exists=True), default=None)
@click.option("--notifications", type=click.Path(exists=True), default=None)
@click.option("--evaluations", type=click.Path(exists=True), default=None)
@click.option("--outdir", type=click.Path(), default=None)
@click.option("--group-by-key/--random-split", default=None,
              help="Keep all task records of one evaluation in one split.")
@click.option("--golden-check", type=click.Path(exists=True), default=None,
              help="Verify some built record matches this golden text exactly.")
@click.pass_obj
def build(config: Config, assets, notifications, evaluations, outdir, group_by_key,
          golden_check):
    """Build the instruction dataset: render, filter, dedup, split."""
    asset_index, notification_index, evaluation_rows = _load_stores(
        config, assets, notifications, evaluations
    )
    tokenizer = get_tokenizer(config.tokenizer)
    try:
        contexts, exclusions = _usable_contexts(
            asset_index, notification_index, evaluation_rows
        )
    except corpus.StoreError as exc:
        raise click.ClickException(str(exc))

    records = []
    for context in contexts:
        records.extend(instructions.render_all_tasks(context, tokenizer))
    records, token_report = instructions.filter_records(
        records, max_tokens=config.max_record_tokens
    )
    before_dedup = len(records)
    records = instructions.deduplicate(records)
    exclusions.update(token_report)
    exclusions["Duplicate"] = before_dedup - len(records)

    if not records:
        raise click.ClickException("no usable records; see the exclusion report")
    out = Path(outdir or config.output_dir) / "instructions"
    group = config.group_split_by_key if group_by_key is None else group_by_key
    manifest = instructions.split_dataset(
        records, seed=config.seed, out_dir=out, group_by_key=group
    )
    report = {
        "records": len(records),
        "exclusions": exclusions,
        "splits": {k: v["records"] for k, v in manifest["splits"].items()},
        "output_dir": str(out),
    }
    if golden_check:
        golden = Path(golden_check).read_text(encoding="utf-8")
        rendered = [r.training_text for r in records]
        if golden in rendered:
            report["golden_check"] = "match"
        else:
            closest = difflib.get_close_matches(golden, rendered, n=1, cutoff=0.0)
            diff = "\n".join(difflib.unified_diff(
                golden.splitlines(), (closest[0] if closest else "").splitlines(),
                fromfile="golden", tofile="closest-rendered", lineterm="",
            ))
            report["golden_check"] = "mismatch"
            click.echo(diff, err=True)
    click.echo(json.dumps(report, indent=2))
    if report.get("golden_check") == "mismatch":
        raise click.ClickException("golden prompt check failed")


@main.command()
@click.option("--assets", type=click.Path(exists=True), default=None)
@click.option("--notifications", type=click.Path(exists=True), default=None)
@click.option("--evaluations", type=click.Path(exists=True), default=None)
@click.option("--backend", "backend_spec", default=None,
              help='Backend URL, or "stub" for the gold-response lookup stub.')
@click.option("--drafts", "drafts_path", type=click.Path(), default=None)
@click.option("--skip-vector-rule/--no-skip-vector-rule", default=True,
              help="Skip Vector generation for NotAffected drafts.")
@click.option("--beam-size", type=int, default=None)
@click.option("--max-workers", type=int, default=None)
@click.pass_obj
def infer(config: Config, assets, notifications, evaluations, backend_spec,
          drafts_path, skip_vector_rule, beam_size, max_workers):
    """Generate drafts for every usable evaluation context."""
    asset_index, notification_index, evaluation_rows = _load_stores(
        config, assets, notifications, evaluations
    )
    tokenizer = get_tokenizer(config.tokenizer)
    contexts, _ = _usable_contexts(
        asset_index, notification_index, evaluation_rows
    )
    if not contexts:
        raise click.ClickException("no usable evaluation contexts")

    spec = backend_spec or (
        "stub" if config.backend_kind == "stub" else config.backend_url
    )
    if not spec:
        raise click.UsageError("provide --backend URL|stub (or configure one)")
    if spec == "stub":
        responses = {}
        for context in contexts:
            for task in instructions.TaskType:
                responses[instructions.render_prompt(context, task)] = (
                    instructions.render_response(context, task)
                )
        backend = inference.LookupTableBackend(responses)
    else:
        backend = inference.HttpCompletionBackend(
            spec, context_window=config.backend_context_window
        )
    if not skip_vector_rule:
        logger.info("vector-skip serving rule disabled by flag")
    params = inference.DecodeParams(
        beam_size=beam_size if beam_size is not None else config.beam_size,
        temperature=config.temperature,
        top_p=config.top_p,
    )
    out = Path(drafts_path) if drafts_path else Path(config.output_dir) / "drafts.jsonl"
    result = inference.run_pipeline(
        contexts,
        backend,
        output_path=out,
        params=params,
        tokenizer=tokenizer,
        max_workers=max_workers if max_workers is not None else config.max_workers,
        skip_vector_rule=skip_vector_rule,
    )
    click.echo(json.dumps({
        "drafts": len(result.drafts),
        "errors": len(result.errors),
        "small_batch": len(result.plan.small),
        "large_batch": len(result.plan.large),
        "large_batch_context_budget": result.plan.context_budget,
        "output": str(out),
    }, indent=2))
    if result.errors:
        raise click.ClickException(f"{len(result.errors)} evaluation(s) failed")


@main.command(name="eval")
@click.option("--drafts", "drafts_path", type=click.Path(exists=True), required=True)
@click.option("--assets", type=click.Path(exists=True), default=None)
@click.option("--notifications", type=click.Path(exists=True), default=None)
@click.option("--evaluations", type=click.Path(exists=True), default=None)
@click.option("--outdir", type=click.Path(), default=None)
@click.option("--raw", is_flag=True,
              help="Score raw category outputs instead of corrected fields.")
@click.pass_obj
def eval_cmd(config: Config, drafts_path, assets, notifications, evaluations, outdir, raw):
    """Score drafts against the gold evaluations store."""
    _, _, evaluation_rows = _load_stores(config, assets, notifications, evaluations)
    gold = {e.key: e for e in evaluation_rows}
    drafts, _ = inference.load_drafts(drafts_path)

    internal, customer, categories, justifications, vectors = [], [], [], [], []
    missing = 0
    for draft in drafts:
        expected = gold.get(draft.evaluation_key)
        if expected is None:
            missing += 1
            continue
        internal.append((draft.internal_comment, expected.internal_comment))
        customer.append((draft.customer_comment, expected.customer_comment))
        if raw:
            predicted_category = draft.raw.get("Category", "")
            expected_category = (
                expected.vex_category.value if expected.vex_category else ""
            )
            categories.append((predicted_category, expected_category))
        else:
            categories.append((
                draft.vex_category.value if draft.vex_category else "None",
                expected.vex_category.value if expected.vex_category else "None",
            ))
        justifications.append((
            draft.vex_justification.value if draft.vex_justification else "None",
            expected.vex_justification.value,
        ))
        vectors.append((draft.vector, expected.vector))
    if missing:
        logger.warning("%d draft(s) had no matching gold evaluation", missing)
    if not categories:
        raise click.ClickException("no drafts matched the gold store")

    report = evalmetrics.build_report(
        internal_pairs=internal,
        customer_pairs=customer,
        category_pairs=categories,
        justification_pairs=justifications,
        vector_pairs=vectors,
    )
    out = Path(outdir or config.output_dir) / "metrics"
    json_path, csv_path = evalmetrics.emit_report(report, out)
    click.echo(json.dumps({
        "report": str(json_path),
        "csv": str(csv_path),
        "rouge_l_internal": report.rouge_l_internal_comment,
        "rouge_l_customer": report.rouge_l_customer_comment,
        "micro_f1_category": report.micro_f1_category,
        "micro_f1_justification": report.micro_f1_justification,
    }, indent=2))


@main.command()
@click.option("--port", type=int, default=None)
@click.option("--storage-dir", type=click.Path(), default=None)
@click.pass_obj
def serve(config: Config, port, storage_dir):
    """Run the review service until interrupted; snapshots on shutdown."""
    import uvicorn

    from .review import ReviewStore
    from .service import create_app

    store = ReviewStore(storage_dir or config.service_storage_dir)
    app = create_app(store)
    try:
        uvicorn.run(app, host="127.0.0.1", port=port or config.service_port,
                    log_level="info")
    except (OSError, SystemExit) as exc:
        raise click.ClickException(f"service stopped: {exc}")
    finally:
        store.snapshot()


if __name__ == "__main__":
    main(prog_name="vulneval")
