"""
MemWeaver CLI entry point.

Every command resolves one AppConfig (flags < --config TOML file < MEMWEAVER_*
environment) before touching any module, and records it in its output
artifacts as ``config_snapshot``.

Exit codes: 0 on success, 1 on a domain error (one line on stderr,
``error: <ClassName>: <message>``), 2 on a usage error.
"""
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional

import click

# allow running as a plain script from the repository root
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.configs import AppConfig
from src.core import (
    MemWeaverError,
    MissingGraph,
    PreconditionError,
    StoreIOError,
    load_history,
    load_query,
    load_records,
    load_store,
    save_store,
)
from src.core.builder import MemoryBuilder, compare_update_strategies
from src.eval import EvalRunner, format_report_table, load_dataset, save_report
from src.graph import edge_census, to_dot
from src.models import CognitiveMode, PromptBundle, TaskType
from src.promptgen import answer, assemble_prompt, get_template, memory_records
from src.providers import estimate_tokens
from src.walk import traversal_stats

logger = logging.getLogger("memweaver.cli")


class MemWeaverGroup(click.Group):
    """Maps domain errors to exit code 1 with a single machine-parseable line."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except MemWeaverError as e:
            message = " ".join(str(e).split())
            click.echo(f"error: {e.__class__.__name__}: {message}", err=True)
            ctx.exit(1)


def resolve_config(ctx: click.Context, **flags: Any) -> AppConfig:
    config = AppConfig.resolve(ctx.obj.get("config_file"), **flags)
    if config.DEBUG:
        logging.getLogger().setLevel(logging.DEBUG)
    elif not ctx.obj.get("verbose"):
        logging.getLogger().setLevel(config.LOG_LEVEL.upper())
    return config


def write_text(path: str, content: str) -> None:
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as e:
        raise StoreIOError(f"cannot write {path}: {e}") from e


def write_json(path: str, payload: Any) -> None:
    write_text(path, json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def parse_ints(value: Optional[str], option: str = "--seeds") -> Optional[list[int]]:
    if value is None:
        return None
    try:
        return [int(seed) for seed in value.split(",") if seed.strip()]
    except ValueError:
        raise click.BadParameter(f"'{value}' is not a comma-separated list of integers", param_hint=option)


@click.group(cls=MemWeaverGroup)
@click.version_option(version="0.1.0")
@click.option("--config", "config_file", type=click.Path(exists=True, dir_okay=False),
              help="TOML file with upper-case field names (e.g. WALK_ALPHA = 1.5)")
@click.option("--verbose", "-v", is_flag=True, help="DEBUG logging")
@click.pass_context
def cli(ctx: click.Context, config_file: Optional[str], verbose: bool):
    """
    MemWeaver: behavioral and cognitive user memory for personalized generation.
    """
    ctx.ensure_object(dict)
    ctx.obj["config_file"] = config_file
    ctx.obj["verbose"] = verbose
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@cli.command()
@click.option("--history", "history_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="User history (JSON Lines, or a LaMP questions file with --format lamp)")
@click.option("--format", "fmt", type=click.Choice(["jsonl", "lamp"]), default="jsonl", help="History format")
@click.option("--user-id", help="User id (JSON Lines) or LaMP entry id")
@click.option("--store", "store_path", required=True, help="Output store file")
@click.option("--k", type=int, help="K-means clusters")
@click.option("--seed", type=int, help="K-means seed")
@click.option("--semantic-cap", type=int, help="Keep at most this many nearest same-cluster neighbours")
@click.option("--segment-mode", type=click.Choice(["breakpoints", "kmeans", "none"]), help="Segmentation")
@click.option("--no-cognitive", is_flag=True, help="Skip summarization")
@click.option("--dump-prompts", type=click.Path(file_okay=False), help="Write every summary prompt here")
@click.pass_context
def build(ctx, history_path, fmt, user_id, store_path, k, seed, semantic_cap, segment_mode, no_cognitive,
          dump_prompts):
    """
    Build a memory store from a user history.

    \b
    memweaver build --history h.jsonl --store s.json --k 5 --seed 7
    """
    config = resolve_config(ctx, GRAPH_K=k, GRAPH_SEED=seed, GRAPH_SEMANTIC_CAP=semantic_cap,
                            SEGMENT_MODE=segment_mode)
    history = load_history(history_path, fmt, user_id)
    builder = MemoryBuilder(config, dump_dir=dump_prompts)
    store = builder.build(history, with_cognitive=not no_cognitive)
    save_store(store, store_path)
    click.echo(
        f"Built {store_path}: {len(history)} records, {len(store.graph.semantic_edges)} semantic edges, "
        f"{len(store.cognitive.segments) if store.cognitive else 0} segments"
    )


@cli.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--new", "batch_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSON Lines batch of newer records")
@click.option("--out", help="Output store file (default: overwrite --store)")
@click.option("--dump-prompts", type=click.Path(file_okay=False))
@click.pass_context
def update(ctx, store_path, batch_path, out, dump_prompts):
    """Splice a batch of newer records into a store."""
    config = resolve_config(ctx)
    store = load_store(store_path)
    records = load_records(batch_path, start_index=len(store.history))
    builder = MemoryBuilder(config, dump_dir=dump_prompts)
    updated = builder.update(store, records)
    save_store(updated, out or store_path)
    click.echo(
        f"Updated {out or store_path}: +{len(records)} records, "
        f"{builder.embedder.stats['texts_embedded']} embedded, {builder.generator.stats['calls']} generation calls"
    )


@cli.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--query-file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, help="Behavioral memory JSON")
@click.option("--retriever", type=click.Choice(["walk", "random", "recency", "dense", "none"]))
@click.option("--alpha", type=float)
@click.option("--lambda1", type=float)
@click.option("--lambda2", type=float)
@click.option("--steps", type=int, help="Maximum walk steps")
@click.option("--walks", type=int, help="Independent walks merged per query")
@click.option("--seed", type=int)
@click.option("--no-temporal-edges", is_flag=True, default=None, help="Walk semantic edges only")
@click.option("--no-semantic-edges", is_flag=True, default=None, help="Walk temporal edges only")
@click.option("--attach", is_flag=True, help="Append the walk log to the store")
@click.pass_context
def retrieve(ctx, store_path, query_file, out, retriever, alpha, lambda1, lambda2, steps, walks, seed,
             no_temporal_edges, no_semantic_edges, attach):
    """
    Extract the behavioral memory of a query.

    \b
    memweaver retrieve --query-file q.json --store s.json --seed 42 --out mem.json
    """
    config = resolve_config(
        ctx, EVAL_RETRIEVER=retriever, WALK_ALPHA=alpha, WALK_LAMBDA1=lambda1, WALK_LAMBDA2=lambda2,
        WALK_MAX_STEPS=steps, WALK_NUM_WALKS=walks, WALK_SEED=seed,
        WALK_USE_TEMPORAL_EDGES=False if no_temporal_edges else None,
        WALK_USE_SEMANTIC_EDGES=False if no_semantic_edges else None,
    )
    store = load_store(store_path)
    query = load_query(query_file)
    memory = MemoryBuilder(config).retrieve(store, query)

    records = memory_records(memory, store.history)
    write_json(out, {
        "query_id": memory.query_id,
        "retriever": memory.retriever.value,
        "seed": memory.seed,
        "visited": [
            {"behavior_id": r.behavior_id, "seq_index": r.seq_index, "text": r.text}
            for r in (store.history.get(bid) for bid in memory.visited)
        ],
        "step_log": [step.model_dump(mode="json") for step in memory.step_log],
        "halted_at": memory.halted_at,
        "config_snapshot": config.snapshot(),
    })
    if attach:
        save_store(store.model_copy(update={"walk_logs": list(store.walk_logs) + [memory]}), store_path)
    click.echo(f"Visited {len(memory.visited)} records ({len(records)} in prompt order) -> {out}")


@cli.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--incremental", "batch_path", type=click.Path(exists=True, dir_okay=False),
              help="Summarize only this batch of newer records and refresh the global summary")
@click.option("--segment-mode", type=click.Choice(["breakpoints", "kmeans", "none"]))
@click.option("--dump-prompts", type=click.Path(file_okay=False), help="Write every summary prompt here")
@click.option("--out", help="Output store file (default: overwrite --store)")
@click.pass_context
def summarize(ctx, store_path, batch_path, segment_mode, dump_prompts, out):
    """(Re)build the cognitive memory of a store."""
    config = resolve_config(ctx, SEGMENT_MODE=segment_mode)
    store = load_store(store_path)
    builder = MemoryBuilder(config, dump_dir=dump_prompts)
    if batch_path:
        if store.cognitive is None:
            raise PreconditionError("incremental summarization needs an existing cognitive memory")
        store = builder.update(store, load_records(batch_path, start_index=len(store.history)))
    else:
        store = builder.summarize(store)
    save_store(store, out or store_path)
    cognitive = store.cognitive
    click.echo(
        f"{len(cognitive.local_summaries)} local summaries, {builder.generator.stats['calls']} generation calls"
        f"{' (stale)' if cognitive.stale else ''}"
    )
    click.echo(cognitive.global_summary)


@cli.command()
@click.option("--task", required=True, help="LaMP task, e.g. lamp1 or LaMP-5")
@click.option("--query", "query_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, help="Rendered prompt (.txt) or the full prompt bundle (.json)")
@click.option("--retriever", type=click.Choice(["walk", "random", "recency", "dense", "none"]))
@click.option("--seed", type=int)
@click.option("--no-cognitive", is_flag=True)
@click.option("--cognitive-mode", type=click.Choice(["global", "locals"]))
@click.option("--max-input-tokens", type=int)
@click.pass_context
def prompt(ctx, task, query_file, store_path, out, retriever, seed, no_cognitive, cognitive_mode, max_input_tokens):
    """Assemble the memory-augmented prompt of a query."""
    config = resolve_config(ctx, EVAL_RETRIEVER=retriever, WALK_SEED=seed, EVAL_COGNITIVE_MODE=cognitive_mode,
                            LLM_MAX_INPUT_TOKENS=max_input_tokens)
    task = TaskType.parse(task)
    get_template(task)
    store = load_store(store_path)
    query = load_query(query_file).model_copy(update={"task": task})
    memory = MemoryBuilder(config).retrieve(store, query)
    bundle = assemble_prompt(
        task, query, memory_records(memory, store.history),
        None if no_cognitive else store.cognitive,
        config.generation_config, CognitiveMode(config.EVAL_COGNITIVE_MODE),
    )
    if out.endswith(".json"):
        write_json(out, bundle.model_dump(mode="json"))
    else:
        write_text(out, bundle.rendered)
    click.echo(f"Prompt ~{bundle.token_estimate} tokens, {bundle.dropped_entries} entries dropped -> {out}")


@cli.command(name="answer")
@click.option("--prompt", "prompt_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Prompt bundle (.json) or rendered prompt text")
@click.option("--task", help="Task of a plain-text prompt (default LaMP-5)")
@click.option("--label", "labels", multiple=True, help="Candidate label of a plain-text classification prompt")
@click.option("--out", help="Write the prediction here instead of stdout")
@click.pass_context
def answer_command(ctx, prompt_path, task, labels, out):
    """Generate the answer of an assembled prompt."""
    config = resolve_config(ctx)
    content = Path(prompt_path).read_text(encoding="utf-8")
    if prompt_path.endswith(".json"):
        bundle = PromptBundle.model_validate_json(content)
    else:
        task = TaskType.parse(task or "LaMP-5")
        if not labels:
            labels = tuple(get_template(task).fixed_labels or ())
        bundle = PromptBundle(
            task=task, instruction="", query_block="", rendered=content, labels=list(labels),
            token_estimate=estimate_tokens(content),
        )
    builder = MemoryBuilder(config)
    result = answer(bundle, builder.generator)
    if out:
        write_text(out, result.prediction + "\n")
    click.echo(result.prediction)


@cli.command(name="eval")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True),
              help="LaMP directory or questions file, or JSON Lines cases")
@click.option("--outputs", "outputs_path", type=click.Path(exists=True, dir_okay=False),
              help="LaMP outputs file for a questions file")
@click.option("--seeds", help="Comma-separated seeds, e.g. 0,1,2,3,4")
@click.option("--retriever", type=click.Choice(["walk", "random", "recency", "dense", "none"]))
@click.option("--no-cognitive", is_flag=True, default=None)
@click.option("--cognitive-mode", type=click.Choice(["global", "locals"]))
@click.option("--stemming", is_flag=True, default=None, help="Porter stemming for ROUGE")
@click.option("--workers", type=int)
@click.option("--report", "report_path", help="MetricReport JSON")
@click.option("--predictions", "predictions_path", help="Predictions JSON Lines")
@click.pass_context
def eval_command(ctx, dataset_path, outputs_path, seeds, retriever, no_cognitive, cognitive_mode, stemming,
                 workers, report_path, predictions_path):
    """Evaluate a dataset and print the metric table."""
    config = resolve_config(
        ctx, EVAL_SEEDS=parse_ints(seeds), EVAL_RETRIEVER=retriever,
        EVAL_USE_COGNITIVE=False if no_cognitive else None, EVAL_COGNITIVE_MODE=cognitive_mode,
        EVAL_ROUGE_STEMMING=True if stemming else None, EVAL_WORKERS=workers,
    )
    cases = load_dataset(dataset_path, outputs_path)
    runner = EvalRunner(config)
    report = runner.run(cases)
    if report_path:
        save_report(report, report_path)
    if predictions_path:
        write_text(predictions_path, "".join(
            json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n" for row in runner.predictions
        ))
    click.echo(format_report_table(report))


@cli.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dot", "dot_path", help="Write Graphviz DOT source here ('-' for stdout)")
@click.pass_context
def stats(ctx, store_path, dot_path):
    """Print the edge census and the traversal fractions of attached walk logs."""
    resolve_config(ctx)
    store = load_store(store_path)
    if store.graph is None:
        raise MissingGraph(f"store of user '{store.user_id}' has no graph")

    census = edge_census(store.graph)
    click.echo(f"nodes: {len(store.graph.nodes)}")
    for kind in ("temporal-only", "semantic-only", "both"):
        click.echo(f"{kind}: {census[kind]}")
    if store.walk_logs:
        traversal = traversal_stats(store.walk_logs)
        click.echo(
            f"walk steps: {traversal.steps} (temporal {traversal.temporal_fraction:.4f}, "
            f"semantic {traversal.semantic_fraction:.4f})"
        )
    if dot_path == "-":
        click.echo(to_dot(store.graph))
    elif dot_path:
        write_text(dot_path, to_dot(store.graph))


@cli.command(name="compare-updates")
@click.option("--history", "history_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["jsonl", "lamp"]), default="jsonl")
@click.option("--split", required=True, help="Batch sizes, e.g. 8,4; the first batch is the initial build")
@click.option("--no-cognitive", is_flag=True)
@click.pass_context
def compare_updates(ctx, history_path, fmt, split, no_cognitive):
    """Compare full rebuild, incremental update and no update on one history."""
    config = resolve_config(ctx)
    sizes = parse_ints(split, "--split")
    history = load_history(history_path, fmt)
    results = compare_update_strategies(history, sizes, config, with_cognitive=not no_cognitive)
    columns = ["embedding_calls", "generation_calls", "nodes", "temporal_edges", "semantic_edges", "local_summaries"]
    click.echo("strategy      " + "  ".join(columns))
    for strategy, row in results.items():
        click.echo(f"{strategy:<14}" + "  ".join(f"{row[c]:>{len(c)}}" for c in columns))


def main():
    cli(obj={})


if __name__ == "__main__":
    main()
