"""Command-line shell around the scoring core."""

import functools
import json
import sys

import click

from . import serialization
from .config import build_group_config, build_score_config, load_config_file
from .corpus import emit_prompt, filter_dataset, ingest
from .errors import ConfigError, DScoreError
from .report import ScoreReport, format_table, score_batch
from .rewards import score_group
from .score import score as score_pair
from .service import serve_http, serve_stdio


def _config_options(fn):
    @click.option("--config", "config_path", type=click.Path(exists=True),
                  default=None, help="JSON or TOML config file.")
    @click.option("--compiler-cmd", default=None,
                  help="Compiler command line (overrides DSCORE_CC).")
    @click.option("--solver-cmd", default=None,
                  help="SMT solver command line (overrides DSCORE_SMT).")
    @click.option("--timeout-sem", type=float, default=None,
                  help="Symbolic execution budget in seconds (default 30).")
    @click.option("--max-recompile-iters", type=int, default=None,
                  help="Recompile fix-up iteration cap (default 10).")
    @click.option("--penalties", default=None,
                  help="Penalty triple syn,ret,call (default -3,-2,-1.5).")
    @click.option("--gamma", type=float, default=None,
                  help="Weight of the feature-sum readability term (default 0.25).")
    @click.option("--delta", type=float, default=None,
                  help="Weight of the count-feature readability term (default 0.75).")
    @click.option("--unroll-bound", type=int, default=None,
                  help="Loop unroll bound (default 32).")
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return fn(*args, **kwargs)
    return wrapper


def _make_score_config(config_path, compiler_cmd, solver_cmd, timeout_sem,
                       max_recompile_iters, penalties, gamma, delta, unroll_bound):
    file_cfg = load_config_file(config_path) if config_path else {}
    pen = None
    if penalties is not None:
        pen = [p.strip() for p in penalties.split(",")]
    return build_score_config(
        file_cfg, compiler_cmd=compiler_cmd, solver_cmd=solver_cmd,
        timeout_sem=timeout_sem, max_recompile_iters=max_recompile_iters,
        penalties=pen, gamma=gamma, delta=delta, unroll_bound=unroll_bound,
    ), file_cfg


@click.group()
def main():
    """Quality scores and RL rewards for refined decompiled C functions."""


@main.command("score")
@click.argument("reference", type=click.Path(exists=True))
@click.argument("candidate", type=click.Path(exists=True))
@_config_options
def score_cmd(reference, candidate, config_path, compiler_cmd, solver_cmd,
              timeout_sem, max_recompile_iters, penalties, gamma, delta,
              unroll_bound):
    """Score CANDIDATE against the REFERENCE decompiled source."""
    try:
        cfg, _ = _make_score_config(config_path, compiler_cmd, solver_cmd,
                                    timeout_sem, max_recompile_iters, penalties,
                                    gamma, delta, unroll_bound)
    except ConfigError as ex:
        raise click.ClickException(str(ex))
    with open(reference) as fh:
        ref_src = fh.read()
    with open(candidate) as fh:
        cand_src = fh.read()
    result = score_pair(ref_src, cand_src, cfg)
    click.echo(serialization.dumps(result.to_json()))


@main.command("score-group")
@click.argument("reference", type=click.Path(exists=True))
@click.argument("candidates", nargs=-1, required=True,
                type=click.Path(exists=True))
@click.option("--num-generations", type=int, default=None)
@click.option("--jobs", type=int, default=1)
@_config_options
def score_group_cmd(reference, candidates, num_generations, jobs, config_path,
                    compiler_cmd, solver_cmd, timeout_sem, max_recompile_iters,
                    penalties, gamma, delta, unroll_bound):
    """Score a group of candidate files and emit normalized advantages."""
    try:
        cfg, file_cfg = _make_score_config(config_path, compiler_cmd, solver_cmd,
                                           timeout_sem, max_recompile_iters,
                                           penalties, gamma, delta, unroll_bound)
        group_cfg = build_group_config(file_cfg, num_generations=num_generations)
    except ConfigError as ex:
        raise click.ClickException(str(ex))
    with open(reference) as fh:
        ref_src = fh.read()
    sources = []
    for path in candidates:
        with open(path) as fh:
            sources.append(fh.read())
    group = score_group(ref_src, sources, group_cfg, cfg, jobs=jobs)
    click.echo(serialization.dumps({
        "rewards": group.rewards,
        "advantages": group.advantages,
        "unscorable_mask": group.unscorable_mask,
    }))


@main.command("score-batch")
@click.argument("corpus_path", type=click.Path(exists=True))
@click.option("--output", type=click.Path(), default=None,
              help="Write the JSON report here instead of stdout.")
@click.option("--jobs", type=int, default=1)
@_config_options
def score_batch_cmd(corpus_path, output, jobs, config_path, compiler_cmd,
                    solver_cmd, timeout_sem, max_recompile_iters, penalties,
                    gamma, delta, unroll_bound):
    """Score every candidate in a JSONL corpus against its original."""
    try:
        cfg, _ = _make_score_config(config_path, compiler_cmd, solver_cmd,
                                    timeout_sem, max_recompile_iters, penalties,
                                    gamma, delta, unroll_bound)
    except ConfigError as ex:
        raise click.ClickException(str(ex))
    corpus = ingest(corpus_path)
    report = score_batch(corpus, cfg, jobs=jobs)
    text = serialization.dumps(report.to_json())
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
        click.echo(format_table(report))
    else:
        click.echo(text)


@main.command("filter")
@click.argument("corpus_path", type=click.Path(exists=True))
@click.option("--min-lines", type=int, default=20, show_default=True)
@click.option("--min-cc", type=int, default=4, show_default=True,
              help="Minimum cyclomatic complexity (kept when CC >= this).")
@click.option("--output", type=click.Path(), default=None,
              help="Write the kept records as JSONL here.")
def filter_cmd(corpus_path, min_lines, min_cc, output):
    """Keep records with enough lines and branching to be worth refining."""
    corpus = ingest(corpus_path)
    kept, dropped = filter_dataset(corpus, min_lines=min_lines, min_cc=min_cc)
    if output:
        with open(output, "w") as fh:
            for record in kept:
                fh.write(json.dumps(record.to_json()) + "\n")
    click.echo(f"kept={len(kept)} dropped={len(dropped)} "
               f"errors={len(corpus.errors)}")


@main.command("ingest-check")
@click.argument("corpus_path", type=click.Path(exists=True))
def ingest_check_cmd(corpus_path):
    """Validate a JSONL corpus and report malformed lines."""
    corpus = ingest(corpus_path)
    unparseable = [r.id for r in corpus if not r.parse_ok]
    click.echo(f"records={len(corpus)} line_errors={len(corpus.errors)} "
               f"unparseable_sources={len(unparseable)}")
    for line_no, message in corpus.errors:
        click.echo(f"  line {line_no}: {message}")
    for rid in unparseable:
        click.echo(f"  record {rid}: source does not parse")
    if corpus.errors:
        sys.exit(1)


@main.command("emit-prompt")
@click.argument("corpus_path", type=click.Path(exists=True))
@click.option("--id", "record_id", default=None,
              help="Emit only the record with this id.")
def emit_prompt_cmd(corpus_path, record_id):
    """Emit the refinement chat prompt for corpus records."""
    corpus = ingest(corpus_path)
    for record in corpus:
        if record_id is not None and record.id != record_id:
            continue
        click.echo(json.dumps({"id": record.id,
                               "messages": emit_prompt(record)}))


@main.command("report")
@click.argument("report_path", type=click.Path(exists=True))
def report_cmd(report_path):
    """Render a saved score-batch JSON report as a table."""
    with open(report_path) as fh:
        data = json.load(fh)
    from .score import DScoreResult
    from .report import RecordReport
    records = []
    for rec in data.get("records", []):
        results = {tag: DScoreResult(r["kind"], r.get("value"),
                                     r.get("diagnostics") or {})
                   for tag, r in rec.get("results", {}).items()}
        records.append(RecordReport(rec["id"], results, rec.get("best_tag", "original")))
    click.echo(format_table(ScoreReport(records, data.get("summary", {}))))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8651, show_default=True)
@click.option("--stdio", is_flag=True, help="NDJSON over stdin/stdout instead of HTTP.")
@click.option("--jobs", type=int, default=None, help="Worker pool size.")
@click.option("--num-generations", type=int, default=None)
@_config_options
def serve_cmd(host, port, stdio, jobs, num_generations, config_path, compiler_cmd,
              solver_cmd, timeout_sem, max_recompile_iters, penalties, gamma,
              delta, unroll_bound):
    """Run the reward service."""
    try:
        cfg, file_cfg = _make_score_config(config_path, compiler_cmd, solver_cmd,
                                           timeout_sem, max_recompile_iters,
                                           penalties, gamma, delta, unroll_bound)
        group_cfg = build_group_config(file_cfg, num_generations=num_generations)
    except ConfigError as ex:
        raise click.ClickException(str(ex))
    if stdio:
        serve_stdio(cfg, group_cfg)
    else:
        serve_http(host, port, cfg, group_cfg, workers=jobs)


if __name__ == "__main__":
    main()
