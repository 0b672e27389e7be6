"""Command-line pipeline: corpus prep → embed → whiten → retrieve → prompt →
generate → evaluate, plus ablation and human-study helpers."""

from __future__ import annotations

import functools
import json
import sys

import click
import numpy as np

from . import codeform, corpus as corpus_mod, embedders, evaluation, llm, promptgen, retrieval, semantic
from .config import ConfigError, PipelineConfig
from .manifest import write_manifest

EXIT_DATA_ERROR = 3
EXIT_REMOTE_ERROR = 4

_DATA_ERRORS = (
    corpus_mod.CorpusError,
    semantic.FormatError,
    semantic.WhiteningError,
    retrieval.RetrievalError,
    promptgen.PromptError,
    evaluation.EvalError,
    embedders.EmbedError,
    ConfigError,
    llm.CacheMissError,
    OSError,
    json.JSONDecodeError,
    KeyError,
    ValueError,
)


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except llm.AuthError as exc:
            _fail(EXIT_REMOTE_ERROR, str(exc))
        except llm.CacheMissError as exc:
            _fail(EXIT_DATA_ERROR, str(exc))
        except llm.LlmError as exc:
            _fail(EXIT_REMOTE_ERROR, str(exc))
        except _DATA_ERRORS as exc:
            _fail(EXIT_DATA_ERROR, str(exc))

    return wrapper


def _config_from(config_path, **overrides) -> PipelineConfig:
    config = PipelineConfig.load(config_path) if config_path else PipelineConfig()
    return config.override(**overrides)


config_option = click.option(
    "--config", "config_path", type=click.Path(exists=True), default=None,
    help="key=value config file; flags override it.",
)


@click.group()
def main():
    """Retrieval-augmented comment generation for smart-contract code."""


# --- corpus stages -------------------------------------------------------


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@handle_errors
def ingest(input_path, output_path):
    """Validate a raw one-JSON-per-line corpus and write the normalized store."""
    with open(input_path, encoding="utf-8") as fh:
        store, issues = corpus_mod.ingest(fh)
    for issue in issues:
        click.echo(f"error: line {issue.line}: {issue.message}", err=True)
    corpus_mod.save_corpus(store, output_path)
    write_manifest(output_path, "ingest", [input_path], {"issues": len(issues)})
    click.echo(f"ingested {len(store)} pairs ({len(issues)} bad lines)")


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@click.option("--report", "report_path", type=click.Path(), default=None)
@click.option("--dup-code-threshold", default=2, show_default=True)
@click.option("--template-freq-threshold", default=20, show_default=True)
@click.option("--min-words", default=4, show_default=True)
@click.option("--min-words-field", type=click.Choice(["comment", "code"]), default="comment")
@handle_errors
def clean(input_path, output_path, report_path, dup_code_threshold, template_freq_threshold,
          min_words, min_words_field):
    """Drop duplicated-comment, template, and too-short pairs."""
    store = corpus_mod.load_corpus(input_path)
    cleaned, removals = corpus_mod.clean(
        store, dup_code_threshold, template_freq_threshold, min_words, min_words_field
    )
    corpus_mod.save_corpus(cleaned, output_path)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            for removal in removals:
                pair = store[removal.id]
                fh.write(json.dumps({
                    "id": pair.id, "code": pair.code, "comment": pair.comment,
                    "rule": removal.rule,
                }, ensure_ascii=False) + "\n")
    write_manifest(output_path, "clean", [input_path], {
        "dup_code_threshold": dup_code_threshold,
        "template_freq_threshold": template_freq_threshold,
        "min_words": min_words, "min_words_field": min_words_field,
    })
    click.echo(f"kept {len(cleaned)} pairs, removed {len(removals)}")


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True)
@click.option("--ratios", default="0.8,0.1,0.1", show_default=True)
@handle_errors
def split(input_path, output_path, seed, ratios):
    """Tag pairs with train/validation/test splits."""
    parts = tuple(float(x) for x in ratios.split(","))
    if len(parts) != 3:
        _fail(EXIT_DATA_ERROR, f"expected three ratios, got {ratios!r}")
    store = corpus_mod.load_corpus(input_path)
    tagged = corpus_mod.split(store, parts, seed)
    corpus_mod.save_corpus(tagged, output_path)
    write_manifest(output_path, "split", [input_path], {"seed": seed, "ratios": parts})
    counts = corpus_mod.stats(tagged).counts
    click.echo(json.dumps(counts))


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@handle_errors
def stats(input_path):
    """Print per-split counts and average token lengths."""
    store = corpus_mod.load_corpus(input_path)
    result = corpus_mod.stats(store)
    click.echo(json.dumps({
        "counts": result.counts,
        "avg_code_tokens": result.avg_code_tokens,
        "avg_comment_tokens": result.avg_comment_tokens,
    }, indent=2))


# --- embeddings and whitening --------------------------------------------


@main.command()
@click.argument("corpus_path", type=click.Path(exists=True))
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@click.option("--service", "service_url", default=None, help="embedding service base URL")
@click.option("--import", "import_path", type=click.Path(exists=True), default=None,
              help="pre-computed {id, vector} JSON lines")
@click.option("--provider", type=click.Choice(["hash"]), default=None,
              help="built-in offline provider")
@click.option("--dim", default=64, show_default=True, help="dimension for the hash provider")
@click.option("--pooling", default="first_last_avg", show_default=True)
@config_option
@handle_errors
def embed(corpus_path, output_path, service_url, import_path, provider, dim, pooling, config_path):
    """Produce an SCEB embedding file for a corpus."""
    config = _config_from(config_path)
    store = corpus_mod.load_corpus(corpus_path)
    chosen = [x for x in (service_url, import_path, provider) if x]
    if len(chosen) != 1:
        _fail(EXIT_DATA_ERROR, "choose exactly one of --service, --import, --provider")
    if service_url:
        matrix = embedders.service_embed_corpus(
            store, service_url, pooling=pooling, max_length=config.max_input_length
        )
    elif import_path:
        matrix = embedders.import_vectors(import_path, store)
    else:
        matrix = embedders.hash_embed_corpus(store, dim, config.max_input_length)
    semantic.save_embeddings(matrix, output_path)
    write_manifest(output_path, "embed", [corpus_path], {
        "provider": service_url or import_path or provider, "dim": matrix.dim,
    })
    click.echo(f"wrote {matrix.count}x{matrix.dim} embeddings")


@main.group()
def whiten():
    """Fit or apply the whitening transform."""


@whiten.command("fit")
@click.argument("embeddings_path", type=click.Path(exists=True))
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@click.option("-d", "--dim", "d", default=None, type=int, help="reduced dimension")
@click.option("--ids-from", "ids_corpus", type=click.Path(exists=True), default=None,
              help="restrict fitting rows to this corpus's train split")
@config_option
@handle_errors
def whiten_fit(embeddings_path, output_path, d, ids_corpus, config_path):
    config = _config_from(config_path, whitened_dim=d)
    matrix = semantic.load_embeddings(embeddings_path)
    if ids_corpus:
        train_ids = set(corpus_mod.load_corpus(ids_corpus).subset("train").ids())
        keep = [i for i, pid in enumerate(matrix.ids) if pid in train_ids]
        matrix = semantic.EmbeddingMatrix(
            [matrix.ids[i] for i in keep], matrix.data[keep]
        )
    target = min(config.whitened_dim, semantic.usable_rank(matrix))
    model = semantic.fit_whitening(matrix, target)
    semantic.save_whitening(model, output_path)
    write_manifest(output_path, "whiten-fit", [embeddings_path], {"d": target})
    click.echo(f"fitted whitening {model.input_dim}->{model.output_dim} on {model.source_count} rows")


@whiten.command("apply")
@click.argument("model_path", type=click.Path(exists=True))
@click.argument("embeddings_path", type=click.Path(exists=True))
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@handle_errors
def whiten_apply(model_path, embeddings_path, output_path):
    model = semantic.load_whitening(model_path)
    matrix = semantic.load_embeddings(embeddings_path)
    whitened = semantic.apply_whitening(model, matrix.data)
    semantic.save_embeddings(
        semantic.EmbeddingMatrix(matrix.ids, whitened.astype(np.float32)), output_path
    )
    write_manifest(output_path, "whiten-apply", [model_path, embeddings_path], {})
    click.echo(f"whitened {matrix.count} rows to dimension {model.output_dim}")


# --- retrieval and prompting ---------------------------------------------


def _build_index(corpus_path, embeddings_path, whitening_path):
    store = corpus_mod.load_corpus(corpus_path)
    train = store.subset("train")
    matrix = semantic.load_embeddings(embeddings_path)
    model = semantic.load_whitening(whitening_path) if whitening_path else None
    index = retrieval.RetrievalIndex(train, matrix, model)
    return store, matrix, index


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--embeddings", "embeddings_path", required=True, type=click.Path(exists=True))
@click.option("--whitening", "whitening_path", type=click.Path(exists=True), default=None)
@click.option("--strategy", type=click.Choice(["full", "random", "no-whitening", "semantic-only"]),
              default="full", show_default=True)
@click.option("--n", "top_n", default=None, type=int)
@click.option("--k", default=None, type=int)
@click.option("--lambda", "lam", default=None, type=float)
@click.option("--seed", default=None, type=int)
@click.option("--queries", "query_split", default="test", show_default=True)
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@config_option
@handle_errors
def retrieve(corpus_path, embeddings_path, whitening_path, strategy, top_n, k, lam, seed,
             query_split, output_path, config_path):
    """Select demonstrations for every query in the chosen split."""
    config = _config_from(config_path, top_n=top_n, k=k, lam=lam, seed=seed)
    strategy = strategy.replace("-", "_")
    if strategy in ("full", "semantic_only") and whitening_path is None:
        _fail(EXIT_DATA_ERROR, f"strategy {strategy} requires --whitening")
    store, matrix, index = _build_index(corpus_path, embeddings_path, whitening_path)
    rconfig = retrieval.RetrievalConfig(config.top_n, config.k, config.lam, strategy, config.seed)
    results = []
    short = 0
    for pair in store.subset(query_split):
        demos = retrieval.retrieve(pair.id, pair.code, matrix.row(pair.id), index, rconfig)
        short += demos.short_result
        results.append(demos)
    retrieval.export_demonstrations(results, output_path)
    write_manifest(output_path, "retrieve", [corpus_path, embeddings_path],
                   {"strategy": strategy, "n": config.top_n, "k": config.k,
                    "lambda": config.lam, "seed": config.seed})
    if short:
        click.echo(f"warning: {short} queries returned fewer than k demonstrations", err=True)
    click.echo(f"retrieved demonstrations for {len(results)} queries")


def _load_demos(path, store) -> dict[str, retrieval.DemonstrationSet]:
    sets = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            if not raw.strip():
                continue
            obj = json.loads(raw)
            entries = []
            for e in obj["entries"]:
                pair = store[e["id"]]
                entries.append(retrieval.Demonstration(
                    e["id"], pair.code, pair.comment,
                    e["semantic_distance"] if e["semantic_distance"] is not None else float("nan"),
                    e["mixed_score"] if e["mixed_score"] is not None else float("nan"),
                ))
            sets[obj["query_id"]] = retrieval.DemonstrationSet(
                obj["query_id"], entries, obj.get("short_result", False)
            )
    return sets


@main.command("prompt")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--demos", "demos_path", type=click.Path(exists=True), default=None)
@click.option("--mode", type=click.Choice(["zero", "one", "few"]), default="few", show_default=True)
@click.option("--budget", default=None, type=int, help="maximum estimated prompt tokens")
@click.option("--template", "template_path", type=click.Path(exists=True), default=None)
@click.option("--queries", "query_split", default="test", show_default=True)
@click.option("--most-similar-first", is_flag=True,
              help="reverse the default most-similar-last demo order")
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@handle_errors
def prompt_cmd(corpus_path, demos_path, mode, budget, template_path, query_split,
               most_similar_first, output_path):
    """Render prompts for every query (golden-comparable)."""
    store = corpus_mod.load_corpus(corpus_path)
    if mode != "zero" and demos_path is None:
        _fail(EXIT_DATA_ERROR, f"mode {mode} requires --demos")
    demo_sets = _load_demos(demos_path, store) if demos_path else {}
    template = promptgen.PromptTemplate.load(template_path) if template_path else None
    with open(output_path, "w", encoding="utf-8") as fh:
        for pair in store.subset(query_split):
            demos = demo_sets.get(pair.id)
            entries = demos.entries if demos else []
            rendered = promptgen.build_prompt(
                pair.code, entries, mode=mode, budget=budget,
                most_similar_last=not most_similar_first, template=template,
            )
            fh.write(json.dumps({
                "query_id": pair.id,
                "prompt": rendered.text,
                "demo_count": rendered.demo_count,
                "length_cap_words": rendered.length_cap_words,
                "estimated_tokens": rendered.estimated_tokens,
                "dropped_ids": rendered.dropped_ids,
            }, ensure_ascii=False) + "\n")
    inputs = [corpus_path] + ([demos_path] if demos_path else [])
    write_manifest(output_path, "prompt", inputs, {"mode": mode, "budget": budget})
    click.echo(f"rendered prompts for split {query_split}")


# --- generation ----------------------------------------------------------


def _make_backend(backend, mock_behavior, fixed_text, cache_dir, base_url, store):
    if backend == "mock":
        oracle = {p.id: p.comment for p in store} if store is not None else {}
        return llm.MockBackend(mock_behavior, fixed_text=fixed_text, oracle=oracle)
    cache = llm.ResponseCache(cache_dir)
    if backend == "replay":
        return llm.ReplayBackend(cache)
    return llm.RemoteBackend(base_url=base_url, cache=cache)


@main.command()
@click.option("--prompts", "prompts_path", required=True, type=click.Path(exists=True))
@click.option("--backend", type=click.Choice(["remote", "mock", "replay"]), default="mock",
              show_default=True)
@click.option("--mock-behavior", type=click.Choice(["echo_top1", "fixed", "truncate_ground_truth"]),
              default="echo_top1", show_default=True)
@click.option("--fixed-text", default="", help="response for the fixed mock behavior")
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), default=None,
              help="ground-truth source for the truncate mock behavior")
@click.option("--cache-dir", envvar=llm.CACHE_DIR_ENV, default=".scc-cache", show_default=True)
@click.option("--base-url", default="https://api.openai.com/v1", show_default=True)
@click.option("--model", default=llm.DEFAULT_MODEL, show_default=True)
@click.option("--temperature", default=0.0, show_default=True)
@click.option("--max-tokens", default=256, show_default=True)
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@handle_errors
def generate(prompts_path, backend, mock_behavior, fixed_text, corpus_path, cache_dir,
             base_url, model, temperature, max_tokens, output_path):
    """Generate one comment per prompt through the chosen backend."""
    store = corpus_mod.load_corpus(corpus_path) if corpus_path else None
    engine = _make_backend(backend, mock_behavior, fixed_text, cache_dir, base_url, store)
    with open(prompts_path, encoding="utf-8") as fh, \
            open(output_path, "w", encoding="utf-8") as out:
        for raw in fh:
            if not raw.strip():
                continue
            obj = json.loads(raw)
            request = llm.LlmRequest(
                prompt=obj["prompt"], model=model, temperature=temperature,
                max_tokens=max_tokens, tag=obj["query_id"],
            )
            response = llm.complete(request, engine)
            out.write(json.dumps({
                "id": obj["query_id"],
                "comment": response.text,
                "backend": response.backend,
                "cache_hit": response.cache_hit,
            }, ensure_ascii=False) + "\n")
    write_manifest(output_path, "generate", [prompts_path],
                   {"backend": backend, "model": model, "temperature": temperature})
    click.echo(f"generated comments via {backend} backend")


# --- evaluation ----------------------------------------------------------


def _load_outputs(path) -> dict[str, str]:
    outputs = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            if raw.strip():
                obj = json.loads(raw)
                outputs[obj["id"]] = obj["comment"]
    return outputs


def _report_for(outputs: dict[str, str], truth: dict[str, str]) -> evaluation.MetricReport:
    ids = sorted(truth)
    missing = [i for i in ids if i not in outputs]
    if missing:
        raise evaluation.EvalError(f"outputs missing for ids: {missing[:5]}")
    return evaluation.metric_report([outputs[i] for i in ids], [truth[i] for i in ids], ids)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--outputs", "outputs_path", required=True, type=click.Path(exists=True))
@click.option("--baseline", "baselines", multiple=True, metavar="NAME=PATH",
              help="named baseline outputs to compare against")
@click.option("--reuse-top1-from", "demos_path", type=click.Path(exists=True), default=None,
              help="demo export; adds the retrieval-only reuse-top1 baseline")
@click.option("--queries", "query_split", default="test", show_default=True)
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@handle_errors
def evaluate(corpus_path, outputs_path, baselines, demos_path, query_split, output_path):
    """Score outputs against ground truth; Wilcoxon tests against baselines."""
    store = corpus_mod.load_corpus(corpus_path)
    truth = {p.id: p.comment for p in store.subset(query_split)}
    if not truth:
        _fail(EXIT_DATA_ERROR, f"no pairs in split {query_split!r}")
    main_outputs = _load_outputs(outputs_path)
    report = _report_for(main_outputs, truth)
    result = {"approach": report.to_dict(), "baselines": {}, "wilcoxon": {}}

    baseline_outputs: dict[str, dict[str, str]] = {}
    for spec_arg in baselines:
        if "=" not in spec_arg:
            _fail(EXIT_DATA_ERROR, f"--baseline expects NAME=PATH, got {spec_arg!r}")
        name, path = spec_arg.split("=", 1)
        baseline_outputs[name] = _load_outputs(path)
    if demos_path:
        demo_sets = _load_demos(demos_path, store)
        baseline_outputs["reuse-top1"] = {
            qid: (ds.entries[0].comment if ds.entries else "") for qid, ds in demo_sets.items()
        }

    for name, outputs in baseline_outputs.items():
        base_report = _report_for(outputs, truth)
        result["baselines"][name] = base_report.to_dict()
        tests = {}
        for metric in ("bleu4", "rouge1", "rouge2", "rougeL"):
            ours = [s[metric] for s in report.per_sample]
            theirs = [s[metric] for s in base_report.per_sample]
            try:
                tests[metric] = evaluation.wilcoxon_signed_rank(ours, theirs)
            except evaluation.EvalError as exc:
                tests[metric] = f"undefined: {exc}"
        result["wilcoxon"][name] = tests

    with open(output_path, "w", encoding="utf-8") as fh:
        json.dump(result, fh, ensure_ascii=False, indent=2)
    write_manifest(output_path, "evaluate", [corpus_path, outputs_path], {"split": query_split})
    click.echo(json.dumps({k: round(v, 2) for k, v in result["approach"].items()
                           if isinstance(v, float)}))


# --- ablation sweep ------------------------------------------------------


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--embeddings", "embeddings_path", required=True, type=click.Path(exists=True))
@click.option("--whitening", "whitening_path", required=True, type=click.Path(exists=True))
@click.option("--shots", default="0,1,3,5", show_default=True)
@click.option("--strategy", type=click.Choice(["full", "random", "no-whitening", "semantic-only"]),
              default="full", show_default=True)
@click.option("--seed", default=None, type=int)
@click.option("--queries", "query_split", default="test", show_default=True)
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@config_option
@handle_errors
def ablate(corpus_path, embeddings_path, whitening_path, shots, strategy, seed, query_split,
           output_path, config_path):
    """Shot-count sweep with the echo-top1 mock backend; one metrics row per count."""
    config = _config_from(config_path, seed=seed)
    shot_counts = sorted({int(s) for s in shots.split(",")})
    strategy = strategy.replace("-", "_")
    store, matrix, index = _build_index(corpus_path, embeddings_path, whitening_path)
    queries = store.subset(query_split)
    truth = {p.id: p.comment for p in queries}
    max_k = max(max(shot_counts), 1)
    rconfig = retrieval.RetrievalConfig(
        max(config.top_n, max_k), max_k, config.lam, strategy, config.seed
    )
    demo_sets = {
        p.id: retrieval.retrieve(p.id, p.code, matrix.row(p.id), index, rconfig)
        for p in queries
    }
    backend = llm.MockBackend("echo_top1")
    rows = []
    for count in shot_counts:
        outputs = {}
        for pair in queries:
            entries = demo_sets[pair.id].entries[:count]
            mode = "zero" if count == 0 else ("one" if count == 1 else "few")
            rendered = promptgen.build_prompt(pair.code, entries, mode=mode)
            request = llm.LlmRequest(prompt=rendered.text, tag=pair.id)
            outputs[pair.id] = llm.complete(request, backend).text
        report = _report_for(outputs, truth)
        rows.append({"shots": count, "bleu4": report.bleu4, "rouge1": report.rouge1,
                     "rouge2": report.rouge2, "rougeL": report.rougeL})
    with open(output_path, "w", encoding="utf-8") as fh:
        json.dump({"strategy": strategy, "rows": rows}, fh, indent=2)
    write_manifest(output_path, "ablate", [corpus_path, embeddings_path],
                   {"shots": shot_counts, "strategy": strategy, "seed": config.seed})
    for row in rows:
        click.echo(json.dumps(row))


# --- closed-form and human-study helpers ---------------------------------


@main.command("sample-size")
@click.option("--size", required=True, type=int)
@click.option("--e", "margin", default=0.05, show_default=True)
@click.option("--z", "z_score", default=1.96, show_default=True)
@handle_errors
def sample_size_cmd(size, margin, z_score):
    """Finite-population sample size (prints one integer)."""
    click.echo(evaluation.sample_size(size, margin, z_score))


@main.group()
def questionnaire():
    """Human-study questionnaire export and rating aggregation."""


@questionnaire.command("export")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--outputs", "outputs_specs", multiple=True, required=True, metavar="NAME=PATH")
@click.option("--count", required=True, type=int)
@click.option("--seed", default=0, show_default=True)
@click.option("--queries", "query_split", default="test", show_default=True)
@click.option("-o", "--output", "output_path", required=True, type=click.Path())
@click.option("--label-map", "label_map_path", required=True, type=click.Path())
@handle_errors
def questionnaire_export(corpus_path, outputs_specs, count, seed, query_split, output_path,
                         label_map_path):
    store = corpus_mod.load_corpus(corpus_path)
    items = [{"id": p.id, "code": p.code, "comment": p.comment}
             for p in store.subset(query_split)]
    outputs = {}
    for spec_arg in outputs_specs:
        if "=" not in spec_arg:
            _fail(EXIT_DATA_ERROR, f"--outputs expects NAME=PATH, got {spec_arg!r}")
        name, path = spec_arg.split("=", 1)
        outputs[name] = _load_outputs(path)
    forms, label_map = evaluation.export_questionnaire(items, outputs, count, seed)
    with open(output_path, "w", encoding="utf-8") as fh:
        for form in forms:
            fh.write(json.dumps(form, ensure_ascii=False) + "\n")
    with open(label_map_path, "w", encoding="utf-8") as fh:
        json.dump(label_map, fh, indent=2)
    click.echo(f"exported {len(forms)} blinded forms")


@questionnaire.command("aggregate")
@click.option("--ratings", "ratings_path", required=True, type=click.Path(exists=True))
@handle_errors
def questionnaire_aggregate(ratings_path):
    records = []
    with open(ratings_path, encoding="utf-8") as fh:
        for raw in fh:
            if raw.strip():
                obj = json.loads(raw)
                records.append(evaluation.RatingRecord(
                    obj["item_id"], obj["approach"], obj["similarity"],
                    obj["naturalness"], obj["informativeness"],
                ))
    click.echo(json.dumps(evaluation.aggregate_ratings(records), indent=2))


if __name__ == "__main__":
    main()
