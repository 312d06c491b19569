"""Command-line interface.

Subcommands: ``synth`` (seeded dataset generation), ``query`` (evaluate
a DSL filter), ``nl`` (translate a natural-language request), ``serve``
(run the HTTP service), ``audit`` (scan a prompt log for leaked data).

Exit codes: 0 success, 1 user error (bad input, failed translation,
audit violations), 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cohorts.errors import CohortError
from .dataset import generate_synthetic, load_dataset
from .dataset.errors import DatasetError
from .query import compile_query, evaluate
from .query.errors import QueryError
from .service import ServiceConfig, serve
from .wrangler import (
    LiveProvider,
    ProviderError,
    ReplayProvider,
    WranglerError,
    WranglerRequest,
    default_mock_provider,
    privacy_audit,
    run_pipeline,
)
from .wrangler.pipeline import PromptLog


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; usage problems are
    # user errors here, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="cohortlab", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p.add_argument("--patients", type=int, default=1000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("query", help="evaluate a DSL filter against a dataset")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--dsl", required=True)
    p.add_argument("--parent-dsl", default=None,
                   help="restrict evaluation to patients matching this filter")
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("nl", help="translate a natural-language request to DSL")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--mode", choices=("mock", "replay", "live"), default="mock")
    p.add_argument("--fixture-dir", type=Path, default=None,
                   help="completion cache directory (replay mode)")
    p.add_argument("--base-url", default=None, help="chat completions endpoint (live mode)")
    p.add_argument("--model", default=None, help="model name (live mode)")
    p.add_argument("--api-key-env", default="LLM_API_KEY",
                   help="environment variable holding the API key (live mode)")
    p.add_argument("--log-prompts", type=Path, default=None,
                   help="append every emitted prompt to this JSONL file")
    p.set_defaults(func=_cmd_nl)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", type=Path, required=True)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("audit", help="scan a prompt log for data leakage")
    p.add_argument("--log", type=Path, required=True)
    p.add_argument("--data", type=Path, required=True)
    p.set_defaults(func=_cmd_audit)

    return parser


def _cmd_synth(args) -> int:
    paths = generate_synthetic(args.patients, args.seed, args.out)
    for path in paths:
        print(path)
    return 0


def _cmd_query(args) -> int:
    store = load_dataset(args.data)
    base = None
    if args.parent_dsl is not None:
        base = evaluate(compile_query(args.parent_dsl, store.codebook), store)
    uids = evaluate(compile_query(args.dsl, store.codebook), store, base_uids=base)
    print(len(uids))
    for uid in sorted(uids):
        print(uid)
    return 0


def _provider_for(args):
    if args.mode == "mock":
        return default_mock_provider()
    if args.mode == "replay":
        if args.fixture_dir is None:
            raise ValueError("replay mode requires --fixture-dir")
        return ReplayProvider(args.fixture_dir)
    if not (args.base_url and args.model):
        raise ValueError("live mode requires --base-url and --model")
    return LiveProvider(args.base_url, args.model, args.api_key_env)


def _print_trace(trace, out) -> None:
    print(f"status: {trace.status}", file=out)
    print(f"dsl: {trace.dsl_text}", file=out)
    print(f"inference: {trace.inference_text}", file=out)
    if trace.normalizations:
        print("normalization:", file=out)
        for n in trace.normalizations:
            suffix = f" ({n.candidate_field})" if n.candidate_field else ""
            print(f'  "{n.raw_term}" -> {n.normalized_term}{suffix}', file=out)
    if trace.roi:
        print("roi: " + ", ".join(f"{t}.{f}" for t, f in trace.roi), file=out)
    if trace.involved_fields:
        print("involved: " + ", ".join(trace.involved_fields), file=out)
    print(f"repairs: {len(trace.repairs)}", file=out)
    for r in trace.repairs:
        revised = r.revised_dsl if r.revised_dsl is not None else "(gave up)"
        print(f"  {r.error} -> {revised}", file=out)


def _cmd_nl(args) -> int:
    store = load_dataset(args.data)
    provider = _provider_for(args)
    log = PromptLog()
    try:
        _, trace = run_pipeline(
            WranglerRequest(args.text, store.codebook), provider, prompt_log=log)
    except WranglerError as exc:
        print(f"error: {exc.kind}: {exc.explanation}", file=sys.stderr)
        if exc.concept:
            print(f"missing concept: {exc.concept}", file=sys.stderr)
        if exc.trace is not None:
            _print_trace(exc.trace, sys.stderr)
        return 1
    finally:
        if args.log_prompts is not None:
            with open(args.log_prompts, "a", encoding="utf-8") as fh:
                for prompt in log:
                    fh.write(json.dumps(prompt) + "\n")
    _print_trace(trace, sys.stdout)
    return 0


def _cmd_serve(args) -> int:
    serve(ServiceConfig.load(args.config))
    return 0


def _read_prompt_log(path: Path) -> list[str]:
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return []
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = None
    if isinstance(obj, list):
        return [p if isinstance(p, str) else p["prompt"] for p in obj]
    prompts = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        item = json.loads(line)
        prompts.append(item if isinstance(item, str) else item["prompt"])
    return prompts


def _cmd_audit(args) -> int:
    store = load_dataset(args.data)
    prompts = _read_prompt_log(args.log)
    violations = privacy_audit(prompts, store)
    if violations:
        for v in violations:
            print(f"prompt {v['promptIndex']}: {v['source']} token {v['token']!r}",
                  file=sys.stderr)
        print(f"{len(violations)} violations across {len(prompts)} prompts", file=sys.stderr)
        return 1
    print(f"0 violations across {len(prompts)} prompts")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DatasetError, QueryError, WranglerError, ProviderError, CohortError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything unexpected is an internal error
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
