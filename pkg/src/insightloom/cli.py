"""Command-line pipeline driver: insightloom <command> --spec ... [options]."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import insights_to_json
from .narrative import MAX_TARGET, MIN_TARGET, selection_to_json
from .network import LinkKind
from .pipeline import Bundle, PipelineError, PipelineOptions, run_pipeline
from .scoring import cards_to_json


def _parse_kinds(raw: str | None) -> frozenset[LinkKind] | None:
    if raw is None:
        return None
    kinds = set()
    for name in raw.split(","):
        if not name:
            continue
        try:
            kinds.add(LinkKind(name))
        except ValueError:
            valid = ", ".join(k.value for k in LinkKind)
            raise SystemExit(f"unknown link kind {name!r}; valid kinds: {valid}")
    return frozenset(kinds)


def _emit(payload: dict | list, out: str | None) -> None:
    text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _options(args: argparse.Namespace, dry_run_default: bool = False) -> PipelineOptions:
    return PipelineOptions(
        min_target=getattr(args, "min", MIN_TARGET),
        max_target=getattr(args, "max", MAX_TARGET),
        kinds=_parse_kinds(getattr(args, "kinds", None)),
        include_titles=getattr(args, "include_titles", False),
        dry_run=getattr(args, "dry_run", dry_run_default),
        stub=getattr(args, "stub", False),
    )


def _run(args: argparse.Namespace, dry_run_default: bool = False) -> Bundle:
    return run_pipeline(args.spec, _options(args, dry_run_default))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="insightloom",
        description="Generate, link, score, select, and summarize dashboard insights.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, llm: bool = False) -> None:
        p.add_argument("--spec", required=True, help="dashboard spec JSON file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--min", type=int, default=MIN_TARGET, help="selection minimum")
        p.add_argument("--max", type=int, default=MAX_TARGET, help="selection maximum")
        p.add_argument("--kinds", help="comma-separated link kinds to enable")
        if llm:
            p.add_argument("--dry-run", action="store_true", help="build the prompt, skip the LLM")
            p.add_argument("--stub", action="store_true", help="use the offline stub backend")
            p.add_argument(
                "--include-titles",
                action="store_true",
                help="include panel titles in the prompt (hallucination experiments)",
            )

    common(sub.add_parser("generate", help="emit the insight set"))
    common(sub.add_parser("network", help="emit the insight network export"))
    common(sub.add_parser("score", help="emit score cards"))
    common(sub.add_parser("select", help="emit the selection (score + reading order)"))
    common(sub.add_parser("summarize", help="emit prompt, summary, and grounding"), llm=True)
    common(sub.add_parser("export", help="emit the full bundle"), llm=True)
    serve_p = sub.add_parser("serve", help="serve the bundle and UI over HTTP")
    common(serve_p, llm=True)
    serve_p.add_argument("--port", type=int, default=8750)
    serve_p.add_argument("--ui-dir", help="directory of built UI assets to serve at /")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            bundle = _run(args, dry_run_default=True)
            _emit(insights_to_json(bundle.insights), args.out)
        elif args.command == "network":
            from .network import network_to_json

            bundle = _run(args, dry_run_default=True)
            _emit(network_to_json(bundle.network, cards_to_json(bundle.cards)), args.out)
        elif args.command == "score":
            bundle = _run(args, dry_run_default=True)
            _emit(cards_to_json(bundle.cards), args.out)
        elif args.command == "select":
            bundle = _run(args, dry_run_default=True)
            _emit(selection_to_json(bundle.selection), args.out)
        elif args.command == "summarize":
            bundle = _run(args)
            _emit(
                {
                    "prompt": bundle.prompt.text,
                    "tokenBudget": bundle.prompt.token_budget,
                    "summary": bundle.summary.summary_text if bundle.summary else None,
                    "grounding": bundle.grounding.to_json() if bundle.grounding else None,
                },
                args.out,
            )
        elif args.command == "export":
            bundle = _run(args)
            _emit(bundle.to_json(), args.out)
        elif args.command == "serve":
            from .server import serve

            if not args.stub and not args.dry_run:
                args.dry_run = True  # never call a remote LLM just to serve
            bundle = _run(args)
            serve(bundle, port=args.port, ui_dir=args.ui_dir)
        return 0
    except PipelineError as exc:
        print(f"insightloom: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"insightloom: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
