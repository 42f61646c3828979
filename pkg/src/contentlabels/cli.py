"""Command-line entry point.

Subcommands: serve, score, train, eval, refresh, export. The environment
variables CLE_PORT, CLE_DB_PATH, and CLE_BUNDLE_PATH override the
corresponding flags when set. Exit codes: 0 success, 1 operational
error, 2 usage error.
"""

import argparse
import json
import os
import sys
import time
from typing import Optional

from .bundle import load_bundle, save_bundle
from .embed import FALLBACK_DIM_DEFAULT, fallback_spec
from .errors import ContentLabelsError
from .extract import extract_document
from .learn import (
    DEFAULT_CV_FOLDS,
    DEFAULT_TRAIN_FRACTION,
    Dimension,
    evaluate_bundle,
    ingest_ratings,
    train_all,
)
from .report import write_evaluation_report
from .score import labels_to_dict, score_url
from .service import ScoringService, build_server
from .store import export_jsonl, open_store, refresh_stale


def _env_or(flag_value, env_name: str, cast=str):
    raw = os.environ.get(env_name)
    if raw is None or raw == "":
        return flag_value
    return cast(raw)


def _pages_resolver(path: str):
    """Offline page corpus: JSONL of {"url": ..., "tokens": [...]} or
    {"url": ..., "html": "..."} rows; unknown URLs resolve to nothing."""
    tokens_by_url: dict = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            url = row["url"]
            if "tokens" in row:
                tokens_by_url[url] = list(row["tokens"]) or None
            elif "html" in row:
                doc = extract_document(url, row["html"])
                tokens_by_url[url] = (
                    list(doc.cleaned_tokens) if doc.validity.valid else None
                )

    def resolve(url: str):
        return tokens_by_url.get(url)

    return resolve


def _load_required_bundle(path: Optional[str]):
    path = _env_or(path, "CLE_BUNDLE_PATH")
    if not path:
        raise ContentLabelsError("a model bundle path is required"
                                 " (--bundle or CLE_BUNDLE_PATH)")
    return load_bundle(path)


def _cmd_serve(args) -> int:
    bundle = _load_required_bundle(args.bundle)
    store = open_store(_env_or(args.db, "CLE_DB_PATH"))
    port = _env_or(args.port, "CLE_PORT", int)
    service = ScoringService(bundle, store, sync=not args.async_mode)
    server = build_server(service, host=args.host, port=port)
    host, actual_port = server.server_address[:2]
    # flush so wrappers watching a pipe see the address before the first request
    print(f"listening on http://{host}:{actual_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
        service.close()
    return 0


def _cmd_score(args) -> int:
    bundle = _load_required_bundle(args.bundle)
    db_path = _env_or(args.db, "CLE_DB_PATH")
    store = open_store(db_path) if db_path else None
    for url in args.urls:
        labels = score_url(url, bundle)
        if store is not None:
            store.put(labels)
        print(json.dumps(labels_to_dict(labels)))
    return 0


def _cmd_train(args) -> int:
    result = ingest_ratings(args.ratings)
    for diag in result.diagnostics:
        print(f"ratings row {diag.row}: {diag.message}", file=sys.stderr)
    resolver = _pages_resolver(args.pages) if args.pages else None
    bundle = train_all(
        result.records,
        fallback_spec(args.dim),
        split_seed=args.seed,
        resolve_tokens=resolver,
        k_folds=args.folds,
        train_fraction=args.train_fraction,
        fast=args.fast,
    )
    save_bundle(bundle, args.out)
    print(f"bundle {bundle.version} written to {args.out}")
    for dim in Dimension:
        ev = bundle.report.per_dimension[dim]
        print(f"{dim.value}: r={ev.pearson_r:.4f} p={ev.p_value:.3g} n={ev.n_test}")
    return 0


def _cmd_eval(args) -> int:
    bundle = _load_required_bundle(args.bundle)
    result = ingest_ratings(args.ratings)
    for diag in result.diagnostics:
        print(f"ratings row {diag.row}: {diag.message}", file=sys.stderr)
    resolver = _pages_resolver(args.pages) if args.pages else None
    pairs = evaluate_bundle(result.records, bundle, resolve_tokens=resolver)
    if not pairs:
        raise ContentLabelsError("no held-out examples to evaluate")
    artifacts = write_evaluation_report(pairs, args.out)
    print(f"report written to {artifacts.csv_path}")
    for dim, path in artifacts.scatter_paths.items():
        print(f"{dim.value} scatter: {path}")
    print(f"correlations chart: {artifacts.correlations_path}")
    return 0


def _cmd_refresh(args) -> int:
    bundle = _load_required_bundle(args.bundle)
    store = open_store(_env_or(args.db, "CLE_DB_PATH"))
    count = refresh_stale(store, time.time(), lambda url: score_url(url, bundle))
    print(f"refreshed {count} entries")
    return 0


def _cmd_export(args) -> int:
    store = open_store(_env_or(args.db, "CLE_DB_PATH"))
    count = export_jsonl(store, sys.stdout)
    print(f"exported {count} entries", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contentlabels",
        description="Compute and serve webpage content labels"
                    " (actionability, knowledge, emotion).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP scoring service")
    p.add_argument("--bundle", help="model bundle JSON path")
    p.add_argument("--db", help="sqlite label store path (default: in-memory)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--sync", dest="async_mode", action="store_false",
                      help="score cache misses inline (default)")
    mode.add_argument("--async", dest="async_mode", action="store_true",
                      help="queue cache misses and answer 'pending'")
    p.set_defaults(func=_cmd_serve, async_mode=False)

    p = sub.add_parser("score", help="score URLs and print JSON lines")
    p.add_argument("urls", nargs="+", metavar="URL")
    p.add_argument("--bundle", help="model bundle JSON path")
    p.add_argument("--db", help="also store results in this sqlite database")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("train", help="train models from a ratings CSV")
    p.add_argument("--ratings", required=True)
    p.add_argument("--out", required=True, help="bundle output path")
    p.add_argument("--fast", action="store_true",
                   help="skip the grid search and use stock hyperparameters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--folds", type=int, default=DEFAULT_CV_FOLDS)
    p.add_argument("--train-fraction", type=float, default=DEFAULT_TRAIN_FRACTION)
    p.add_argument("--dim", type=int, default=FALLBACK_DIM_DEFAULT,
                   help="embedding dimension for the built-in provider")
    p.add_argument("--pages", help="offline page corpus JSONL instead of live fetching")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a bundle and render a report")
    p.add_argument("--ratings", required=True)
    p.add_argument("--bundle", help="model bundle JSON path")
    p.add_argument("--out", default="eval-report", help="report output directory")
    p.add_argument("--pages", help="offline page corpus JSONL instead of live fetching")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("refresh", help="re-score stale store entries")
    p.add_argument("--db", help="sqlite label store path")
    p.add_argument("--bundle", help="model bundle JSON path")
    p.set_defaults(func=_cmd_refresh)

    p = sub.add_parser("export", help="dump the store as JSON lines")
    p.add_argument("--db", help="sqlite label store path")
    p.add_argument("--json", action="store_true", default=True,
                   help="JSON lines output (the only format)")
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContentLabelsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
