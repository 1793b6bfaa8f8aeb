"""Command-line entry points: ingest, rank, serve, simulate."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .graph import load_graph
from .ingest import ingest_corpus
from .ranking import RankingConfig, build_text_index, rank_items
from .service import ServiceConfig, create_app
from .session import KnowledgeMap, create_map
from .simulate import (SyntheticCorpusSpec, mean_precision_at, run_simulations,
                       write_metrics_csv)


def _cmd_ingest(args: argparse.Namespace) -> int:
    graph = ingest_corpus(args.docs, args.lexicon, args.relations, args.out)
    print(f"ingested {len(graph.documents)} documents, {len(graph.entities)} entities, "
          f"{len(graph.mentions)} mentions, {len(graph.relations)} relations -> {args.out}")
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    index = build_text_index(graph)
    if args.map:
        kmap = KnowledgeMap.from_json(json.loads(Path(args.map).read_text(encoding="utf-8")))
    else:
        kmap = create_map()
    config = kmap.config
    if args.top_k:
        config = RankingConfig.from_json({**config.to_json(), "top_k": args.top_k})
    items = rank_items(graph, index, kmap, args.query, args.kind, config)
    for item in items:
        print(f"{item.rank}\t{item.item_id}\t{item.score:.6f}"
              f"\t{item.text_sim:.6f}\t{item.graph_prox:.6f}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    if args.config:
        config = ServiceConfig.from_file(args.config)
    else:
        config = ServiceConfig(graph_dir=Path(args.graph or "graph"))
    if args.graph:
        config.graph_dir = Path(args.graph)
    if args.port:
        config.port = args.port
    if args.host:
        config.host = args.host
    config.apply_env()
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    if args.spec:
        spec = SyntheticCorpusSpec.from_json(
            json.loads(Path(args.spec).read_text(encoding="utf-8")))
    else:
        spec = SyntheticCorpusSpec()
    config = None
    if args.text_weight is not None:
        config = RankingConfig(text_weight=args.text_weight, top_k=10_000)
    tables = run_simulations(spec, args.runs, args.iterations, args.k, config=config)
    write_metrics_csv(tables, args.out)
    first = mean_precision_at(tables, 0)
    last_iteration = min(max(row.iteration for row in t.rows) for t in tables)
    last = mean_precision_at(tables, last_iteration)
    print(f"wrote {args.out}: mean precision@{args.k} "
          f"iteration 0 = {first:.4f}, iteration {last_iteration} = {last:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="knowmap")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="build and persist a knowledge graph")
    p_ingest.add_argument("--docs", required=True)
    p_ingest.add_argument("--lexicon", required=True)
    p_ingest.add_argument("--relations", default=None)
    p_ingest.add_argument("--out", required=True)
    p_ingest.set_defaults(func=_cmd_ingest)

    p_rank = sub.add_parser("rank", help="rank items against a knowledge map")
    p_rank.add_argument("--graph", required=True)
    p_rank.add_argument("--map", default=None, help="map JSON file")
    p_rank.add_argument("--query", default="")
    p_rank.add_argument("--kind", required=True,
                        choices=["publication", "clinical_trial", "entity"])
    p_rank.add_argument("--top-k", type=int, default=None)
    p_rank.set_defaults(func=_cmd_rank)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--graph", default=None)
    p_serve.add_argument("--port", type=int, default=None)
    p_serve.add_argument("--host", default=None)
    p_serve.add_argument("--config", default=None, help="service config JSON file")
    p_serve.set_defaults(func=_cmd_serve)

    p_sim = sub.add_parser("simulate", help="run the feedback simulation harness")
    p_sim.add_argument("--spec", default=None, help="corpus spec JSON file")
    p_sim.add_argument("--runs", type=int, default=20)
    p_sim.add_argument("--iterations", type=int, default=6)
    p_sim.add_argument("--k", type=int, default=10)
    p_sim.add_argument("--text-weight", type=float, default=None)
    p_sim.add_argument("--out", required=True)
    p_sim.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
