"""HTTP/JSON API over the graph, ranking and knowledge-map sessions.

The API is a thin facade: endpoints delegate to the session module and never
rank on their own. GET endpoints never mutate; results are served from the
last snapshot together with the current dirty flag, and only POST /refresh
recomputes. Mutations are serialized per map.
"""

from __future__ import annotations

import json
import os
import threading
from contextlib import asynccontextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import session as kmap_session
from .errors import UnknownIdError
from .graph import load_graph
from .ranking import RESULT_KINDS, RankingConfig, build_text_index, rank_items
from .session import KnowledgeMap


@dataclass
class ServiceConfig:
    graph_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000
    cors_origins: list[str] = field(default_factory=list)
    ranking: RankingConfig = field(default_factory=RankingConfig)
    state_path: Path | None = None

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            graph_dir=Path(obj["graph_dir"]),
            host=obj.get("host", "127.0.0.1"),
            port=int(obj.get("port", 8000)),
            cors_origins=list(obj.get("cors_origins", [])),
            ranking=RankingConfig.from_json(obj.get("ranking", {})),
            state_path=Path(obj["state_path"]) if obj.get("state_path") else None,
        )

    def apply_env(self) -> "ServiceConfig":
        """Environment overrides: KNOWMAP_GRAPH_DIR, KNOWMAP_PORT."""
        graph_dir = os.environ.get("KNOWMAP_GRAPH_DIR")
        if graph_dir:
            self.graph_dir = Path(graph_dir)
        port = os.environ.get("KNOWMAP_PORT")
        if port:
            self.port = int(port)
        return self


_PLURAL = {"publication": "publications", "clinical_trial": "clinical_trials",
           "entity": "entities"}


class LandmarkBody(BaseModel):
    entity_id: str


class StarBody(BaseModel):
    doc_id: str


class CreateMapBody(BaseModel):
    config: dict | None = None


def _item_json(item) -> dict:
    return asdict(item)


def _map_json(kmap: KnowledgeMap) -> dict:
    body = kmap.to_json()
    body["dirty"] = kmap.dirty
    body["map_fingerprint"] = kmap.fingerprint()
    return body


def _snapshot_json(kmap: KnowledgeMap, kind: str | None) -> dict:
    snapshot = kmap.snapshot
    body = {
        "computed_at": snapshot.computed_at,
        "snapshot_fingerprint": snapshot.fingerprint,
        "map_fingerprint": kmap.fingerprint(),
        "dirty": kmap.dirty,
    }
    if kind is None or kind == "publication":
        body["publications"] = [_item_json(i) for i in snapshot.publications]
    if kind is None or kind == "clinical_trial":
        body["clinical_trials"] = [_item_json(i) for i in snapshot.clinical_trials]
    return body


def create_app(config: ServiceConfig) -> FastAPI:
    graph = load_graph(config.graph_dir)
    index = build_text_index(graph)
    maps: dict[str, KnowledgeMap] = {}
    locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()

    def restore_state() -> None:
        if config.state_path and config.state_path.exists():
            stored = json.loads(config.state_path.read_text(encoding="utf-8"))
            for obj in stored.get("maps", []):
                kmap = KnowledgeMap.from_json(obj)
                maps[kmap.map_id] = kmap
                locks[kmap.map_id] = threading.Lock()

    def persist_state() -> None:
        if config.state_path:
            config.state_path.parent.mkdir(parents=True, exist_ok=True)
            payload = {"maps": [kmap.to_json() for kmap in maps.values()]}
            config.state_path.write_text(json.dumps(payload, indent=2), encoding="utf-8")

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        restore_state()
        yield
        persist_state()

    app = FastAPI(title="knowmap", lifespan=lifespan)
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )
    app.state.graph = graph
    app.state.index = index
    app.state.maps = maps

    def get_map(map_id: str) -> KnowledgeMap:
        kmap = maps.get(map_id)
        if kmap is None:
            raise HTTPException(status_code=404, detail=f"unknown map {map_id!r}")
        return kmap

    def map_lock(map_id: str) -> threading.Lock:
        with registry_lock:
            return locks.setdefault(map_id, threading.Lock())

    @app.get("/search")
    def search(q: str = "", kind: str | None = None):
        if not q.strip():
            raise HTTPException(status_code=400, detail="query must be non-empty")
        if kind is not None and kind not in RESULT_KINDS:
            raise HTTPException(status_code=400, detail=f"kind must be one of {RESULT_KINDS}")
        scratch = kmap_session.create_map(config.ranking)
        body: dict = {"query": q}
        kinds = (kind,) if kind else RESULT_KINDS
        for result_kind in kinds:
            items = rank_items(graph, index, scratch, q, result_kind, config.ranking)
            rows = []
            for item in items:
                if item.score == 0.0:
                    continue
                row = _item_json(item)
                if result_kind == "entity":
                    entry = graph.entities[item.item_id]
                    row["entity_type"] = entry.entity_type
                    row["canonical_name"] = entry.canonical_name
                else:
                    row["title"] = graph.documents[item.item_id].title
                rows.append(row)
            body[_PLURAL[result_kind]] = rows
        return body

    @app.post("/maps", status_code=201)
    def create_map_endpoint(body: CreateMapBody | None = None):
        overrides = body.config if body else None
        ranking = (RankingConfig.from_json({**config.ranking.to_json(), **overrides})
                   if overrides else config.ranking)
        kmap = kmap_session.create_map(ranking)
        with registry_lock:
            maps[kmap.map_id] = kmap
            locks[kmap.map_id] = threading.Lock()
        return _map_json(kmap)

    @app.get("/maps/{map_id}")
    def get_map_endpoint(map_id: str):
        return _map_json(get_map(map_id))

    def _mutate(map_id: str, action) -> dict:
        kmap = get_map(map_id)
        with map_lock(map_id):
            try:
                action(kmap)
            except UnknownIdError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            return _map_json(kmap)

    @app.post("/maps/{map_id}/landmarks")
    def add_landmark(map_id: str, body: LandmarkBody):
        return _mutate(map_id, lambda m: kmap_session.add_landmark(m, graph, body.entity_id))

    @app.delete("/maps/{map_id}/landmarks")
    def remove_landmark(map_id: str, body: LandmarkBody):
        return _mutate(map_id, lambda m: kmap_session.remove_landmark(m, graph, body.entity_id))

    @app.post("/maps/{map_id}/stars")
    def star_document(map_id: str, body: StarBody):
        return _mutate(map_id, lambda m: kmap_session.star_document(m, graph, body.doc_id))

    @app.delete("/maps/{map_id}/stars")
    def unstar_document(map_id: str, body: StarBody):
        return _mutate(map_id, lambda m: kmap_session.unstar_document(m, graph, body.doc_id))

    @app.post("/maps/{map_id}/refresh")
    def refresh_endpoint(map_id: str):
        kmap = get_map(map_id)
        with map_lock(map_id):
            kmap_session.refresh(kmap, graph, index)
            return _snapshot_json(kmap, None)

    @app.get("/maps/{map_id}/results")
    def results_endpoint(map_id: str, kind: str | None = None):
        kmap = get_map(map_id)
        if kind is not None and kind not in ("publication", "clinical_trial"):
            raise HTTPException(status_code=400,
                                detail="kind must be publication or clinical_trial")
        if kmap.snapshot is None:
            raise HTTPException(status_code=409,
                                detail="no snapshot yet; POST /refresh first")
        return _snapshot_json(kmap, kind)

    @app.get("/maps/{map_id}/cards/{entity_id}")
    def card_endpoint(map_id: str, entity_id: str):
        kmap = get_map(map_id)
        try:
            card = kmap_session.build_card(kmap, graph, index, entity_id)
        except UnknownIdError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        return {
            "entity_id": card.entity_id,
            "canonical_name": card.canonical_name,
            "entity_type": card.entity_type,
            "summary": card.summary,
            "map_fingerprint": kmap.fingerprint(),
            "dirty": kmap.dirty,
            "sections": [
                {"name": name, "items": [_item_json(i) for i in items]}
                for name, items in card.sections
            ],
        }

    return app
