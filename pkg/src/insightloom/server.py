"""HTTP service over an immutable bundle, backing the playground UI."""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import insight_to_json
from .llm import LlmParams, StubBackend, generate_summary, verify_grounding
from .narrative import concat_baseline
from .network import (
    LinkCategory,
    LinkKind,
    TooManyKeys,
    UnknownKind,
    cluster_grid,
    cluster_to_json,
    gatekeeper_graph,
    gatekeeper_to_json,
    link_matrix,
    matrix_to_json,
    network_to_json,
)
from .pipeline import Bundle, story_component
from .scoring import cards_to_json

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>insightloom</title></head>
<body><h1>insightloom service</h1>
<p>No UI build found. The JSON API lives under <code>/api/</code>.</p></body></html>
"""


def _parse_kinds(raw: str | None) -> set[LinkKind] | None:
    """None when absent (meaning: all kinds); empty set for an empty string."""
    if raw is None:
        return None
    names = [part for part in raw.split(",") if part]
    kinds = set()
    for name in names:
        try:
            kinds.add(LinkKind(name))
        except ValueError:
            raise HTTPException(status_code=400, detail=f"unknown link kind {name!r}")
    return kinds


class SelectBody(BaseModel):
    insightId: str


class SummarizeBody(BaseModel):
    dryRun: bool = False


class _Sessions:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._selections: dict[str, list[str]] = {}

    def create(self) -> str:
        sid = uuid.uuid4().hex[:12]
        with self._lock:
            self._selections[sid] = []
        return sid

    def get(self, sid: str) -> list[str]:
        with self._lock:
            if sid not in self._selections:
                raise HTTPException(status_code=404, detail="unknown session")
            return list(self._selections[sid])

    def select(self, sid: str, iid: str) -> list[str]:
        with self._lock:
            if sid not in self._selections:
                raise HTTPException(status_code=404, detail="unknown session")
            if iid not in self._selections[sid]:
                self._selections[sid].append(iid)
            return list(self._selections[sid])

    def deselect(self, sid: str, iid: str) -> list[str]:
        with self._lock:
            if sid not in self._selections:
                raise HTTPException(status_code=404, detail="unknown session")
            self._selections[sid] = [x for x in self._selections[sid] if x != iid]
            return list(self._selections[sid])


def build_app(bundle: Bundle, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="insightloom", version="0.1.0")
    from fastapi.middleware.cors import CORSMiddleware

    # The playground may be served from a dev server on another port.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    insights = bundle.insight_map()
    sessions = _Sessions()
    priorities = {iid: c.priority for iid, c in bundle.cards.items()}

    @app.get("/api/dashboard")
    def dashboard() -> dict:
        from .model import spec_to_doc

        return spec_to_doc(bundle.spec)

    @app.get("/api/insights")
    def all_insights() -> list[dict]:
        return [insight_to_json(i) for i in bundle.insights]

    @app.get("/api/network")
    def network(kinds: str | None = None, gatekeepers: str | None = None) -> dict:
        from .network import InsightNetwork

        wanted = _parse_kinds(kinds)
        net = bundle.network
        if wanted is not None:
            net = InsightNetwork(
                nodes=net.nodes,
                links=[l for l in net.links if l.kind in wanted],
                enabled_kinds=frozenset(wanted),
            )
        payload = network_to_json(net, cards_to_json(bundle.cards))
        if gatekeepers:
            categories = set()
            for name in gatekeepers.split(","):
                if not name:
                    continue
                try:
                    categories.add(LinkCategory(name))
                except ValueError:
                    raise HTTPException(status_code=400, detail=f"unknown category {name!r}")
            if categories:
                payload["gatekeepers"] = gatekeeper_to_json(gatekeeper_graph(net, categories))
        return payload

    @app.get("/api/matrix")
    def matrix(kinds: str | None = None, anchored: bool = False) -> dict:
        wanted = _parse_kinds(kinds)
        order = None
        if anchored:
            from .network import anchor_order

            ids = bundle.selection.score_order
            order = anchor_order(bundle.network, ids, priorities)
        m = link_matrix(bundle.network, wanted, order)
        return matrix_to_json(m)

    @app.get("/api/clusters")
    def clusters(row: str | None = None, col: str | None = None) -> dict:
        def axis(raw: str | None) -> list[LinkKind]:
            out = []
            for name in (raw or "").split(","):
                if not name:
                    continue
                try:
                    out.append(LinkKind(name))
                except ValueError:
                    raise HTTPException(status_code=400, detail=f"unknown link kind {name!r}")
            return out

        try:
            grid = cluster_grid(bundle.insights, bundle.spec, axis(row), axis(col))
        except (UnknownKind, TooManyKeys) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return cluster_to_json(grid)

    @app.get("/api/scores")
    def scores() -> dict:
        return cards_to_json(bundle.cards)

    @app.get("/api/selection")
    def selection() -> dict:
        from .narrative import selection_to_json

        return selection_to_json(bundle.selection)

    @app.get("/api/story/{insight_id}")
    def story(insight_id: str) -> dict:
        if insight_id not in insights:
            raise HTTPException(status_code=404, detail="unknown insight")
        return story_component(insights[insight_id], bundle.spec).to_json()

    @app.post("/api/sessions")
    def create_session() -> dict:
        sid = sessions.create()
        return {"sessionId": sid, "story": "", "selected": []}

    @app.get("/api/sessions/{sid}")
    def session_state(sid: str) -> dict:
        selected = sessions.get(sid)
        return {
            "sessionId": sid,
            "selected": selected,
            "story": concat_baseline(selected, insights),
        }

    @app.post("/api/sessions/{sid}/select")
    def session_select(sid: str, body: SelectBody) -> dict:
        if body.insightId not in insights:
            raise HTTPException(status_code=404, detail="unknown insight")
        selected = sessions.select(sid, body.insightId)
        return {
            "sessionId": sid,
            "selected": selected,
            "story": concat_baseline(selected, insights),
            "component": story_component(insights[body.insightId], bundle.spec).to_json(),
        }

    @app.delete("/api/sessions/{sid}/select/{insight_id}")
    def session_deselect(sid: str, insight_id: str) -> dict:
        selected = sessions.deselect(sid, insight_id)
        return {
            "sessionId": sid,
            "selected": selected,
            "story": concat_baseline(selected, insights),
        }

    @app.post("/api/summarize")
    def summarize(body: SummarizeBody) -> dict:
        params = LlmParams(max_tokens=max(bundle.prompt.token_budget, 1))
        result = generate_summary(bundle.prompt, params, StubBackend(), dry_run=body.dryRun)
        if body.dryRun:
            return {"summary": "", "prompt": result.prompt_used, "grounding": None}
        selected = [insights[iid] for iid in bundle.selection.reading_order]
        report = verify_grounding(result.summary_text, selected)
        return {
            "summary": result.summary_text,
            "prompt": result.prompt_used,
            "grounding": report.to_json(),
        }

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return _FALLBACK_PAGE

    return app


def serve(bundle: Bundle, port: int = 8750, ui_dir: str | Path | None = None) -> None:
    import uvicorn

    uvicorn.run(build_app(bundle, ui_dir=ui_dir), host="127.0.0.1", port=port, log_level="warning")
