"""HTTP JSON API over the review store.

Routes (all application/json unless noted):

- ``GET  /healthz``                     liveness probe
- ``POST /drafts``                      enqueue a corrected draft -> 201/200
- ``GET  /queue``                       priority-ordered page of items
- ``GET  /items/{item_id}``             full item detail
- ``POST /items/{item_id}/decision``    Accept / Edit / Reject
- ``GET  /export/accepted``             NDJSON in the evaluations format

Errors: 404 unknown item, 409 already decided, 422 invalid edit.
"""

from __future__ import annotations

import json
from contextlib import asynccontextmanager

from fastapi import FastAPI, Header, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from .corpus import VexCategory
from .inference import draft_from_json
from .review import (
    AlreadyDecided,
    Decision,
    DecisionAction,
    InvalidEdit,
    NotFound,
    ReviewStatus,
    ReviewStore,
    item_summary_json,
    item_to_json,
)


def _reviewer_from(authorization: str | None) -> str:
    if authorization and authorization.lower().startswith("bearer "):
        return authorization[7:].strip() or "anonymous"
    return "anonymous"


def create_app(store: ReviewStore, cors_origins: list[str] | None = None) -> FastAPI:
    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        # Runs during graceful shutdown; uvicorn re-raises the signal after
        # this, so snapshotting cannot wait for code after uvicorn.run().
        store.snapshot()

    app = FastAPI(
        title="vulneval review service", docs_url=None, redoc_url=None,
        lifespan=lifespan,
    )
    app.state.store = store
    # The browser frontend is served from a different origin in development.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/drafts")
    async def enqueue(request: Request, response: Response,
                      authorization: str | None = Header(default=None)):
        body = await request.json()
        display = body.pop("display", {}) if isinstance(body, dict) else {}
        try:
            draft = draft_from_json(body)
        except (KeyError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"bad draft: {exc}")
        item_id, created = store.enqueue(
            draft, display=display, actor=_reviewer_from(authorization)
        )
        response.status_code = 201 if created else 200
        return {"item_id": item_id, "created": created}

    @app.get("/queue")
    def queue(
        cursor: str | None = None,
        page_size: int = Query(default=20, ge=1, le=500),
        status: str | None = "Pending",
        category: str | None = None,
    ):
        status_filter = None
        if status not in (None, "", "all"):
            try:
                status_filter = ReviewStatus(status)
            except ValueError:
                raise HTTPException(status_code=422, detail=f"unknown status {status!r}")
        category_filter = None
        if category:
            try:
                category_filter = VexCategory.parse(category)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
        items, next_cursor = store.next_page(
            cursor=cursor, page_size=page_size,
            status=status_filter, category=category_filter,
        )
        return {
            "items": [item_summary_json(i) for i in items],
            "next_cursor": next_cursor,
        }

    @app.get("/items/{item_id}")
    def get_item(item_id: str):
        try:
            return item_to_json(store.get(item_id))
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/items/{item_id}/decision")
    async def decide(item_id: str, request: Request,
                     authorization: str | None = Header(default=None)):
        body = await request.json()
        try:
            decision = Decision(
                action=DecisionAction(body.get("action")),
                edited_fields=body.get("edited_fields"),
                note=body.get("note", ""),
            )
        except (ValueError, InvalidEdit) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        try:
            item = store.submit_decision(
                item_id, decision, reviewer=_reviewer_from(authorization)
            )
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except AlreadyDecided as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except InvalidEdit as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return item_to_json(item)

    @app.get("/export/accepted")
    def export_accepted():
        body = "".join(
            json.dumps(row, sort_keys=True) + "\n" for row in store.accepted_rows()
        )
        return PlainTextResponse(body, media_type="application/x-ndjson")

    return app
