"""FastAPI application exposing the wire protocol.

The codec owns parsing and byte-exact serialization; the framework only
routes. Status mapping: schema violations 400, overlapping turns on one
session 409, internal failures 500 with a safe generic body.
"""

from __future__ import annotations

import json
import logging

from fastapi import FastAPI, Request, Response
from fastapi.concurrency import run_in_threadpool

from triagekit.gateway.service import ConcurrentTurnError, GatewayService
from triagekit.gateway.wire import (
    SystemResponse,
    WireFormatError,
    deserialize_request,
    serialize_response,
)

logger = logging.getLogger(__name__)

SAFE_FAILURE_TEXT = (
    "I'm sorry, something went wrong on my side. Please repeat your last message."
)


def _error_body(message: str, status_code: int) -> Response:
    return Response(
        content=json.dumps({"error": message}, ensure_ascii=False),
        status_code=status_code,
        media_type="application/json",
    )


def create_app(service: GatewayService) -> FastAPI:
    app = FastAPI(title="triage gateway", docs_url=None, redoc_url=None)

    @app.post("/v3/request")
    async def turn_endpoint(request: Request) -> Response:
        body = await request.body()
        try:
            user_request = deserialize_request(body)
        except WireFormatError as exc:
            return _error_body(str(exc), 400)
        try:
            response = await run_in_threadpool(service.handle_request, user_request)
        except WireFormatError as exc:
            return _error_body(str(exc), 400)
        except ConcurrentTurnError as exc:
            return _error_body(str(exc), 409)
        except Exception:  # noqa: BLE001 - boundary: never leak internals
            logger.exception("turn failed")
            return Response(
                content=serialize_response(SystemResponse(text=SAFE_FAILURE_TEXT)),
                status_code=500,
                media_type="application/json",
            )
        return Response(
            content=serialize_response(response),
            status_code=200,
            media_type="application/json",
        )

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok"}

    return app
