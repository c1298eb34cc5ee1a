"""Reward service: JSON over HTTP, plus an NDJSON stdio mode.

Both transports carry the same payload schemas; floats are serialized
at 17 significant digits so independent clients can compare responses
byte for byte.
"""

import shutil
import sys
from concurrent.futures import ThreadPoolExecutor

from fastapi import FastAPI, Request
from fastapi.responses import Response

from . import serialization
from .errors import SchemaError
from .recompile import HarnessConfig
from .rewards import GroupConfig, score_group
from .score import ScoreConfig, score
from .smt import driver


def _score_payload(body, score_cfg):
    for key in ("reference", "candidate"):
        if key not in body or not isinstance(body[key], str):
            raise SchemaError(f"missing or non-string field {key!r}")
    result = score(body["reference"], body["candidate"], score_cfg)
    return result.to_json()


def _group_payload(body, score_cfg, group_cfg):
    if "reference" not in body or not isinstance(body["reference"], str):
        raise SchemaError("missing or non-string field 'reference'")
    candidates = body.get("candidates")
    if not isinstance(candidates, list) or not candidates or \
            not all(isinstance(c, str) for c in candidates):
        raise SchemaError("'candidates' must be a non-empty list of strings")
    group = score_group(body["reference"], candidates, group_cfg, score_cfg,
                        reference_id=str(body.get("reference_id", "")))
    payload = {}
    # Echo the caller's id only when one was given, so the reply bytes for a
    # bare request match the score-group CLI output exactly.
    if "reference_id" in body:
        payload["reference_id"] = group.reference_id
    payload.update({
        "rewards": group.rewards,
        "advantages": group.advantages,
        "unscorable_mask": group.unscorable_mask,
    })
    return payload


def _health_payload(score_cfg):
    compiler = (score_cfg.harness or HarnessConfig()).resolved_command()
    solver = score_cfg.solver_cmd or driver.default_command()
    return {
        "status": "ok",
        "compiler": " ".join(compiler),
        "solver": " ".join(solver),
        "compiler_found": shutil.which(compiler[0]) is not None,
    }


def create_app(score_cfg: ScoreConfig = None, group_cfg: GroupConfig = None,
               workers: int = None) -> FastAPI:
    if score_cfg is None:
        score_cfg = ScoreConfig()
    if group_cfg is None:
        group_cfg = GroupConfig()
    app = FastAPI(title="dscore reward service")
    pool = ThreadPoolExecutor(max_workers=workers)

    def _json_response(payload, status=200):
        return Response(content=serialization.dumps(payload),
                        media_type="application/json", status_code=status)

    async def _handle(request, fn):
        try:
            body = await request.json()
        except Exception:
            return _json_response({"error": "body is not valid JSON"}, 400)
        try:
            import asyncio
            payload = await asyncio.get_event_loop().run_in_executor(
                pool, lambda: fn(body))
        except SchemaError as ex:
            return _json_response({"error": str(ex)}, 422)
        except Exception as ex:   # crash isolation: one request, one failure
            return _json_response({"error": f"{type(ex).__name__}: {ex}"}, 500)
        return _json_response(payload)

    @app.post("/score")
    async def score_endpoint(request: Request):
        return await _handle(request, lambda b: _score_payload(b, score_cfg))

    @app.post("/score_group")
    async def score_group_endpoint(request: Request):
        return await _handle(request, lambda b: _group_payload(b, score_cfg, group_cfg))

    @app.get("/health")
    async def health_endpoint():
        return _json_response(_health_payload(score_cfg))

    return app


def serve_http(host: str, port: int, score_cfg=None, group_cfg=None, workers=None):
    import uvicorn
    uvicorn.run(create_app(score_cfg, group_cfg, workers), host=host, port=port,
                log_level="warning")


def serve_stdio(score_cfg: ScoreConfig = None, group_cfg: GroupConfig = None,
                stdin=None, stdout=None):
    """NDJSON loop: {"op": "score"|"score_group"|"health", ...} per line."""
    if score_cfg is None:
        score_cfg = ScoreConfig()
    if group_cfg is None:
        group_cfg = GroupConfig()
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            body = serialization.loads(line)
        except ValueError:
            stdout.write(serialization.dump_line({"error": "line is not valid JSON"}))
            stdout.flush()
            continue
        op = body.get("op")
        try:
            if op == "score":
                payload = _score_payload(body, score_cfg)
            elif op == "score_group":
                payload = _group_payload(body, score_cfg, group_cfg)
            elif op == "health":
                payload = _health_payload(score_cfg)
            elif op == "exit":
                break
            else:
                payload = {"error": f"unknown op {op!r}"}
        except SchemaError as ex:
            payload = {"error": str(ex)}
        except Exception as ex:
            payload = {"error": f"{type(ex).__name__}: {ex}"}
        if "request_id" in body:
            payload["request_id"] = body["request_id"]
        stdout.write(serialization.dump_line(payload))
        stdout.flush()
