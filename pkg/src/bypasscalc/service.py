"""Local JSON-over-HTTP session API for interactive exploration.

Sessions hold a move sequence and an undo stack. All topology is delegated
to the engine; handlers only translate between HTTP and engine calls.
Per-session operations are serialized with a lock; different sessions never
block each other.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .arcs import InadmissibleArc, arc_code, classify_arc, enumerate_arcs
from .braids import triangle_count
from .dividing import DividingSet, InvalidDividingSet
from .moves import Move, MoveError, MoveSequence
from .normalize import NormalizeError, certificate_to_jsonl, normalize
from .render import render_svg
from .surgery import EngineError


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, move_index=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.move_index = move_index

    def payload(self) -> dict:
        body = {"code": self.code, "message": str(self)}
        if self.move_index is not None:
            body["move_index"] = self.move_index
        return {"error": body}


@dataclass
class Session:
    id: str
    seq: MoveSequence
    undone: list[Move] = field(default_factory=list)
    last_normal: dict | None = None
    certificate: str | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def summary(self) -> dict:
        states = self.seq.trace()
        ledger = 0
        for i, mv in enumerate(self.seq.moves):
            if mv.kind == "braid":
                ledger += triangle_count(states[i], [mv.braid])
            elif mv.kind == "triangle":
                ledger += 1
        return {
            "id": self.id,
            "state": states[-1].canonical_hex(),
            "circles": states[-1].n_circles(),
            "moves": len(self.seq.moves),
            "complexity": self.seq.complexity(),
            "triangle_ledger": ledger,
            "trace": [
                {"state": s.canonical_hex(), "circles": s.n_circles()}
                for s in states
            ],
        }


def create_app() -> FastAPI:
    app = FastAPI(title="bypasscalc", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def on_api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.payload())

    def get_session(sid: str) -> Session:
        with registry_lock:
            ses = sessions.get(sid)
        if ses is None:
            raise ApiError(404, "unknown_session", f"no session {sid!r}")
        return ses

    async def read_json(request: Request) -> dict:
        try:
            return json.loads(await request.body() or b"{}")
        except json.JSONDecodeError as exc:
            raise ApiError(400, "bad_json", str(exc))

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await read_json(request)
        try:
            initial = DividingSet.from_json_obj(body["initial"])
            seq = MoveSequence(initial, [])
            moves = body.get("moves", [])
            for i, mv in enumerate(moves):
                seq = seq.extended(Move.from_json_obj(mv))
            seq.trace()
        except KeyError as exc:
            raise ApiError(422, "bad_request", f"missing field {exc}")
        except InvalidDividingSet as exc:
            raise ApiError(422, "invalid_dividing_set", str(exc))
        except MoveError as exc:
            raise ApiError(
                422, exc.code, str(exc), move_index=exc.index
            )
        sid = uuid.uuid4().hex
        ses = Session(sid, seq)
        with registry_lock:
            sessions[sid] = ses
        return ses.summary()

    @app.get("/sessions/{sid}")
    async def show(sid: str):
        ses = get_session(sid)
        with ses.lock:
            return ses.summary()

    @app.get("/sessions/{sid}/arcs")
    async def arcs(sid: str):
        ses = get_session(sid)
        with ses.lock:
            state = ses.seq.final()
            out = []
            for spec in enumerate_arcs(state):
                cls = classify_arc(state, spec)
                out.append(
                    {
                        "code": arc_code(state, spec).hex(),
                        "arc": spec.to_json_obj(),
                        "type": cls["type"],
                        "delta": cls["delta"],
                        "is_trivial": cls["is_trivial"],
                        "is_overtwisted": cls["is_overtwisted"],
                    }
                )
            out.sort(key=lambda item: item["code"])
            return {"arcs": out}

    @app.post("/sessions/{sid}/moves")
    async def apply(sid: str, request: Request):
        body = await read_json(request)
        ses = get_session(sid)
        with ses.lock:
            try:
                mv = Move.from_json_obj(body)
                extended = ses.seq.extended(mv)
                extended.trace()
            except (MoveError, InadmissibleArc, EngineError) as exc:
                raise ApiError(
                    422,
                    getattr(exc, "code", "invalid_move"),
                    str(exc),
                    move_index=getattr(exc, "index", None)
                    if getattr(exc, "index", None) is not None
                    else len(ses.seq.moves),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ApiError(422, "bad_request", str(exc))
            ses.seq = extended
            ses.undone.clear()
            return ses.summary()

    @app.post("/sessions/{sid}/undo")
    async def undo(sid: str):
        ses = get_session(sid)
        with ses.lock:
            if not ses.seq.moves:
                raise ApiError(409, "empty_undo_stack", "no move to undo")
            moves = list(ses.seq.moves)
            ses.undone.append(moves.pop())
            ses.seq = MoveSequence(ses.seq.initial, moves)
            return ses.summary()

    @app.post("/sessions/{sid}/redo")
    async def redo(sid: str):
        ses = get_session(sid)
        with ses.lock:
            if not ses.undone:
                raise ApiError(409, "empty_redo_stack", "no move to redo")
            ses.seq = ses.seq.extended(ses.undone.pop())
            return ses.summary()

    @app.post("/sessions/{sid}/normalize")
    async def normalize_session(sid: str):
        ses = get_session(sid)
        with ses.lock:
            states = ses.seq.trace()
            if states[0].canonical_code() != states[-1].canonical_code():
                raise ApiError(
                    409,
                    "endpoint_mismatch",
                    "sequence must return to its initial state before "
                    "normalization",
                )
            try:
                sc = normalize(ses.seq)
            except NormalizeError as exc:
                if exc.partial:
                    ses.certificate = certificate_to_jsonl(exc.partial)
                raise ApiError(422, exc.code, str(exc))
            ses.last_normal = sc.report()
            ses.certificate = certificate_to_jsonl(sc.certificate)
            return ses.last_normal

    @app.get("/sessions/{sid}/certificate")
    async def certificate(sid: str):
        ses = get_session(sid)
        with ses.lock:
            if ses.certificate is None:
                raise ApiError(404, "no_certificate", "normalize first")
            return Response(
                ses.certificate, media_type="application/jsonl"
            )

    @app.get("/sessions/{sid}/render.svg")
    async def render(sid: str):
        ses = get_session(sid)
        with ses.lock:
            return Response(
                render_svg(ses.seq.final()), media_type="image/svg+xml"
            )

    @app.get("/sessions/{sid}/export")
    async def export(sid: str):
        ses = get_session(sid)
        with ses.lock:
            return ses.seq.to_json_obj()

    return app


app = create_app()


def main():  # pragma: no cover - thin launcher
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(description="bypasscalc session service")
    parser.add_argument("--bind", default="127.0.0.1", help="listen address")
    parser.add_argument("--port", type=int, default=8731)
    args = parser.parse_args()
    uvicorn.run(app, host=args.bind, port=args.port)


if __name__ == "__main__":  # pragma: no cover
    main()
