"""Session-oriented HTTP API: a Decision Maker adds statements step by step and
re-queries relations, representative functions and pairwise explanations.

Sessions live in memory with TTL eviction; statement additions that would make
the system incompatible are rejected atomically with 409, so every stored
session state stays solvable.
"""

from __future__ import annotations

import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .engine import IncompatiblePreferences, base_system, check_compatibility, compute_relations
from .io_formats import (
    ParseError,
    build_document,
    parse_performance_csv,
    parse_preferences,
    problem_from_raw,
    to_json_dict,
)
from .model import DomainError, PreferenceStatement, Problem, build_problem
from .representatives import (
    DEFAULT_BIG_M,
    DEFAULT_EPS,
    NoCoveringFunction,
    explain_pair,
    procedure1,
    solve_p1,
    solve_p2,
)


@dataclass
class Session:
    id: str
    problem: Problem
    statements: dict[int, PreferenceStatement] = field(default_factory=dict)
    next_index: int = 0
    created_at: float = field(default_factory=time.time)
    updated_at: float = field(default_factory=time.time)
    lock: threading.RLock = field(default_factory=threading.RLock)
    relations_cache: dict | None = None
    relations_bundle: object = None
    representatives_cache: dict | None = None
    discriminant: object = None

    def statement_list(self) -> list[dict]:
        return [
            {"index": i, "kind": st.kind, "a": st.a, "b": st.b}
            for i, st in sorted(self.statements.items())
        ]

    def ordered_statements(self) -> list[PreferenceStatement]:
        return [st for _, st in sorted(self.statements.items())]

    def invalidate(self):
        self.relations_cache = None
        self.relations_bundle = None
        self.representatives_cache = None
        self.discriminant = None
        self.updated_at = time.time()


class SessionStore:
    def __init__(self, ttl_seconds: float):
        self.ttl = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def purge(self):
        now = time.time()
        with self._lock:
            stale = [k for k, s in self._sessions.items() if now - s.updated_at > self.ttl]
            for k in stale:
                del self._sessions[k]

    def create(self, problem: Problem) -> Session:
        session = Session(id=uuid.uuid4().hex, problem=problem)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session | None:
        self.purge()
        with self._lock:
            return self._sessions.get(session_id)


def _error(status: int, detail: str, **extra):
    return JSONResponse(status_code=status, content={"detail": detail, **extra})


def create_app(
    ttl_seconds: float = 3600.0,
    compute_timeout: float = 120.0,
    eps_fixed: float = DEFAULT_EPS,
    big_m: float = DEFAULT_BIG_M,
) -> FastAPI:
    app = FastAPI(title="rorep service", version=__version__)
    # desk tool without auth; the companion UI may be served from another port
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl_seconds)
    executor = ThreadPoolExecutor(max_workers=8)
    app.state.store = store

    def run_with_timeout(fn):
        future = executor.submit(fn)
        try:
            return future.result(timeout=compute_timeout)
        except FutureTimeout:
            raise TimeoutError from None

    async def read_table(request: Request) -> Problem:
        content_type = request.headers.get("content-type", "")
        body = await request.body()
        if not body:
            raise ParseError("empty payload", 1)
        if content_type.startswith("text/"):
            return problem_from_raw(parse_performance_csv(body.decode("utf-8")))
        data = await request.json()
        if isinstance(data, dict) and "csv" in data:
            return problem_from_raw(parse_performance_csv(data["csv"]))
        if isinstance(data, dict) and "table" in data:
            t = data["table"]
            return build_problem(
                list(t["alternatives"]),
                list(t["criteria"]),
                [list(r) for r in t["performance"]],
                list(t.get("directions") or []) or None,
            )
        raise ParseError("payload must carry 'csv' or 'table'", 1)

    def relations_fragment(session: Session) -> dict:
        if session.relations_cache is not None:
            return {"cached": True, **session.relations_cache}
        statements = session.ordered_statements()
        bundle = run_with_timeout(
            lambda: compute_relations(session.problem, statements)
        )
        doc = build_document(session.problem, __version__, eps_fixed, big_m, relations=bundle)
        fragment = {"relations": to_json_dict(doc)["relations"]}
        session.relations_bundle = bundle
        session.relations_cache = fragment
        return {"cached": False, **fragment}

    def representatives_fragment(session: Session) -> dict:
        if session.representatives_cache is not None:
            return {"cached": True, **session.representatives_cache}
        relations_fragment(session)  # ensure bundle
        bundle = session.relations_bundle
        statements = session.ordered_statements()

        def compute():
            sufficient = procedure1(session.problem, statements, eps_fixed, big_m, bundle)
            minimality = solve_p1(
                session.problem, statements, sufficient.r, eps_fixed, big_m, bundle
            )
            discriminant = solve_p2(
                session.problem, statements, minimality.t, big_m, bundle
            )
            return sufficient, minimality, discriminant

        sufficient, minimality, discriminant = run_with_timeout(compute)
        doc = build_document(
            session.problem,
            __version__,
            eps_fixed,
            big_m,
            sufficient=sufficient,
            minimality=minimality,
            discriminant=discriminant,
        )
        payload = to_json_dict(doc)
        fragment = {
            "sufficient": payload["sufficient"],
            "minimality": payload["minimality"],
            "discriminant": payload["discriminant"],
        }
        session.discriminant = discriminant
        session.representatives_cache = fragment
        return {"cached": False, **fragment}

    @app.post("/api/sessions")
    async def create_session(request: Request):
        try:
            problem = await read_table(request)
        except (ParseError, DomainError, KeyError, ValueError) as exc:
            return _error(400, f"cannot parse table: {exc}")
        session = store.create(problem)
        return JSONResponse(
            status_code=201,
            content={
                "id": session.id,
                "alternatives": list(problem.alternatives),
                "criteria": [c.id for c in problem.criteria],
            },
        )

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            return {
                "id": session.id,
                "alternatives": list(session.problem.alternatives),
                "criteria": [c.id for c in session.problem.criteria],
                "statements": session.statement_list(),
                "created_at": session.created_at,
                "updated_at": session.updated_at,
            }

    @app.post("/api/sessions/{session_id}/preferences")
    async def add_preference(session_id: str, request: Request):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        try:
            data = await request.json()
            if "line" in data:
                parsed = parse_preferences(data["line"])
                if len(parsed) != 1:
                    raise ParseError("expected exactly one statement", 1)
                statement = parsed[0]
            else:
                statement = PreferenceStatement(
                    kind=data["kind"], a=data["a"], b=data["b"]
                )
            session.problem.index_of(statement.a)
            session.problem.index_of(statement.b)
        except (ParseError, DomainError, KeyError, ValueError) as exc:
            return _error(400, f"bad statement: {exc}")

        with session.lock:
            candidate = session.ordered_statements() + [statement]
            try:
                check_compatibility(base_system(session.problem, candidate))
            except IncompatiblePreferences as exc:
                return _error(
                    409,
                    f"statement would make the preferences incompatible: {exc}",
                    rejected=str(statement),
                )
            session.statements[session.next_index] = statement
            session.next_index += 1
            session.invalidate()
            return {"statements": session.statement_list()}

    @app.delete("/api/sessions/{session_id}/preferences/{index}")
    def remove_preference(session_id: str, index: int):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            if index not in session.statements:
                return _error(404, "unknown statement index")
            del session.statements[index]
            session.invalidate()
            return {"statements": session.statement_list()}

    @app.get("/api/sessions/{session_id}/relations")
    def get_relations(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            try:
                return relations_fragment(session)
            except IncompatiblePreferences as exc:
                return _error(422, str(exc))
            except TimeoutError:
                return _error(503, "computation timed out")

    @app.post("/api/sessions/{session_id}/representatives")
    def compute_representatives(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with session.lock:
            try:
                return representatives_fragment(session)
            except IncompatiblePreferences as exc:
                return _error(422, str(exc))
            except TimeoutError:
                return _error(503, "computation timed out")

    @app.get("/api/sessions/{session_id}/explanations")
    def get_explanation(session_id: str, a: str = "", b: str = ""):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        if not a or not b:
            return _error(400, "query parameters a and b are required")
        with session.lock:
            try:
                session.problem.index_of(a)
                session.problem.index_of(b)
            except DomainError as exc:
                return _error(400, str(exc))
            try:
                representatives_fragment(session)
                explanation = explain_pair(session.discriminant, session.problem, a, b)
            except IncompatiblePreferences as exc:
                return _error(422, str(exc))
            except TimeoutError:
                return _error(503, "computation timed out")
            except NoCoveringFunction as exc:
                return _error(409, str(exc))
            return {
                "pair": list(explanation.pair),
                "function": explanation.label,
                "margin": explanation.margin,
                "a_marginals": explanation.a_marginals,
                "b_marginals": explanation.b_marginals,
                "differing": [
                    {"criterion": crit, "gap": gap} for crit, gap in explanation.differing
                ],
            }

    return app
