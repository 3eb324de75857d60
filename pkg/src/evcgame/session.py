"""Stateful game sessions over local HTTP/JSON.

A session pins a graph, a guard count, a mode (human attacks or human
defends) and a defender source. The engine side of every round is produced
by the chosen source; the human side arrives via POST. All legality checks
happen here on the server; clients only render.

Endpoints: POST /sessions, GET /sessions/{id}, POST /sessions/{id}/attack,
POST /sessions/{id}/defense, GET /sessions/{id}/trace, DELETE /sessions/{id}.
Errors are JSON {code, message, detail}. Traces append, one line per event,
to <trace_dir>/<session id>.trace in the engine trace format.
"""

from __future__ import annotations

import itertools
import json
import random
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import cobipartite as cb
from . import engine, reduction
from .graphs import Graph, GraphFormatError, is_vertex_cover, parse_graph


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


class _ExactSource:
    name = "exact"

    def __init__(self, g: Graph, k: int):
        s = engine.safe_set(g, k)
        if not s.members:
            raise ApiError(400, "inapplicable-source",
                           f"the safe set for k={k} is empty",
                           "raise k to at least the guard number")
        self.safe = s

    def initial(self) -> frozenset[int]:
        return engine.set_of(self.safe.members[0])

    def defend(self, config, attacked):
        plan, nxt = engine.defender_policy_step(self.safe, config, attacked)
        return plan, nxt

    def annotation(self) -> str:
        return ""


class _NiceSource:
    name = "reduction-nice"

    def __init__(self, ri: reduction.ReducedInstance):
        ok, witness = reduction.rbds_oracle(ri.source)
        if not ok:
            raise ApiError(400, "inapplicable-source",
                           "the source RBDS instance has no dominating set",
                           "reduction-nice defends only YES instances")
        positions = {ri.source.reds.index(w) + 1 for w in witness}
        dom = reduction.pad_dominating_set(ri.source, positions)
        self.ri = ri
        self.nc = reduction.NiceCover(("backup",), dom)

    def initial(self) -> frozenset[int]:
        return self.nc.vertices(self.ri)

    def defend(self, config, attacked):
        plan, self.nc = reduction.defend_nice(self.ri, self.nc, attacked)
        return plan, self.nc.vertices(self.ri)

    def annotation(self) -> str:
        return "/".join(str(part) for part in self.nc.kind)


class _CobipSource:
    name = "cobipartite"

    def __init__(self, inst: cb.CobipInstance):
        self.inst = inst
        self.analysis = cb.analyze(inst)
        self.value, self.branch = cb.evc_cobip(inst, self.analysis)
        self.ct = cb.initial_template(inst, self.analysis)

    def initial(self) -> frozenset[int]:
        return self.ct.materialize(self.inst)

    def defend(self, config, attacked):
        plan, self.ct = cb.defend_cobip(self.inst, self.analysis, self.ct,
                                        attacked)
        return plan, self.ct.materialize(self.inst)

    def annotation(self) -> str:
        return "/".join(str(part) for part in self.ct.kind)


class _AboSource:
    name = "all-but-one"

    def __init__(self, g: Graph):
        self.g = g
        self.hole = 0

    def initial(self) -> frozenset[int]:
        return frozenset(x for x in range(self.g.n) if x != self.hole)

    def defend(self, config, attacked):
        u, v = attacked
        cover = frozenset(x for x in range(self.g.n) if x != self.hole)
        mapping = {x: x for x in cover}
        if self.hole in (u, v):
            other = v if self.hole == u else u
            mapping[other] = self.hole
            crossing = (other, self.hole)
            self.hole = other
        else:
            mapping[u], mapping[v] = v, u
            crossing = (u, v)
        plan = engine.MovePlan(tuple(sorted(mapping.items())), crossing)
        return plan, frozenset(x for x in range(self.g.n) if x != self.hole)

    def annotation(self) -> str:
        return f"abo/{self.g.ids[self.hole]}"


@dataclass
class Session:
    id: str
    g: Graph
    k: int
    mode: str
    source: object
    seed: int
    rng: random.Random
    config: frozenset[int]
    round: int = 0
    status: str = "live"
    trace: list = field(default_factory=list)
    pending_attack: Optional[tuple[int, int]] = None
    roles: Optional[dict[str, list]] = None
    sides: Optional[dict[str, str]] = None
    lost_edge: Optional[tuple[str, str]] = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class CreateSession(BaseModel):
    mode: str
    defender_source: str
    graph: Optional[str] = None
    k: Optional[int] = None
    seed: int = 0
    sides: Optional[str] = None
    rbds: Optional[dict] = None
    variant: str = "bipartite"


class AttackBody(BaseModel):
    edge: list[str]


class DefenseBody(BaseModel):
    moves: list[list[str]]


def _edge_ids(g: Graph, e: tuple[int, int]) -> list[str]:
    return [g.ids[e[0]], g.ids[e[1]]]


def _session_view(s: Session) -> dict:
    g = s.g
    return {
        "id": s.id,
        "mode": s.mode,
        "defender_source": s.source.name,
        "k": s.k,
        "round": s.round,
        "status": s.status,
        "vertices": list(g.ids),
        "edges": [_edge_ids(g, e) for e in g.edges],
        "config": sorted(g.ids[v] for v in s.config),
        "annotation": s.source.annotation(),
        "pending_attack": _edge_ids(g, s.pending_attack) if s.pending_attack else None,
        "roles": s.roles,
        "sides": s.sides,
        "lost_edge": list(s.lost_edge) if s.lost_edge else None,
    }


def _event(s: Session, attacked, plan, detail: str = "") -> dict:
    g = s.g
    ev = {
        "round": s.round,
        "attacked": _edge_ids(g, attacked),
        "moves": [[g.ids[a], g.ids[b]] for a, b in plan.movers()] if plan else [],
        "config": sorted(g.ids[v] for v in s.config),
        "annotation": s.source.annotation(),
        "status": s.status,
    }
    if detail:
        ev["detail"] = detail
    return ev


def create_app(trace_dir: Optional[Path] = None, debug: bool = False,
               static_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="evcgame sessions")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    counter = itertools.count(1)
    if trace_dir is not None:
        trace_dir = Path(trace_dir)
        trace_dir.mkdir(parents=True, exist_ok=True)

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code, "message": exc.message,
                                     "detail": exc.detail})

    def persist(s: Session, ev: dict) -> None:
        if trace_dir is None:
            return
        moves = ";".join(f"{a}->{b}" for a, b in ev["moves"])
        u, v = ev["attacked"]
        line = f"{ev['round']}, {u}-{v}, {moves}, {' '.join(ev['config'])}\n"
        with open(trace_dir / f"{s.id}.trace", "a", encoding="utf-8") as fh:
            fh.write(line)

    def get_session(sid: str) -> Session:
        with registry_lock:
            s = sessions.get(sid)
        if s is None:
            raise ApiError(404, "unknown-session", f"no session {sid!r}")
        return s

    def require_live(s: Session) -> None:
        if s.status == "closed":
            raise ApiError(410, "session-closed",
                           "session is closed; reads are still allowed")
        if s.status != "live":
            raise ApiError(409, "game-over", f"session status is {s.status}")

    def announce_attack(s: Session) -> None:
        if not s.g.edges:
            s.pending_attack = None
            return
        s.pending_attack = s.rng.choice(s.g.edges)

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSession):
        if body.mode not in ("human-attacker", "human-defender"):
            raise ApiError(400, "bad-mode", f"unknown mode {body.mode!r}")
        roles = None
        sides = None
        try:
            if body.defender_source == "reduction-nice":
                if body.rbds is None:
                    raise ApiError(400, "missing-input",
                                   "reduction-nice needs an 'rbds' object")
                inst = reduction.RbdsInstance.from_json(json.dumps(body.rbds))
                ri = reduction.build_reduction(inst, body.variant)
                g = ri.h
                k = ri.ell if body.k is None else body.k
                if k != ri.ell:
                    raise ApiError(400, "bad-k",
                                   f"reduction sessions use k = ell = {ri.ell}")
                source = _NiceSource(ri)
                roles = {g.ids[v]: list(role) for v, role in ri.roles.items()}
            else:
                if body.graph is None:
                    raise ApiError(400, "missing-input",
                                   "a 'graph' file body is required")
                g = parse_graph(body.graph)
                if body.defender_source == "exact":
                    if body.k is None:
                        raise ApiError(400, "bad-k", "exact sessions need k")
                    source = _ExactSource(g, body.k)
                    k = body.k
                elif body.defender_source == "cobipartite":
                    if body.sides is None:
                        raise ApiError(400, "missing-input",
                                       "cobipartite needs a 'sides' sidecar")
                    a, b = cb.parse_sides(g, body.sides)
                    inst = cb.normalize(g, a, b)
                    source = _CobipSource(inst)
                    k = source.value if body.k is None else body.k
                    if k != source.value:
                        raise ApiError(400, "bad-k",
                                       f"cobipartite sessions use k = {source.value}")
                    sides = {g.ids[v]: ("A" if v in inst.side_a else "B")
                             for v in range(g.n)}
                elif body.defender_source == "all-but-one":
                    k = g.n - 1 if body.k is None else body.k
                    if k != g.n - 1:
                        raise ApiError(400, "bad-k",
                                       "all-but-one sessions use k = n-1")
                    source = _AboSource(g)
                else:
                    raise ApiError(400, "bad-source",
                                   f"unknown defender source {body.defender_source!r}")
        except (GraphFormatError, reduction.ReductionError, cb.SideError,
                engine.BudgetExceededError) as exc:
            raise ApiError(400, "bad-input", str(exc)) from exc
        with registry_lock:
            sid = f"s{next(counter):04d}"
            s = Session(id=sid, g=g, k=k, mode=body.mode, source=source,
                        seed=body.seed, rng=random.Random(body.seed),
                        config=source.initial(), roles=roles, sides=sides)
            sessions[sid] = s
        if s.mode == "human-defender":
            announce_attack(s)
        return _session_view(s)

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        return _session_view(get_session(sid))

    @app.post("/sessions/{sid}/attack")
    def submit_attack(sid: str, body: AttackBody):
        s = get_session(sid)
        with s.lock:
            require_live(s)
            if s.mode != "human-attacker":
                raise ApiError(409, "wrong-mode",
                               "session is not awaiting a human attack")
            if len(body.edge) != 2:
                raise ApiError(400, "bad-edge", "edge must be a pair of ids")
            try:
                e = s.g.edge_key(s.g.index(body.edge[0]), s.g.index(body.edge[1]))
            except (KeyError, GraphFormatError) as exc:
                raise ApiError(400, "bad-edge", str(exc)) from exc
            try:
                outcome = s.source.defend(s.config, e)
            except (engine.UnsafeConfigError, reduction.ReductionError,
                    cb.StrategyError) as exc:
                raise ApiError(500, "defender-error", str(exc)) from exc
            s.round += 1
            if outcome is None:
                s.status = "defender-lost"
                s.lost_edge = tuple(body.edge)
                ev = _event(s, e, None, detail="defender has no legal move")
            else:
                plan, s.config = outcome
                ev = _event(s, e, plan)
            s.trace.append(ev)
            persist(s, ev)
            if debug:
                assert is_vertex_cover(s.g, s.config) or s.status != "live"
            return ev

    @app.post("/sessions/{sid}/defense")
    def submit_defense(sid: str, body: DefenseBody):
        s = get_session(sid)
        with s.lock:
            require_live(s)
            if s.mode != "human-defender":
                raise ApiError(409, "wrong-mode",
                               "session is not awaiting a human defense")
            if s.pending_attack is None:
                raise ApiError(409, "no-attack", "no attack has been announced")
            g = s.g
            mapping = {x: x for x in s.config}
            seen_origin: set[int] = set()
            for mv in body.moves:
                if len(mv) != 2:
                    raise ApiError(400, "not-a-bijection",
                                   "each move must be [from, to]")
                try:
                    a, b = g.index(mv[0]), g.index(mv[1])
                except KeyError as exc:
                    raise ApiError(400, "not-a-bijection",
                                   f"unknown vertex {exc.args[0]!r}") from exc
                if a not in mapping:
                    raise ApiError(400, "not-a-bijection",
                                   f"no guard on {mv[0]!r}")
                if a in seen_origin:
                    raise ApiError(400, "not-a-bijection",
                                   f"guard on {mv[0]!r} moved twice")
                seen_origin.add(a)
                if a != b and not g.has_edge(a, b):
                    raise ApiError(400, "neighborhood-violation",
                                   f"{mv[0]!r} and {mv[1]!r} are not adjacent")
                mapping[a] = b
            targets = list(mapping.values())
            if len(set(targets)) != len(targets):
                raise ApiError(400, "not-a-bijection",
                               "two guards end on the same vertex")
            u, v = s.pending_attack
            if mapping.get(u) == v:
                crossing = (u, v)
            elif mapping.get(v) == u:
                crossing = (v, u)
            else:
                raise ApiError(400, "no-crossing",
                               "no guard traverses the attacked edge")
            plan = engine.MovePlan(tuple(sorted(mapping.items())), crossing)
            attacked = s.pending_attack
            s.round += 1
            s.config = frozenset(targets)
            ev_detail = ""
            if not is_vertex_cover(g, s.config):
                s.status = "defender-lost"
                for i, j in g.edges:
                    if i not in s.config and j not in s.config:
                        s.lost_edge = (g.ids[i], g.ids[j])
                        break
                ev_detail = f"uncovered edge {s.lost_edge[0]}-{s.lost_edge[1]}"
                s.pending_attack = None
            else:
                announce_attack(s)
            ev = _event(s, attacked, plan, detail=ev_detail)
            s.trace.append(ev)
            persist(s, ev)
            return ev

    @app.get("/sessions/{sid}/trace")
    def get_trace(sid: str):
        s = get_session(sid)
        lines = []
        for ev in s.trace:
            moves = ";".join(f"{a}->{b}" for a, b in ev["moves"])
            u, v = ev["attacked"]
            lines.append(f"{ev['round']}, {u}-{v}, {moves}, "
                         f"{' '.join(ev['config'])}")
        return PlainTextResponse("\n".join(lines) + ("\n" if lines else ""))

    @app.delete("/sessions/{sid}")
    def close_session(sid: str):
        s = get_session(sid)
        with s.lock:
            s.status = "closed"
        return _session_view(s)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=Path(static_dir), html=True),
                  name="ui")

    return app
