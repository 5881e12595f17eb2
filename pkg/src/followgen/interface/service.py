"""HTTP service: conversational sessions over the generation pipeline.

Endpoints:
    POST  /sessions                   create a session
    POST  /sessions/{id}/ask          {question} -> answer + follow-up candidates
    POST  /sessions/{id}/choose       {index} -> promotes the follow-up to the next turn
    GET   /sessions/{id}/trace/{turn} full trace including the graph export
    PATCH /sessions/{id}/config       {beta} -> re-select + re-fuse the latest turn
    GET   /healthz

Sessions live in memory (optional JSON snapshots to a directory) and are
evicted after a TTL. Per-session operations are serialized; backends are
shared across sessions. The beta PATCH reuses the turn's cached graph and
walk seed, so only the composite scores and the fused output change.
"""

from __future__ import annotations

import json
import math
import threading
import time
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from ..backends.base import BackendSet
from ..errors import FollowgenError
from ..fusion import FollowUpQuestion, continue_knowledge, generate_followup
from ..pipeline import PipelineConfig, PipelineResult, derive_seed, run
from ..prompting import ANSWER_QUESTION, load_template
from ..recognition import QAPair
from ..selection import select_node

DEFAULT_TTL_S = 3600.0
DEFAULT_FOLLOWUP_COUNT = 3


class CreateSessionResponse(BaseModel):
    id: str


class AskRequest(BaseModel):
    question: str


class FollowupModel(BaseModel):
    index: int
    text: str


class TraceSummaryModel(BaseModel):
    topic_page_title: str
    selected_node_id: str
    selected_node_title: str
    node_count: int
    beta: float | str


class AskResponse(BaseModel):
    turn: int
    question: str
    answer: str
    followups: list[FollowupModel]
    trace_summary: TraceSummaryModel


class ChooseRequest(BaseModel):
    index: int


class PatchConfigRequest(BaseModel):
    beta: float | str


class PatchConfigResponse(BaseModel):
    beta: float | str
    followups: list[FollowupModel]
    trace_summary: TraceSummaryModel


class HealthResponse(BaseModel):
    status: str


@dataclass
class Turn:
    question: str
    answer: str
    followups: list[FollowUpQuestion] = field(default_factory=list)
    chosen: int | None = None
    result: PipelineResult | None = None
    seed: int = 0


@dataclass
class Session:
    id: str
    beta: float
    turns: list[Turn] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)


class SessionStore:
    def __init__(self, ttl_s: float = DEFAULT_TTL_S, snapshot_dir: str | Path | None = None):
        self._sessions: dict[str, Session] = {}
        self._ttl_s = ttl_s
        self._snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        self._lock = threading.Lock()

    def create(self, beta: float) -> Session:
        session = Session(id=uuid.uuid4().hex, beta=beta)
        with self._lock:
            self._evict()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._evict()
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        session.last_access = time.monotonic()
        return session

    def snapshot(self, session: Session) -> None:
        if self._snapshot_dir is None:
            return
        self._snapshot_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "id": session.id,
            "beta": _beta_out(session.beta),
            "turns": [
                {
                    "question": turn.question,
                    "answer": turn.answer,
                    "followups": [fq.text for fq in turn.followups],
                    "chosen": turn.chosen,
                }
                for turn in session.turns
            ],
        }
        path = self._snapshot_dir / f"{session.id}.json"
        path.write_text(json.dumps(payload, indent=2), encoding="utf-8")

    def _evict(self) -> None:
        now = time.monotonic()
        expired = [
            sid for sid, s in self._sessions.items() if now - s.last_access > self._ttl_s
        ]
        for sid in expired:
            del self._sessions[sid]


def _beta_in(value: float | str) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        try:
            return float(value)
        except ValueError as err:
            raise HTTPException(status_code=422, detail=f"invalid beta: {value!r}") from err
    return float(value)


def _beta_out(beta: float) -> float | str:
    return "inf" if math.isinf(beta) else beta


def create_app(
    config: PipelineConfig,
    backends: BackendSet,
    followup_count: int = DEFAULT_FOLLOWUP_COUNT,
    session_ttl_s: float = DEFAULT_TTL_S,
    snapshot_dir: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    # The service needs graphs in the trace for the inspector and the beta PATCH.
    config = replace(config, trace_level="full")
    app = FastAPI(title="followgen", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(ttl_s=session_ttl_s, snapshot_dir=snapshot_dir)
    answer_template = load_template(ANSWER_QUESTION, config.prompts_dir)

    def turn_config(session: Session, turn_index: int) -> PipelineConfig:
        seed = derive_seed(config.seed, f"{session.id}:{turn_index}")
        return replace(
            config,
            selection=replace(config.selection, beta=session.beta, rng_seed=seed),
            generation=replace(config.generation, seed=seed),
        )

    def candidate_followups(result: PipelineResult, cfg: PipelineConfig, count: int):
        qa = result.trace.qa
        knowledge = result.trace.knowledge
        followups = [result.question]
        seen = {result.question.text}
        for extra in range(1, count):
            params = replace(
                cfg.generation, seed=derive_seed(cfg.generation.seed or 0, f"fq:{extra}")
            )
            try:
                candidate = generate_followup(
                    qa,
                    knowledge,
                    backends,
                    params=params,
                    prompts_dir=cfg.prompts_dir,
                    trace_id=result.question.trace_id,
                )
            except FollowgenError:
                continue  # fewer candidates beats a failed turn
            if candidate.text not in seen:
                seen.add(candidate.text)
                followups.append(candidate)
        return followups

    def run_turn(session: Session, question: str) -> AskResponse:
        turn_index = len(session.turns)
        cfg = turn_config(session, turn_index)
        answer_prompt = answer_template.render(question=question)
        answer = backends.chat.chat_complete(answer_prompt, cfg.generation)
        qa = QAPair(question=question, answer=answer)
        result = run(qa, cfg, backends)
        if not result.ok:
            raise HTTPException(
                status_code=502,
                detail={"stage": result.failed_stage, "error": result.error},
            )
        followups = candidate_followups(result, cfg, followup_count)
        turn = Turn(
            question=question,
            answer=answer,
            followups=followups,
            result=result,
            seed=cfg.selection.rng_seed,
        )
        session.turns.append(turn)
        store.snapshot(session)
        return AskResponse(
            turn=turn_index,
            question=question,
            answer=answer,
            followups=[
                FollowupModel(index=i, text=fq.text) for i, fq in enumerate(followups)
            ],
            trace_summary=_summary(session, result),
        )

    def _summary(session: Session, result: PipelineResult) -> TraceSummaryModel:
        trace = result.trace
        return TraceSummaryModel(
            topic_page_title=trace.topic_page.title,
            selected_node_id=trace.selected_node.id,
            selected_node_title=trace.selected_node.title,
            node_count=len(trace.graph.nodes) if trace.graph else 0,
            beta=_beta_out(session.beta),
        )

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.post("/sessions", response_model=CreateSessionResponse)
    def create_session() -> CreateSessionResponse:
        session = store.create(beta=config.selection.beta)
        store.snapshot(session)
        return CreateSessionResponse(id=session.id)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        session = store.get(session_id)
        with session.lock:
            return {
                "id": session.id,
                "beta": _beta_out(session.beta),
                "turns": [
                    {
                        "question": turn.question,
                        "answer": turn.answer,
                        "followups": [
                            {"index": i, "text": fq.text}
                            for i, fq in enumerate(turn.followups)
                        ],
                        "chosen": turn.chosen,
                    }
                    for turn in session.turns
                ],
            }

    @app.post("/sessions/{session_id}/ask", response_model=AskResponse)
    def ask(session_id: str, body: AskRequest) -> AskResponse:
        if not body.question.strip():
            raise HTTPException(status_code=422, detail="question must be non-empty")
        session = store.get(session_id)
        with session.lock:
            return run_turn(session, body.question)

    @app.post("/sessions/{session_id}/choose", response_model=AskResponse)
    def choose(session_id: str, body: ChooseRequest) -> AskResponse:
        session = store.get(session_id)
        with session.lock:
            if not session.turns:
                raise HTTPException(status_code=409, detail="choose before ask")
            latest = session.turns[-1]
            if not 0 <= body.index < len(latest.followups):
                raise HTTPException(status_code=422, detail="follow-up index out of range")
            latest.chosen = body.index
            return run_turn(session, latest.followups[body.index].text)

    @app.get("/sessions/{session_id}/trace/{turn}")
    def trace(session_id: str, turn: int) -> dict:
        session = store.get(session_id)
        with session.lock:
            if not 0 <= turn < len(session.turns):
                raise HTTPException(status_code=404, detail="unknown turn")
            result = session.turns[turn].result
            return result.to_dict(include_timings=True)

    @app.patch("/sessions/{session_id}/config", response_model=PatchConfigResponse)
    def patch_config(session_id: str, body: PatchConfigRequest) -> PatchConfigResponse:
        beta = _beta_in(body.beta)
        if not math.isinf(beta) and beta < 0:
            raise HTTPException(status_code=422, detail="beta must be >= 0")
        session = store.get(session_id)
        with session.lock:
            session.beta = beta
            if not session.turns:
                raise HTTPException(status_code=409, detail="no turn to recompute")
            latest = session.turns[-1]
            result = latest.result
            trace = result.trace
            # Reuse the cached graph and the turn's walk seed: beta only
            # affects the composite score, never the structure.
            sel_cfg = replace(config.selection, beta=beta, rng_seed=latest.seed)
            outcome = select_node(
                trace.graph, trace.key_info.query_text, backends, sel_cfg
            )
            trace.node_scores = outcome.all_scores
            trace.selected_node = outcome.node
            gen_params = replace(config.generation, seed=latest.seed)
            knowledge = continue_knowledge(
                trace.qa,
                outcome.node.definition,
                backends,
                params=gen_params,
                prompts_dir=config.prompts_dir,
                source_node_id=outcome.node.id,
            )
            trace.knowledge = knowledge
            question = generate_followup(
                trace.qa,
                knowledge,
                backends,
                params=gen_params,
                prompts_dir=config.prompts_dir,
                trace_id=result.question.trace_id,
            )
            trace.question = question
            result.question = question
            patched = replace(
                config,
                selection=sel_cfg,
                generation=gen_params,
            )
            latest.followups = candidate_followups(result, patched, followup_count)
            store.snapshot(session)
            return PatchConfigResponse(
                beta=_beta_out(beta),
                followups=[
                    FollowupModel(index=i, text=fq.text)
                    for i, fq in enumerate(latest.followups)
                ],
                trace_summary=_summary(session, result),
            )

    if ui_dir is not None and Path(ui_dir).exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
