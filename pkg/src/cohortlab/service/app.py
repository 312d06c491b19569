"""HTTP facade over the engine.

One dataset and one cohort session per process. All endpoints are
deterministic under mock/replay LLM modes; matrix/wrap/bars reads never
mutate state. Errors carry a stable machine-readable ``kind``.
"""

from __future__ import annotations

import threading
import warnings

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..cohorts import (
    CohortTree,
    EmptyCohortWarning,
    ReplayError,
    UnknownCohort,
    UnknownParent,
    load_session,
    save_session,
)
from ..dataset import UnknownUid, load_dataset
from ..query import ParseError, TypecheckError, compile_query
from ..query.errors import MissingField, TypeMismatch, UnknownEventKind, UnknownLabel
from ..vis.bars import build_bars
from ..vis.config import FoldConfig, LegendEntry, default_legend, is_bandable
from ..vis.errors import UnknownOutcomeKey, UnknownSortKey
from ..vis.folding import cycle_distribution
from ..vis.matrix import build_matrix
from ..vis.sortkeys import parse_sort_key
from ..vis.wrap import WrapConfig, build_wrap
from ..wrangler import PromptLog, WranglerError, WranglerRequest, run_pipeline, small_multiples
from .config import ServiceConfig, build_provider


class BusyError(Exception):
    """Another natural-language pipeline is already running for this session."""


class InvalidArgument(Exception):
    """A request parameter failed validation."""


class Engine:
    """Store + cohort tree + provider bundle behind the HTTP layer."""

    def __init__(self, store, provider, config: ServiceConfig | None = None):
        self.store = store
        self.provider = provider
        self.config = config
        self.tree = CohortTree(store)
        self.defaults = config.defaults if config is not None else FoldConfig()
        self.prompt_log = PromptLog()
        # one in-flight NL pipeline per session
        self._nl_guard = threading.Lock()

        clinical = store.codebook.clinical_fields()
        numeric = [fd.name for fd in clinical if not fd.is_categorical]
        self.default_sort_key = f"clinical:{(numeric or [fd.name for fd in clinical])[0]}"
        bandable = [fd.name for fd in clinical if is_bandable(fd.name)]
        self.default_outcome_key = bandable[0] if bandable else None

    @classmethod
    def from_config(cls, config: ServiceConfig) -> "Engine":
        store = load_dataset(config.data_dir)
        return cls(store, build_provider(config.llm), config)


class NlBody(BaseModel):
    text: str
    parentId: str | None = None


class DslBody(BaseModel):
    queryText: str
    parentId: str | None = None


class SessionBody(BaseModel):
    path: str | None = None


def _legend_from_bounds(text: str, bp_type: str) -> tuple[LegendEntry, ...]:
    """Parse "120,130,140,180" into legend entries; names are carried
    over from the default legend when the bucket count matches."""
    try:
        bounds = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InvalidArgument(f"bad legendBounds {text!r}") from None
    if not bounds:
        raise InvalidArgument("legendBounds is empty")
    base = default_legend(bp_type)
    n = len(bounds) + 1
    names = [e.name for e in base] if n == len(base) else [f"band-{i + 1}" for i in range(n)]
    entries = [
        LegendEntry(b, names[i], f"band-{i + 1}") for i, b in enumerate(bounds)
    ]
    entries.append(LegendEntry(float("inf"), names[-1], f"band-{n}"))
    return tuple(entries)


def _collect_warnings(fn):
    """Run fn capturing empty-cohort warnings; returns (result, messages)."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", EmptyCohortWarning)
        result = fn()
    return result, [str(w.message) for w in caught if issubclass(w.category, EmptyCohortWarning)]


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="cohortlab", docs_url=None, redoc_url=None)
    store = engine.store

    # ------------------------------------------------------------- errors

    def _payload(kind: str, exc: Exception, **extra) -> dict:
        return {"kind": kind, "message": str(exc), **extra}

    @app.exception_handler(ParseError)
    async def _parse_error(_req, exc: ParseError):
        return JSONResponse(status_code=400, content=_payload(
            "parse_error", exc,
            offset=exc.offset, expectedTokens=exc.expected_tokens, found=exc.found))

    @app.exception_handler(TypecheckError)
    async def _typecheck_error(_req, exc: TypecheckError):
        extra = {}
        if isinstance(exc, MissingField):
            extra = {"field": exc.name, "suggestions": exc.suggestions}
        elif isinstance(exc, TypeMismatch):
            extra = {"field": exc.field, "expected": exc.expected, "got": exc.got}
        elif isinstance(exc, UnknownEventKind):
            extra = {"eventKind": exc.event_kind, "known": exc.known}
        elif isinstance(exc, UnknownLabel):
            extra = {"field": exc.field, "label": exc.label, "known": exc.known}
        return JSONResponse(status_code=400, content=_payload(exc.kind, exc, **extra))

    @app.exception_handler(WranglerError)
    async def _wrangler_error(_req, exc: WranglerError):
        content = _payload(exc.kind, exc, concept=exc.concept,
                           trace=exc.trace.to_json() if exc.trace is not None else None)
        return JSONResponse(status_code=400, content=content)

    @app.exception_handler(UnknownSortKey)
    async def _sort_key_error(_req, exc):
        return JSONResponse(status_code=400, content=_payload("unknown_sort_key", exc))

    @app.exception_handler(UnknownOutcomeKey)
    async def _outcome_key_error(_req, exc):
        return JSONResponse(status_code=400, content=_payload("unknown_outcome_key", exc))

    @app.exception_handler(ReplayError)
    async def _replay_error(_req, exc):
        return JSONResponse(status_code=400, content=_payload("replay_error", exc))

    @app.exception_handler(InvalidArgument)
    async def _invalid_argument(_req, exc):
        return JSONResponse(status_code=400, content=_payload("invalid_argument", exc))

    @app.exception_handler(UnknownCohort)
    async def _unknown_cohort(_req, exc):
        return JSONResponse(status_code=404, content=_payload("unknown_id", exc))

    @app.exception_handler(UnknownParent)
    async def _unknown_parent(_req, exc):
        return JSONResponse(status_code=404, content=_payload("unknown_id", exc))

    @app.exception_handler(UnknownUid)
    async def _unknown_uid(_req, exc):
        return JSONResponse(status_code=404, content=_payload("unknown_id", exc))

    @app.exception_handler(BusyError)
    async def _busy(_req, exc):
        return JSONResponse(status_code=429, content=_payload("busy", exc))

    # -------------------------------------------------------------- reads

    @app.get("/api/codebook")
    def get_codebook():
        return store.codebook.to_json()

    @app.get("/api/cohorts")
    def get_cohorts():
        return engine.tree.to_json()

    @app.get("/api/cohorts/{cohort_id}/summary")
    def get_summary(cohort_id: str):
        return engine.tree.group_summary(cohort_id)

    def _fold_config(bp_type, cycle_hours, legend_bounds) -> FoldConfig:
        d = engine.defaults
        bp = bp_type or d.bp_type
        legend = d.legend
        if legend_bounds is not None:
            legend = _legend_from_bounds(legend_bounds, bp)
        try:
            return FoldConfig(
                cycle_hours=cycle_hours if cycle_hours is not None else d.cycle_hours,
                bp_type=bp,
                legend=legend,
                opacity_floor=d.opacity_floor,
                opacity_ref_count=d.opacity_ref_count,
            )
        except ValueError as exc:
            raise InvalidArgument(str(exc)) from exc

    @app.get("/api/cohorts/{cohort_id}/matrix")
    def get_matrix(
        cohort_id: str,
        bp_type: str | None = Query(default=None, alias="bpType"),
        cycle_hours: float | None = Query(default=None, alias="cycleHours"),
        sort_key: str | None = Query(default=None, alias="sortKey"),
        outcome_key: str | None = Query(default=None, alias="outcomeKey"),
        direction: str = Query(default="asc"),
        cycle_lo: float | None = Query(default=None, alias="cycleLo"),
        cycle_hi: float | None = Query(default=None, alias="cycleHi"),
        legend_bounds: str | None = Query(default=None, alias="legendBounds"),
    ):
        node = engine.tree.node(cohort_id)
        cfg = _fold_config(bp_type, cycle_hours, legend_bounds)
        key = parse_sort_key(sort_key or engine.default_sort_key, store.codebook)
        outcome = outcome_key or engine.default_outcome_key
        if outcome is None:
            raise InvalidArgument("outcomeKey is required: no bandable outcome field")
        if direction not in ("asc", "desc"):
            raise InvalidArgument(f"direction must be asc or desc, got {direction!r}")
        cycle_filter = None
        if cycle_lo is not None or cycle_hi is not None:
            lo = cycle_lo if cycle_lo is not None else 0.0
            hi = cycle_hi if cycle_hi is not None else cfg.cycle_hours
            if not (0 <= lo < hi):
                raise InvalidArgument(f"bad cycle filter [{lo}, {hi})")
            cycle_filter = (lo, hi)
        model = build_matrix(store, node.member_uids, cfg, key, outcome,
                             direction=direction, cycle_filter=cycle_filter)
        return model.to_json()

    @app.get("/api/cohorts/{cohort_id}/cycle-distribution")
    def get_cycle_distribution(
        cohort_id: str,
        bins: int = Query(default=48, ge=1, le=1440),
        cycle_hours: float | None = Query(default=None, alias="cycleHours"),
    ):
        node = engine.tree.node(cohort_id)
        c = cycle_hours if cycle_hours is not None else engine.defaults.cycle_hours
        if c <= 0:
            raise InvalidArgument("cycleHours must be > 0")
        return {
            "cycleHours": c,
            "bins": cycle_distribution(store, node.member_uids, c, bins),
        }

    @app.get("/api/cohorts/{cohort_id}/inspection")
    def get_inspection(cohort_id: str):
        node = engine.tree.node(cohort_id)
        parent_uids = (
            engine.tree.node(node.parent_id).member_uids
            if node.parent_id is not None else set(store.uids)
        )
        specs = small_multiples(node.typed, parent_uids, node.member_uids, store)
        return {
            "cohort": node.to_json(),
            "trace": node.trace.to_json() if node.trace is not None else None,
            "smallMultiples": [s.to_json() for s in specs],
        }

    @app.get("/api/patients/{uid}/wrap")
    def get_wrap(
        uid: str,
        bp_type: str | None = Query(default=None, alias="bpType"),
        cycle_hours: float | None = Query(default=None, alias="cycleHours"),
        baseline: float = Query(default=120.0),
        samples_per_span: int = Query(default=16, alias="samplesPerSpan", ge=2, le=128),
    ):
        d = engine.defaults
        try:
            cfg = WrapConfig(
                cycle_hours=cycle_hours if cycle_hours is not None else d.cycle_hours,
                bp_type=bp_type or d.bp_type,
                baseline=baseline,
                samples_per_span=samples_per_span,
            )
        except ValueError as exc:
            raise InvalidArgument(str(exc)) from exc
        return build_wrap(store, uid, cfg).to_json()

    @app.get("/api/patients/{uid}/bars")
    def get_bars(
        uid: str,
        bp_type: str | None = Query(default=None, alias="bpType"),
        baseline_low: float = Query(default=120.0, alias="baselineLow"),
        baseline_high: float | None = Query(default=None, alias="baselineHigh"),
    ):
        try:
            model = build_bars(store, uid, bp_type or engine.defaults.bp_type,
                               baseline_low, baseline_high)
        except ValueError as exc:
            raise InvalidArgument(str(exc)) from exc
        return model.to_json()

    # ------------------------------------------------------------- writes

    @app.post("/api/cohorts/nl")
    def post_nl(body: NlBody):
        if not engine._nl_guard.acquire(blocking=False):
            raise BusyError("a natural-language request is already in flight")
        try:
            request = WranglerRequest(
                body.text, store.codebook, parent_cohort_id=body.parentId)
            if body.parentId is not None:
                engine.tree.node(body.parentId)  # 404 before calling the provider
            typed, trace = run_pipeline(
                request, engine.provider, store=store, prompt_log=engine.prompt_log)
            node, warns = _collect_warnings(
                lambda: engine.tree.add_cohort(typed, trace=trace, parent_id=body.parentId))
            return {"cohort": node.to_json(), "trace": trace.to_json(), "warnings": warns}
        except ValueError as exc:
            raise InvalidArgument(str(exc)) from exc
        finally:
            engine._nl_guard.release()

    @app.post("/api/cohorts/dsl")
    def post_dsl(body: DslBody):
        typed = compile_query(body.queryText, store.codebook)
        node, warns = _collect_warnings(
            lambda: engine.tree.add_cohort(typed, parent_id=body.parentId))
        return {"cohort": node.to_json(), "warnings": warns}

    @app.delete("/api/cohorts/{cohort_id}")
    def delete_cohort(cohort_id: str):
        return {"removed": engine.tree.remove_cohort(cohort_id)}

    def _session_dir(body: SessionBody):
        path = body.path or (engine.config.session_dir if engine.config else None)
        if path is None:
            raise InvalidArgument("no session directory configured and none given")
        return path

    @app.post("/api/session/save")
    def post_session_save(body: SessionBody):
        log_path = save_session(engine.tree, _session_dir(body))
        return {"path": str(log_path.parent), "records": len(engine.tree.log)}

    @app.post("/api/session/load")
    def post_session_load(body: SessionBody):
        engine.tree = load_session(_session_dir(body), store)
        return engine.tree.to_json()

    return app


def serve(config: ServiceConfig) -> None:
    """Load the dataset and run the HTTP service (blocking)."""
    import uvicorn

    engine = Engine.from_config(config)
    uvicorn.run(create_app(engine), host=config.host, port=config.port, log_level="info")
