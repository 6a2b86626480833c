"""Local HTTP JSON API over search, download jobs, datasets, and tabulation.

The service is a loopback companion for the web UI and for scripts. It is
stateless apart from the job table and the storage layout: restarting with
the same data root re-lists every manifested dataset. Jobs execute on a
single background worker, which also guarantees at most one request is in
flight against any host at a time.
"""

from __future__ import annotations

import queue
import threading
import uuid
from dataclasses import dataclass, field as dc_field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import tabulate as tab
from .adapters import SOURCES, list_sources, run_search
from .adapters import faers as faers_adapter
from .adapters import vaers as vaers_adapter
from .core_types import (
    AccessMode,
    CountRecord,
    DrugQuery,
    SourceId,
    format_rfc3339,
    records_from_csv,
)
from .drivers import FetchDriver, ReplayDriver
from .errors import (
    ClassMissingTarget,
    DomDrift,
    DrugNotFound,
    NotWritable,
    PharmaHarvestError,
    UnknownLabel,
)
from .fetch import PolitenessPolicy, PoliteFetcher
from .store import Layout, init_layout, slugify

DEFAULT_PORT = 8799
INLINE_RECORD_CAP = 10_000
_XLSX_MEDIA = "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"


class JobKind(Enum):
    SEARCH = "search"
    DOWNLOAD = "download"


class JobState(Enum):
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"
    NEEDS_HUMAN = "needs_human"


_TRANSITIONS = {
    JobState.QUEUED: {JobState.RUNNING},
    JobState.RUNNING: {JobState.DONE, JobState.FAILED, JobState.NEEDS_HUMAN},
    JobState.DONE: set(),
    JobState.FAILED: set(),
    JobState.NEEDS_HUMAN: set(),
}


@dataclass
class Job:
    id: str
    kind: JobKind
    source: SourceId
    params: dict[str, str]
    state: JobState = JobState.QUEUED
    progress: float = 0.0
    result: dict | None = None
    error: str | None = None
    error_code: str | None = None
    created_at: datetime = dc_field(default_factory=lambda: datetime.now(timezone.utc))

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "source": self.source.value,
            "params": self.params,
            "state": self.state.value,
            "progress": self.progress,
            "result": self.result,
            "error": self.error,
            "error_code": self.error_code,
            "created_at": format_rfc3339(self.created_at),
        }


class JobTable:
    def __init__(self):
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def add(self, job: Job) -> None:
        with self._lock:
            self._jobs[job.id] = job

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def all(self) -> list[Job]:
        with self._lock:
            return sorted(self._jobs.values(), key=lambda j: j.created_at)

    def transition(self, job: Job, state: JobState, **updates) -> None:
        with self._lock:
            if state not in _TRANSITIONS[job.state]:
                raise RuntimeError(f"illegal job transition {job.state} -> {state}")
            job.state = state
            for key, value in updates.items():
                setattr(job, key, value)


@dataclass
class ServiceConfig:
    """Everything the service needs to run; immutable apart from data_root."""

    data_root: Path
    replay_root: Path | None = None
    default_driver: str = "live"
    faers_index_url: str = SOURCES[SourceId.FAERS].base_url
    vaers_index_url: str = SOURCES[SourceId.VAERS].base_url
    policy: PolitenessPolicy = dc_field(default_factory=PolitenessPolicy)
    frontend_dir: Path | None = None


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: Any = None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail
        super().__init__(message)


class _State:
    """Mutable service state shared between handlers and the worker."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.layout: Layout = init_layout(config.data_root)
        self.fetcher = PoliteFetcher(config.policy)
        self.jobs = JobTable()
        self.queue: "queue.Queue[Job | None]" = queue.Queue()
        self.worker: threading.Thread | None = None

    # -- drivers ------------------------------------------------------------

    def driver_mode(self, requested: str | None) -> str:
        mode = requested or self.config.default_driver
        if mode not in ("live", "replay"):
            raise ApiError(400, "bad_driver", f"driver must be live or replay, got {mode!r}")
        return mode

    def make_driver(self, source: SourceId, term: str, mode: str):
        if mode == "replay":
            if self.config.replay_root is None:
                raise ApiError(400, "no_replay_root",
                               "service started without a replay session root")
            session = Path(self.config.replay_root) / source.value / slugify(term)
            return ReplayDriver(session)
        return FetchDriver(self.fetcher)

    def read_index(self, source: SourceId, mode: str) -> tuple[str, str]:
        """(document text, base url) for a bulk source's index page."""
        url = (self.config.faers_index_url if source == SourceId.FAERS
               else self.config.vaers_index_url)
        if mode == "replay":
            if self.config.replay_root is None:
                raise ApiError(400, "no_replay_root",
                               "service started without a replay session root")
            path = Path(self.config.replay_root) / source.value / "index.html"
            if not path.is_file():
                raise ApiError(404, "no_fixture_index", f"no recorded index at {path}")
            return path.read_text("utf-8"), url
        result = self.fetcher.fetch(url)
        return result.body.decode("utf-8", "replace"), url

    # -- worker ---------------------------------------------------------------

    def start_worker(self) -> None:
        if self.worker is not None:
            return
        self.worker = threading.Thread(target=self._work, name="job-worker", daemon=True)
        self.worker.start()

    def stop_worker(self) -> None:
        if self.worker is None:
            return
        self.queue.put(None)
        self.worker.join(timeout=30)
        self.worker = None

    def _work(self) -> None:
        while True:
            job = self.queue.get()
            if job is None:
                return
            self.jobs.transition(job, JobState.RUNNING, progress=0.1)
            try:
                if job.kind == JobKind.SEARCH:
                    self._run_search_job(job)
                else:
                    self._run_download_job(job)
            except DrugNotFound as exc:
                self.jobs.transition(job, JobState.FAILED, error=str(exc),
                                     error_code="drug_not_found")
            except DomDrift as exc:
                self.jobs.transition(job, JobState.FAILED, error=str(exc),
                                     error_code="dom_drift")
            except PharmaHarvestError as exc:
                self.jobs.transition(job, JobState.FAILED, error=str(exc),
                                     error_code=type(exc).__name__)
            except Exception as exc:   # keep the worker alive whatever happens
                self.jobs.transition(job, JobState.FAILED, error=str(exc),
                                     error_code="internal")

    def _run_search_job(self, job: Job) -> None:
        source = job.source
        term = job.params["term"]
        driver = self.make_driver(source, term, job.params["driver"])
        query = DrugQuery(term=term, source=source)
        records, blob = run_search(query, driver)
        if blob is not None:
            entry = self.layout.write_blob(
                source, term, blob, SOURCES[source].native_format,
                source_url=SOURCES[source].base_url,
                retrieved_at=driver.retrieved_at,
            )
        else:
            entry = self.layout.write_records(source, term, records)
        inline = [r.to_dict() for r in records[:INLINE_RECORD_CAP]]
        self.jobs.transition(
            job, JobState.DONE, progress=1.0,
            result={"record_count": len(records), "records": inline,
                    "result_ref": entry.to_dict()},
        )

    def _run_download_job(self, job: Job) -> None:
        mode = job.params["driver"]
        if job.source == SourceId.VAERS:
            document, base = self.read_index(SourceId.VAERS, mode)
            refs = vaers_adapter.list_vaers_files(document, base)
            year = int(job.params["year"])
            ref = next((r for r in refs if r.year == year), None)
            if ref is None:
                raise PharmaHarvestError(f"no annual file for {year}")
            instruction = vaers_adapter.vaers_manual_handoff(ref, self.layout)
            self.jobs.transition(
                job, JobState.NEEDS_HUMAN, progress=1.0,
                result={"handoff": instruction.to_dict(), "file": ref.to_dict()},
            )
            return
        document, base = self.read_index(SourceId.FAERS, mode)
        refs = faers_adapter.list_faers_quarters(document, base)
        ref = faers_adapter.find_quarter(refs, job.params["quarter"])
        if ref is None:
            raise PharmaHarvestError(f"no quarter {job.params['quarter']} on the index")
        job.progress = 0.3
        entry = faers_adapter.download_archive(ref, self.layout, self.fetcher)
        self.jobs.transition(
            job, JobState.DONE, progress=1.0,
            result={"result_ref": entry.to_dict(), "quarter": ref.to_dict()},
        )


# -- request bodies -------------------------------------------------------------

class SearchBody(BaseModel):
    source: str
    term: str


class DownloadBody(BaseModel):
    source: str
    quarter: str | None = None
    year: int | None = None


class TabulateBody(BaseModel):
    datasets: list[str] | None = None
    records: list[dict] | None = None
    drugs: list[str] | None = None
    mode: str = "ae_based"
    class_members: list[str] | None = None


class ConfigBody(BaseModel):
    data_root: str


def create_app(config: ServiceConfig) -> FastAPI:
    state = _State(config)

    from contextlib import asynccontextmanager

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        state.start_worker()
        try:
            yield
        finally:
            state.stop_worker()

    app = FastAPI(title="pharmaharvest service", version="0.1.0",
                  openapi_url="/api/spec", lifespan=lifespan)
    app.state.harvest = state

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={
            "code": exc.code, "message": exc.message, "detail": exc.detail,
        })

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={
            "code": "validation_error", "message": "invalid request body",
            "detail": exc.errors(),
        })

    # -- endpoints ---------------------------------------------------------

    @app.get("/api/sources")
    def get_sources():
        return [s.to_dict() for s in list_sources()]

    @app.post("/api/search", status_code=202)
    def post_search(body: SearchBody, driver: str | None = None):
        try:
            source = SourceId.parse(body.source)
        except ValueError as exc:
            raise ApiError(400, "unknown_source", str(exc))
        if SOURCES[source].access_mode != AccessMode.SEARCH_AGGREGATE:
            raise ApiError(400, "bulk_source",
                           f"{source.value} is a bulk download source; "
                           "use /api/download")
        if not body.term.strip():
            raise ApiError(422, "empty_term", "search term must be nonempty")
        job = Job(id=uuid.uuid4().hex, kind=JobKind.SEARCH, source=source,
                  params={"term": body.term.strip(),
                          "driver": state.driver_mode(driver)})
        state.jobs.add(job)
        state.queue.put(job)
        return job.to_dict()

    @app.get("/api/jobs")
    def get_jobs():
        return [j.to_dict() for j in state.jobs.all()]

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise ApiError(404, "unknown_job", f"no job {job_id}")
        return job.to_dict()

    @app.get("/api/faers/quarters")
    def get_quarters(driver: str | None = None):
        mode = state.driver_mode(driver)
        document, base = state.read_index(SourceId.FAERS, mode)
        return [q.to_dict() | {"code": q.code}
                for q in faers_adapter.list_faers_quarters(document, base)]

    @app.get("/api/vaers/files")
    def get_vaers_files(driver: str | None = None):
        mode = state.driver_mode(driver)
        document, base = state.read_index(SourceId.VAERS, mode)
        return [f.to_dict() for f in vaers_adapter.list_vaers_files(document, base)]

    @app.post("/api/download", status_code=202)
    def post_download(body: DownloadBody, driver: str | None = None):
        try:
            source = SourceId.parse(body.source)
        except ValueError as exc:
            raise ApiError(400, "unknown_source", str(exc))
        if SOURCES[source].access_mode == AccessMode.SEARCH_AGGREGATE:
            raise ApiError(400, "not_bulk",
                           f"{source.value} is a search source; use /api/search")
        params = {"driver": state.driver_mode(driver)}
        if source == SourceId.FAERS:
            if not body.quarter:
                raise ApiError(422, "missing_quarter",
                               "FAERS downloads need a quarter like 2025Q1")
            params["quarter"] = body.quarter
        else:
            if not body.year:
                raise ApiError(422, "missing_year",
                               "VAERS downloads need a year")
            params["year"] = str(body.year)
        job = Job(id=uuid.uuid4().hex, kind=JobKind.DOWNLOAD, source=source,
                  params=params)
        state.jobs.add(job)
        state.queue.put(job)
        return job.to_dict()

    @app.get("/api/datasets")
    def get_datasets():
        manifest = state.layout.manifest()
        return [e.to_dict() for e in manifest.entries]

    @app.post("/api/tabulate")
    def post_tabulate(body: TabulateBody, format: str = "json"):
        records = _collect_records(state.layout, body)
        if not records:
            raise ApiError(400, "no_input", "no datasets or records supplied")
        full = tab.assemble_matrix(records)
        matrix = _project_columns(full, body.drugs) if body.drugs else full
        payload = matrix.to_dict()
        class_members = None
        if body.mode == "drug_based":
            if not body.class_members:
                raise ApiError(400, "missing_class",
                               "drug_based mode needs class_members")
            class_members = body.class_members
            try:
                for drug in (body.drugs or body.class_members):
                    if not _in_class(drug, body.class_members):
                        raise ClassMissingTarget(drug)
                payload["other_drugs"] = tab.other_drugs_column(
                    full, body.class_members)
            except ClassMissingTarget as exc:
                raise ApiError(400, "class_missing_target", str(exc))
            except UnknownLabel as exc:
                raise ApiError(404, "unknown_label", str(exc))
        elif body.mode != "ae_based":
            raise ApiError(400, "bad_mode",
                           f"mode must be ae_based or drug_based, got {body.mode!r}")
        if format == "csv":
            from fastapi.responses import Response

            return Response(content=tab.export_class_table(matrix, full,
                                                           class_members),
                            media_type="text/csv")
        return payload

    @app.get("/api/files/{file_path:path}")
    def get_file(file_path: str):
        from fastapi.responses import Response

        entry = next((e for e in state.layout.manifest().entries
                      if e.file_path == file_path), None)
        target = state.layout.root / file_path
        if entry is None or not target.is_file():
            raise ApiError(404, "missing_dataset", f"no dataset file {file_path}")
        media = {"csv": "text/csv", "xlsx": _XLSX_MEDIA, "zip": "application/zip"}
        return Response(content=target.read_bytes(),
                        media_type=media[entry.format.value])

    @app.get("/api/config")
    def get_config():
        return {"data_root": str(state.config.data_root)}

    @app.put("/api/config")
    def put_config(body: ConfigBody):
        try:
            state.layout = init_layout(body.data_root)
        except NotWritable as exc:
            raise ApiError(409, "not_writable", str(exc))
        state.config.data_root = Path(body.data_root)
        return {"data_root": str(state.config.data_root)}

    if config.frontend_dir and Path(config.frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.frontend_dir, html=True),
                  name="ui")

    return app


def _in_class(drug: str, class_members: list[str]) -> bool:
    fold = drug.casefold()
    return any(member.casefold() == fold for member in class_members)


def _collect_records(layout: Layout, body: TabulateBody) -> list[CountRecord]:
    records: list[CountRecord] = []
    for entry_path in body.datasets or []:
        path = layout.root / entry_path
        if not path.is_file():
            raise ApiError(404, "missing_dataset", f"no dataset file {entry_path}")
        if path.suffix == ".zip":
            records.extend(faers_adapter.extract_quarter_records(path))
        else:
            records.extend(records_from_csv(path.read_bytes()))
    for raw in body.records or []:
        try:
            records.append(CountRecord.from_dict(raw))
        except (KeyError, ValueError) as exc:
            raise ApiError(422, "bad_record", f"invalid inline record: {exc}")
    return records


def _project_columns(matrix, drugs: list[str]):
    from .core_types import CountMatrix

    wanted = []
    for drug in drugs:
        wanted.append(matrix.drug_index(_resolve_label(matrix.drug_labels, drug)))
    return CountMatrix(
        ae_labels=matrix.ae_labels,
        drug_labels=tuple(matrix.drug_labels[j] for j in wanted),
        cells=tuple(tuple(row[j] for j in wanted) for row in matrix.cells),
    )


def _resolve_label(labels: tuple[str, ...], name: str) -> str:
    fold = name.casefold()
    for label in labels:
        if label.casefold() == fold:
            return label
    raise ApiError(404, "unknown_label", f"unknown drug {name!r}")


def run(config: ServiceConfig, host: str = "127.0.0.1",
        port: int = DEFAULT_PORT) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port, log_level="info")
