"""Command-line front door: retrieval, tabulation, benchmarking, service launch.

Exit codes are a compatibility contract:

    0  success
    2  usage error (bad flags, unknown source, class missing its target)
    3  searched term not found at the source
    4  page structure changed (selector missing)
    5  network failure or robots-disallowed target
    6  imported file is not a zip archive
    7  service port already in use

Retrieval commands default to the live driver; ``bench`` defaults to replay
so its numbers are reproducible. A ``pharmaharvest.toml`` in the working
directory may set ``data_root``, ``replay_root``, and ``[politeness]``
overrides; flags always win.
"""

from __future__ import annotations

import functools
import json
import socket
import sys
from pathlib import Path

import click

try:
    import tomllib
except ModuleNotFoundError:               # Python 3.10
    import tomli as tomllib

from . import bench as bench_mod
from . import tabulate as tab
from .adapters import SOURCES, list_sources, run_search
from .adapters import faers as faers_adapter
from .adapters import vaers as vaers_adapter
from .core_types import (
    AccessMode,
    CountRecord,
    DrugQuery,
    SourceId,
    records_from_csv,
)
from .drivers import FetchDriver, ReplayDriver
from .errors import (
    ClassMissingTarget,
    DomDrift,
    DrugNotFound,
    FetchError,
    NotAZip,
    UnknownLabel,
)
from .fetch import PolitenessPolicy, PoliteFetcher
from .store import init_layout, slugify

CONFIG_FILE = "pharmaharvest.toml"

EXIT_USAGE = 2
EXIT_NOT_FOUND = 3
EXIT_DOM_DRIFT = 4
EXIT_NETWORK = 5
EXIT_NOT_A_ZIP = 6
EXIT_PORT_BUSY = 7


def load_config() -> dict:
    path = Path.cwd() / CONFIG_FILE
    if not path.is_file():
        return {}
    with path.open("rb") as fh:
        return tomllib.load(fh)


def build_policy(config: dict) -> PolitenessPolicy:
    overrides = config.get("politeness", {})
    kwargs = {k: overrides[k] for k in
              ("min_interhost_delay", "per_step_settle_delay", "max_retries",
               "request_timeout", "user_agent") if k in overrides}
    return PolitenessPolicy(**kwargs)


def translate_errors(fn):
    """Map library errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        from .bench import PartialRun

        try:
            return fn(*args, **kwargs)
        except PartialRun as exc:
            cause = exc.__cause__
            code = (EXIT_NOT_FOUND if isinstance(cause, DrugNotFound)
                    else EXIT_DOM_DRIFT if isinstance(cause, DomDrift)
                    else EXIT_NETWORK)
            raise SystemExit(_fail(code, f"{exc} ({cause})"))
        except DrugNotFound as exc:
            raise SystemExit(_fail(EXIT_NOT_FOUND, str(exc)))
        except DomDrift as exc:
            raise SystemExit(_fail(EXIT_DOM_DRIFT, str(exc)))
        except FetchError as exc:
            raise SystemExit(_fail(EXIT_NETWORK, str(exc)))
        except NotAZip as exc:
            raise SystemExit(_fail(EXIT_NOT_A_ZIP, str(exc)))
        except (ClassMissingTarget, UnknownLabel, ValueError) as exc:
            raise SystemExit(_fail(EXIT_USAGE, str(exc)))

    return wrapper


def _fail(code: int, message: str) -> int:
    click.echo(f"error: {message}", err=True)
    return code


def _resolve_source(name: str) -> SourceId:
    try:
        return SourceId.parse(name)
    except ValueError as exc:
        raise SystemExit(_fail(EXIT_USAGE, str(exc)))


def _make_driver(driver: str, session: str | None, source: SourceId,
                 term: str, config: dict, policy: PolitenessPolicy):
    if driver == "replay":
        session_dir = session
        if session_dir is None:
            root = config.get("replay_root")
            if root is None:
                raise SystemExit(_fail(
                    EXIT_USAGE,
                    "--driver replay needs --session DIR (or replay_root in "
                    f"{CONFIG_FILE})"))
            session_dir = str(Path(root) / source.value / slugify(term))
        return ReplayDriver(session_dir)
    return FetchDriver(PoliteFetcher(policy))


@click.group()
def main() -> None:
    """Retrieve adverse-event counts from public safety databases."""


# -- sources --------------------------------------------------------------------

@main.command()
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
def sources(as_json: bool) -> None:
    """List the supported databases and how each is accessed."""
    descriptors = list_sources()
    if as_json:
        click.echo(json.dumps([d.to_dict() for d in descriptors], indent=2))
        return
    widths = (12, 26, 8, 8)
    header = ("id", "access", "level", "format")
    click.echo("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
    for d in descriptors:
        row = (d.id.value, d.access_mode.value, d.access_level.value,
               d.native_format.value)
        click.echo("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())


# -- search ---------------------------------------------------------------------

@main.command()
@click.option("--source", "source_name", required=True)
@click.option("--term", required=True)
@click.option("--driver", type=click.Choice(["live", "replay"]), default="live")
@click.option("--session", type=click.Path(exists=True, file_okay=False),
              help="Recorded session directory (replay driver).")
@click.option("--out", "out_root", type=click.Path(file_okay=False),
              default=None, help="Storage root (default ./data).")
@click.option("--json", "as_json", is_flag=True)
@translate_errors
def search(source_name: str, term: str, driver: str, session: str | None,
           out_root: str | None, as_json: bool) -> None:
    """Search one database and store the counts as canonical CSV."""
    if not term.strip():
        raise SystemExit(_fail(EXIT_USAGE, "search term must be nonempty"))
    source = _resolve_source(source_name)
    if SOURCES[source].access_mode != AccessMode.SEARCH_AGGREGATE:
        raise SystemExit(_fail(
            EXIT_USAGE, f"{source.value} is a bulk source; use 'faers get' "
            "or 'vaers handoff'"))
    config = load_config()
    policy = build_policy(config)
    drv = _make_driver(driver, session, source, term, config, policy)

    records, blob = run_search(DrugQuery(term=term, source=source), drv)
    layout = init_layout(out_root or config.get("data_root", "data"))
    if blob is not None:
        entry = layout.write_blob(source, term, blob,
                                  SOURCES[source].native_format,
                                  source_url=SOURCES[source].base_url,
                                  retrieved_at=drv.retrieved_at)
    else:
        entry = layout.write_records(source, term, records)
    if as_json:
        click.echo(json.dumps({
            "records": [r.to_dict() for r in records],
            "stored": entry.to_dict(),
        }, indent=2))
    else:
        click.echo(f"{len(records)} rows from {source.value} for {term!r}")
        click.echo(f"stored: {layout.root / entry.file_path}")


# -- faers ------------------------------------------------------------------------

@main.group()
def faers() -> None:
    """Quarterly bulk extracts."""


def _faers_index(index_file: str | None, index_url: str | None,
                 policy: PolitenessPolicy) -> tuple[str, str]:
    url = index_url or SOURCES[SourceId.FAERS].base_url
    if index_file:
        return Path(index_file).read_text("utf-8"), url
    fetcher = PoliteFetcher(policy)
    return fetcher.fetch(url).body.decode("utf-8", "replace"), url


@faers.command("list")
@click.option("--index-file", type=click.Path(exists=True, dir_okay=False),
              help="Parse a saved index page instead of fetching.")
@click.option("--index-url", default=None)
@click.option("--json", "as_json", is_flag=True)
@translate_errors
def faers_list(index_file: str | None, index_url: str | None, as_json: bool) -> None:
    """List available quarters, newest first."""
    document, base = _faers_index(index_file, index_url, build_policy(load_config()))
    quarters = faers_adapter.list_faers_quarters(document, base)
    if as_json:
        click.echo(json.dumps([q.to_dict() | {"code": q.code} for q in quarters],
                              indent=2))
        return
    for q in quarters:
        click.echo(f"{q.code}  {q.label}")


@faers.command("get")
@click.option("--quarter", required=True, help="Quarter code like 2025Q1.")
@click.option("--out", "out_root", type=click.Path(file_okay=False), default=None)
@click.option("--index-file", type=click.Path(exists=True, dir_okay=False))
@click.option("--index-url", default=None)
@click.option("--json", "as_json", is_flag=True)
@translate_errors
def faers_get(quarter: str, out_root: str | None, index_file: str | None,
              index_url: str | None, as_json: bool) -> None:
    """Download one quarterly archive into the storage root."""
    config = load_config()
    policy = build_policy(config)
    document, base = _faers_index(index_file, index_url, policy)
    refs = faers_adapter.list_faers_quarters(document, base)
    ref = faers_adapter.find_quarter(refs, quarter)
    if ref is None:
        raise SystemExit(_fail(EXIT_USAGE, f"no quarter {quarter!r} on the index"))
    layout = init_layout(out_root or config.get("data_root", "data"))
    entry = faers_adapter.download_archive(ref, layout, PoliteFetcher(policy))
    if as_json:
        click.echo(json.dumps(entry.to_dict(), indent=2))
    else:
        click.echo(f"stored: {layout.root / entry.file_path} "
                   f"({entry.byte_size} bytes, sha256 {entry.checksum[:12]}..)")


@faers.command("extract")
@click.option("--archive", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="A downloaded quarterly zip.")
@click.option("--out-csv", required=True, type=click.Path(dir_okay=False))
@translate_errors
def faers_extract(archive: str, out_csv: str) -> None:
    """Join a quarter's DRUG/REAC files into canonical per-pair counts."""
    from .core_types import records_to_csv

    records = faers_adapter.extract_quarter_records(archive)
    Path(out_csv).write_bytes(records_to_csv(records))
    click.echo(f"{len(records)} (drug, reaction) pairs -> {out_csv}")


# -- vaers -----------------------------------------------------------------------

@main.group()
def vaers() -> None:
    """Annual files; downloads need a human to pass the verification step."""


def _vaers_index(index_file: str | None, index_url: str | None,
                 policy: PolitenessPolicy) -> tuple[str, str]:
    url = index_url or SOURCES[SourceId.VAERS].base_url
    if index_file:
        return Path(index_file).read_text("utf-8"), url
    fetcher = PoliteFetcher(policy)
    return fetcher.fetch(url).body.decode("utf-8", "replace"), url


@vaers.command("list")
@click.option("--index-file", type=click.Path(exists=True, dir_okay=False))
@click.option("--index-url", default=None)
@click.option("--json", "as_json", is_flag=True)
@translate_errors
def vaers_list(index_file: str | None, index_url: str | None, as_json: bool) -> None:
    """List annual data files, newest first."""
    document, base = _vaers_index(index_file, index_url, build_policy(load_config()))
    files = vaers_adapter.list_vaers_files(document, base)
    if as_json:
        click.echo(json.dumps([f.to_dict() for f in files], indent=2))
        return
    for f in files:
        click.echo(f"{f.year}  {f.label}")


@vaers.command("handoff")
@click.option("--year", required=True, type=int)
@click.option("--out", "out_root", type=click.Path(file_okay=False), default=None)
@click.option("--index-file", type=click.Path(exists=True, dir_okay=False))
@click.option("--index-url", default=None)
@click.option("--json", "as_json", is_flag=True)
@translate_errors
def vaers_handoff(year: int, out_root: str | None, index_file: str | None,
                  index_url: str | None, as_json: bool) -> None:
    """Print the steps a person must follow to fetch one annual file."""
    config = load_config()
    document, base = _vaers_index(index_file, index_url, build_policy(config))
    files = vaers_adapter.list_vaers_files(document, base)
    ref = next((f for f in files if f.year == year), None)
    if ref is None:
        raise SystemExit(_fail(EXIT_USAGE, f"no annual file for {year}"))
    layout = init_layout(out_root or config.get("data_root", "data"))
    instruction = vaers_adapter.vaers_manual_handoff(ref, layout)
    if as_json:
        click.echo(json.dumps(instruction.to_dict(), indent=2))
        return
    click.echo(f"1. Open {instruction.url} in a browser")
    click.echo("2. Complete the verification step on the page")
    click.echo(f"3. Save the file ({instruction.expected_filename})")
    click.echo(f"4. Import it: pharmaharvest vaers import --year {year} FILE")


@vaers.command("import")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--year", required=True, type=int)
@click.option("--out", "out_root", type=click.Path(file_okay=False), default=None)
@click.option("--index-file", type=click.Path(exists=True, dir_okay=False))
@click.option("--index-url", default=None)
@click.option("--json", "as_json", is_flag=True)
@translate_errors
def vaers_import(file: str, year: int, out_root: str | None,
                 index_file: str | None, index_url: str | None,
                 as_json: bool) -> None:
    """Validate and manifest a file downloaded by hand."""
    config = load_config()
    document, base = _vaers_index(index_file, index_url, build_policy(config))
    files = vaers_adapter.list_vaers_files(document, base)
    ref = next((f for f in files if f.year == year), None)
    if ref is None:
        raise SystemExit(_fail(EXIT_USAGE, f"no annual file for {year}"))
    layout = init_layout(out_root or config.get("data_root", "data"))
    entry = vaers_adapter.import_external_file(layout, ref, file)
    if as_json:
        click.echo(json.dumps(entry.to_dict(), indent=2))
    else:
        click.echo(f"imported: {layout.root / entry.file_path}")


# -- tabulate --------------------------------------------------------------------

def _split_list(text: str | None) -> list[str]:
    if not text:
        return []
    return [part.strip() for part in text.split(",") if part.strip()]


@main.command("tabulate")
@click.option("--inputs", "inputs", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Canonical CSV files or quarterly zip archives.")
@click.option("--drugs", "drugs_arg", default=None,
              help="Comma-separated drug columns to keep.")
@click.option("--mode", type=click.Choice(["ae", "drug-based"]), default="ae")
@click.option("--class", "class_arg", default=None,
              help="Comma-separated drug class (drug-based mode).")
@click.option("--out", "out_file", type=click.Path(dir_okay=False), default=None)
@click.option("--json", "as_json", is_flag=True)
@translate_errors
def tabulate_cmd(inputs: tuple[str, ...], drugs_arg: str | None, mode: str,
                 class_arg: str | None, out_file: str | None,
                 as_json: bool) -> None:
    """Build a reaction-by-drug count table from stored datasets."""
    records: list[CountRecord] = []
    for path in inputs:
        p = Path(path)
        if p.suffix == ".zip":
            records.extend(faers_adapter.extract_quarter_records(p))
        else:
            records.extend(records_from_csv(p.read_bytes()))

    full = tab.assemble_matrix(records)
    drugs = _split_list(drugs_arg)
    class_members = _split_list(class_arg)
    if mode == "drug-based":
        if not class_members:
            raise SystemExit(_fail(EXIT_USAGE, "--mode drug-based needs --class"))
        if not drugs:
            drugs = class_members
        fold = {m.casefold() for m in class_members}
        for drug in drugs:
            if drug.casefold() not in fold:
                raise ClassMissingTarget(drug)

    matrix = _project(full, drugs) if drugs else full
    other = class_members if mode == "drug-based" else None
    if as_json:
        payload = matrix.to_dict()
        if other is not None:
            payload["other_drugs"] = tab.other_drugs_column(full, other)
        click.echo(json.dumps(payload, indent=2))
    csv_bytes = tab.export_class_table(matrix, full, other)
    if out_file:
        Path(out_file).write_bytes(csv_bytes)
        click.echo(f"{matrix.shape[0]}x{matrix.shape[1]} table -> {out_file}",
                   err=True)
    elif not as_json:
        click.echo(csv_bytes.decode("utf-8"), nl=False)


def _project(matrix, drugs: list[str]):
    from .core_types import CountMatrix

    indexes = []
    for drug in drugs:
        fold = drug.casefold()
        j = next((k for k, label in enumerate(matrix.drug_labels)
                  if label.casefold() == fold), None)
        if j is None:
            raise UnknownLabel(drug)
        indexes.append(j)
    return CountMatrix(
        ae_labels=matrix.ae_labels,
        drug_labels=tuple(matrix.drug_labels[j] for j in indexes),
        cells=tuple(tuple(row[j] for j in indexes) for row in matrix.cells),
    )


# -- bench -----------------------------------------------------------------------

@main.command("bench")
@click.option("--source", "source_name", required=True)
@click.option("--term", required=True)
@click.option("--reps", default=10, show_default=True)
@click.option("--live", is_flag=True,
              help="Time live retrievals instead of replaying a session.")
@click.option("--session", type=click.Path(exists=True, file_okay=False))
@click.option("--json", "as_json", is_flag=True)
@translate_errors
def bench_cmd(source_name: str, term: str, reps: int, live: bool,
              session: str | None, as_json: bool) -> None:
    """Time repeated retrievals and print summary statistics."""
    source = _resolve_source(source_name)
    config = load_config()
    policy = build_policy(config)
    if live:
        click.echo("note: live timings depend on network and page conditions; "
                   "they are reported, not comparable across runs", err=True)
        factory = lambda: FetchDriver(PoliteFetcher(policy))  # noqa: E731
    else:
        session_dir = session
        if session_dir is None:
            root = config.get("replay_root", "fixtures/sessions")
            session_dir = str(Path(root) / source.value / slugify(term))
        factory = lambda: ReplayDriver(session_dir)  # noqa: E731
    summary = bench_mod.time_retrieval(source, term, reps, factory)
    if as_json:
        click.echo(json.dumps(summary.to_dict(), indent=2))
    else:
        click.echo(bench_mod.format_text([summary]), nl=False)


# -- serve -----------------------------------------------------------------------

@main.command("serve")
@click.option("--port", default=8799, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-root", type=click.Path(file_okay=False), default=None)
@click.option("--replay-root", type=click.Path(file_okay=False), default=None)
@click.option("--driver", type=click.Choice(["live", "replay"]), default="live",
              show_default=True, help="Default driver for jobs.")
@click.option("--frontend", type=click.Path(file_okay=False), default=None,
              help="Directory of built UI assets to serve at /.")
@translate_errors
def serve(port: int, host: str, data_root: str | None, replay_root: str | None,
          driver: str, frontend: str | None) -> None:
    """Run the local HTTP API (loopback only unless --host overrides)."""
    from .service import ServiceConfig, run

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError:
        raise SystemExit(_fail(EXIT_PORT_BUSY, f"port {port} is already in use"))
    finally:
        probe.close()

    config = load_config()
    service_config = ServiceConfig(
        data_root=Path(data_root or config.get("data_root", "data")),
        replay_root=Path(replay_root) if replay_root
        else (Path(config["replay_root"]) if "replay_root" in config else None),
        default_driver=driver,
        policy=build_policy(config),
        frontend_dir=Path(frontend) if frontend else None,
    )
    run(service_config, host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
