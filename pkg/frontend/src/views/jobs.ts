// Jobs page: the service's job table, newest last.

import { el } from "../dom.js";
import type { Job } from "../types.js";

export function renderJobsPage(jobs: Job[]): HTMLElement {
  const table = el("table", { id: "jobs-table" });
  table.append(el("thead", {}, [
    el("tr", {}, [
      el("th", {}, ["Job"]),
      el("th", {}, ["Kind"]),
      el("th", {}, ["Source"]),
      el("th", {}, ["State"]),
    ]),
  ]));
  const body = el("tbody");
  for (const job of jobs) {
    body.append(el("tr", { class: `job-state-${job.state}`, "data-job": job.id }, [
      el("td", {}, [job.id.slice(0, 8)]),
      el("td", {}, [job.kind]),
      el("td", {}, [job.source]),
      el("td", {}, [job.state + (job.error ? `: ${job.error}` : "")]),
    ]));
  }
  table.append(body);
  return el("section", { class: "page page-jobs" }, [
    el("h1", {}, ["Jobs"]),
    jobs.length ? table : el("p", { class: "empty-state" }, ["No jobs yet."]),
  ]);
}

export function renderDatasetsPage(
  entries: { file_path: string; byte_size: number; query_or_quarter: string }[],
  fileUrl: (path: string) => string,
): HTMLElement {
  const list = el("ul", { class: "dataset-list" });
  for (const entry of entries) {
    list.append(el("li", {}, [
      el("a", { href: fileUrl(entry.file_path), download: "" }, [entry.file_path]),
      ` — ${entry.query_or_quarter} (${entry.byte_size} bytes)`,
    ]));
  }
  return el("section", { class: "page page-datasets" }, [
    el("h1", {}, ["Stored datasets"]),
    entries.length ? list : el("p", { class: "empty-state" }, ["Nothing stored yet."]),
  ]);
}
