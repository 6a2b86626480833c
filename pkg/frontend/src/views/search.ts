// Per-database search page: term input, job progress, grouped results table.

import { clear, el } from "../dom.js";
import type { CountRecordJson, Job, SourceDescriptor } from "../types.js";

export interface SearchHandlers {
  onSearch: (term: string) => void;
  fileUrl: (filePath: string) => string;
}

export interface SearchPage {
  root: HTMLElement;
  showValidation(message: string): void;
  showRunning(job: Job): void;
  showJob(job: Job): void;
}

export function renderSearchPage(
  source: SourceDescriptor,
  handlers: SearchHandlers,
): SearchPage {
  const input = el("input", {
    id: "term",
    type: "text",
    placeholder: "Drug or vaccine name",
  });
  const submit = el("button", { id: "search-submit", type: "submit" }, ["Search"]);
  const validation = el("span", { id: "term-validation", class: "validation" });
  const form = el("form", { id: "search-form" }, [input, submit, validation]);
  const status = el("div", { id: "search-status" });
  const results = el("div", { id: "search-results" });

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const term = input.value.trim();
    if (!term) {
      validation.textContent = "Enter a drug or vaccine name first.";
      return;
    }
    validation.textContent = "";
    handlers.onSearch(term);
  });

  const root = el("section", { class: "page page-search" }, [
    el("h1", {}, [source.display_name]),
    form,
    status,
    results,
  ]);

  return {
    root,
    showValidation(message) {
      validation.textContent = message;
    },
    showRunning(job) {
      clear(results);
      status.textContent = `Job ${job.id.slice(0, 8)}… ${job.state}`;
    },
    showJob(job) {
      clear(results);
      if (job.state === "failed" && job.error_code === "drug_not_found") {
        status.textContent = "";
        results.append(el("div", { class: "empty-state" }, [
          "No reports found for that name.",
        ]));
        return;
      }
      if (job.state === "failed") {
        status.textContent = "";
        results.append(el("div", { class: "error-card", role: "alert" }, [
          el("strong", {}, ["Retrieval failed: "]),
          job.error ?? "unknown error",
        ]));
        return;
      }
      const records = job.result?.records ?? [];
      status.textContent = `${job.result?.record_count ?? records.length} rows`;
      results.append(recordsTable(records));
      const ref = job.result?.result_ref;
      if (ref) {
        results.append(el("a", {
          id: "download-csv",
          href: handlers.fileUrl(ref.file_path),
          download: "",
        }, [`Download ${ref.file_path}`]));
      }
    },
  };
}

function recordsTable(records: CountRecordJson[]): HTMLElement {
  const table = el("table", { id: "records-table" });
  table.append(el("thead", {}, [
    el("tr", {}, [
      el("th", {}, ["Reaction"]),
      el("th", {}, ["Reports"]),
    ]),
  ]));
  const body = el("tbody");
  let lastSoc: string | null | undefined;
  for (const record of records) {
    if (record.soc && record.soc !== lastSoc) {
      body.append(el("tr", { class: "soc-header" }, [
        el("td", { colspan: "2" }, [record.soc]),
      ]));
    }
    lastSoc = record.soc;
    body.append(el("tr", { class: "record-row", "data-reaction": record.reaction }, [
      el("td", {}, [record.reaction]),
      el("td", { class: "count" }, [String(record.count)]),
    ]));
  }
  table.append(body);
  return table;
}
