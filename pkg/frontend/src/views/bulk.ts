// Bulk-source pages: FAERS quarter downloads and VAERS human handoff.

import { clear, el } from "../dom.js";
import type { HandoffJson, Job, QuarterJson, VaersFileJson } from "../types.js";

export interface FaersHandlers {
  onDownload: (codes: string[]) => void;
  onRetry: (code: string) => void;
}

export interface FaersPage {
  root: HTMLElement;
  selectedCodes(): string[];
  showJob(job: Job, code: string): void;
}

export function renderFaersPage(
  quarters: QuarterJson[],
  handlers: FaersHandlers,
): FaersPage {
  const list = el("ul", { class: "quarter-list" });
  for (const quarter of quarters) {
    const box = el("input", {
      type: "checkbox",
      class: "quarter-box",
      "data-code": quarter.code,
      id: `q-${quarter.code}`,
    });
    list.append(el("li", {}, [
      box,
      el("label", { for: `q-${quarter.code}`, class: "quarter-label" }, [
        `${quarter.code} — ${quarter.label}`,
      ]),
    ]));
  }
  const download = el("button", { id: "download-selected", type: "button" }, [
    "Download selected",
  ]);
  const jobsArea = el("div", { id: "download-jobs" });
  const dialogHost = el("div", { id: "dialog-host" });

  const root = el("section", { class: "page page-faers" }, [
    el("h1", {}, ["Quarterly data files"]),
    list,
    download,
    jobsArea,
    dialogHost,
  ]);

  function selectedCodes(): string[] {
    return Array.from(
      root.querySelectorAll<HTMLInputElement>("input.quarter-box:checked"),
    ).map((box) => box.dataset["code"] as string);
  }

  download.addEventListener("click", () => handlers.onDownload(selectedCodes()));

  function jobRow(code: string): HTMLElement {
    let row = jobsArea.querySelector<HTMLElement>(`[data-job-code="${code}"]`);
    if (!row) {
      row = el("div", { class: "job-row", "data-job-code": code });
      jobsArea.append(row);
    }
    return row;
  }

  return {
    root,
    selectedCodes,
    showJob(job, code) {
      const row = jobRow(code);
      clear(row);
      row.append(el("span", { class: "job-label" }, [`${code}: ${job.state}`]));
      const progress = el("progress", {
        class: "job-progress",
        max: "1",
        value: String(job.progress),
      });
      row.append(progress);
      if (job.state === "failed") {
        row.append(el("span", { class: "job-error" }, [job.error ?? "failed"]));
        const retry = el("button", { class: "retry", type: "button" }, ["Retry"]);
        retry.addEventListener("click", () => handlers.onRetry(code));
        row.append(retry);
      }
      if (job.state === "done") {
        const label = job.result?.quarter?.label ?? code;
        clear(dialogHost);
        dialogHost.append(el("div", { id: "success-dialog", role: "dialog" }, [
          el("strong", {}, ["Download complete. "]),
          `${label} saved to ${job.result?.result_ref?.file_path ?? "storage"}.`,
        ]));
      }
    },
  };
}

export interface VaersHandlers {
  onRequest: (year: number) => void;
}

export interface VaersPage {
  root: HTMLElement;
  showHandoff(job: Job): void;
}

export function renderVaersPage(
  files: VaersFileJson[],
  handlers: VaersHandlers,
): VaersPage {
  const list = el("ul", { class: "annual-list" });
  for (const file of files) {
    const request = el("button", {
      class: "request-year",
      "data-year": String(file.year),
      type: "button",
    }, ["Get instructions"]);
    request.addEventListener("click", () => handlers.onRequest(file.year));
    list.append(el("li", {}, [
      el("span", { class: "annual-label" }, [file.label]),
      request,
    ]));
  }
  const instructions = el("div", { id: "handoff-area" });
  const root = el("section", { class: "page page-vaers" }, [
    el("h1", {}, ["Annual data files"]),
    el("p", { class: "note" }, [
      "Downloads require completing a verification step in a browser; ",
      "this tool never bypasses it.",
    ]),
    list,
    instructions,
  ]);

  return {
    root,
    showHandoff(job) {
      clear(instructions);
      const handoff = job.result?.handoff as HandoffJson | undefined;
      if (!handoff) {
        instructions.append(el("div", { class: "error-card" }, [
          job.error ?? "no instructions returned",
        ]));
        return;
      }
      instructions.append(el("div", { id: "handoff-instructions" }, [
        el("h2", {}, ["Finish this download by hand"]),
        el("ol", {}, [
          el("li", {}, [
            "Open ",
            el("a", { href: handoff.url, target: "_blank", rel: "noopener" }, [
              handoff.url,
            ]),
          ]),
          el("li", {}, ["Complete the verification step on the page"]),
          el("li", {}, [`Save the file (${handoff.expected_filename})`]),
          el("li", {}, [el("code", {}, [handoff.notes])]),
        ]),
      ]));
    },
  };
}
