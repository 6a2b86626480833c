// End-to-end UI flows against the captured replay-backed service payloads
// (the release criteria for this interface).

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/main.js";
import type { Job } from "../src/types.js";
import { loadFixture, mockFetch, seq } from "./helpers.js";

const sources = loadFixture("sources");
const config = loadFixture("config");
const quarters = loadFixture("quarters");
const searchQueued = loadFixture<Job>("search_job_queued");
const searchDone = loadFixture<Job>("search_job_done");
const downloadQueued = loadFixture<Job>("download_job_queued");
const downloadDone = loadFixture<Job>("download_job_done");

function mount(): HTMLElement {
  document.body.innerHTML = '<div id="app"></div>';
  return document.getElementById("app") as HTMLElement;
}

beforeEach(() => vi.useFakeTimers());
afterEach(() => {
  vi.useRealTimers();
  vi.unstubAllGlobals();
});

describe("app flows", () => {
  it("home page renders seven database tiles", async () => {
    mockFetch({
      "GET /api/sources": sources,
      "GET /api/config": config,
    });
    const app = new App(mount(), new ApiClient());
    await app.showRoute({ page: "HOME" });
    expect(document.querySelectorAll(".source-tile")).toHaveLength(7);
    expect(document.querySelector(".offline-banner")).toBeNull();
  });

  it("home page shows an offline banner when the service is down", async () => {
    vi.stubGlobal("fetch", async () => {
      throw new TypeError("connection refused");
    });
    const app = new App(mount(), new ApiClient());
    await app.showRoute({ page: "HOME" });
    expect(document.querySelector(".offline-banner")).not.toBeNull();
  });

  it("faers page lists the fixture quarter, downloads it, and celebrates",
     async () => {
    mockFetch({
      "GET /api/sources": sources,
      "GET /api/faers/quarters": quarters,
      "POST /api/download": downloadQueued,
      [`GET /api/jobs/${downloadQueued.id}`]: seq(
        { ...downloadQueued, state: "running", progress: 0.3 },
        downloadDone,
      ),
    });
    const app = new App(mount(), new ApiClient());
    await app.showRoute({ page: "SOURCE_PAGE", source: "faers" });
    expect(document.body.textContent).toContain("January - March 2025");

    document.querySelector<HTMLInputElement>('[data-code="2025Q1"]')!.click();
    document.querySelector<HTMLButtonElement>("#download-selected")!.click();
    await vi.advanceTimersByTimeAsync(0);      // enqueue + first poll (running)
    expect(document.querySelector("#success-dialog")).toBeNull();
    expect(document.querySelector(".job-row")!.textContent).toContain("running");
    await vi.advanceTimersByTimeAsync(1000);   // second poll (done)
    const dialog = document.querySelector("#success-dialog");
    expect(dialog).not.toBeNull();
    expect(dialog!.textContent).toContain("January - March 2025");
  });

  it("search page runs the replay search and shows Dizziness = 32", async () => {
    mockFetch({
      "GET /api/sources": sources,
      "GET /api/config": config,
      "POST /api/search": searchQueued,
      [`GET /api/jobs/${searchQueued.id}`]: seq(searchQueued, searchDone),
    });
    const app = new App(mount(), new ApiClient());
    await app.showRoute({ page: "SOURCE_PAGE", source: "dma" });

    const input = document.querySelector<HTMLInputElement>("#term")!;
    input.value = "Alfuzosin";
    document.querySelector("form")!.dispatchEvent(
      new Event("submit", { cancelable: true }));
    await vi.advanceTimersByTimeAsync(0);
    await vi.advanceTimersByTimeAsync(1000);

    const row = document.querySelector('[data-reaction="Dizziness"]');
    expect(row).not.toBeNull();
    expect(row!.textContent).toContain("32");
    expect(document.querySelectorAll("tr.record-row")).toHaveLength(4);
  });

  it("vaers request surfaces the human handoff instructions", async () => {
    const vaersFiles = loadFixture("vaers_files");
    const vaersJob = loadFixture<Job>("vaers_job_needs_human");
    mockFetch({
      "GET /api/sources": sources,
      "GET /api/vaers/files": vaersFiles,
      "POST /api/download": { ...vaersJob, state: "queued", result: null },
      [`GET /api/jobs/${vaersJob.id}`]: vaersJob,
    });
    const app = new App(mount(), new ApiClient());
    await app.showRoute({ page: "SOURCE_PAGE", source: "vaers" });
    document.querySelector<HTMLButtonElement>('[data-year="2024"]')!.click();
    await vi.advanceTimersByTimeAsync(0);
    const instructions = document.querySelector("#handoff-instructions");
    expect(instructions).not.toBeNull();
    expect(instructions!.textContent).toContain("2024VAERSData.zip");
  });

  it("tabulate page renders the alpha-blocker grid from the service", async () => {
    const datasets = loadFixture("datasets");
    const matrix = loadFixture("tabulate_alpha_blockers");
    mockFetch({
      "GET /api/datasets": datasets,
      "POST /api/tabulate": matrix,
    });
    const app = new App(mount(), new ApiClient());
    await app.showRoute({ page: "TABULATE" });
    document.querySelector<HTMLButtonElement>("#tabulate-submit")!.click();
    await vi.advanceTimersByTimeAsync(0);
    const grid = document.querySelector("#matrix")!;
    expect(grid.querySelector('[data-ae="Dizziness"]')!.textContent)
      .toContain("32");
  });
  it("jobs and datasets pages render from service listings", async () => {
    const jobs = [loadFixture<Job>("search_job_done"),
                  loadFixture<Job>("vaers_job_needs_human")];
    mockFetch({
      "GET /api/jobs": jobs,
      "GET /api/datasets": loadFixture("datasets"),
    });
    const app = new App(mount(), new ApiClient());
    await app.showRoute({ page: "JOBS" });
    expect(document.querySelectorAll("#jobs-table tbody tr")).toHaveLength(2);
    expect(document.body.textContent).toContain("needs_human");

    await app.showRoute({ page: "DATASETS" });
    const links = document.querySelectorAll(".dataset-list a");
    expect(links.length).toBeGreaterThan(0);
    expect(links[0]!.getAttribute("href")).toContain("/api/files/");
  });
});
