// App shell: hash routing, API wiring, job polling. No numbers are computed
// here; every figure shown comes from the service.

import { ApiClient, ApiError } from "./api.js";
import { clear, el } from "./dom.js";
import { pollJob } from "./poll.js";
import { hashForRoute, initialState, navigate, routeFromHash, type Route, type ViewState } from "./state.js";
import type { Job, SourceDescriptor } from "./types.js";
import { renderFaersPage, renderVaersPage } from "./views/bulk.js";
import { renderHome, renderOfflineBanner } from "./views/home.js";
import { renderDatasetsPage, renderJobsPage } from "./views/jobs.js";
import { renderSearchPage } from "./views/search.js";
import { renderTabulatePage } from "./views/tabulate.js";

export interface AppOptions {
  pollIntervalMs?: number;
}

export class App {
  state: ViewState = initialState();
  private sources: SourceDescriptor[] = [];

  constructor(
    private mount: HTMLElement,
    private api: ApiClient = new ApiClient(),
    private options: AppOptions = {},
  ) {}

  async start(): Promise<void> {
    window.addEventListener("hashchange", () => {
      void this.showRoute(routeFromHash(window.location.hash));
    });
    await this.showRoute(routeFromHash(window.location.hash));
  }

  private go(route: Route): void {
    window.location.hash = hashForRoute(route);
    void this.showRoute(route);
  }

  async showRoute(route: Route): Promise<void> {
    clear(this.mount);
    this.mount.append(this.navBar());
    try {
      switch (route.page) {
        case "HOME":
          await this.showHome();
          break;
        case "SOURCE_PAGE":
          await this.showSource(route.source as string);
          break;
        case "JOBS":
          this.state = navigate(this.state, "JOBS");
          this.mount.append(renderJobsPage(await this.api.listJobs()));
          break;
        case "DATASETS":
          this.state = navigate(this.state, "DATASETS");
          this.mount.append(renderDatasetsPage(
            await this.api.listDatasets(),
            (path) => this.api.fileUrl(path),
          ));
          break;
        case "TABULATE":
          await this.showTabulate();
          break;
      }
    } catch (err) {
      this.mount.append(renderOfflineBanner(
        err instanceof ApiError ? err.message : String(err),
      ));
    }
  }

  private navBar(): HTMLElement {
    const nav = el("nav", { class: "topnav" });
    const links: [string, string][] = [
      ["#/", "Databases"],
      ["#/jobs", "Jobs"],
      ["#/datasets", "Datasets"],
      ["#/tabulate", "Tabulate"],
    ];
    for (const [href, label] of links) {
      nav.append(el("a", { href, class: "nav-link" }, [label]));
    }
    return nav;
  }

  private async getSources(): Promise<SourceDescriptor[]> {
    if (!this.sources.length) {
      this.sources = await this.api.getSources();
    }
    return this.sources;
  }

  private async showHome(): Promise<void> {
    this.state = navigate(this.state, "HOME");
    const sources = await this.getSources();
    const config = await this.api.getConfig();
    this.state = { ...this.state, dataRoot: config.data_root };
    const page = renderHome(sources, config.data_root, {
      onOpenSource: (id) => this.go({ page: "SOURCE_PAGE", source: id }),
      onSaveRoot: (root) => {
        void this.api
          .putConfig(root)
          .then((saved) => {
            this.state = { ...this.state, dataRoot: saved.data_root };
            const input = this.mount.querySelector<HTMLInputElement>("#data-root");
            if (input) input.value = saved.data_root;
          })
          .catch((err: ApiError) => {
            this.mount.append(renderOfflineBanner(err.message));
          });
      },
    });
    this.mount.append(page);
  }

  private async showSource(id: string): Promise<void> {
    this.state = navigate(this.state, "SOURCE_PAGE", id);
    if (id === "faers") {
      await this.showFaers();
      return;
    }
    if (id === "vaers") {
      await this.showVaers();
      return;
    }
    const sources = await this.getSources();
    const source = sources.find((s) => s.id === id);
    if (!source) {
      throw new ApiError(404, "unknown_source", `no source ${id}`);
    }
    const page = renderSearchPage(source, {
      fileUrl: (path) => this.api.fileUrl(path),
      onSearch: (term) => {
        void (async () => {
          try {
            const queued = await this.api.search(source.id, term);
            page.showRunning(queued);
            const finished = await this.trackJob(queued, (update) =>
              page.showRunning(update),
            );
            page.showJob(finished);
          } catch (err) {
            page.showJob({
              id: "local", kind: "search", source: source.id, params: {},
              state: "failed", progress: 0, result: null,
              error: err instanceof ApiError ? err.message : String(err),
              error_code: err instanceof ApiError ? err.code : "internal",
              created_at: "",
            });
          }
        })();
      },
    });
    this.mount.append(page.root);
  }

  private async showFaers(): Promise<void> {
    const quarters = await this.api.getQuarters();
    const page = renderFaersPage(quarters, {
      onDownload: (codes) => {
        for (const code of codes) {
          void this.downloadQuarter(code, page);
        }
      },
      onRetry: (code) => {
        void this.downloadQuarter(code, page);
      },
    });
    this.mount.append(page.root);
  }

  private async downloadQuarter(
    code: string,
    page: { showJob(job: Job, code: string): void },
  ): Promise<void> {
    try {
      const queued = await this.api.downloadQuarter(code);
      page.showJob(queued, code);
      const finished = await this.trackJob(queued, (update) =>
        page.showJob(update, code),
      );
      page.showJob(finished, code);
    } catch (err) {
      page.showJob({
        id: "local", kind: "download", source: "faers", params: {},
        state: "failed", progress: 0, result: null,
        error: err instanceof ApiError ? err.message : String(err),
        error_code: err instanceof ApiError ? err.code : "internal",
        created_at: "",
      }, code);
    }
  }

  private async showVaers(): Promise<void> {
    const files = await this.api.getVaersFiles();
    const page = renderVaersPage(files, {
      onRequest: (year) => {
        void (async () => {
          const queued = await this.api.requestVaersYear(year);
          const finished = await this.trackJob(queued);
          page.showHandoff(finished);
        })();
      },
    });
    this.mount.append(page.root);
  }

  private async showTabulate(): Promise<void> {
    this.state = navigate(this.state, "TABULATE");
    const datasets = await this.api.listDatasets();
    const page = renderTabulatePage(datasets, {
      onTabulate: (body) => {
        void this.api
          .tabulate(body)
          .then((matrix) => page.showMatrix(matrix))
          .catch((err: ApiError) => page.showError(err.message));
      },
      onExport: (body) => {
        void this.api
          .tabulateCsv(body)
          .then((bytes) => downloadBytes(bytes, "table.csv"))
          .catch((err: ApiError) => page.showError(err.message));
      },
    });
    this.mount.append(page.root);
  }

  private trackJob(job: Job, onUpdate?: (job: Job) => void): Promise<Job> {
    return pollJob(this.api, job.id, {
      intervalMs: this.options.pollIntervalMs,
      onUpdate,
    });
  }
}

function downloadBytes(bytes: Uint8Array, filename: string): void {
  const blob = new Blob([bytes as BlobPart], { type: "text/csv" });
  const url = URL.createObjectURL(blob);
  const link = el("a", { href: url, download: filename });
  document.body.append(link);
  link.click();
  link.remove();
  URL.revokeObjectURL(url);
}

export function boot(): void {
  const mount = document.getElementById("app");
  if (mount) {
    void new App(mount).start();
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
