// Thin typed client over the service's JSON API. The UI never computes a
// number itself; everything rendered comes back from these calls.

import type {
  ErrorBody,
  Job,
  ManifestEntryJson,
  MatrixJson,
  QuarterJson,
  SourceDescriptor,
  TabulateRequest,
  VaersFileJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, "unreachable", `service unreachable: ${err}`);
    }
    if (!response.ok) {
      const body = (await response.json().catch(() => null)) as ErrorBody | null;
      throw new ApiError(
        response.status,
        body?.code ?? "http_error",
        body?.message ?? `HTTP ${response.status}`,
        body?.detail ?? null,
      );
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  getSources(): Promise<SourceDescriptor[]> {
    return this.request("/api/sources");
  }

  search(source: string, term: string): Promise<Job> {
    return this.post("/api/search", { source, term });
  }

  getJob(id: string): Promise<Job> {
    return this.request(`/api/jobs/${id}`);
  }

  listJobs(): Promise<Job[]> {
    return this.request("/api/jobs");
  }

  getQuarters(): Promise<QuarterJson[]> {
    return this.request("/api/faers/quarters");
  }

  getVaersFiles(): Promise<VaersFileJson[]> {
    return this.request("/api/vaers/files");
  }

  downloadQuarter(code: string): Promise<Job> {
    return this.post("/api/download", { source: "faers", quarter: code });
  }

  requestVaersYear(year: number): Promise<Job> {
    return this.post("/api/download", { source: "vaers", year });
  }

  listDatasets(): Promise<ManifestEntryJson[]> {
    return this.request("/api/datasets");
  }

  tabulate(body: TabulateRequest): Promise<MatrixJson> {
    return this.post("/api/tabulate", body);
  }

  /** CSV bytes for the same table, straight from the service. */
  async tabulateCsv(body: TabulateRequest): Promise<Uint8Array> {
    const response = await fetch(this.base + "/api/tabulate?format=csv", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      const err = (await response.json().catch(() => null)) as ErrorBody | null;
      throw new ApiError(response.status, err?.code ?? "http_error",
        err?.message ?? `HTTP ${response.status}`);
    }
    return new Uint8Array(await response.arrayBuffer());
  }

  fileUrl(filePath: string): string {
    return `${this.base}/api/files/${filePath}`;
  }

  getConfig(): Promise<{ data_root: string }> {
    return this.request("/api/config");
  }

  putConfig(dataRoot: string): Promise<{ data_root: string }> {
    return this.request("/api/config", {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ data_root: dataRoot }),
    });
  }
}
