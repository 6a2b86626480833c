// Fetch mocking against the captured service payloads in tests/fixtures/.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { vi } from "vitest";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture<T = unknown>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8")) as T;
}

/** A per-call response sequence (the last entry repeats). */
export class Seq {
  items: unknown[];

  constructor(items: unknown[]) {
    this.items = [...items];
  }
}

export function seq(...items: unknown[]): Seq {
  return new Seq(items);
}

/** A non-2xx response with a JSON body. */
export class WithStatus {
  constructor(public status: number, public body: unknown) {}
}

export function withStatus(status: number, body: unknown): WithStatus {
  return new WithStatus(status, body);
}

type RouteValue = unknown | Seq | WithStatus | ((init?: RequestInit) => unknown);

export interface FetchLog {
  calls: { method: string; path: string; body: unknown }[];
}

export function mockFetch(routes: Record<string, RouteValue>): FetchLog {
  const log: FetchLog = { calls: [] };

  vi.stubGlobal("fetch", async (input: string | URL, init?: RequestInit) => {
    const url = String(input);
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const method = (init?.method ?? "GET").toUpperCase();
    const key = `${method} ${path}`;
    log.calls.push({
      method,
      path,
      body: init?.body ? JSON.parse(String(init.body)) : null,
    });

    let spec = routes[key];
    if (spec === undefined) {
      return jsonResponse(404, { code: "not_mocked", message: key, detail: null });
    }
    if (typeof spec === "function") {
      spec = (spec as (init?: RequestInit) => unknown)(init);
    }
    if (spec instanceof Seq) {
      spec = spec.items.length > 1 ? spec.items.shift() : spec.items[0];
    }
    if (spec instanceof WithStatus) {
      return jsonResponse(spec.status, spec.body);
    }
    return jsonResponse(200, spec);
  });
  return log;
}

function jsonResponse(status: number, body: unknown) {
  const text = JSON.stringify(body);
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => JSON.parse(text),
    arrayBuffer: async () => new TextEncoder().encode(text).buffer,
  };
}

export function mockCsvFetch(routes: Record<string, unknown>,
                             csvRoutes: Record<string, Uint8Array>): FetchLog {
  const log = mockFetch(routes);
  const base = globalThis.fetch;
  vi.stubGlobal("fetch", async (input: string | URL, init?: RequestInit) => {
    const path = String(input).replace(/^https?:\/\/[^/]+/, "");
    const method = (init?.method ?? "GET").toUpperCase();
    const bytes = csvRoutes[`${method} ${path}`];
    if (bytes !== undefined) {
      log.calls.push({ method, path, body: init?.body ? JSON.parse(String(init.body)) : null });
      return {
        ok: true,
        status: 200,
        json: async () => { throw new Error("csv body"); },
        arrayBuffer: async () => bytes.buffer.slice(
          bytes.byteOffset, bytes.byteOffset + bytes.byteLength),
      };
    }
    return base(input as string, init);
  });
  return log;
}
