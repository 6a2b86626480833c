// View state and hash routing. A source page is only reachable with a
// source selected; everything else is free navigation.

import type { Job } from "./types.js";

export type Page = "HOME" | "SOURCE_PAGE" | "JOBS" | "DATASETS" | "TABULATE";

export interface ViewState {
  currentPage: Page;
  selectedSource: string | null;
  dataRoot: string;
  activeJobs: Job[];
}

export function initialState(): ViewState {
  return { currentPage: "HOME", selectedSource: null, dataRoot: "", activeJobs: [] };
}

export function navigate(state: ViewState, page: Page, source?: string): ViewState {
  if (page === "SOURCE_PAGE" && !source) {
    throw new Error("a source page needs a selected source");
  }
  return {
    ...state,
    currentPage: page,
    selectedSource: page === "SOURCE_PAGE" ? (source as string) : null,
  };
}

export interface Route {
  page: Page;
  source?: string;
}

export function routeFromHash(hash: string): Route {
  const clean = hash.replace(/^#\/?/, "");
  if (clean.startsWith("source/")) {
    const source = clean.slice("source/".length);
    if (source) return { page: "SOURCE_PAGE", source };
  }
  switch (clean) {
    case "jobs":
      return { page: "JOBS" };
    case "datasets":
      return { page: "DATASETS" };
    case "tabulate":
      return { page: "TABULATE" };
    default:
      return { page: "HOME" };
  }
}

export function hashForRoute(route: Route): string {
  switch (route.page) {
    case "SOURCE_PAGE":
      return `#/source/${route.source}`;
    case "JOBS":
      return "#/jobs";
    case "DATASETS":
      return "#/datasets";
    case "TABULATE":
      return "#/tabulate";
    default:
      return "#/";
  }
}
