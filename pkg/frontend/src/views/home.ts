// Home page: the storage-location control on top, one tile per database.

import { el } from "../dom.js";
import type { SourceDescriptor } from "../types.js";

export interface HomeHandlers {
  onOpenSource: (id: string) => void;
  onSaveRoot: (root: string) => void;
}

export function renderHome(
  sources: SourceDescriptor[],
  dataRoot: string,
  handlers: HomeHandlers,
): HTMLElement {
  const rootInput = el("input", {
    id: "data-root",
    type: "text",
    value: dataRoot,
    placeholder: "Folder where downloaded data is stored",
  });
  rootInput.value = dataRoot;
  const saveButton = el("button", { id: "save-root", type: "button" }, ["Set location"]);
  saveButton.addEventListener("click", () => handlers.onSaveRoot(rootInput.value));

  const storage = el("div", { class: "storage-control" }, [
    el("label", { for: "data-root" }, ["Data location"]),
    rootInput,
    saveButton,
  ]);

  const grid = el("div", { class: "source-grid" });
  for (const source of sources) {
    const tile = el(
      "button",
      { class: "source-tile", "data-source": source.id, type: "button" },
      [
        el("span", { class: "tile-name" }, [source.display_name]),
        el("span", { class: "tile-meta" }, [
          `${source.access_mode.replaceAll("_", " ")} · ${source.native_format}`,
        ]),
      ],
    );
    tile.addEventListener("click", () => handlers.onOpenSource(source.id));
    grid.append(tile);
  }

  return el("section", { class: "page page-home" }, [
    storage,
    el("h1", {}, ["Safety databases"]),
    grid,
  ]);
}

export function renderOfflineBanner(message: string): HTMLElement {
  return el("div", { class: "offline-banner", role: "alert" }, [
    `Service unreachable: ${message}`,
  ]);
}
