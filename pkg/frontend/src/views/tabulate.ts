// Tabulate page: choose datasets, drugs and comparator mode, view the grid.

import { clear, el } from "../dom.js";
import type { ManifestEntryJson, MatrixJson, TabulateRequest } from "../types.js";

export interface TabulateHandlers {
  onTabulate: (body: TabulateRequest) => void;
  onExport: (body: TabulateRequest) => void;
}

export interface TabulatePage {
  root: HTMLElement;
  currentRequest(): TabulateRequest;
  showMatrix(matrix: MatrixJson): void;
  showError(message: string): void;
}

function splitList(text: string): string[] {
  return text
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

export function renderTabulatePage(
  datasets: ManifestEntryJson[],
  handlers: TabulateHandlers,
): TabulatePage {
  const picker = el("ul", { class: "dataset-list" });
  for (const entry of datasets) {
    const box = el("input", {
      type: "checkbox",
      class: "dataset-box",
      "data-path": entry.file_path,
      id: `ds-${entry.file_path}`,
    });
    picker.append(el("li", {}, [
      box,
      el("label", { for: `ds-${entry.file_path}` }, [
        `${entry.file_path} (${entry.query_or_quarter})`,
      ]),
    ]));
  }

  const drugsInput = el("input", {
    id: "drugs",
    type: "text",
    placeholder: "Drug columns, comma-separated (optional)",
  });
  const classInput = el("input", {
    id: "class-members",
    type: "text",
    placeholder: "Drug class, comma-separated",
  });
  const modeSelect = el("select", { id: "mode" }, [
    el("option", { value: "ae_based" }, ["Single-drug comparator"]),
    el("option", { value: "drug_based" }, ["Drug-class comparator"]),
  ]) as HTMLSelectElement;
  const hint = el("span", { id: "class-hint", class: "validation" });
  const submit = el("button", { id: "tabulate-submit", type: "button" }, [
    "Build table",
  ]) as HTMLButtonElement;
  const exportButton = el("button", { id: "export-csv", type: "button" }, [
    "Export CSV",
  ]) as HTMLButtonElement;
  const grid = el("div", { id: "matrix-area" });

  function refreshValidity(): void {
    const needsClass = modeSelect.value === "drug_based";
    const hasClass = splitList((classInput as HTMLInputElement).value).length > 0;
    const blocked = needsClass && !hasClass;
    submit.disabled = blocked;
    exportButton.disabled = blocked;
    hint.textContent = blocked
      ? "Drug-class mode needs at least one class member."
      : "";
  }
  modeSelect.addEventListener("change", refreshValidity);
  classInput.addEventListener("input", refreshValidity);
  refreshValidity();

  function currentRequest(): TabulateRequest {
    const paths = Array.from(
      picker.querySelectorAll<HTMLInputElement>("input.dataset-box:checked"),
    ).map((box) => box.dataset["path"] as string);
    const body: TabulateRequest = { datasets: paths };
    const drugs = splitList((drugsInput as HTMLInputElement).value);
    if (drugs.length) body.drugs = drugs;
    if (modeSelect.value === "drug_based") {
      body.mode = "drug_based";
      body.class_members = splitList((classInput as HTMLInputElement).value);
    } else {
      body.mode = "ae_based";
    }
    return body;
  }

  submit.addEventListener("click", () => handlers.onTabulate(currentRequest()));
  exportButton.addEventListener("click", () => handlers.onExport(currentRequest()));

  const root = el("section", { class: "page page-tabulate" }, [
    el("h1", {}, ["Contingency table"]),
    picker,
    el("div", { class: "tabulate-controls" }, [
      drugsInput, modeSelect, classInput, hint, submit, exportButton,
    ]),
    grid,
  ]);

  return {
    root,
    currentRequest,
    showMatrix(matrix) {
      clear(grid);
      const table = el("table", { id: "matrix" });
      const headerCells = [el("th", {}, ["PT"])];
      for (const drug of matrix.drug_labels) {
        headerCells.push(el("th", {}, [drug]));
      }
      if (matrix.other_drugs) {
        headerCells.push(el("th", {}, ["Other Drugs"]));
      }
      table.append(el("thead", {}, [el("tr", {}, headerCells)]));
      const body = el("tbody");
      matrix.ae_labels.forEach((ae, i) => {
        const row = [el("th", { scope: "row" }, [ae])];
        for (const value of matrix.cells[i] ?? []) {
          row.push(el("td", { class: "count" }, [String(value)]));
        }
        if (matrix.other_drugs) {
          row.push(el("td", { class: "count other" }, [
            String(matrix.other_drugs[i]),
          ]));
        }
        body.append(el("tr", { "data-ae": ae }, row));
      });
      table.append(body);
      grid.append(table);
    },
    showError(message) {
      clear(grid);
      grid.append(el("div", { class: "error-card", role: "alert" }, [message]));
    },
  };
}
