// Options page wiring: one form backed by loadSettings/saveSettings.

import { DEFAULT_SETTINGS, LOCKED_MINIMUM, loadSettings, saveSettings } from "./settings";
import { Dimension, SortDirection, SortKey, ViewSettings } from "./types";

const byId = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

const minimumInput = (dim: Dimension) => byId<HTMLInputElement>(`min-${dim}`);

function syncLockUi(): void {
  const locked = byId<HTMLInputElement>("filters-locked").checked;
  for (const dim of ["actionability", "knowledge"] as Dimension[]) {
    minimumInput(dim).disabled = locked;
    if (locked) {
      const current = Number(minimumInput(dim).value);
      if (!Number.isFinite(current) || minimumInput(dim).value === "" || current < LOCKED_MINIMUM) {
        minimumInput(dim).value = String(LOCKED_MINIMUM);
      }
    }
  }
}

function fillForm(settings: ViewSettings): void {
  byId<HTMLSelectElement>("sort-key").value = settings.sortKey;
  byId<HTMLSelectElement>("sort-direction").value = settings.sortDirection;
  for (const dim of ["actionability", "knowledge", "emotion"] as Dimension[]) {
    const minimum = settings.filters[dim];
    minimumInput(dim).value = minimum === null ? "" : String(minimum);
  }
  byId<HTMLInputElement>("service-url").value = settings.serviceUrl;
  byId<HTMLInputElement>("filters-locked").checked = settings.filtersLocked;
  syncLockUi();
}

function readForm(): ViewSettings {
  const filters = {} as Record<Dimension, number | null>;
  for (const dim of ["actionability", "knowledge", "emotion"] as Dimension[]) {
    const value = minimumInput(dim).value.trim();
    filters[dim] = value === "" ? null : Number(value);
  }
  return {
    sortKey: byId<HTMLSelectElement>("sort-key").value as SortKey,
    sortDirection: byId<HTMLSelectElement>("sort-direction").value as SortDirection,
    filters,
    serviceUrl: byId<HTMLInputElement>("service-url").value,
    filtersLocked: byId<HTMLInputElement>("filters-locked").checked,
  };
}

export async function initOptionsPage(): Promise<void> {
  fillForm(await loadSettings());

  byId<HTMLInputElement>("filters-locked").addEventListener("change", syncLockUi);

  byId<HTMLButtonElement>("save").addEventListener("click", () => {
    void saveSettings(readForm()).then((saved) => {
      fillForm(saved); // reflects clamping and the locked minima
      byId("status").textContent = "saved";
    });
  });

  byId<HTMLButtonElement>("reset").addEventListener("click", () => {
    void saveSettings(DEFAULT_SETTINGS).then((saved) => {
      fillForm(saved);
      byId("status").textContent = "reset to defaults";
    });
  });
}
