// View settings persisted in extension storage, with a localStorage fallback
// for tests and plain-page development.

import { DIMENSIONS, Dimension, SortDirection, SortKey, ViewSettings } from "./types";

export const STORAGE_KEY = "contentLabels.settings";
export const LOCKED_MINIMUM = 20;

export const DEFAULT_SETTINGS: ViewSettings = {
  sortKey: "none",
  sortDirection: "desc",
  filters: { actionability: null, knowledge: null, emotion: null },
  serviceUrl: "http://127.0.0.1:8765",
  filtersLocked: false,
};

const SORT_KEYS: SortKey[] = ["none", "actionability", "knowledge", "emotion"];
const SORT_DIRECTIONS: SortDirection[] = ["desc", "asc"];

const clamp = (value: number) => Math.min(100, Math.max(0, value));

function sanitizeMinimum(value: unknown): number | null {
  const num = typeof value === "string" && value.trim() !== "" ? Number(value) : value;
  if (typeof num !== "number" || !Number.isFinite(num)) return null;
  return clamp(num);
}

// Coerce anything read from storage (or an options form) into a valid
// ViewSettings: unknown enums fall back to defaults, minima clamp to
// [0, 100], and the locked family preset keeps its minima at 20 or above.
export function sanitizeSettings(raw: unknown): ViewSettings {
  const source = (raw && typeof raw === "object" ? raw : {}) as Record<string, unknown>;
  const filtersSource = (source.filters && typeof source.filters === "object" ? source.filters : {}) as Record<
    string,
    unknown
  >;
  const filters = {} as Record<Dimension, number | null>;
  for (const dim of DIMENSIONS) filters[dim] = sanitizeMinimum(filtersSource[dim]);

  const locked = source.filtersLocked === true;
  if (locked) {
    for (const dim of ["actionability", "knowledge"] as Dimension[]) {
      filters[dim] = Math.max(filters[dim] ?? LOCKED_MINIMUM, LOCKED_MINIMUM);
    }
  }

  return {
    sortKey: SORT_KEYS.includes(source.sortKey as SortKey) ? (source.sortKey as SortKey) : DEFAULT_SETTINGS.sortKey,
    sortDirection: SORT_DIRECTIONS.includes(source.sortDirection as SortDirection)
      ? (source.sortDirection as SortDirection)
      : DEFAULT_SETTINGS.sortDirection,
    filters,
    serviceUrl:
      typeof source.serviceUrl === "string" && source.serviceUrl.trim() !== ""
        ? source.serviceUrl.trim()
        : DEFAULT_SETTINGS.serviceUrl,
    filtersLocked: locked,
  };
}

const hasChromeStorage = () => typeof chrome !== "undefined" && !!chrome.storage?.local;

export async function loadSettings(): Promise<ViewSettings> {
  if (hasChromeStorage()) {
    const found = await chrome.storage.local.get(STORAGE_KEY);
    return sanitizeSettings(found[STORAGE_KEY]);
  }
  const stored = localStorage.getItem(STORAGE_KEY);
  return sanitizeSettings(stored ? JSON.parse(stored) : undefined);
}

export async function saveSettings(settings: ViewSettings): Promise<ViewSettings> {
  const clean = sanitizeSettings(settings);
  if (hasChromeStorage()) {
    await chrome.storage.local.set({ [STORAGE_KEY]: clean });
  } else {
    localStorage.setItem(STORAGE_KEY, JSON.stringify(clean));
  }
  return clean;
}

// Re-run the callback whenever another page (the options page, typically)
// saves new settings. No-op without the extension storage API.
export function onSettingsChanged(callback: (settings: ViewSettings) => void): void {
  if (typeof chrome === "undefined" || !chrome.storage?.onChanged) return;
  chrome.storage.onChanged.addListener((changes, area) => {
    if (area !== "local" || !(STORAGE_KEY in changes)) return;
    callback(sanitizeSettings(changes[STORAGE_KEY].newValue));
  });
}
