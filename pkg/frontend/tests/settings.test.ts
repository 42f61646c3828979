import { afterEach, describe, expect, it } from "vitest";
import {
  DEFAULT_SETTINGS,
  LOCKED_MINIMUM,
  STORAGE_KEY,
  loadSettings,
  sanitizeSettings,
  saveSettings,
} from "../src/settings";
import { testSettings } from "./fixtures";

afterEach(() => {
  localStorage.clear();
  delete (globalThis as Record<string, unknown>).chrome;
});

describe("sanitizeSettings", () => {
  it("falls back to defaults for garbage input", () => {
    expect(sanitizeSettings(undefined)).toEqual(DEFAULT_SETTINGS);
    expect(sanitizeSettings(null)).toEqual(DEFAULT_SETTINGS);
    expect(sanitizeSettings("nonsense")).toEqual(DEFAULT_SETTINGS);
    expect(sanitizeSettings({ sortKey: "magic", sortDirection: "sideways" })).toEqual(DEFAULT_SETTINGS);
  });

  it("clamps filter minima into the 0..100 range", () => {
    const clean = sanitizeSettings({ filters: { actionability: 150, knowledge: -5, emotion: 33.5 } });
    expect(clean.filters).toEqual({ actionability: 100, knowledge: 0, emotion: 33.5 });
  });

  it("drops non-numeric minima", () => {
    const clean = sanitizeSettings({ filters: { actionability: "high", knowledge: NaN, emotion: "" } });
    expect(clean.filters).toEqual({ actionability: null, knowledge: null, emotion: null });
  });

  it("accepts numeric strings from form inputs", () => {
    expect(sanitizeSettings({ filters: { knowledge: "20" } }).filters.knowledge).toBe(20);
  });

  it("keeps locked family minima at twenty or above", () => {
    const clean = sanitizeSettings({ filtersLocked: true, filters: { actionability: 5, emotion: 5 } });
    expect(clean.filters.actionability).toBe(LOCKED_MINIMUM);
    expect(clean.filters.knowledge).toBe(LOCKED_MINIMUM);
    expect(clean.filters.emotion).toBe(5); // emotion is not part of the preset
    const higher = sanitizeSettings({ filtersLocked: true, filters: { actionability: 60 } });
    expect(higher.filters.actionability).toBe(60);
  });

  it("trims and defaults the service url", () => {
    expect(sanitizeSettings({ serviceUrl: "  http://box:9000  " }).serviceUrl).toBe("http://box:9000");
    expect(sanitizeSettings({ serviceUrl: "   " }).serviceUrl).toBe(DEFAULT_SETTINGS.serviceUrl);
  });
});

describe("persistence", () => {
  it("round-trips settings through storage", async () => {
    const wanted = testSettings({ sortKey: "emotion", sortDirection: "asc", filters: { knowledge: 20 } });
    await saveSettings(wanted);
    expect(await loadSettings()).toEqual(wanted);
  });

  it("returns defaults when nothing is stored", async () => {
    expect(await loadSettings()).toEqual(DEFAULT_SETTINGS);
  });

  it("sanitizes on save, not just on load", async () => {
    const saved = await saveSettings(testSettings({ filters: { actionability: 400 } }));
    expect(saved.filters.actionability).toBe(100);
    expect((await loadSettings()).filters.actionability).toBe(100);
  });

  it("prefers extension storage when the api exists", async () => {
    const store: Record<string, unknown> = {};
    (globalThis as Record<string, unknown>).chrome = {
      storage: {
        local: {
          get: async (key: string) => ({ [key]: store[key] }),
          set: async (items: Record<string, unknown>) => {
            Object.assign(store, items);
          },
        },
      },
    };
    const wanted = testSettings({ sortKey: "actionability" });
    await saveSettings(wanted);
    expect(store[STORAGE_KEY]).toEqual(wanted);
    expect(localStorage.getItem(STORAGE_KEY)).toBeNull();
    expect(await loadSettings()).toEqual(wanted);
  });
});
