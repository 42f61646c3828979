// Shared fixtures: the saved results page, a scripted scoring service, and
// small documents for edge cases.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { JSDOM } from "jsdom";
import { DEFAULT_SETTINGS } from "../src/settings";
import { Dimension, ScoreResult, ViewSettings } from "../src/types";

export const SERP_URL = "https://www.google.com/search?q=forest+bathing";

const here = dirname(fileURLToPath(import.meta.url));
const SERP_HTML = readFileSync(join(here, "fixtures", "serp.html"), "utf8");

export function makeDoc(html: string, url: string): Document {
  return new JSDOM(html, { url }).window.document;
}

export const loadSerpDoc = (): Document => makeDoc(SERP_HTML, SERP_URL);

// organic results of serp.html in page order, recorded by hand
export const EXPECTED_URLS = [
  "https://site1.example/forest-bathing-guide",
  "https://site2.example/what-is-shinrin-yoku",
  "https://site3.example/city-parks",
  "https://site4.example/health-evidence",
  "https://site5.example/national-forests",
  "https://site6.example/guided-walks",
  "https://site7.example/breathing-exercises",
  "https://site8.example/podcast-episode",
  "https://site9.example/photo-essay",
  "https://site10.example/winter-forest",
];

type SettingsOverrides = Partial<Omit<ViewSettings, "filters">> & {
  filters?: Partial<Record<Dimension, number | null>>;
};

export function testSettings(overrides: SettingsOverrides = {}): ViewSettings {
  return {
    ...DEFAULT_SETTINGS,
    serviceUrl: "http://service.test",
    ...overrides,
    filters: { ...DEFAULT_SETTINGS.filters, ...(overrides.filters ?? {}) },
  };
}

// raw scales: actionability/knowledge 1..6, emotion -5..5
export function scoredResult(url: string, act: number, kno: number, emo: number): ScoreResult {
  const onSix = (display: number) => 1 + (display / 100) * 5;
  const onTen = (display: number) => (display / 100) * 10 - 5;
  return {
    url,
    status: "scored",
    labels: {
      actionability: { raw: onSix(act), display: act },
      knowledge: { raw: onSix(kno), display: kno },
      emotion: { raw: onTen(emo), display: emo },
    },
  };
}

// display scores for the ten organic results; actionability carries a tie
// (sites 4 and 7) and knowledge sits around the 20 boundary
const ACTIONABILITY = [64.0, 12.5, 88.0, 45.5, 99.0, 7.0, 45.5, 33.5, 76.0, 21.0];
const KNOWLEDGE = [15.0, 20.0, 21.0, 80.5, 35.0, 64.0, 12.0, 20.0, 90.0, 55.5];
const EMOTION = [50.0, 42.5, 71.0, 5.5, 88.0, 49.5, 66.0, 31.0, 24.5, 97.0];

export function serpScoreTable(): Map<string, ScoreResult> {
  const table = new Map<string, ScoreResult>();
  EXPECTED_URLS.forEach((url, i) => {
    table.set(url, scoredResult(url, ACTIONABILITY[i], KNOWLEDGE[i], EMOTION[i]));
  });
  return table;
}

// oracle orders for serp.html under serpScoreTable(), recorded by hand
export const HIDDEN_BY_KNOWLEDGE_20 = ["r1", "r2", "r7", "r8"];
export const ACTIONABILITY_DESC_IDS = ["r5", "r3", "r9", "r1", "r4", "r7", "r8", "r10", "r2", "r6"];

export interface FakeService {
  fetchFn: typeof fetch;
  calls: string[][]; // request bodies seen, as url lists
}

// Answers POST /v1/scores from a url -> result table. Unknown urls score as
// invalid. `plan` can override whole calls: a number is an HTTP status,
// "down" makes fetch reject, "pending" answers every url as pending.
export function fakeService(
  table: Map<string, ScoreResult>,
  plan: Array<number | "down" | "pending" | "ok"> = [],
): FakeService {
  const calls: string[][] = [];
  const fetchFn = (async (_input: RequestInfo | URL, init?: RequestInit) => {
    const body = JSON.parse(String(init?.body)) as { urls: string[] };
    const mode = plan[calls.length] ?? "ok";
    calls.push(body.urls);
    if (mode === "down") throw new TypeError("fetch failed");
    if (typeof mode === "number") {
      return new Response(JSON.stringify({ error: "scoring unavailable" }), { status: mode });
    }
    const results = body.urls.map((url): ScoreResult => {
      if (mode === "pending") return { url, status: "pending" };
      return table.get(url) ?? { url, status: "invalid", reason: "unknown fixture url" };
    });
    return new Response(JSON.stringify({ results, model_version: "v1-test" }), {
      status: 200,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return { fetchFn, calls };
}

export const instantSleep = async (_ms: number): Promise<void> => {};

// jsdom reports inline colors in rgb() form
export const rgb = (hex: string): string => {
  const n = parseInt(hex.slice(1), 16);
  return `rgb(${(n >> 16) & 255}, ${(n >> 8) & 255}, ${n & 255})`;
};

// lets jsdom deliver MutationObserver callbacks and settle async work
export async function tick(turns = 5): Promise<void> {
  for (let i = 0; i < turns; i++) await new Promise((resolve) => setTimeout(resolve, 0));
}

export const ORGANIC_IDS = ["r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8", "r9", "r10"];

// ids of visible organic blocks, in current document order
export const visibleIds = (doc: Document): string[] =>
  Array.from(doc.querySelectorAll<HTMLElement>("#search .g"))
    .filter((el) => ORGANIC_IDS.includes(el.id) && el.style.display !== "none")
    .map((el) => el.id);

export const childIds = (doc: Document): string[] =>
  Array.from(doc.querySelectorAll<HTMLElement>("#search > *")).map((el) => el.id);

export type { Dimension };
