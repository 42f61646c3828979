// HTTP client for the scoring service. Batches POST /v1/scores requests and
// re-polls pending results a bounded number of times.

import { ScoreResult, ScoresResponse, ViewSettings } from "./types";

export const MAX_URLS_PER_REQUEST = 20;
export const PENDING_RETRIES = 3;
export const PENDING_POLL_MS = 2000;

export class ServiceUnreachable extends Error {}

export interface QueryOptions {
  fetchFn?: typeof fetch;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

async function postScores(serviceUrl: string, urls: string[], fetchFn: typeof fetch): Promise<ScoreResult[]> {
  let response: Response;
  try {
    response = await fetchFn(serviceUrl.replace(/\/+$/, "") + "/v1/scores", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ urls }),
    });
  } catch (err) {
    throw new ServiceUnreachable(String(err));
  }
  if (!response.ok) throw new ServiceUnreachable(`service answered ${response.status}`);
  const body = (await response.json()) as ScoresResponse;
  if (!Array.isArray(body.results) || body.results.length !== urls.length) {
    throw new ServiceUnreachable("malformed service response");
  }
  return body.results;
}

// Results come back in request order; a cache hit may echo the canonical url
// rather than the requested one, so merge by position, never by echoed url.
async function postAll(
  serviceUrl: string,
  urls: string[],
  fetchFn: typeof fetch,
  results: Map<string, ScoreResult>,
): Promise<void> {
  for (let start = 0; start < urls.length; start += MAX_URLS_PER_REQUEST) {
    const batch = urls.slice(start, start + MAX_URLS_PER_REQUEST);
    const answers = await postScores(serviceUrl, batch, fetchFn);
    batch.forEach((url, i) => results.set(url, answers[i]));
  }
}

// Resolve labels for every url. Pending results are re-polled up to
// PENDING_RETRIES times, PENDING_POLL_MS apart; whatever is still pending
// after that stays pending for this page view. Network trouble raises
// ServiceUnreachable so the caller can degrade to "no score" badges.
export async function queryService(
  urls: string[],
  settings: ViewSettings,
  options: QueryOptions = {},
): Promise<Map<string, ScoreResult>> {
  const fetchFn = options.fetchFn ?? fetch;
  const sleep = options.sleep ?? defaultSleep;
  const unique = [...new Set(urls)];
  const results = new Map<string, ScoreResult>();
  if (!unique.length) return results;

  await postAll(settings.serviceUrl, unique, fetchFn, results);
  for (let attempt = 0; attempt < PENDING_RETRIES; attempt++) {
    const pending = unique.filter((url) => results.get(url)?.status === "pending");
    if (!pending.length) break;
    await sleep(PENDING_POLL_MS);
    await postAll(settings.serviceUrl, pending, fetchFn, results);
  }
  return results;
}
