// Page orchestration: find results, fetch scores, badge, then apply the
// saved view. Runs once on load and again whenever the page mutates.

import { CollectedResult, collectResultUrls } from "./adapter";
import { CONTAINER_CLASS, renderBadges } from "./badges";
import { QueryOptions, ServiceUnreachable, queryService } from "./client";
import { loadSettings, onSettingsChanged } from "./settings";
import { TOAST_ID, showToast } from "./toast";
import { ResultAnnotation, ScoreResult, ViewSettings } from "./types";
import { applyView } from "./view";

export interface AnnotateOptions extends QueryOptions {
  // per page-view result cache; pending and unreachable outcomes stay in it
  // so mutation callbacks never re-poll or hammer a dead service
  cache?: Map<string, ScoreResult>;
}

// Each block remembers the position it was first seen at, so re-collecting
// on a page that is currently sorted still knows the true original order.
// A late-loaded block slots between its neighbours when those are still in
// ascending (page) order; on a sorted page its home is the end of the list.
function stampOriginalIndices(collected: CollectedResult[]): number[] {
  const stamps: (number | null)[] = collected.map((c) => {
    const seen = c.element.dataset.clIndex;
    return seen === undefined ? null : Number(seen);
  });
  const known = stamps.filter((s): s is number => s !== null);
  let low = known.length ? Math.min(...known) : 0;
  let high = known.length ? Math.max(...known) : -1;
  for (let i = 0; i < stamps.length; i++) {
    if (stamps[i] !== null) continue;
    let prev: number | null = null;
    for (let j = i - 1; j >= 0; j--) if (stamps[j] !== null) { prev = stamps[j]; break; }
    let next: number | null = null;
    for (let j = i + 1; j < stamps.length; j++) if (stamps[j] !== null) { next = stamps[j]; break; }
    let stamp: number;
    if (prev === null && next === null) {
      stamp = i; // nothing stamped yet: plain page order
    } else if (prev === null) {
      stamp = next === low ? next! - 1 : high + 1;
    } else if (next === null) {
      stamp = prev === high ? prev + 1 : high + 1;
    } else if (prev < next) {
      stamp = (prev + next) / 2;
    } else {
      stamp = high + 1;
    }
    stamps[i] = stamp;
    collected[i].element.dataset.clIndex = String(stamp);
    if (stamp > high) high = stamp;
    if (stamp < low) low = stamp;
  }
  return stamps as number[];
}

export async function annotatePage(
  doc: Document,
  settings: ViewSettings,
  options: AnnotateOptions = {},
): Promise<ResultAnnotation[]> {
  const cache = options.cache ?? new Map<string, ScoreResult>();
  const collected = collectResultUrls(doc);
  const stamps = stampOriginalIndices(collected);
  const annotations: ResultAnnotation[] = collected.map((item, index) => ({
    element: item.element,
    url: item.url,
    originalIndex: stamps[index],
    result: cache.get(item.url),
    badgeState: "pending",
  }));
  if (!annotations.length) return annotations;

  // badge immediately (cached score or a pending placeholder); the page
  // itself never waits on the service
  for (const annotation of annotations) renderBadges(annotation);

  const unresolved = [...new Set(annotations.filter((a) => !a.result).map((a) => a.url))];
  if (unresolved.length) {
    try {
      const fresh = await queryService(unresolved, settings, options);
      for (const [url, result] of fresh) cache.set(url, result);
    } catch (err) {
      if (!(err instanceof ServiceUnreachable)) throw err;
      for (const url of unresolved) cache.set(url, { url, status: "error", reason: "service unreachable" });
      showToast(doc, "content labels: scoring service unreachable");
    }
    for (const annotation of annotations) {
      annotation.result = cache.get(annotation.url);
      renderBadges(annotation);
    }
  }

  applyView(settings, annotations);
  return annotations;
}

// Badge containers, the toast, and the comment markers used while
// reordering are the extension's own churn; re-annotating on them would
// loop forever.
const isOurNode = (node: Node): boolean => {
  if (node.nodeType === 8) return true;
  if (node.nodeType !== 1) return false;
  const el = node as Element;
  return el.classList.contains(CONTAINER_CLASS) || el.id === TOAST_ID || !!el.closest(`.${CONTAINER_CLASS}`);
};

export interface PageObserver {
  observer: MutationObserver;
  run: () => Promise<void>;
}

export function observePage(
  doc: Document,
  getSettings: () => ViewSettings,
  options: AnnotateOptions = {},
): PageObserver {
  const cache = options.cache ?? new Map<string, ScoreResult>();
  // one annotation pass at a time; calls made while a pass is running
  // coalesce into a single follow-up pass, and run() resolves only once
  // the pass it joined has finished
  let chain: Promise<void> = Promise.resolve();
  let scheduled = false;
  const run = (): Promise<void> => {
    if (scheduled) return chain;
    scheduled = true;
    chain = chain
      .then(async () => {
        scheduled = false;
        await annotatePage(doc, getSettings(), { ...options, cache });
      })
      .catch((err) => {
        console.error("content labels:", err);
      });
    return chain;
  };
  const view = doc.defaultView;
  if (!view) throw new Error("document is not attached to a window");
  const observer = new view.MutationObserver((records) => {
    const foreign = records.some((record) =>
      [...record.addedNodes, ...record.removedNodes].some((node) => !isOurNode(node)),
    );
    if (foreign) void run();
  });
  observer.observe(doc.body, { childList: true, subtree: true });
  return { observer, run };
}

export function initContentScript(doc: Document = document): void {
  void loadSettings().then((settings) => {
    let current = settings;
    const page = observePage(doc, () => current);
    onSettingsChanged((next) => {
      current = next;
      void page.run();
    });
    void page.run();
  });
}
