// Filtering and sorting of annotated result blocks. Both are reversible:
// applying the default settings puts every block back where it started.

import { DIMENSIONS, Dimension, ResultAnnotation, ViewSettings } from "./types";

const displayOf = (a: ResultAnnotation, dim: Dimension): number | undefined =>
  a.result?.status === "scored" ? a.result.labels?.[dim]?.display : undefined;

function filteredOut(settings: ViewSettings, a: ResultAnnotation): boolean {
  for (const dim of DIMENSIONS) {
    const min = settings.filters[dim];
    if (min === null || min === undefined) continue;
    const display = displayOf(a, dim);
    // "equal to or below" the minimum hides the result; unscored stay visible
    if (display !== undefined && display <= min) return true;
  }
  return false;
}

function setHidden(a: ResultAnnotation, hidden: boolean): void {
  const el = a.element;
  if (hidden) {
    if (el.dataset.clPrevDisplay === undefined) el.dataset.clPrevDisplay = el.style.display;
    el.style.display = "none";
    a.badgeState = "hidden";
  } else if (el.dataset.clPrevDisplay !== undefined) {
    el.style.display = el.dataset.clPrevDisplay;
    delete el.dataset.clPrevDisplay;
    a.badgeState = a.result === undefined || a.result.status === "pending" ? "pending" : "rendered";
  }
}

// Target order for the blocks: page order unless a sort key is set, in which
// case scored blocks order by display score and unscored ones follow in page
// order. Equal scores keep page order (stable).
export function orderedAnnotations(settings: ViewSettings, annotations: ResultAnnotation[]): ResultAnnotation[] {
  const base = [...annotations].sort((a, b) => a.originalIndex - b.originalIndex);
  if (settings.sortKey === "none") return base;
  const dim = settings.sortKey;
  return base
    .map((a, pageRank) => ({ a, pageRank, display: displayOf(a, dim) }))
    .sort((x, y) => {
      if ((x.display === undefined) !== (y.display === undefined)) {
        return x.display === undefined ? 1 : -1;
      }
      if (x.display !== undefined && y.display !== undefined && x.display !== y.display) {
        return settings.sortDirection === "asc" ? x.display - y.display : y.display - x.display;
      }
      return x.pageRank - y.pageRank;
    })
    .map((entry) => entry.a);
}

// Move the annotated blocks into the desired order without touching any
// other sibling: mark the slots the blocks currently occupy, then refill
// those slots. Non-result nodes (ads, separators) keep their positions, so
// repeated reorders and the reset to page order are exact.
function reorder(annotations: ResultAnnotation[], desired: ResultAnnotation[]): void {
  const parents = new Set<HTMLElement>();
  for (const a of annotations) {
    if (a.element.parentElement) parents.add(a.element.parentElement);
  }
  for (const parent of parents) {
    const mine = new Set(
      annotations.filter((a) => a.element.parentElement === parent).map((a) => a.element),
    );
    const targets = desired.filter((a) => mine.has(a.element));
    const current = Array.from(parent.children).filter((child) => mine.has(child as HTMLElement));
    if (current.every((el, i) => el === targets[i].element)) continue; // already in order
    const slots = current.map((el) => {
      const mark = parent.ownerDocument.createComment("cl-slot");
      parent.insertBefore(mark, el);
      return mark;
    });
    slots.forEach((mark, i) => {
      parent.insertBefore(targets[i].element, mark);
      parent.removeChild(mark);
    });
  }
}

export function applyView(settings: ViewSettings, annotations: ResultAnnotation[]): void {
  for (const a of annotations) setHidden(a, filteredOut(settings, a));
  reorder(annotations, orderedAnnotations(settings, annotations));
}
