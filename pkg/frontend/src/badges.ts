// Score badges injected next to each result: actionability green, knowledge
// blue, emotion yellow. One muted badge stands in when there is no score.

import { DIMENSIONS, Dimension, ResultAnnotation } from "./types";

export const BADGE_COLORS: Record<Dimension, string> = {
  actionability: "#2e8b57",
  knowledge: "#1e6fd9",
  emotion: "#d4a017",
};

const SHORT_LABELS: Record<Dimension, string> = {
  actionability: "A",
  knowledge: "K",
  emotion: "E",
};

export const CONTAINER_CLASS = "cl-badges";
export const BADGE_CLASS = "cl-badge";

const BADGE_CSS =
  "display:inline-block;margin-left:6px;padding:1px 7px;border-radius:9px;" +
  "font:600 11px/16px system-ui,sans-serif;color:#fff;vertical-align:middle;";
const MUTED_CSS = BADGE_CSS + "background-color:#9aa0a6;";

function badgeTexts(annotation: ResultAnnotation): { dim: Dimension; text: string; title: string }[] {
  const labels = annotation.result?.labels;
  if (!labels) return [];
  return DIMENSIONS.map((dim) => ({
    dim,
    text: `${SHORT_LABELS[dim]} ${labels[dim].display.toFixed(1)}`,
    title: `${dim} ${labels[dim].display.toFixed(1)} (raw ${labels[dim].raw.toFixed(2)})`,
  }));
}

function stateOf(annotation: ResultAnnotation): "scored" | "pending" | "none" {
  const status = annotation.result?.status;
  if (status === "scored" && annotation.result?.labels) return "scored";
  if (status === "pending" || status === undefined) return "pending";
  return "none"; // invalid or error
}

export function renderBadges(annotation: ResultAnnotation): void {
  const element = annotation.element;
  const doc = element.ownerDocument;
  const state = stateOf(annotation);
  const texts = state === "scored" ? badgeTexts(annotation) : [];
  const signature = state + "|" + texts.map((t) => t.text).join("|");

  const existing = element.querySelector<HTMLElement>(`:scope > .${CONTAINER_CLASS}`);
  if (existing && existing.dataset.clSignature === signature) {
    if (annotation.badgeState !== "hidden") annotation.badgeState = state === "pending" ? "pending" : "rendered";
    return; // identical re-render: leave the DOM untouched
  }
  existing?.remove(); // replace, never duplicate

  const container = doc.createElement("span");
  container.className = CONTAINER_CLASS;
  container.dataset.clSignature = signature;
  container.dataset.clState = state;

  if (state === "scored") {
    for (const { dim, text, title } of texts) {
      const badge = doc.createElement("span");
      badge.className = BADGE_CLASS;
      badge.dataset.dim = dim;
      badge.style.cssText = BADGE_CSS;
      badge.style.backgroundColor = BADGE_COLORS[dim];
      badge.textContent = text;
      badge.title = title;
      container.appendChild(badge);
    }
  } else {
    const badge = doc.createElement("span");
    badge.className = `${BADGE_CLASS} ${BADGE_CLASS}--muted`;
    badge.style.cssText = MUTED_CSS;
    badge.textContent = state === "pending" ? "pending" : "no score";
    if (annotation.result?.reason) badge.title = annotation.result.reason;
    container.appendChild(badge);
  }

  element.appendChild(container);
  if (annotation.badgeState !== "hidden") annotation.badgeState = state === "pending" ? "pending" : "rendered";
}
