// Wire types for the scoring service plus the page-side annotation state.

export type Dimension = "actionability" | "knowledge" | "emotion";

export const DIMENSIONS: Dimension[] = ["actionability", "knowledge", "emotion"];

export interface LabelScore {
  raw: number;
  // 0..100, one decimal; this is the number users see
  display: number;
}

export type ResultStatus = "scored" | "invalid" | "error" | "pending";

export interface ScoreResult {
  url: string;
  status: ResultStatus;
  labels?: Record<Dimension, LabelScore>;
  reason?: string;
}

export interface ScoresResponse {
  results: ScoreResult[];
  model_version?: string;
}

export type BadgeState = "rendered" | "pending" | "hidden";

export interface ResultAnnotation {
  element: HTMLElement;
  url: string;
  // position among the collected results before any sorting
  originalIndex: number;
  result?: ScoreResult;
  badgeState: BadgeState;
}

export type SortKey = "none" | Dimension;
export type SortDirection = "desc" | "asc";

export interface ViewSettings {
  sortKey: SortKey;
  sortDirection: SortDirection;
  // minimum display score per dimension; a result at or below it is hidden.
  // null means the filter is off.
  filters: Record<Dimension, number | null>;
  serviceUrl: string;
  // family preset: while true the actionability/knowledge minima stay at 20+
  filtersLocked: boolean;
}
