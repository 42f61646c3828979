// Site adapters. Every selector that touches results-page markup lives in
// this file so a layout change is a one-file fix. Bump the version whenever
// a rule changes; tests pin behaviour against saved fixture pages.

export const ADAPTER_VERSION = 1;

export interface SerpRule {
  id: string;
  // decides whether the current page is a results page at all
  urlPattern: RegExp;
  // organic result blocks, in document order
  resultSelector: string;
  // primary outbound link inside a block
  linkSelector: string;
  // blocks that look like results but are sponsored or navigational
  excludeSelector: string;
}

export const SERP_RULES: SerpRule[] = [
  {
    id: "google-web",
    urlPattern: /^https?:\/\/www\.google\.[^/]+\/search[?/]/,
    resultSelector: "#search .g",
    linkSelector: "a[href]",
    excludeSelector: "[data-text-ad], .sponsored, [aria-label='Sponsored'], [role='navigation']",
  },
];

export const matchRule = (pageUrl: string): SerpRule | undefined =>
  SERP_RULES.find((rule) => rule.urlPattern.test(pageUrl));

export interface CollectedResult {
  element: HTMLElement;
  url: string;
}

export function collectResultUrls(doc: Document): CollectedResult[] {
  const rule = matchRule(doc.location.href);
  if (!rule) return [];
  const pageHost = doc.location.host;
  const out: CollectedResult[] = [];
  for (const block of doc.querySelectorAll<HTMLElement>(rule.resultSelector)) {
    // nested blocks: the outermost one already represents the result
    if (block.parentElement?.closest(rule.resultSelector)) continue;
    if (block.matches(rule.excludeSelector) || block.closest(rule.excludeSelector)) continue;
    const link = block.querySelector<HTMLAnchorElement>(rule.linkSelector);
    if (!link) continue;
    const url = link.href;
    // relative hrefs resolve to the engine's own host: internal navigation
    if (!/^https?:/.test(url) || link.host === pageHost) continue;
    out.push({ element: block, url });
  }
  return out;
}
