import { describe, expect, it } from "vitest";
import { collectResultUrls, matchRule } from "../src/adapter";
import { EXPECTED_URLS, SERP_URL, loadSerpDoc, makeDoc } from "./fixtures";

describe("collectResultUrls", () => {
  it("returns the ten organic results of the saved page in page order", () => {
    const results = collectResultUrls(loadSerpDoc());
    expect(results.map((r) => r.url)).toEqual(EXPECTED_URLS);
    expect(results.map((r) => r.element.id)).toEqual([
      "r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8", "r9", "r10",
    ]);
  });

  it("excludes sponsored blocks", () => {
    const urls = collectResultUrls(loadSerpDoc()).map((r) => r.url);
    expect(urls.some((u) => u.includes("ads.example"))).toBe(false);
  });

  it("excludes internal navigation blocks", () => {
    const urls = collectResultUrls(loadSerpDoc()).map((r) => r.url);
    expect(urls.some((u) => u.includes("google.com"))).toBe(false);
  });

  it("collapses nested result blocks into the outer one", () => {
    const results = collectResultUrls(loadSerpDoc());
    const r5 = results.filter((r) => r.element.id === "r5" || r.element.id === "r5-sub");
    expect(r5).toHaveLength(1);
    expect(r5[0].url).toBe("https://site5.example/national-forests");
  });

  it("yields an empty list on a non-search page", () => {
    const html = "<div id='search'><div class='g'><a href='https://a.example/x'>x</a></div></div>";
    expect(collectResultUrls(makeDoc(html, "https://blog.example/post"))).toEqual([]);
    expect(collectResultUrls(makeDoc(html, "https://www.google.com/maps?q=x"))).toEqual([]);
  });

  it("yields one entry for a single-result page", () => {
    const html = "<div id='search'><div class='g'><a href='https://only.example/hit'>hit</a></div></div>";
    const results = collectResultUrls(makeDoc(html, SERP_URL));
    expect(results.map((r) => r.url)).toEqual(["https://only.example/hit"]);
  });

  it("skips blocks without an outbound link", () => {
    const html =
      "<div id='search'>" +
      "<div class='g' id='empty'><h3>no link here</h3></div>" +
      "<div class='g'><a href='https://real.example/page'>real</a></div>" +
      "</div>";
    const results = collectResultUrls(makeDoc(html, SERP_URL));
    expect(results.map((r) => r.url)).toEqual(["https://real.example/page"]);
  });

  it("matches only configured search url patterns", () => {
    expect(matchRule(SERP_URL)?.id).toBe("google-web");
    expect(matchRule("https://www.google.co.uk/search?q=x")?.id).toBe("google-web");
    expect(matchRule("https://www.google.com/")).toBeUndefined();
    expect(matchRule("https://images.example/search?q=x")).toBeUndefined();
  });
});
