import { describe, expect, it } from "vitest";

import { countdown, escapeHtml, meanMedian, odds } from "../src/format.js";

describe("countdown", () => {
  const now = new Date("2026-08-10T12:00:00Z");

  it("renders hh:mm:ss to kickoff", () => {
    expect(countdown("2026-08-10T12:17:40Z", now)).toBe("00:17:40");
    expect(countdown("2026-08-10T15:17:40Z", now)).toBe("03:17:40");
  });

  it("clamps at zero after kickoff", () => {
    expect(countdown("2026-08-10T11:00:00Z", now)).toBe("00:00:00");
  });

  it("ticks down with the clock", () => {
    const later = new Date(now.getTime() + 60_000);
    expect(countdown("2026-08-10T12:17:40Z", later)).toBe("00:16:40");
  });
});

describe("odds formatting", () => {
  it("two decimals for offered odds", () => {
    expect(odds(1.57)).toBe("1.57");
    expect(odds(4.2)).toBe("4.20");
  });

  it("mean/median column mirrors the server precision", () => {
    expect(meanMedian(1.44722222, 1.45)).toBe("1.44722222 / 1.45");
    expect(meanMedian(3.46529411, 3.35)).toBe("3.46529411 / 3.35");
  });
});

describe("escapeHtml", () => {
  it("neutralizes markup in team names", () => {
    expect(escapeHtml(`<b>&"x"`)).toBe("&lt;b&gt;&amp;&quot;x&quot;");
  });
});
