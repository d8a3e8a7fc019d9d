import {describe, expect, it} from "vitest";

import type {ArcEntry, SessionSummary} from "../src/api";
import {
  arcLabel,
  emptyView,
  sparkline,
  withArcs,
  withError,
  withOffline,
  withSummary,
} from "../src/store";
import {traceExport} from "../src/trace";

function summary(circles: number[]): SessionSummary {
  return {
    id: "s",
    state: "aa".repeat(32),
    circles: circles[circles.length - 1],
    moves: circles.length - 1,
    complexity: Math.max(...circles),
    triangle_ledger: 0,
    trace: circles.map((c, i) => ({state: `${i}`.repeat(4), circles: c})),
  };
}

const arc: ArcEntry = {
  code: "00",
  arc: {},
  type: "I",
  delta: 2,
  is_trivial: false,
  is_overtwisted: true,
};

describe("session view", () => {
  it("pairs history labels with the circle counts they produced", () => {
    const view = withSummary(emptyView(), summary([1, 3, 1]), ["a", "b"]);
    expect(view.history).toEqual([
      {label: "a", circles: 3},
      {label: "b", circles: 1},
    ]);
  });

  it("exposes the circle sparkline straight from the trace", () => {
    const view = withSummary(emptyView(), summary([1, 3, 1, 1]), []);
    expect(sparkline(view)).toEqual([1, 3, 1, 1]);
  });

  it("keeps history on connection loss", () => {
    let view = withSummary(emptyView(), summary([1, 3]), ["a"]);
    view = withOffline(view);
    expect(view.offline).toBe(true);
    expect(view.history).toHaveLength(1);
  });

  it("clears errors on the next successful response", () => {
    let view = withError(emptyView(), "inadmissible_arc");
    view = withArcs(view, [arc]);
    expect(view.error).toBeNull();
  });

  it("labels arcs by type and flags", () => {
    expect(arcLabel(arc)).toBe("type I (overtwisted)");
    expect(arcLabel({...arc, is_overtwisted: false})).toBe("type I");
  });
});

describe("trace export", () => {
  it("formats one state per line with a trailing newline", () => {
    const text = traceExport(summary([1, 3]));
    expect(text).toBe("0000 1\n1111 3\n");
  });
});
