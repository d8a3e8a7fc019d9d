// View state for one session tab. Reducers fold service responses into the
// view; the store never invents numbers of its own.

import type {ArcEntry, NormalReport, SessionSummary} from "./api";

export interface HistoryEntry {
  label: string;
  circles: number;
}

export interface SessionView {
  summary: SessionSummary | null;
  arcs: ArcEntry[];
  history: HistoryEntry[];
  report: NormalReport | null;
  error: string | null;
  offline: boolean;
}

export function emptyView(): SessionView {
  return {
    summary: null,
    arcs: [],
    history: [],
    report: null,
    error: null,
    offline: false,
  };
}

export function arcLabel(arc: ArcEntry): string {
  if (arc.is_overtwisted) return `type ${arc.type} (overtwisted)`;
  if (arc.is_trivial) return `type ${arc.type} (trivial)`;
  return `type ${arc.type}`;
}

function historyOf(summary: SessionSummary, labels: string[]): HistoryEntry[] {
  // trace[i] is the state before move i; pair each move label with the
  // circle count it produced
  return labels.map((label, i) => ({
    label,
    circles: summary.trace[i + 1]?.circles ?? summary.circles,
  }));
}

export function withSummary(
  view: SessionView,
  summary: SessionSummary,
  moveLabels: string[],
): SessionView {
  return {
    ...view,
    summary,
    history: historyOf(summary, moveLabels),
    error: null,
    offline: false,
  };
}

export function withArcs(view: SessionView, arcs: ArcEntry[]): SessionView {
  return {...view, arcs, error: null, offline: false};
}

export function withReport(view: SessionView, report: NormalReport): SessionView {
  return {...view, report, error: null, offline: false};
}

export function withError(view: SessionView, message: string): SessionView {
  return {...view, error: message};
}

export function withOffline(view: SessionView): SessionView {
  // keep the local history display; only flag the connection
  return {...view, offline: true};
}

export function sparkline(view: SessionView): number[] {
  return view.summary ? view.summary.trace.map((t) => t.circles) : [];
}
