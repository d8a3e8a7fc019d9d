// Trace export in the exact byte format of the command line `trace`
// subcommand: one "<canonical hex> <circle count>" line per state,
// terminated by a newline.

import type {SessionSummary} from "./api";

export function traceExport(summary: SessionSummary): string {
  return summary.trace.map((t) => `${t.state} ${t.circles}`).join("\n") + "\n";
}
