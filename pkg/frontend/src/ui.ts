// DOM wiring: one active session per tab, every state change waits for the
// service response before the view updates.

import {ApiError, Client, NetworkError} from "./api";
import type {ArcEntry} from "./api";
import {
  SessionView,
  arcLabel,
  emptyView,
  sparkline,
  withArcs,
  withError,
  withOffline,
  withReport,
  withSummary,
} from "./store";
import {traceExport} from "./trace";

const SINGLE_CIRCLE = {
  faces: [
    {id: "f0", sign: "+"},
    {id: "f1", sign: "-"},
  ],
  circles: [{id: "c0", faces: ["f0", "f1"]}],
};

export class App {
  private view: SessionView = emptyView();
  private labels: string[] = [];
  private busy = false;

  constructor(
    private readonly client: Client,
    private readonly root: Document,
  ) {}

  async start(): Promise<void> {
    await this.guard(async () => {
      const summary = await this.client.createSession(SINGLE_CIRCLE);
      this.view = withSummary(this.view, summary, this.labels);
      await this.refreshPalette();
    });
  }

  private get sessionId(): string {
    const id = this.view.summary?.id;
    if (!id) throw new Error("no active session");
    return id;
  }

  private async refreshPalette(): Promise<void> {
    this.view = withArcs(this.view, await this.client.arcs(this.sessionId));
    await this.redraw();
  }

  async attach(arc: ArcEntry): Promise<void> {
    await this.guard(async () => {
      try {
        const summary = await this.client.applyMove(this.sessionId, {
          kind: "bypass",
          arc: arc.arc,
        });
        this.labels.push(arcLabel(arc));
        this.view = withSummary(this.view, summary, this.labels);
      } catch (err) {
        if (err instanceof ApiError) {
          // a concurrent undo can strand a palette entry; surface the
          // error and rebuild the palette from the current state
          this.view = withError(this.view, err.detail.code);
        } else {
          throw err;
        }
      }
      await this.refreshPalette();
    });
  }

  async undo(): Promise<void> {
    await this.guard(async () => {
      const summary = await this.client.undo(this.sessionId);
      this.labels.pop();
      this.view = withSummary(this.view, summary, this.labels);
      await this.refreshPalette();
    });
  }

  async normalize(): Promise<void> {
    await this.guard(async () => {
      this.view = withReport(
        this.view,
        await this.client.normalize(this.sessionId),
      );
      await this.redraw();
    });
  }

  exportTrace(): string {
    const summary = this.view.summary;
    if (!summary) throw new Error("no active session");
    return traceExport(summary);
  }

  private async guard(body: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      await body();
    } catch (err) {
      if (err instanceof NetworkError) {
        this.view = withOffline(this.view);
        await this.redraw();
      } else if (err instanceof ApiError) {
        this.view = withError(this.view, err.detail.code);
        await this.redraw();
      } else {
        throw err;
      }
    } finally {
      this.busy = false;
    }
  }

  private async redraw(): Promise<void> {
    const doc = this.root;
    const diagram = doc.getElementById("diagram");
    if (diagram && this.view.summary) {
      diagram.innerHTML = await this.client.renderSvg(this.sessionId);
    }
    const palette = doc.getElementById("palette");
    if (palette) {
      palette.innerHTML = "";
      for (const arc of this.view.arcs) {
        const button = doc.createElement("button");
        button.textContent = arcLabel(arc);
        button.addEventListener("click", () => void this.attach(arc));
        palette.appendChild(button);
      }
    }
    const history = doc.getElementById("history");
    if (history) {
      history.textContent = this.view.history
        .map((h, i) => `${i + 1}. ${h.label} -> ${h.circles} circles`)
        .join("\n");
    }
    const ledger = doc.getElementById("ledger");
    if (ledger && this.view.summary) {
      const s = this.view.summary;
      const spark = sparkline(this.view).join(" ");
      const n = this.view.report ? ` | n = ${this.view.report.n}` : "";
      ledger.textContent =
        `complexity ${s.complexity} | triangles ${s.triangle_ledger}` +
        ` | circles ${spark}${n}`;
    }
    const banner = doc.getElementById("banner");
    if (banner) {
      banner.textContent = this.view.offline
        ? "connection lost, retrying on next action"
        : this.view.error ?? "";
    }
  }
}

export function mount(doc: Document, base: string): App {
  const app = new App(new Client(base), doc);
  doc.getElementById("undo")?.addEventListener("click", () => void app.undo());
  doc
    .getElementById("normalize")
    ?.addEventListener("click", () => void app.normalize());
  void app.start();
  return app;
}
