// Typed client for the session service. Every method mirrors one endpoint;
// nothing here computes topology.

export interface TraceEntry {
  state: string;
  circles: number;
}

export interface SessionSummary {
  id: string;
  state: string;
  circles: number;
  moves: number;
  complexity: number;
  triangle_ledger: number;
  trace: TraceEntry[];
}

export interface ArcEntry {
  code: string;
  arc: unknown;
  type: "I" | "II" | "III" | "IV";
  delta: number;
  is_trivial: boolean;
  is_overtwisted: boolean;
}

export interface NormalReport {
  n: number;
  r: number;
  steps: number;
}

export interface ServiceError {
  code: string;
  message: string;
  move_index?: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: ServiceError,
  ) {
    super(detail.message);
  }
}

export class NetworkError extends Error {}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url, init);
  } catch (err) {
    throw new NetworkError(String(err));
  }
  if (!resp.ok) {
    let detail: ServiceError = {code: "unknown", message: resp.statusText};
    try {
      detail = (await resp.json()).error ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  const text = await resp.text();
  return (text ? JSON.parse(text) : {}) as T;
}

export class Client {
  constructor(readonly base: string) {}

  createSession(initial: unknown, moves?: unknown[]): Promise<SessionSummary> {
    const body: Record<string, unknown> = {initial};
    if (moves) body.moves = moves;
    return request(`${this.base}/sessions`, {
      method: "POST",
      headers: {"content-type": "application/json"},
      body: JSON.stringify(body),
    });
  }

  show(id: string): Promise<SessionSummary> {
    return request(`${this.base}/sessions/${id}`);
  }

  async arcs(id: string): Promise<ArcEntry[]> {
    const out = await request<{arcs: ArcEntry[]}>(
      `${this.base}/sessions/${id}/arcs`,
    );
    return out.arcs;
  }

  applyMove(id: string, move: unknown): Promise<SessionSummary> {
    return request(`${this.base}/sessions/${id}/moves`, {
      method: "POST",
      headers: {"content-type": "application/json"},
      body: JSON.stringify(move),
    });
  }

  undo(id: string): Promise<SessionSummary> {
    return request(`${this.base}/sessions/${id}/undo`, {method: "POST"});
  }

  redo(id: string): Promise<SessionSummary> {
    return request(`${this.base}/sessions/${id}/redo`, {method: "POST"});
  }

  normalize(id: string): Promise<NormalReport> {
    return request(`${this.base}/sessions/${id}/normalize`, {method: "POST"});
  }

  async renderSvg(id: string): Promise<string> {
    const resp = await fetch(`${this.base}/sessions/${id}/render.svg`);
    if (!resp.ok) throw new ApiError(resp.status, {code: "render", message: resp.statusText});
    return resp.text();
  }

  async certificate(id: string): Promise<string> {
    const resp = await fetch(`${this.base}/sessions/${id}/certificate`);
    if (!resp.ok) throw new ApiError(resp.status, {code: "certificate", message: resp.statusText});
    return resp.text();
  }

  exportMoves(id: string): Promise<unknown> {
    return request(`${this.base}/sessions/${id}/export`);
  }
}
