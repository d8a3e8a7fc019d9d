// End-to-end round trip against a real service instance: the scripted
// session (attach overtwisted, attach the merging arc, attach the closing
// arc, normalize) must display exactly what the command line reports on the
// identical move file.

import {execFileSync, spawn, type ChildProcess} from "node:child_process";
import {mkdtempSync, writeFileSync} from "node:fs";
import {tmpdir} from "node:os";
import {join} from "node:path";
import {afterAll, beforeAll, describe, expect, it} from "vitest";

import {Client} from "../src/api";
import {traceExport} from "../src/trace";

const PORT = 8912;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO = join(__dirname, "..", "..");

const SINGLE_CIRCLE = {
  faces: [
    {id: "f0", sign: "+"},
    {id: "f1", sign: "-"},
  ],
  circles: [{id: "c0", faces: ["f0", "f1"]}],
};

let service: ChildProcess;

async function waitUp(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${BASE}/sessions/none`);
      if (resp.status === 404) return;
    } catch {
      // not listening yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-m", "uvicorn", "bypasscalc.service:app", "--port", String(PORT)],
    {cwd: REPO, stdio: "ignore"},
  );
  await waitUp();
}, 30000);

afterAll(() => {
  service.kill();
});

describe("scripted session parity with the command line", () => {
  it("replays the minimal triangle and agrees byte for byte", async () => {
    const client = new Client(BASE);
    let summary = await client.createSession(SINGLE_CIRCLE);

    // attach the overtwisted arc from the palette
    let arcs = await client.arcs(summary.id);
    const overtwisted = arcs.find((a) => a.is_overtwisted);
    expect(overtwisted).toBeDefined();
    summary = await client.applyMove(summary.id, {
      kind: "bypass",
      arc: overtwisted!.arc,
    });
    expect(summary.circles).toBe(3);

    // the palette regenerates; attach the unique merging arc
    arcs = await client.arcs(summary.id);
    const merging = arcs.filter((a) => a.type === "IV");
    expect(merging).toHaveLength(1);
    summary = await client.applyMove(summary.id, {
      kind: "bypass",
      arc: merging[0].arc,
    });
    expect(summary.circles).toBe(1);

    // close the triangle with a trivial attachment
    arcs = await client.arcs(summary.id);
    const closing = arcs.find((a) => a.is_trivial);
    expect(closing).toBeDefined();
    summary = await client.applyMove(summary.id, {
      kind: "bypass",
      arc: closing!.arc,
    });

    const report = await client.normalize(summary.id);
    expect(report.n).toBe(1);

    // byte-equal trace export versus the CLI on the identical move file
    const moveFile = join(mkdtempSync(join(tmpdir(), "bypass-")), "seq.json");
    const exported = await client.exportMoves(summary.id);
    writeFileSync(moveFile, JSON.stringify(exported));
    const cliTrace = execFileSync(
      "python3",
      ["-m", "bypasscalc.cli", "trace", moveFile],
      {cwd: REPO},
    ).toString();
    expect(traceExport(summary)).toBe(cliTrace);

    const cliReport = JSON.parse(
      execFileSync(
        "python3",
        ["-m", "bypasscalc.cli", "normalize", moveFile],
        {cwd: REPO},
      ).toString(),
    );
    expect(report).toEqual(cliReport);
  }, 30000);

  it("undo mirrors the service stack", async () => {
    const client = new Client(BASE);
    const fresh = await client.createSession(SINGLE_CIRCLE);
    const arcs = await client.arcs(fresh.id);
    const before = await client.show(fresh.id);
    await client.applyMove(fresh.id, {kind: "bypass", arc: arcs[0].arc});
    const undone = await client.undo(fresh.id);
    expect(undone).toEqual(before);
  });
});
