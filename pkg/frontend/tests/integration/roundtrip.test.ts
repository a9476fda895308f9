/** Full round trip against a live service process.
 *
 * Boots `python3 -m firecontain.cli serve`, plays the two-turn containment
 * script on the rank-2 lattice through the typed client, checks that
 * illegal moves come back as structured error codes, and finally feeds the
 * exported trace bytes to the CLI validator. The UI's games are therefore
 * judged by the same referee as every other trace producer.
 */

import { spawn, spawnSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiError, Client } from "../../src/api.js";

const PORT = 8347;
const BASE = `http://127.0.0.1:${PORT}`;

const TURN1 = ["-1,0", "0,1", "1,0"];
const TURN2 = ["-1,-1", "0,-2", "1,-1"];

let server: ChildProcess;
let workDir: string;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    try {
      const response = await fetch(`${BASE}/sessions/warmup-probe/view`);
      if (response.status === 404) {
        return;
      }
    } catch {
      // not listening yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  throw new Error(`service did not come up on ${BASE}`);
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "firecontain-ui-"));
  server = spawn("python3", ["-m", "firecontain.cli", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  await waitForServer();
});

afterAll(() => {
  server?.kill();
  rmSync(workDir, { recursive: true, force: true });
});

describe("live service round trip", () => {
  const client = new Client(BASE);
  let sessionId = "";

  it("creates a lattice game", async () => {
    const created = await client.createSession({
      graph: { kind: "group", group: "free-abelian", params: { rank: 2 } },
      fire: ["0,0"],
      schedule: { C: 3, d: 0 },
    });
    sessionId = created.id;
    expect(created.view.time).toBe(0);
    expect(created.view.budget).toBe(3);
    expect(created.view.fire_size).toBe(1);
    const origin = created.view.vertices.find((v) => v.id === "0,0");
    expect(origin?.status).toBe("burning");
    expect(origin?.layout).toEqual([0, 0]);
  });

  it("rejects illegal picks with structured codes and changes nothing", async () => {
    const burning = (await client.protect(sessionId, ["0,0"]).catch((e: unknown) => e)) as ApiError;
    expect(burning.status).toBe(422);
    expect(burning.body.code).toBe("protecting-burning-vertex");
    expect(burning.body.offending).toEqual(["0,0"]);

    const over = (await client
      .protect(sessionId, ["-1,0", "0,1", "1,0", "0,-1"])
      .catch((e: unknown) => e)) as ApiError;
    expect(over.body.code).toBe("budget-exceeded");
    expect(over.body.offending).toEqual(["-1,0", "0,-1", "0,1", "1,0"]);

    const unknown = (await client.protect(sessionId, ["zebra"]).catch((e: unknown) => e)) as ApiError;
    expect(unknown.body.code).toBe("unknown-vertex");

    const notPending = (await client
      .protect(sessionId, [], ["2,2"])
      .catch((e: unknown) => e)) as ApiError;
    expect(notPending.body.code).toBe("not-pending");

    const view = await client.view(sessionId);
    expect(view.time).toBe(0);
    expect(view.pending).toEqual([]);
    expect(view.fire_size).toBe(1);
  });

  it("404s unknown sessions", async () => {
    const error = (await client.view("no-such-session").catch((e: unknown) => e)) as ApiError;
    expect(error.status).toBe(404);
    expect(error.body.code).toBe("unknown-session");
  });

  it("suggests the greedy frontier picks", async () => {
    const { hint, advisory } = await client.hint(sessionId);
    expect(advisory).toBe(true);
    expect(hint).toEqual(["-1,0", "0,-1", "0,1"]);
  });

  it("contains the fire with the two-turn script", async () => {
    let view = await client.protect(sessionId, TURN1);
    expect(view.pending).toEqual([...TURN1].sort());

    view = await client.step(sessionId);
    expect(view.time).toBe(1);
    expect(view.fire_size).toBe(2);
    expect(view.total_protected).toBe(3);
    expect(view.contained).toBe(false);

    view = await client.protect(sessionId, TURN2);
    view = await client.step(sessionId);
    expect(view.time).toBe(2);
    expect(view.contained).toBe(true);
    expect(view.contained_at).toBe(2);
    expect(view.fire_size).toBe(2);
    expect(view.total_protected).toBe(6);
  });

  it("exports a trace the CLI validator accepts byte-for-byte", async () => {
    const text = await client.trace(sessionId);
    expect(await client.trace(sessionId)).toBe(text);

    const tracePath = join(workDir, "ui-session.trace");
    writeFileSync(tracePath, Buffer.from(text, "utf8"));

    const result = spawnSync(
      "python3",
      ["-m", "firecontain.cli", "validate", "--trace", tracePath],
      { encoding: "utf8" },
    );
    expect(result.status).toBe(0);
    const records = result.stdout
      .trim()
      .split("\n")
      .map((line) => JSON.parse(line) as Record<string, unknown>);
    const verdict = records.find((r) => r.type === "validation");
    expect(verdict?.valid).toBe(true);
    expect(verdict?.turns).toBe(2);
  });
});
