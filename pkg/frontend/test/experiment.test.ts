import { spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { Condition } from "../src/conditions.js";
import {
  ExperimentRunner,
  TlxForm,
  parseLatinSquareCsv,
  scriptFromOrdering,
} from "../src/experiment.js";
import { ProtocolClient } from "../src/protocol.js";
import { FakeEngine, FakeEngineOptions } from "./fake-engine.js";
import { syntheticFrames } from "./helpers.js";

const SEGMENT = { start: 0, end: 60 };
const CLIP = { start: 0, end: 30 };

const TLX_MID: TlxForm = {
  mental: 8, physical: 5, temporal: 6, performance: 7, effort: 9, frustration: 4,
};

function cli(args: string[], input?: string) {
  return spawnSync("poseguide", args, { encoding: "utf8", input });
}

async function runParticipant(
  participant: string,
  ordering: Condition[],
  engineOptions: FakeEngineOptions = {},
  tlx: (condition: Condition) => TlxForm = () => TLX_MID,
) {
  const engine = new FakeEngine(engineOptions);
  const client = new ProtocolClient(engine);
  await client.hello(640, 360);
  const runner = new ExperimentRunner(
    client,
    scriptFromOrdering(participant, ordering, SEGMENT, CLIP),
  );
  for (const trial of runner["script"].trials) {
    const record = await runner.runTrial(trial, syntheticFrames(10), syntheticFrames(30));
    runner.submitTlx(record, tlx(trial.condition));
  }
  return { engine, runner };
}

describe("experiment runner", () => {
  it("applies the counterbalancing row in emitted trial order", async () => {
    const result = cli(["latin-square", "--k", "4", "--replicates", "3"]);
    expect(result.status).toBe(0);
    const square = parseLatinSquareCsv(result.stdout);
    expect(square.length).toBe(12);
    const ordering = square[1]!;

    const { engine } = await runParticipant("p01", ordering);
    const conditionsSent = engine.sent
      .filter((m) => m.type === "configure" && typeof m.condition === "string")
      .map((m) => m.condition as Condition);
    // two configures per trial (training reset + trial) with the same condition
    const perTrial = conditionsSent.filter((_, i) => i % 2 === 0);
    expect(perTrial).toEqual(ordering);
  });

  it("never enables the live error readout in trial mode", async () => {
    const { engine, runner } = await runParticipant("p01", ["C1", "C2", "C3", "C4"]);
    for (const msg of engine.sent.filter((m) => m.type === "configure")) {
      expect(msg.show_error_live).toBe(false);
    }
    // nothing error-valued ever reaches the participant-facing view
    expect(Object.keys(runner.view)).toEqual(["condition", "phase"]);
    expect(engine.sent.some((m) => m.type === "end_trial")).toBe(true);
  });

  it("produces one session file and one CSV row per condition", async () => {
    const { runner } = await runParticipant("p01", ["C2", "C4", "C1", "C3"]);
    expect(runner.records.map((r) => r.sessionFile).filter(Boolean).length).toBe(4);
    const lines = runner.exportCsv().trim().split("\n");
    expect(lines.length).toBe(5); // header + 4 rows
    expect(lines[0]).toMatch(/^participant,condition,mean_error_rad,frames_scored/);
  });

  it("exports TLX sliders at maximum as scale_max", async () => {
    const max: TlxForm = {
      mental: 20, physical: 20, temporal: 20, performance: 20, effort: 20, frustration: 20,
    };
    const { runner } = await runParticipant("p01", ["C1", "C2", "C3", "C4"], {}, () => max);
    for (const line of runner.exportCsv().trim().split("\n").slice(1)) {
      expect(line.split(",").slice(-6)).toEqual(["20", "20", "20", "20", "20", "20"]);
    }
  });

  it("rejects out-of-range TLX and non-permutation rankings", async () => {
    const { runner } = await runParticipant("p01", ["C1", "C2", "C3", "C4"]);
    expect(() => runner.submitTlx(runner.records[0]!, { ...TLX_MID, mental: 25 }))
      .toThrow(RangeError);
    expect(() => runner.submitRanking({ C1: 1, C2: 1, C3: 3, C4: 4 })).toThrow();
    runner.submitRanking({ C1: 3, C2: 1, C3: 4, C4: 2 });
    const ranksCsv = runner.exportRanksCsv();
    expect(ranksCsv).toBe("participant,C1,C2,C3,C4\np01,3,1,4,2\n");
    const ranksPath = join(mkdtempSync(join(tmpdir(), "poseguide-ui-")), "ranks.csv");
    writeFileSync(ranksPath, ranksCsv);
    const result = cli(["analyze", "ranks", "--input", ranksPath]);
    expect(result.status).toBe(0);
    expect(result.stdout).toContain("ordering_best_first: C2,C4,C1,C3");
  });

  it("marks a trial invalid when the connection drops mid-trial", async () => {
    const engine = new FakeEngine();
    const client = new ProtocolClient(engine);
    await client.hello(640, 360);
    const runner = new ExperimentRunner(
      client,
      scriptFromOrdering("p01", ["C1", "C2", "C3", "C4"], SEGMENT, CLIP),
    );
    const frames = syntheticFrames(30);
    async function* dropping() {
      yield frames[0]!;
      engine.kill();
      yield frames[1]!;
    }
    const record = await runner.runTrial(runner["script"].trials[0]!, [], dropping());
    expect(record.status).toBe("invalid");
    expect(record.summary).toBeNull();
  });

  it("exports a study CSV that the analysis pipeline accepts (df = (3, 33))", async () => {
    const conditionShift: Record<string, number> = { C1: 0.188, C2: 0.146, C3: 0.17, C4: 0.17 };
    let noiseState = 42;
    const noise = () => {
      // deterministic LCG so the table is reproducible but non-degenerate
      noiseState = (noiseState * 1103515245 + 12345) % 2147483648;
      return (noiseState / 2147483648 - 0.5) * 0.02;
    };
    const csvBodies: string[] = [];
    let header = "";
    for (let p = 0; p < 12; p++) {
      const { runner } = await runParticipant(
        `p${String(p).padStart(2, "0")}`,
        ["C1", "C2", "C3", "C4"],
        { meanError: (condition) => conditionShift[condition]! + noise() },
        () => ({ ...TLX_MID, mental: Math.min(20, Math.max(0, 8 + noise() * 200)) }),
      );
      const lines = runner.exportCsv().trim().split("\n");
      header = lines[0]!;
      csvBodies.push(...lines.slice(1));
    }
    const dir = mkdtempSync(join(tmpdir(), "poseguide-ui-"));
    const csvPath = join(dir, "study.csv");
    writeFileSync(csvPath, [header, ...csvBodies].join("\n") + "\n");

    const result = cli(["analyze", "anova", "--input", csvPath, "--measure", "mean_error_rad"]);
    expect(result.status).toBe(0);
    expect(result.stdout).toContain("df = (3, 33)");
    expect(result.stdout).toContain("cond_a,cond_b,mean_diff,q,significant_at_05");

    const tlxResult = cli(["analyze", "tlx", "--input", csvPath]);
    expect(tlxResult.status).toBe(0);
    expect(tlxResult.stdout.trim().split("\n").length).toBe(5);
  });
});
