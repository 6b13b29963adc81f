/** Experiment runner: ordered trials, TLX forms, ranking, and CSV export.
 *
 * The exported CSV uses the same header as the engine's score reports, so the
 * `poseguide analyze` subcommands consume it directly.
 */

import { Condition } from "./conditions.js";
import {
  ProtocolClient,
  ProtocolClosedError,
  SummaryMessage,
} from "./protocol.js";
import { SEGMENTS } from "./skeleton.js";

export const TLX_SUBSCALES = [
  "mental", "physical", "temporal", "performance", "effort", "frustration",
] as const;

export type TlxSubscale = (typeof TLX_SUBSCALES)[number];
export type TlxForm = Record<TlxSubscale, number>;

export interface ClipRange {
  start: number;
  end: number;
}

export interface Trial {
  condition: Condition;
  /** Segment of the tutorial video scored during the trial. */
  videoSegment: ClipRange;
  /** Short warm-up clip played (unscored) before the trial proper. */
  trainingClip: ClipRange;
}

export interface ExperimentScript {
  participant: string;
  trials: Trial[];
  tlxScaleMax: number;
}

export interface StreamedFrame {
  t: number;
  keypoints: [string, number, number, number][];
}

export interface TrialRecord {
  condition: Condition;
  status: "completed" | "invalid";
  summary: SummaryMessage | null;
  tlx: TlxForm | null;
  sessionFile: string | null;
}

/** What the participant-facing screen may show. Never carries error values. */
export interface ParticipantView {
  condition: Condition | null;
  phase: "idle" | "training" | "trial" | "form" | "ranking" | "done";
}

export function parseLatinSquareCsv(csv: string): Condition[][] {
  return csv
    .trim()
    .split("\n")
    .map((line) => line.split(",") as Condition[]);
}

/** Build a one-condition-per-trial script from a counterbalancing row. */
export function scriptFromOrdering(
  participant: string,
  ordering: Condition[],
  videoSegment: ClipRange,
  trainingClip: ClipRange,
  tlxScaleMax = 20,
): ExperimentScript {
  const seen = new Set(ordering);
  if (seen.size !== ordering.length) {
    throw new Error("ordering must contain each condition once");
  }
  return {
    participant,
    tlxScaleMax,
    trials: ordering.map((condition) => ({ condition, videoSegment, trainingClip })),
  };
}

export class ExperimentRunner {
  readonly records: TrialRecord[] = [];
  readonly view: ParticipantView = { condition: null, phase: "idle" };
  private ranking: Partial<Record<Condition, number>> | null = null;

  constructor(
    private client: ProtocolClient,
    private script: ExperimentScript,
  ) {}

  /**
   * One trial: apply the condition, play the training clip unscored, then
   * stream the trial segment and collect the summary. Live error display is
   * forced off; the summary never reaches the participant view.
   */
  async runTrial(
    trial: Trial,
    trainingFrames: AsyncIterable<StreamedFrame> | Iterable<StreamedFrame>,
    trialFrames: AsyncIterable<StreamedFrame> | Iterable<StreamedFrame>,
  ): Promise<TrialRecord> {
    const record: TrialRecord = {
      condition: trial.condition,
      status: "invalid",
      summary: null,
      tlx: null,
      sessionFile: null,
    };
    this.records.push(record);
    this.view.condition = trial.condition;
    try {
      await this.client.configure({
        condition: trial.condition,
        show_error_live: false,
      });

      this.view.phase = "training";
      await this.client.play(trial.trainingClip.start);
      for await (const frame of trainingFrames) {
        await this.client.sendFrame(frame.t, frame.keypoints);
      }
      await this.client.pause(trial.trainingClip.end);

      // A fresh configure resets the engine trial so warm-up frames never
      // leak into the scored session.
      await this.client.configure({
        condition: trial.condition,
        show_error_live: false,
      });
      this.view.phase = "trial";
      await this.client.play(trial.videoSegment.start);
      for await (const frame of trialFrames) {
        await this.client.sendFrame(frame.t, frame.keypoints);
      }
      const summary = await this.client.endTrial();
      record.summary = summary;
      record.sessionFile = summary.recorded_as ?? null;
      record.status = "completed";
    } catch (err) {
      if (err instanceof ProtocolClosedError) {
        record.status = "invalid"; // caller should prompt to redo the trial
        return record;
      }
      throw err;
    } finally {
      this.view.phase = "form";
    }
    return record;
  }

  submitTlx(record: TrialRecord, form: TlxForm): void {
    for (const sub of TLX_SUBSCALES) {
      const v = form[sub];
      if (!(v >= 0 && v <= this.script.tlxScaleMax)) {
        throw new RangeError(`${sub} out of range [0, ${this.script.tlxScaleMax}]`);
      }
    }
    record.tlx = { ...form };
  }

  submitRanking(ranking: Record<Condition, number>): void {
    const ranks = Object.values(ranking).sort((a, b) => a - b);
    const expected = this.script.trials.map((_, i) => i + 1);
    if (ranks.length !== expected.length || !ranks.every((r, i) => r === expected[i])) {
      throw new Error("ranking must assign each rank 1..k exactly once");
    }
    this.ranking = { ...ranking };
    this.view.phase = "done";
  }

  /** One CSV row per completed trial, engine report format. */
  exportCsv(): string {
    const header = [
      "participant", "condition", "mean_error_rad", "frames_scored", "frames_unscored",
      ...SEGMENTS.map(([id]) => id),
      ...TLX_SUBSCALES.map((s) => "tlx_" + s),
    ];
    const lines = [header.join(",")];
    for (const record of this.records) {
      if (record.status !== "completed" || !record.summary) continue;
      const s = record.summary;
      const cells = [
        this.script.participant,
        record.condition,
        s.mean_error === null ? "" : String(s.mean_error),
        String(s.frame_count),
        String(s.unscored_count),
        ...SEGMENTS.map(([id]) => {
          const v = s.per_segment_means[id];
          return v === null || v === undefined ? "" : String(v);
        }),
        ...TLX_SUBSCALES.map((sub) =>
          record.tlx === null ? "" : String(record.tlx[sub]),
        ),
      ];
      lines.push(cells.join(","));
    }
    return lines.join("\n") + "\n";
  }

  /** Ranking CSV for `analyze ranks`: participant,<cond>,... with rank values. */
  exportRanksCsv(): string {
    if (!this.ranking) throw new Error("no ranking submitted");
    const conditions = this.script.trials
      .map((t) => t.condition)
      .slice()
      .sort();
    const header = ["participant", ...conditions].join(",");
    const row = [
      this.script.participant,
      ...conditions.map((c) => String(this.ranking![c])),
    ].join(",");
    return header + "\n" + row + "\n";
  }
}
