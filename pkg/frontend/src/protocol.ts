/** Client for the engine's newline-delimited JSON session protocol.
 *
 * The client is written against a tiny line-transport interface so the same
 * code runs over a WebSocket bridge in the browser and a raw TCP socket in
 * Node (see tcp.ts). The server answers every client message with exactly one
 * message, so requests resolve in FIFO order.
 */

export interface LineTransport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

export interface SummaryMessage {
  type: "summary";
  mean_error: number | null;
  frame_count: number;
  unscored_count: number;
  per_segment_means: Record<string, number | null>;
  duration: number;
  recorded_as?: string;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  detail: string;
}

export type ServerMessage =
  | { type: "welcome"; protocol_version: number }
  | { type: "ack"; of: string }
  | { type: "scored"; user_t: number }
  | { type: "unscored"; user_t: number; reason: string }
  | { type: "score"; user_t: number; trainer_t: number; mean: number | null }
  | SummaryMessage
  | ErrorMessage;

export class ProtocolClosedError extends Error {}

export class ServerError extends Error {
  constructor(readonly code: string, readonly detail: string) {
    super(`${code}: ${detail}`);
    this.name = "ServerError";
  }
}

export interface EngineConfig {
  condition?: string;
  confidence_threshold?: number;
  mirror_user?: boolean;
  aspect_correct?: boolean;
  align_tolerance?: number;
  smoothing_alpha?: number;
  show_error_live?: boolean;
}

export class ProtocolClient {
  private pending: Array<{
    resolve: (msg: ServerMessage) => void;
    reject: (err: Error) => void;
  }> = [];
  private closed = false;

  constructor(private transport: LineTransport) {
    transport.onLine((line) => {
      const waiter = this.pending.shift();
      if (!waiter) return; // unsolicited message; protocol never sends these
      let msg: ServerMessage;
      try {
        msg = JSON.parse(line) as ServerMessage;
      } catch (err) {
        waiter.reject(err as Error);
        return;
      }
      waiter.resolve(msg);
    });
    transport.onClose(() => {
      this.closed = true;
      for (const waiter of this.pending.splice(0)) {
        waiter.reject(new ProtocolClosedError("connection closed"));
      }
    });
  }

  private request(msg: Record<string, unknown>): Promise<ServerMessage> {
    if (this.closed) {
      return Promise.reject(new ProtocolClosedError("connection closed"));
    }
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.transport.send(JSON.stringify(msg));
    });
  }

  private async expect(msg: Record<string, unknown>, type: string): Promise<ServerMessage> {
    const reply = await this.request(msg);
    if (reply.type === "error") {
      throw new ServerError(reply.code, reply.detail);
    }
    if (reply.type !== type) {
      throw new Error(`expected ${type}, got ${reply.type}`);
    }
    return reply;
  }

  async hello(frameWidth: number, frameHeight: number): Promise<void> {
    await this.expect(
      { type: "hello", protocol_version: 1, frame_width: frameWidth, frame_height: frameHeight },
      "welcome",
    );
  }

  async configure(config: EngineConfig): Promise<void> {
    await this.expect({ type: "configure", ...config }, "ack");
  }

  async loadTrainerPath(path: string): Promise<void> {
    await this.expect({ type: "load_trainer", path }, "ack");
  }

  async loadTrainerInline(trackLines: string[]): Promise<void> {
    await this.expect({ type: "load_trainer", track: trackLines }, "ack");
  }

  async play(position: number): Promise<void> {
    await this.expect({ type: "play", position }, "ack");
  }

  async pause(position: number): Promise<void> {
    await this.expect({ type: "pause", position }, "ack");
  }

  async seek(position: number): Promise<void> {
    await this.expect({ type: "seek", position }, "ack");
  }

  /** Stream one estimated pose; resolves with scored/unscored/score. */
  sendFrame(
    tCapture: number,
    keypoints: [string, number, number, number][],
  ): Promise<ServerMessage> {
    return this.request({ type: "frame", t_capture: tCapture, keypoints });
  }

  async endTrial(): Promise<SummaryMessage> {
    return (await this.expect({ type: "end_trial" }, "summary")) as SummaryMessage;
  }

  close(): void {
    this.transport.close();
  }
}
