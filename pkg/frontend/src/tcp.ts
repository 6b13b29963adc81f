/** Node TCP line transport; the browser build supplies a WebSocket one instead. */

import * as net from "node:net";

import { LineTransport } from "./protocol.js";

export function connectTcp(host: string, port: number): Promise<LineTransport> {
  return new Promise((resolve, reject) => {
    const socket = net.createConnection({ host, port });
    socket.setEncoding("utf8");
    socket.once("error", reject);
    socket.once("connect", () => {
      socket.removeListener("error", reject);
      let buffer = "";
      let lineHandler: (line: string) => void = () => {};
      let closeHandler: () => void = () => {};
      socket.on("data", (chunk: string) => {
        buffer += chunk;
        let idx;
        while ((idx = buffer.indexOf("\n")) >= 0) {
          const line = buffer.slice(0, idx);
          buffer = buffer.slice(idx + 1);
          if (line !== "") lineHandler(line);
        }
      });
      socket.on("close", () => closeHandler());
      socket.on("error", () => socket.destroy());
      resolve({
        send: (line) => socket.write(line + "\n"),
        onLine: (h) => { lineHandler = h; },
        onClose: (h) => { closeHandler = h; },
        close: () => socket.end(),
      });
    });
  });
}
