"""TCP line server for the scoring protocol.

One session per connection; connections are independent. Within a connection
messages are processed strictly in arrival order.
"""

from __future__ import annotations

import asyncio
import json
import logging
import time
from datetime import datetime, timezone
from pathlib import Path

from .protocol import ProtocolError, SessionState, decode_client, handle
from .session import Track
from .trackio import read_track, recorded_track, write_track

log = logging.getLogger(__name__)


class ScoringServer:
    def __init__(
        self,
        trainer_path: str | None = None,
        record_dir: str | Path | None = None,
    ):
        self.trainer: Track | None = read_track(trainer_path) if trainer_path else None
        self.trainer_path = trainer_path or ""
        self.record_dir = Path(record_dir) if record_dir else None
        self._session_counter = 0

    def _new_state(self) -> SessionState:
        state = SessionState()
        if self.trainer is not None:
            state.trainer = self.trainer
            state.trainer_uri = self.trainer_path
        return state

    def _record(self, state: SessionState) -> str | None:
        if self.record_dir is None or state.session is None or not state.session.recording:
            return None
        self.record_dir.mkdir(parents=True, exist_ok=True)
        self._session_counter += 1
        name = f"session-{self._session_counter:04d}.poses.jsonl"
        track = recorded_track(
            state.session,
            trainer_uri=state.trainer_uri,
            created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            events=state.events,
        )
        path = self.record_dir / name
        write_track(track, path)
        return str(path)

    async def serve_connection(self, reader: asyncio.StreamReader,
                               writer: asyncio.StreamWriter) -> None:
        state = self._new_state()
        peer = writer.get_extra_info("peername")
        log.info("connection from %s", peer)
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                if not line.strip():
                    continue
                try:
                    msg = decode_client(line)
                except ProtocolError as exc:
                    responses = [exc.to_message()]
                else:
                    responses = handle(state, msg, wall_clock=time.monotonic())
                    if msg["type"] == "end_trial" and responses and responses[0].get("type") == "summary":
                        recorded_as = self._record(state)
                        if recorded_as:
                            responses[0]["recorded_as"] = recorded_as
                        state.session.reset_trial()
                        state.events = []
                for response in responses:
                    writer.write((json.dumps(response, separators=(",", ":")) + "\n").encode())
                await writer.drain()
        except (ConnectionResetError, asyncio.IncompleteReadError):
            pass
        finally:
            writer.close()
            log.info("connection from %s closed", peer)

    async def run(self, host: str, port: int) -> None:
        server = await asyncio.start_server(self.serve_connection, host, port)
        addrs = ", ".join(str(s.getsockname()) for s in server.sockets)
        log.info("listening on %s", addrs)
        async with server:
            await server.serve_forever()


def serve(listen: str, trainer_path: str | None = None,
          record_dir: str | None = None) -> None:
    """Blocking entry point: run the scoring service on host:port."""
    host, _, port_text = listen.rpartition(":")
    host = host or "127.0.0.1"
    port = int(port_text)
    server = ScoringServer(trainer_path=trainer_path, record_dir=record_dir)
    asyncio.run(server.run(host, port))
