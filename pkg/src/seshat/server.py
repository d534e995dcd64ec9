"""Server entry point: config loading and a uvicorn runner.

Also exposes :class:`ServerHandle`, a background-thread runner used by the
end-to-end tests and handy for embedding the service in scripts.
"""

from __future__ import annotations

import argparse
import socket
import threading
import time

import uvicorn

from .service import ServerConfig, create_app
from .storage import Store


class ServerHandle:
    """A live server on an ephemeral port, stoppable from the launching
    thread. ``url`` is ready once the constructor returns."""

    def __init__(self, config: ServerConfig, store: Store | None = None):
        self.app = create_app(config, store)
        uv_config = uvicorn.Config(
            self.app, host=config.host, port=config.port, log_level="warning"
        )
        self.server = uvicorn.Server(uv_config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)
        self.thread.start()
        deadline = time.time() + 15
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("server failed to start")
            time.sleep(0.01)
        sock: socket.socket = self.server.servers[0].sockets[0]
        host, port = sock.getsockname()[:2]
        self.url = f"http://{host}:{port}"

    def stop(self) -> None:
        self.server.should_exit = True
        self.thread.join(timeout=10)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="seshat-server", description="Run the annotation-campaign service."
    )
    parser.add_argument("--config", help="YAML config file (SESHAT_* env vars override)")
    parser.add_argument("--host")
    parser.add_argument("--port", type=int)
    args = parser.parse_args(argv)

    config = ServerConfig.load(args.config)
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
