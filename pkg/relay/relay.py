#!/usr/bin/env python3
"""Stdio-to-TCP relay: forwards each request line from stdin to the
evaluation server and writes the server's response line to stdout,
byte for byte, in order. The relay never parses payloads.

Usage: relay.py --server HOST:PORT [--timeout SECONDS] [--retries N]
"""

from __future__ import annotations

import argparse
import socket
import sys
import time


def parse_args(argv):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--server", required=True, metavar="HOST:PORT")
    parser.add_argument("--timeout", type=float, default=10.0,
                        help="connect timeout in seconds (> 0)")
    parser.add_argument("--retries", type=int, default=1,
                        help="connection attempts before giving up")
    args = parser.parse_args(argv)
    if args.timeout <= 0:
        parser.error("--timeout must be positive")
    if args.retries < 1:
        parser.error("--retries must be at least 1")
    host, sep, port = args.server.rpartition(":")
    if not sep or not port.isdigit():
        parser.error("--server must be HOST:PORT")
    return args, (host or "127.0.0.1", int(port))


def connect(address, timeout, retries):
    last_error = None
    for attempt in range(retries):
        try:
            return socket.create_connection(address, timeout=timeout)
        except OSError as exc:
            last_error = exc
            if attempt + 1 < retries:
                time.sleep(min(0.2 * (attempt + 1), 2.0))
    raise last_error


def relay(sock, stdin, stdout) -> int:
    reader = sock.makefile("rb")
    writer = sock.makefile("wb")
    for line in stdin:
        if not line.strip():
            continue
        writer.write(line if line.endswith(b"\n") else line + b"\n")
        writer.flush()
        response = reader.readline()
        if not response:
            print("relay: server closed the connection", file=sys.stderr)
            return 2
        stdout.write(response)
        stdout.flush()
    return 0


def main(argv=None) -> int:
    args, address = parse_args(argv if argv is not None else sys.argv[1:])
    try:
        sock = connect(address, args.timeout, args.retries)
    except OSError as exc:
        print(f"relay: cannot connect to {args.server}: {exc}",
              file=sys.stderr)
        return 2
    try:
        return relay(sock, sys.stdin.buffer, sys.stdout.buffer)
    finally:
        sock.close()


if __name__ == "__main__":
    sys.exit(main())
