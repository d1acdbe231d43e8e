"""Relay acceptance: byte transparency against a direct TCP connection
(secondary criterion 12)."""

import random
import socket
import subprocess
import sys
from pathlib import Path

import pytest

from casbridge.link import Request, serve_cas, start_in_thread

RELAY = Path(__file__).parent / "relay.py"


@pytest.fixture(scope="module")
def server():
    srv = serve_cas("127.0.0.1:0")
    start_in_thread(srv)
    host, port = srv.server_address
    yield f"{host}:{port}"
    srv.shutdown()


def corpus(n=200) -> bytes:
    rng = random.Random(12)
    lines = []
    for i in range(1, n + 1):
        a, b = rng.randint(-99, 99), rng.randint(-99, 99)
        code = rng.choice([
            f"Plus[{a}, {b}]",
            f"Times[{a}, Plus[x, {b}]]",
            f"Factor[Plus[Power[x, 2], Times[{2 * a}, x], {a * a}]]",
            f"Divide[{a}, {b if b else 1}]",
            f"{a} < {b}",
        ])
        lines.append(Request(i, "eval", code).to_json().encode() + b"\n")
    return b"".join(lines)


def direct_responses(addr: str, payload: bytes) -> bytes:
    host, _, port = addr.rpartition(":")
    out = []
    with socket.create_connection((host, int(port))) as sock:
        reader = sock.makefile("rb")
        writer = sock.makefile("wb")
        for line in payload.splitlines(keepends=True):
            writer.write(line)
            writer.flush()
            out.append(reader.readline())
    return b"".join(out)


def test_relay_byte_transparency_on_corpus(server):
    payload = corpus(200)
    expected = direct_responses(server, payload)
    result = subprocess.run(
        [sys.executable, str(RELAY), "--server", server],
        input=payload, capture_output=True, timeout=120)
    assert result.returncode == 0
    assert result.stdout == expected


def test_empty_stdin_exits_cleanly(server):
    result = subprocess.run(
        [sys.executable, str(RELAY), "--server", server],
        input=b"", capture_output=True, timeout=30)
    assert result.returncode == 0
    assert result.stdout == b""


def test_server_down_exits_2_no_stdout():
    result = subprocess.run(
        [sys.executable, str(RELAY), "--server", "127.0.0.1:1",
         "--timeout", "0.2"],
        input=b'{"id":1,"op":"eval","payload":"1"}\n',
        capture_output=True, timeout=30)
    assert result.returncode == 2
    assert result.stdout == b""
    assert b"cannot connect" in result.stderr


def test_order_preserved(server):
    payload = b"".join(Request(i, "eval", f"Plus[{i}, {i}]").to_json().encode()
                       + b"\n" for i in range(1, 31))
    result = subprocess.run(
        [sys.executable, str(RELAY), "--server", server],
        input=payload, capture_output=True, timeout=60)
    assert result.returncode == 0
    import json

    lines = result.stdout.decode().splitlines()
    assert [json.loads(l)["id"] for l in lines] == list(range(1, 31))
    assert [json.loads(l)["result"]["v"] for l in lines] == \
        [str(2 * i) for i in range(1, 31)]
