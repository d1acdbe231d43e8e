"""Wire protocol, servers, and the two link kinds."""

import json
import random
import socket
from pathlib import Path

import pytest

from casbridge.cas import MInt, Sym, parse, to_wire
from casbridge.link import (
    CasService,
    InProcessLink,
    ProtocolError,
    RemoteError,
    Request,
    Response,
    TcpLink,
    execute,
    execute_global,
    run_command_using,
    serve_cas,
    serve_kernel,
    start_in_thread,
)

GOLDEN = Path(__file__).parent / "data" / "golden_transcript.jsonl"


@pytest.fixture(scope="module")
def cas_server():
    server = serve_cas("127.0.0.1:0")
    start_in_thread(server)
    host, port = server.server_address
    yield f"{host}:{port}"
    server.shutdown()


@pytest.fixture(scope="module")
def kernel_server():
    server = serve_kernel("127.0.0.1:0")
    start_in_thread(server)
    host, port = server.server_address
    yield f"{host}:{port}"
    server.shutdown()


def tcp_link(addr: str) -> TcpLink:
    host, _, port = addr.rpartition(":")
    return TcpLink(host, int(port))


class TestProtocol:
    def test_request_round_trip(self):
        req = Request(3, "eval", "Plus[1, 2]")
        assert Request.from_json(req.to_json()) == req

    def test_bad_op_rejected(self):
        with pytest.raises(ProtocolError):
            Request(1, "spawn", "x")

    def test_failed_response_needs_error(self):
        with pytest.raises(ProtocolError):
            Response(1, False)

    def test_image_needs_svg(self):
        with pytest.raises(ProtocolError):
            Response(1, True, display="image")


class TestExecute:
    def test_simple(self):
        link = InProcessLink()
        assert execute(link, "2+2") == MInt(4)

    def test_malformed_input_reports_position(self):
        link = InProcessLink()
        with pytest.raises(RemoteError) as err:
            execute(link, "Plus[1, ?]")
        assert "position" in str(err.value)

    def test_matches_direct_engine_on_corpus(self, cas_server):
        from casbridge.link.service import make_engine

        rng = random.Random(60)
        engine = make_engine()
        remote = tcp_link(cas_server)
        try:
            for _ in range(200):
                n1, n2, n3 = (rng.randint(-30, 30) for _ in range(3))
                text = rng.choice([
                    f"Plus[{n1}, {n2}, {n3}]",
                    f"Times[{n1}, Plus[{n2}, x], {n3}]",
                    f"Factor[Plus[Power[x, 2], Times[{2 * n1}, x], {n1 * n1}]]",
                    f"{n1} < {n2}",
                    f"Divide[{n1}, {n2 if n2 else 1}]",
                ])
                direct = engine.evaluate(parse(text),
                                         ctx=engine.fresh_context())
                assert to_wire(execute(remote, text)) == to_wire(direct)
        finally:
            remote.close()


class TestStatelessness:
    def test_fresh_context_cleared(self, cas_server):
        link = tcp_link(cas_server)
        try:
            execute(link, "a = 5")
            assert execute(link, "a") == Sym("a")
        finally:
            link.close()

    def test_global_persists_and_no_cross_leak(self, cas_server):
        a = tcp_link(cas_server)
        b = tcp_link(cas_server)
        try:
            execute_global(a, "q9 = 5")
            assert execute(b, "q9") == MInt(5)
            execute(b, "w3 = 1")
            assert execute(a, "w3") == Sym("w3")
        finally:
            a.close()
            b.close()

    def test_failing_eval_leaves_global_unchanged(self, cas_server):
        link = tcp_link(cas_server)
        try:
            resp = link.request("eval", "Plus[z1 = 9, Unterminated[")
            assert not resp.ok
            assert execute(link, "z1") == Sym("z1")
        finally:
            link.close()

    def test_eval_global_assignments_apply_before_a_later_failure(
            self, cas_server):
        # assignments inside a global request take effect immediately,
        # even when a later part of the same request fails
        link = tcp_link(cas_server)
        try:
            execute_global(link, "Boom[x_] := Boom[x]")
            resp = link.request("eval_global", "List[z2 = 41, Boom[0]]")
            assert not resp.ok
            assert execute(link, "z2") == MInt(41)
        finally:
            link.close()

    def test_golden_transcript(self):
        """The scripted two-connection transcript replays bit-identically."""
        service = CasService()
        for line in GOLDEN.read_text().splitlines():
            entry = json.loads(line)
            request = Request.from_json(json.dumps(entry["request"]))
            response = service.handle(request)
            assert json.loads(response.to_json()) == entry["response"]

    def test_golden_transcript_over_tcp(self, cas_server):
        links = {"A": tcp_link(cas_server), "B": tcp_link(cas_server)}
        try:
            for line in GOLDEN.read_text().splitlines():
                entry = json.loads(line)
                payload = entry["request"]["payload"]
                op = entry["request"]["op"]
                got = links[entry["conn"]].request(op, payload)
                want = dict(entry["response"])
                want["id"] = got.id  # ids are per-connection counters
                assert json.loads(got.to_json()) == want
        finally:
            for link in links.values():
                link.close()


class TestSequencing:
    def test_responses_in_order_with_matching_ids(self, cas_server):
        host, _, port = cas_server.rpartition(":")
        with socket.create_connection((host, int(port))) as sock:
            f = sock.makefile("rw", encoding="utf-8")
            for i in range(1, 21):
                f.write(Request(i, "eval", f"Plus[{i}, {i}]").to_json() + "\n")
            f.flush()
            for i in range(1, 21):
                resp = Response.from_json(f.readline())
                assert resp.id == i and resp.result == {"k": "int",
                                                        "v": str(2 * i)}


class TestRunCommandUsing:
    def test_factor_template(self, env):
        from casbridge.kernel import elaborate, parse_preexpr, prefix_form

        link = InProcessLink()
        e = elaborate(env, parse_preexpr("x^2 - 2*x + 1", env, {}))
        pexpr = run_command_using(
            link, "% // LeanConvert // Activate // Factor", e)
        assert prefix_form(pexpr) == "pow_nat (add (neg one) x) (bit0 one)"

    def test_identity_template_round_trips(self, env):
        from casbridge.kernel import elaborate, parse_preexpr

        link = InProcessLink()
        e = elaborate(env, parse_preexpr("x + 1", env, {}))
        pexpr = run_command_using(link, "%", e)
        assert elaborate(env, pexpr) == e

    def test_missing_placeholder_fails_before_network(self):
        class Exploding:
            def request(self, op, payload):
                raise AssertionError("must not reach the network")

            def close(self):
                pass

        from casbridge.kernel import mk_const

        with pytest.raises(ValueError):
            run_command_using(Exploding(), "no placeholder here",
                              mk_const("real"))

    def test_aux_rules_loaded_into_request_context(self):
        link = InProcessLink()
        result = execute(link, "Wrap[2]",
                         aux_rules=["Wrap[x_] := Plus[x, 1]"])
        assert result == MInt(3)
        # and the definition did not leak into later requests
        assert execute(link, "Wrap[2]") == parse("Wrap[2]")


class TestKernelServer:
    def test_decl_info_over_tcp(self, kernel_server):
        link = tcp_link(kernel_server)
        try:
            resp = link.request("kernel_cmd", {
                "cmd": "get_decl_info", "args": {"name": "pow_two_nonneg"}})
            assert resp.ok and resp.result["kind"] == "axiom"
        finally:
            link.close()

    def test_prove_over_tcp(self, kernel_server):
        link = tcp_link(kernel_server)
        try:
            resp = link.request("kernel_cmd", {
                "cmd": "prove",
                "args": {"source": "Implies[Or[P, Q], Not[And[Not[P], "
                                    "Not[Q]]]]",
                         "tactic": "intuit"}})
            assert resp.ok and resp.result["status"] == "proved"
            assert resp.result["explode"]
        finally:
            link.close()

    def test_linarith_over_tcp(self, kernel_server):
        link = tcp_link(kernel_server)
        try:
            resp = link.request("kernel_cmd", {
                "cmd": "run_tactic",
                "args": {"name": "linarith", "oracle": "cas",
                         "hyps": ["2*x < 3*y", "-4*x + 2*z < 0",
                                  "12*y - 4*z < 0"]}})
            assert resp.ok and resp.result["verified"]
            assert resp.result["certificate"] == ["4", "2", "1"]
        finally:
            link.close()

    def test_axiomatize_isolated_per_connection(self, kernel_server):
        a = tcp_link(kernel_server)
        b = tcp_link(kernel_server)
        try:
            resp = a.request("kernel_cmd", {
                "cmd": "run_tactic",
                "args": {"name": "axiomatize", "decl_name": "cas.fact",
                         "statement": "1 < 2", "source": "test"}})
            assert resp.ok and resp.result["trusted"] == ["cas.fact"]
            info_b = b.request("kernel_cmd", {
                "cmd": "get_decl_info", "args": {"name": "cas.fact"}})
            assert not info_b.ok
        finally:
            a.close()
            b.close()

    def test_explode_of_prelude_theorem(self, kernel_server):
        link = tcp_link(kernel_server)
        try:
            resp = link.request("kernel_cmd", {
                "cmd": "explode", "args": {"name": "imp_self"}})
            assert resp.ok
            rules = [s["rule"] for s in resp.result["steps"]]
            assert "assumption" in rules
        finally:
            link.close()
