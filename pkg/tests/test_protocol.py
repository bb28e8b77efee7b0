"""gp/1 protocol: message round trips, sessions, batches, error paths."""
import json
import threading

import numpy as np
import pytest

from puzzlegraph.core import GridSpec, PuzzleKind, write_corpus
from puzzlegraph.graphenc import encode
from puzzlegraph.protocol import (
    ProtocolError, ProtocolServer, decode_observation, encode_observation,
)
from puzzlegraph.rules import PuzzleState
from puzzlegraph.server import serve_stdio, serve_tcp, stdio_client, tcp_client
from puzzlegraph.solvegen import generate


def rpc(server, cmd, payload=None, req_id=1):
    line = json.dumps({"id": req_id, "cmd": cmd, "payload": payload or {}})
    return json.loads(server.handle_line(line))


class TestMessages:
    def test_hello(self):
        resp = rpc(ProtocolServer(), "hello")
        assert resp["ok"]
        assert resp["payload"]["protocol_version"] == "gp/1"
        assert len(resp["payload"]["kinds"]) == 6

    def test_response_id_matches(self):
        resp = rpc(ProtocolServer(), "hello", req_id="abc-1")
        assert resp["id"] == "abc-1"

    def test_unknown_cmd(self):
        resp = rpc(ProtocolServer(), "teleport")
        assert not resp["ok"]
        assert resp["error"]["code"] == "unknown_cmd"

    def test_malformed_json_is_answered(self):
        server = ProtocolServer()
        resp = json.loads(server.handle_line("this is not json"))
        assert not resp["ok"]
        assert resp["error"]["code"] == "bad_request"

    def test_observation_round_trip(self, kind, training_instance):
        obs = encode(PuzzleState.initial(training_instance))
        back = decode_observation(encode_observation(obs))
        assert back.kind == obs.kind
        assert np.array_equal(back.node_features, obs.node_features)
        assert np.array_equal(back.edges, obs.edges)
        assert np.array_equal(back.edge_features, obs.edge_features)
        assert np.array_equal(back.decision_mask, obs.decision_mask)
        assert back.action_count == obs.action_count


class TestSessions:
    def test_reset_step_loop(self):
        server = ProtocolServer()
        r = rpc(server, "reset", {"kind": "net", "width": 4, "height": 4,
                                  "episode_seed": 1})
        assert r["ok"]
        n = r["payload"]["num_decision"]
        s = rpc(server, "step", {"actions": [3] * n})
        assert s["ok"]
        assert s["payload"]["reward"] == 0.0
        assert s["payload"]["done"] is False

    def test_wrong_length_actions(self):
        server = ProtocolServer()
        rpc(server, "reset", {"kind": "net", "width": 4, "height": 4})
        resp = rpc(server, "step", {"actions": [3] * 7})
        assert not resp["ok"]
        assert resp["error"]["code"] == "bad_request"

    def test_step_without_session(self):
        resp = rpc(ProtocolServer(), "step", {"actions": [0]})
        assert resp["error"]["code"] == "bad_request"

    def test_session_isolation(self):
        server = ProtocolServer()
        a = rpc(server, "reset", {"session": "a", "kind": "net", "width": 4,
                                  "height": 4, "episode_seed": 10,
                                  "include_solution": True, "include_state": True})
        b = rpc(server, "reset", {"session": "b", "kind": "net", "width": 4,
                                  "height": 4, "episode_seed": 20,
                                  "include_solution": True})
        # stepping session b must not disturb session a
        rpc(server, "step", {"session": "b", "actions": [0] * 16})
        stepped_a = rpc(server, "step", {"session": "a", "actions": [3] * 16})
        assert stepped_a["payload"]["values"] == a["payload"]["values"]
        a2 = rpc(server, "reset", {"session": "a2", "kind": "net", "width": 4,
                                   "height": 4, "episode_seed": 10,
                                   "include_solution": True})
        assert a["payload"]["solution"] == a2["payload"]["solution"]
        assert a["payload"]["solution"] != b["payload"]["solution"]

    def test_close(self):
        server = ProtocolServer()
        rpc(server, "reset", {"session": "x", "kind": "net", "width": 4, "height": 4})
        resp = rpc(server, "close", {"session": "x"})
        assert resp["payload"]["closed"] == ["x"]
        resp = rpc(server, "step", {"session": "x", "actions": [3] * 16})
        assert not resp["ok"]

    def test_reset_from_corpus(self, tmp_path):
        corpus = [generate(PuzzleKind.MOSAIC, GridSpec(4, 4), s) for s in range(3)]
        path = tmp_path / "c.gpz"
        write_corpus(path, corpus)
        server = ProtocolServer()
        r = rpc(server, "reset", {"kind": "mosaic", "width": 4, "height": 4,
                                  "corpus": str(path), "corpus_index": 2,
                                  "include_solution": True})
        assert r["ok"]
        assert r["payload"]["solution"] == corpus[2].solution.tolist()

    def test_solution_hidden_by_default(self):
        server = ProtocolServer()
        r = rpc(server, "reset", {"kind": "mosaic", "width": 4, "height": 4})
        assert "solution" not in r["payload"]


class TestBatches:
    def test_reset_and_step_batch(self):
        server = ProtocolServer()
        items = [{"session": f"s{i}", "kind": "net", "width": 4, "height": 4,
                  "episode_seed": i} for i in range(3)]
        r = rpc(server, "reset_batch", {"items": items})
        assert r["ok"] and len(r["payload"]["items"]) == 3
        steps = [{"session": f"s{i}", "actions": [3] * 16} for i in range(3)]
        s = rpc(server, "step_batch", {"items": steps})
        assert s["ok"]
        assert all(item["reward"] == 0.0 for item in s["payload"]["items"])

    def test_batch_requires_items(self):
        resp = rpc(ProtocolServer(), "reset_batch", {"nope": 1})
        assert resp["error"]["code"] == "bad_request"


class TestTransports:
    def test_stdio_subprocess(self):
        client = stdio_client()
        try:
            assert client.hello()["protocol_version"] == "gp/1"
            payload = client.reset(kind="loopy", width=3, height=3,
                                   episode_seed=2, include_state=True,
                                   include_solution=True)
            obs = decode_observation(payload["observation"])
            assert obs.num_decision == 24
            out = client.step([3] * 24)
            assert out["reward"] == 0.0
        finally:
            client.transport.close()

    def test_tcp_round_trip(self):
        srv = serve_tcp("127.0.0.1", 0)
        port = srv.server_address[1]
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        try:
            client = tcp_client("127.0.0.1", port)
            assert client.hello()["protocol_version"] == "gp/1"
            payload = client.reset(kind="unruly", width=6, height=6, episode_seed=1)
            obs = decode_observation(payload["observation"])
            assert obs.num_decision == 36
            client.transport.close()
        finally:
            srv.shutdown()
            srv.server_close()

    def test_stdio_loop_function(self):
        import io
        req = json.dumps({"id": 9, "cmd": "hello"}) + "\n"
        out = io.StringIO()
        serve_stdio(stdin=io.StringIO(req), stdout=out)
        resp = json.loads(out.getvalue())
        assert resp["ok"] and resp["id"] == 9

    def test_protocol_error_surfaces_in_client(self):
        client = stdio_client()
        try:
            with pytest.raises(ProtocolError):
                client.request("bogus_cmd")
        finally:
            client.transport.close()
