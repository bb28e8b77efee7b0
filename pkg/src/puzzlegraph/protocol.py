"""The gp/1 environment protocol: newline-delimited JSON messages.

Request:  {"id": <int|str>, "cmd": <str>, "payload": {...}}
Response: {"id": <same>, "ok": true,  "payload": {...}}
          {"id": <same>, "ok": false, "error": {"code": <str>, "message": <str>}}

Commands:
  hello       -> {protocol_version, kinds, package_version}
  reset       payload: {session?, kind, width, height, seed?, reward_mode?,
                        horizon?, corpus?, corpus_index?, normalize_rewards?,
                        include_solution?, include_state?}
              -> {observation, num_decision, solution?, values?}
  step        payload: {session?, actions: [int...]}
              -> {observation, reward, done, info, values?}
  reset_batch payload: {items: [reset payloads]} -> {items: [reset results]}
  step_batch  payload: {items: [step payloads]}  -> {items: [step results]}
  close       payload: {session?} -> {closed: [session ids]}

Every request gets exactly one response with a matching id; malformed input
produces an error response (code bad_request / unknown_cmd), never a crash.
Observations carry node features row-major, the edge list, edge features,
the node-kind (decision) mask, and the action-space size. `include_state`
and `include_solution` exist for white-box test agents (the oracle).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import __version__
from .core import PuzzleKind, read_corpus
from .env import Environment, EnvConfig
from .graphenc import GraphObservation
from .rewards import RewardMode

PROTOCOL_VERSION = "gp/1"


class ProtocolError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def encode_observation(obs: GraphObservation) -> dict:
    return {
        "kind": obs.kind.value,
        "width": obs.width,
        "height": obs.height,
        "num_nodes": obs.num_nodes,
        "feature_width": obs.node_features.shape[1],
        "node_features": [float(v) for v in obs.node_features.ravel()],
        "edges_src": obs.edges[0].tolist(),
        "edges_dst": obs.edges[1].tolist(),
        "edge_feature_width": obs.edge_features.shape[1],
        "edge_features": [float(v) for v in obs.edge_features.ravel()],
        "decision_mask": [int(v) for v in obs.decision_mask],
        "action_count": obs.action_count,
    }


def decode_observation(payload: dict) -> GraphObservation:
    n = payload["num_nodes"]
    fw = payload["feature_width"]
    ew = payload["edge_feature_width"]
    feats = np.asarray(payload["node_features"], dtype=np.float32).reshape(n, fw)
    edges = np.asarray([payload["edges_src"], payload["edges_dst"]], dtype=np.int32)
    efeats = np.asarray(payload["edge_features"], dtype=np.float32).reshape(-1, ew)
    return GraphObservation(
        kind=PuzzleKind.from_name(payload["kind"]), width=payload["width"],
        height=payload["height"], node_features=feats,
        decision_mask=np.asarray(payload["decision_mask"], dtype=bool),
        edges=edges, edge_features=efeats,
        action_count=payload["action_count"])


@dataclass
class SessionState:
    session_id: str
    env: Environment
    include_solution: bool
    include_state: bool


class ProtocolServer:
    """Transport-agnostic request handling: one JSON line in, one out.

    Sessions are namespaced per server object; per-object processing is
    strictly ordered, so sessions never observe interleaved state.
    """

    def __init__(self):
        self.sessions: dict[str, SessionState] = {}
        self._corpora: dict[str, list] = {}

    # -- request plumbing ---------------------------------------------------

    def handle_line(self, line: str) -> str:
        req_id = None
        try:
            msg = json.loads(line)
            if not isinstance(msg, dict):
                raise ProtocolError("bad_request", "message must be an object")
            req_id = msg.get("id")
            cmd = msg.get("cmd")
            payload = msg.get("payload") or {}
            if not isinstance(payload, dict):
                raise ProtocolError("bad_request", "payload must be an object")
            result = self.dispatch(cmd, payload)
            return json.dumps({"id": req_id, "ok": True, "payload": result})
        except ProtocolError as exc:
            return json.dumps({"id": req_id, "ok": False,
                               "error": {"code": exc.code, "message": exc.message}})
        except json.JSONDecodeError as exc:
            return json.dumps({"id": None, "ok": False,
                               "error": {"code": "bad_request",
                                         "message": f"invalid JSON: {exc}"}})
        except Exception as exc:  # never crash the server on one request
            return json.dumps({"id": req_id, "ok": False,
                               "error": {"code": "internal", "message": str(exc)}})

    def dispatch(self, cmd, payload: dict) -> dict:
        if cmd == "hello":
            return {"protocol_version": PROTOCOL_VERSION,
                    "kinds": [k.value for k in PuzzleKind],
                    "package_version": __version__}
        if cmd == "reset":
            return self._reset(payload)
        if cmd == "step":
            return self._step(payload)
        if cmd == "reset_batch":
            return {"items": [self._reset(item) for item in self._items(payload)]}
        if cmd == "step_batch":
            return {"items": [self._step(item) for item in self._items(payload)]}
        if cmd == "close":
            return self._close(payload)
        raise ProtocolError("unknown_cmd", f"unknown cmd: {cmd!r}")

    @staticmethod
    def _items(payload: dict) -> list[dict]:
        items = payload.get("items")
        if not isinstance(items, list) or not all(isinstance(i, dict) for i in items):
            raise ProtocolError("bad_request", "batch payload needs items: [...]")
        return items

    # -- commands -----------------------------------------------------------

    def _load_corpus(self, path: str):
        if path not in self._corpora:
            try:
                self._corpora[path] = read_corpus(path)
            except (OSError, ValueError) as exc:
                raise ProtocolError("bad_request", f"cannot load corpus: {exc}")
        return self._corpora[path]

    def _reset(self, payload: dict) -> dict:
        session_id = str(payload.get("session", "main"))
        try:
            kind = PuzzleKind.from_name(payload["kind"])
            width = int(payload["width"])
            height = int(payload["height"])
        except KeyError as exc:
            raise ProtocolError("bad_request", f"missing field {exc.args[0]!r}")
        except (TypeError, ValueError) as exc:
            raise ProtocolError("bad_request", str(exc))
        corpus = None
        if payload.get("corpus"):
            corpus = self._load_corpus(str(payload["corpus"]))
        try:
            reward_mode = RewardMode.from_name(payload.get("reward_mode", "iterative"))
            horizon = payload.get("horizon")
            cfg = EnvConfig(kind=kind, width=width, height=height,
                            reward_mode=reward_mode,
                            horizon=int(horizon) if horizon is not None else None,
                            seed=int(payload.get("seed", 0)), corpus=corpus,
                            normalize_rewards=bool(payload.get("normalize_rewards", False)))
        except (TypeError, ValueError) as exc:
            raise ProtocolError("bad_request", str(exc))
        sess = SessionState(
            session_id=session_id, env=Environment(cfg),
            include_solution=bool(payload.get("include_solution", False)),
            include_state=bool(payload.get("include_state", False)))
        self.sessions[session_id] = sess
        idx = payload.get("corpus_index")
        seed = payload.get("episode_seed")
        try:
            obs = sess.env.reset(
                episode_seed=int(seed) if seed is not None else None,
                corpus_index=int(idx) if idx is not None else None)
        except (ValueError, IndexError) as exc:
            raise ProtocolError("bad_request", str(exc))
        result = {"session": session_id,
                  "observation": encode_observation(obs),
                  "num_decision": sess.env.num_decision,
                  "horizon": cfg.effective_horizon}
        if sess.include_solution:
            result["solution"] = sess.env.instance.solution.tolist()
        if sess.include_state:
            result["values"] = sess.env.state.values.tolist()
        return result

    def _session(self, payload: dict) -> SessionState:
        session_id = str(payload.get("session", "main"))
        sess = self.sessions.get(session_id)
        if sess is None:
            raise ProtocolError("bad_request", f"no such session: {session_id!r}")
        return sess

    def _step(self, payload: dict) -> dict:
        sess = self._session(payload)
        actions = payload.get("actions")
        if not isinstance(actions, list):
            raise ProtocolError("bad_request", "actions must be a list")
        try:
            vec = np.asarray(actions, dtype=np.int64)
        except (TypeError, ValueError):
            raise ProtocolError("bad_request", "actions must be integers")
        try:
            out = sess.env.step(vec)
        except (ValueError, RuntimeError) as exc:
            raise ProtocolError("bad_request", str(exc))
        result = {"session": sess.session_id,
                  "observation": encode_observation(out.observation),
                  "reward": out.reward, "done": out.done, "info": out.info}
        if sess.include_state:
            result["values"] = sess.env.state.values.tolist()
        return result

    def _close(self, payload: dict) -> dict:
        session_id = payload.get("session")
        if session_id is None:
            closed = sorted(self.sessions)
            self.sessions.clear()
        else:
            session_id = str(session_id)
            if session_id not in self.sessions:
                raise ProtocolError("bad_request", f"no such session: {session_id!r}")
            del self.sessions[session_id]
            closed = [session_id]
        return {"closed": closed}


class ProtocolClient:
    """Line-based client over any transport exposing send(str)/recv() -> str."""

    def __init__(self, transport):
        self.transport = transport
        self._next_id = 0

    def request(self, cmd: str, payload: dict | None = None) -> dict:
        self._next_id += 1
        req_id = self._next_id
        line = json.dumps({"id": req_id, "cmd": cmd, "payload": payload or {}})
        self.transport.send(line)
        raw = self.transport.recv()
        if raw is None:
            raise ConnectionError("server closed the connection")
        resp = json.loads(raw)
        if resp.get("id") != req_id:
            raise ProtocolError("bad_response", f"id mismatch: {resp.get('id')!r}")
        if not resp.get("ok"):
            err = resp.get("error") or {}
            raise ProtocolError(err.get("code", "unknown"), err.get("message", ""))
        return resp.get("payload") or {}

    def hello(self) -> dict:
        return self.request("hello")

    def reset(self, **payload) -> dict:
        return self.request("reset", payload)

    def step(self, actions, session: str = "main") -> dict:
        return self.request("step", {"session": session,
                                     "actions": [int(a) for a in actions]})

    def reset_batch(self, items: list[dict]) -> list[dict]:
        return self.request("reset_batch", {"items": items})["items"]

    def step_batch(self, items: list[dict]) -> list[dict]:
        return self.request("step_batch", {"items": items})["items"]

    def close(self, session: str | None = None) -> dict:
        payload = {} if session is None else {"session": session}
        return self.request("close", payload)
