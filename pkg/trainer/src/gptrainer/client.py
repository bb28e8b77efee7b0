"""Batched environment fleet over the gp/1 protocol (stdio subprocess).

The trainer talks to the environment exclusively through this client: JSON
lines over a `puzzlegraph serve` child process (or an external TCP server).
"""
from __future__ import annotations

import json
import socket
import subprocess
import sys

from .obs import Observation, from_payload


class _StdioTransport:
    def __init__(self):
        self.proc = subprocess.Popen(
            [sys.executable, "-m", "puzzlegraph.cli", "serve",
             "--transport", "stdio"],
            stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1)

    def send(self, line: str):
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()

    def recv(self) -> str:
        line = self.proc.stdout.readline()
        if not line:
            raise ConnectionError("environment server closed")
        return line

    def close(self):
        try:
            self.proc.stdin.close()
            self.proc.wait(timeout=10)
        except Exception:
            self.proc.kill()


class _TcpTransport:
    def __init__(self, host: str, port: int):
        self.sock = socket.create_connection((host, port))
        self.rfile = self.sock.makefile("r", encoding="utf-8")

    def send(self, line: str):
        self.sock.sendall(line.encode() + b"\n")

    def recv(self) -> str:
        line = self.rfile.readline()
        if not line:
            raise ConnectionError("environment server closed")
        return line

    def close(self):
        self.rfile.close()
        self.sock.close()


class EnvFleet:
    """num_envs sessions on one server, stepped in lockstep with automatic
    per-session resets on episode end."""

    def __init__(self, kind: str, side: int, num_envs: int,
                 reward_mode: str = "iterative", horizon: int | None = None,
                 seed_base: int = 0, endpoint: tuple[str, int] | None = None):
        self.kind = kind
        self.side = side
        self.num_envs = num_envs
        self.reward_mode = reward_mode
        self.horizon = horizon
        self._episode_seed = seed_base
        self._req_id = 0
        self.transport = (_TcpTransport(*endpoint) if endpoint
                          else _StdioTransport())
        hello = self._request("hello", {})
        if hello["protocol_version"] != "gp/1":
            raise RuntimeError(f"unexpected protocol {hello['protocol_version']}")

    def _request(self, cmd: str, payload: dict) -> dict:
        self._req_id += 1
        self.transport.send(json.dumps(
            {"id": self._req_id, "cmd": cmd, "payload": payload}))
        resp = json.loads(self.transport.recv())
        if not resp.get("ok"):
            err = resp.get("error") or {}
            raise RuntimeError(f"env error {err.get('code')}: {err.get('message')}")
        return resp["payload"]

    def _reset_payload(self, session: int) -> dict:
        seed = self._episode_seed
        self._episode_seed += 1
        return {"session": str(session), "kind": self.kind,
                "width": self.side, "height": self.side,
                "reward_mode": self.reward_mode, "horizon": self.horizon,
                "episode_seed": seed}

    def reset_all(self) -> list[Observation]:
        items = [self._reset_payload(i) for i in range(self.num_envs)]
        results = self._request("reset_batch", {"items": items})["items"]
        return [from_payload(r["observation"]) for r in results]

    def step(self, actions: list) -> tuple[list[Observation], list[float],
                                           list[bool], list[bool], list[dict]]:
        """Step every session; finished sessions are reset immediately.

        Returns (next_observations, rewards, dones, was_reset, infos); when
        done, the returned observation is the fresh episode's first one.
        """
        items = [{"session": str(i), "actions": [int(a) for a in acts]}
                 for i, acts in enumerate(actions)]
        results = self._request("step_batch", {"items": items})["items"]
        obs = [from_payload(r["observation"]) for r in results]
        rewards = [float(r["reward"]) for r in results]
        dones = [bool(r["done"]) for r in results]
        infos = [r["info"] for r in results]
        resets = [False] * self.num_envs
        reset_items = [(i, self._reset_payload(i))
                       for i, d in enumerate(dones) if d]
        if reset_items:
            fresh = self._request(
                "reset_batch", {"items": [p for _, p in reset_items]})["items"]
            for (i, _), r in zip(reset_items, fresh):
                obs[i] = from_payload(r["observation"])
                resets[i] = True
        return obs, rewards, dones, resets, infos

    def close(self):
        try:
            self._request("close", {})
        except Exception:
            pass
        self.transport.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class SingleEnv:
    """One evaluation session (fresh instances or a corpus file)."""

    def __init__(self, fleet_like=None, kind: str = "net", side: int = 4,
                 reward_mode: str = "iterative", horizon: int | None = None,
                 corpus: str | None = None,
                 endpoint: tuple[str, int] | None = None):
        self.kind = kind
        self.side = side
        self.reward_mode = reward_mode
        self.horizon = horizon
        self.corpus = corpus
        self._req_id = 0
        self.transport = (_TcpTransport(*endpoint) if endpoint
                          else _StdioTransport())

    def _request(self, cmd: str, payload: dict) -> dict:
        self._req_id += 1
        self.transport.send(json.dumps(
            {"id": self._req_id, "cmd": cmd, "payload": payload}))
        resp = json.loads(self.transport.recv())
        if not resp.get("ok"):
            err = resp.get("error") or {}
            raise RuntimeError(f"env error {err.get('code')}: {err.get('message')}")
        return resp["payload"]

    def reset(self, episode_seed: int | None = None,
              corpus_index: int | None = None) -> Observation:
        payload = {"session": "eval", "kind": self.kind, "width": self.side,
                   "height": self.side, "reward_mode": self.reward_mode,
                   "horizon": self.horizon}
        if self.corpus:
            payload["corpus"] = self.corpus
            payload["corpus_index"] = corpus_index
        else:
            payload["episode_seed"] = episode_seed
        return from_payload(self._request("reset", payload)["observation"])

    def step(self, actions) -> tuple[Observation, float, bool, dict]:
        r = self._request("step", {"session": "eval",
                                   "actions": [int(a) for a in actions]})
        return (from_payload(r["observation"]), float(r["reward"]),
                bool(r["done"]), r["info"])

    def close(self):
        self.transport.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
