"""Command line interface: generate | solve | count-configs | serve | eval |
render | replay."""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from .core import (
    GridSpec, PuzzleKind, parse_instance, read_corpus, serialize_instance,
    write_corpus,
)
from .env import _VALUE_TO_ACTION, Environment, EnvConfig
from .evalharness import (
    DoNothingAgent, EvalReport, EvalRow, OracleAgent, RandomAgent,
    build_suite, run_episode,
)
from .graphenc import GraphObservation
from .protocol import ProtocolClient, ProtocolError, decode_observation
from .render import render as render_state
from .rewards import RewardMode
from .rules import PuzzleState
from .server import (
    DEFAULT_ADDR_ENV, parse_address, serve_stdio, serve_tcp, stdio_client,
    tcp_client,
)
from .solvegen import SUITE_LABELS, count_distinct, generate, solve, training_size


def _add_common(p: argparse.ArgumentParser, size_required: bool = True):
    p.add_argument("--kind", required=True,
                   help="puzzle kind: tents, lightup, mosaic, loopy, net, unruly")
    p.add_argument("--size", required=size_required,
                   help="board size, e.g. 5x5 (defaults to the training size)")
    p.add_argument("--seed", type=int, default=0)


def _kind_size(args) -> tuple[PuzzleKind, GridSpec]:
    kind = PuzzleKind.from_name(args.kind)
    size = GridSpec.parse(args.size) if args.size else training_size(kind)
    return kind, size


def cmd_generate(args) -> int:
    kind, size = _kind_size(args)
    instances = [generate(kind, size, args.seed + i) for i in range(args.count)]
    if args.out:
        write_corpus(args.out, instances)
        print(f"wrote {len(instances)} {kind.value} {size} instances to {args.out}")
    else:
        for inst in instances:
            print(serialize_instance(inst))
    return 0


def cmd_solve(args) -> int:
    if args.corpus:
        inst = read_corpus(args.corpus)[args.index]
    else:
        kind, size = _kind_size(args)
        inst = generate(kind, size, args.seed)
    result = solve(inst, cap=args.cap)
    print(f"verdict: {result.verdict}  (nodes expanded: {result.nodes_expanded})")
    for i, sol in enumerate(result.solutions):
        print(f"solution {i}: " + "".join(str(int(v)) for v in sol))
    if result.solutions and args.render:
        state = PuzzleState(inst, result.solutions[0].copy())
        print(render_state(state))
    return 0 if result.verdict == "unique" else 1


def cmd_count_configs(args) -> int:
    kind, size = _kind_size(args)
    t0 = time.time()
    distinct = count_distinct(kind, size, args.samples, base_seed=args.seed)
    elapsed = time.time() - t0
    print(f"kind={kind.value} size={size} samples={args.samples} "
          f"distinct={distinct} elapsed={elapsed:.1f}s")
    return 0


def cmd_serve(args) -> int:
    if args.transport == "stdio":
        serve_stdio()
        return 0
    addr = args.addr or os.environ.get(DEFAULT_ADDR_ENV, "127.0.0.1:7789")
    host, port = parse_address(addr)
    srv = serve_tcp(host, port)
    print(f"serving gp/1 on {host}:{port}", file=sys.stderr)
    try:
        srv.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def cmd_render(args) -> int:
    if args.corpus:
        inst = read_corpus(args.corpus)[args.index]
    else:
        kind, size = _kind_size(args)
        inst = generate(kind, size, args.seed)
    state = (PuzzleState.solved_state(inst) if args.solved
             else PuzzleState.initial(inst))
    print(render_state(state))
    return 0


# --- eval ------------------------------------------------------------------


def _client_actions(agent: str, kind: PuzzleKind, obs: GraphObservation,
                    values, solution, rng) -> list[int]:
    """Builtin agents acting purely on protocol payloads."""
    nd = obs.num_decision
    nothing = obs.action_count - 1
    if agent == "nothing":
        return [nothing] * nd
    if agent == "random":
        return rng.integers(0, obs.action_count, size=nd).tolist()
    cur = np.asarray(values, dtype=np.int64)
    sol = np.asarray(solution, dtype=np.int64)
    if kind is PuzzleKind.NET:
        # connector bits N,W,S,E are feature columns 0..3; the rotation
        # period is invariant under rotation, so it can be recovered here
        bits = obs.node_features[:nd, :4] > 0.5
        mask = (bits[:, 0] * 1 + bits[:, 3] * 2 + bits[:, 2] * 4 + bits[:, 1] * 8)
        from .core import net_mask_period
        period = np.array([net_mask_period(int(m)) for m in mask], dtype=np.int64)
        delta = (sol - cur) % period
        return np.where(delta == 0, nothing, delta - 1).tolist()
    actions = _VALUE_TO_ACTION[kind][sol]
    return np.where(cur == sol, nothing, actions).tolist()


def _record_episode(fh, inst, actions_per_step, solved, total_reward):
    fh.write(json.dumps({
        "type": "episode", "record": serialize_instance(inst),
        "actions": actions_per_step, "solved": bool(solved),
        "total_reward": float(total_reward)}) + "\n")


def _eval_local(agent_obj, kind, suite, args, record_fh) -> EvalReport:
    report = EvalReport()
    for label, instances in suite.items():
        side = instances[0].width
        cfg = EnvConfig(kind=kind, width=side, height=side,
                        reward_mode=RewardMode.from_name(args.reward_mode),
                        horizon=args.horizon, corpus=instances)
        env = Environment(cfg)
        solved = 0
        for i, inst in enumerate(instances):
            if record_fh is None:
                solved += run_episode(env, agent_obj, i)
            else:
                obs = env.reset(corpus_index=i)
                steps, total_r, ok = [], 0.0, False
                while True:
                    actions = agent_obj.act(obs, env)
                    out = env.step(actions)
                    steps.append(np.asarray(actions).tolist())
                    total_r += out.reward
                    obs = out.observation
                    if out.done:
                        ok = bool(out.info["solved"])
                        break
                solved += ok
                _record_episode(record_fh, inst, steps, ok, total_r)
        report.rows.append(EvalRow(kind=kind.value, size_label=label, side=side,
                                   agent_seed=args.seed, solved=solved,
                                   total=len(instances)))
    return report


def _eval_protocol(client: ProtocolClient, kind, suite, args, record_fh,
                   corpus_dir: Path) -> EvalReport:
    report = EvalReport()
    rng = np.random.default_rng(args.seed)
    for label, instances in suite.items():
        side = instances[0].width
        path = corpus_dir / f"{kind.value}-{label.replace('+', 'p')}.gpz"
        write_corpus(path, instances)
        solved: int | None = 0
        try:
            for i, inst in enumerate(instances):
                payload = client.reset(
                    session="eval", kind=kind.value, width=side, height=side,
                    corpus=str(path), corpus_index=i,
                    reward_mode=args.reward_mode, horizon=args.horizon,
                    include_state=True, include_solution=(args.agent == "oracle"))
                obs = decode_observation(payload["observation"])
                values = payload.get("values")
                solution = payload.get("solution")
                steps, total_r, ok = [], 0.0, False
                while True:
                    actions = _client_actions(args.agent, kind, obs, values,
                                              solution, rng)
                    out = client.step(actions, session="eval")
                    obs = decode_observation(out["observation"])
                    values = out.get("values")
                    total_r += out["reward"]
                    steps.append(list(actions))
                    if out["done"]:
                        ok = bool(out["info"]["solved"])
                        break
                solved += ok
                if record_fh is not None:
                    _record_episode(record_fh, inst, steps, ok, total_r)
        except (ConnectionError, ProtocolError, OSError):
            solved = None  # endpoint lost: explicit missing entry
        report.rows.append(EvalRow(kind=kind.value, size_label=label, side=side,
                                   agent_seed=args.seed, solved=solved,
                                   total=len(instances)))
    return report


def cmd_eval(args) -> int:
    kinds = (list(PuzzleKind) if args.kind == "all"
             else [PuzzleKind.from_name(args.kind)])
    agents = {"oracle": OracleAgent, "nothing": DoNothingAgent,
              "random": lambda: RandomAgent(args.seed)}
    if args.agent not in agents:
        print(f"unknown agent {args.agent!r}", file=sys.stderr)
        return 2
    labels = args.sizes.split(",") if args.sizes else list(SUITE_LABELS)
    record_fh = open(args.record, "w", encoding="utf-8") if args.record else None
    if record_fh is not None:
        record_fh.write(json.dumps({
            "type": "header", "agent": args.agent, "horizon": args.horizon,
            "reward_mode": args.reward_mode}) + "\n")
    report = EvalReport()
    try:
        for kind in kinds:
            suite = build_suite(kind, args.master_seed, count=args.count)
            suite = {k: v for k, v in suite.items() if k in labels}
            if args.via == "local":
                part = _eval_local(agents[args.agent](), kind, suite, args, record_fh)
            else:
                with tempfile.TemporaryDirectory() as tmp:
                    if args.via == "stdio":
                        client = stdio_client()
                    else:
                        host, port = parse_address(
                            args.endpoint or os.environ.get(DEFAULT_ADDR_ENV,
                                                            "127.0.0.1:7789"))
                        client = tcp_client(host, port)
                    try:
                        client.hello()
                        part = _eval_protocol(client, kind, suite, args,
                                              record_fh, Path(tmp))
                    finally:
                        try:
                            client.transport.close()
                        except Exception:
                            pass
            report.rows.extend(part.rows)
    finally:
        if record_fh is not None:
            record_fh.close()
    print(report.summary())
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
        print(f"csv written to {args.csv}")
    return 0 if report.complete else 1


def cmd_replay(args) -> int:
    mismatches = 0
    episodes = 0
    with open(args.trace, encoding="utf-8") as fh:
        header = {}
        for line in fh:
            msg = json.loads(line)
            if msg["type"] == "header":
                header = msg
                continue
            inst = parse_instance(msg["record"])
            cfg = EnvConfig(kind=inst.kind, width=inst.width, height=inst.height,
                            reward_mode=RewardMode.from_name(
                                header.get("reward_mode", "iterative")),
                            horizon=header.get("horizon"), corpus=[inst])
            env = Environment(cfg)
            env.reset(corpus_index=0)
            total_r, solved = 0.0, False
            for actions in msg["actions"]:
                out = env.step(np.asarray(actions, dtype=np.int64))
                total_r += out.reward
                solved = bool(out.info["solved"])
                if out.done:
                    break
            episodes += 1
            same = (solved == msg["solved"]
                    and abs(total_r - msg["total_reward"]) < 1e-9)
            if not same:
                mismatches += 1
                print(f"episode {episodes}: MISMATCH "
                      f"(solved {solved} vs {msg['solved']}, "
                      f"reward {total_r} vs {msg['total_reward']})")
    print(f"replayed {episodes} episodes, {mismatches} mismatches")
    return 0 if mismatches == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="puzzlegraph",
                                description="graph puzzle environments")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a corpus of unique-solution instances")
    _add_common(g, size_required=False)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--out", help="corpus file (default: stdout)")
    g.set_defaults(fn=cmd_generate)

    s = sub.add_parser("solve", help="solve an instance and report uniqueness")
    s.add_argument("--corpus")
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--kind")
    s.add_argument("--size")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cap", type=int, default=2)
    s.add_argument("--render", action="store_true")
    s.set_defaults(fn=cmd_solve)

    c = sub.add_parser("count-configs",
                       help="distinct clue layouts among sampled instances")
    _add_common(c, size_required=False)
    c.add_argument("--samples", type=int, default=500_000)
    c.set_defaults(fn=cmd_count_configs)

    v = sub.add_parser("serve", help="run the gp/1 environment server")
    v.add_argument("--transport", choices=("stdio", "tcp"), default="stdio")
    v.add_argument("--addr", help=f"host:port for tcp (default ${DEFAULT_ADDR_ENV})")
    v.set_defaults(fn=cmd_serve)

    e = sub.add_parser("eval", help="run a test suite with a builtin agent")
    e.add_argument("--agent", default="oracle",
                   help="oracle | nothing | random")
    e.add_argument("--kind", default="all")
    e.add_argument("--master-seed", type=int, default=7)
    e.add_argument("--count", type=int, default=50)
    e.add_argument("--seed", type=int, default=0, help="agent seed")
    e.add_argument("--horizon", type=int, default=None)
    e.add_argument("--reward-mode", default="iterative",
                   choices=("sparse", "iterative", "partial"))
    e.add_argument("--sizes", help="comma list from train,+1,+2,x4,x9,x16")
    e.add_argument("--via", choices=("local", "stdio", "tcp"), default="local")
    e.add_argument("--endpoint", help="host:port when --via tcp")
    e.add_argument("--csv", help="write kind,size,seed,solved rows here")
    e.add_argument("--record", help="record episode traces to this file")
    e.set_defaults(fn=cmd_eval)

    r = sub.add_parser("render", help="print a board as text")
    r.add_argument("--corpus")
    r.add_argument("--index", type=int, default=0)
    r.add_argument("--kind")
    r.add_argument("--size")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--solved", action="store_true",
                   help="render the stored solution instead of the fresh board")
    r.set_defaults(fn=cmd_render)

    t = sub.add_parser("replay", help="re-run a recorded trace and verify it")
    t.add_argument("--trace", required=True)
    t.set_defaults(fn=cmd_replay)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
