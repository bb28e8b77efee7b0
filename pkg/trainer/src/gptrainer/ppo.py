"""PPO training loop: rollout phase gathering (state, action, next-state)
batches over the environment protocol, then clipped-surrogate updates.

Checkpoints are written every `validate_every` iterations together with a
validation evaluation one size above the training size; the checkpoint with
the best validation solved-rate is kept as `best.pt`.
"""
from __future__ import annotations

import csv
import json
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .client import EnvFleet, SingleEnv
from .config import TrainConfig, VALIDATION_SIDES, TRAINING_SIDES
from .models import (
    PolicyValueNet, decision_distribution, joint_log_prob, mean_node_entropy,
)
from .obs import GraphBatch, batch_observations


@dataclass
class Rollout:
    node_features: torch.Tensor   # (T, B, N, F)
    hidden: torch.Tensor | None   # (T, B, N, H)
    actions: torch.Tensor         # (T, B, nd)
    log_probs: torch.Tensor       # (T, B)
    values: torch.Tensor          # (T, B)
    rewards: torch.Tensor         # (T, B)
    dones: torch.Tensor           # (T, B)
    advantages: torch.Tensor | None = None
    returns: torch.Tensor | None = None


def compute_gae(rollout: Rollout, last_values: torch.Tensor, gamma: float,
                lam: float) -> None:
    t_len, b = rollout.rewards.shape
    adv = torch.zeros(t_len, b)
    last_gae = torch.zeros(b)
    for t in reversed(range(t_len)):
        next_value = last_values if t == t_len - 1 else rollout.values[t + 1]
        not_done = 1.0 - rollout.dones[t]
        delta = rollout.rewards[t] + gamma * next_value * not_done \
            - rollout.values[t]
        last_gae = delta + gamma * lam * not_done * last_gae
        adv[t] = last_gae
    rollout.advantages = adv
    rollout.returns = adv + rollout.values


class PPOTrainer:
    def __init__(self, cfg: TrainConfig, endpoint=None):
        self.cfg = cfg
        torch.manual_seed(cfg.model_seed)
        np.random.seed(cfg.model_seed)
        side = TRAINING_SIDES[cfg.kind]
        self.fleet = EnvFleet(cfg.kind, side, cfg.ppo.num_envs,
                              reward_mode=cfg.reward_mode, horizon=cfg.horizon,
                              seed_base=cfg.model_seed * 1_000_000,
                              endpoint=endpoint)
        self.obs = self.fleet.reset_all()
        first = self.obs[0]
        self.model = PolicyValueNet(
            feature_width=first.node_features.shape[1],
            edge_dim=first.edge_features.shape[1],
            action_count=first.action_count,
            cfg=cfg.processor, recurrent=cfg.recurrent)
        self.optimizer = torch.optim.Adam(self.model.parameters(),
                                          lr=cfg.ppo.learning_rate)
        self.num_nodes = first.num_nodes
        self.num_decision = first.num_decision
        self.hidden = (torch.zeros(cfg.ppo.num_envs, self.num_nodes,
                                   self.model.hidden)
                       if cfg.recurrent else None)
        self.timesteps = 0
        self.iteration = 0
        self.episode_returns = deque(maxlen=200)
        self.episode_solved = deque(maxlen=200)
        self._running_returns = np.zeros(cfg.ppo.num_envs)
        self.curve: list[dict] = []
        self.best_val = -1.0
        self.out_dir = Path(cfg.out_dir)

    # -- rollout --------------------------------------------------------------

    @torch.no_grad()
    def collect(self) -> Rollout:
        cfg = self.cfg.ppo
        t_len = cfg.rollout_length
        b = cfg.num_envs
        feats = torch.zeros(t_len, b, self.num_nodes,
                            self.obs[0].node_features.shape[1])
        hiddens = (torch.zeros(t_len, b, self.num_nodes, self.model.hidden)
                   if self.cfg.recurrent else None)
        actions = torch.zeros(t_len, b, self.num_decision, dtype=torch.long)
        log_probs = torch.zeros(t_len, b)
        values = torch.zeros(t_len, b)
        rewards = torch.zeros(t_len, b)
        dones = torch.zeros(t_len, b)
        for t in range(t_len):
            batch = batch_observations(self.obs)
            flat_hidden = (self.hidden.reshape(-1, self.model.hidden)
                           if self.cfg.recurrent else None)
            logits, value, next_hidden = self.model(batch, flat_hidden)
            dist = decision_distribution(logits, batch)
            act = dist.sample()
            logp = joint_log_prob(dist, act)
            feats[t] = batch.node_features.view(b, self.num_nodes, -1)
            if self.cfg.recurrent:
                hiddens[t] = self.hidden
            actions[t] = act
            log_probs[t] = logp
            values[t] = value
            obs, rew, done, resets, infos = self.fleet.step(
                [a.tolist() for a in act])
            rewards[t] = torch.tensor(rew)
            dones[t] = torch.tensor([float(d) for d in done])
            self._running_returns += np.asarray(rew)
            for i, d in enumerate(done):
                if d:
                    self.episode_returns.append(self._running_returns[i])
                    self.episode_solved.append(float(infos[i]["solved"]))
                    self._running_returns[i] = 0.0
            self.obs = obs
            if self.cfg.recurrent:
                self.hidden = next_hidden.view(b, self.num_nodes, -1)
                for i, r in enumerate(resets):
                    if r:
                        self.hidden[i].zero_()
            self.timesteps += b
        batch = batch_observations(self.obs)
        flat_hidden = (self.hidden.reshape(-1, self.model.hidden)
                       if self.cfg.recurrent else None)
        _, last_values, _ = self.model(batch, flat_hidden)
        rollout = Rollout(node_features=feats, hidden=hiddens, actions=actions,
                          log_probs=log_probs, values=values, rewards=rewards,
                          dones=dones)
        compute_gae(rollout, last_values, cfg.gamma, cfg.gae_lambda)
        return rollout

    # -- updates --------------------------------------------------------------

    def _minibatch_template(self, size: int) -> GraphBatch:
        return batch_observations([self.obs[0]] * size)

    def update(self, rollout: Rollout) -> dict:
        cfg = self.cfg.ppo
        t_len, b = rollout.rewards.shape
        total = t_len * b
        feats = rollout.node_features.reshape(total, self.num_nodes, -1)
        acts = rollout.actions.reshape(total, -1)
        old_logp = rollout.log_probs.reshape(total)
        advantages = rollout.advantages.reshape(total)
        returns = rollout.returns.reshape(total)
        advantages = (advantages - advantages.mean()) / (advantages.std() + 1e-8)
        hidden = (rollout.hidden.reshape(total, self.num_nodes, -1)
                  if self.cfg.recurrent else None)
        template = self._minibatch_template(cfg.minibatch_size)
        stats = {"policy_loss": 0.0, "value_loss": 0.0, "entropy": 0.0,
                 "clip_frac": 0.0}
        batches = 0
        gen = torch.Generator().manual_seed(self.cfg.model_seed + self.iteration)
        for _ in range(cfg.update_epochs):
            order = torch.randperm(total, generator=gen)
            for start in range(0, total, cfg.minibatch_size):
                idx = order[start:start + cfg.minibatch_size]
                mb = GraphBatch(
                    node_features=feats[idx].reshape(-1, feats.shape[-1]),
                    edges=template.edges, edge_features=template.edge_features,
                    decision_mask=template.decision_mask,
                    positions=template.positions,
                    batch_size=len(idx), nodes_per_graph=self.num_nodes,
                    action_count=template.action_count)
                flat_hidden = (hidden[idx].reshape(-1, self.model.hidden)
                               if self.cfg.recurrent else None)
                logits, value, _ = self.model(mb, flat_hidden)
                dist = decision_distribution(logits, mb)
                logp = joint_log_prob(dist, acts[idx])
                entropy = mean_node_entropy(dist).mean()
                ratio = torch.exp(logp - old_logp[idx])
                adv = advantages[idx]
                unclipped = ratio * adv
                clipped = torch.clamp(ratio, 1 - cfg.clip_range,
                                      1 + cfg.clip_range) * adv
                policy_loss = -torch.min(unclipped, clipped).mean()
                value_loss = torch.nn.functional.mse_loss(value, returns[idx])
                loss = policy_loss + cfg.value_coef * value_loss \
                    - cfg.entropy_coef * entropy
                self.optimizer.zero_grad()
                loss.backward()
                torch.nn.utils.clip_grad_norm_(self.model.parameters(),
                                               cfg.max_grad_norm)
                self.optimizer.step()
                stats["policy_loss"] += float(policy_loss.detach())
                stats["value_loss"] += float(value_loss.detach())
                stats["entropy"] += float(entropy.detach())
                stats["clip_frac"] += float(((ratio - 1).abs()
                                             > cfg.clip_range).float().mean())
                batches += 1
        return {k: v / batches for k, v in stats.items()}

    # -- evaluation and persistence -------------------------------------------

    @torch.no_grad()
    def evaluate(self, side: int, episodes: int, endpoint=None) -> float:
        """Greedy-policy solved rate on fresh instances of the given size."""
        solved = 0
        with SingleEnv(kind=self.cfg.kind, side=side,
                       reward_mode=self.cfg.reward_mode,
                       horizon=self.cfg.horizon, endpoint=endpoint) as env:
            for ep in range(episodes):
                obs = env.reset(episode_seed=10_000_000 + ep)
                hidden = (torch.zeros(obs.num_nodes, self.model.hidden)
                          if self.cfg.recurrent else None)
                while True:
                    batch = batch_observations([obs])
                    logits, _, hidden = self.model(batch, hidden)
                    dist = decision_distribution(logits, batch)
                    act = dist.logits.argmax(dim=-1)[0]
                    obs, _, done, info = env.step(act.tolist())
                    if done:
                        solved += bool(info["solved"])
                        break
        return solved / episodes

    def save_checkpoint(self, name: str, val_score: float | None = None):
        self.out_dir.mkdir(parents=True, exist_ok=True)
        torch.save({
            "model": self.model.state_dict(),
            "config": json.loads(self.cfg.to_json()),
            "iteration": self.iteration,
            "timesteps": self.timesteps,
            "validation": val_score,
        }, self.out_dir / name)

    def write_curve(self):
        self.out_dir.mkdir(parents=True, exist_ok=True)
        path = self.out_dir / "learning_curve.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=[
                "iteration", "timesteps", "mean_return", "solved_rate",
                "policy_loss", "value_loss", "entropy", "clip_frac",
                "validation"])
            writer.writeheader()
            writer.writerows(self.curve)

    # -- main loop ------------------------------------------------------------

    def train(self, log=print, stop_at_solved: float | None = None) -> dict:
        cfg = self.cfg
        t0 = time.time()
        val_score = None
        while self.timesteps < cfg.ppo.total_timesteps:
            self.iteration += 1
            rollout = self.collect()
            stats = self.update(rollout)
            solved_rate = (float(np.mean(self.episode_solved))
                           if self.episode_solved else 0.0)
            mean_ret = (float(np.mean(self.episode_returns))
                        if self.episode_returns else 0.0)
            if self.iteration % cfg.ppo.validate_every == 0:
                val_score = self.evaluate(VALIDATION_SIDES[cfg.kind],
                                          cfg.ppo.validation_episodes)
                self.save_checkpoint("last.pt", val_score)
                if val_score > self.best_val:
                    self.best_val = val_score
                    self.save_checkpoint("best.pt", val_score)
            self.curve.append({
                "iteration": self.iteration, "timesteps": self.timesteps,
                "mean_return": round(mean_ret, 4),
                "solved_rate": round(solved_rate, 4), **{
                    k: round(v, 5) for k, v in stats.items()},
                "validation": "" if val_score is None else round(val_score, 4)})
            if self.iteration % 10 == 0:
                log(f"iter {self.iteration:5d} steps {self.timesteps:8d} "
                    f"return {mean_ret:7.2f} solved {solved_rate:5.1%} "
                    f"ent {stats['entropy']:.3f} "
                    f"({self.timesteps / (time.time() - t0):.0f} steps/s)")
            if stop_at_solved is not None and len(self.episode_solved) >= 100 \
                    and solved_rate >= stop_at_solved:
                log(f"early stop: solved rate {solved_rate:.1%} at "
                    f"{self.timesteps} steps")
                break
        self.save_checkpoint("last.pt", val_score)
        if self.best_val < 0:
            self.save_checkpoint("best.pt", None)
        self.write_curve()
        self.fleet.close()
        return {"timesteps": self.timesteps, "iterations": self.iteration,
                "solved_rate": (float(np.mean(self.episode_solved))
                                if self.episode_solved else 0.0),
                "best_validation": self.best_val}


def load_model(checkpoint_path, feature_width, edge_dim, action_count):
    from .config import ProcessorConfig

    ckpt = torch.load(checkpoint_path, map_location="cpu", weights_only=False)
    raw = ckpt["config"]
    proc = ProcessorConfig(**raw["processor"])
    model = PolicyValueNet(feature_width, edge_dim, action_count, proc,
                           recurrent=raw["recurrent"])
    model.load_state_dict(ckpt["model"])
    model.eval()
    return model, raw
