"""Policy/value networks: shared encoder, GCN or transformer processor with
a residual connection, optional per-node GRU state, per-node action heads."""
from __future__ import annotations

import math

import torch
import torch.nn as nn
from torch.distributions import Categorical

from .config import ProcessorConfig
from .obs import GraphBatch


def positional_encoding_2d(positions: torch.Tensor, dim: int) -> torch.Tensor:
    """Fixed sine/cosine code of (row, col), half the width for each axis.

    positions: (N, 2) float (row, col). dim must be divisible by 4.
    """
    if dim % 4:
        raise ValueError("dim must be divisible by 4")
    half = dim // 2
    out = torch.empty(positions.shape[0], dim, dtype=torch.float32,
                      device=positions.device)
    freqs = torch.exp(torch.arange(0, half, 2, dtype=torch.float32,
                                   device=positions.device)
                      * (-math.log(10000.0) / half))
    for axis, base in ((0, 0), (1, half)):
        angles = positions[:, axis:axis + 1] * freqs
        out[:, base + 0:base + half:2] = torch.sin(angles)
        out[:, base + 1:base + half:2] = torch.cos(angles)
    return out


def scatter_mean(values: torch.Tensor, index: torch.Tensor,
                 num_targets: int) -> torch.Tensor:
    total = torch.zeros(num_targets, values.shape[1], dtype=values.dtype,
                        device=values.device)
    total.index_add_(0, index, values)
    counts = torch.zeros(num_targets, dtype=values.dtype, device=values.device)
    counts.index_add_(0, index, torch.ones_like(index, dtype=values.dtype))
    return total / counts.clamp(min=1).unsqueeze(1)


class MessagePassingLayer(nn.Module):
    """One round: MLP messages from in-neighbors conditioned on the edge
    direction feature, mean-aggregated, combined with the node state."""

    def __init__(self, hidden: int):
        super().__init__()
        self.msg = nn.Sequential(nn.Linear(hidden, hidden), nn.ReLU(),
                                 nn.Linear(hidden, hidden))
        self.self_lin = nn.Linear(hidden, hidden)
        self.agg_lin = nn.Linear(hidden, hidden)

    def forward(self, x, edges, edge_emb):
        src, dst = edges
        messages = torch.relu(self.msg(x[src] + edge_emb))
        agg = scatter_mean(messages, dst, x.shape[0])
        return torch.relu(self.self_lin(x) + self.agg_lin(agg))


class GCNProcessor(nn.Module):
    def __init__(self, cfg: ProcessorConfig, edge_dim: int):
        super().__init__()
        self.edge_emb = nn.Linear(edge_dim, cfg.hidden_dim)
        self.layers = nn.ModuleList(
            MessagePassingLayer(cfg.hidden_dim) for _ in range(cfg.layers))

    def forward(self, z, batch: GraphBatch):
        e = self.edge_emb(batch.edge_features)
        out = z
        for layer in self.layers:
            out = layer(out, batch.edges, e)
        return out


class TransformerProcessor(nn.Module):
    """Full self-attention within each graph; nodes carry a 2D positional
    code instead of explicit edges."""

    def __init__(self, cfg: ProcessorConfig):
        super().__init__()
        layer = nn.TransformerEncoderLayer(
            d_model=cfg.hidden_dim, nhead=4, dim_feedforward=4 * cfg.hidden_dim,
            dropout=0.0, batch_first=True)
        self.encoder = nn.TransformerEncoder(layer, cfg.layers)
        self.hidden = cfg.hidden_dim

    def forward(self, z, batch: GraphBatch):
        pe = positional_encoding_2d(batch.positions, self.hidden)
        x = (z + pe).view(batch.batch_size, batch.nodes_per_graph, self.hidden)
        return self.encoder(x).reshape(-1, self.hidden)


class PolicyValueNet(nn.Module):
    """z = phi1(x || h); p = z + Processor(z); per-node logits o = phi2(p);
    value = pooled graph readout; recurrent state h' = GRU(h, p)."""

    def __init__(self, feature_width: int, edge_dim: int, action_count: int,
                 cfg: ProcessorConfig, recurrent: bool):
        super().__init__()
        self.cfg = cfg
        self.recurrent = recurrent
        self.hidden = cfg.hidden_dim
        in_dim = feature_width + (cfg.hidden_dim if recurrent else 0)
        self.phi1 = nn.Sequential(nn.Linear(in_dim, cfg.hidden_dim), nn.ReLU())
        if cfg.arch == "gcn":
            self.processor = GCNProcessor(cfg, edge_dim)
        else:
            self.processor = TransformerProcessor(cfg)
        self.gru = nn.GRUCell(cfg.hidden_dim, cfg.hidden_dim) if recurrent else None
        self.phi2 = nn.Linear(cfg.hidden_dim, action_count)
        self.value_head = nn.Linear(cfg.hidden_dim, 1)

    def initial_hidden(self, num_nodes: int) -> torch.Tensor:
        return torch.zeros(num_nodes, self.hidden)

    def forward(self, batch: GraphBatch, hidden: torch.Tensor | None = None):
        x = batch.node_features
        if self.recurrent:
            if hidden is None:
                hidden = self.initial_hidden(x.shape[0])
            x = torch.cat([x, hidden], dim=1)
        z = self.phi1(x)
        p = z + self.processor(z, batch)
        logits = self.phi2(p)
        pooled = p.view(batch.batch_size, batch.nodes_per_graph,
                        self.hidden).mean(dim=1)
        value = self.value_head(pooled).squeeze(-1)
        next_hidden = self.gru(p, hidden) if self.recurrent else None
        return logits, value, next_hidden


def decision_distribution(logits: torch.Tensor, batch: GraphBatch) -> Categorical:
    """Per-decision-node action distribution; meta-node logits are dropped
    (their actions are discarded by the environment)."""
    nd = int(batch.decision_mask[:batch.nodes_per_graph].sum().item())
    picked = logits[batch.decision_mask].view(batch.batch_size, nd, -1)
    return Categorical(logits=picked)


def joint_log_prob(dist: Categorical, actions: torch.Tensor) -> torch.Tensor:
    """Log-probability of the joint per-node action choice (sum over nodes)."""
    return dist.log_prob(actions).sum(dim=-1)


def mean_node_entropy(dist: Categorical) -> torch.Tensor:
    """Entropy of the joint per-node policy (sum over decision nodes), the
    usual convention for factorized multi-discrete distributions."""
    return dist.entropy().sum(dim=-1)
