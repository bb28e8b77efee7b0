"""Observation handling: gp/1 payload decoding, grid positions, batching."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch


@dataclass
class Observation:
    """Decoded gp/1 observation; tensors ready for the models."""

    kind: str
    width: int
    height: int
    node_features: torch.Tensor   # (N, F) float32
    decision_mask: torch.Tensor   # (N,) bool
    edges: torch.Tensor           # (2, E) long
    edge_features: torch.Tensor   # (E, D) float32
    action_count: int

    @property
    def num_nodes(self) -> int:
        return self.node_features.shape[0]

    @property
    def num_decision(self) -> int:
        return int(self.decision_mask.sum().item())


def from_payload(payload: dict) -> Observation:
    n = payload["num_nodes"]
    fw = payload["feature_width"]
    ew = payload["edge_feature_width"]
    feats = torch.tensor(payload["node_features"],
                         dtype=torch.float32).view(n, fw)
    edges = torch.tensor([payload["edges_src"], payload["edges_dst"]],
                         dtype=torch.long)
    efeats = torch.tensor(payload["edge_features"],
                          dtype=torch.float32).view(-1, ew)
    mask = torch.tensor(payload["decision_mask"], dtype=torch.bool)
    return Observation(kind=payload["kind"], width=payload["width"],
                       height=payload["height"], node_features=feats,
                       decision_mask=mask, edges=edges, edge_features=efeats,
                       action_count=payload["action_count"])


def node_positions(kind: str, width: int, height: int,
                   num_nodes: int) -> np.ndarray:
    """(row, col) per node, mirroring the documented gp/1 node ordering:
    decision nodes in canonical order, then meta nodes.

    Loopy decision nodes are grid-edges (midpoint coordinates); tents/unruly
    meta nodes sit just outside their line; loopy face metas at face centers.
    """
    w, h = width, height
    pos = []
    if kind == "loopy":
        for y in range(h + 1):
            for x in range(w):
                pos.append((float(y), x + 0.5))
        for y in range(h):
            for x in range(w + 1):
                pos.append((y + 0.5, float(x)))
        for y in range(h):
            for x in range(w):
                pos.append((y + 0.5, x + 0.5))
    else:
        for y in range(h):
            for x in range(w):
                pos.append((float(y), float(x)))
        if kind in ("tents", "unruly"):
            for y in range(h):
                pos.append((float(y), float(w)))
            for x in range(w):
                pos.append((float(h), float(x)))
    out = np.asarray(pos, dtype=np.float32)
    if len(out) != num_nodes:
        # non-canonical graph (synthetic tests): no grid layout to encode
        return np.zeros((num_nodes, 2), dtype=np.float32)
    return out


@dataclass
class GraphBatch:
    """Several same-topology observations stacked for one forward pass."""

    node_features: torch.Tensor   # (B*N, F)
    edges: torch.Tensor           # (2, B*E) with per-graph node offsets
    edge_features: torch.Tensor   # (B*E, D)
    decision_mask: torch.Tensor   # (B*N,)
    positions: torch.Tensor       # (B*N, 2)
    batch_size: int
    nodes_per_graph: int
    action_count: int

    @property
    def graph_index(self) -> torch.Tensor:
        return torch.arange(self.batch_size).repeat_interleave(self.nodes_per_graph)


def batch_observations(observations: list[Observation]) -> GraphBatch:
    """All observations must share kind and size (one environment fleet)."""
    first = observations[0]
    n = first.num_nodes
    e = first.edges.shape[1]
    b = len(observations)
    feats = torch.cat([o.node_features for o in observations])
    offsets = (torch.arange(b) * n).repeat_interleave(e)
    edges = first.edges.repeat(1, b) + offsets
    efeats = first.edge_features.repeat(b, 1)
    mask = first.decision_mask.repeat(b)
    pos = torch.from_numpy(
        node_positions(first.kind, first.width, first.height, n)).repeat(b, 1)
    return GraphBatch(node_features=feats, edges=edges, edge_features=efeats,
                      decision_mask=mask, positions=pos, batch_size=b,
                      nodes_per_graph=n, action_count=first.action_count)
