"""Architecture checks: equivariance, size agnosticism, softmax, encodings."""
import numpy as np
import pytest
import torch

from gptrainer.config import ProcessorConfig
from gptrainer.models import (
    PolicyValueNet, decision_distribution, joint_log_prob, mean_node_entropy,
    positional_encoding_2d,
)
from gptrainer.obs import Observation, batch_observations


def random_observation(rng, kind="net", n=16, width=4, height=4, feat=6,
                       edge_dim=4, action_count=4, num_meta=0):
    total = n + num_meta
    edges = []
    for i in range(total):
        for j in range(total):
            if i != j and rng.random() < 0.2:
                edges.append((i, j))
    if not edges:
        edges = [(0, 1), (1, 0)]
    e = np.array(edges).T
    mask = np.zeros(total, dtype=bool)
    mask[:n] = True
    return Observation(
        kind=kind, width=width, height=height,
        node_features=torch.tensor(rng.random((total, feat)), dtype=torch.float32),
        decision_mask=torch.tensor(mask),
        edges=torch.tensor(e, dtype=torch.long),
        edge_features=torch.tensor(
            np.eye(edge_dim)[rng.integers(0, edge_dim, len(edges))],
            dtype=torch.float32),
        action_count=action_count)


def single_batch(obs):
    return batch_observations([obs])


class TestPositionalEncoding:
    def test_origin_alternates_zero_one(self):
        pe = positional_encoding_2d(torch.zeros(1, 2), 32)[0]
        assert torch.allclose(pe[0::2], torch.zeros(16))
        assert torch.allclose(pe[1::2], torch.ones(16))

    def test_shared_row_half(self):
        pos = torch.tensor([[3.0, 1.0], [3.0, 9.0]])
        pe = positional_encoding_2d(pos, 32)
        assert torch.allclose(pe[0, :16], pe[1, :16])
        assert not torch.allclose(pe[0, 16:], pe[1, 16:])

    def test_unique_over_20x20(self):
        pos = torch.tensor([[float(r), float(c)]
                            for r in range(20) for c in range(20)])
        pe = positional_encoding_2d(pos, 32)
        distinct = {tuple(np.round(row, 6)) for row in pe.numpy()}
        assert len(distinct) == 400

    def test_dim_must_divide_by_four(self):
        with pytest.raises(ValueError):
            positional_encoding_2d(torch.zeros(1, 2), 30)


class TestForward:
    def test_softmax_rows_sum_to_one(self):
        rng = np.random.default_rng(0)
        obs = random_observation(rng)
        torch.manual_seed(0)
        model = PolicyValueNet(6, 4, 4, ProcessorConfig(), recurrent=False)
        logits, value, _ = model(single_batch(obs))
        probs = torch.softmax(logits, dim=-1)
        assert torch.allclose(probs.sum(dim=-1), torch.ones(len(probs)),
                              atol=1e-6)
        assert value.shape == (1,)

    def test_permutation_equivariance_gcn(self):
        rng = np.random.default_rng(1)
        obs = random_observation(rng, n=12)
        torch.manual_seed(1)
        model = PolicyValueNet(6, 4, 4, ProcessorConfig(), recurrent=False)
        logits, value, _ = model(single_batch(obs))
        perm = torch.randperm(12)
        inv = torch.argsort(perm)
        perm_obs = Observation(
            kind=obs.kind, width=obs.width, height=obs.height,
            node_features=obs.node_features[perm],
            decision_mask=obs.decision_mask[perm],
            edges=inv[obs.edges],
            edge_features=obs.edge_features,
            action_count=obs.action_count)
        logits_p, value_p, _ = model(single_batch(perm_obs))
        assert torch.allclose(logits_p, logits[perm], atol=1e-5)
        assert torch.allclose(value_p, value, atol=1e-5)

    @pytest.mark.parametrize("arch", ["gcn", "transformer"])
    def test_size_agnostic(self, arch):
        torch.manual_seed(2)
        model = PolicyValueNet(6, 4, 4, ProcessorConfig(arch=arch),
                               recurrent=True)
        rng = np.random.default_rng(2)
        for n, side in ((16, 4), (64, 8)):
            obs = random_observation(rng, n=n, width=side, height=side)
            hidden = model.initial_hidden(n)
            logits, value, next_hidden = model(single_batch(obs), hidden)
            assert logits.shape == (n, 4)
            assert next_hidden.shape == (n, 32)

    def test_recurrent_state_is_used(self):
        rng = np.random.default_rng(3)
        obs = random_observation(rng)
        torch.manual_seed(3)
        model = PolicyValueNet(6, 4, 4, ProcessorConfig(), recurrent=True)
        zero = model.initial_hidden(obs.num_nodes)
        other = torch.randn_like(zero)
        logits_a, _, _ = model(single_batch(obs), zero)
        logits_b, _, _ = model(single_batch(obs), other)
        assert not torch.allclose(logits_a, logits_b)

    def test_stateless_ignores_history(self):
        rng = np.random.default_rng(4)
        obs = random_observation(rng)
        torch.manual_seed(4)
        model = PolicyValueNet(6, 4, 4, ProcessorConfig(), recurrent=False)
        a, _, h = model(single_batch(obs))
        b, _, _ = model(single_batch(obs))
        assert h is None
        assert torch.allclose(a, b)

    def test_weight_sharing_on_symmetric_inputs(self):
        # identical star-shaped neighborhoods with zero features produce
        # identical logits on the two structurally-equivalent leaves
        edges = torch.tensor([[0, 1, 0, 2], [1, 0, 2, 0]], dtype=torch.long)
        obs = Observation(
            kind="net", width=3, height=1,
            node_features=torch.zeros(3, 6),
            decision_mask=torch.ones(3, dtype=torch.bool),
            edges=edges,
            edge_features=torch.tensor([[1., 0, 0, 0]] * 4),
            action_count=4)
        torch.manual_seed(5)
        model = PolicyValueNet(6, 4, 4, ProcessorConfig(), recurrent=False)
        logits, _, _ = model(single_batch(obs))
        assert torch.allclose(logits[1], logits[2], atol=1e-6)


class TestDistributionHelpers:
    def test_meta_nodes_excluded_from_policy(self):
        rng = np.random.default_rng(6)
        obs = random_observation(rng, n=10, num_meta=4)
        torch.manual_seed(6)
        model = PolicyValueNet(6, 4, 4, ProcessorConfig(), recurrent=False)
        batch = single_batch(obs)
        logits, _, _ = model(batch)
        dist = decision_distribution(logits, batch)
        assert dist.logits.shape == (1, 10, 4)  # meta logits dropped
        actions = dist.sample()
        assert actions.shape == (1, 10)
        logp = joint_log_prob(dist, actions)
        assert logp.shape == (1,)
        ent = mean_node_entropy(dist)
        assert ent.shape == (1,)
        assert float(ent) <= 10 * np.log(4) + 1e-6
