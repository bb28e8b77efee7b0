"""Extrapolation runner: corpus building via the env CLI, CSV schema."""
import torch

from gptrainer.config import TrainConfig
from gptrainer.extrapolate import build_corpora, run_checkpoint, write_csv
from gptrainer.models import PolicyValueNet


def make_untrained_checkpoint(tmp_path):
    torch.manual_seed(0)
    cfg = TrainConfig(kind="net")
    model = PolicyValueNet(6, 4, 4, cfg.processor, recurrent=True)
    path = tmp_path / "untrained.pt"
    torch.save({"model": model.state_dict(),
                "config": {"processor": vars(cfg.processor),
                           "recurrent": True, "kind": "net"},
                "iteration": 0, "timesteps": 0, "validation": None}, path)
    return path


def test_corpora_and_csv_schema(tmp_path):
    corpora = build_corpora("net", tmp_path / "corp", count=2, sides=(4, 8))
    assert [s for s, _ in corpora] == [4, 8]
    ckpt = make_untrained_checkpoint(tmp_path)
    rows = run_checkpoint(ckpt, "net", corpora[:1], count=2)
    assert rows[0][:3] == ("net", 4, 0)
    assert 0 <= rows[0][3] <= 2
    csv_path = tmp_path / "out.csv"
    write_csv(rows, csv_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "kind,size,seed,solved"
    assert lines[1].startswith("net,4x4,0,")


def test_untrained_network_fails_large_sizes(tmp_path):
    # x4-sized boards: an untrained policy solves essentially nothing
    corpora = build_corpora("net", tmp_path / "corp", count=5, sides=(8,))
    ckpt = make_untrained_checkpoint(tmp_path)
    rows = run_checkpoint(ckpt, "net", corpora, count=5)
    assert rows[0][1] == 8
    assert rows[0][3] <= 1
