"""Training configuration: processor, agent mode, and PPO hyperparameters."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

# gp/1 per-kind constants the trainer needs without importing the env package
ACTION_COUNTS = {"tents": 4, "lightup": 3, "mosaic": 4, "loopy": 4,
                 "net": 4, "unruly": 3}
TRAINING_SIDES = {"tents": 5, "lightup": 6, "mosaic": 4, "loopy": 4,
                  "net": 4, "unruly": 6}
VALIDATION_SIDES = {"tents": 6, "lightup": 6, "mosaic": 5, "loopy": 5,
                    "net": 5, "unruly": 8}


@dataclass
class ProcessorConfig:
    arch: str = "gcn"            # gcn | transformer
    layers: int = 3
    hidden_dim: int = 32
    aggregation: str = "mean"

    def __post_init__(self):
        if self.arch not in ("gcn", "transformer"):
            raise ValueError(f"unknown processor arch {self.arch!r}")
        if self.layers < 1 or self.hidden_dim < 1:
            raise ValueError("layers and hidden_dim must be positive")
        if self.arch == "transformer" and self.hidden_dim % 4:
            raise ValueError("transformer hidden_dim must be divisible by 4 "
                             "for the 2D positional encoding")


@dataclass
class PPOConfig:
    learning_rate: float = 3e-4          # 6e-5 for the transformer
    batch_size: int = 320                # 3200 for the transformer
    minibatch_size: int = 32
    update_epochs: int = 10
    gamma: float = 0.5
    gae_lambda: float = 0.95
    clip_range: float = 0.2
    entropy_coef: float = 0.004
    value_coef: float = 0.5
    max_grad_norm: float = 0.5
    num_envs: int = 40
    total_timesteps: int = 2_000_000
    validate_every: int = 100            # iterations between validation evals
    validation_episodes: int = 20

    def __post_init__(self):
        if self.batch_size % self.minibatch_size:
            raise ValueError("minibatch size must divide batch size")
        if self.batch_size % self.num_envs:
            raise ValueError("num_envs must divide batch size")

    @property
    def rollout_length(self) -> int:
        return self.batch_size // self.num_envs


@dataclass
class TrainConfig:
    kind: str = "net"
    reward_mode: str = "iterative"       # sparse | iterative | partial
    recurrent: bool = True               # recurrent vs state-less agent
    processor: ProcessorConfig = field(default_factory=ProcessorConfig)
    ppo: PPOConfig = field(default_factory=PPOConfig)
    model_seed: int = 0
    horizon: int | None = None
    out_dir: str = "runs"

    @classmethod
    def transformer_defaults(cls, **kw) -> "TrainConfig":
        cfg = cls(**kw)
        cfg.processor.arch = "transformer"
        cfg.ppo.learning_rate = 6e-5
        cfg.ppo.batch_size = 3200
        cfg.ppo.num_envs = 40
        return cfg

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_file(cls, path) -> "TrainConfig":
        raw = json.loads(Path(path).read_text())
        proc = ProcessorConfig(**raw.pop("processor", {}))
        ppo = PPOConfig(**raw.pop("ppo", {}))
        return cls(processor=proc, ppo=ppo, **raw)
