"""PPO training harness for the puzzlegraph gp/1 environment protocol."""

from .config import PPOConfig, ProcessorConfig, TrainConfig
from .models import PolicyValueNet, positional_encoding_2d
from .ppo import PPOTrainer

__all__ = ["PPOConfig", "ProcessorConfig", "TrainConfig", "PolicyValueNet",
           "PPOTrainer", "positional_encoding_2d"]
