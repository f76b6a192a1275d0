"""Server configuration, sourced from environment variables."""
from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MODEL = "tuner007/pegasus_paraphrase"


@dataclass(frozen=True)
class ServerConfig:
    model: str = DEFAULT_MODEL  # Hugging Face model id, or "stub"
    port: int = 8081
    max_batch: int = 8
    device: str = "cpu"

    def __post_init__(self):
        if not 0 < self.port < 65536:
            raise ValueError(f"port {self.port} out of range")
        if self.max_batch < 1:
            raise ValueError("max_batch must be >= 1")

    @classmethod
    def from_env(cls, env=os.environ) -> "ServerConfig":
        return cls(
            model=env.get("PARA_MODEL", DEFAULT_MODEL),
            port=int(env.get("PARA_PORT", "8081")),
            max_batch=int(env.get("PARA_MAX_BATCH", "8")),
            device=env.get("PARA_DEVICE", "cpu"),
        )
