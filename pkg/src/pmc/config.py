"""Pipeline parameters, with JSON file loading and explicit overrides."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class Config:
    tau: int = 5
    gamma: float = 0.1
    components: int = 10
    # segmentation; spans are measured in motion-map steps
    coarse_grid: tuple[int, int] = (3, 3)
    min_span: int = 8
    max_span: int = 60
    quiescence: float = 0.15
    max_warp: float = 1.5
    modality: str = "rgb-gray"
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coarse_grid", tuple(int(g) for g in self.coarse_grid))
        if self.tau < 0:
            raise ValueError("tau must be >= 0")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError("gamma must lie in (0, 1]")
        if self.components < 1:
            raise ValueError("components must be >= 1")
        if len(self.coarse_grid) != 2 or min(self.coarse_grid) < 1:
            raise ValueError("coarse_grid must be two positive integers")
        if not 1 <= self.min_span <= self.max_span:
            raise ValueError("need 1 <= min_span <= max_span")
        if self.max_warp < 1.0:
            raise ValueError("max_warp must be >= 1")
        if self.quiescence < 0:
            raise ValueError("quiescence must be >= 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def to_json(self) -> dict:
        d = asdict(self)
        d["coarse_grid"] = list(self.coarse_grid)
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "Config":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)

    def override(self, **kwargs) -> "Config":
        """Copy with every non-None keyword applied."""
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def load_config(path=None, **overrides) -> Config:
    """Defaults, then the JSON file at ``path``, then ``overrides``."""
    cfg = Config()
    if path is not None:
        cfg = Config.from_json(json.loads(Path(path).read_text()))
    return cfg.override(**overrides)
