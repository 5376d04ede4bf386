"""Run configuration for the typing pipeline."""

from __future__ import annotations

from dataclasses import dataclass

from fgtyper.errors import ConfigError

DEFAULT_THETA = 0.3
DEFAULT_W_CAND = 0.5
DEFAULT_W_HEAD = 0.5
DEFAULT_TOP_K = 10


@dataclass(frozen=True)
class Weights:
    w_cand: float = DEFAULT_W_CAND
    w_head: float = DEFAULT_W_HEAD

    def __post_init__(self):
        if self.w_cand < 0 or self.w_head < 0:
            raise ConfigError(f"weights must be >= 0: {self}")


@dataclass
class RunConfig:
    ontology_path: str
    verbalizer_path: str
    patterns_path: str
    backend_kind: str = "fixture"  # fixture | remote
    backend_url: str | None = None
    fixtures_dir: str | None = None
    theta: float = DEFAULT_THETA
    w_cand: float = DEFAULT_W_CAND
    w_head: float = DEFAULT_W_HEAD
    top_k: int = DEFAULT_TOP_K
    min_votes: int | None = None  # None = floor(n_patterns / 2) + 1
    parallelism: int = 1
    use_nli: bool = True
    use_head_word: bool = True
    use_ensemble: bool = True

    def validate(self) -> None:
        if self.theta < 0:
            raise ConfigError(f"theta must be >= 0, got {self.theta}")
        if self.top_k < 1:
            raise ConfigError(f"top_k must be >= 1, got {self.top_k}")
        if self.parallelism < 1:
            raise ConfigError(f"parallelism must be >= 1, got {self.parallelism}")
        if self.backend_kind == "fixture":
            if not self.fixtures_dir:
                raise ConfigError("fixture backend requires fixtures_dir")
        elif self.backend_kind == "remote":
            if not self.backend_url:
                raise ConfigError("remote backend requires backend_url")
        else:
            raise ConfigError(f"unknown backend kind {self.backend_kind!r}")
        Weights(self.w_cand, self.w_head)

    @property
    def weights(self) -> Weights:
        return Weights(self.w_cand, self.w_head)
