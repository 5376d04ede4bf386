"""Sidecar configuration; every resource must load at startup or we fail fast."""

from __future__ import annotations

from dataclasses import dataclass

# Model roles, not pinned weights: any masked LM and any 3-way NLI
# classifier with entailment/neutral/contradiction labels will do.
DEFAULT_MLM_MODEL = "bert-base-uncased"
DEFAULT_NLI_MODEL = "roberta-large-mnli"


@dataclass
class SidecarConfig:
    mlm_model: str = DEFAULT_MLM_MODEL
    nli_model: str = DEFAULT_NLI_MODEL
    embeddings_path: str = "embeddings.txt"
    host: str = "127.0.0.1"
    port: int = 8800
