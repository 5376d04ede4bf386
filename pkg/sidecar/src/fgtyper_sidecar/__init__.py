"""Reference implementation of the model-backend wire protocol.

Serves /fill_mask, /entail, /embed and /head_word over HTTP/JSON,
wrapping a masked language model, an NLI classifier, a static
word-embedding table and a rule-based head-word extractor.
"""

from fgtyper_sidecar.config import SidecarConfig

__all__ = ["SidecarConfig"]

__version__ = "0.1.0"
