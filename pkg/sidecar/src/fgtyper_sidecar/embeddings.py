"""Static word-embedding table in the textual word-vector format.

First line: ``vocab_size dim``; then one ``word v1 .. vd`` row per line.
"""

from __future__ import annotations

from pathlib import Path


class EmbeddingTable:
    def __init__(self, vectors: dict[str, list[float]], dim: int):
        self.vectors = vectors
        self.dim = dim

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
        if not lines:
            raise ValueError(f"empty embedding table: {path}")
        header = lines[0].split()
        if len(header) != 2:
            raise ValueError(f"bad embedding header in {path}: {lines[0]!r}")
        vocab_size, dim = int(header[0]), int(header[1])
        vectors: dict[str, list[float]] = {}
        for row in lines[1:]:
            parts = row.split()
            if len(parts) != dim + 1:
                raise ValueError(f"bad embedding row in {path}: {row[:80]!r}")
            vectors[parts[0]] = [float(x) for x in parts[1:]]
        if len(vectors) != vocab_size:
            raise ValueError(
                f"{path}: header says {vocab_size} words, found {len(vectors)}"
            )
        return cls(vectors, dim)

    def lookup(self, tokens: list[str]) -> dict[str, list[float] | None]:
        return {t: self.vectors.get(t) for t in tokens}
