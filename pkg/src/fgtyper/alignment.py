"""Align noisy candidate labels onto first-level ontology types.

Each root type gets a node embedding: the mean word vector of the type
name plus its verbalizer seeds.  A candidate label lands on whichever
root has the highest cosine similarity; out-of-vocabulary labels are
skipped rather than guessed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from fgtyper.backend import Backend
from fgtyper.candidates import CandidateTypeSet
from fgtyper.errors import ConfigError, DataError
from fgtyper.ontology import TypeOntology, normalize_type_name

MIN_SEEDS = 5


@dataclass(frozen=True)
class Verbalizer:
    """Seed terms per first-level type."""

    seeds: dict[str, tuple[str, ...]]

    def check_against(self, ontology: TypeOntology) -> None:
        root_names = {r.name for r in ontology.roots}
        for type_name, terms in self.seeds.items():
            if type_name not in root_names:
                raise ConfigError(f"verbalizer type {type_name!r} is not an ontology root")
            if len(terms) < MIN_SEEDS:
                raise ConfigError(
                    f"verbalizer for {type_name!r} has {len(terms)} seeds, needs >= {MIN_SEEDS}"
                )


@dataclass(frozen=True)
class NodeEmbedding:
    type_name: str
    vector: tuple[float, ...]
    contributing_terms: tuple[str, ...]


@dataclass(frozen=True)
class AlignmentScore:
    label: str
    scores: dict[str, float]
    winner: str


@dataclass
class AlignmentResult:
    """Partition of in-vocabulary labels (plus the head word) across roots."""

    by_type: dict[str, list[str]]
    head_type: str | None
    skipped: list[str]


def parse_verbalizer(text: str) -> Verbalizer:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"verbalizer is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise DataError("verbalizer must be a JSON object of type -> seed list")
    seeds = {}
    for key, terms in obj.items():
        if not isinstance(terms, list) or not all(isinstance(t, str) for t in terms):
            raise DataError(f"verbalizer entry {key!r} must be a list of strings")
        seeds[normalize_type_name(key)] = tuple(t.strip().lower() for t in terms)
    return Verbalizer(seeds)


def load_verbalizer(source: str | Path) -> Verbalizer:
    return parse_verbalizer(Path(source).read_text(encoding="utf-8"))


def term_words(term: str) -> list[str]:
    """Words of a possibly multi-word term (sports_team -> sports, team)."""
    return [w for w in term.replace("_", " ").split() if w]


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    va = np.asarray(a, dtype=float)
    vb = np.asarray(b, dtype=float)
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(va, vb) / (na * nb))


class _VectorLookup:
    """One batched embed call serving every term of one build/alignment step."""

    def __init__(self, backend: Backend, terms: Iterable[str]):
        words = sorted({w for term in terms for w in term_words(term)})
        self._vectors = backend.embed(words) if words else {}

    def term_vector(self, term: str) -> np.ndarray | None:
        """Mean vector over the term's in-vocabulary words, if any."""
        found = [
            np.asarray(self._vectors[w], dtype=float)
            for w in term_words(term)
            if self._vectors.get(w) is not None
        ]
        if not found:
            return None
        return np.mean(found, axis=0)


def build_node_embedding(
    type_name: str, seeds: Sequence[str], backend: Backend
) -> NodeEmbedding:
    """Mean vector of the in-vocabulary members of {type name} + seeds."""
    terms = [type_name, *seeds]
    lookup = _VectorLookup(backend, terms)
    contributing = []
    vectors = []
    for term in terms:
        vec = lookup.term_vector(term)
        if vec is not None:
            contributing.append(term)
            vectors.append(vec)
    if not vectors:
        raise ConfigError(
            f"no verbalizer term for type {type_name!r} is in the embedding vocabulary"
        )
    mean = np.mean(vectors, axis=0)
    return NodeEmbedding(
        type_name=type_name,
        vector=tuple(float(x) for x in mean),
        contributing_terms=tuple(contributing),
    )


def build_node_embeddings(
    ontology: TypeOntology, verbalizer: Verbalizer, backend: Backend
) -> dict[str, NodeEmbedding]:
    verbalizer.check_against(ontology)
    out = {}
    for root in ontology.roots:
        seeds = verbalizer.seeds.get(root.name, ())
        out[root.name] = build_node_embedding(root.name, seeds, backend)
    return out


def score_against_nodes(
    vector: Sequence[float], node_embeddings: dict[str, NodeEmbedding]
) -> AlignmentScore | None:
    if not node_embeddings:
        return None
    scores = {
        name: cosine(vector, emb.vector) for name, emb in node_embeddings.items()
    }
    winner = max(sorted(scores), key=lambda name: scores[name])
    return AlignmentScore(label="", scores=scores, winner=winner)


def align_candidate(
    label: str, node_embeddings: dict[str, NodeEmbedding], backend: Backend
) -> AlignmentScore | None:
    """Cosine of the label against every root; None when out of vocabulary."""
    lookup = _VectorLookup(backend, [label])
    vec = lookup.term_vector(label)
    if vec is None:
        return None
    scored = score_against_nodes(vec, node_embeddings)
    if scored is None:
        return None
    return AlignmentScore(label=label, scores=scored.scores, winner=scored.winner)


def align_candidate_set(
    cs: CandidateTypeSet,
    node_embeddings: dict[str, NodeEmbedding],
    backend: Backend,
) -> AlignmentResult:
    """Assign every voted label, and the head word, to its winning root."""
    labels = sorted(cs.labels)
    terms = list(labels)
    if cs.head_word is not None:
        terms.append(cs.head_word)
    if not terms or not node_embeddings:
        return AlignmentResult(by_type={}, head_type=None, skipped=[])

    lookup = _VectorLookup(backend, terms)
    by_type: dict[str, list[str]] = {}
    skipped: list[str] = []
    for label in labels:
        vec = lookup.term_vector(label)
        if vec is None:
            skipped.append(label)
            continue
        scored = score_against_nodes(vec, node_embeddings)
        by_type.setdefault(scored.winner, []).append(label)

    head_type = None
    if cs.head_word is not None:
        vec = lookup.term_vector(cs.head_word)
        if vec is None:
            skipped.append(cs.head_word)
        else:
            head_type = score_against_nodes(vec, node_embeddings).winner
    return AlignmentResult(by_type=by_type, head_type=head_type, skipped=skipped)


# -- embedding table file (textual word-vector format) ----------------------


def parse_embedding_table(text: str) -> tuple[dict[str, tuple[float, ...]], int]:
    """Parse ``vocab_size dim`` header plus one ``word v1 .. vd`` row per line."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DataError("empty embedding table")
    header = lines[0].split()
    if len(header) != 2:
        raise DataError(f"embedding header must be 'vocab_size dim': {lines[0]!r}")
    try:
        vocab_size, dim = int(header[0]), int(header[1])
    except ValueError:
        raise DataError(f"bad embedding header: {lines[0]!r}") from None
    table: dict[str, tuple[float, ...]] = {}
    for row in lines[1:]:
        parts = row.split()
        if len(parts) != dim + 1:
            raise DataError(f"embedding row has {len(parts) - 1} values, dim={dim}: {row[:80]!r}")
        try:
            table[parts[0]] = tuple(float(x) for x in parts[1:])
        except ValueError:
            raise DataError(f"non-numeric embedding value in row {row[:80]!r}") from None
    if len(table) != vocab_size:
        raise DataError(f"embedding header claims {vocab_size} words, found {len(table)}")
    if not math.isfinite(sum(x for vec in table.values() for x in vec)):
        raise DataError("embedding table contains non-finite values")
    return table, dim


def load_embedding_table(source: str | Path) -> tuple[dict[str, tuple[float, ...]], int]:
    return parse_embedding_table(Path(source).read_text(encoding="utf-8"))
