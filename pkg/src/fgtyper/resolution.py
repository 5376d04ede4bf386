"""Entailment-ranked type selection and recursive refinement.

Every type under consideration is scored as rank = sigma_entail +
sigma_cand.  sigma_entail is the entail probability of the hypothesis
"In this sentence, <mention> is a <type>." against the sentence as
premise.  sigma_cand is credit from the candidate set: at the first
level it comes from embedding alignment, at deeper levels from voted
labels or the head word matching a node inside the type's subtree
(or the type itself).  Descent continues while the best child beats its
parent's rank by at least theta.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from fgtyper.alignment import AlignmentResult, NodeEmbedding, align_candidate_set
from fgtyper.backend import Backend
from fgtyper.candidates import CandidateTypeSet
from fgtyper.config import Weights
from fgtyper.ontology import TypeOntology, TypePath

HYPOTHESIS_PREFIX = "In this sentence, "

STOP_LEAF = "leaf"
STOP_THETA = "theta"
STOP_EMPTY_CHILDREN = "empty-children"
STOP_REASONS = (STOP_LEAF, STOP_THETA, STOP_EMPTY_CHILDREN)


@dataclass(frozen=True)
class Hypothesis:
    mention: str
    type_name: str
    rendered: str


@dataclass(frozen=True)
class RankedType:
    path: TypePath
    sigma_entail: float
    sigma_cand: float
    rank: float

    @classmethod
    def make(cls, path: TypePath, sigma_entail: float, sigma_cand: float) -> "RankedType":
        return cls(path, sigma_entail, sigma_cand, sigma_entail + sigma_cand)


@dataclass
class TypingDecision:
    mention: str
    span: tuple[int, int]
    path: TypePath
    stop_reason: str
    chosen: list[RankedType]
    rankings: list[list[RankedType]] = field(default_factory=list)

    def all_ranked_types(self) -> list[RankedType]:
        return [rt for level in self.rankings for rt in level]

    def to_json_obj(self) -> dict:
        return {
            "mention": self.mention,
            "span": {"start": self.span[0], "end": self.span[1]},
            "path": str(self.path),
            "stop_reason": self.stop_reason,
            "levels": [
                {
                    "type": str(rt.path),
                    "sigma_entail": rt.sigma_entail,
                    "sigma_cand": rt.sigma_cand,
                    "rank": rt.rank,
                }
                for rt in self.chosen
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), ensure_ascii=False)


def verbalize_type(type_name: str) -> str:
    return type_name.replace("_", " ").lower()


def render_hypothesis(mention: str, type_name: str) -> Hypothesis:
    if not mention or not type_name:
        raise ValueError("mention and type name must be non-empty")
    rendered = f"{HYPOTHESIS_PREFIX}{mention} is a {verbalize_type(type_name)}."
    return Hypothesis(mention=mention, type_name=type_name, rendered=rendered)


def _sigma_entail(
    sentence: str, mention: str, type_name: str, backend: Backend, use_nli: bool
) -> float:
    if not use_nli:
        return 0.0
    hypothesis = render_hypothesis(mention, type_name)
    return backend.entail(sentence, hypothesis.rendered).entail


def _matched_paths(labels: Sequence[str], ontology: TypeOntology) -> list[TypePath]:
    """Ontology nodes whose name equals one of the (normalized) labels."""
    out: list[TypePath] = []
    for label in labels:
        out.extend(ontology.paths_named(label))
    return out


def _subtree_credit(
    path: TypePath,
    label_paths: Sequence[TypePath],
    head_paths: Sequence[TypePath],
    weights: Weights,
) -> float:
    credit = 0.0
    if any(path.is_prefix_of(p) for p in label_paths):
        credit += weights.w_cand
    if any(path.is_prefix_of(p) for p in head_paths):
        credit += weights.w_head
    return credit


def _sorted_ranking(ranked: list[RankedType]) -> list[RankedType]:
    return sorted(ranked, key=lambda rt: (-rt.rank, str(rt.path)))


def rank_types(
    sentence: str,
    mention: str,
    candidate_types: Sequence[TypePath],
    cs: CandidateTypeSet,
    ontology: TypeOntology,
    backend: Backend,
    weights: Weights,
    use_nli: bool = True,
) -> list[RankedType]:
    """Score each type with subtree-matched candidate credit; best first."""
    if not candidate_types:
        raise ValueError("candidate_types must be non-empty")
    label_paths = _matched_paths(sorted(cs.labels), ontology)
    head_paths = (
        _matched_paths([cs.head_word], ontology) if cs.head_word is not None else []
    )
    ranked = []
    for path in candidate_types:
        sigma_e = _sigma_entail(sentence, mention, path.name, backend, use_nli)
        sigma_c = _subtree_credit(path, label_paths, head_paths, weights)
        ranked.append(RankedType.make(path, sigma_e, sigma_c))
    return _sorted_ranking(ranked)


def select_high_level(
    sentence: str,
    mention: str,
    cs: CandidateTypeSet,
    ontology: TypeOntology,
    node_embeddings: dict[str, NodeEmbedding],
    backend: Backend,
    weights: Weights,
    use_nli: bool = True,
    alignment: AlignmentResult | None = None,
) -> tuple[RankedType, list[RankedType], AlignmentResult]:
    """Rank the first-level types; candidate credit comes from alignment.

    A root earns w_cand when any voted label aligned to it and w_head
    when the head word did.  With an empty candidate set this degrades
    to a pure entailment ranking.
    """
    if not ontology.roots:
        raise ValueError("ontology has no roots")
    if alignment is None:
        alignment = align_candidate_set(cs, node_embeddings, backend)
    ranked = []
    for root in ontology.roots:
        sigma_e = _sigma_entail(sentence, mention, root.name, backend, use_nli)
        sigma_c = 0.0
        if alignment.by_type.get(root.name):
            sigma_c += weights.w_cand
        if alignment.head_type == root.name:
            sigma_c += weights.w_head
        ranked.append(RankedType.make(root, sigma_e, sigma_c))
    ranking = _sorted_ranking(ranked)
    return ranking[0], ranking, alignment


def refine_fine_grained(
    high_level: RankedType,
    sentence: str,
    mention: str,
    cs: CandidateTypeSet,
    ontology: TypeOntology,
    backend: Backend,
    weights: Weights,
    theta: float,
    use_nli: bool = True,
    span: tuple[int, int] = (0, 0),
    first_level_ranking: list[RankedType] | None = None,
) -> TypingDecision:
    """Walk down from the high-level type while children clear the theta gain."""
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    chosen = [high_level]
    rankings = [list(first_level_ranking) if first_level_ranking else [high_level]]
    current = high_level
    while True:
        child_paths = sorted(ontology.children(current.path))
        if not child_paths:
            stop = STOP_LEAF
            break
        ranking = rank_types(
            sentence, mention, child_paths, cs, ontology, backend, weights, use_nli
        )
        rankings.append(ranking)
        best = ranking[0]
        if best.rank - current.rank >= theta:
            chosen.append(best)
            current = best
            continue
        stop = STOP_THETA
        break
    return TypingDecision(
        mention=mention,
        span=span,
        path=current.path,
        stop_reason=stop,
        chosen=chosen,
        rankings=rankings,
    )


def resolve_mention(
    sentence: str,
    span: tuple[int, int],
    cs: CandidateTypeSet,
    ontology: TypeOntology,
    node_embeddings: dict[str, NodeEmbedding],
    backend: Backend,
    weights: Weights,
    theta: float,
    use_nli: bool = True,
) -> TypingDecision:
    """Selection plus refinement for an already-built candidate set."""
    mention = sentence[span[0] : span[1]]
    high, first_ranking, _ = select_high_level(
        sentence, mention, cs, ontology, node_embeddings, backend, weights, use_nli
    )
    return refine_fine_grained(
        high,
        sentence,
        mention,
        cs,
        ontology,
        backend,
        weights,
        theta,
        use_nli,
        span=span,
        first_level_ranking=first_ranking,
    )


def type_mention(
    sentence: str,
    span: tuple[int, int],
    patterns: Sequence,
    ontology: TypeOntology,
    node_embeddings: dict[str, NodeEmbedding],
    backend: Backend,
    weights: Weights,
    theta: float,
    top_k: int = 10,
    min_votes: int | None = None,
    use_head_word: bool = True,
    use_nli: bool = True,
) -> TypingDecision:
    """Full per-mention pipeline: candidates, alignment, selection, refinement.

    Deterministic given a fixture backend and fixed configuration; a
    mention whose prompts vote out everything still gets a decision via
    the entailment-only path.
    """
    from fgtyper.candidates import generate_candidates

    cs = generate_candidates(
        sentence,
        span,
        patterns,
        backend,
        top_k=top_k,
        min_votes=min_votes,
        use_head_word=use_head_word,
    )
    return resolve_mention(
        sentence, span, cs, ontology, node_embeddings, backend, weights, theta, use_nli
    )
