"""Wires configuration, resources and a backend into a runnable pipeline."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from fgtyper.alignment import (
    NodeEmbedding,
    Verbalizer,
    build_node_embeddings,
    load_verbalizer,
)
from fgtyper.backend import Backend, FixtureBackend, RecordingBackend, RemoteBackend
from fgtyper.candidates import HearstPattern, default_min_votes, load_patterns
from fgtyper.config import RunConfig
from fgtyper.errors import ConfigError
from fgtyper.evaluation import LabeledMention
from fgtyper.ontology import TypeOntology, load_ontology
from fgtyper.resolution import TypingDecision, type_mention


@dataclass
class Engine:
    config: RunConfig
    ontology: TypeOntology
    verbalizer: Verbalizer
    patterns: list[HearstPattern]
    node_embeddings: dict[str, NodeEmbedding]
    backend: Backend

    @classmethod
    def build(cls, config: RunConfig, backend: Backend | None = None) -> "Engine":
        config.validate()
        ontology = load_ontology(config.ontology_path)
        verbalizer = load_verbalizer(config.verbalizer_path)
        patterns = load_patterns(config.patterns_path)
        if not patterns:
            raise ConfigError(f"no patterns in {config.patterns_path}")
        if not config.use_ensemble:
            patterns = patterns[:1]
        min_votes = config.min_votes
        if min_votes is not None and not 1 <= min_votes <= len(patterns):
            raise ConfigError(
                f"min_votes must be in [1, {len(patterns)}], got {min_votes}"
            )
        if backend is None:
            backend = make_backend(config)
        node_embeddings = build_node_embeddings(ontology, verbalizer, backend)
        return cls(
            config=config,
            ontology=ontology,
            verbalizer=verbalizer,
            patterns=patterns,
            node_embeddings=node_embeddings,
            backend=backend,
        )

    @property
    def min_votes(self) -> int:
        if self.config.min_votes is not None:
            return self.config.min_votes
        return default_min_votes(len(self.patterns))

    def type_mention(self, sentence: str, span: tuple[int, int]) -> TypingDecision:
        cfg = self.config
        return type_mention(
            sentence,
            span,
            self.patterns,
            self.ontology,
            self.node_embeddings,
            self.backend,
            cfg.weights,
            cfg.theta,
            top_k=cfg.top_k,
            min_votes=self.min_votes,
            use_head_word=cfg.use_head_word,
            use_nli=cfg.use_nli,
        )

    def type_dataset(self, mentions: list[LabeledMention]) -> list[TypingDecision]:
        """Type every mention, preserving input order in the output."""
        if self.config.parallelism <= 1 or len(mentions) <= 1:
            return [self.type_mention(m.sentence, m.span) for m in mentions]
        with ThreadPoolExecutor(max_workers=self.config.parallelism) as pool:
            futures = [
                pool.submit(self.type_mention, m.sentence, m.span) for m in mentions
            ]
            return [f.result() for f in futures]


def make_backend(config: RunConfig) -> Backend:
    if config.backend_kind == "fixture":
        return FixtureBackend(config.fixtures_dir)
    if config.backend_kind == "remote":
        return RemoteBackend(config.backend_url)
    raise ConfigError(f"unknown backend kind {config.backend_kind!r}")


def make_recording_backend(config: RunConfig) -> Backend:
    if not config.backend_url:
        raise ConfigError("recording requires a live backend URL")
    if not config.fixtures_dir:
        raise ConfigError("recording requires a fixtures directory")
    return RecordingBackend(RemoteBackend(config.backend_url), config.fixtures_dir)
