"""Zero-shot, ontology-guided fine-grained entity typing.

The pipeline, per mention: generate candidate hypernym labels with an
ensemble of masked prompts plus the mention's head word, align the labels
to first-level ontology types through word-embedding similarity, pick the
high-level type with an entailment model, then walk down the ontology as
long as a child type beats its parent by the granularity margin.
"""

from fgtyper.config import RunConfig, Weights
from fgtyper.ontology import TypeOntology, TypePath, load_ontology, validate_ontology

__all__ = [
    "RunConfig",
    "Weights",
    "TypeOntology",
    "TypePath",
    "load_ontology",
    "validate_ontology",
]

__version__ = "0.1.0"
