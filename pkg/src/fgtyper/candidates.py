"""Candidate type labels from ensembled masked prompts plus the head word.

Each prompt template rewrites the mention in place, the masked-LM fills
the slot, and a label survives only if at least ``min_votes`` distinct
prompts produced it.  The head word is a separate signal: it is
normalized the same way but never takes part in the vote.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from fgtyper.backend import Backend, MaskPrediction
from fgtyper.errors import ConfigError, PatternError, SpanError

MENTION_SLOT = "{mention}"
MASK_SLOT = "[MASK]"

# Four prompt templates; the slot-free parts scored best for hypernym
# quality among the larger pattern inventory they come from.
DEFAULT_PATTERNS = (
    "[MASK] such as {mention}",
    "such [MASK] as {mention}",
    "{mention} and some other [MASK]",
    "{mention} and the other [MASK]",
)

_IRREGULAR_SINGULARS = {
    "people": "person",
    "children": "child",
    "men": "man",
    "women": "woman",
}


@dataclass(frozen=True)
class HearstPattern:
    """A prompt template with exactly one mention slot and one mask slot."""

    template: str

    def __post_init__(self):
        for slot in (MENTION_SLOT, MASK_SLOT):
            if self.template.count(slot) != 1:
                raise PatternError(
                    f"pattern must contain exactly one {slot!r}: {self.template!r}"
                )

    def expand(self, mention: str) -> str:
        return self.template.replace(MENTION_SLOT, mention)


@dataclass
class CandidateTypeSet:
    """Voted labels, optional head word, and the per-prompt audit trail."""

    labels: set[str]
    head_word: str | None
    per_pattern: dict[str, list[MaskPrediction]]
    vote_counts: dict[str, int]

    @property
    def is_empty(self) -> bool:
        return not self.labels and self.head_word is None


def _singularize_once(word: str) -> str:
    if word in _IRREGULAR_SINGULARS:
        return _IRREGULAR_SINGULARS[word]
    if word.endswith("ies") and len(word) > 3:
        return word[:-3] + "y"
    if word.endswith("ses") and len(word) > 3:
        return word[:-2]
    if word.endswith(("ss", "us")):
        return word
    if word.endswith("s") and len(word) > 1:
        return word[:-1]
    return word


def singularize(word: str) -> str:
    """Rule-based English singular, applied to a fixed point.

    The -ss/-us guards keep already-singular words (class, bus) fixed;
    iterating to a fixed point makes normalization idempotent even for
    stems the rule table mangles.
    """
    while True:
        reduced = _singularize_once(word)
        if reduced == word:
            return word
        word = reduced


def normalize_label(token: str) -> str:
    return singularize(token.strip().lower())


def is_word_token(token: str) -> bool:
    """Mechanical junk filter: keep purely alphabetic tokens.

    Drops punctuation, digits and sub-word continuation fragments
    (``##ing`` and the like); the vote handles the rest of the noise.
    """
    return token.isalpha()


def build_prompt(sentence: str, span: tuple[int, int], pattern: HearstPattern) -> str:
    start, end = span
    if not (0 <= start < end <= len(sentence)):
        raise SpanError(f"span {span} out of bounds for sentence of length {len(sentence)}")
    mention = sentence[start:end]
    return sentence[:start] + pattern.expand(mention) + sentence[end:]


def ensemble_vote(
    per_pattern: dict[str, Sequence[str]], min_votes: int
) -> dict[str, int]:
    """Labels produced by at least ``min_votes`` distinct prompts, with counts.

    Tokens are normalized before counting and count at most once per
    prompt.
    """
    n = len(per_pattern)
    if n < 1:
        raise ConfigError("ensemble_vote needs at least one pattern")
    if not 1 <= min_votes <= n:
        raise ConfigError(f"min_votes must be in [1, {n}], got {min_votes}")
    counts: Counter[str] = Counter()
    for tokens in per_pattern.values():
        seen = {normalize_label(t) for t in tokens}
        counts.update(seen)
    return {label: c for label, c in sorted(counts.items()) if c >= min_votes}


def default_min_votes(n_patterns: int) -> int:
    return n_patterns // 2 + 1


def generate_candidates(
    sentence: str,
    span: tuple[int, int],
    patterns: Sequence[HearstPattern],
    backend: Backend,
    top_k: int = 10,
    min_votes: int | None = None,
    use_head_word: bool = True,
) -> CandidateTypeSet:
    """Run every prompt, vote, and attach the head word when the parser has one."""
    if not patterns:
        raise ConfigError("at least one prompt pattern is required")
    if min_votes is None:
        min_votes = default_min_votes(len(patterns))

    per_pattern: dict[str, list[MaskPrediction]] = {}
    votable: dict[str, list[str]] = {}
    for pattern in patterns:
        prompt = build_prompt(sentence, span, pattern)
        predictions = backend.fill_mask(prompt, top_k)
        per_pattern[pattern.template] = predictions
        votable[pattern.template] = [p.token for p in predictions if is_word_token(p.token)]

    vote_counts = ensemble_vote(votable, min_votes)

    head_word = None
    if use_head_word:
        raw_head = backend.head_word(sentence, span)
        if raw_head is not None:
            head_word = normalize_label(raw_head)

    return CandidateTypeSet(
        labels=set(vote_counts),
        head_word=head_word,
        per_pattern=per_pattern,
        vote_counts=vote_counts,
    )


def parse_patterns(text: str) -> list[HearstPattern]:
    """Pattern file: one template per line, ``#`` comments."""
    patterns = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            patterns.append(HearstPattern(line))
        except PatternError as exc:
            raise PatternError(f"line {lineno}: {exc}") from None
    return patterns


def load_patterns(source: str | Path) -> list[HearstPattern]:
    return parse_patterns(Path(source).read_text(encoding="utf-8"))
