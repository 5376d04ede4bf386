"""Head-word extraction for mention spans.

No dependency-parser package is available in this deployment, so the
extractor is a deterministic rule-based noun-phrase head finder built
around two observations about English mentions:

* an NP whose core ends in a common noun is right-headed
  ("the five Valley Federal branches" -> "branches");
* a proper-name mention led by a capitalized title word carries its
  type cue up front ("Governor Arnold Schwarzenegger" -> "Governor"),
  while a bare proper name ("Wrigley Field") has no usable head at all
  and callers fall back to prompting only.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[A-Za-z0-9']+")

DETERMINERS = frozenset(
    "the a an this that these those some any all both each every no another such "
    "its his her their our my your".split()
)

NUMBER_WORDS = frozenset(
    "one two three four five six seven eight nine ten eleven twelve dozen "
    "hundred thousand million billion few several many most".split()
)

# A scan past one of these leaves the core noun phrase behind.
BOUNDARY_WORDS = frozenset(
    "of in at on for with from to by as than that which who whom whose where "
    "when while and or but nor".split()
)

TITLE_WORDS = frozenset(
    "mr mrs ms dr prof professor president governor senator mayor judge justice "
    "general captain colonel sergeant lieutenant admiral king queen prince "
    "princess sir dame lady lord chancellor minister secretary chief director "
    "coach pope bishop cardinal rabbi imam reverend father sister brother "
    "congressman congresswoman ambassador premier chairman chairwoman "
    "commissioner sheriff deputy officer emperor empress czar sultan".split()
)


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


def _is_capitalized(token: str) -> bool:
    return token[:1].isupper()


def head_word(sentence: str, start: int, end: int) -> str | None:
    if not (0 <= start < end <= len(sentence)):
        raise ValueError(f"span [{start}, {end}) out of bounds")
    tokens = tokenize(sentence[start:end])

    core: list[str] = []
    for i, token in enumerate(tokens):
        low = token.lower()
        if not core and (low in DETERMINERS or low in NUMBER_WORDS or token.isdigit()):
            continue
        if core and low in BOUNDARY_WORDS:
            break
        if not core and low in BOUNDARY_WORDS:
            continue
        if token.isdigit():
            break
        core.append(token)

    if not core:
        return None
    if len(core) == 1:
        return core[0]
    last = core[-1]
    if not _is_capitalized(last):
        return last
    if _is_capitalized(core[0]) and core[0].lower() in TITLE_WORDS:
        return core[0]
    return None
