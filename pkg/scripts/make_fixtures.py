#!/usr/bin/env python3
"""Regenerate the shipped embedding table and fixture store.

The response tables below are the single source of truth for the demo
corpus.  Every request the pipeline can make is spelled out by hand
(full prompt strings, full hypothesis strings); running the engine
against them through a RecordingBackend guarantees the stored fixture
keys match what the engine actually asks for.  An unexpected request
fails loudly instead of recording garbage.

Entailment probabilities are dyadic rationals (k/64) so that rank
arithmetic decomposes exactly in IEEE doubles.

Usage: python scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
ASSETS = ROOT / "assets"
FIXTURES = ASSETS / "fixtures"

sys.path.insert(0, str(ROOT / "src"))

from fgtyper.backend import RecordingBackend, TableBackend  # noqa: E402
from fgtyper.config import RunConfig  # noqa: E402
from fgtyper.engine import Engine  # noqa: E402
from fgtyper.evaluation import load_dataset  # noqa: E402

S1 = "Sammy Sosa got a standing ovation at Wrigley Field."
S2 = (
    "Governor Arnold Schwarzenegger gives a speech at Mission Serve's "
    "service project on Veterans Day 2010."
)

assert S1[0:10] == "Sammy Sosa"
assert S1[37:50] == "Wrigley Field"
assert S2[0:30] == "Governor Arnold Schwarzenegger"

# -- embedding table ---------------------------------------------------------

CLUSTERS = {
    0: [  # location-flavored words
        "location", "place", "area", "region", "city", "country", "site",
        "venue", "stadium", "building", "park", "game", "field", "arena",
        "theater",
    ],
    1: [  # organization-flavored words
        "organization", "corporation", "university", "firm", "business",
        "government", "company", "agency", "team", "club", "institution",
    ],
    2: [  # person-flavored words
        "person", "man", "woman", "child", "individual", "citizen",
        "athlete", "player", "star", "teammate", "politician", "official",
        "leader", "governor", "president", "artist", "actor",
    ],
}

DIM = 8


def make_vector(axis: int, i: int) -> list[float]:
    v = [0.0] * DIM
    v[axis] = 2.0 + 0.15 * i
    v[3] = 0.12 * (i % 4)
    v[4] = 0.08 * ((i * 3) % 5)
    v[5] = 0.05 * ((i * 7) % 3)
    v[6] = 0.04 * (i % 2)
    v[7] = 0.03 * ((i * 5) % 4)
    return v


def build_embedding_table() -> dict[str, list[float]]:
    table: dict[str, list[float]] = {}
    for axis, words in CLUSTERS.items():
        for i, word in enumerate(words):
            table[word] = make_vector(axis, i)
    return table


def write_embedding_file(table: dict[str, list[float]]) -> None:
    lines = [f"{len(table)} {DIM}"]
    for word in table:
        lines.append(word + " " + " ".join(f"{x:g}" for x in table[word]))
    (ASSETS / "embeddings.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- scripted model responses ------------------------------------------------

# Per-prompt masked-LM outputs.  Keyed by the exact prompt string the
# engine builds; probabilities descend within each list.
FILL_MASK: dict[str, list[tuple[str, float]]] = {
    # "Wrigley Field"
    f"{S1[:37]}[MASK] such as Wrigley Field.": [
        ("stadiums", 0.28125), ("venues", 0.1875), ("locations", 0.125),
        ("parks", 0.0625), ("places", 0.046875), ("fields", 0.03125),
    ],
    f"{S1[:37]}such [MASK] as Wrigley Field.": [
        ("stadiums", 0.25), ("venues", 0.15625), ("games", 0.125),
        ("teams", 0.09375), ("fields", 0.0625), ("arenas", 0.03125),
    ],
    f"{S1[:37]}Wrigley Field and some other [MASK].": [
        ("stadiums", 0.21875), ("locations", 0.15625), ("games", 0.109375),
        ("things", 0.078125), ("parks", 0.046875), ("sites", 0.03125),
    ],
    f"{S1[:37]}Wrigley Field and the other [MASK].": [
        ("venues", 0.25), ("teams", 0.1875), ("stadiums", 0.15625),
        ("locations", 0.09375), ("games", 0.0625), ("arenas", 0.046875),
    ],
    # "Sammy Sosa"
    f"[MASK] such as Sammy Sosa{S1[10:]}": [
        ("athletes", 0.3125), ("players", 0.25), ("stars", 0.125),
        ("legends", 0.0625), ("names", 0.046875), ("men", 0.03125),
    ],
    f"such [MASK] as Sammy Sosa{S1[10:]}": [
        ("players", 0.28125), ("athletes", 0.21875), ("stars", 0.15625),
        ("teammates", 0.09375), ("figures", 0.0625), ("heroes", 0.03125),
    ],
    f"Sammy Sosa and some other [MASK]{S1[10:]}": [
        ("athletes", 0.25), ("players", 0.1875), ("teammates", 0.125),
        ("stars", 0.09375), ("fans", 0.0625), ("greats", 0.03125),
    ],
    f"Sammy Sosa and the other [MASK]{S1[10:]}": [
        ("players", 0.3125), ("teammates", 0.1875), ("athletes", 0.15625),
        ("legends", 0.09375), ("heroes", 0.0625), ("icons", 0.03125),
    ],
    # "Governor Arnold Schwarzenegger"
    f"[MASK] such as Governor Arnold Schwarzenegger{S2[30:]}": [
        ("politicians", 0.3125), ("officials", 0.25), ("leaders", 0.15625),
        ("men", 0.09375), ("governors", 0.0625), ("figures", 0.03125),
    ],
    f"such [MASK] as Governor Arnold Schwarzenegger{S2[30:]}": [
        ("politicians", 0.28125), ("officials", 0.1875), ("men", 0.15625),
        ("celebrities", 0.09375), ("actors", 0.0625), ("speakers", 0.03125),
    ],
    f"Governor Arnold Schwarzenegger and some other [MASK]{S2[30:]}": [
        ("politicians", 0.25), ("leaders", 0.21875), ("officials", 0.125),
        ("men", 0.09375), ("actors", 0.046875), ("governors", 0.03125),
    ],
    f"Governor Arnold Schwarzenegger and the other [MASK]{S2[30:]}": [
        ("politicians", 0.3125), ("leaders", 0.25), ("celebrities", 0.125),
        ("figures", 0.0625), ("speakers", 0.046875), ("icons", 0.03125),
    ],
}


def _hyp(mention: str, type_phrase: str) -> str:
    return f"In this sentence, {mention} is a {type_phrase}."


# (premise, hypothesis) -> (entail, neutral, contradict); all k/64.
ENTAIL: dict[tuple[str, str], tuple[float, float, float]] = {
    # Wrigley Field, first level
    (S1, _hyp("Wrigley Field", "location")): (0.0625, 0.6875, 0.25),
    (S1, _hyp("Wrigley Field", "organization")): (0.03125, 0.71875, 0.25),
    (S1, _hyp("Wrigley Field", "person")): (0.015625, 0.734375, 0.25),
    # Wrigley Field, below /location
    (S1, _hyp("Wrigley Field", "building")): (0.65625, 0.21875, 0.125),
    (S1, _hyp("Wrigley Field", "city")): (0.09375, 0.65625, 0.25),
    (S1, _hyp("Wrigley Field", "country")): (0.046875, 0.703125, 0.25),
    # Wrigley Field, below /location/building
    (S1, _hyp("Wrigley Field", "stadium")): (0.96875, 0.015625, 0.015625),
    (S1, _hyp("Wrigley Field", "theater")): (0.03125, 0.71875, 0.25),
    # Sammy Sosa, first level
    (S1, _hyp("Sammy Sosa", "person")): (0.125, 0.625, 0.25),
    (S1, _hyp("Sammy Sosa", "organization")): (0.0625, 0.6875, 0.25),
    (S1, _hyp("Sammy Sosa", "location")): (0.03125, 0.71875, 0.25),
    # Sammy Sosa, below /person
    (S1, _hyp("Sammy Sosa", "athlete")): (0.5, 0.375, 0.125),
    (S1, _hyp("Sammy Sosa", "artist")): (0.015625, 0.734375, 0.25),
    (S1, _hyp("Sammy Sosa", "politician")): (0.09375, 0.65625, 0.25),
    # Governor Arnold Schwarzenegger, first level
    (S2, _hyp("Governor Arnold Schwarzenegger", "person")): (0.1875, 0.5625, 0.25),
    (S2, _hyp("Governor Arnold Schwarzenegger", "organization")): (0.0625, 0.6875, 0.25),
    (S2, _hyp("Governor Arnold Schwarzenegger", "location")): (0.03125, 0.71875, 0.25),
    # below /person
    (S2, _hyp("Governor Arnold Schwarzenegger", "politician")): (0.625, 0.25, 0.125),
    (S2, _hyp("Governor Arnold Schwarzenegger", "athlete")): (0.03125, 0.71875, 0.25),
    (S2, _hyp("Governor Arnold Schwarzenegger", "artist")): (0.015625, 0.734375, 0.25),
    # below /person/politician
    (S2, _hyp("Governor Arnold Schwarzenegger", "governor")): (0.5625, 0.3125, 0.125),
    (S2, _hyp("Governor Arnold Schwarzenegger", "president")): (0.25, 0.5, 0.25),
}

HEAD_WORDS: dict[tuple[str, int, int], str | None] = {
    (S1, 0, 10): None,
    (S1, 37, 50): None,
    (S2, 0, 30): "Governor",
}


def build_backend(table: dict[str, list[float]]) -> TableBackend:
    def fill_mask(payload: dict) -> dict:
        rows = FILL_MASK[payload["text"]]
        return {
            "predictions": [
                {"token": token, "probability": prob} for token, prob in rows
            ]
        }

    def entail(payload: dict) -> dict:
        e, n, c = ENTAIL[(payload["premise"], payload["hypothesis"])]
        return {"entail": e, "neutral": n, "contradict": c}

    def embed(payload: dict) -> dict:
        vectors = {t: table.get(t) for t in payload["tokens"]}
        return {"dim": DIM, "vectors": vectors}

    def head_word(payload: dict) -> dict:
        span = payload["span"]
        head = HEAD_WORDS[(payload["sentence"], span["start"], span["end"])]
        return {"head": head}

    return TableBackend(fill_mask=fill_mask, entail=entail, embed=embed, head_word=head_word)


def main() -> int:
    table = build_embedding_table()
    write_embedding_file(table)

    if FIXTURES.exists():
        shutil.rmtree(FIXTURES)
    FIXTURES.mkdir(parents=True)

    mentions = load_dataset(ASSETS / "mentions.jsonl")
    recorder = RecordingBackend(build_backend(table), FIXTURES)
    decisions = []
    # theta=0 gives maximal descent, so one pass covers every theta;
    # the ablation passes add the request variants the CLI switches make.
    variants = [
        dict(),
        dict(use_head_word=False),
        dict(use_ensemble=False),
    ]
    for i, variant in enumerate(variants):
        config = RunConfig(
            ontology_path=str(ASSETS / "ontology.txt"),
            verbalizer_path=str(ASSETS / "verbalizer.json"),
            patterns_path=str(ASSETS / "patterns.txt"),
            backend_kind="fixture",
            fixtures_dir=str(FIXTURES),
            theta=0.0,
            **variant,
        )
        engine = Engine.build(config, backend=recorder)
        run = engine.type_dataset(mentions)
        if i == 0:
            decisions = run

    # Sanity: the recorded corpus reproduces the documented walkthrough
    # at the default granularity setting.
    check = RunConfig(
        ontology_path=config.ontology_path,
        verbalizer_path=config.verbalizer_path,
        patterns_path=config.patterns_path,
        backend_kind="fixture",
        fixtures_dir=str(FIXTURES),
    )
    replay = Engine.build(check)
    expected = ["/person/athlete", "/location/building/stadium", "/person/politician"]
    got = [str(d.path) for d in replay.type_dataset(mentions)]
    assert got == expected, f"replay mismatch: {got} != {expected}"

    n_files = len(list(FIXTURES.glob("*.json")))
    print(f"wrote {ASSETS / 'embeddings.txt'} ({len(table)} words, dim {DIM})")
    print(f"wrote {n_files} fixtures to {FIXTURES}")
    print(json.dumps([d.to_json_obj()["path"] for d in decisions]))
    return 0


if __name__ == "__main__":
    sys.exit(main())
