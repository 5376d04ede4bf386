import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgtyper.backend import TableBackend
from fgtyper.candidates import (
    DEFAULT_PATTERNS,
    HearstPattern,
    build_prompt,
    default_min_votes,
    ensemble_vote,
    generate_candidates,
    load_patterns,
    normalize_label,
    parse_patterns,
)
from fgtyper.errors import ConfigError, PatternError, SpanError

from oracles import brute_force_vote

S1 = "Sammy Sosa got a standing ovation at Wrigley Field."
WRIGLEY = (37, 50)


# -- prompt construction --------------------------------------------------------


def test_trailing_pattern_appends_after_mention():
    prompt = build_prompt(S1, WRIGLEY, HearstPattern("{mention} and the other [MASK]"))
    assert prompt == "Sammy Sosa got a standing ovation at Wrigley Field and the other [MASK]."


def test_leading_pattern_replaces_in_place():
    prompt = build_prompt(S1, WRIGLEY, HearstPattern("[MASK] such as {mention}"))
    assert prompt == "Sammy Sosa got a standing ovation at [MASK] such as Wrigley Field."


def test_substitution_preserves_surroundings_byte_exactly():
    sentence = "Boston won again."
    prompt = build_prompt(sentence, (0, 6), HearstPattern("{mention}, a [MASK],"))
    assert prompt == "Boston, a [MASK], won again."
    assert prompt.endswith(sentence[6:])


@pytest.mark.parametrize("span", [(-1, 5), (5, 5), (10, 9), (0, 999)])
def test_invalid_span_rejected(span):
    with pytest.raises(SpanError):
        build_prompt(S1, span, HearstPattern("{mention} [MASK]"))


@pytest.mark.parametrize(
    "template",
    ["no slots", "{mention} only", "[MASK] only", "{mention} {mention} [MASK]"],
)
def test_malformed_pattern_rejected(template):
    with pytest.raises(PatternError):
        HearstPattern(template)


def test_pattern_file_parsing():
    patterns = parse_patterns("# comment\n[MASK] such as {mention}\n\n")
    assert [p.template for p in patterns] == ["[MASK] such as {mention}"]


def test_default_patterns_load(assets_dir):
    assert [p.template for p in load_patterns(assets_dir / "patterns.txt")] == list(
        DEFAULT_PATTERNS
    )


# -- normalization ----------------------------------------------------------------


@pytest.mark.parametrize(
    "raw,expected",
    [
        ("Stadiums", "stadium"),
        ("Venues", "venue"),
        ("cities", "city"),
        ("classes", "class"),
        ("buses", "bus"),
        ("people", "person"),
        ("children", "child"),
        ("men", "man"),
        ("women", "woman"),
        ("glass", "glass"),
    ],
)
def test_normalize_label(raw, expected):
    assert normalize_label(raw) == expected


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=12))
@settings(max_examples=300)
def test_normalization_idempotent(word):
    once = normalize_label(word)
    assert normalize_label(once) == once


# -- voting -----------------------------------------------------------------------


def test_default_min_votes_formula():
    assert default_min_votes(4) == 3
    assert default_min_votes(1) == 1
    assert default_min_votes(8) == 5


def test_vote_counting_example():
    lists = {
        "p1": ["a", "b", "c"],
        "p2": ["a", "b", "d"],
        "p3": ["a", "e", "f"],
        "p4": ["a", "b", "g"],
    }
    assert ensemble_vote(lists, 3) == {"a": 4, "b": 3}


def test_duplicate_tokens_count_once_per_pattern():
    assert ensemble_vote({"p1": ["a", "a", "a"]}, 1) == {"a": 1}


def test_plural_variants_merge_before_counting():
    lists = {"p1": ["Stadiums"], "p2": ["stadium"], "p3": ["STADIUM"]}
    assert ensemble_vote(lists, 3) == {"stadium": 3}


def test_min_votes_above_n_is_config_error():
    with pytest.raises(ConfigError):
        ensemble_vote({"p1": ["a"]}, 2)


token_lists = st.dictionaries(
    keys=st.sampled_from([f"pat{i}" for i in range(8)]),
    values=st.lists(
        st.sampled_from([f"w{i}" for i in range(20)]), min_size=0, max_size=12
    ),
    min_size=1,
    max_size=8,
)


@given(token_lists)
@settings(max_examples=120)
def test_vote_matches_brute_force_at_every_m(lists):
    for m in range(1, len(lists) + 1):
        assert ensemble_vote(lists, m) == brute_force_vote(lists, m, normalize_label)


@given(token_lists)
@settings(max_examples=120)
def test_vote_monotone_in_m(lists):
    n = len(lists)
    previous = None
    for m in range(1, n + 1):
        voted = set(ensemble_vote(lists, m))
        if previous is not None:
            assert voted <= previous
        previous = voted
    union = set()
    inter = None
    for tokens in lists.values():
        normalized = {normalize_label(t) for t in tokens}
        union |= normalized
        inter = normalized if inter is None else inter & normalized
    assert set(ensemble_vote(lists, 1)) == union
    assert set(ensemble_vote(lists, n)) == inter


@given(
    st.fixed_dictionaries(
        {
            f"pat{i}": st.lists(
                st.sampled_from([f"w{i}" for i in range(12)]), min_size=0, max_size=8
            )
            for i in range(4)
        }
    )
)
@settings(max_examples=100)
def test_dropping_one_pattern_changes_only_threshold_labels(lists):
    """Any 3-of-4 subset with the same m loses only labels voted exactly m times."""
    m = 3
    full = ensemble_vote(lists, m)
    for dropped in lists:
        subset = {k: v for k, v in lists.items() if k != dropped}
        reduced = ensemble_vote(subset, m)
        assert set(reduced) <= set(full)
        for label in set(full) - set(reduced):
            assert full[label] == m


# -- full candidate generation ------------------------------------------------------


def make_backend(per_prompt: dict, head=None):
    return TableBackend(
        fill_mask=lambda p: {
            "predictions": [
                {"token": t, "probability": round(0.5 - 0.01 * i, 4)}
                for i, t in enumerate(per_prompt[p["text"]])
            ]
        },
        head_word=lambda p: {"head": head},
    )


def test_generate_candidates_votes_and_audits():
    patterns = [HearstPattern(t) for t in DEFAULT_PATTERNS]
    per_prompt = {
        build_prompt(S1, WRIGLEY, p): tokens
        for p, tokens in zip(
            patterns,
            [
                ["stadiums", "venues", "locations", "##s"],
                ["stadiums", "venues", "games", "2010"],
                ["stadiums", "locations", "games", "things"],
                ["venues", "stadiums", "locations", "games"],
            ],
        )
    }
    cs = generate_candidates(S1, WRIGLEY, patterns, make_backend(per_prompt))
    assert cs.labels == {"stadium", "venue", "location", "game"}
    assert cs.vote_counts["stadium"] == 4
    assert "thing" not in cs.labels
    assert cs.head_word is None
    assert set(cs.per_pattern) == {p.template for p in patterns}
    # junk tokens are kept in the audit trail but never voted on
    assert all(c >= 3 for c in cs.vote_counts.values())


def test_generate_candidates_head_word_normalized():
    patterns = [HearstPattern("{mention} is a [MASK]")]
    per_prompt = {build_prompt(S1, (0, 10), patterns[0]): ["athletes"]}
    cs = generate_candidates(S1, (0, 10), patterns, make_backend(per_prompt, head="Governor"))
    assert cs.head_word == "governor"


def test_disjoint_pattern_outputs_yield_empty_labels():
    patterns = [HearstPattern(f"{{mention}} v{i} [MASK]") for i in range(4)]
    per_prompt = {
        build_prompt(S1, WRIGLEY, p): [f"only{i}"] for i, p in enumerate(patterns)
    }
    cs = generate_candidates(S1, WRIGLEY, patterns, make_backend(per_prompt), min_votes=3)
    assert cs.labels == set()
    assert cs.head_word is None
    assert cs.is_empty


def test_no_head_word_flag_skips_backend_call():
    patterns = [HearstPattern("{mention} [MASK]")]
    per_prompt = {build_prompt(S1, WRIGLEY, patterns[0]): ["venues"]}
    backend = TableBackend(
        fill_mask=lambda p: {
            "predictions": [{"token": t, "probability": 0.5} for t in per_prompt[p["text"]]]
        }
    )  # no head_word handler: calling it would raise
    cs = generate_candidates(S1, WRIGLEY, patterns, backend, use_head_word=False)
    assert cs.head_word is None
