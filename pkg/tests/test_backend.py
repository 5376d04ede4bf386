import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgtyper.backend import (
    BackendRequest,
    FixtureBackend,
    MaskPrediction,
    RecordingBackend,
    RemoteBackend,
    TableBackend,
    record_fixture,
)
from fgtyper.errors import (
    BackendError,
    FixtureCorruptionError,
    MissingFixtureError,
    ProtocolError,
)


def scripted_backend() -> TableBackend:
    return TableBackend(
        fill_mask=lambda p: {
            "predictions": [
                {"token": "stadiums", "probability": 0.5},
                {"token": "venues", "probability": 0.25},
            ][: p["top_k"]]
        },
        entail=lambda p: {"entail": 0.7, "neutral": 0.2, "contradict": 0.1},
        embed=lambda p: {
            "dim": 2,
            "vectors": {t: ([1.0, 0.0] if t != "zzzzqq" else None) for t in p["tokens"]},
        },
        head_word=lambda p: {"head": "Governor"},
    )


# -- canonical serialization ----------------------------------------------------

text_strategy = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=30
)

request_strategy = st.one_of(
    st.builds(
        BackendRequest.fill_mask, text_strategy, st.integers(min_value=1, max_value=50)
    ),
    st.builds(BackendRequest.entail, text_strategy, text_strategy),
    st.builds(
        BackendRequest.embed, st.lists(text_strategy, min_size=0, max_size=8)
    ),
    st.builds(
        BackendRequest.head_word,
        text_strategy,
        st.tuples(st.integers(0, 5), st.integers(6, 20)),
    ),
)


@given(request_strategy)
@settings(max_examples=150)
def test_canonical_serialization_round_trip(request):
    canonical = request.canonical()
    assert BackendRequest.parse(canonical).canonical() == canonical


def test_canonical_is_key_sorted_and_compact():
    req = BackendRequest.entail("premise here", "hypothesis here")
    assert req.canonical() == (
        '{"kind":"entail","payload":{"hypothesis":"hypothesis here",'
        '"premise":"premise here"}}'
    )


# -- typed wrappers ---------------------------------------------------------------


def test_fill_mask_wrapper():
    preds = scripted_backend().fill_mask("a [MASK] b", 10)
    assert preds[0] == MaskPrediction("stadiums", 0.5)
    assert [p.probability for p in preds] == sorted(
        (p.probability for p in preds), reverse=True
    )


def test_fill_mask_top_k_one_is_singleton():
    assert len(scripted_backend().fill_mask("a [MASK]", 1)) == 1


@pytest.mark.parametrize("text", ["no mask here", "[MASK] and [MASK]"])
def test_fill_mask_requires_exactly_one_slot(text):
    with pytest.raises(ValueError):
        scripted_backend().fill_mask(text, 5)


def test_entail_verdict_fields():
    v = scripted_backend().entail("p", "h")
    assert (v.entail, v.neutral, v.contradict) == (0.7, 0.2, 0.1)


def test_entail_rejects_empty_inputs():
    with pytest.raises(ValueError):
        scripted_backend().entail("", "h")


def test_embed_oov_token_absent_value():
    vectors = scripted_backend().embed(["known", "zzzzqq"])
    assert vectors["known"] == (1.0, 0.0)
    assert vectors["zzzzqq"] is None


def test_embed_repeated_token_single_entry():
    vectors = scripted_backend().embed(["word", "word"])
    assert list(vectors) == ["word"]


def test_head_word_span_bounds_checked():
    with pytest.raises(ValueError):
        scripted_backend().head_word("short", (3, 99))


# -- protocol validation ----------------------------------------------------------


def test_unsorted_fill_mask_is_protocol_error():
    bad = TableBackend(
        fill_mask=lambda p: {
            "predictions": [
                {"token": "a", "probability": 0.1},
                {"token": "b", "probability": 0.9},
            ]
        }
    )
    with pytest.raises(ProtocolError):
        bad.fill_mask("x [MASK]", 5)


def test_entail_sum_out_of_tolerance_is_protocol_error():
    bad = TableBackend(entail=lambda p: {"entail": 0.5, "neutral": 0.5, "contradict": 0.5})
    with pytest.raises(ProtocolError):
        bad.entail("p", "h")


def test_entail_missing_field_is_protocol_error():
    bad = TableBackend(entail=lambda p: {"entail": 0.5, "contradict": 0.5})
    with pytest.raises(ProtocolError):
        bad.entail("p", "h")


def test_embed_dim_mismatch_is_protocol_error():
    bad = TableBackend(embed=lambda p: {"dim": 3, "vectors": {"w": [1.0]}})
    with pytest.raises(ProtocolError):
        bad.embed(["w"])


# -- fixture store ------------------------------------------------------------------


def test_record_then_replay_equal_responses(tmp_path):
    recorder = RecordingBackend(scripted_backend(), tmp_path)
    live = recorder.entail("p", "h")
    replayed = FixtureBackend(tmp_path).entail("p", "h")
    assert live == replayed


def test_missing_fixture_error_names_hash(tmp_path):
    req = BackendRequest.entail("p", "h")
    with pytest.raises(MissingFixtureError) as err:
        FixtureBackend(tmp_path).entail("p", "h")
    assert req.hash() in str(err.value)


def test_rerecording_is_idempotent(tmp_path):
    recorder = RecordingBackend(scripted_backend(), tmp_path)
    recorder.entail("p", "h")
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    before = files[0].read_bytes()
    recorder.entail("p", "h")
    assert files[0].read_bytes() == before


def test_fixture_file_is_response_verbatim(tmp_path):
    recorder = RecordingBackend(scripted_backend(), tmp_path)
    recorder.entail("p", "h")
    req = BackendRequest.entail("p", "h")
    body = json.loads((tmp_path / f"{req.hash()}.json").read_text())
    assert body == {"entail": 0.7, "neutral": 0.2, "contradict": 0.1}


def test_hash_collision_detected_as_corruption(tmp_path):
    seen = {}
    req = BackendRequest.entail("p", "h")
    record_fixture(req, {"entail": 1.0, "neutral": 0.0, "contradict": 0.0}, tmp_path, seen)
    forged = dict(seen)
    other = BackendRequest.entail("p", "different")
    forged[other.hash()] = req.canonical()  # simulate a colliding key
    with pytest.raises(FixtureCorruptionError):
        record_fixture(other, {}, tmp_path, forged)


def test_fixture_backend_pure_function_of_store(tmp_path):
    recorder = RecordingBackend(scripted_backend(), tmp_path)
    recorder.fill_mask("a [MASK]", 2)
    fb = FixtureBackend(tmp_path)
    assert fb.fill_mask("a [MASK]", 2) == fb.fill_mask("a [MASK]", 2)


def test_shipped_fixtures_rank_location_over_person_for_wrigley(fixture_backend):
    s1 = "Sammy Sosa got a standing ovation at Wrigley Field."
    loc = fixture_backend.entail(s1, "In this sentence, Wrigley Field is a location.")
    person = fixture_backend.entail(s1, "In this sentence, Wrigley Field is a person.")
    org = fixture_backend.entail(s1, "In this sentence, Wrigley Field is a organization.")
    assert loc.entail > org.entail
    assert loc.entail > person.entail


def test_shipped_fixture_verdicts_sum_to_one(fixtures_dir):
    """Every recorded entailment verdict in the shipped store sums to 1."""
    checked = 0
    for path in sorted(fixtures_dir.glob("*.json")):
        body = json.loads(path.read_text())
        if set(body) == {"entail", "neutral", "contradict"}:
            total = body["entail"] + body["neutral"] + body["contradict"]
            assert abs(total - 1.0) <= 1e-6, path.name
            checked += 1
    assert checked >= 20


# -- remote client vs fixture backend: shared contract -------------------------------


@pytest.fixture()
def remote_backend(protocol_stub_server):
    return RemoteBackend(protocol_stub_server(scripted_backend()))


@pytest.fixture(params=["fixture", "remote"])
def conformant_backend(request, tmp_path, remote_backend):
    if request.param == "remote":
        return remote_backend
    recorder = RecordingBackend(scripted_backend(), tmp_path)
    recorder.fill_mask("a [MASK] b", 10)
    recorder.entail("p", "h")
    recorder.embed(["known", "zzzzqq"])
    recorder.head_word("Governor Arnold Schwarzenegger spoke.", (0, 30))
    return FixtureBackend(tmp_path)


def test_backend_contract(conformant_backend):
    b = conformant_backend
    preds = b.fill_mask("a [MASK] b", 10)
    assert preds and preds == sorted(preds, key=lambda p: -p.probability)
    assert all(0.0 <= p.probability <= 1.0 for p in preds)

    verdict = b.entail("p", "h")
    assert abs(verdict.entail + verdict.neutral + verdict.contradict - 1.0) <= 1e-6

    vectors = b.embed(["known", "zzzzqq"])
    assert vectors["known"] is not None and vectors["zzzzqq"] is None

    assert b.head_word("Governor Arnold Schwarzenegger spoke.", (0, 30)) == "Governor"


def test_remote_backend_http_error(protocol_stub_server):
    url = protocol_stub_server(TableBackend())  # no handlers: every call 500s
    with pytest.raises(BackendError):
        RemoteBackend(url).entail("p", "h")


def test_remote_backend_unreachable():
    with pytest.raises(BackendError):
        RemoteBackend("http://127.0.0.1:9", timeout=0.2).entail("p", "h")
