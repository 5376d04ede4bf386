"""Model-service backends: fill-mask, entailment, embeddings, head words.

Every backend speaks the same wire protocol.  A request is one of four
kinds with a kind-specific payload; its canonical serialization (sorted
keys, no insignificant whitespace) is byte-stable, and the SHA-256 of
that serialization keys the fixture store.  ``FixtureBackend`` replays
recorded responses and is a pure function of (request, directory), which
is what makes the whole engine deterministic and offline.
"""

from __future__ import annotations

import hashlib
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

import requests

from fgtyper.errors import (
    BackendError,
    FixtureCorruptionError,
    MissingFixtureError,
    ProtocolError,
)

KINDS = ("fill_mask", "entail", "embed", "head_word")

VERDICT_SUM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class MaskPrediction:
    token: str
    probability: float


@dataclass(frozen=True)
class EntailmentVerdict:
    entail: float
    neutral: float
    contradict: float


@dataclass(frozen=True)
class BackendRequest:
    kind: str
    payload: dict

    def canonical(self) -> str:
        return json.dumps(
            {"kind": self.kind, "payload": self.payload},
            sort_keys=True,
            separators=(",", ":"),
            ensure_ascii=False,
        )

    def hash(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()

    @classmethod
    def parse(cls, text: str) -> "BackendRequest":
        obj = json.loads(text)
        if not isinstance(obj, dict) or set(obj) != {"kind", "payload"}:
            raise ProtocolError(f"malformed request record: {text[:200]!r}")
        if obj["kind"] not in KINDS:
            raise ProtocolError(f"unknown request kind {obj['kind']!r}")
        return cls(kind=obj["kind"], payload=obj["payload"])

    @classmethod
    def fill_mask(cls, text: str, top_k: int) -> "BackendRequest":
        return cls("fill_mask", {"text": text, "top_k": top_k})

    @classmethod
    def entail(cls, premise: str, hypothesis: str) -> "BackendRequest":
        return cls("entail", {"premise": premise, "hypothesis": hypothesis})

    @classmethod
    def embed(cls, tokens: Sequence[str]) -> "BackendRequest":
        return cls("embed", {"tokens": list(tokens)})

    @classmethod
    def head_word(cls, sentence: str, span: tuple[int, int]) -> "BackendRequest":
        return cls(
            "head_word",
            {"sentence": sentence, "span": {"start": span[0], "end": span[1]}},
        )


# -- response decoding (shared by every backend) ----------------------------


def decode_fill_mask(response: dict) -> list[MaskPrediction]:
    try:
        rows = response["predictions"]
        preds = [MaskPrediction(str(r["token"]), float(r["probability"])) for r in rows]
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"malformed fill_mask response: {exc}") from None
    for p in preds:
        if not 0.0 <= p.probability <= 1.0:
            raise ProtocolError(f"probability out of range: {p}")
    for a, b in zip(preds, preds[1:]):
        if a.probability < b.probability:
            raise ProtocolError("fill_mask predictions not sorted descending")
    return preds


def decode_entail(response: dict) -> EntailmentVerdict:
    try:
        verdict = EntailmentVerdict(
            entail=float(response["entail"]),
            neutral=float(response["neutral"]),
            contradict=float(response["contradict"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ProtocolError(f"malformed entail response: {exc}") from None
    for value in (verdict.entail, verdict.neutral, verdict.contradict):
        if not 0.0 <= value <= 1.0:
            raise ProtocolError(f"entailment probability out of range: {verdict}")
    total = verdict.entail + verdict.neutral + verdict.contradict
    if abs(total - 1.0) > VERDICT_SUM_TOLERANCE:
        raise ProtocolError(f"entailment probabilities sum to {total}, not 1")
    return verdict


def decode_embed(response: dict) -> dict[str, tuple[float, ...] | None]:
    try:
        dim = int(response["dim"])
        raw = response["vectors"]
        vectors: dict[str, tuple[float, ...] | None] = {}
        for word, vec in raw.items():
            vectors[word] = None if vec is None else tuple(float(x) for x in vec)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ProtocolError(f"malformed embed response: {exc}") from None
    for word, vec in vectors.items():
        if vec is not None and len(vec) != dim:
            raise ProtocolError(f"vector for {word!r} has length {len(vec)}, dim={dim}")
    return vectors


def decode_head_word(response: dict) -> str | None:
    try:
        head = response["head"]
    except (KeyError, TypeError) as exc:
        raise ProtocolError(f"malformed head_word response: {exc}") from None
    if head is not None and not isinstance(head, str):
        raise ProtocolError(f"head must be string or null, got {head!r}")
    return head


class Backend(ABC):
    """One entry point (``call``) plus typed convenience wrappers."""

    @abstractmethod
    def call(self, request: BackendRequest) -> dict:
        """Return the wire-format response object for ``request``."""

    def fill_mask(self, text: str, top_k: int) -> list[MaskPrediction]:
        if top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {top_k}")
        if text.count("[MASK]") != 1:
            raise ValueError(f"text must contain exactly one [MASK] slot: {text!r}")
        preds = decode_fill_mask(self.call(BackendRequest.fill_mask(text, top_k)))
        return preds[:top_k]

    def entail(self, premise: str, hypothesis: str) -> EntailmentVerdict:
        if not premise or not hypothesis:
            raise ValueError("premise and hypothesis must be non-empty")
        return decode_entail(self.call(BackendRequest.entail(premise, hypothesis)))

    def embed(self, tokens: Sequence[str]) -> dict[str, tuple[float, ...] | None]:
        return decode_embed(self.call(BackendRequest.embed(tokens)))

    def head_word(self, sentence: str, span: tuple[int, int]) -> str | None:
        start, end = span
        if not (0 <= start < end <= len(sentence)):
            raise ValueError(f"span {span} out of bounds for sentence of length {len(sentence)}")
        return decode_head_word(self.call(BackendRequest.head_word(sentence, span)))


class FixtureBackend(Backend):
    """Replays recorded responses from ``<sha256>.json`` files."""

    def __init__(self, fixtures_dir: str | Path):
        self.fixtures_dir = Path(fixtures_dir)

    def call(self, request: BackendRequest) -> dict:
        key = request.hash()
        path = self.fixtures_dir / f"{key}.json"
        if not path.is_file():
            raise MissingFixtureError(key)
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"fixture {key} is not valid JSON: {exc}") from None


class RemoteBackend(Backend):
    """HTTP/JSON client for a live model service."""

    def __init__(self, base_url: str, timeout: float = 60.0, session=None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.session = session or requests.Session()

    def call(self, request: BackendRequest) -> dict:
        url = f"{self.base_url}/{request.kind}"
        try:
            resp = self.session.post(url, json=request.payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise BackendError(f"backend unreachable at {url}: {exc}") from None
        if resp.status_code != 200:
            raise BackendError(f"backend returned {resp.status_code} for {url}: {resp.text[:200]}")
        try:
            body = resp.json()
        except ValueError as exc:
            raise ProtocolError(f"non-JSON response from {url}: {exc}") from None
        if not isinstance(body, dict):
            raise ProtocolError(f"response from {url} is not an object")
        return body


class RecordingBackend(Backend):
    """Delegates to a live backend and persists every response as a fixture.

    Requires an exclusive writer; keeps an in-session map of hash to
    canonical request so a genuine hash collision surfaces as corruption
    instead of silently overwriting an unrelated fixture.
    """

    def __init__(self, live: Backend, fixtures_dir: str | Path):
        self.live = live
        self.fixtures_dir = Path(fixtures_dir)
        self.fixtures_dir.mkdir(parents=True, exist_ok=True)
        self._seen: dict[str, str] = {}

    def call(self, request: BackendRequest) -> dict:
        response = self.live.call(request)
        record_fixture(request, response, self.fixtures_dir, seen=self._seen)
        return response


def record_fixture(
    request: BackendRequest,
    response: dict,
    fixtures_dir: str | Path,
    seen: dict[str, str] | None = None,
) -> Path:
    """Persist ``response`` verbatim under the content hash of ``request``."""
    key = request.hash()
    canonical = request.canonical()
    if seen is not None:
        previous = seen.get(key)
        if previous is not None and previous != canonical:
            raise FixtureCorruptionError(
                f"hash collision on {key}: {previous!r} vs {canonical!r}"
            )
        seen[key] = canonical
    path = Path(fixtures_dir) / f"{key}.json"
    path.write_text(
        json.dumps(response, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        + "\n",
        encoding="utf-8",
    )
    return path


class TableBackend(Backend):
    """In-memory backend driven by plain callables.

    Used for fixture authoring and tests; each handler receives the
    request payload and returns a wire-format response object.
    """

    def __init__(
        self,
        fill_mask: Callable[[dict], dict] | None = None,
        entail: Callable[[dict], dict] | None = None,
        embed: Callable[[dict], dict] | None = None,
        head_word: Callable[[dict], dict] | None = None,
    ):
        self._handlers: dict[str, Callable[[dict], dict] | None] = {
            "fill_mask": fill_mask,
            "entail": entail,
            "embed": embed,
            "head_word": head_word,
        }

    def call(self, request: BackendRequest) -> dict:
        handler = self._handlers.get(request.kind)
        if handler is None:
            raise BackendError(f"no handler for request kind {request.kind!r}")
        return handler(request.payload)


def embedding_table_handler(
    table: dict[str, Sequence[float]], dim: int
) -> Callable[[dict], dict]:
    """Build a TableBackend embed handler from a word-vector table."""

    def handler(payload: dict) -> dict:
        vectors: dict[str, Any] = {}
        for token in payload["tokens"]:
            vec = table.get(token)
            vectors[token] = None if vec is None else [float(x) for x in vec]
        return {"dim": dim, "vectors": vectors}

    return handler
