"""Protocol conformance battery: canned requests, schema and ordering checks.

Works against any callable ``post(kind, payload) -> (status, body)`` so
it can drive a live HTTP endpoint or an in-process test client.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import requests

SUM_TOLERANCE = 1e-6

SENTENCE = (
    "Governor Arnold Schwarzenegger gives a speech at Mission Serve's "
    "service project on Veterans Day 2010."
)

Poster = Callable[[str, dict], tuple[int, dict]]


@dataclass(frozen=True)
class RuleResult:
    rule: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        suffix = f" ({self.detail})" if self.detail and not self.passed else ""
        return f"{status} {self.rule}{suffix}"


def http_poster(base_url: str, timeout: float = 60.0) -> Poster:
    base = base_url.rstrip("/")

    def post(kind: str, payload: dict) -> tuple[int, dict]:
        resp = requests.post(f"{base}/{kind}", json=payload, timeout=timeout)
        try:
            body = resp.json()
        except ValueError:
            body = {}
        return resp.status_code, body

    return post


def _check_fill_mask_body(body: dict, top_k: int) -> str:
    preds = body.get("predictions")
    if not isinstance(preds, list):
        return "predictions missing or not a list"
    if len(preds) > top_k:
        return f"{len(preds)} predictions for top_k={top_k}"
    probs = []
    for row in preds:
        if not isinstance(row, dict) or set(row) != {"token", "probability"}:
            return f"bad prediction row {row!r}"
        if not isinstance(row["token"], str):
            return "token is not a string"
        p = row["probability"]
        if not isinstance(p, (int, float)) or not 0.0 <= p <= 1.0:
            return f"probability out of range: {p!r}"
        probs.append(float(p))
    if any(a < b for a, b in zip(probs, probs[1:])):
        return "predictions not sorted descending"
    return ""


def _check_entail_body(body: dict) -> str:
    expected = {"entail", "neutral", "contradict"}
    if set(body) != expected:
        return f"fields {sorted(body)} != {sorted(expected)}"
    for key in expected:
        value = body[key]
        if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
            return f"{key} out of range: {value!r}"
    total = sum(body.values())
    if abs(total - 1.0) > SUM_TOLERANCE:
        return f"probabilities sum to {total}"
    return ""


def conformance_check(target: str | Poster) -> list[RuleResult]:
    post = http_poster(target) if isinstance(target, str) else target
    results: list[RuleResult] = []

    def rule(name: str, passed: bool, detail: str = "") -> None:
        results.append(RuleResult(name, bool(passed), detail))

    mask_text = f"{SENTENCE[:-1]} and the other [MASK]."

    status, body = post("fill_mask", {"text": mask_text, "top_k": 5})
    rule("fill_mask.status", status == 200, f"status {status}")
    detail = _check_fill_mask_body(body, 5) if status == 200 else "skipped"
    rule("fill_mask.schema_and_order", status == 200 and not detail, detail)

    status, body = post("fill_mask", {"text": mask_text, "top_k": 1})
    singleton = status == 200 and len(body.get("predictions", [])) <= 1
    rule("fill_mask.top_k_one", singleton, f"status {status}")

    status, _ = post("fill_mask", {"text": "no slot here", "top_k": 5})
    rule("fill_mask.rejects_zero_masks", 400 <= status < 500, f"status {status}")
    status, _ = post("fill_mask", {"text": "[MASK] and [MASK]", "top_k": 5})
    rule("fill_mask.rejects_two_masks", 400 <= status < 500, f"status {status}")

    payload = {"premise": SENTENCE, "hypothesis": "In this sentence, X is a person."}
    status, body = post("entail", payload)
    rule("entail.status", status == 200, f"status {status}")
    detail = _check_entail_body(body) if status == 200 else "skipped"
    rule("entail.schema_and_sum", status == 200 and not detail, detail)

    _, repeat = post("entail", payload)
    rule("entail.deterministic", body == repeat)

    status, _ = post("entail", {"premise": "", "hypothesis": "x"})
    rule("entail.rejects_empty_premise", 400 <= status < 500, f"status {status}")

    status, body = post("embed", {"tokens": ["governor", "zzzzqq"]})
    rule("embed.status", status == 200, f"status {status}")
    if status == 200:
        dim = body.get("dim")
        vectors = body.get("vectors", {})
        known = vectors.get("governor")
        ok = (
            isinstance(dim, int)
            and isinstance(vectors, dict)
            and isinstance(known, list)
            and len(known) == dim
            and vectors.get("zzzzqq") is None
        )
        rule("embed.schema_and_oov", ok, f"dim={dim!r}")
    else:
        rule("embed.schema_and_oov", False, "skipped")

    status, body = post(
        "head_word", {"sentence": SENTENCE, "span": {"start": 0, "end": 30}}
    )
    rule("head_word.status", status == 200, f"status {status}")
    head = body.get("head") if status == 200 else None
    rule(
        "head_word.schema",
        status == 200 and (head is None or isinstance(head, str)),
        f"head={head!r}",
    )

    status, _ = post("head_word", {"sentence": "short", "span": {"start": 2, "end": 99}})
    rule("head_word.rejects_bad_span", 400 <= status < 500, f"status {status}")

    return results
