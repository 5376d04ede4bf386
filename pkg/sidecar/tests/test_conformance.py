from fastapi import FastAPI
from fastapi.testclient import TestClient

from fgtyper_sidecar.conformance import conformance_check


def results_by_rule(results):
    return {r.rule: r for r in results}


def test_compliant_sidecar_passes_every_rule(client_poster):
    results = conformance_check(client_poster)
    failed = [r for r in results if not r.passed]
    assert failed == [], [str(r) for r in failed]


def broken_app() -> FastAPI:
    """Deliberately non-conformant server: bad ordering, missing field."""
    app = FastAPI()

    @app.post("/fill_mask")
    def fill_mask(payload: dict):
        return {
            "predictions": [
                {"token": "a", "probability": 0.1},
                {"token": "b", "probability": 0.9},
            ]
        }

    @app.post("/entail")
    def entail(payload: dict):
        return {"entail": 0.6, "contradict": 0.4}  # neutral missing

    @app.post("/embed")
    def embed(payload: dict):
        return {"dim": 2, "vectors": {t: [1.0, 0.0] for t in payload["tokens"]}}

    @app.post("/head_word")
    def head(payload: dict):
        return {"head": 42}  # not a string

    return app


def test_broken_server_fails_specific_rules():
    client = TestClient(broken_app(), raise_server_exceptions=False)

    def post(kind, payload):
        resp = client.post(f"/{kind}", json=payload)
        try:
            body = resp.json()
        except ValueError:
            body = {}
        return resp.status_code, body

    by_rule = results_by_rule(conformance_check(post))
    assert not by_rule["fill_mask.schema_and_order"].passed
    assert "not sorted" in by_rule["fill_mask.schema_and_order"].detail
    assert not by_rule["entail.schema_and_sum"].passed
    assert not by_rule["embed.schema_and_oov"].passed  # OOV must map to null
    assert not by_rule["head_word.schema"].passed
    # accepting garbage it should reject is also non-conformant
    assert not by_rule["fill_mask.rejects_zero_masks"].passed
