import socket
import threading
import time
from pathlib import Path

import pytest
import torch
from transformers import (
    BertConfig,
    BertForMaskedLM,
    BertForSequenceClassification,
    BertTokenizer,
)

from fgtyper_sidecar.app import create_app
from fgtyper_sidecar.config import SidecarConfig

REPO_ROOT = Path(__file__).resolve().parent.parent.parent
DEMO_ASSETS = REPO_ROOT / "assets"

VOCAB_WORDS = (
    "sammy sosa got a standing ovation at wrigley field governor arnold "
    "schwarzenegger gives speech mission serve service project on veterans day "
    "such as and the some other things stadiums venues locations games teams "
    "players athletes politicians officials leaders men in this sentence is "
    "person location organization building stadium city country athlete artist "
    "politician president theater he she it was to of for with".split()
)


def build_tiny_models(base: Path) -> tuple[Path, Path]:
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", ".", ",", "'"] + sorted(
        set(VOCAB_WORDS)
    )
    vocab_file = base / "vocab.txt"
    vocab_file.write_text("\n".join(vocab), encoding="utf-8")
    tokenizer = BertTokenizer(str(vocab_file))

    common = dict(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=128,
    )

    torch.manual_seed(20240817)
    mlm_dir = base / "tiny-mlm"
    BertForMaskedLM(BertConfig(**common)).save_pretrained(mlm_dir)
    tokenizer.save_pretrained(mlm_dir)

    nli_dir = base / "tiny-nli"
    nli_config = BertConfig(
        **common,
        num_labels=3,
        id2label={0: "CONTRADICTION", 1: "NEUTRAL", 2: "ENTAILMENT"},
        label2id={"CONTRADICTION": 0, "NEUTRAL": 1, "ENTAILMENT": 2},
    )
    BertForSequenceClassification(nli_config).save_pretrained(nli_dir)
    tokenizer.save_pretrained(nli_dir)
    return mlm_dir, nli_dir


@pytest.fixture(scope="session")
def sidecar_config(tmp_path_factory) -> SidecarConfig:
    base = tmp_path_factory.mktemp("models")
    mlm_dir, nli_dir = build_tiny_models(base)
    return SidecarConfig(
        mlm_model=str(mlm_dir),
        nli_model=str(nli_dir),
        embeddings_path=str(DEMO_ASSETS / "embeddings.txt"),
    )


@pytest.fixture(scope="session")
def app(sidecar_config):
    return create_app(sidecar_config)


@pytest.fixture(scope="session")
def client(app):
    from fastapi.testclient import TestClient

    return TestClient(app, raise_server_exceptions=False)


@pytest.fixture(scope="session")
def client_poster(client):
    def post(kind: str, payload: dict):
        resp = client.post(f"/{kind}", json=payload)
        try:
            body = resp.json()
        except ValueError:
            body = {}
        return resp.status_code, body

    return post


def _free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="session")
def live_server_url(app):
    import uvicorn

    port = _free_port()
    server = uvicorn.Server(
        uvicorn.Config(app=app, host="127.0.0.1", port=port, log_level="warning")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 30
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("sidecar server did not start")
        time.sleep(0.05)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=10)
