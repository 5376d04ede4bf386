import http.server
import json
import threading

import pytest

from fgtyper.alignment import load_embedding_table
from fgtyper.backend import FixtureBackend, TableBackend, embedding_table_handler
from fgtyper.config import RunConfig
from fgtyper.engine import Engine
from fgtyper.evaluation import load_dataset
from fgtyper.ontology import load_ontology

from pathlib import Path

ASSETS = Path(__file__).resolve().parent.parent / "assets"


@pytest.fixture(scope="session")
def assets_dir() -> Path:
    return ASSETS


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return ASSETS / "fixtures"


@pytest.fixture(scope="session")
def fixture_backend(fixtures_dir):
    return FixtureBackend(fixtures_dir)


@pytest.fixture(scope="session")
def demo_ontology():
    return load_ontology(ASSETS / "ontology.txt")


@pytest.fixture(scope="session")
def embedding_table():
    table, dim = load_embedding_table(ASSETS / "embeddings.txt")
    return table, dim


@pytest.fixture(scope="session")
def demo_mentions():
    return load_dataset(ASSETS / "mentions.jsonl")


def make_config(**overrides) -> RunConfig:
    base = dict(
        ontology_path=str(ASSETS / "ontology.txt"),
        verbalizer_path=str(ASSETS / "verbalizer.json"),
        patterns_path=str(ASSETS / "patterns.txt"),
        backend_kind="fixture",
        fixtures_dir=str(ASSETS / "fixtures"),
    )
    base.update(overrides)
    return RunConfig(**base)


@pytest.fixture()
def demo_config() -> RunConfig:
    return make_config()


@pytest.fixture()
def demo_engine(demo_config) -> Engine:
    return Engine.build(demo_config)


@pytest.fixture()
def table_backend_factory(embedding_table):
    """TableBackend with the shipped embedding table plus custom handlers."""
    table, dim = embedding_table

    def factory(fill_mask=None, entail=None, head_word=None, embed=None):
        return TableBackend(
            fill_mask=fill_mask,
            entail=entail,
            embed=embed or embedding_table_handler(table, dim),
            head_word=head_word,
        )

    return factory


class _ProtocolStubHandler(http.server.BaseHTTPRequestHandler):
    backend: TableBackend = None

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        payload = json.loads(self.rfile.read(length))
        kind = self.path.strip("/")
        from fgtyper.backend import BackendRequest

        try:
            body = self.backend.call(BackendRequest(kind=kind, payload=payload))
            data = json.dumps(body).encode("utf-8")
            self.send_response(200)
        except Exception as exc:  # stub: surface errors as 500 bodies
            data = json.dumps({"error": str(exc)}).encode("utf-8")
            self.send_response(500)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture()
def protocol_stub_server():
    """Serve a TableBackend over the wire protocol on a loopback port."""
    servers = []

    def start(backend: TableBackend) -> str:
        handler = type("Handler", (_ProtocolStubHandler,), {"backend": backend})
        server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), handler)
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        servers.append(server)
        return f"http://127.0.0.1:{server.server_address[1]}"

    yield start
    for server in servers:
        server.shutdown()
        server.server_close()
