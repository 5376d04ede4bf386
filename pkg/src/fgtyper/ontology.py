"""Type ontology: a forest of hypernym trees addressed by slash paths.

Ontologies load from a plain-text format (one ``/a/b/c`` path per line,
``#`` comments, ancestors implied) and are immutable afterwards, so they
are safe to share across threads.  Structural checking is split off onto
``TypeGraph`` because the violations worth detecting (multiple parents,
cycles, orphaned subtrees) cannot even be represented by the cooked
forest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from fgtyper.errors import PathSyntaxError, UnknownPathError

_SEGMENT_RE = re.compile(r"^[a-z0-9_]+$")

# Names too vague to discriminate types; flagged as advisory, never removed.
VAGUE_TYPE_NAMES = frozenset(
    {"other", "others", "thing", "things", "object", "objects", "entity",
     "entities", "misc", "miscellaneous", "stuff"}
)

HARD = "hard"
ADVISORY = "advisory"


def normalize_type_name(raw: str) -> str:
    """Canonical type-name form: lowercase, spaces and hyphens to underscores."""
    return re.sub(r"[\s\-]+", "_", raw.strip().lower())


@dataclass(frozen=True, order=True)
class TypePath:
    """An ontology address, e.g. ``/location/building/stadium``."""

    segments: tuple[str, ...]

    def __post_init__(self):
        if not self.segments:
            raise PathSyntaxError("empty type path")
        for seg in self.segments:
            if not _SEGMENT_RE.match(seg):
                raise PathSyntaxError(f"bad path segment {seg!r} in {self.segments}")

    @classmethod
    def parse(cls, text: str) -> "TypePath":
        if not text.startswith("/"):
            raise PathSyntaxError(f"type path must start with '/': {text!r}")
        parts = text.split("/")[1:]
        if any(p == "" for p in parts):
            raise PathSyntaxError(f"empty segment in type path {text!r}")
        return cls(tuple(normalize_type_name(p) for p in parts))

    @property
    def name(self) -> str:
        return self.segments[-1]

    @property
    def depth(self) -> int:
        return len(self.segments)

    def parent(self) -> "TypePath | None":
        if len(self.segments) == 1:
            return None
        return TypePath(self.segments[:-1])

    def prefixes(self) -> list["TypePath"]:
        """All ancestors-or-self, shallowest first; length equals depth."""
        return [TypePath(self.segments[: i + 1]) for i in range(len(self.segments))]

    def child(self, name: str) -> "TypePath":
        return TypePath(self.segments + (name,))

    def is_prefix_of(self, other: "TypePath") -> bool:
        return self.segments == other.segments[: len(self.segments)]

    def __str__(self) -> str:
        return "/" + "/".join(self.segments)


@dataclass(frozen=True)
class TypeNode:
    path: TypePath
    children: tuple[TypePath, ...]  # sorted

    @property
    def name(self) -> str:
        return self.path.name

    @property
    def depth(self) -> int:
        return self.path.depth

    @property
    def parent(self) -> TypePath | None:
        return self.path.parent()

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class Violation:
    rule: str
    node: str
    detail: str
    severity: str = HARD

    def __str__(self) -> str:
        return f"[{self.severity}] {self.rule}: {self.node} ({self.detail})"


@dataclass
class TypeGraph:
    """Raw name graph for structural validation; may be arbitrarily broken."""

    nodes: set[str] = field(default_factory=set)
    edges: set[tuple[str, str]] = field(default_factory=set)  # (parent, child)

    def add_edge(self, parent: str, child: str) -> None:
        self.nodes.add(parent)
        self.nodes.add(child)
        self.edges.add((parent, child))

    def parents_of(self, node: str) -> set[str]:
        return {p for (p, c) in self.edges if c == node}

    def roots(self) -> set[str]:
        return {n for n in self.nodes if not self.parents_of(n)}


class TypeOntology:
    """Immutable forest of types with exact path round-tripping."""

    def __init__(self, paths: Iterable[TypePath]):
        closed: set[TypePath] = set()
        for p in paths:
            closed.update(p.prefixes())
        children: dict[TypePath, list[TypePath]] = {p: [] for p in closed}
        for p in closed:
            parent = p.parent()
            if parent is not None:
                children[parent].append(p)
        self._index: dict[str, TypeNode] = {}
        for p in sorted(closed):
            self._index[str(p)] = TypeNode(path=p, children=tuple(sorted(children[p])))
        self._roots = tuple(sorted(p for p in closed if p.depth == 1))

    # -- lookup ----------------------------------------------------------

    @property
    def roots(self) -> tuple[TypePath, ...]:
        return self._roots

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, path: TypePath) -> bool:
        return str(path) in self._index

    def __iter__(self) -> Iterator[TypePath]:
        """Paths in lexicographic order."""
        for key in self._index:
            yield self._index[key].path

    def node(self, path: TypePath) -> TypeNode:
        try:
            return self._index[str(path)]
        except KeyError:
            raise UnknownPathError(f"unknown type path {path}") from None

    def children(self, path: TypePath) -> set[TypePath]:
        return set(self.node(path).children)

    def is_descendant_or_equal(self, candidate: TypePath, ancestor: TypePath) -> bool:
        self.node(candidate)
        self.node(ancestor)
        return ancestor.is_prefix_of(candidate)

    def paths_named(self, name: str) -> tuple[TypePath, ...]:
        """Every node whose final segment is ``name``, in path order."""
        return tuple(p for p in self if p.name == name)

    def graph(self) -> TypeGraph:
        g = TypeGraph()
        for path in self:
            g.nodes.add(str(path))
            parent = path.parent()
            if parent is not None:
                g.add_edge(str(parent), str(path))
        return g


def parse_ontology(text: str) -> TypeOntology:
    """Parse the slash-path text format; duplicates are idempotent."""
    paths: list[TypePath] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            paths.append(TypePath.parse(line))
        except PathSyntaxError as exc:
            raise PathSyntaxError(f"line {lineno}: {exc}") from None
    return TypeOntology(paths)


def load_ontology(source: str | Path) -> TypeOntology:
    return parse_ontology(Path(source).read_text(encoding="utf-8"))


# -- structural validation -------------------------------------------------


def _tarjan_sccs(nodes: set[str], edges: set[tuple[str, str]]) -> list[set[str]]:
    """Iterative Tarjan strongly-connected components."""
    out: dict[str, list[str]] = {n: [] for n in nodes}
    for p, c in edges:
        out[p].append(c)
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[set[str]] = []
    counter = 0

    for start in sorted(nodes):
        if start in index:
            continue
        work = [(start, iter(sorted(out[start])))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = low[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(sorted(out[succ]))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == node:
                        break
                sccs.append(comp)
    return sccs


def validate_graph(graph: TypeGraph) -> list[Violation]:
    """Structural violations: multiple parents, cycles, unrooted nodes.

    Advisory findings (vague type names) ride along with severity
    ``advisory`` and never affect the hard verdict.
    """
    violations: list[Violation] = []

    parent_count: dict[str, set[str]] = {n: set() for n in graph.nodes}
    for p, c in graph.edges:
        parent_count[c].add(p)
    for node in sorted(graph.nodes):
        parents = parent_count[node]
        if len(parents) > 1:
            violations.append(
                Violation("multiple_parents", node, f"parents: {sorted(parents)}")
            )

    cyclic_nodes: set[str] = set()
    for comp in _tarjan_sccs(graph.nodes, graph.edges):
        is_cycle = len(comp) > 1 or any((n, n) in graph.edges for n in comp)
        if is_cycle:
            cyclic_nodes.update(comp)
            rep = min(comp)
            violations.append(
                Violation("cycle", rep, f"cycle through {sorted(comp)}")
            )

    reached: set[str] = set()
    frontier = sorted(graph.roots())
    out: dict[str, list[str]] = {n: [] for n in graph.nodes}
    for p, c in graph.edges:
        out[p].append(c)
    while frontier:
        node = frontier.pop()
        if node in reached:
            continue
        reached.add(node)
        frontier.extend(out[node])
    for node in sorted(graph.nodes):
        if node not in reached and node not in cyclic_nodes:
            violations.append(
                Violation("unreachable", node, "not reachable from any root")
            )

    for node in sorted(graph.nodes):
        name = node.rsplit("/", 1)[-1]
        if name in VAGUE_TYPE_NAMES:
            violations.append(
                Violation(
                    "vague_name",
                    node,
                    "too general to discriminate types; consider a stronger parent",
                    severity=ADVISORY,
                )
            )

    violations.sort(key=lambda v: (v.severity, v.rule, v.node))
    return violations


def validate_ontology(ontology: TypeOntology | TypeGraph) -> list[Violation]:
    if isinstance(ontology, TypeGraph):
        return validate_graph(ontology)
    return validate_graph(ontology.graph())


def hard_violations(violations: list[Violation]) -> list[Violation]:
    return [v for v in violations if v.severity == HARD]
