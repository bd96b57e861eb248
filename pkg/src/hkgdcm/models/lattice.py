"""Graphs used as hopping patterns: kagome lattices and edge-list files."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx

from ..errors import InvalidModelError

__all__ = ["KagomeLattice", "GraphModel", "read_edge_list", "write_edge_list"]


@dataclass(frozen=True)
class KagomeLattice:
    """Periodic kagome lattice of ``l1 x l2`` unit cells.

    Each cell ``(x, y)`` holds three sites at the corners of an up-triangle:
    ``A`` at the cell origin, ``B`` half way along ``a1`` and ``C`` half way
    along ``a2``.  Site ``s`` of cell ``(x, y)`` has index
    ``3 * (x * l2 + y) + s``.  Hexagon ``k`` is the one whose lower-left
    corner is the ``C`` site of cell ``k``.
    """

    l1: int
    l2: int
    edges: tuple[tuple[int, int], ...] = field(init=False, repr=False)
    hexagons: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.l1 < 2 or self.l2 < 2:
            # l = 1 folds bonds onto themselves under periodic wrapping
            raise InvalidModelError("kagome lattice needs l1, l2 >= 2")
        edges = set()
        hexagons = []
        for x in range(self.l1):
            for y in range(self.l2):
                a, b, c = (self.site(x, y, s) for s in range(3))
                bonds = [
                    (a, b),
                    (a, c),
                    (b, c),
                    (b, self.site(x + 1, y, 0)),
                    (c, self.site(x, y + 1, 0)),
                    (b, self.site(x + 1, y - 1, 2)),
                ]
                edges.update(tuple(sorted(e)) for e in bonds)
                hexagons.append(
                    (
                        self.site(x, y, 1),
                        self.site(x + 1, y, 0),
                        self.site(x + 1, y, 2),
                        self.site(x, y + 1, 1),
                        self.site(x, y + 1, 0),
                        self.site(x, y, 2),
                    )
                )
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        for hexagon in hexagons:
            ring = list(hexagon) + [hexagon[0]]
            if len(set(hexagon)) != 6 or any(
                tuple(sorted(p)) not in edges for p in zip(ring, ring[1:])
            ):
                raise AssertionError(f"hexagon {hexagon} is not a 6-cycle")
        object.__setattr__(self, "hexagons", tuple(hexagons))

    @property
    def sites(self) -> int:
        return 3 * self.l1 * self.l2

    def site(self, x: int, y: int, s: int) -> int:
        return 3 * ((x % self.l1) * self.l2 + (y % self.l2)) + s

    def graph(self, hop_sign: int = 1) -> "GraphModel":
        return GraphModel(self.sites, self.edges, hop_sign)


@dataclass(frozen=True)
class GraphModel:
    sites: int
    edges: tuple[tuple[int, int], ...]
    hop_sign: int = 1

    def __post_init__(self):
        if self.hop_sign not in (1, -1):
            raise InvalidModelError(f"hop_sign must be +1 or -1, got {self.hop_sign}")
        if self.sites < 1:
            raise InvalidModelError("graph needs at least one site")
        clean = set()
        for i, j in self.edges:
            i, j = int(i), int(j)
            if i == j:
                raise InvalidModelError(f"self-loop at site {i}")
            if not (0 <= i < self.sites and 0 <= j < self.sites):
                raise InvalidModelError(f"edge ({i}, {j}) out of range")
            clean.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", tuple(sorted(clean)))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.sites))
        g.add_edges_from(self.edges)
        return g

    def is_connected(self) -> bool:
        return nx.is_connected(self.to_networkx())


def read_edge_list(path) -> GraphModel:
    """Parse ``sites K hop_sign S`` followed by one ``i j`` pair per line.

    Blank lines and ``#`` comments are ignored.
    """
    lines = [
        ln.split("#", 1)[0].strip() for ln in Path(path).read_text().splitlines()
    ]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InvalidModelError(f"{path}: empty edge list")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "sites" or head[2] != "hop_sign":
        raise InvalidModelError(f"{path}: bad header {lines[0]!r}")
    try:
        sites, sign = int(head[1]), int(head[3])
        edges = []
        for ln in lines[1:]:
            i, j = ln.split()
            edges.append((int(i), int(j)))
    except ValueError as exc:
        raise InvalidModelError(f"{path}: {exc}") from exc
    return GraphModel(sites, tuple(edges), sign)


def write_edge_list(graph: GraphModel, path) -> None:
    body = "".join(f"{i} {j}\n" for i, j in graph.edges)
    Path(path).write_text(f"sites {graph.sites} hop_sign {graph.hop_sign:+d}\n{body}")
