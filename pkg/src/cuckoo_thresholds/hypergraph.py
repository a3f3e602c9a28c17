"""Random hypergraphs, the peeling process and ell-core extraction.

A hypergraph doubles as the key/bucket structure of a cuckoo hash table
(edges = keys, nodes = buckets) and as the incidence structure of a random
XOR-equation system.  Edges are stored CSR-style (offsets into a flat node
array) with each edge's nodes sorted, which keeps sampling, peeling and
orientation allocation-light and makes structural equality well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._kernels import peel_kernel
from .thresholds import DegreeSpec

__all__ = ["Hypergraph", "CoreStats", "sample_regular", "sample_mixed", "peel"]

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class CoreStats:
    """Size and shape of an extracted core.

    edge_density is core_edges/core_nodes (0 for the empty core); rounds is
    the number of peeling generations it took to reach the core.
    """

    core_nodes: int
    core_edges: int
    edge_density: float
    rounds: int


class Hypergraph:
    """n hyperedges over m nodes, each edge a sorted tuple of distinct nodes."""

    __slots__ = ("m", "edge_offsets", "edge_nodes", "_incidence")

    def __init__(self, m: int, edge_offsets: np.ndarray, edge_nodes: np.ndarray):
        self.m = int(m)
        self.edge_offsets = edge_offsets
        self.edge_nodes = edge_nodes
        self._incidence: tuple[np.ndarray, np.ndarray] | None = None

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[Sequence[int]]) -> "Hypergraph":
        if m < 0:
            raise ValueError(f"node count must be >= 0, got {m}")
        offsets = [0]
        flat: list[int] = []
        for edge in edges:
            nodes = sorted(int(v) for v in edge)
            if len(nodes) < 2:
                raise ValueError(f"edge {tuple(edge)} has fewer than 2 nodes")
            if nodes[0] < 0 or nodes[-1] >= m:
                raise ValueError(f"edge {tuple(edge)} has node ids outside [0, {m})")
            for a, b in zip(nodes, nodes[1:]):
                if a == b:
                    raise ValueError(f"edge {tuple(edge)} repeats node {a}")
            flat.extend(nodes)
            offsets.append(len(flat))
        return cls(
            m,
            np.asarray(offsets, dtype=np.int64),
            np.asarray(flat, dtype=np.int64),
        )

    @property
    def n(self) -> int:
        return self.edge_offsets.shape[0] - 1

    def edge(self, i: int) -> tuple[int, ...]:
        return tuple(
            int(v)
            for v in self.edge_nodes[self.edge_offsets[i] : self.edge_offsets[i + 1]]
        )

    @property
    def edges(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.edge(i) for i in range(self.n))

    @property
    def max_edge_size(self) -> int:
        if self.n == 0:
            return 0
        return int(np.max(np.diff(self.edge_offsets)))

    def incidence_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-node incident edge ids as (offsets, edge_ids), edge ids ascending."""
        if self._incidence is None:
            counts = np.bincount(self.edge_nodes, minlength=self.m).astype(np.int64)
            offsets = np.concatenate(([0], np.cumsum(counts)))
            sizes = np.diff(self.edge_offsets)
            owner = np.repeat(np.arange(self.n, dtype=np.int64), sizes)
            order = np.argsort(self.edge_nodes, kind="stable")
            self._incidence = (offsets, owner[order])
        return self._incidence

    @property
    def node_incidence(self) -> tuple[tuple[int, ...], ...]:
        offsets, edge_ids = self.incidence_csr()
        return tuple(
            tuple(edge_ids[offsets[v] : offsets[v + 1]]) for v in range(self.m)
        )

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edge_nodes, minlength=self.m).astype(np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self.m == other.m
            and np.array_equal(self.edge_offsets, other.edge_offsets)
            and np.array_equal(self.edge_nodes, other.edge_nodes)
        )

    def __repr__(self) -> str:
        return f"Hypergraph(m={self.m}, n={self.n})"

    def to_text(self) -> str:
        """Debug/fixture format: 'm n' then one line of node ids per edge."""
        lines = [f"{self.m} {self.n}"]
        for i in range(self.n):
            lines.append(" ".join(str(v) for v in self.edge(i)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Hypergraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty hypergraph text")
        head = lines[0].split()
        if len(head) != 2:
            raise ValueError(f"expected header 'm n', got {lines[0]!r}")
        m, n = int(head[0]), int(head[1])
        if len(lines) - 1 != n:
            raise ValueError(f"header says {n} edges, found {len(lines) - 1}")
        edges = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
        return cls.from_edges(m, edges)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & _SEED_MASK))


def _sample_rows(rng: np.random.Generator, rows: int, m: int, k: int) -> np.ndarray:
    """rows uniform k-subsets of [0, m), sorted per row."""
    if k * (k - 1) > m:  # collisions too likely for rejection to pay off
        out = np.empty((rows, k), dtype=np.int64)
        for i in range(rows):
            out[i] = np.sort(rng.choice(m, size=k, replace=False))
        return out
    draw = np.sort(rng.integers(0, m, size=(rows, k), dtype=np.int64), axis=1)
    while True:
        bad = (np.diff(draw, axis=1) == 0).any(axis=1)
        if not bad.any():
            return draw
        nbad = int(bad.sum())
        draw[bad] = np.sort(rng.integers(0, m, size=(nbad, k), dtype=np.int64), axis=1)


def sample_regular(m: int, n: int, k: int, seed: int) -> Hypergraph:
    """n independent uniform k-subsets of [0, m); repeats across edges allowed."""
    if not 2 <= k <= m:
        raise ValueError(f"need 2 <= k <= m, got k={k}, m={m}")
    if n < 0:
        raise ValueError(f"edge count must be >= 0, got {n}")
    rng = _rng(seed)
    rows = _sample_rows(rng, n, m, k)
    offsets = np.arange(0, (n + 1) * k, k, dtype=np.int64)
    return Hypergraph(m, offsets, rows.reshape(-1))


def sample_mixed(m: int, n: int, spec: DegreeSpec, seed: int) -> Hypergraph:
    """Like sample_regular but each edge first draws its size from spec.

    A point-mass spec delegates to sample_regular so the two produce
    identical hypergraphs for the same seed.
    """
    if spec.max_degree > m:
        raise ValueError(f"max edge size {spec.max_degree} exceeds node count {m}")
    if n < 0:
        raise ValueError(f"edge count must be >= 0, got {n}")
    k = spec.as_point_mass()
    if k is not None:
        return sample_regular(m, n, k, seed)
    rng = _rng(seed)
    ks = np.array(sorted(spec.weights), dtype=np.int64)
    probs = np.array([spec.weights[int(kk)] for kk in ks], dtype=np.float64)
    probs /= probs.sum()  # guard against 1e-12 level slack in the weights
    sizes = rng.choice(ks, size=n, p=probs)
    offsets = np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)
    flat = np.empty(int(offsets[-1]), dtype=np.int64)
    for kk in ks:  # ascending size order keeps the draw sequence deterministic
        idx = np.nonzero(sizes == kk)[0]
        if idx.size == 0:
            continue
        rows = _sample_rows(rng, idx.size, m, int(kk))
        for row, i in enumerate(idx):
            flat[offsets[i] : offsets[i + 1]] = rows[row]
    return Hypergraph(m, offsets, flat)


def peel(g: Hypergraph, ell: int) -> tuple[CoreStats, Hypergraph]:
    """Extract the ell-core: the maximal sub-hypergraph of min degree >= ell.

    The returned hypergraph keeps the original node ids (m unchanged); nodes
    outside the core simply end up isolated.  The result is independent of
    deletion order, so the cheap queue order is used.
    """
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    inc_off, inc_edges = g.incidence_csr()
    removed, alive, rounds = peel_kernel(
        g.m, g.edge_offsets, g.edge_nodes, inc_off, inc_edges, ell
    )
    core_nodes = int(g.m - removed.sum())
    core_edges = int(alive.sum())
    density = core_edges / core_nodes if core_nodes else 0.0
    stats = CoreStats(
        core_nodes=core_nodes,
        core_edges=core_edges,
        edge_density=density,
        rounds=int(rounds),
    )
    sizes = np.diff(g.edge_offsets)
    keep = np.repeat(alive, sizes)
    new_sizes = sizes[alive]
    offsets = np.concatenate(([0], np.cumsum(new_sizes))).astype(np.int64)
    core = Hypergraph(g.m, offsets, g.edge_nodes[keep])
    return stats, core
