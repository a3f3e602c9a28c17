"""Random XOR-equation systems over GF(2) and their exact solution.

A hypergraph turns into a linear system by reading every edge {j1..jk} as
the equation x_j1 + ... + x_jk = b (mod 2) with an independent fair-coin
right-hand side.  Satisfiability of such systems tracks the 2-core edge
density of the hypergraph, which is what makes them a useful cross-check
for orientation feasibility.

Rows are bit-packed into uint64 words; elimination does full rows with
vectorised XOR, so desk-scale systems (a few thousand variables) solve in
tens of milliseconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph

__all__ = [
    "Gf2System",
    "from_hypergraph",
    "rank_and_solve",
    "brute_force_satisfiable",
]

_SEED_MASK = (1 << 64) - 1

# Hard cap for the exhaustive oracle; anything larger is a misconfigured test.
BRUTE_FORCE_MAX_VARS = 20


@dataclass(frozen=True)
class Gf2System:
    """n XOR equations over num_vars variables, rows bit-packed in uint64.

    words[i, j] holds variables 64*j .. 64*j+63 of row i; rhs[i] is the
    parity the row must hit.
    """

    num_vars: int
    words: np.ndarray
    rhs: np.ndarray

    @property
    def num_rows(self) -> int:
        return self.words.shape[0]

    def row_support(self, i: int) -> tuple[int, ...]:
        """Sorted variable indices of row i."""
        bits = np.unpackbits(self.words[i].view(np.uint8), bitorder="little")
        return tuple(int(v) for v in np.nonzero(bits[: self.num_vars])[0])

    def row_popcounts(self) -> np.ndarray:
        return np.bitwise_count(self.words).sum(axis=1).astype(np.int64)

    def evaluate(self, assignment: np.ndarray) -> np.ndarray:
        """Parity of each row under a 0/1 assignment vector."""
        packed = np.packbits(
            np.asarray(assignment, dtype=np.uint8), bitorder="little"
        )
        packed = np.pad(packed, (0, self.words.shape[1] * 8 - packed.size))
        x = packed.view(np.uint64)
        return (np.bitwise_count(self.words & x).sum(axis=1) & 1).astype(np.uint8)

    def to_text(self) -> str:
        """Fixture format: 'p xor <rows> <vars>', then per row its variable
        indices followed by the right-hand-side bit."""
        lines = [f"p xor {self.num_rows} {self.num_vars}"]
        for i in range(self.num_rows):
            support = " ".join(str(v) for v in self.row_support(i))
            lines.append(f"{support} {int(self.rhs[i])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Gf2System":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("p xor"):
            raise ValueError("expected 'p xor <rows> <vars>' header")
        _, _, rows_s, vars_s = lines[0].split()
        nrows, nvars = int(rows_s), int(vars_s)
        if len(lines) - 1 != nrows:
            raise ValueError(f"header says {nrows} rows, found {len(lines) - 1}")
        nwords = max(1, (nvars + 63) // 64)
        words = np.zeros((nrows, nwords), np.uint64)
        rhs = np.zeros(nrows, np.uint8)
        for i, ln in enumerate(lines[1:]):
            toks = [int(tok) for tok in ln.split()]
            rhs[i] = toks[-1]
            for v in toks[:-1]:
                if not 0 <= v < nvars:
                    raise ValueError(f"variable {v} outside [0, {nvars})")
                words[i, v // 64] |= np.uint64(1) << np.uint64(v % 64)
        return cls(nvars, words, rhs)


def from_hypergraph(g: Hypergraph, seed: int) -> Gf2System:
    """Row i gets 1-bits at edge i's nodes; rhs bits are iid fair coins."""
    nwords = max(1, (g.m + 63) // 64)
    words = np.zeros((g.n, nwords), np.uint64)
    sizes = np.diff(g.edge_offsets)
    rows = np.repeat(np.arange(g.n, dtype=np.int64), sizes)
    cols = g.edge_nodes
    np.bitwise_or.at(
        words,
        (rows, cols // 64),
        np.uint64(1) << (cols % 64).astype(np.uint64),
    )
    rng = np.random.Generator(np.random.PCG64(seed & _SEED_MASK))
    rhs = rng.integers(0, 2, size=g.n, dtype=np.uint8)
    return Gf2System(g.m, words, rhs)


def rank_and_solve(s: Gf2System) -> tuple[int, bool, np.ndarray | None]:
    """Gaussian elimination over GF(2).

    Returns (rank, satisfiable, witness); the witness is a 0/1 vector that
    is substituted back into the original system before being returned, and
    is None when the system is inconsistent.
    """
    a = s.words.copy()
    b = s.rhs.copy()
    nrows, nwords = a.shape
    rank = 0
    pivot_cols: list[int] = []
    for col in range(s.num_vars):
        if rank == nrows:
            break
        w, bit = divmod(col, 64)
        mask = np.uint64(1) << np.uint64(bit)
        below = np.nonzero(a[rank:, w] & mask)[0]
        if below.size == 0:
            continue
        p = rank + int(below[0])
        if p != rank:
            a[[rank, p]] = a[[p, rank]]
            b[[rank, p]] = b[[p, rank]]
        sel = (a[rank + 1 :, w] & mask).astype(bool)
        if sel.any():
            a[rank + 1 :][sel] ^= a[rank]
            b[rank + 1 :][sel] ^= b[rank]
        pivot_cols.append(col)
        rank += 1
    satisfiable = not b[rank:].any()
    if not satisfiable:
        return rank, False, None
    witness = np.zeros(s.num_vars, np.uint8)
    packed = np.zeros(nwords, np.uint64)
    for i in range(rank - 1, -1, -1):
        col = pivot_cols[i]
        parity = int(np.bitwise_count(a[i] & packed).sum() & 1)
        value = parity ^ int(b[i])
        witness[col] = value
        if value:
            packed[col // 64] |= np.uint64(1) << np.uint64(col % 64)
    if (s.evaluate(witness) != s.rhs).any():
        raise AssertionError("witness failed substitution; elimination bug")
    return rank, True, witness


def brute_force_satisfiable(s: Gf2System) -> tuple[bool, np.ndarray | None]:
    """Exhaustive oracle over all 2**num_vars assignments (num_vars <= 20)."""
    if s.num_vars > BRUTE_FORCE_MAX_VARS:
        raise ValueError(
            f"brute force capped at {BRUTE_FORCE_MAX_VARS} variables, "
            f"got {s.num_vars}; this is a test-configuration error"
        )
    for bits in range(1 << s.num_vars):
        assignment = np.array(
            [(bits >> v) & 1 for v in range(s.num_vars)], dtype=np.uint8
        )
        if not (s.evaluate(assignment) != s.rhs).any():
            return True, assignment
    return False, None
