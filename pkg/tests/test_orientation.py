"""Greedy and exact orientation: soundness, dominance, reference equivalence."""

import itertools

import numpy as np
import pytest

from cuckoo_thresholds import (
    DegreeSpec,
    Hypergraph,
    Orientation,
    core_appearance,
    matching_orient,
    peel,
    sample_mixed,
    sample_regular,
    selfless_orient,
    verify,
)
from cuckoo_thresholds.orientation import selfless_orient_naive


def _random_small_instance(seed: int) -> tuple[Hypergraph, int]:
    """A small random instance with mixed edge sizes and random capacity."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(4, 40))
    ell = int(rng.integers(1, 4))
    c = float(rng.uniform(0.3, 1.4)) * ell
    n = max(1, round(c * m))
    sizes = {2: 0.3, 3: 0.5, 4: 0.2}
    spec = DegreeSpec({k: w for k, w in sizes.items() if k <= m})
    g = sample_mixed(m, n, spec, int(rng.integers(0, 2**63)))
    return g, ell


def _feasible_by_enumeration(g: Hypergraph, ell: int) -> bool:
    """Try every way of pointing each edge at one of its nodes."""
    for choice in itertools.product(*(g.edge(i) for i in range(g.n))):
        counts = {}
        for v in choice:
            counts[v] = counts.get(v, 0) + 1
        if all(cnt <= ell for cnt in counts.values()):
            return True
    return False


class TestSelflessBasics:
    def test_single_edge_succeeds(self):
        g = Hypergraph.from_edges(3, [(0, 1, 2)])
        o = selfless_orient(g, 1, seed=0)
        assert o.success and o.assignment[0] in (0, 1, 2)
        assert verify(g, o, 1)

    def test_pigeonhole_failure(self):
        g = Hypergraph.from_edges(2, [(0, 1), (0, 1), (0, 1)])
        o = selfless_orient(g, 1, seed=0)
        assert not o.success
        assert o.failure_step == 1

    def test_empty_graph(self):
        g = Hypergraph.from_edges(4, [])
        assert selfless_orient(g, 1, seed=0).success

    def test_deterministic_per_seed(self):
        g = sample_regular(300, 270, 3, 8)
        a = selfless_orient(g, 1, seed=5)
        b = selfless_orient(g, 1, seed=5)
        assert np.array_equal(a.assignment, b.assignment)
        assert a.success == b.success

    def test_seed_changes_tie_breaking(self):
        g = sample_regular(200, 170, 3, 12)
        outcomes = {selfless_orient(g, 1, seed=s).assignment.tobytes() for s in range(8)}
        assert len(outcomes) > 1

    def test_tie_break_argument_validated(self):
        g = Hypergraph.from_edges(3, [(0, 1, 2)])
        with pytest.raises(ValueError):
            selfless_orient(g, 1, seed=0, tie_break="arbitrary")
        with pytest.raises(ValueError):
            selfless_orient(g, 0, seed=0)


class TestSelflessSoundness:
    def test_success_implies_valid_orientation(self):
        checked = 0
        for seed in range(100):
            g, ell = _random_small_instance(seed)
            o = selfless_orient(g, ell, seed=seed)
            if o.success:
                checked += 1
                assert verify(g, o, ell)
        assert checked > 30

    def test_peeling_prefix_property(self):
        # an empty 2-core means the priority-0 rule alone finishes the job
        _, c_star = core_appearance(3, 2)
        for seed in range(50):
            g = sample_regular(500, round(0.7 * c_star * 500), 3, seed)
            stats, _ = peel(g, 2)
            if stats.core_edges:
                continue
            assert selfless_orient(g, 1, seed=seed).success

    def test_desk_scale_failure_bracket(self):
        # the unit-capacity transition for k=3 sits near 0.918: well below it
        # the greedy almost always succeeds, well above it almost never
        m = 10_000
        fails_low = sum(
            not selfless_orient(sample_regular(m, round(0.90 * m), 3, s), 1, seed=s).success
            for s in range(100)
        )
        fails_high = sum(
            not selfless_orient(sample_regular(m, round(0.93 * m), 3, s), 1, seed=s).success
            for s in range(100)
        )
        assert fails_low <= 5
        assert fails_high >= 95

    def test_oracle_dominance_on_random_instances(self):
        gap = 0
        for seed in range(200):
            g, ell = _random_small_instance(seed)
            greedy_ok = selfless_orient(g, ell, seed=seed).success
            exact_ok = matching_orient(g, ell).success
            assert not (greedy_ok and not exact_ok), f"seed {seed}"
            gap += exact_ok and not greedy_ok
        # the greedy may give up on feasible instances, but rarely
        assert gap < 40


class TestReferenceEquivalence:
    def test_fast_matches_naive_with_canonical_ties(self):
        for seed in range(200):
            g, ell = _random_small_instance(seed)
            fast = selfless_orient(g, ell, seed=0, tie_break="first")
            ref = selfless_orient_naive(g, ell, seed=0, tie_break="first")
            assert fast.success == ref.success, f"seed {seed}"
            assert fast.failure_step == ref.failure_step, f"seed {seed}"
            assert np.array_equal(fast.assignment, ref.assignment), f"seed {seed}"

    def test_priority_accounting_identity(self):
        # the naive path asserts the bookkeeping identity at every step
        for seed in range(50):
            g, ell = _random_small_instance(seed)
            selfless_orient_naive(g, ell, seed=seed, check_accounting=True)

    def test_failure_rates_statistically_close(self):
        m, n = 150, 141  # around the unit-capacity threshold for k=3
        fast = sum(
            not selfless_orient(sample_regular(m, n, 3, s), 1, seed=s).success
            for s in range(60)
        )
        ref = sum(
            not selfless_orient_naive(sample_regular(m, n, 3, s), 1, seed=s).success
            for s in range(60)
        )
        assert abs(fast - ref) <= 20  # same law, independent tie-break draws


class TestMatching:
    def test_two_parallel_edges_unit_capacity(self):
        g = Hypergraph.from_edges(2, [(0, 1), (0, 1)])
        o = matching_orient(g, 1)
        assert o.success
        assert sorted(o.assignment) == [0, 1]
        assert verify(g, o, 1)

    def test_three_parallel_edges_fail_at_unit_capacity(self):
        g = Hypergraph.from_edges(2, [(0, 1), (0, 1), (0, 1)])
        assert not matching_orient(g, 1).success

    def test_three_parallel_edges_fit_capacity_two(self):
        g = Hypergraph.from_edges(2, [(0, 1), (0, 1), (0, 1)])
        o = matching_orient(g, 2)
        assert o.success
        assert verify(g, o, 2)
        assert _feasible_by_enumeration(g, 2)

    def test_agrees_with_enumeration_oracle(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            m = int(rng.integers(2, 7))
            n = int(rng.integers(1, 8))
            ell = int(rng.integers(1, 3))
            edges = []
            for _ in range(n):
                k = int(rng.integers(2, min(3, m) + 1))
                edges.append(sorted(rng.choice(m, size=k, replace=False)))
            g = Hypergraph.from_edges(m, edges)
            assert matching_orient(g, ell).success == _feasible_by_enumeration(
                g, ell
            ), f"seed {seed}"

    def test_partial_assignment_on_failure(self):
        g = Hypergraph.from_edges(2, [(0, 1), (0, 1), (0, 1)])
        o = matching_orient(g, 1)
        assert (o.assignment >= -1).all()
        assert o.failure_step is None


class TestVerify:
    def test_rejects_target_outside_edge(self):
        g = Hypergraph.from_edges(4, [(0, 1), (2, 3)])
        o = Orientation(np.array([0, 0]), True)
        assert not verify(g, o, 1)

    def test_rejects_overfull_node(self):
        g = Hypergraph.from_edges(3, [(0, 1), (0, 2)])
        o = Orientation(np.array([0, 0]), True)
        assert not verify(g, o, 1)
        assert verify(g, o, 2)

    def test_rejects_unassigned_edges(self):
        g = Hypergraph.from_edges(3, [(0, 1), (0, 2)])
        o = Orientation(np.array([0, -1]), True)
        assert not verify(g, o, 2)
