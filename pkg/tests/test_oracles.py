from __future__ import annotations

import itertools

import numpy as np
import pytest

import dhgpart as dp
from dhgpart import kernels
from conftest import make_instance


def test_naive_connectivity_matches_kernel():
    rs = np.random.RandomState(137)
    for trial in range(12):
        n = int(rs.randint(4, 60))
        g = dp.parse_dhg(dp.generate_dhg(n, int(1.5 * n), min(5, n), seed=1400 + trial))
        k = int(rs.randint(1, n + 1))
        assign = rs.randint(0, k, size=n).astype(np.int32)
        want = dp.naive_connectivity(g, assign)
        got = kernels.connectivity_value(
            g.edge_pins.offsets, g.edge_pins.data, g.edge_weight, assign
        )
        assert float(got) == pytest.approx(want, abs=1e-9)


def test_brute_force_frozen(h1):
    part, conn = dp.brute_force_optimal(h1, dp.Constraints(2, 2))
    assert part.assign.tolist() == [0, 1, 1, 0]
    assert conn == 1.0


def test_brute_force_trivial_one_part(h1):
    part, conn = dp.brute_force_optimal(h1, dp.Constraints(4, 3))
    assert part.assign.tolist() == [0, 0, 0, 0]
    assert conn == 0.0


def test_brute_force_size_guard():
    g = dp.parse_dhg(dp.generate_dhg(11, 12, 3, seed=3))
    with pytest.raises(dp.OracleSizeError):
        dp.brute_force_optimal(g, dp.Constraints(4, 8))


def test_brute_force_infeasible(h1):
    with pytest.raises(dp.InfeasibleError):
        dp.brute_force_optimal(h1, dp.Constraints(4, 1))


def _exhaustive_best(g, c):
    """Cross-check with a from-scratch exhaustive sweep over all assignments."""
    n = g.num_nodes
    best = None
    for tup in itertools.product(range(n), repeat=n):
        assign = np.array(tup, dtype=np.int32)
        if dp.check_validity(g, dp.Partitioning(assign, n), c):
            continue
        conn = dp.naive_connectivity(g, assign)
        if best is None or conn < best:
            best = conn
    return best


def test_brute_force_matches_exhaustive_sweep():
    rs = np.random.RandomState(139)
    for trial in range(6):
        n = int(rs.randint(3, 6))
        g, c = make_instance(n, n + 2, min(3, n), seed=1500 + trial, omega=3, delta_slack=1)
        _, conn = dp.brute_force_optimal(g, c)
        assert conn == pytest.approx(_exhaustive_best(g, c), abs=1e-12)


def test_brute_force_result_is_canonical():
    rs = np.random.RandomState(149)
    for trial in range(6):
        n = int(rs.randint(4, 9))
        g, c = make_instance(n, n + 3, min(4, n), seed=1600 + trial, omega=4, delta_slack=2)
        part, conn = dp.brute_force_optimal(g, c)
        assert dp.check_validity(g, part, c) == []
        assert conn == pytest.approx(dp.naive_connectivity(g, part.assign), abs=1e-12)
        # restricted growth: each new partition id is exactly one above the max so far
        seen = -1
        for q in part.assign.tolist():
            assert q <= seen + 1
            seen = max(seen, q)


def test_simulate_sequence_frozen(h1):
    rho0 = dp.Partitioning(np.array([0, 0, 1, 1], dtype=np.int32), 2)
    states = dp.simulate_sequence(h1, rho0, [(1, 1)], dp.Constraints(2, 2))
    assert states == [(0, 4.0), (1, 2.0)]


def test_simulate_sequence_rejects_repeat_node(h1):
    rho0 = dp.Partitioning(np.array([0, 0, 1, 1], dtype=np.int32), 2)
    with pytest.raises(ValueError):
        dp.simulate_sequence(h1, rho0, [(1, 1), (1, 0)], dp.Constraints(2, 2))


def test_simulate_sequence_prefix_lengths(h1):
    rho0 = dp.Partitioning(np.array([0, 1, 2, 3], dtype=np.int32), 4)
    seq = [(0, 1), (2, 1), (3, 1)]
    states = dp.simulate_sequence(h1, rho0, seq, dp.Constraints(4, 4))
    assert len(states) == 4
    assert states[0] == (0, 5.0)
    # final state: everything in partition 1 except nothing left behind
    assert states[-1][1] == 0.0
