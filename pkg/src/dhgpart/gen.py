"""Seeded random instance generator.

Emits the native edge-list text format, byte-for-byte reproducible per seed.
Edges mix local and global pin placement (80% of edges sample their pins from
a small contiguous id window) so that coarsening has actual structure to find,
and weights are small integers so connectivity values stay exactly
representable.
"""
from __future__ import annotations

import numpy as np

__all__ = ["generate_dhg"]


def generate_dhg(num_nodes: int, num_edges: int, max_pins: int, seed: int = 0) -> str:
    """Random ``.dhg`` text with the given shape.

    Every edge gets 2..max_pins distinct pins, split into at least one source
    and one destination; weights are uniform on 1..9.
    """
    if num_nodes < 2:
        raise ValueError(f"num_nodes must be >= 2, got {num_nodes}")
    if num_edges < 0:
        raise ValueError(f"num_edges must be >= 0, got {num_edges}")
    if not (2 <= max_pins <= num_nodes):
        raise ValueError(
            f"max_pins must be in [2, num_nodes], got {max_pins} for {num_nodes} nodes"
        )
    rs = np.random.RandomState(seed)
    window = min(max(2 * max_pins, 8), num_nodes)
    lines = [f"{num_edges} {num_nodes}"]
    for _ in range(num_edges):
        k = int(rs.randint(2, max_pins + 1))
        if rs.random_sample() < 0.8:
            base = int(rs.randint(0, num_nodes))
            span = (base + np.arange(window)) % num_nodes
            pins = rs.choice(span, size=k, replace=False)
        else:
            pins = rs.choice(num_nodes, size=k, replace=False)
        k_src = int(rs.randint(1, k))
        w = int(rs.randint(1, 10))
        ids = " ".join(str(int(p)) for p in pins)
        lines.append(f"{w} {k_src} {k - k_src} {ids}")
    return "\n".join(lines) + "\n"
