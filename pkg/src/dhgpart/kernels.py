"""Kernel backend selection.

The compiled extension is preferred when importable; the pure NumPy backend is
always available.  ``DHGPART_BACKEND=pure`` (or ``compiled``) overrides the
default.  Both backends are bit-identical; see ``benchmarks/compare_backends.py``
for the speed difference.
"""
from __future__ import annotations

import os

from . import _pykernels

_BACKENDS = {"pure": _pykernels}
try:
    from . import _kernels as _compiled

    _BACKENDS["compiled"] = _compiled
except ImportError:  # extension not built; fall back silently
    _compiled = None

_env = os.environ.get("DHGPART_BACKEND", "").strip().lower()
if _env:
    if _env not in _BACKENDS:
        raise ImportError(
            f"DHGPART_BACKEND={_env!r} not available (have: {sorted(_BACKENDS)})"
        )
    _active = _env
else:
    _active = "compiled" if "compiled" in _BACKENDS else "pure"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def active_backend() -> str:
    return _active


def set_backend(name: str) -> str:
    """Switch the active backend; returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r} (have: {sorted(_BACKENDS)})")
    prev = _active
    _active = name
    return prev


def get_module(name: str | None = None):
    key = name or _active
    if key not in _BACKENDS:
        raise ValueError(f"unknown backend {key!r} (have: {sorted(_BACKENDS)})")
    return _BACKENDS[key]


def union_size_sorted(a, b):
    return _BACKENDS[_active].union_size_sorted(a, b)


def fill_histograms(inc_off, inc_dat, pin_off, pin_dat, w, nbr_off, nbr_dat, batch):
    return _BACKENDS[_active].fill_histograms(
        inc_off, inc_dat, pin_off, pin_dat, w, nbr_off, nbr_dat, batch
    )


def select_first_valid(
    order, nbr_off, nbr_dat, hist, node_size, in_off, in_dat, max_size, max_inbound
):
    return _BACKENDS[_active].select_first_valid(
        order, nbr_off, nbr_dat, hist, node_size, in_off, in_dat, max_size, max_inbound
    )


def resolve_matching(pair, score):
    return _BACKENDS[_active].resolve_matching(pair, score)


def connectivity_value(pin_off, pin_dat, w, assign):
    return _BACKENDS[_active].connectivity_value(pin_off, pin_dat, w, assign)


def compute_pins(pin_off, pin_dat, dst_off, dst_dat, assign, num_parts):
    return _BACKENDS[_active].compute_pins(
        pin_off, pin_dat, dst_off, dst_dat, assign, num_parts
    )


def propose_moves(
    inc_off, inc_dat, pin_off, pin_dat, w, pins, assign, part_sizes, node_size, max_size
):
    return _BACKENDS[_active].propose_moves(
        inc_off, inc_dat, pin_off, pin_dat, w, pins, assign, part_sizes, node_size, max_size
    )


def sequence_gains(
    inc_off, inc_dat, pin_off, pin_dat, w, pins, node, from_part, to_part, gain_iso, pos
):
    return _BACKENDS[_active].sequence_gains(
        inc_off, inc_dat, pin_off, pin_dat, w, pins, node, from_part, to_part, gain_iso, pos
    )
