from __future__ import annotations

import pytest

import dhgpart as dp


def test_generate_deterministic():
    a = dp.generate_dhg(50, 80, 5, seed=7)
    b = dp.generate_dhg(50, 80, 5, seed=7)
    c = dp.generate_dhg(50, 80, 5, seed=8)
    assert a == b
    assert a != c


def test_generate_line_structure():
    text = dp.generate_dhg(30, 45, 4, seed=2)
    lines = text.strip().split("\n")
    assert lines[0] == "45 30"
    for ln in lines[1:]:
        tok = ln.split()
        w, ks, kd = int(tok[0]), int(tok[1]), int(tok[2])
        assert 1 <= w <= 9
        assert ks >= 1 and kd >= 1
        assert 2 <= ks + kd <= 4
        pins = [int(t) for t in tok[3:]]
        assert len(pins) == ks + kd
        assert len(set(pins)) == len(pins)
        assert all(0 <= p < 30 for p in pins)


def test_generate_parses_and_validates():
    for seed in range(5):
        g = dp.parse_dhg(dp.generate_dhg(25, 40, 5, seed=seed))
        g.validate()
        assert g.num_nodes == 25
        assert g.num_edges == 40


def test_generate_rejects_bad_parameters():
    with pytest.raises(ValueError):
        dp.generate_dhg(1, 5, 2, seed=0)
    with pytest.raises(ValueError):
        dp.generate_dhg(10, -1, 3, seed=0)
    with pytest.raises(ValueError):
        dp.generate_dhg(10, 5, 1, seed=0)
    with pytest.raises(ValueError):
        dp.generate_dhg(10, 5, 11, seed=0)
