import math

import numpy as np
import pytest

import blockcoh as bc


def test_steiner_construction_meets_bound():
    p = bc.steiner_pairs_etf(4)
    assert p.shape == (6, 16)
    assert bc.verify_etf(p)
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    a = bc.kron_construct1(p, h)
    assert (a.n, a.r, a.m) == (12, 2, 16)
    assert abs(bc.mu(a) - 1 / 3) < 1e-9
    assert abs(bc.welch_block_lower(16, 12, 2) - 1 / 3) < 1e-12
    rep = bc.analyze(a)
    assert rep["equi_isoclinic"] is True
    assert rep["mu"] == pytest.approx(1 / 3)


def test_union_and_table_values():
    assert bc.verify_flat_union(bc.alltop_gabor(7))
    assert bc.nu1(bc.alltop_gabor(7)) == pytest.approx(1 / 8, abs=1e-9)
    k4 = bc.kerdock_real(4)
    assert k4.shape == (16, 128)
    assert bc.nu1(k4) == pytest.approx(1 / 127, abs=1e-9)


def test_threshold_and_gram_map():
    sol = bc.solve_a_hat(1e-4)
    assert abs(sol["a_hat"] - 5.357) < 0.01
    a = bc.sample_block_frame(20, 2, 25, seed=3)
    g = bc.gram_map(a)
    assert g.shape == (25, 25)
    assert np.allclose(np.diag(g), 1.0)
    assert g[~np.eye(25, dtype=bool)].max() == pytest.approx(bc.mu(a), abs=1e-15)


def test_flip_preserves_mu():
    a = bc.sample_block_frame(16, 2, 40, seed=5)
    res, flipped = bc.flip(a)
    assert res["gram_preserved"] is True
    assert res["mu_after"] == res["mu_before"]
    assert flipped.m == a.m
    assert bc.nu(flipped) == pytest.approx(res["nu_after"])


def test_bfm_round_trip_and_errors():
    a = bc.sample_block_frame(8, 2, 5, seed=1)
    text = bc.to_bfm(a)
    assert bc.to_bfm(bc.from_bfm(text)) == text
    with pytest.raises(bc.ParseError):
        bc.from_bfm("BFM 2\n")
    with pytest.raises(bc.ValidationError):
        bc.BlockFrame(np.eye(3), 3)
    with pytest.raises(ValueError):
        bc.solve_a_hat(0.6)
