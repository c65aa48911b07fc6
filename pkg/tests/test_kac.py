"""Kac module tests: gradings, block structure, machine verification."""

import numpy as np
import pytest

from periplectic.kac import degree_zero_block_matches_base, grading_census, kac_module
from periplectic.structure import build_algebra
from periplectic.weights import lambda_from_params, make_chi

P = 5


@pytest.fixture(scope="module")
def alg():
    return build_algebra(3, P)


def test_kac_dimension_and_grading(alg):
    chi = make_chi(alg, "chi3")
    lam = lambda_from_params(chi, (1, 1))
    K = kac_module(alg, chi, lam)
    D = K.base.dim
    assert K.dim == 8 * D
    census = grading_census(K)
    assert census == {0: D, -1: 3 * D, -2: 3 * D, -3: D}


def test_kac_degree_zero_block(alg):
    chi = make_chi(alg, "chi5")
    lam = lambda_from_params(chi, (0, 2))
    K = kac_module(alg, chi, lam)
    assert degree_zero_block_matches_base(K)


def test_kac_odd_action_oracle(alg):
    # y1 * (1 (x) v) = basis vector at (mask=1, top); y2 y1 v picks up the
    # sign from reordering: y2 * (y1 (x) v) = -(y1 y2) (x) v at mask 3
    chi = make_chi(alg, "chi3")
    lam = lambda_from_params(chi, (0, 0))
    K = kac_module(alg, chi, lam)
    D = K.base.dim
    assert D == 1
    e0 = np.zeros((K.dim, 1), dtype=np.int64)
    e0[0] = 1
    v1 = K.act_vec(alg.idx("Y12"), e0)
    want = np.zeros((K.dim, 1), dtype=np.int64)
    want[1 * D] = 1
    assert np.array_equal(v1, want)
    v21 = K.act_vec(alg.idx("Y13"), v1)
    want = np.zeros((K.dim, 1), dtype=np.int64)
    want[3 * D] = P - 1  # -1: mask {y1, y2} with y2 moved past y1
    assert np.array_equal(v21, want)


def test_kac_odd_squares_vanish(alg):
    chi = make_chi(alg, "chi3")
    lam = lambda_from_params(chi, (2, 0))
    K = kac_module(alg, chi, lam)
    for lab in ("Y12", "Y13", "Y23"):
        op = K.actions[alg.idx(lab)]
        assert (op @ op).is_zero()


def test_kac_verify_small_cases(alg):
    cases = [
        ("chi3", dict(), (0, 1)),
        ("chi3", dict(), (2, 2)),
        ("chi5", dict(), (0, 2)),
        ("chi5", dict(), (2, 1)),
    ]
    for kind, kw, ts in cases:
        chi = make_chi(alg, kind, **kw)
        lam = lambda_from_params(chi, ts)
        K = kac_module(alg, chi, lam)
        assert K.verify() == [], f"K failed verification for {kind} at {ts}"


def test_kac_verify_ext_field_cases(alg):
    cases = [
        ("chi2", dict(b=1), (0, 3)),
        ("chi4", dict(b=1), (1, 0)),
    ]
    for kind, kw, ts in cases:
        chi = make_chi(alg, kind, **kw)
        lam = lambda_from_params(chi, ts)
        K = kac_module(alg, chi, lam)
        assert K.verify() == [], f"K failed verification for {kind} at {ts}"


def test_kac_chi1_builds_and_verifies(alg):
    chi = make_chi(alg, "chi1", a=1, b=1)
    lam = lambda_from_params(chi, (0, 0))
    K = kac_module(alg, chi, lam)
    assert K.dim == 1000
    assert K.verify() == []


def test_kac_weights_shift_by_odd_roots(alg):
    chi = make_chi(alg, "chi3")
    lam = lambda_from_params(chi, (1, 2))
    K = kac_module(alg, chi, lam)
    D = K.base.dim
    shifts = {1: (0, -1), 2: (-1, 1), 4: (1, 0)}
    for mask, pair in shifts.items():
        for j in range(D):
            assert K.weights[mask * D + j] == K.base.weights[j].shift(pair)


def test_kac_guard(alg):
    chi = make_chi(alg, "chi3")
    lam = lambda_from_params(chi, (1, 1))
    import periplectic.kac as kac_mod

    old = kac_mod.DIM_GUARD
    kac_mod.DIM_GUARD = 10
    try:
        with pytest.raises(ValueError):
            kac_module(alg, chi, lam)
        K = kac_module(alg, chi, lam, force=True)
        assert K.dim == 64
    finally:
        kac_mod.DIM_GUARD = old
