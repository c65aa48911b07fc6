"""Weight, Weyl-action and p-character tests."""

import itertools

import pytest

from periplectic.field import FieldParams
from periplectic.structure import build_algebra
from periplectic.weights import (
    delta,
    delta_permuted,
    dot_action,
    enumerate_lambda,
    is_typical,
    lambda_from_params,
    lambda_in_admissible_set,
    make_chi,
    simple_reflection,
    typicality_linear_factor,
    weight_from_ints,
    weyl_elements,
    weyl_identity,
    weyl_typicality_scan,
    Weight,
)

GF5 = FieldParams(5, 1)
GF5E = FieldParams(5, 5)


@pytest.fixture(scope="module")
def alg():
    return build_algebra(3, 5)


# --- delta ---------------------------------------------------------------------

def test_delta_formula_n3():
    # for n = 3 the typicality value is r*s*(r+s+1)
    for r in range(5):
        for s in range(5):
            lam = weight_from_ints(GF5, (r, s))
            assert delta(lam) == GF5.element(r * s * (r + s + 1))


def test_delta_one_one():
    assert delta(weight_from_ints(GF5, (1, 1))) == GF5.element(3)


def test_typical_iff_delta_nonzero():
    lam = weight_from_ints(GF5, (1, 1))
    assert is_typical(lam)
    assert not is_typical(weight_from_ints(GF5, (0, 3)))


# --- Weyl group and dot action ----------------------------------------------------

def test_weyl_group_size():
    assert len(weyl_elements(3)) == 6
    assert len(weyl_elements(4)) == 24


def test_dot_action_identity():
    lam = weight_from_ints(GF5, (2, 3))
    assert dot_action(weyl_identity(3), lam) == lam


def test_simple_reflection_formula():
    # s_{eps1-eps2} . (r, s) = (-r-2, r+s+1)
    s1 = simple_reflection(3, 1)
    for r in range(5):
        for s in range(5):
            lam = weight_from_ints(GF5, (r, s))
            got = dot_action(s1, lam)
            want = weight_from_ints(GF5, (-r - 2, r + s + 1))
            assert got == want


def test_dot_action_is_group_action():
    lams = [weight_from_ints(GF5, (r, s)) for r in range(5) for s in range(5)]
    W = weyl_elements(3)
    for w in W:
        for u in W:
            wu = w.compose(u)
            for lam in lams[::7]:
                assert dot_action(wu, lam) == dot_action(w, dot_action(u, lam))


def test_delta_permuted_matches_dot_action():
    W = weyl_elements(3)
    for r in range(5):
        for s in range(5):
            lam = weight_from_ints(GF5, (r, s))
            for w in W:
                assert delta_permuted(w, lam) == delta(dot_action(w, lam))


def test_delta_permuted_matches_dot_action_ext():
    W = weyl_elements(3)
    w_gen = GF5E.gen()
    lam = Weight((GF5E.element(2) * w_gen + 1, GF5E.element(3) * w_gen + 4))
    for w in W:
        assert delta_permuted(w, lam) == delta(dot_action(w, lam))


def test_typical_witness_for_zero_weight():
    # (0, 0) is atypical but some twist has delta = 3
    lam = weight_from_ints(GF5, (0, 0))
    assert not is_typical(lam)
    vals = {delta_permuted(w, lam) for w in weyl_elements(3)}
    assert GF5.element(3) in vals


def test_linear_factor_example():
    # L_1 at the zero weight of p=5: (x2-x1-1)(x3-x1-2) = (-1)(-2) = 2... with
    # x = (0,0,0): factors (0-0+1-2-1)=-2 and (0-0+1-3-1)=-3 -> 6 = 1 mod 5
    lam = weight_from_ints(GF5, (0, 0))
    assert typicality_linear_factor(lam, 1) == GF5.element(6)


def test_typicality_scan_clean():
    for (n, p) in ((3, 5), (3, 7), (3, 11), (4, 7)):
        rep = weyl_typicality_scan(n, p)
        assert rep["existence_counterexamples"] == []
        assert rep["equivalence_counterexamples"] == []
        assert rep["num_weights"] == p ** (n - 1)


# --- p-characters -------------------------------------------------------------------

def test_make_chi_catalog(alg):
    chi1 = make_chi(alg, "chi1", a=1, b=1)
    assert chi1.value(alg.idx("H12")) == 1 and chi1.value(alg.idx("H23")) == 1
    assert chi1.field_params.ext_degree == 5

    chi2 = make_chi(alg, "chi2", b=2)
    assert chi2.value(alg.idx("H12")) == 0 and chi2.value(alg.idx("H23")) == 2

    chi3 = make_chi(alg, "chi3")
    assert chi3.values == {} and chi3.field_params.ext_degree == 1

    chi4 = make_chi(alg, "chi4")
    assert chi4.value(alg.idx("X21")) == 1 and chi4.value(alg.idx("H23")) == 1

    chi5 = make_chi(alg, "chi5")
    assert chi5.values == {alg.idx("X32"): 1}
    assert chi5.field_params.ext_degree == 1

    chi6 = make_chi(alg, "chi6")
    assert chi6.values == {alg.idx("X21"): 1, alg.idx("X32"): 1}


def test_make_chi_validation(alg):
    with pytest.raises(ValueError):
        make_chi(alg, "chi1", a=0, b=1)
    with pytest.raises(ValueError):
        make_chi(alg, "chi1", a=2, b=3)  # a + b = 0 mod 5
    with pytest.raises(ValueError):
        make_chi(alg, "chi2", b=0)
    with pytest.raises(ValueError):
        make_chi(alg, "chi4", b=5)
    with pytest.raises(ValueError):
        make_chi(alg, "bogus")


def test_enumerate_lambda_counts(alg):
    for kind in ("chi1", "chi2", "chi3", "chi4", "chi5", "chi6"):
        chi = make_chi(alg, kind)
        lams = enumerate_lambda(chi)
        assert len(lams) == 25
        assert len({lam.key() for lam in lams}) == 25
        for lam in lams:
            assert lambda_in_admissible_set(chi, lam)


def test_admissible_set_rejects_outsiders(alg):
    chi1 = make_chi(alg, "chi1")
    # prime-field weights are not admissible for a semisimple character
    lam = Weight((chi1.field_params.element(1), chi1.field_params.element(2)))
    assert not lambda_in_admissible_set(chi1, lam)
    # and a weight with a genuinely extension-valued coordinate fails for chi3
    chi3 = make_chi(alg, "chi3")
    w = GF5E.gen()
    chi3_big = make_chi(alg, "chi3")
    chi3_big.field_params = GF5E
    assert not lambda_in_admissible_set(chi3_big, Weight((w, w)))


def test_admissibility_linear_combinations(alg):
    # the defining equation extends p-semilinearly to the whole Cartan
    import numpy as np

    rng = np.random.default_rng(5)
    chi = make_chi(alg, "chi2", b=3)
    lam = lambda_from_params(chi, (2, 4))
    h12, h23 = alg.cartan_indices()
    for _ in range(20):
        c1, c2 = int(rng.integers(0, 5)), int(rng.integers(0, 5))
        lam_h = lam.coords[0] * c1 + lam.coords[1] * c2
        chi_h = chi.field_params.element((c1 * chi.value(h12) + c2 * chi.value(h23)) % 5)
        # (c1 h1 + c2 h2)^[p] = c1^p h1 + c2^p h2 and c^p = c in GF(p)
        lam_hp = lam.coords[0] * pow(c1, 5, 5) + lam.coords[1] * pow(c2, 5, 5)
        assert lam_h**5 - lam_hp == chi_h**5


def test_lambda_from_params_roundtrip(alg):
    chi = make_chi(alg, "chi4", b=2)
    lams = enumerate_lambda(chi)
    for ts in itertools.product(range(5), repeat=2):
        lam = lambda_from_params(chi, ts)
        assert lam in lams or any(lam == l2 for l2 in lams)


def test_weight_shift_and_lift():
    lam = weight_from_ints(GF5, (1, 2))
    assert lam.shift((1, -1)) == weight_from_ints(GF5, (2, 1))
    xs = lam.lift()
    assert [x.lift_int() for x in xs] == [3, 2, 0]


def test_weight_key_deterministic():
    lam1 = weight_from_ints(GF5, (1, 2))
    lam2 = weight_from_ints(GF5, (1, 2))
    assert lam1.key() == lam2.key()
    assert lam1 == lam2 and hash(lam1) == hash(lam2)
