import random

import pytest

from gausslat.census import census, enumerate_invariant_forms, reduce
from gausslat.errors import EnumerationLimitError, ValidationError
from gausslat.lattices import gamma_2g, symplectic_basis
from gausslat.theta import (
    Characteristic,
    ThetaEvaluator,
    cocycle_factor,
    cocycle_identity_report,
    form_to_characteristic,
    iota_ratio_report,
    period_matrix,
    random_symplectic_change,
    theta_constant,
    verify_census_numeric,
)

from conftest import zi_power

# frozen oracle values: direct summation at radius 8 in 40-digit arithmetic
THETA_00_AT_I = 1.086434811213308014575316
THETA_HALF_AT_I = 0.9135791381561168214072426


# -------------------------------------------------------------- period matrix

def test_period_matrix_gaussify_identity_is_i():
    for n in (1, 2, 3):
        lat = zi_power(n)
        pm = period_matrix(lat, symplectic_basis(lat))
        for j in range(n):
            for k in range(n):
                assert pm.x_exact[j][k] == 0
                assert pm.y_exact[j][k] == (1 if j == k else 0)


def test_period_matrix_gamma8_in_siegel_space():
    lat = gamma_2g(4)
    pm = period_matrix(lat, symplectic_basis(lat))
    # exact symmetry
    for j in range(4):
        for k in range(4):
            assert pm.x_exact[j][k] == pm.x_exact[k][j]
            assert pm.y_exact[j][k] == pm.y_exact[k][j]
    assert pm.y_min_cert > 0
    # float-level residual, as an independent sanity bound
    tau = pm.tau
    res = max(abs(tau[j][k] - tau[k][j]) for j in range(4) for k in range(4))
    assert res < 1e-12


def test_period_matrix_coordinate_roundtrip():
    lat = gamma_2g(4)
    pm = period_matrix(lat, symplectic_basis(lat))
    rng = random.Random(31)
    for _ in range(10):
        v = [rng.randint(-3, 3) for _ in range(8)]
        z = pm.complex_coords(v)
        back = pm.real_coords(z)
        assert max(abs(a - b) for a, b in zip(v, back)) < 1e-9


# ------------------------------------------------------------- theta constants

def test_theta_odd_characteristic_is_exact_zero():
    lat = zi_power(1)
    pm = period_matrix(lat, symplectic_basis(lat))
    val = theta_constant(pm, Characteristic((1,), (1,)), 1e-10)
    assert val.value == 0


def test_theta_even_values_match_direct_summation():
    lat = zi_power(1)
    pm = period_matrix(lat, symplectic_basis(lat))
    v00 = theta_constant(pm, Characteristic((0,), (0,)), 1e-12)
    assert abs(v00.value - THETA_00_AT_I) < 1e-12
    v10 = theta_constant(pm, Characteristic((1,), (0,)), 1e-12)
    v01 = theta_constant(pm, Characteristic((0,), (1,)), 1e-12)
    assert abs(abs(v10.value) - THETA_HALF_AT_I) < 1e-12
    assert abs(abs(v01.value) - THETA_HALF_AT_I) < 1e-12
    assert abs(abs(v10.value) - abs(v01.value)) < 1e-13


def test_theta_product_factorization_on_squares():
    # tau = i I_2 factorizes theta over coordinates
    lat = zi_power(2)
    pm = period_matrix(lat, symplectic_basis(lat))
    val = theta_constant(pm, Characteristic((0, 0), (0, 0)), 1e-12).value
    assert abs(val - THETA_00_AT_I**2) < 1e-11
    val2 = theta_constant(pm, Characteristic((1, 0), (0, 0)), 1e-12).value
    assert abs(abs(val2) - THETA_HALF_AT_I * THETA_00_AT_I) < 1e-11


def test_theta_all_odd_characteristics_vanish_exhaustive_small_g():
    # every one of the 2^(2g) characteristics for g <= 3
    for n in (1, 2, 3):
        lat = zi_power(n)
        pm = period_matrix(lat, symplectic_basis(lat))
        ev = ThetaEvaluator(pm, 1e-10)
        for code in range(1 << (2 * n)):
            a = tuple((code >> j) & 1 for j in range(n))
            b = tuple((code >> (n + j)) & 1 for j in range(n))
            if sum(x & y for x, y in zip(a, b)) & 1:
                assert abs(ev.constant(a, b).value) == 0
    lat = gamma_2g(2)
    pm = period_matrix(lat, symplectic_basis(lat))
    ev = ThetaEvaluator(pm, 1e-10)
    for code in range(16):
        a = tuple((code >> j) & 1 for j in range(2))
        b = tuple((code >> (2 + j)) & 1 for j in range(2))
        if sum(x & y for x, y in zip(a, b)) & 1:
            assert abs(ev.constant(a, b).value) == 0


def test_theta_odd_invariant_characteristics_vanish_up_to_g6():
    for n in (5, 6):
        lat = zi_power(n)
        pm = period_matrix(lat, symplectic_basis(lat))
        ev = ThetaEvaluator(pm, 1e-8)
        rep = census(lat)
        for f in rep.forms:
            if sum(x & y for x, y in zip(f.char_a, f.char_b)) & 1:
                assert abs(ev.constant(f.char_a, f.char_b).value) <= 1e-10


def test_theta_doubling_consistency():
    lat = gamma_2g(4)
    pm = period_matrix(lat, symplectic_basis(lat))
    c = Characteristic((0, 0, 0, 0), (0, 0, 0, 0))
    coarse = theta_constant(pm, c, 1e-8)
    fine = theta_constant(pm, c, 1e-10)
    assert abs(coarse.value - fine.value) <= coarse.tail_bound + 1e-15


def test_theta_tail_bound_recorded_and_budget_enforced():
    lat = zi_power(1)
    pm = period_matrix(lat, symplectic_basis(lat))
    val = theta_constant(pm, Characteristic((0,), (0,)), 1e-10)
    assert 0 < val.tail_bound <= 1e-10
    with pytest.raises(EnumerationLimitError):
        theta_constant(pm, Characteristic((0,), (0,)), 1e-10, term_budget=2)


def test_theta_rejects_bad_tolerance_and_lengths():
    lat = zi_power(1)
    pm = period_matrix(lat, symplectic_basis(lat))
    with pytest.raises(ValidationError):
        ThetaEvaluator(pm, 0.0)
    ev = ThetaEvaluator(pm, 1e-8)
    with pytest.raises(ValidationError):
        ev.constant((0, 1), (0,))


# ------------------------------------------------------------- characteristics

def test_characteristics_distinct_and_parity_checked():
    lat = gamma_2g(4)
    t = reduce(lat)
    basis = symplectic_basis(lat)
    forms = enumerate_invariant_forms(t)
    # parity always equals the Arf invariant (checked inside); all 16 distinct
    chars = [form_to_characteristic(t, basis, qp) for qp in forms]
    assert len({(c.a, c.b) for c in chars}) == 16
    assert all(c.parity == 0 for c in chars)  # even lattice: all forms even


def test_characteristic_rank_two_odd_form():
    lat = zi_power(1)
    t = reduce(lat)
    basis = symplectic_basis(lat)
    forms = enumerate_invariant_forms(t)
    from gausslat.census import induce
    from gausslat.quadforms import brown

    for qp in forms:
        char = form_to_characteristic(t, basis, qp)
        sigma = brown(induce(t, qp).qq)
        if sigma == 1:
            assert char.a == (1,) and char.b == (1,)
        else:
            assert char.parity == 0


def test_characteristic_translation_equivariance():
    lat = zi_power(2)
    t = reduce(lat)
    basis = symplectic_basis(lat)
    from gausslat.census import InvariantThetaForm, base_invariant_form, vector_mod2

    base = base_invariant_form(t)
    base_char = form_to_characteristic(t, basis, base)
    lam_bits = [vector_mod2(v) for v in basis.lam]
    mu_bits = [vector_mod2(v) for v in basis.mu]
    for coords in range(1 << t.g):
        alpha = t.ai_vector(coords)
        moved = InvariantThetaForm(base.form.translate(alpha))
        char = form_to_characteristic(t, basis, moved)
        # translation shifts the characteristic by the coordinates of alpha in
        # the mod-2 symplectic basis
        da = tuple((x ^ y) for x, y in zip(char.a, base_char.a))
        db = tuple((x ^ y) for x, y in zip(char.b, base_char.b))
        expect = 0
        for j in range(t.g):
            if da[j]:
                expect ^= mu_bits[j]
            if db[j]:
                expect ^= lam_bits[j]
        assert expect == alpha


# ------------------------------------------------------------------- cocycle

def test_cocycle_at_zero_vector_is_one():
    lat = zi_power(2)
    t = reduce(lat)
    pm = period_matrix(lat, symplectic_basis(lat))
    qp = enumerate_invariant_forms(t)[0]
    rng = random.Random(37)
    for _ in range(5):
        z = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(2)]
        assert cocycle_factor(lat, qp, [0, 0, 0, 0], z, pm) == 1


def test_cocycle_identity_random_triples():
    for lat in (zi_power(2), gamma_2g(4)):
        t = reduce(lat)
        pm = period_matrix(lat, symplectic_basis(lat))
        qp = enumerate_invariant_forms(t)[0]
        rep = cocycle_identity_report(lat, qp, pm, trials=400, seed=5)
        assert rep["pass"], rep


def test_iota_ratio_exact(small_suite):
    for lat in small_suite:
        t = reduce(lat)
        forms = enumerate_invariant_forms(t)
        for qp in (forms[0], forms[-1]):
            rep = iota_ratio_report(lat, t, qp, seed=11)
            assert rep["pass"], rep


# ------------------------------------------------------------ numeric verdicts

def test_verify_census_numeric_small_squares():
    expected = {1: 0, 2: 1, 3: 3}
    for n, count in expected.items():
        lat = zi_power(n)
        rep = census(lat)
        num = verify_census_numeric(lat, rep, tol=1e-10)
        assert num["pass"], num["mismatches"]
        assert num["even_vanishing_count"] == count


def test_verify_census_numeric_zi4_known_exception():
    # the product point with all odd factors has multiplicity 4: it vanishes
    # numerically although its residue class is 0 mod 4
    lat = zi_power(4)
    rep = census(lat)
    num = verify_census_numeric(lat, rep, tol=1e-10)
    assert not num["pass"]
    assert len(num["mismatches"]) == 1
    bad = num["mismatches"][0]
    assert bad["predicted_m0_mod4"] == 0 and bad["theta_abs"] <= 1e-12
    t = reduce(lat)
    forms = enumerate_invariant_forms(t)
    from gausslat.census import induce

    qq = induce(t, forms[bad["index"]]).qq
    assert qq.diag == (1, 1, 1, 1)


def test_verify_census_numeric_bound():
    lat = zi_power(3)
    rep = census(lat)
    with pytest.raises(EnumerationLimitError):
        verify_census_numeric(lat, rep, numeric_bound=2)


def test_numeric_invariance_under_symplectic_basis_change():
    lat = zi_power(2)
    rep = census(lat)
    base = verify_census_numeric(lat, rep, tol=1e-10)
    basis = symplectic_basis(lat)
    rng = random.Random(41)
    for _ in range(3):
        moved = random_symplectic_change(basis, rng)
        pm = period_matrix(lat, moved)
        ev = ThetaEvaluator(pm, 1e-10)
        t = reduce(lat)
        forms = enumerate_invariant_forms(t)
        mags = sorted(
            abs(ev.constant(*__form_char(t, moved, qp)).value) for qp in forms
        )
        base_mags = sorted(f["theta_abs"] for f in base["forms"])
        for x, y in zip(mags, base_mags):
            assert abs(x - y) <= 1e-6 * max(1.0, abs(y))


def __form_char(t, basis, qp):
    c = form_to_characteristic(t, basis, qp)
    return c.a, c.b
