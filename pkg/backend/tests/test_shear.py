# backend/tests/test_shear.py

import numpy as np
import pytest

from app.core.catalog import fingerprint_match
from app.core.hermitian import Verdict, skt_verdict
from app.core.random_data import inject_flag_iv, inject_G, random_pre_shear
from app.core.shear import (
    PreShearData,
    check_FK,
    check_integrability,
    check_nu,
    check_shear_data,
    compute_nu,
    construct_shear,
    decompose,
    extract_A,
    integrability_breakdown,
    restrict_residual,
)
from app.core.tensor import basis_form, max_abs
from app.errors import DimensionMismatchError, MetricError, ShearDataError
from app.families.almost_abelian import almost_abelian_shear_data, gen_almost_abelian
from app.families.common import family_shear_data, fha_algebra
from app.families.params import AlmostAbelianParams
from app.families.random_shear import random_shear_data

E6 = np.eye(6)


def _non_commuting_data() -> PreShearData:
    # a = span(e1, e2); ω(e3, ·)|a = A, ω(e4, ·)|a = B with [A, B] != 0
    a_basis = [E6[0], E6[1]]
    entries = [(1, 3, -E6[0]), (2, 4, -E6[0])]
    return PreShearData.from_entries(3, a_basis, entries)


def test_zero_omega_gives_flat_kahler():
    data = PreShearData.build(2, np.eye(4)[:, :1], np.zeros((4, 4, 4)))
    assert check_shear_data(data).passed
    assert check_integrability(data).passed
    assert check_nu(data).passed
    L, H = construct_shear(data)
    assert max_abs(L.structure) == 0.0
    assert skt_verdict(H).verdict is Verdict.KAHLER


def test_shear_of_a_line_is_aff():
    # ω(e1, e2) = -2 e1 on R^2 with a = span(e1)
    data = PreShearData.from_entries(1, [[1.0, 0.0]], [(1, 2, [-2.0, 0.0])])
    L, H = construct_shear(data)
    assert fingerprint_match(L, "aff")
    assert skt_verdict(H).verdict is Verdict.KAHLER


def test_shear_data_failure_residual_is_the_commutator():
    data = _non_commuting_data()
    report = check_shear_data(data)
    assert not report.passed
    assert report.residual == pytest.approx(1.0)
    with pytest.raises(ShearDataError):
        construct_shear(data)


def test_build_rejects_values_outside_a_and_support_on_a():
    W = np.zeros((4, 4, 4))
    W[0, 2, 3], W[2, 0, 3] = 1.0, -1.0        # value e4 is not in a = span(e1)
    with pytest.raises(ShearDataError):
        PreShearData.build(2, np.eye(4)[:, :1], W)
    W = np.zeros((4, 4, 4))
    W[0, 1, 0], W[1, 0, 0] = 1.0, -1.0        # ω(e1, e2) != 0 with e1, e2 in a
    with pytest.raises(ShearDataError):
        PreShearData.build(2, np.eye(4)[:, :2], W)


def test_build_rejects_metric_not_J_invariant():
    with pytest.raises(MetricError):
        PreShearData.build(2, np.eye(4)[:, :1], np.zeros((4, 4, 4)), metric=np.diag([1.0, 2.0, 1.0, 1.0]))


def test_decompose_sizes_and_reassembly(rng):
    data = random_pre_shear(3, 1, 1, rng)
    dec = decompose(data)
    assert dec.sizes == {"aJ": 2, "ar": 1, "UJ": 2, "Ur": 1}
    assert dec.reassembly_residual < 1e-10
    assert set(dec.components) >= {"omega0_JJ^J", "omega0_rr^r", "omega1_rr^J", "omega1_JJ^r"}


def test_breakdown_agrees_with_integrability(rng):
    outcomes = {True: 0, False: 0}
    for k in range(500):
        n = int(rng.choice([3, 4]))
        p = int(rng.integers(0, n))
        q = int(rng.integers(1, n - p + 1))
        data = random_pre_shear(n, p, q, rng, integrable=bool(k % 2))
        whole = check_integrability(data)
        split = integrability_breakdown(data)
        assert split.passed is whole.passed, (n, p, q, split.failing())
        outcomes[whole.passed] += 1
    assert min(outcomes.values()) > 100


def test_injected_flag_iv_is_the_only_failure(rng):
    data = random_pre_shear(4, 1, 2, rng, integrable=True)
    assert integrability_breakdown(data).passed
    broken = inject_flag_iv(data)
    assert integrability_breakdown(broken).failing() == ["iv"]
    assert not check_integrability(broken).passed


def test_injected_G_fails_flag_i(rng):
    data = random_pre_shear(3, 1, 1, rng, integrable=True)
    broken = inject_G(data)
    assert "i" in integrability_breakdown(broken).failing()


def test_nu_vanishes_exactly_for_skt_shears():
    good = almost_abelian_shear_data(AlmostAbelianParams(n=3, a=1.0, z=[complex(-0.5, 1.0), 2j]))
    assert check_nu(good).passed
    assert compute_nu(good).nu.degree == 4

    L = fha_algebra(f=[[[1.0]]], h=np.zeros((1, 1, 1)), alpha=[[0.1 + 0j]])
    bad = family_shear_data(L, range(3))
    assert check_shear_data(bad).passed
    assert check_integrability(bad).passed
    assert not check_nu(bad).passed


def test_nu_vanishes_on_the_automatic_parts(rng):
    seen = {"aJ": 0, "wide_ar": 0, "wide_UJ": 0, "not_skt": 0}
    for _ in range(200):
        _, data = random_shear_data(rng)
        assert check_shear_data(data).passed
        assert check_integrability(data).passed
        dec = decompose(data)
        aJ, ar, UJ, Ur = dec.a_J.basis, dec.a_r.basis, dec.U_J.basis, dec.U_r.basis
        forms = compute_nu(data)
        bound = 1e-12 * data.scale() ** 2
        for form in (forms.nu1, forms.nu2, forms.nu):
            assert restrict_residual(form, np.hstack([aJ, ar])) < bound
            assert restrict_residual(form, np.hstack([aJ, Ur])) < bound
        assert restrict_residual(forms.nu1, aJ, aJ, aJ, np.eye(2 * data.n)) < bound
        assert restrict_residual(forms.nu2, ar, ar, ar, Ur) < bound
        assert restrict_residual(forms.nu2, UJ) < bound
        seen["aJ"] += aJ.shape[1] >= 3
        seen["wide_ar"] += ar.shape[1] >= 3
        seen["wide_UJ"] += UJ.shape[1] >= 4
        seen["not_skt"] += not check_nu(data).passed
    assert min(seen.values()) > 20


def test_restrict_residual_on_mixed_slots():
    form = basis_form(4, (0, 1, 2, 3))
    E = np.eye(4)
    assert restrict_residual(form, E[:, :3], E[:, :3], E[:, :3], E[:, 3:]) == pytest.approx(1.0)
    assert restrict_residual(form, E[:, :3]) == 0.0
    assert restrict_residual(form, E[:, :2], E[:, :2], E[:, :2], E[:, 2:]) == pytest.approx(0.0)
    with pytest.raises(DimensionMismatchError):
        restrict_residual(form, E, E)


def test_family_shear_reproduces_the_family_up_to_sign(rng):
    for _ in range(100):
        n = int(rng.integers(2, 5))
        a = float(rng.choice([0.0, rng.uniform(0.5, 3.0)]))
        z = [complex(rng.choice([0.0, -a / 2]), rng.uniform(-3.0, 3.0)) for _ in range(n - 1)]
        w = list(rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1))
        p = AlmostAbelianParams(n=n, a=a, z=z, w=w)
        L, _ = gen_almost_abelian(p)
        sheared, _ = construct_shear(almost_abelian_shear_data(p))
        assert max_abs(sheared.structure + L.structure) < 1e-10


def test_extract_A_on_almost_abelian_shear():
    data = almost_abelian_shear_data(AlmostAbelianParams(n=2, a=2.0, z=[complex(-1.0, 5.0)]))
    ops = extract_A(data)
    assert len(ops.F) == 1
    assert abs(ops.F[0][0, 0]) == pytest.approx(2.0)
    assert max_abs(ops.G[0]) == pytest.approx(0.0, abs=1e-12)
    assert ops.eigenbasis is not None
    assert abs(ops.alpha[0, 0]) == pytest.approx(abs(complex(-1.0, 5.0)))
    assert check_FK(data, ops).passed
