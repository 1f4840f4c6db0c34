# backend/tests/test_almost_abelian.py

import numpy as np
import pytest

from app.core.hermitian import Verdict, skt_verdict
from app.errors import DimensionMismatchError, ParameterRangeError
from app.families.almost_abelian import (
    ad_matrix,
    almost_abelian_ad,
    decide_almost_abelian,
    gen_almost_abelian,
    resolve_almost_abelian,
)
from app.families.params import AlmostAbelianParams


def test_generated_member_is_strictly_skt():
    p = AlmostAbelianParams(n=3, a=1.0, z=[complex(-0.5, 1.0), 2j], w=[1.0, 1j])
    L, H = gen_almost_abelian(p)
    assert L.dim == 6
    assert skt_verdict(H).verdict is Verdict.SKT_STRICT


def test_flat_member_is_kahler():
    _, H = gen_almost_abelian(AlmostAbelianParams(n=3))
    assert skt_verdict(H).verdict is Verdict.KAHLER


def test_real_part_outside_the_two_values():
    with pytest.raises(ParameterRangeError):
        gen_almost_abelian(AlmostAbelianParams(n=3, z=[0.3, 0.0]))


def test_normal_form_expands_to_z():
    a, z, w = resolve_almost_abelian(AlmostAbelianParams(n=3, a=2.0, m=1, b=[1.0, 3.0]))
    assert a == 2.0
    assert np.allclose(z, [-1 + 1j, 3j])
    assert np.allclose(w, 0)
    with pytest.raises(ParameterRangeError):
        resolve_almost_abelian(AlmostAbelianParams(n=3, a=2.0, m=3, b=[1.0, 3.0]))


def test_ad_of_generated_algebra_matches_the_matrix():
    z, w = [complex(-0.5, 1.0), 2j], [1.0, 1j]
    L, _ = gen_almost_abelian(AlmostAbelianParams(n=3, a=1.0, z=z, w=w))
    assert np.allclose(almost_abelian_ad(L), ad_matrix(1.0, z, w))


def test_decide_diagonalizable_case():
    f = np.zeros((3, 3))
    f[0, 0] = 2.0
    f[1:, 1:] = [[-1.0, -3.0], [3.0, -1.0]]
    report = decide_almost_abelian(f)
    assert report.admissible
    assert report.case == "i"
    assert report.a == pytest.approx(2.0)
    assert report.diagonalizable


def test_decide_rejects_unpaired_spectrum():
    report = decide_almost_abelian(np.eye(3))
    assert not report.admissible
    assert "pair" in report.reason


def test_decide_rejects_large_jordan_block():
    report = decide_almost_abelian(np.diag([1.0, 1.0], k=1))
    assert not report.admissible
    assert not report.diagonalizable


def test_decide_nilpotent_case():
    report = decide_almost_abelian(ad_matrix(0.0, [0j, 2j], [1.0, 0.0]))
    assert report.admissible
    assert report.case == "ii"
    assert report.pairs == [(0.0, pytest.approx(2.0))]


def test_decide_needs_odd_square_matrix():
    with pytest.raises(DimensionMismatchError):
        decide_almost_abelian(np.eye(4))
    with pytest.raises(DimensionMismatchError):
        decide_almost_abelian(np.ones((3, 2)))


def test_decide_accepts_generated_and_rejects_perturbed():
    w = [1.0, 1j]
    L, _ = gen_almost_abelian(AlmostAbelianParams(n=3, a=1.0, z=[complex(-0.5, 1.0), 2j], w=w))
    assert decide_almost_abelian(almost_abelian_ad(L)).admissible
    perturbed = ad_matrix(1.0, [complex(-0.4, 1.0), 2j], w)
    assert not decide_almost_abelian(perturbed).admissible


def _shift_first_pair(M: np.ndarray, amount: float = 0.1) -> np.ndarray:
    """Moves the real part of the eigenvalue pair on (Y_1, iY_1)."""
    M = M.copy()
    M[0, 0] += amount
    M[1, 1] += amount
    return M


def test_decide_case_i_over_random_members(rng):
    for _ in range(50):
        n = int(rng.integers(2, 5))
        a = float(rng.uniform(1.0, 3.0))
        z = [complex(rng.choice([0.0, -a / 2]), rng.uniform(0.5, 3.0) * rng.choice([-1, 1]))
             for _ in range(n - 1)]
        w = list(rng.standard_normal(n - 1) + 1j * rng.standard_normal(n - 1))
        L, _ = gen_almost_abelian(AlmostAbelianParams(n=n, a=a, z=z, w=w))
        f = almost_abelian_ad(L)
        report = decide_almost_abelian(f)
        assert report.admissible and report.case == "i"
        assert report.a == pytest.approx(a)
        assert not decide_almost_abelian(_shift_first_pair(f)).admissible


def test_decide_case_ii_over_random_members(rng):
    for _ in range(50):
        n = int(rng.integers(3, 5))
        z = [0j] + [1j * rng.uniform(0.5, 3.0) * rng.choice([-1, 1]) for _ in range(n - 2)]
        w = [complex(*rng.uniform(0.5, 2.0, 2))] + list(rng.standard_normal(n - 2) + 0j)
        L, _ = gen_almost_abelian(AlmostAbelianParams(n=n, z=z, w=w))
        f = almost_abelian_ad(L)
        report = decide_almost_abelian(f)
        assert report.admissible and report.case == "ii"
        assert not report.diagonalizable
        perturbed = f.copy()
        perturbed[2, 2] += 0.1
        perturbed[3, 3] += 0.1
        assert not decide_almost_abelian(perturbed).admissible
