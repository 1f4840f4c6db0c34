# backend/tests/test_normal_forms.py

import numpy as np
import pytest

from app.core.normal_forms import (
    check_2x2_J_relation,
    f_normal_form,
    find_f_adapted_basis,
    find_identity_element,
    g_skew_diagonalize,
    simultaneous_diagonalize,
    split_rank_two_pair,
    verify_rank_conditions,
)
from app.core.random_data import random_unitary
from app.core.tensor import basis_form, max_abs, standard_structure
from app.errors import DiagonalizationError, PreconditionError
from app.families.common import alpha_wedge_J_alpha


def _diagonal_model(lambdas, n=None) -> np.ndarray:
    """f(e_i, e_i) = λ_i e_i, all other products zero."""
    n = n or len(lambdas)
    f = np.zeros((n, n, n))
    for i, lam in enumerate(lambdas):
        f[i, i, i] = lam
    return f


# --- Unitary diagonalization ---

def test_diagonal_input_is_left_alone():
    U, alpha = simultaneous_diagonalize([np.diag([1j, -0.5 + 2j])])
    assert np.allclose(np.abs(U), np.eye(2))
    assert np.allclose(alpha[:, 0], [1j, -0.5 + 2j])


def test_commuting_normal_family(rng):
    V = random_unitary(3, rng)
    K1 = V @ np.diag([1j, 2j, -1 + 1j]) @ V.conj().T
    K2 = V @ np.diag([0.5, 0.5, 3j]) @ V.conj().T
    U, alpha = simultaneous_diagonalize([K1, K2])
    for k, K in enumerate((K1, K2)):
        D = U.conj().T @ K @ U
        assert max_abs(D - np.diag(np.diag(D))) < 1e-9
        assert np.allclose(np.diag(D), alpha[:, k])
    assert np.allclose(U.conj().T @ U, np.eye(3))


def test_defective_matrix_is_rejected():
    with pytest.raises(DiagonalizationError):
        simultaneous_diagonalize([np.array([[0.0, 1.0], [0.0, 0.0]])])


def test_non_commuting_family_is_rejected():
    with pytest.raises(PreconditionError):
        simultaneous_diagonalize([np.diag([1.0, 2.0]), np.array([[0.0, 1.0], [1.0, 0.0]])])


def test_g_skew_diagonalize():
    _, mu = g_skew_diagonalize([[-1.0]], a=2.0)
    assert mu[0] == pytest.approx(-1.0)
    _, mu = g_skew_diagonalize([[1j]], a=3.0)
    assert mu[0] == pytest.approx(1j)
    with pytest.raises(PreconditionError):
        g_skew_diagonalize([[1.0]], a=0.0)


# --- Symmetric bilinear maps ---

def test_f_adapted_basis_is_triangular():
    f = _diagonal_model([1.0, 1.0])
    V = find_f_adapted_basis(f, seed=3)
    assert np.allclose(V.T @ V, np.eye(2))
    for i in range(2):
        q = np.einsum("i,j,ijk->k", V[:, i], V[:, i], f)
        head = V[:, : i + 1]
        assert max_abs(q - head @ (head.T @ q)) < 1e-6


def test_identity_element_of_a_conjugated_model(rng):
    Q = np.eye(3) + 0.3 * rng.standard_normal((3, 3))
    Q_inv = np.linalg.inv(Q)
    f = np.einsum("ki,kj,lk->ijl", Q_inv, Q_inv, Q)
    v = find_identity_element(f, seed=1)
    assert np.allclose(v, Q @ np.ones(3), atol=1e-8)
    assert find_identity_element(_diagonal_model([2.0]))[0] == pytest.approx(0.5)


def test_identity_element_needs_onto():
    with pytest.raises(PreconditionError):
        find_identity_element(_diagonal_model([1.0, 0.0]))


def test_f_normal_form_diagonal_part():
    nf = f_normal_form(_diagonal_model([2.0, 3.0], n=3))
    assert nf.V1.shape[1] == 2
    assert sorted(np.abs(nf.lambdas)) == pytest.approx([2.0, 3.0])
    assert nf.V2.shape[1] == 0
    assert nf.V3.shape[1] == 1
    assert abs(nf.V3[2, 0]) == pytest.approx(1.0)


def test_f_normal_form_nilpotent_part():
    f = np.zeros((3, 3, 3))
    f[2, 2, 1] = 1.0                       # f(e3, e3) = e2
    nf = f_normal_form(f)
    assert (nf.V1.shape[1], nf.V2.shape[1], nf.V3.shape[1]) == (0, 1, 2)
    assert abs(nf.V2[1, 0]) == pytest.approx(1.0)


def test_f_normal_form_zero_map():
    nf = f_normal_form(np.zeros((3, 3, 3)))
    assert (nf.V1.shape[1], nf.V2.shape[1], nf.V3.shape[1]) == (0, 0, 3)


def test_f_normal_form_rejects_non_associative():
    f = np.zeros((2, 2, 2))
    f[0, 0, 1] = 1.0
    f[0, 1, 0] = f[1, 0, 0] = 1.0
    with pytest.raises(PreconditionError):
        f_normal_form(f)


# --- Pairs of (1,1)-forms ---

def test_split_rank_two_pair_rotates_to_decomposables():
    _, J, _ = standard_structure(2)
    e12, e34 = basis_form(4, (0, 1)).tensor, basis_form(4, (2, 3)).tensor
    nu1, nu2 = (e12 + e34) / np.sqrt(2), (e12 - e34) / np.sqrt(2)
    split = split_rank_two_pair(nu1, nu2, J)
    assert split.residual < 1e-9
    (c, s), (ms, c2) = split.rotation
    first = c * nu1 + s * nu2
    second = ms * nu1 + c2 * nu2
    assert np.allclose(first, split.signs[0] * alpha_wedge_J_alpha(split.alpha, J))
    assert np.allclose(second, split.signs[1] * alpha_wedge_J_alpha(split.beta, J))


def test_split_rank_two_pair_needs_vanishing_sum():
    e12, e34 = basis_form(4, (0, 1)).tensor, basis_form(4, (2, 3)).tensor
    with pytest.raises(PreconditionError):
        split_rank_two_pair(e12 + e34, np.zeros((4, 4)))


def test_rank_conditions():
    zero = np.zeros((4, 4))
    report = verify_rank_conditions(zero, zero, zero)
    assert report.kernel_dim == 4 and report.theta_rank == 0 and report.passed
    e12 = basis_form(4, (0, 1)).tensor
    report = verify_rank_conditions(e12, zero, zero)
    assert report.codim == 2 and report.passed
    sigma = e12 + basis_form(4, (2, 3)).tensor
    with pytest.raises(PreconditionError):
        verify_rank_conditions(sigma, zero, zero)


def test_2x2_J_relation():
    _, J, _ = standard_structure(1)
    assert check_2x2_J_relation(np.eye(2), np.eye(2)).passed
    assert check_2x2_J_relation(J, J).passed
    with pytest.raises(PreconditionError):
        check_2x2_J_relation(np.diag([1.0, 2.0]), np.array([[0.0, 1.0], [1.0, 0.0]]))


# --- Randomized lemma validation ---

def test_g_skew_lemma_on_random_normal_matrices(rng):
    for _ in range(1000):
        m = int(rng.integers(1, 4))
        a = float(rng.uniform(0.5, 3.0))
        mu = rng.choice([0.0, -a / 2], size=m) + 1j * rng.uniform(-3.0, 3.0, m)
        V = random_unitary(m, rng)
        P = V @ np.diag(mu) @ V.conj().T
        U, found = g_skew_diagonalize(P, a)
        D = U.conj().T @ P @ U
        assert max_abs(D - np.diag(np.diag(D))) < 1e-9
        assert max_abs(found.real * (2 * found.real + a)) < 1e-9
        assert max(np.min(np.abs(found - target)) for target in mu) < 1e-9


def test_2x2_J_lemma_never_fails_its_conclusion(rng):
    _, J, _ = standard_structure(1)
    passed = 0
    for k in range(1000):
        # [A2, J] = J[A1, J] fixes the J-anticommuting part of A2 as J A1^-
        x = rng.standard_normal(4)
        A1_plus = x[0] * np.eye(2) + x[1] * J
        A1_minus = np.zeros((2, 2)) if k % 2 else rng.standard_normal() * np.diag([1.0, -1.0])
        A2_plus = x[2] * np.eye(2) + x[3] * J
        A1, A2 = A1_plus + A1_minus, A2_plus + J @ A1_minus
        try:
            report = check_2x2_J_relation(A1, A2, J)
        except PreconditionError:
            continue
        assert report.passed
        passed += 1
    assert passed >= 500


def test_identity_element_of_random_conjugated_models(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 4))
        lam = rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n)
        O1 = np.linalg.qr(rng.standard_normal((n, n)))[0]
        O2 = np.linalg.qr(rng.standard_normal((n, n)))[0]
        Q = O1 @ np.diag(rng.uniform(0.5, 2.0, n)) @ O2
        Q_inv = np.linalg.inv(Q)
        f = np.einsum("ki,kj,k,lk->ijl", Q_inv, Q_inv, lam, Q)
        v = find_identity_element(f, seed=int(rng.integers(1 << 16)))
        assert max_abs(np.einsum("i,ijk->kj", v, f) - np.eye(n)) < 1e-8
        assert max_abs(v - Q @ (1.0 / lam)) < 1e-8 * max_abs(Q @ (1.0 / lam))


def test_split_rank_two_pair_undoes_random_rotations_on_R8(rng):
    _, J, _ = standard_structure(4)
    for _ in range(100):
        alpha, beta = rng.standard_normal(8), rng.standard_normal(8)
        nu1, nu2 = alpha_wedge_J_alpha(alpha, J), alpha_wedge_J_alpha(beta, J)
        theta = rng.uniform(0.1, np.pi / 2 - 0.1)
        c, s = np.cos(theta), np.sin(theta)
        split = split_rank_two_pair(c * nu1 + s * nu2, -s * nu1 + c * nu2, J)
        assert split.residual < 1e-7
        R = split.rotation
        assert max_abs(R @ R.T - np.eye(2)) < 1e-12
        rotated = [R[i, 0] * (c * nu1 + s * nu2) + R[i, 1] * (-s * nu1 + c * nu2) for i in range(2)]
        rebuilt = [split.signs[0] * alpha_wedge_J_alpha(split.alpha, J),
                   split.signs[1] * alpha_wedge_J_alpha(split.beta, J)]
        for got, want in zip(rebuilt, rotated):
            assert max_abs(got - want) < 1e-7 * max(1.0, max_abs(want))
