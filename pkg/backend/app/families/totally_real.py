# backend/app/families/totally_real.py
"""
SKT algebras with totally real commutator ideal g' = span(X_1 .. X_m).

Basis (X_1, JX_1, .., X_m, JX_m, U_J) with U_J = (g' + Jg')^⊥ carrying the
standard J. The first r directions are affine ([JX_i, X_i] = λ_i X_i,
twisted by covectors μ_i on U_J); the other ℓ = m - r are central and
produced by (1,1)-forms ν̃_j on U_J with Σ ν̃_j ∧ ν̃_j = 0.
"""

import numpy as np

from app.config import DEFAULT_RANK_TOL, DEFAULT_TOL
from app.core.hermitian import HermitianStructure
from app.core.lie import LieAlgebra
from app.core.tensor import AltForm, max_abs, numerical_rank, wedge
from app.errors import ParameterRangeError
from app.families.common import BracketTable, alpha_wedge_J_alpha, as_array, as_matrix, finish, standard_J
from app.families.params import TotallyRealParams
from app.logs import get_logger

logger = get_logger(__name__)


def nu_forms(p: TotallyRealParams, J_U: np.ndarray) -> list[np.ndarray]:
    ell = p.m - p.r
    size = J_U.shape[0]
    if ell == 0:
        return []
    if p.nu is not None:
        forms = [as_matrix(M, size, f"nu[{j}]") for j, M in enumerate(p.nu)]
    elif p.alphas is not None:
        forms = [alpha_wedge_J_alpha(as_array(v, size, f"alphas[{j}]"), J_U) for j, v in enumerate(p.alphas)]
    else:
        raise ParameterRangeError(f"{ell} central directions need nu forms or alpha covectors")
    if len(forms) != ell:
        raise ParameterRangeError(f"need m - r = {ell} forms, got {len(forms)}")
    return forms


def check_nu_forms(forms: list[np.ndarray], J_U: np.ndarray, tol: float = DEFAULT_TOL,
                   rank_tol: float = DEFAULT_RANK_TOL) -> None:
    """(1,1)-type, Σ ν̃_j ∧ ν̃_j = 0 and linear independence."""
    if not forms:
        return
    scale = max(1.0, max(max_abs(M) for M in forms))
    for j, M in enumerate(forms):
        if max_abs(M + M.T) > tol * scale:
            raise ParameterRangeError(f"nu[{j}] is not antisymmetric")
        if max_abs(J_U.T @ M @ J_U - M) > tol * scale:
            raise ParameterRangeError(f"nu[{j}] is not of type (1,1)")
    if J_U.shape[0] >= 4:
        square = sum(wedge(AltForm(M, 2), AltForm(M, 2)).tensor for M in forms)
        if max_abs(square) > tol * scale ** 2:
            raise ParameterRangeError(f"Σ ν̃ ∧ ν̃ = 0 fails (residual {max_abs(square):.3e})")
    stacked = np.array([M.ravel() for M in forms])
    if numerical_rank(stacked, rank_tol) < len(forms):
        raise ParameterRangeError("the forms ν̃_j are linearly dependent")


def gen_totally_real(p: TotallyRealParams,
                     tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    n, m, r = p.n, p.m, p.r
    if not r <= m <= n:
        raise ParameterRangeError(f"need r <= m <= n, got r={r}, m={m}, n={n}")
    lambdas = as_array(p.lambdas, r, "lambdas")
    if np.any(np.abs(lambdas) <= tol):
        raise ParameterRangeError("every λ_i must be non-zero")
    size = 2 * (n - m)
    J_U = standard_J(size)
    mus = [as_array(v, size, f"mu[{i}]") for i, v in enumerate(p.mu)] if p.mu is not None else []
    if p.mu is not None and len(mus) != r:
        raise ParameterRangeError(f"need r = {r} covectors mu, got {len(mus)}")
    mus = mus or [np.zeros(size) for _ in range(r)]
    forms = nu_forms(p, J_U)
    if forms and size == 0:
        raise ParameterRangeError("central directions need U_J != 0")
    check_nu_forms(forms, J_U, tol)

    table = BracketTable(2 * n)
    base = 2 * m
    for i in range(r):
        X, JX = 2 * i, 2 * i + 1
        table.add(JX, X, table.real(X, lambdas[i]))
        mu_J = J_U.T @ mus[i]                      # Y -> μ_i(JY)
        for s in range(size):
            table.add(base + s, X, table.real(X, mus[i][s]))
            table.add(base + s, JX, table.real(X, -mu_J[s]))
    pair_forms = [alpha_wedge_J_alpha(mus[i], J_U) / lambdas[i] for i in range(r)]
    for s in range(size):
        for t in range(s + 1, size):
            v = np.zeros(2 * n)
            for i in range(r):
                v[2 * i] += pair_forms[i][s, t]
            for j, M in enumerate(forms):
                v[2 * (r + j)] += M[s, t]
            if np.any(v):
                table.add(base + s, base + t, v)
    L = table.build(name=f"totally_real(n={n}, m={m}, r={r})")
    return finish(L, tol)
