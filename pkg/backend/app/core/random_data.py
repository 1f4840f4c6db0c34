# backend/app/core/random_data.py
"""
Seeded random pre-shear data on R^{2n} with the standard (g, J).

  random_subspace   a with prescribed dim a_J = 2p, dim a_r = q
  random_omega      generic ω, or ω drawn from the kernel of the
                    integrability equation
  inject_*          perturbations that break one named condition
"""

import numpy as np

from app.config import DEFAULT_RANK_TOL, DEFAULT_TOL
from app.core.shear import PreShearData, ShearDecomposition, decompose, integrability_tensor
from app.core.tensor import Subspace, from_complex, null_space, standard_structure
from app.errors import ParameterRangeError
from app.logs import get_logger

logger = get_logger(__name__)


def random_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_subspace(n: int, p: int, q: int, rng: np.random.Generator) -> Subspace:
    """
    a = a_J ⊕ a_r in R^{2n}: a_J spans p complex lines, a_r is a generic
    real q-plane in the remaining coordinates (totally real for q <= n - p),
    the whole picture moved by a random unitary.
    """
    if p < 0 or q < 0 or p + q > n or (p + q == 0):
        raise ParameterRangeError(f"need 0 < p + q <= n, got p={p}, q={q}, n={n}")
    g, _, _ = standard_structure(n)
    vectors = [np.eye(2 * n)[:, k] for k in range(2 * p)]
    for _ in range(q):
        v = np.zeros(2 * n)
        v[2 * p:] = rng.standard_normal(2 * (n - p))
        vectors.append(v)
    U = from_complex(random_unitary(n, rng))
    return Subspace.span(U @ np.column_stack(vectors), g)


def _complement(a: Subspace) -> np.ndarray:
    return a.orthogonal_complement().basis


def _omega_basis(a: Subspace) -> tuple[np.ndarray, list[np.ndarray]]:
    """Frame Q = [a | a^⊥] and the elementary ω's that vanish on a x a."""
    N, d = a.ambient_dim, a.dim
    Q = np.hstack([a.basis, _complement(a)])
    dual = np.linalg.inv(Q)                     # rows: dual covectors
    elementary = []
    for i in range(N):
        for j in range(max(i + 1, d), N):
            two = np.outer(dual[i], dual[j]) - np.outer(dual[j], dual[i])
            for c in range(d):
                elementary.append(np.einsum("ij,k->ijk", two, a.basis[:, c]))
    return Q, elementary


def random_omega(n: int, a: Subspace, rng: np.random.Generator, integrable: bool = False,
                 scale: float = 1.0, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """a-valued ω vanishing on a x a; integrable=True draws from ker of the integrability map."""
    _, J, _ = standard_structure(n)
    _, elementary = _omega_basis(a)
    coeffs = rng.standard_normal(len(elementary))
    if integrable:
        M = np.column_stack([integrability_tensor(W, J).ravel() for W in elementary])
        kernel = null_space(M, rank_tol)
        if kernel.shape[1] == 0:
            logger.warning("integrability equation has only the zero solution here")
            return np.zeros((2 * n,) * 3)
        coeffs = kernel @ rng.standard_normal(kernel.shape[1])
    W = np.tensordot(coeffs, np.array(elementary), axes=(0, 0))
    return scale * W


def random_pre_shear(n: int, p: int, q: int, rng: np.random.Generator,
                     integrable: bool = False, tol: float = DEFAULT_TOL) -> PreShearData:
    """
    Random a and ω. With integrable=True, ω is drawn from the kernel of
    the integrability equation only; the shear condition is generically
    violated. app.families.random_shear draws data satisfying both.
    """
    a = random_subspace(n, p, q, rng)
    W = random_omega(n, a, rng, integrable=integrable)
    return PreShearData.build(n, a.basis, W, tol=tol)


def _dual_rows(data: PreShearData) -> tuple[np.ndarray, ShearDecomposition]:
    dec = decompose(data)
    return np.linalg.inv(dec.frame), dec


def inject_flag_iv(data: PreShearData, size: float = 1.0) -> PreShearData:
    """Give ω(JX_1, JX_2) an a_r component (X_i in a_r); needs dim a_r >= 2."""
    dual, dec = _dual_rows(data)
    ur = dec.index("Ur")
    if len(ur) < 2:
        raise ParameterRangeError("flag (iv) needs dim a_r >= 2")
    i, j = ur[0], ur[1]
    two = np.outer(dual[i], dual[j]) - np.outer(dual[j], dual[i])
    W = data.omega + size * np.einsum("ij,k->ijk", two, dec.a_r.basis[:, 0])
    return PreShearData.build(data.n, data.a.basis, W, data.metric, data.J)


def inject_G(data: PreShearData, size: float = 1.0) -> PreShearData:
    """Make G_X = P_r ω(JX, ·)|a_J non-zero; needs a_J and a_r both non-zero."""
    dual, dec = _dual_rows(data)
    ur, aj = dec.index("Ur"), dec.index("aJ")
    if not len(ur) or not len(aj):
        raise ParameterRangeError("G needs a_J and a_r both non-zero")
    i, j = ur[0], aj[0]
    two = np.outer(dual[i], dual[j]) - np.outer(dual[j], dual[i])
    W = data.omega + size * np.einsum("ij,k->ijk", two, dec.a_r.basis[:, 0])
    return PreShearData.build(data.n, data.a.basis, W, data.metric, data.J)
