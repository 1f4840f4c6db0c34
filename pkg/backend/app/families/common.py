# backend/app/families/common.py
"""
Shared pieces of the family generators.

Brackets are written in the table orientation of the classification
results. A complex direction Y occupies the basis pair (Y, iY) = (e_k,
e_{k+1}) with the standard J, so a complex coefficient c of Y is the real
pair (Re c, Im c) at (k, k+1).
"""

import numpy as np

from app.config import DEFAULT_TOL
from app.core.hermitian import HermitianStructure
from app.core.lie import LieAlgebra, jacobi_residual
from app.core.shear import PreShearData
from app.core.tensor import covector, standard_structure, wedge
from app.errors import JacobiViolationError, ParameterRangeError
from app.logs import get_logger

logger = get_logger(__name__)


class BracketTable:
    """Accumulates [e_i, e_j] for i != j; the antisymmetric partner is implied."""

    def __init__(self, dim: int):
        self.dim = dim
        self.brackets: dict[tuple[int, int], np.ndarray] = {}

    def add(self, i: int, j: int, value) -> None:
        value = np.asarray(value, dtype=float)
        if i > j:
            i, j, value = j, i, -value
        self.brackets[(i, j)] = self.brackets.get((i, j), np.zeros(self.dim)) + value

    def real(self, index: int, coeff: float) -> np.ndarray:
        v = np.zeros(self.dim)
        v[index] = coeff
        return v

    def cplx(self, index: int, coeff: complex) -> np.ndarray:
        v = np.zeros(self.dim)
        v[index] = coeff.real
        v[index + 1] = coeff.imag
        return v

    def rotate(self, i: int, y: int, coeff: complex) -> None:
        """[e_i, Y] = c Y extended complex-linearly: [e_i, iY] = i c Y."""
        if coeff == 0:
            return
        self.add(i, y, self.cplx(y, coeff))
        self.add(i, y + 1, self.cplx(y, 1j * coeff))

    def build(self, name: str = "") -> LieAlgebra:
        return LieAlgebra.from_brackets(self.dim, self.brackets, name=name)


def finish(L: LieAlgebra, tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    """Jacobi check, then attach the flat (g, J) of the construction basis."""
    residual = jacobi_residual(L)
    if residual > tol * L.scale() ** 2:
        raise JacobiViolationError(residual)
    logger.debug("generated %s (dim %d, scale %.3g)", L.name, L.dim, L.scale())
    return L, HermitianStructure.standard(L)


def fha_algebra(f, h, alpha, name: str = "") -> LieAlgebra:
    """
    g_{f,h,α} on (Y_1, iY_1, .., Y_m, iY_m, X_1, JX_1, .., X_k, JX_k):

      [JX_a, Y_i]   = α_i(X_a) Y_i
      [JX_a, X_b]   = f(X_a, X_b) + h(X_a, X_b)
      [JX_a, JX_b]  = i (h(X_a, X_b) - h(X_b, X_a))

    f[a, b, :] real in X coordinates, h[a, b, i] and alpha[i, a] complex.
    """
    f = np.asarray(f, dtype=float)
    h = np.asarray(h, dtype=complex)
    alpha = np.asarray(alpha, dtype=complex)
    k = f.shape[0]
    m = alpha.shape[0]
    if f.shape != (k, k, k) or h.shape != (k, k, m) or alpha.shape != (m, k):
        raise ParameterRangeError(
            f"inconsistent shapes f{f.shape}, h{h.shape}, alpha{alpha.shape}"
        )
    table = BracketTable(2 * m + 2 * k)

    def y_part(values) -> np.ndarray:
        v = np.zeros(table.dim)
        for i, c in enumerate(values):
            v += table.cplx(2 * i, complex(c))
        return v

    def x_part(values) -> np.ndarray:
        v = np.zeros(table.dim)
        v[2 * m:: 2] = values
        return v

    for a in range(k):
        JXa = 2 * m + 2 * a + 1
        for i in range(m):
            table.rotate(JXa, 2 * i, complex(alpha[i, a]))
        for b in range(k):
            table.add(JXa, 2 * m + 2 * b, x_part(f[a, b]) + y_part(h[a, b]))
        for b in range(a + 1, k):
            table.add(JXa, 2 * m + 2 * b + 1, y_part(1j * (h[a, b] - h[b, a])))
    return table.build(name)


def alpha_wedge_J_alpha(alpha, J: np.ndarray) -> np.ndarray:
    """Matrix of α ∧ J*α, i.e. (Y, Z) -> α(Y) α(JZ) - α(Z) α(JY)."""
    alpha = np.asarray(alpha, dtype=float)
    return wedge(covector(alpha), covector(J.T @ alpha)).tensor


def standard_J(dim: int) -> np.ndarray:
    if dim == 0:
        return np.zeros((0, 0))
    return standard_structure(dim // 2)[1]


def family_shear_data(L: LieAlgebra, a_indices, tol: float = DEFAULT_TOL) -> PreShearData:
    """
    Shear data (a, ω) producing L from the flat space: a is spanned by the
    listed basis vectors and ω = -C, matching [X, Y] := ω(X, Y) up to the
    sign of the bracket.
    """
    N = L.dim
    a_vectors = np.eye(N)[:, list(a_indices)]
    return PreShearData.build(N // 2, a_vectors, -np.asarray(L.structure), tol=tol)


def as_array(values, length: int, label: str, dtype=float) -> np.ndarray:
    arr = np.asarray(values if values is not None else [0] * length, dtype=dtype)
    if arr.shape != (length,):
        raise ParameterRangeError(f"{label} must have length {length}, got shape {arr.shape}")
    return arr


def as_matrix(values, size: int, label: str) -> np.ndarray:
    M = np.asarray(values if values is not None else np.zeros((size, size)), dtype=float)
    if M.shape != (size, size):
        raise ParameterRangeError(f"{label} must be {size} x {size}, got {M.shape}")
    return M
