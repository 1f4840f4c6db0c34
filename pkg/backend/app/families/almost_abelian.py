# backend/app/families/almost_abelian.py
"""
Almost Abelian SKT algebras R^{2n-1} ⋊ R and the eigenvalue test deciding
which almost Abelian algebras carry an SKT structure at all.
"""

import numpy as np
from pydantic import BaseModel

from app.config import CLUSTER_GAP, DEFAULT_RANK_TOL, DEFAULT_TOL
from app.core.hermitian import HermitianStructure
from app.core.lie import LieAlgebra
from app.core.shear import PreShearData
from app.core.tensor import numerical_rank
from app.errors import DimensionMismatchError, ParameterRangeError
from app.families.common import as_array, family_shear_data, fha_algebra, finish
from app.families.params import AlmostAbelianParams
from app.logs import get_logger

logger = get_logger(__name__)


# --- Generator ---

def resolve_almost_abelian(p: AlmostAbelianParams) -> tuple[float, np.ndarray, np.ndarray]:
    """(a, z, w) with the normal form (m, b) expanded when z is not given."""
    k = p.n - 1
    if p.z is not None:
        z = as_array(p.z, k, "z", complex)
    else:
        b = as_array(p.b, k, "b")
        m = p.m or 0
        if not 0 <= m <= k:
            raise ParameterRangeError(f"split index m must lie in [0, {k}], got {m}")
        z = 1j * b.astype(complex)
        z[:m] += -p.a / 2
    w = as_array(p.w, k, "w", complex)
    return p.a, z, w


def check_real_parts(a: float, z: np.ndarray, tol: float = DEFAULT_TOL) -> None:
    eps = tol * max(1.0, abs(a))
    for i, zi in enumerate(z):
        if min(abs(zi.real), abs(zi.real + a / 2)) > eps:
            raise ParameterRangeError(
                f"Re(z_{i + 1}) = {zi.real:.6g} is neither 0 nor -a/2 = {-a / 2:.6g}"
            )


def gen_almost_abelian(p: AlmostAbelianParams,
                       tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    """[JX, Y_j] = z_j Y_j, [JX, X] = aX + Σ w_j Y_j with Re(z_j) in {0, -a/2}."""
    a, z, w = resolve_almost_abelian(p)
    check_real_parts(a, z, tol)
    L = fha_algebra(
        f=np.array([[[a]]]),
        h=w.reshape(1, 1, -1),
        alpha=z.reshape(-1, 1),
        name=f"almost_abelian(n={p.n})",
    )
    return finish(L, tol)


def almost_abelian_ad(L: LieAlgebra) -> np.ndarray:
    """ad(JX) restricted to the ideal a = span(e_1 .. e_{2n-1}) of a generated algebra."""
    N = L.dim
    JX = np.zeros(N)
    JX[N - 1] = 1.0
    return L.ad(JX)[: N - 1, : N - 1]


def ad_matrix(a: float, z, w) -> np.ndarray:
    """The same matrix straight from (a, z, w), without the range check."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    k = z.shape[0]
    M = np.zeros((2 * k + 1, 2 * k + 1))
    for i, (zi, wi) in enumerate(zip(z, w)):
        M[2 * i: 2 * i + 2, 2 * i: 2 * i + 2] = [[zi.real, -zi.imag], [zi.imag, zi.real]]
        M[2 * i, 2 * k] = wi.real
        M[2 * i + 1, 2 * k] = wi.imag
    M[2 * k, 2 * k] = a
    return M


def almost_abelian_shear_data(p: AlmostAbelianParams, tol: float = DEFAULT_TOL) -> PreShearData:
    L, _ = gen_almost_abelian(p, tol)
    return family_shear_data(L, range(L.dim - 1), tol)


# --- Decision procedure ---

class AdmissibilityReport(BaseModel):
    admissible: bool
    case: str | None = None
    a: float | None = None
    pairs: list[tuple[float, float]] = []
    eigenvalues: list[tuple[float, float]]
    diagonalizable: bool
    reason: str


def _clusters(values: np.ndarray, gap: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for idx in np.argsort(values.real + 1e-3 * values.imag):
        for group in groups:
            if abs(values[group[0]] - values[idx]) <= gap:
                group.append(int(idx))
                break
        else:
            groups.append([int(idx)])
    return groups


def _kernel_dim(M: np.ndarray, rank_tol: float) -> int:
    return M.shape[0] - numerical_rank(M, rank_tol)


def _pair_for(a: float, values: np.ndarray, groups: list[list[int]], a_group: int,
              gap: float) -> list[tuple[float, float]] | None:
    """Pair the spectrum minus one copy of a into (z, z̄) with Re z in {0, -a/2}."""
    targets = (0.0, -a / 2)
    pairs = []
    for g, group in enumerate(groups):
        count = len(group) - (1 if g == a_group else 0)
        if count == 0:
            continue
        lam = complex(np.mean(values[group]))
        if min(abs(lam.real - t) for t in targets) > gap:
            return None
        if abs(lam.imag) <= gap:
            if count % 2:
                return None
            pairs.extend([(lam.real, 0.0)] * (count // 2))
        elif lam.imag > 0:
            pairs.extend([(lam.real, lam.imag)] * count)
    return pairs


def decide_almost_abelian(f, tol: float = DEFAULT_TOL,
                          rank_tol: float = DEFAULT_RANK_TOL) -> AdmissibilityReport:
    """
    Does R^{2n-1} ⋊_f R admit an SKT structure? Either f is diagonalizable
    over C with one real eigenvalue a and the rest in pairs (z, z̄) with
    Re z in {0, -a/2}, or f has exactly one Jordan block, of size 2 and
    eigenvalue 0, and otherwise eigenvalues ±i b_k and 0.
    """
    f = np.asarray(f, dtype=float)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {f.shape}")
    N = f.shape[0]
    if N % 2 == 0:
        raise DimensionMismatchError(f"the ideal of an almost Abelian 2n-dim algebra has odd dimension, got {N}")
    scale = max(1.0, float(np.max(np.abs(f))) if f.size else 1.0)
    gap = CLUSTER_GAP * scale
    values = np.linalg.eigvals(f)
    groups = _clusters(values, gap)
    geometric = {
        g: _kernel_dim(f - np.mean(values[group]) * np.eye(N), rank_tol)
        for g, group in enumerate(groups)
    }
    diagonalizable = all(geometric[g] == len(group) for g, group in enumerate(groups))
    spectrum = [(float(v.real), float(v.imag)) for v in values[np.argsort(values.real + 1e-3 * values.imag)]]
    base = dict(eigenvalues=spectrum, diagonalizable=diagonalizable)

    if diagonalizable:
        for g, group in enumerate(groups):
            lam = complex(np.mean(values[group]))
            if abs(lam.imag) > gap:
                continue
            pairs = _pair_for(lam.real, values, groups, g, gap)
            if pairs is not None:
                logger.debug("almost Abelian case (i): a=%.6g, pairs=%s", lam.real, pairs)
                return AdmissibilityReport(admissible=True, case="i", a=lam.real, pairs=pairs,
                                           reason="diagonalizable with admissible eigenvalue pairing", **base)
        return AdmissibilityReport(
            admissible=False,
            reason="eigenvalue real parts do not pair into {0, -a/2} for any real eigenvalue a",
            **base,
        )

    if any(abs(v.real) > gap for v in values):
        return AdmissibilityReport(
            admissible=False,
            reason="not diagonalizable and eigenvalue real parts are non-zero",
            **base,
        )
    for g, group in enumerate(groups):
        lam = complex(np.mean(values[group]))
        defect = len(group) - geometric[g]
        if abs(lam) > gap:
            if defect:
                return AdmissibilityReport(
                    admissible=False,
                    reason=f"Jordan block at non-zero eigenvalue {lam:.4g}",
                    **base,
                )
            continue
        kernel_sq = _kernel_dim(f @ f, rank_tol)
        if defect != 1 or len(group) < 3 or kernel_sq != len(group):
            return AdmissibilityReport(
                admissible=False,
                reason="one Jordan block of size 2 at eigenvalue 0 required, plus a simple 0",
                **base,
            )
    pairs = [(0.0, float(abs(v.imag))) for v in values if v.imag > gap]
    return AdmissibilityReport(admissible=True, case="ii", a=0.0, pairs=pairs,
                               reason="one Jordan block of size 2 at 0, imaginary spectrum", **base)
