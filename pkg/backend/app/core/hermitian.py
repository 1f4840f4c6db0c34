# backend/app/core/hermitian.py
"""
Left-invariant Hermitian geometry on a Lie algebra: Chevalley–Eilenberg
differential, Nijenhuis tensor, torsion 3-form and the SKT verdict.
"""

from dataclasses import dataclass
from enum import Enum
from math import comb

import numpy as np
from pydantic import BaseModel

from app.config import DEFAULT_TOL
from app.core.lie import LieAlgebra
from app.core.tensor import (
    AltForm,
    antisymmetrize,
    fundamental_form,
    max_abs,
    pullback_J,
    standard_structure,
)
from app.errors import DimensionMismatchError, UnsupportedArityError
from app.logs import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class HermitianStructure:
    algebra: LieAlgebra
    metric: np.ndarray
    J: np.ndarray

    def __post_init__(self):
        N = self.algebra.dim
        for label in ("metric", "J"):
            arr = np.array(getattr(self, label), dtype=float)
            if arr.shape != (N, N):
                raise DimensionMismatchError(f"{label} must be {N} x {N}, got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, label, arr)

    @classmethod
    def standard(cls, L: LieAlgebra) -> "HermitianStructure":
        g, J, _ = standard_structure(L.dim // 2)
        return cls(L, g, J)

    @property
    def sigma(self) -> AltForm:
        return fundamental_form(self.metric, self.J)

    def compatibility_residual(self) -> float:
        return max_abs(self.J.T @ self.metric @ self.J - self.metric)

    def j_square_residual(self) -> float:
        return max_abs(self.J @ self.J + np.eye(self.algebra.dim))


def ce_differential(L: LieAlgebra, alpha: AltForm) -> AltForm:
    """
    d alpha(X0..Xk) = sum_{i<j} (-1)^{i+j} alpha([Xi, Xj], X0, .., ^i, .., ^j, ..),
    computed as -C(k+1, 2) * Alt(alpha([., .], ...)).
    """
    k = alpha.degree
    if k > 3:
        raise UnsupportedArityError(f"differential of a {k}-form exceeds degree 4")
    if alpha.dim != L.dim:
        raise DimensionMismatchError(f"{k}-form on R^{alpha.dim} vs algebra of dim {L.dim}")
    T = np.tensordot(L.structure, alpha.tensor, axes=([2], [0]))
    if alpha.vector_valued:
        return -comb(k + 1, 2) * antisymmetrize(T, k + 1)
    return -comb(k + 1, 2) * antisymmetrize(T)


def nijenhuis_tensor(L: LieAlgebra, J: np.ndarray) -> np.ndarray:
    """N[i, j, :] = [Je_i, Je_j] - [e_i, e_j] - J[Je_i, e_j] - J[e_i, Je_j]."""
    C = L.structure
    J = np.asarray(J, dtype=float)
    both = np.einsum("ai,bj,abk->ijk", J, J, C)
    left = np.einsum("ai,ajk->ijk", J, C)
    right = np.einsum("bj,ibk->ijk", J, C)
    return both - C - np.einsum("lk,ijk->ijl", J, left + right)


def nijenhuis_norm(L: LieAlgebra, J: np.ndarray) -> float:
    return max_abs(nijenhuis_tensor(L, J))


def torsion_three_form(H: HermitianStructure) -> AltForm:
    """c = -J^*(d sigma) with sigma = g(J., .)."""
    return -pullback_J(ce_differential(H.algebra, H.sigma), H.J)


class Verdict(str, Enum):
    KAHLER = "kahler"
    SKT_STRICT = "skt_strict"
    HERMITIAN_NOT_SKT = "hermitian_not_skt"
    NOT_INTEGRABLE = "not_integrable"
    NOT_HERMITIAN = "not_hermitian"

    @property
    def is_skt(self) -> bool:
        return self in (Verdict.KAHLER, Verdict.SKT_STRICT)


class SKTReport(BaseModel):
    verdict: Verdict
    compatibility: float
    j_square: float
    nijenhuis: float
    d_sigma: float
    torsion: float
    d_torsion: float
    scale: float
    tol: float


def skt_verdict(H: HermitianStructure, tol: float = DEFAULT_TOL) -> SKTReport:
    """
    Classify (g, J) on the algebra. Thresholds are relative: tol for the
    metric checks, tol*s for N and d sigma, tol*s^2 for dc, where s is the
    largest structure constant (at least 1).
    """
    L = H.algebra
    s = L.scale()
    residuals = {
        "compatibility": H.compatibility_residual(),
        "j_square": H.j_square_residual(),
        "nijenhuis": nijenhuis_norm(L, H.J),
        "d_sigma": 0.0,
        "torsion": 0.0,
        "d_torsion": 0.0,
    }
    metric_scale = max(1.0, max_abs(H.metric))
    if residuals["compatibility"] > tol * metric_scale or residuals["j_square"] > tol:
        verdict = Verdict.NOT_HERMITIAN
    elif residuals["nijenhuis"] > tol * s:
        verdict = Verdict.NOT_INTEGRABLE
    else:
        residuals["d_sigma"] = ce_differential(L, H.sigma).norm()
        c = torsion_three_form(H)
        residuals["torsion"] = c.norm()
        residuals["d_torsion"] = ce_differential(L, c).norm()
        if residuals["d_sigma"] <= tol * s * metric_scale:
            verdict = Verdict.KAHLER
        elif residuals["d_torsion"] <= tol * s * s * metric_scale:
            verdict = Verdict.SKT_STRICT
        else:
            verdict = Verdict.HERMITIAN_NOT_SKT
    logger.debug("skt verdict %s (%s)", verdict.value, residuals)
    return SKTReport(verdict=verdict, scale=s, tol=tol, **residuals)
