# backend/app/families/six_dim.py
"""
Six-dimensional strata that the general families do not reach:

  * three-dimensional commutator ideal g' = span(Y, iY, X) that is not
    totally real, in the unitary basis (Y, iY, X, JX, Z, JZ);
  * four-dimensional complex commutator ideal, where only the equations
    on the pair A_1, A_2 are known, so a checker plus a random source of
    solutions is offered instead of a closed family.
"""

import numpy as np
from pydantic import BaseModel

from app.config import DEFAULT_TOL
from app.core.hermitian import HermitianStructure, skt_verdict
from app.core.lie import LieAlgebra
from app.core.random_data import random_unitary
from app.core.shear import PreShearData, construct_shear
from app.core.tensor import commutator, from_complex, max_abs, standard_structure
from app.errors import DimensionMismatchError, ParameterRangeError
from app.families.common import BracketTable, finish
from app.families.params import FourDimComplexParams, SixDim3CommParams
from app.logs import get_logger

logger = get_logger(__name__)

Y, iY, X, JX, Z, JZ = range(6)


# --- Three-dimensional, not totally real ---

def _assemble(rotations: dict[int, complex], brackets: list[tuple[int, int, complex, float]],
              name: str) -> LieAlgebra:
    """rotations[V] = k with [V, Y] = kY; brackets (V, W, y, x) mean [V, W] = yY + xX."""
    table = BracketTable(6)
    for V, k in rotations.items():
        table.rotate(V, Y, complex(k))
    for V, W, y, x in brackets:
        table.add(V, W, table.cplx(Y, complex(y)) + table.real(X, x))
    return table.build(name)


def three_comm_coefficients(p: SixDim3CommParams) -> dict[str, complex]:
    """Derived coefficients of variants (ii) and (iii); keys v1, v2, w1, w2, q, h."""
    a, u, c, c1, c2 = p.a, p.u, p.c, p.c1, p.c2
    if p.variant == "ii":
        v1 = (p.b1 - 1j * c1) / (a - 1j * c) * u
        v2 = (p.b2 - 1j * c2) / (a - 1j * c) * u
        q = (1j * c * p.h + c1 ** 2 + c2 ** 2) / (c ** 2 + 1j * a * c) * u
        return {"v1": v1, "v2": v2, "w1": -v2, "w2": v1, "q": q, "h": p.h}
    b2 = p.b2
    h = b2 ** 2 / a
    z = complex(-a / 2, c)
    C2 = complex(-b2 / 2, c2)
    v1 = -1j * c1 / (1.5 * a - 1j * c) * u
    v2 = (1.5 * b2 - 1j * c2) / (1.5 * a - 1j * c) * u
    al, be, ga = a / 2 - 1j * c, b2 / 2 - 1j * c2, b2 - c1
    D = al ** 2 - a ** 2
    w1 = (al * be - a * ga) / D * u               # [JX, Z] = w1 Y + b2 X
    w2 = 1j * (al * ga - a * be) / D * u          # [JZ, JX] = w2 Y
    # remaining Jacobi identity on (JX, Z, JZ)
    q = (C2 * w1 + b2 * v2 + 1j * c1 * w2 - h * u) / z
    return {"v1": v1, "v2": v2, "w1": w1, "w2": w2, "q": q, "h": h}


def _check_variant(p: SixDim3CommParams, tol: float) -> None:
    if p.variant == "i":
        if abs(p.b) <= tol or abs(p.h) <= tol:
            raise ParameterRangeError("variant (i) needs b != 0 and h != 0")
        return
    if p.u < 0:
        raise ParameterRangeError(f"need u >= 0, got {p.u}")
    if p.variant == "ii":
        if abs(p.c) <= tol:
            raise ParameterRangeError("variant (ii) needs c != 0")
        if p.a < 0:
            raise ParameterRangeError(f"variant (ii) needs a >= 0, got {p.a}")
        defect = abs(p.h * p.a - p.b1 ** 2 - p.b2 ** 2)
        if defect > tol * max(1.0, p.b1 ** 2 + p.b2 ** 2, abs(p.h * p.a)):
            raise ParameterRangeError(f"variant (ii) needs h a = b1^2 + b2^2 (defect {defect:.3e})")
        if max(abs(p.a), abs(p.b1), abs(p.b2), abs(p.h)) <= tol:
            raise ParameterRangeError("variant (ii) needs one of a, b1, b2, h non-zero")
        return
    if abs(p.a) <= tol:
        raise ParameterRangeError("variant (iii) needs a != 0")


def gen_6d_3comm(p: SixDim3CommParams, tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    _check_variant(p, tol)
    name = f"six_dim_3comm_{p.variant}"
    if p.variant == "i":
        L = _assemble({JZ: 1j * p.b}, [(Z, JZ, p.q, p.h)], name)
        return finish(L, tol)

    k = three_comm_coefficients(p)
    if p.variant == "ii":
        rotations = {JX: 1j * p.c, Z: 1j * p.c1, JZ: 1j * p.c2}
        brackets = [
            (JX, X, p.u, p.a),
            (Z, X, k["v1"], p.b1),
            (JZ, JX, k["v1"], p.b1),
            (JZ, X, k["v2"], p.b2),
            (Z, JX, -k["v2"], -p.b2),
            (Z, JZ, -k["q"], -k["h"]),
        ]
    else:
        rotations = {JX: complex(-p.a / 2, p.c), Z: 1j * p.c1, JZ: complex(-p.b2 / 2, p.c2)}
        brackets = [
            (JX, X, p.u, p.a),
            (Z, X, k["v1"], 0.0),
            (JZ, X, k["v2"], p.b2),
            (Z, JX, -k["w1"], -p.b2),
            (JZ, JX, k["w2"], 0.0),
            (Z, JZ, -k["q"], -k["h"]),
        ]
    logger.debug("%s coefficients %s", name, k)
    return finish(_assemble(rotations, brackets, name), tol)


# --- Four-dimensional complex commutator ideal ---

class FourDimPairReport(BaseModel):
    commuting: float
    j_relation: float
    sum_equation: float
    split_first: float
    split_second: float
    threshold: float
    formulations_agree: bool
    passed: bool
    verdict: str | None = None


def _parts(A: np.ndarray, J: np.ndarray, T) -> dict[str, np.ndarray]:
    """(A)^J_±, (A)^{J-}_± with transposes taken through T."""
    AJ = (A - J @ A @ J) / 2
    AJm = (A + J @ A @ J) / 2
    sym = lambda M: (M + T(M)) / 2
    skew = lambda M: (M - T(M)) / 2
    return {"J+": sym(AJ), "J-": skew(AJ), "Jm+": sym(AJm), "Jm-": skew(AJm)}


def check_4d_complex_pair(A1, A2, J=None, g=None, X=None,
                          tol: float = DEFAULT_TOL) -> FourDimPairReport:
    """
    [A1, A2] = 0, A2^{J-} = J A1^{J-} and
    Σ J A_i^T A_i + A_i^T A_i J + A_i J A_i + A_i^T J A_i^T = 0, the last one
    also in its split (±, J/J-) form. Both formulations have to vanish for
    the pair to pass. On success the pair is assembled into
    the six-dimensional shear and its SKT verdict recorded.
    """
    A1 = np.asarray(A1, dtype=float)
    A2 = np.asarray(A2, dtype=float)
    if A1.shape != (4, 4) or A2.shape != (4, 4):
        raise DimensionMismatchError(f"A_i must be 4 x 4, got {A1.shape} and {A2.shape}")
    g0, J0, _ = standard_structure(2)
    J = J0 if J is None else np.asarray(J, dtype=float)
    g = g0 if g is None else np.asarray(g, dtype=float)
    g_inv = np.linalg.inv(g)
    T = lambda M: g_inv @ M.T @ g

    total = np.zeros((4, 4))
    first = np.zeros((4, 4))
    second = np.zeros((4, 4))
    for A in (A1, A2):
        At = T(A)
        total += J @ At @ A + At @ A @ J + A @ J @ A + At @ J @ At
        P = _parts(A, J, T)
        first += commutator(P["J+"], P["Jm+"]) - commutator(P["Jm-"], P["J-"])
        second += (commutator(P["J+"], P["Jm-"]) - commutator(P["Jm-"], P["J+"])
                   + 2 * P["J+"] @ P["J+"] - 2 * P["Jm-"] @ P["Jm-"])
    A1m = (A1 + J @ A1 @ J) / 2
    A2m = (A2 + J @ A2 @ J) / 2
    scale = max(1.0, max_abs(A1), max_abs(A2))
    threshold = tol * scale ** 2
    residuals = {
        "commuting": max_abs(commutator(A1, A2)),
        "j_relation": max_abs(A2m - J @ A1m),
        "sum_equation": max_abs(total),
        "split_first": max_abs(first),
        "split_second": max_abs(second),
    }
    sum_ok = residuals["sum_equation"] <= threshold
    split_ok = max(residuals["split_first"], residuals["split_second"]) <= threshold
    passed = (sum_ok and split_ok and residuals["commuting"] <= threshold
              and residuals["j_relation"] <= tol * scale)
    verdict = None
    if passed:
        L, H = assemble_4d_complex(A1, A2, X, tol=tol)
        verdict = skt_verdict(H, tol).verdict.value
    return FourDimPairReport(threshold=threshold, formulations_agree=sum_ok == split_ok,
                             passed=passed, verdict=verdict, **residuals)


def assemble_4d_complex(A1, A2, X=None, tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    """a = R^4 = span(e1..e4), U = span(Y1, JY1) = span(e5, e6); ω(Y_i, v) = A_i v, ω(Y1, Y2) = X."""
    X = np.zeros(4) if X is None else np.asarray(X, dtype=float)
    W = np.zeros((6, 6, 6))
    for k, A in ((4, A1), (5, A2)):
        for j in range(4):
            W[k, j, :4] = np.asarray(A)[:, j]
            W[j, k, :4] = -np.asarray(A)[:, j]
    W[4, 5, :4] = X
    W[5, 4, :4] = -X
    data = PreShearData.build(3, np.eye(6)[:, :4], W, tol=tol)
    L, H = construct_shear(data, tol)
    return L, H


def gen_4d_complex(p: FourDimComplexParams, tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    report = check_4d_complex_pair(p.A1, p.A2, X=p.X, tol=tol)
    if not report.passed:
        raise ParameterRangeError(
            "A1, A2 violate the four-dimensional equations "
            f"(commuting {report.commuting:.3e}, J relation {report.j_relation:.3e}, "
            f"sum {report.sum_equation:.3e})"
        )
    return assemble_4d_complex(p.A1, p.A2, p.X, tol)


def random_4d_complex_pair(rng: np.random.Generator, scale: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Commuting skew-Hermitian complex-linear pair, which solves all three equations."""
    U = random_unitary(2, rng)
    D1 = np.diag(1j * scale * rng.standard_normal(2))
    D2 = np.diag(1j * scale * rng.standard_normal(2))
    return from_complex(U @ D1 @ U.conj().T), from_complex(U @ D2 @ U.conj().T)
