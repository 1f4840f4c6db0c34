# backend/app/families/codim2.py
"""
SKT algebras whose commutator ideal is non-complex of codimension two.

a_r = span(X1, X2) with f(X1, ·) = a·id, f(X2, X2) = b1 X1 + b2 X2, and
per complex direction Y_i the pair z_i = α_i(X1), w_i = α_i(X2) falls in
one of three cases fixing h^i up to one seed value.
"""

import numpy as np

from app.config import DEFAULT_TOL
from app.core.hermitian import HermitianStructure
from app.core.lie import LieAlgebra
from app.errors import ConstraintResidualError, ParameterRangeError
from app.families.common import as_array, fha_algebra, finish
from app.families.params import Codim2H0Params, Codim2Params
from app.logs import get_logger

logger = get_logger(__name__)


def real_part_roots(a: float, b1: float, b2: float, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """Roots x of 2x^2 + b2 x - a b1 / 2 = 0, the admissible Re(w) in case (iii)."""
    disc = b2 * b2 + 4 * a * b1
    if disc < -tol * max(1.0, b2 * b2, abs(a * b1)):
        raise ParameterRangeError(
            f"case (iii) needs b1 >= -b2^2/(4a) = {-b2 * b2 / (4 * a):.6g}, got b1 = {b1:.6g}"
        )
    root = np.sqrt(max(disc, 0.0))
    return (-b2 + root) / 4, (-b2 - root) / 4


def _validate_case(case: str, i: int, a: float, b1: float | None, b2: float,
                   z: complex, w: complex, eps: float) -> None:
    label = f"Y_{i + 1} (case {case})"
    if case == "i":
        if abs(z.real) > eps or abs(w.real) > eps or abs(z) <= eps:
            raise ParameterRangeError(f"{label}: need Re z = Re w = 0 and z != 0")
    elif case == "ii":
        if abs(z) > eps or abs(w.real) > eps or abs(w) <= eps:
            raise ParameterRangeError(f"{label}: need z = 0, Re w = 0 and w != 0")
    else:
        if abs(z.real + a / 2) > eps:
            raise ParameterRangeError(f"{label}: need Re z = -a/2")
        if b1 is not None:
            real_part_roots(a, b1, b2)
            residual = 2 * w.real ** 2 + b2 * w.real - a * b1 / 2
            if abs(residual) > eps * max(1.0, a, abs(b1), b2) ** 2:
                raise ParameterRangeError(f"{label}: Re w = {w.real:.6g} does not solve 2x^2 + b2 x - a b1/2 = 0")


def cross_values(case: str, a: float, b1: float, b2: float, z: complex, w: complex,
                 seed: complex) -> tuple[complex, complex, complex, complex]:
    """h^i(X1,X1), h^i(X1,X2), h^i(X2,X1), h^i(X2,X2) from one seed."""
    if case == "i":
        h11 = seed
        h12 = h21 = w / z * h11
        h22 = (w * w - b2 * w - b1 * z) / (z * (z - a)) * h11
    elif case == "ii":
        h11 = 0j
        h12 = h21 = seed
        h22 = (b2 - w) / a * h12
    else:
        zc, wc = np.conj(z), np.conj(w)
        denom = abs(z) ** 2 - a * zc
        h11 = seed
        h12 = wc / zc * h11
        h21 = (w * zc - a * wc) / denom * h11
        h22 = (abs(w) ** 2 - b1 * zc - b2 * wc) / denom * h11
    return complex(h11), complex(h12), complex(h21), complex(h22)


def _g(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.real(np.vdot(u, v)))


def constraint_rest(h11: np.ndarray, h12: np.ndarray, h21: np.ndarray, h22: np.ndarray) -> float:
    """‖h12 - h21‖² + ‖h12‖² + ‖h21‖² - 2 g(h11, h22)."""
    d = h12 - h21
    return _g(d, d) + _g(h12, h12) + _g(h21, h21) - 2 * _g(h11, h22)


def constraint(a: float, b1: float, h11, h12, h21, h22) -> float:
    """6 ν(X1, X2, JX1, JX2); the algebra is SKT only where this vanishes."""
    return 2 * a * (a - b1) + constraint_rest(*(np.asarray(x) for x in (h11, h12, h21, h22)))


def _cross_rows(p: Codim2Params, b1: float, z: np.ndarray, w: np.ndarray,
                seeds: np.ndarray) -> np.ndarray:
    """Shape (4, m): h11, h12, h21, h22 per complex direction."""
    rows = [cross_values(case, p.a, b1, p.b2, z[i], w[i], seeds[i]) for i, case in enumerate(p.cases)]
    return np.array(rows, dtype=complex).reshape(len(rows), 4).T


def solve_b1(p: Codim2Params, z: np.ndarray, w: np.ndarray, seeds: np.ndarray,
             tol: float = DEFAULT_TOL) -> float:
    """
    Only h22 depends on b1, and linearly, so the constraint is linear in b1:
    2a(a - b1) + rest - 2 (G0 + G1 b1) = 0 with g(h11, h22) = G0 + G1 b1.
    """
    a = p.a
    h11, h12, h21, h22_0 = _cross_rows(p, 0.0, z, w, seeds)
    h22_1 = _cross_rows(p, 1.0, z, w, seeds)[3]
    g0 = _g(h11, h22_0)
    g1 = _g(h11, h22_1) - g0
    denom = 2 * a + 2 * g1
    if abs(denom) <= tol * max(1.0, a):
        raise ParameterRangeError("codim-2 constraint does not determine b1 for these seeds")
    rest = constraint_rest(h11, h12, h21, np.zeros_like(h11))
    return (2 * a * a + rest - 2 * g0) / denom


def gen_codim2(p: Codim2Params, tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    m = p.n - 2
    a, b2 = p.a, p.b2
    if a <= 0:
        raise ParameterRangeError(f"need a > 0, got {a}")
    if b2 < 0:
        raise ParameterRangeError(f"need b2 >= 0, got {b2}")
    if len(p.cases) != m:
        raise ParameterRangeError(f"need {m} case tags, got {len(p.cases)}")
    z = as_array(p.z, m, "z", complex)
    w = as_array(p.w, m, "w", complex)
    seeds = as_array(p.seeds, m, "seeds", complex)
    eps = tol * max(1.0, a)
    for i, case in enumerate(p.cases):
        _validate_case(case, i, a, p.b1, b2, z[i], w[i], eps)

    b1 = p.b1
    if b1 is None:
        b1 = solve_b1(p, z, w, seeds, tol)
        logger.debug("codim2: solved b1 = %.6g from the constraint", b1)
        # case (iii) ties Re w to b1
        for i, case in enumerate(p.cases):
            _validate_case(case, i, a, b1, b2, z[i], w[i], eps)

    h11, h12, h21, h22 = _cross_rows(p, b1, z, w, seeds)
    residual = abs(constraint(a, b1, h11, h12, h21, h22))
    if residual > tol * max(1.0, a, abs(b1), b2, float(np.max(np.abs(seeds), initial=0.0))) ** 2:
        raise ConstraintResidualError("codim-2 constraint 2a(a - b1) + ‖h12 - h21‖² + … ≠ 0", residual)
    return finish(codim2_algebra(p, b1, z, w, seeds), tol)


def codim2_algebra(p: Codim2Params, b1: float, z: np.ndarray, w: np.ndarray,
                   seeds: np.ndarray) -> LieAlgebra:
    """g_{f,h,α} for the given b1; the constraint is not checked here."""
    m = p.n - 2
    h = np.zeros((2, 2, m), dtype=complex)
    h[0, 0], h[0, 1], h[1, 0], h[1, 1] = _cross_rows(p, b1, z, w, seeds)
    f = np.zeros((2, 2, 2))
    f[0, 0] = [p.a, 0.0]
    f[0, 1] = f[1, 0] = [0.0, p.a]
    f[1, 1] = [b1, p.b2]
    alpha = np.column_stack([z, w]) if m else np.zeros((0, 2), dtype=complex)
    return fha_algebra(f, h, alpha, name=f"codim2(n={p.n})")


# --- h = 0 normal form ---

def h0_params(p: Codim2H0Params) -> Codim2Params:
    """
    Directions j < r1: z = 0, w = i d_j; r1 <= j < r2: z = i c_j, w = i d_j;
    r2 <= j < r3 and r3 <= j: z = -a/2 + i c_j, w = x± + i d_j with
    x± = (-b ± sqrt(b^2 + 4a^2))/4. Here b1 = a, b2 = b and h = 0.
    """
    m = p.n - 2
    r1, r2, r3 = p.blocks
    if not 0 <= r1 <= r2 <= r3 <= m:
        raise ParameterRangeError(f"need 0 <= r1 <= r2 <= r3 <= {m}, got {p.blocks}")
    c = as_array(p.c or None, m, "c")
    d = as_array(p.d or None, m, "d")
    plus, minus = real_part_roots(p.a, p.a, p.b)
    cases, z, w = [], [], []
    for j in range(m):
        if j < r1:
            cases.append("ii")
            z.append(0j)
            w.append(1j * d[j])
        elif j < r2:
            cases.append("i")
            z.append(1j * c[j])
            w.append(1j * d[j])
        else:
            cases.append("iii")
            z.append(complex(-p.a / 2, c[j]))
            w.append(complex(plus if j < r3 else minus, d[j]))
    return Codim2Params(n=p.n, a=p.a, b1=p.a, b2=p.b, cases=cases, z=z, w=w, seeds=[0j] * m)


def gen_codim2_h0(p: Codim2H0Params,
                      tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    return gen_codim2(h0_params(p), tol)
