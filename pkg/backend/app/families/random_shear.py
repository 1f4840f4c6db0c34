# backend/app/families/random_shear.py
"""
Seeded random shear data that satisfy both the shear condition and the
integrability equation.

A codim-2 or totally real family instance on R^8 is turned back into
shear data (a = g') and moved by a random unitary of (R^8, g, J). The
strata are chosen so that a_J, dim a_r >= 3 and dim U_J >= 4 all occur,
and one of them breaks the SKT condition ν = 0 on purpose.
"""

import numpy as np

from app.config import DEFAULT_TOL
from app.core.random_data import random_unitary
from app.core.shear import PreShearData
from app.core.tensor import from_complex
from app.errors import ParameterRangeError
from app.families.codim2 import codim2_algebra, gen_codim2, solve_b1
from app.families.common import family_shear_data, finish
from app.families.params import Codim2Params, TotallyRealParams
from app.families.totally_real import gen_totally_real
from app.logs import get_logger

logger = get_logger(__name__)

STRATA = ("codim2", "codim2_off", "wide_U_J", "wide_a_r")


def _pm(rng: np.random.Generator, low: float, high: float, size=None):
    return rng.uniform(low, high, size) * rng.choice([-1.0, 1.0], size)


def _codim2(rng: np.random.Generator, off_constraint: bool) -> PreShearData:
    cases = [str(c) for c in rng.choice(["i", "ii"], size=2)]
    z = np.array([1j * float(_pm(rng, 0.5, 2.0)) if c == "i" else 0j for c in cases])
    w = 1j * _pm(rng, 0.5, 2.0, 2)
    seeds = _pm(rng, 0.2, 1.0, 2) + 1j * _pm(rng, 0.2, 1.0, 2)
    p = Codim2Params(n=4, a=float(rng.uniform(0.5, 2.0)), b2=float(rng.uniform(0.0, 1.0)),
                     cases=cases, z=list(z), w=list(w), seeds=list(seeds))
    if off_constraint:
        # integrable shear data, but ν(X1, X2, JX1, JX2) != 0
        b1 = solve_b1(p, z, w, seeds) + float(_pm(rng, 0.2, 1.0))
        L, _ = finish(codim2_algebra(p, b1, z, w, seeds))
    else:
        L, _ = gen_codim2(p)
    # (Y1, iY1, Y2, iY2, X1, JX1, X2, JX2), g' = span(Y's, X1, X2)
    return family_shear_data(L, [0, 1, 2, 3, 4, 6])


def _totally_real(rng: np.random.Generator, m: int) -> PreShearData:
    r = int(rng.integers(m - 1, m + 1))
    size = 2 * (4 - m)
    p = TotallyRealParams(
        n=4, m=m, r=r,
        lambdas=[float(x) for x in _pm(rng, 0.5, 2.0, r)],
        mu=[list(rng.standard_normal(size)) for _ in range(r)],
        alphas=[list(rng.standard_normal(size))] if r < m else None,
    )
    L, _ = gen_totally_real(p)
    return family_shear_data(L, range(0, 2 * m, 2))


def rotate(data: PreShearData, U: np.ndarray, tol: float = DEFAULT_TOL) -> PreShearData:
    """(U a, U ω(U^T ·, U^T ·)) for U orthogonal and commuting with J."""
    W = np.einsum("ia,jb,abc,kc->ijk", U, U, data.omega, U)
    return PreShearData.build(data.n, U @ data.a.basis, W, data.metric, data.J, tol=tol)


def random_shear_data(rng: np.random.Generator, stratum: str | None = None,
                      tol: float = DEFAULT_TOL) -> tuple[str, PreShearData]:
    stratum = stratum or str(rng.choice(STRATA))
    if stratum in ("codim2", "codim2_off"):
        data = _codim2(rng, off_constraint=stratum == "codim2_off")
    elif stratum == "wide_U_J":
        data = _totally_real(rng, m=2)
    elif stratum == "wide_a_r":
        data = _totally_real(rng, m=3)
    else:
        raise ParameterRangeError(f"unknown stratum {stratum!r}")
    U = from_complex(random_unitary(data.n, rng))
    logger.debug("random shear data from %s", stratum)
    return stratum, rotate(data, U, tol)
