# backend/app/families/complex2d.py
"""
SKT algebras with two-dimensional J-invariant commutator ideal span(X, JX).

Basis (X, JX, U) with U = span(X, JX)^⊥ and the standard J on U.
  case (i)   [Y, X] = α(Y) JX, [Y, JX] = -α(Y) X
  case (ii)  [Y, Z] = (τ1 + Re θ)(Y, Z) X + (τ2 - Im θ)(Y, Z) JX
             with τ1, τ2 real (1,1)-forms, θ a (2,0)-form and
             τ1 ∧ τ1 + τ2 ∧ τ2 = θ ∧ θ̄.
(1,0)-forms ζ satisfy ζ(JY) = -i ζ(Y).
"""

import numpy as np

from app.config import DEFAULT_TOL
from app.core.hermitian import HermitianStructure
from app.core.lie import LieAlgebra
from app.core.tensor import AltForm, basis_form, max_abs, wedge
from app.errors import ParameterRangeError
from app.families.common import BracketTable, as_array, as_matrix, finish, standard_J
from app.families.params import TwoDimComplexParams
from app.logs import get_logger

logger = get_logger(__name__)


def two_form(dim: int, terms) -> np.ndarray:
    """Σ c u^{ij} from 1-based (c, i, j) terms."""
    M = np.zeros((dim, dim))
    for c, i, j in terms:
        M += c * basis_form(dim, (i - 1, j - 1)).tensor
    return M


# θ = ζ1 ∧ ζ2 with ζ1 = u1 - i u2, ζ2 = u3 - i u4
_THETA_RE = [(1, 1, 3), (-1, 2, 4)]
_THETA_IM = [(-1, 1, 4), (-1, 2, 3)]

# frozen case (ii) data on U = R^4 (n = 3), see scripts/find_case_ii_witnesses.py
WITNESSES: dict[str, dict[str, list]] = {
    "n6_1": {
        "tau1": [(1, 1, 2), (-1, 3, 4)],
        "tau2": [(2, 1, 2), (2, 3, 4), (1, 1, 3), (1, 2, 4)],
        "theta_re": _THETA_RE,
        "theta_im": _THETA_IM,
    },
    "n6_2": {
        "tau1": [(1, 1, 2), (1, 3, 4)],
        "tau2": [(1, 1, 2), (1, 3, 4)],
        "theta_re": _THETA_RE,
        "theta_im": _THETA_IM,
    },
    "2h3": {
        "tau1": [(1, 1, 2)],
        "tau2": [(1, 3, 4)],
        "theta_re": [],
        "theta_im": [],
    },
}


def witness_params(name: str) -> TwoDimComplexParams:
    if name not in WITNESSES:
        raise ParameterRangeError(f"unknown witness '{name}'")
    forms = {key: two_form(4, terms).tolist() for key, terms in WITNESSES[name].items()}
    return TwoDimComplexParams(n=3, case="ii", **forms)


class CaseTwoForms:
    """τ1, τ2, Re θ, Im θ as antisymmetric matrices on U."""

    def __init__(self, tau1, tau2, theta_re, theta_im):
        self.tau1, self.tau2 = tau1, tau2
        self.theta_re, self.theta_im = theta_re, theta_im

    def identity_residual(self) -> float:
        if self.tau1.shape[0] < 4:
            return 0.0
        sq = lambda M: wedge(AltForm(M, 2), AltForm(M, 2)).tensor
        lhs = sq(self.tau1) + sq(self.tau2)
        rhs = sq(self.theta_re) + sq(self.theta_im)
        return max_abs(lhs - rhs)

    def type_defects(self, J: np.ndarray) -> dict[str, float]:
        return {
            "tau1_11": max_abs(J.T @ self.tau1 @ J - self.tau1),
            "tau2_11": max_abs(J.T @ self.tau2 @ J - self.tau2),
            "theta_20": max(max_abs(J.T @ self.theta_re - self.theta_im),
                            max_abs(J.T @ self.theta_im + self.theta_re)),
        }


def _case_two_forms(p: TwoDimComplexParams, size: int) -> CaseTwoForms:
    if p.witness is not None:
        if p.n != 3:
            raise ParameterRangeError("the frozen witnesses live in dimension 6")
        p = witness_params(p.witness)
    return CaseTwoForms(
        as_matrix(p.tau1, size, "tau1"),
        as_matrix(p.tau2, size, "tau2"),
        as_matrix(p.theta_re, size, "theta_re"),
        as_matrix(p.theta_im, size, "theta_im"),
    )


def gen_2d_complex(p: TwoDimComplexParams,
                   tol: float = DEFAULT_TOL) -> tuple[LieAlgebra, HermitianStructure]:
    size = 2 * p.n - 2
    table = BracketTable(2 * p.n)
    X, JX, base = 0, 1, 2

    if p.case == "i":
        alpha = as_array(p.alpha, size, "alpha")
        if max_abs(alpha) <= tol:
            raise ParameterRangeError("case (i) needs α != 0")
        for s in range(size):
            table.add(base + s, X, table.real(JX, alpha[s]))
            table.add(base + s, JX, table.real(X, -alpha[s]))
        return finish(table.build(name=f"two_dim_complex_i(n={p.n})"), tol)

    forms = _case_two_forms(p, size)
    scale = max(1.0, *(max_abs(M) for M in (forms.tau1, forms.tau2, forms.theta_re, forms.theta_im)))
    if scale == 1.0 and all(max_abs(M) <= tol for M in (forms.tau1, forms.tau2, forms.theta_re, forms.theta_im)):
        raise ParameterRangeError("case (ii) needs τ1, τ2, θ not all zero")
    for label, defect in forms.type_defects(standard_J(size)).items():
        if defect > tol * scale:
            raise ParameterRangeError(f"{label} type condition fails (defect {defect:.3e})")
    residual = forms.identity_residual()
    if residual > tol * scale ** 2:
        raise ParameterRangeError(f"τ1∧τ1 + τ2∧τ2 = θ∧θ̄ fails (residual {residual:.3e})")

    first = forms.tau1 + forms.theta_re
    second = forms.tau2 - forms.theta_im
    for s in range(size):
        for t in range(s + 1, size):
            v = np.zeros(2 * p.n)
            v[X], v[JX] = first[s, t], second[s, t]
            if np.any(v):
                table.add(base + s, base + t, v)
    name = p.witness or f"two_dim_complex_ii(n={p.n})"
    return finish(table.build(name=name), tol)
