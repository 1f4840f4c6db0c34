# backend/scripts/find_case_ii_witnesses.py
"""
Bounded grid search for case (ii) data on U = R^4 (so dim g = 6) whose
algebra has the fingerprint of (0,0,0,0,12,14+23) or (0,0,0,0,13+42,14+23).

tau1, tau2 run over integer combinations (coefficients in -2..2) of the
real (1,1)-forms u12, u34, u13+u24, u14-u23; theta is 0 or u1-iu2 ∧ u3-iu4.
Writes the first hit per target to data/case_ii_witnesses.json.
"""

import itertools
import json

import numpy as np
from tqdm import tqdm

from app.config import DATA_DIR, WITNESS_PATH
from app.core.catalog import fingerprint_match
from app.errors import SKTError
from app.families.complex2d import WITNESSES, two_form
from app.families.params import TwoDimComplexParams
from app.families.registry import generate

GRID = range(-2, 3)
TARGETS = ("n6_1", "n6_2")

# real (1,1)-forms on R^4, 1-based terms
BASIS_11 = [
    [(1, 1, 2)],
    [(1, 3, 4)],
    [(1, 1, 3), (1, 2, 4)],
    [(1, 1, 4), (-1, 2, 3)],
]
THETA = {
    "re": WITNESSES["n6_1"]["theta_re"],
    "im": WITNESSES["n6_1"]["theta_im"],
}


def pfaffian(M: np.ndarray) -> float:
    """τ ∧ τ = 2 Pf(τ) u1234 on R^4."""
    return M[0, 1] * M[2, 3] - M[0, 2] * M[1, 3] + M[0, 3] * M[1, 2]


def combination(coeffs) -> np.ndarray:
    return sum(c * two_form(4, terms) for c, terms in zip(coeffs, BASIS_11))


def search() -> dict[str, dict]:
    forms = {coeffs: combination(coeffs) for coeffs in itertools.product(GRID, repeat=4)}
    theta_re = two_form(4, THETA["re"])
    theta_im = two_form(4, THETA["im"])
    found: dict[str, dict] = {}

    for use_theta in (1, 0):
        rhs = use_theta * (pfaffian(theta_re) + pfaffian(theta_im))
        pairs = itertools.product(forms.items(), repeat=2)
        for (c1, tau1), (c2, tau2) in tqdm(pairs, total=len(forms) ** 2, desc=f"theta={use_theta}"):
            if len(found) == len(TARGETS):
                return found
            if not np.any(tau1) and not np.any(tau2) and not use_theta:
                continue
            if abs(pfaffian(tau1) + pfaffian(tau2) - rhs) > 1e-12:
                continue
            params = TwoDimComplexParams(
                n=3, case="ii", tau1=tau1.tolist(), tau2=tau2.tolist(),
                theta_re=(use_theta * theta_re).tolist(), theta_im=(use_theta * theta_im).tolist(),
            )
            try:
                L, _ = generate(params)
            except SKTError:
                continue
            for target in TARGETS:
                if target not in found and fingerprint_match(L, target):
                    print(f"{target}: tau1 {c1}, tau2 {c2}, theta {use_theta}")
                    found[target] = params.model_dump(mode="json")
    return found


def main() -> None:
    DATA_DIR.mkdir(exist_ok=True)
    found = search()
    missing = [t for t in TARGETS if t not in found]
    if missing:
        print(f"No witness on the grid for: {', '.join(missing)}")
    with WITNESS_PATH.open("w", encoding="utf-8") as f:
        json.dump(found, f, indent=2, sort_keys=True)
    print(f"Witnesses saved to: {WITNESS_PATH}")


if __name__ == "__main__":
    main()
