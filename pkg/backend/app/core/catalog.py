# backend/app/core/catalog.py
"""
Named Lie algebras used by the classification results, and fingerprint
comparison against direct sums of them ("2aff + h3 + R^1").
"""

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from app.config import DEFAULT_RANK_TOL, DEFAULT_TOL
from app.core.lie import LieAlgebra, direct_sum, series
from app.core.salamon import canonical_param, parse_salamon
from app.errors import ParameterRangeError, UnboundParameterError, UnknownAlgebraError
from app.logs import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    notation: str
    params: tuple[str, ...] = ()
    condition: Callable[[dict], bool] = field(default=lambda p: True, repr=False)
    condition_text: str = "---"


def _ordered_abs(*values, strict_first: bool = True) -> bool:
    mags = [abs(v) for v in values]
    if strict_first and mags[0] <= 0:
        return False
    return all(a <= b + DEFAULT_TOL for a, b in zip(mags, mags[1:]))


# --- Indecomposable entries (differential tuples) ---

ENTRIES: dict[str, CatalogEntry] = {
    e.name: e
    for e in [
        CatalogEntry("r3p", "(0,λ.21+31,−21+λ.31)", ("λ",),
                     lambda p: p["λ"] >= 0, "λ ≥ 0"),
        CatalogEntry("r4", "(0,21,μ.31,λ.41)", ("μ", "λ"),
                     lambda p: _ordered_abs(p["λ"], p["μ"], 1.0), "0 < |λ| ≤ |μ| ≤ 1"),
        CatalogEntry("r4p", "(0,μ.21,λ.31+41,−31+λ.41)", ("μ", "λ"),
                     lambda p: p["μ"] > 0, "μ > 0"),
        CatalogEntry("g5_14", "(0,0,21,α.41+51,−41+α.51)", ("α",),
                     lambda p: p["α"] >= 0, "α ≥ 0"),
        CatalogEntry("g5_17", "(0,α.21+31,−21+α.31,β.41+γ.51,−γ.41+α.51)", ("α", "β", "γ"),
                     lambda p: p["α"] >= 0 and p["γ"] != 0, "α ≥ 0, γ ≠ 0"),
        CatalogEntry("g6_1", "(0,21,α.31,β.41,γ.51,δ.61)", ("α", "β", "γ", "δ"),
                     lambda p: _ordered_abs(p["δ"], p["γ"], p["β"], p["α"], 1.0),
                     "0 < |δ| ≤ |γ| ≤ |β| ≤ |α| ≤ 1"),
        CatalogEntry("g6_8", "(0,α.21,β.31,γ.41,δ.51+61,−51+δ.61)", ("α", "β", "γ", "δ"),
                     lambda p: _ordered_abs(p["γ"], p["β"], p["α"]), "0 < |γ| ≤ |β| ≤ |α|"),
        CatalogEntry("g6_11", "(0,α.21,β.31+41,−31+β.41,γ.51+δ.61,−δ.51+γ.61)", ("α", "β", "γ", "δ"),
                     lambda p: p["α"] * p["δ"] != 0, "αδ ≠ 0"),
        CatalogEntry("n37D", "(0,0,0,0,12+34,13,24)"),
        CatalogEntry("aff", "(0,21)"),
        CatalogEntry("n6_1", "(0,0,0,0,12,14+23)"),
        CatalogEntry("n6_2", "(0,0,0,0,13+42,14+23)"),
    ]
}

ALIASES = {"37D": "n37D", "(37D)": "n37D", "aff_R": "aff", "r3'": "r3p", "r4'": "r4p"}


def heisenberg(k: int) -> LieAlgebra:
    """h_{2k+1}: de^{2k+1} = 21 + 43 + ... + (2k)(2k-1)."""
    if k < 1:
        raise ParameterRangeError("h needs k ≥ 1")
    N = 2 * k + 1
    C = np.zeros((N, N, N))
    for l in range(k):
        a, b = 2 * l, 2 * l + 1
        C[b, a, N - 1] = -1.0
        C[a, b, N - 1] = 1.0
    return LieAlgebra(C, name=f"h{N}")


def _bind(entry: CatalogEntry, params: dict) -> dict:
    bound = {canonical_param(k): float(v) for k, v in params.items()}
    missing = [p for p in entry.params if p not in bound]
    if missing:
        raise UnboundParameterError(f"{entry.name} needs parameters {', '.join(missing)}")
    return {p: bound[p] for p in entry.params}


def catalog(name: str, params: dict | None = None, tol: float = DEFAULT_TOL) -> LieAlgebra:
    """Look up a named algebra, validating the parameter conditions of its entry."""
    params = dict(params or {})
    name = ALIASES.get(name.strip(), name.strip())

    abelian = re.fullmatch(r"(?:R\^?|abelian)(\d*)", name)
    if abelian:
        n = int(abelian.group(1) or params.get("n", 1))
        return LieAlgebra.abelian(n)
    heis = re.fullmatch(r"h(\d*)", name)
    if heis:
        if heis.group(1):
            dim = int(heis.group(1))
            if dim < 3 or dim % 2 == 0:
                raise UnknownAlgebraError(f"no Heisenberg algebra of dimension {dim}")
            return heisenberg((dim - 1) // 2)
        return heisenberg(int(params.get("k", 1)))

    entry = ENTRIES.get(name)
    if entry is None:
        raise UnknownAlgebraError(f"unknown algebra '{name}'")
    bound = _bind(entry, params)
    if not entry.condition(bound):
        raise ParameterRangeError(f"{entry.name}: parameters {bound} violate {entry.condition_text}")
    return parse_salamon(entry.notation, bound, tol=tol, name=entry.name)


# --- Direct-sum targets ---

_SUMMAND = re.compile(r"^(?:(?P<mult>\d+)\s*\*?\s*)?(?P<name>[A-Za-z(][^()\s]*?)(?:\((?P<args>[^)]*)\))?$")


def _parse_args(args: str | None) -> dict:
    out = {}
    if not args:
        return out
    for part in args.split(","):
        if not part.strip():
            continue
        key, _, value = part.partition("=")
        out[canonical_param(key)] = float(value)
    return out


def expand_target(target: str, params: dict | None = None, tol: float = DEFAULT_TOL) -> LieAlgebra:
    """
    Build the direct sum named by a target such as "2aff + h3 + R^1" or
    "g5_14(alpha=0) + R". Shared params are offered to every summand that
    declares them; inline arguments take precedence.
    """
    shared = {canonical_param(k): v for k, v in (params or {}).items()}
    algebras: list[LieAlgebra] = []
    for raw in target.replace("⊕", "+").split("+"):
        token = raw.strip()
        if not token:
            continue
        if ALIASES.get(token, token) in ENTRIES:
            mult, name, inline = 1, token, {}
        else:
            match = _SUMMAND.match(token)
            if not match:
                raise UnknownAlgebraError(f"cannot read summand '{token}'")
            mult = int(match.group("mult") or 1)
            name = match.group("name")
            inline = _parse_args(match.group("args"))
        if name == "R":
            name = "R^1"
        key = ALIASES.get(name, name)
        wanted = ENTRIES[key].params if key in ENTRIES else ("n", "k")
        local = {k: v for k, v in shared.items() if k in wanted}
        local.update(inline)
        algebras.extend([catalog(name, local, tol)] * mult)
    if not algebras:
        raise UnknownAlgebraError(f"empty target '{target}'")
    result = algebras[0]
    for other in algebras[1:]:
        result = direct_sum(result, other)
    return result


def fingerprint_match(L: LieAlgebra, target: str, params: dict | None = None,
                      tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    expected = expand_target(target, params, tol)
    if expected.dim != L.dim:
        return False
    return series(L, tol, rank_tol) == series(expected, tol, rank_tol)
