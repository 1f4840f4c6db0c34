# backend/app/core/salamon.py
"""
Parser and printer for the differential-tuple notation of Lie algebras.

"(0,0,21)" lists de^1, de^2, de^3; a term "ij" is e^i ^ e^j, optionally
prefixed by a coefficient ("2.31", "λ.21"). The bracket is recovered from
dα(X, Y) = -α([X, Y]), so the term c.ij in entry m sets [e_i, e_j] ∋ -c e_m.
"""

import re
from dataclasses import dataclass

import numpy as np

from app.config import DEFAULT_TOL
from app.core.lie import LieAlgebra, jacobi_residual
from app.errors import JacobiViolationError, SalamonSyntaxError, UnboundParameterError
from app.logs import get_logger

logger = get_logger(__name__)

PARAM_ALIASES = {
    "lam": "λ",
    "lambda": "λ",
    "mu": "μ",
    "alpha": "α",
    "beta": "β",
    "gamma": "γ",
    "delta": "δ",
}

_TERM = re.compile(
    r"(?:(?P<coeff>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|[^\W\d]\w*)\.)?(?P<idx>\d\d)(?!\d)"
)
_SIGNS = {"+": 1.0, "-": -1.0, "−": -1.0}


def canonical_param(name: str) -> str:
    return PARAM_ALIASES.get(name.strip(), name.strip())


@dataclass(frozen=True)
class Term:
    coeff: float | str    # literal or parameter name
    sign: float
    i: int                # 1-based
    j: int
    position: int


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, char: str) -> None:
        if self._peek() != char:
            found = self._peek() or "end of input"
            raise SalamonSyntaxError(f"expected '{char}', found '{found}'", self.pos)
        self.pos += 1

    def parse_tuple(self) -> list[list[Term]]:
        self._expect("(")
        entries = [self.parse_entry()]
        while self._peek() == ",":
            self.pos += 1
            entries.append(self.parse_entry())
        self._expect(")")
        if self._peek():
            raise SalamonSyntaxError("trailing characters after ')'", self.pos)
        return entries

    def parse_entry(self) -> list[Term]:
        self._skip()
        rest = self.text[self.pos:]
        zero = re.match(r"0\s*(?=[,)])", rest)
        if zero:
            self.pos += zero.end()
            return []
        sign = 1.0
        if self._peek() in _SIGNS:
            sign = _SIGNS[self._peek()]
            self.pos += 1
        terms = [self.parse_term(sign)]
        while self._peek() in _SIGNS:
            sign = _SIGNS[self._peek()]
            self.pos += 1
            terms.append(self.parse_term(sign))
        return terms

    def parse_term(self, sign: float) -> Term:
        self._skip()
        match = _TERM.match(self.text, self.pos)
        if not match:
            raise SalamonSyntaxError("expected a term like '21' or 'λ.31'", self.pos)
        start = self.pos
        self.pos = match.end()
        raw = match.group("coeff")
        if raw is None:
            coeff: float | str = 1.0
        elif raw[0].isdigit():
            coeff = float(raw)
        else:
            coeff = canonical_param(raw)
        idx = match.group("idx")
        return Term(coeff=coeff, sign=sign, i=int(idx[0]), j=int(idx[1]), position=start)


def parse_entries(text: str) -> list[list[Term]]:
    """Syntax only; parameters stay symbolic."""
    return _Parser(text).parse_tuple()


def assemble(entries: list[list[Term]], params: dict | None = None,
             tol: float = DEFAULT_TOL, name: str = "") -> LieAlgebra:
    """Bind parameters, build the structure tensor and check Jacobi."""
    bound = {canonical_param(k): float(v) for k, v in (params or {}).items()}
    dim = len(entries)
    C = np.zeros((dim, dim, dim))
    for m, terms in enumerate(entries):
        for term in terms:
            if not (1 <= term.i <= dim and 1 <= term.j <= dim):
                raise SalamonSyntaxError(f"index pair {term.i}{term.j} outside dimension {dim}", term.position)
            if term.i == term.j:
                raise SalamonSyntaxError(f"repeated index in {term.i}{term.j}", term.position)
            if isinstance(term.coeff, str):
                if term.coeff not in bound:
                    raise UnboundParameterError(f"parameter '{term.coeff}' has no value")
                value = bound[term.coeff]
            else:
                value = term.coeff
            c = term.sign * value
            C[term.i - 1, term.j - 1, m] -= c
            C[term.j - 1, term.i - 1, m] += c
    L = LieAlgebra(C, name=name)
    residual = jacobi_residual(L)
    if residual > tol * L.scale() ** 2:
        raise JacobiViolationError(residual)
    return L


def parse_salamon(text: str, params: dict | None = None, tol: float = DEFAULT_TOL,
                  name: str = "") -> LieAlgebra:
    L = assemble(parse_entries(text), params, tol, name=name)
    logger.debug("parsed %s -> dim %d", text, L.dim)
    return L


def _format_coeff(c: float) -> str:
    if c == 1.0:
        return ""
    if float(c).is_integer():
        return f"{int(c)}."
    return f"{c!r}."


def print_salamon(L: LieAlgebra, tol: float = 0.0) -> str:
    """Inverse of parse_salamon: de^m = sum_{i<j} -C[i, j, m] e^{ij}."""
    if L.dim > 9:
        raise SalamonSyntaxError("notation is limited to dimension 9", 0)
    parts = []
    for m in range(L.dim):
        text = ""
        for i in range(L.dim):
            for j in range(i + 1, L.dim):
                c = -float(L.structure[i, j, m])
                if abs(c) <= tol:
                    continue
                sign = "-" if c < 0 else ("+" if text else "")
                text += f"{sign}{_format_coeff(abs(c))}{i + 1}{j + 1}"
        parts.append(text or "0")
    return "(" + ",".join(parts) + ")"
