# backend/app/core/lie.py
"""
Real Lie algebras given by structure constants.

The bracket is stored as the full tensor C with [e_i, e_j] = sum_k C[i, j, k] e_k
(0-based internally, 1-based in files and notation).
"""

from dataclasses import asdict, dataclass

import numpy as np

from app.config import DEFAULT_RANK_TOL, DEFAULT_TOL
from app.core.tensor import AltForm, max_abs, numerical_rank, wedge
from app.errors import DimensionMismatchError, InputError, JacobiViolationError
from app.logs import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class LieAlgebra:
    structure: np.ndarray
    name: str = ""

    def __post_init__(self):
        C = np.array(self.structure, dtype=float)
        if C.ndim != 3 or len(set(C.shape)) != 1:
            raise DimensionMismatchError(f"structure tensor must be N x N x N, got {C.shape}")
        if not np.all(np.isfinite(C)):
            raise InputError("non-finite structure constants")
        if max_abs(C + C.transpose(1, 0, 2)) > 1e-12 * max(1.0, max_abs(C)):
            raise InputError("structure constants are not antisymmetric in (i, j)")
        C.setflags(write=False)
        object.__setattr__(self, "structure", C)

    # --- constructors ---

    @classmethod
    def abelian(cls, n: int) -> "LieAlgebra":
        return cls(np.zeros((n, n, n)), name=f"R^{n}")

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict[tuple[int, int], np.ndarray],
                      name: str = "") -> "LieAlgebra":
        """brackets maps 0-based (i, j) to the vector [e_i, e_j]."""
        C = np.zeros((dim, dim, dim))
        for (i, j), value in brackets.items():
            if i == j:
                raise InputError(f"bracket [e{i + 1}, e{j + 1}] of a vector with itself")
            C[i, j] += np.asarray(value, dtype=float)
            C[j, i] -= np.asarray(value, dtype=float)
        return cls(C, name=name)

    @classmethod
    def from_entries(cls, dim: int, entries, name: str = "") -> "LieAlgebra":
        """entries are 1-based (i, j, k, c) with i < j, meaning c^k_{ij} = c."""
        C = np.zeros((dim, dim, dim))
        for i, j, k, c in entries:
            if not (1 <= i < j <= dim and 1 <= k <= dim):
                raise InputError(f"invalid structure entry ({i}, {j}, {k})")
            C[i - 1, j - 1, k - 1] += c
            C[j - 1, i - 1, k - 1] -= c
        return cls(C, name=name)

    # --- basic data ---

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(x, float), np.asarray(y, float), self.structure)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad_x, acting on column vectors."""
        return np.einsum("i,ijk->kj", np.asarray(x, float), self.structure)

    def entries(self, tol: float = 0.0) -> list[tuple[int, int, int, float]]:
        out = []
        N = self.dim
        for i in range(N):
            for j in range(i + 1, N):
                for k in range(N):
                    c = float(self.structure[i, j, k])
                    if abs(c) > tol:
                        out.append((i + 1, j + 1, k + 1, c))
        return out

    def scale(self) -> float:
        return max(1.0, max_abs(self.structure))

    def change_basis(self, P: np.ndarray) -> "LieAlgebra":
        """Structure constants in the basis f_a = sum_i P[i, a] e_i."""
        P = np.asarray(P, dtype=float)
        P_inv = np.linalg.inv(P)
        C = np.einsum("ia,jb,ijk,ck->abc", P, P, self.structure, P_inv)
        return LieAlgebra(C, name=self.name)

    def scaled(self, t: float) -> "LieAlgebra":
        return LieAlgebra(t * self.structure, name=self.name)

    def bracket_image(self, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
        """Orthonormal basis (columns) of the derived algebra."""
        return _column_span(self.structure.reshape(-1, self.dim).T, rank_tol)


def direct_sum(L1: LieAlgebra, L2: LieAlgebra) -> LieAlgebra:
    n1, n2 = L1.dim, L2.dim
    C = np.zeros((n1 + n2,) * 3)
    C[:n1, :n1, :n1] = L1.structure
    C[n1:, n1:, n1:] = L2.structure
    name = " + ".join(part for part in (L1.name, L2.name) if part)
    return LieAlgebra(C, name=name)


def jacobi_residual(L: LieAlgebra) -> float:
    """max over (i, j, k) of |[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]|."""
    C = L.structure
    D = np.einsum("ijl,lkm->ijkm", C, C)
    cyclic = D + np.einsum("jkim->ijkm", D) + np.einsum("kijm->ijkm", D)
    return max_abs(cyclic)


def is_abelian(L: LieAlgebra, tol: float = DEFAULT_TOL) -> bool:
    return max_abs(L.structure) <= tol


# --- Fingerprints ---

@dataclass(frozen=True)
class Fingerprint:
    dim: int
    derived: tuple[int, ...]
    lower_central: tuple[int, ...]
    center_dim: int
    derived_commutator_dim: int
    abelianization_dim: int
    pencil_lines: int | None = None

    def as_dict(self) -> dict:
        data = asdict(self)
        data["derived"] = list(self.derived)
        data["lower_central"] = list(self.lower_central)
        return data


def _column_span(M: np.ndarray, rank_tol: float) -> np.ndarray:
    M = np.atleast_2d(M)
    if M.size == 0:
        return np.zeros((M.shape[0], 0))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > rank_tol * max(1.0, s[0]))) if s.size else 0
    return U[:, :r]


def _bracket_span(C: np.ndarray, A: np.ndarray, B: np.ndarray, rank_tol: float) -> np.ndarray:
    if A.shape[1] == 0 or B.shape[1] == 0:
        return np.zeros((C.shape[0], 0))
    vecs = np.einsum("ia,jb,ijk->kab", A, B, C).reshape(C.shape[0], -1)
    return _column_span(vecs, rank_tol)


def _series_dims(C: np.ndarray, step, rank_tol: float) -> tuple[int, ...]:
    N = C.shape[0]
    current = np.eye(N)
    dims = [N]
    while True:
        nxt = step(current)
        d = nxt.shape[1]
        if d == dims[-1]:
            dims.append(d)
            break
        dims.append(d)
        if d == 0:
            break
        current = nxt
    return tuple(dims)


def pencil_lines(L: LieAlgebra, rank_tol: float = DEFAULT_RANK_TOL, disc_tol: float = 1e-6) -> int | None:
    """
    For a two-dimensional derived algebra with orthonormal basis (f1, f2),
    the structure forms nu_k(x, y) = <f_k, [x, y]> span a pencil of 2-forms.
    Returns the number of real lines in that pencil made of forms of rank <= 2,
    or -1 when every member has rank <= 2. None unless dim g' = 2.
    """
    F = L.bracket_image(rank_tol)
    if F.shape[1] != 2:
        return None
    nu = [AltForm(np.einsum("ijl,l->ij", L.structure, F[:, k]), 2) for k in range(2)]
    if L.dim < 4:
        return -1
    Q = np.vstack([
        wedge(nu[0], nu[0]).coefficients,
        2.0 * wedge(nu[0], nu[1]).coefficients,
        wedge(nu[1], nu[1]).coefficients,
    ])
    scale = max_abs(Q)
    if scale <= rank_tol:
        return -1
    Q = Q / scale
    U, s, _ = np.linalg.svd(Q, full_matrices=True)
    rank = int(np.sum(s > disc_tol))
    if rank == 0:
        return -1
    if rank == 3:
        return 0
    if rank == 2:
        p, q, w = U[:, 2]
        return 1 if abs(q * q - p * w) <= disc_tol and p * w >= -disc_tol else 0
    a, b, c = U[:, 0]
    disc = (b * b - 4 * a * c) / (a * a + b * b + c * c)
    if disc > disc_tol:
        return 2
    if abs(disc) <= disc_tol:
        return 1
    return 0


def series(L: LieAlgebra, tol: float = DEFAULT_TOL, rank_tol: float = DEFAULT_RANK_TOL) -> Fingerprint:
    """Derived and lower central series, center and the other Fingerprint fields."""
    residual = jacobi_residual(L)
    if residual > tol * L.scale() ** 2:
        raise JacobiViolationError(residual)
    C = L.structure
    N = L.dim
    everything = np.eye(N)
    derived = _series_dims(C, lambda S: _bracket_span(C, S, S, rank_tol), rank_tol)
    lower = _series_dims(C, lambda S: _bracket_span(C, everything, S, rank_tol), rank_tol)
    center_dim = N - numerical_rank(C.reshape(N, N * N).T, rank_tol)
    g1 = _bracket_span(C, everything, everything, rank_tol)
    g2 = _bracket_span(C, g1, g1, rank_tol)
    fp = Fingerprint(
        dim=N,
        derived=derived,
        lower_central=lower,
        center_dim=center_dim,
        derived_commutator_dim=g2.shape[1],
        abelianization_dim=N - g1.shape[1],
        pencil_lines=pencil_lines(L, rank_tol),
    )
    logger.debug("fingerprint %s: %s", L.name or "<anonymous>", fp)
    return fp


@dataclass(frozen=True)
class TwoStepReport:
    solvable: bool
    abelian: bool


def is_two_step_solvable(L: LieAlgebra, tol: float = DEFAULT_TOL,
                         rank_tol: float = DEFAULT_RANK_TOL) -> TwoStepReport:
    """[[g, g], [g, g]] = 0. Abelian algebras count, flagged as the degenerate case."""
    C = L.structure
    g1 = _bracket_span(C, np.eye(L.dim), np.eye(L.dim), rank_tol)
    g2 = _bracket_span(C, g1, g1, rank_tol)
    return TwoStepReport(solvable=g2.shape[1] == 0, abelian=g1.shape[1] == 0)
