# backend/app/core/tensor.py
"""
Multilinear algebra on R^N with dense storage.

An alternating k-form is kept as its full antisymmetric tensor of shape
(N,)*k, with one trailing axis of length m when the form is vector valued.
Evaluation, pullbacks and wedges are einsum/tensordot contractions on that
tensor; `coefficients` exposes the usual increasing-index view.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb, factorial

import numpy as np

from app.config import DEFAULT_RANK_TOL, DEFAULT_TOL
from app.errors import (
    ComplexStructureError,
    DimensionMismatchError,
    InputError,
    MetricError,
    UnsupportedArityError,
)
from app.logs import get_logger

logger = get_logger(__name__)

MAX_ARITY = 4


# --- Small linear-algebra helpers ---

def numerical_rank(M: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    M = np.atleast_2d(np.asarray(M, dtype=complex if np.iscomplexobj(M) else float))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > rank_tol * max(1.0, s[0])))


def null_space(M: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """
    Orthonormal (Euclidean) basis of ker M as columns.
    Rank is decided against rank_tol * max(1, largest singular value).
    """
    M = np.atleast_2d(np.asarray(M))
    n_cols = M.shape[1]
    if M.shape[0] == 0 or M.size == 0:
        return np.eye(n_cols, dtype=M.dtype)
    _, s, vh = np.linalg.svd(M)
    r = int(np.sum(s > rank_tol * max(1.0, s[0])))
    return vh[r:].conj().T


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def max_abs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def _permutation_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


# --- Alternating forms ---

@dataclass(frozen=True)
class AltForm:
    """
    Alternating k-form on R^N, optionally with values in R^m.

    tensor  full antisymmetric array, shape (N,)*k or (N,)*k + (m,)
    degree  k
    """

    tensor: np.ndarray
    degree: int
    vector_valued: bool = field(default=False)

    def __post_init__(self):
        arr = np.array(self.tensor, dtype=float)
        expected = self.degree + (1 if self.vector_valued else 0)
        if arr.ndim != expected:
            raise DimensionMismatchError(
                f"tensor has {arr.ndim} axes, expected {expected} for degree {self.degree}"
            )
        if len(set(arr.shape[: self.degree])) > 1:
            raise DimensionMismatchError(f"form axes must share one dimension, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("non-finite entries in form")
        arr.setflags(write=False)
        object.__setattr__(self, "tensor", arr)

    @property
    def dim(self) -> int:
        return self.tensor.shape[0]

    @property
    def value_dim(self) -> int:
        return self.tensor.shape[-1] if self.vector_valued else 0

    @property
    def coefficients(self) -> np.ndarray:
        """Entries on strictly increasing index tuples, flattened (length C(N,k)*max(1,m))."""
        idx = list(combinations(range(self.dim), self.degree))
        if not idx:
            return np.zeros(0)
        rows = np.array([self.tensor[c] for c in idx])
        return rows.reshape(-1)

    def evaluate(self, *vectors) -> float | np.ndarray:
        if len(vectors) != self.degree:
            raise DimensionMismatchError(f"expected {self.degree} arguments, got {len(vectors)}")
        out = self.tensor
        for v in vectors:
            out = np.tensordot(np.asarray(v, dtype=float), out, axes=([0], [0]))
        return out if self.vector_valued else float(out)

    def norm(self) -> float:
        return max_abs(self.tensor)

    def _check_compatible(self, other: "AltForm") -> None:
        if (
            self.degree != other.degree
            or self.tensor.shape != other.tensor.shape
            or self.vector_valued != other.vector_valued
        ):
            raise DimensionMismatchError("forms of different type cannot be combined")

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check_compatible(other)
        return AltForm(self.tensor + other.tensor, self.degree, self.vector_valued)

    def __sub__(self, other: "AltForm") -> "AltForm":
        self._check_compatible(other)
        return AltForm(self.tensor - other.tensor, self.degree, self.vector_valued)

    def __neg__(self) -> "AltForm":
        return AltForm(-self.tensor, self.degree, self.vector_valued)

    def __mul__(self, scalar: float) -> "AltForm":
        return AltForm(float(scalar) * self.tensor, self.degree, self.vector_valued)

    __rmul__ = __mul__

    def component(self, index: int) -> "AltForm":
        """Scalar form obtained from one value coordinate."""
        if not self.vector_valued:
            raise DimensionMismatchError("component() needs a vector-valued form")
        return AltForm(self.tensor[..., index], self.degree)

    def restrict(self, basis: np.ndarray) -> np.ndarray:
        """Tensor of the form evaluated on the columns of basis."""
        out = self.tensor
        for axis in range(self.degree):
            out = np.moveaxis(np.tensordot(basis.T, out, axes=([1], [axis])), 0, axis)
        return out


def zero_form(dim: int, degree: int, value_dim: int = 0) -> AltForm:
    shape = (dim,) * degree + ((value_dim,) if value_dim else ())
    return AltForm(np.zeros(shape), degree, vector_valued=bool(value_dim))


def covector(v) -> AltForm:
    return AltForm(np.asarray(v, dtype=float), 1)


def basis_form(dim: int, indices: tuple[int, ...]) -> AltForm:
    """e^{i1} ^ ... ^ e^{ik} (0-based indices)."""
    k = len(indices)
    T = np.zeros((dim,) * k)
    for perm in permutations(range(k)):
        T[tuple(indices[p] for p in perm)] = _permutation_sign(perm)
    return AltForm(T, k)


def from_coefficients(dim: int, degree: int, coeffs, value_dim: int = 0) -> AltForm:
    """Inverse of AltForm.coefficients."""
    idx = list(combinations(range(dim), degree))
    coeffs = np.asarray(coeffs, dtype=float)
    rows = coeffs.reshape(len(idx), value_dim) if value_dim else coeffs.reshape(len(idx))
    shape = (dim,) * degree + ((value_dim,) if value_dim else ())
    T = np.zeros(shape)
    for c, row in zip(idx, rows):
        for perm in permutations(range(degree)):
            T[tuple(c[p] for p in perm)] = _permutation_sign(perm) * row
    return AltForm(T, degree, vector_valued=bool(value_dim))


def antisymmetrize(T: np.ndarray, degree: int | None = None) -> AltForm:
    """
    Alt(T)(X1..Xk) = (1/k!) * sum_s sgn(s) T(X_s(1), .., X_s(k)).

    T has k form axes and optionally one trailing value axis; pass degree
    explicitly when T is vector valued.
    """
    T = np.asarray(T, dtype=float)
    k = T.ndim if degree is None else degree
    if k > MAX_ARITY:
        raise UnsupportedArityError(f"arity {k} exceeds the supported maximum {MAX_ARITY}")
    tail = tuple(range(k, T.ndim))
    out = np.zeros_like(T)
    for perm in permutations(range(k)):
        out += _permutation_sign(perm) * np.transpose(T, perm + tail)
    return AltForm(out / factorial(k), k, vector_valued=bool(tail))


def tensor_from_callable(fn, dim: int, arity: int) -> np.ndarray:
    """Sample a multilinear map on all basis tuples."""
    eye = np.eye(dim)
    T = None
    for idx in np.ndindex(*((dim,) * arity)):
        value = np.asarray(fn(*(eye[i] for i in idx)), dtype=float)
        if T is None:
            T = np.zeros((dim,) * arity + value.shape)
        T[idx] = value
    return T


def wedge(alpha: AltForm, beta: AltForm) -> AltForm:
    """Exterior product, normalised so that (e^1 ^ e^2)(e_1, e_2) = 1."""
    if alpha.dim != beta.dim:
        raise DimensionMismatchError(f"wedge of forms on R^{alpha.dim} and R^{beta.dim}")
    if alpha.vector_valued and beta.vector_valued:
        raise InputError("at most one wedge operand may be vector valued")
    p, q = alpha.degree, beta.degree
    if p + q > MAX_ARITY:
        raise UnsupportedArityError(f"wedge degree {p + q} exceeds {MAX_ARITY}")
    T = np.multiply.outer(alpha.tensor, beta.tensor)
    if alpha.vector_valued:
        T = np.moveaxis(T, p, -1)
    return comb(p + q, p) * antisymmetrize(T, p + q)


def pullback(alpha: AltForm, A: np.ndarray) -> AltForm:
    """(A* alpha)(X1..Xk) = alpha(A X1, .., A Xk)."""
    A = np.asarray(A, dtype=float)
    if A.shape != (alpha.dim, alpha.dim):
        raise DimensionMismatchError(f"endomorphism of shape {A.shape} on R^{alpha.dim}")
    T = alpha.tensor
    for axis in range(alpha.degree):
        T = np.moveaxis(np.tensordot(A.T, T, axes=([1], [axis])), 0, axis)
    return AltForm(T, alpha.degree, alpha.vector_valued)


def pullback_J(alpha: AltForm, J: np.ndarray) -> AltForm:
    J = np.asarray(J, dtype=float)
    if J.ndim != 2 or J.shape[0] != J.shape[1]:
        raise DimensionMismatchError("J must be square")
    return pullback(alpha, J)


def apply_values(alpha: AltForm, M: np.ndarray) -> AltForm:
    """Compose the values of a vector-valued form with a linear map."""
    return AltForm(np.tensordot(alpha.tensor, np.asarray(M).T, axes=([-1], [0])), alpha.degree, True)


# --- Metrics and complex structures ---

def check_complex_structure(J: np.ndarray, tol: float = DEFAULT_TOL) -> None:
    J = np.asarray(J, dtype=float)
    if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2:
        raise ComplexStructureError(f"J must be square of even size, got {J.shape}")
    defect = max_abs(J @ J + np.eye(J.shape[0]))
    if defect > tol * max(1.0, max_abs(J) ** 2):
        raise ComplexStructureError(f"J^2 != -id (defect {defect:.3e})")


def check_metric(g: np.ndarray, tol: float = DEFAULT_TOL) -> None:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise MetricError(f"metric must be square, got {g.shape}")
    if max_abs(g - g.T) > tol * max(1.0, max_abs(g)):
        raise MetricError("metric is not symmetric")
    if np.linalg.eigvalsh((g + g.T) / 2).min() <= tol:
        raise MetricError("metric is not positive definite")


def standard_structure(n: int) -> tuple[np.ndarray, np.ndarray, AltForm]:
    """
    Flat Kähler structure on R^{2n}: g = id, J e_{2k-1} = e_{2k},
    sigma = g(J., .) = sum e^{2k-1} ^ e^{2k}.
    """
    if n < 1:
        raise InputError("standard_structure needs n >= 1")
    N = 2 * n
    g = np.eye(N)
    J = np.zeros((N, N))
    for k in range(n):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return g, J, fundamental_form(g, J)


def fundamental_form(g: np.ndarray, J: np.ndarray) -> AltForm:
    # sigma(X, Y) = g(JX, Y) = X^T J^T g Y
    return AltForm(np.asarray(J).T @ np.asarray(g), 2)


# --- Subspaces ---

@dataclass(frozen=True)
class Subspace:
    """
    Subspace of R^N stored by a g-orthonormal basis (columns of `basis`).
    Build through Subspace.span.
    """

    basis: np.ndarray
    metric: np.ndarray

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float).reshape(self.metric.shape[0], -1)
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def span(cls, vectors, metric: np.ndarray | None = None,
             rank_tol: float = DEFAULT_RANK_TOL) -> "Subspace":
        """Span of the columns of an N x d array."""
        V = np.asarray(vectors, dtype=float)
        if metric is None:
            metric = np.eye(V.shape[0])
        metric = np.asarray(metric, dtype=float)
        N = metric.shape[0]
        V = V.reshape(N, -1)
        if V.shape[1] == 0:
            return cls(np.zeros((N, 0)), metric)
        L = np.linalg.cholesky(metric)
        Y = L.T @ V
        U, s, _ = np.linalg.svd(Y, full_matrices=False)
        r = int(np.sum(s > rank_tol * max(1.0, s[0]))) if s.size else 0
        B = np.linalg.solve(L.T, U[:, :r])
        return cls(B, metric)

    @classmethod
    def whole(cls, metric: np.ndarray) -> "Subspace":
        return cls.span(np.eye(metric.shape[0]), metric)

    @classmethod
    def zero(cls, metric: np.ndarray) -> "Subspace":
        return cls(np.zeros((metric.shape[0], 0)), metric)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T @ self.metric

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        return self.basis.T @ self.metric @ v

    def contains(self, v: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
        v = np.asarray(v, dtype=float)
        return max_abs(v - self.projector @ v) <= tol * max(1.0, max_abs(v))

    def orthogonal_complement(self, within: "Subspace | None" = None,
                              rank_tol: float = DEFAULT_RANK_TOL) -> "Subspace":
        host = within.basis if within is not None else np.eye(self.ambient_dim)
        if self.dim == 0:
            return Subspace.span(host, self.metric, rank_tol)
        K = null_space(self.basis.T @ self.metric @ host, rank_tol)
        return Subspace.span(host @ K, self.metric, rank_tol)

    def image(self, A: np.ndarray, rank_tol: float = DEFAULT_RANK_TOL) -> "Subspace":
        return Subspace.span(np.asarray(A) @ self.basis, self.metric, rank_tol)

    def plus(self, other: "Subspace", rank_tol: float = DEFAULT_RANK_TOL) -> "Subspace":
        return Subspace.span(np.hstack([self.basis, other.basis]), self.metric, rank_tol)

    def is_invariant(self, A: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
        P = self.projector
        return max_abs(P @ A @ P - A @ P) <= tol * max(1.0, max_abs(A))


def split_complex_real(V: Subspace, J: np.ndarray, g: np.ndarray | None = None,
                       tol: float = DEFAULT_TOL,
                       rank_tol: float = DEFAULT_RANK_TOL) -> tuple[Subspace, Subspace]:
    """
    V_J = V ∩ JV (maximal J-invariant subspace) and V_r = its g-orthogonal
    complement inside V.
    """
    J = np.asarray(J, dtype=float)
    g = V.metric if g is None else np.asarray(g, dtype=float)
    check_complex_structure(J, tol)
    check_metric(g, tol)
    if J.shape[0] != V.ambient_dim:
        raise DimensionMismatchError(f"J acts on R^{J.shape[0]}, subspace lives in R^{V.ambient_dim}")
    if V.dim == 0:
        return Subspace.zero(g), Subspace.zero(g)
    P = V.projector
    defect = (np.eye(V.ambient_dim) - P) @ J @ V.basis
    K = null_space(defect, rank_tol)
    V_J = Subspace.span(V.basis @ K, g, rank_tol)
    V_r = V_J.orthogonal_complement(within=V, rank_tol=rank_tol)
    logger.debug("split: dim V=%d, dim V_J=%d, dim V_r=%d", V.dim, V_J.dim, V_r.dim)
    return V_J, V_r


def complex_frame(V: Subspace, J: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis (v1, Jv1, v2, Jv2, ...) of a J-invariant subspace,
    for a metric compatible with J.
    """
    g = V.metric
    remaining = [V.basis[:, i].copy() for i in range(V.dim)]
    frame: list[np.ndarray] = []
    for _ in range(V.dim // 2):
        best = max(remaining, key=lambda v: v @ g @ v)
        v = best / np.sqrt(best @ g @ best)
        Jv = J @ v
        Jv = Jv - (v @ g @ Jv) * v
        Jv = Jv / np.sqrt(Jv @ g @ Jv)
        frame.extend([v, Jv])
        remaining = [w - (v @ g @ w) * v - (Jv @ g @ w) * Jv for w in remaining]
    if not frame:
        return np.zeros((V.ambient_dim, 0))
    return np.column_stack(frame)


# --- Real <-> complex coordinates (basis pairs (v, Jv)) ---

def to_complex(M: np.ndarray) -> np.ndarray:
    """2m x 2m real matrix commuting with the standard J -> m x m complex."""
    M = np.asarray(M, dtype=float)
    return M[0::2, 0::2] + 1j * M[1::2, 0::2]


def from_complex(Z: np.ndarray) -> np.ndarray:
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    m, k = Z.shape
    M = np.zeros((2 * m, 2 * k))
    M[0::2, 0::2] = Z.real
    M[0::2, 1::2] = -Z.imag
    M[1::2, 0::2] = Z.imag
    M[1::2, 1::2] = Z.real
    return M


def complex_vector(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]


def real_vector(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    x = np.zeros(2 * z.shape[0])
    x[0::2] = z.real
    x[1::2] = z.imag
    return x
