# backend/app/core/normal_forms.py
"""
Constructive linear algebra used by the classification: unitary
diagonalization of complex endomorphisms, adapted bases for symmetric
bilinear maps f: V x V -> V, and the splitting/rank checks for pairs of
(1,1)-forms.

Symmetric maps are stored as f[i, j, :] = f(e_i, e_j).
"""

from dataclasses import dataclass
from itertools import product

import numpy as np
from pydantic import BaseModel
from scipy.optimize import least_squares

from app.config import (
    CLUSTER_GAP,
    COMBINATION_DRAWS,
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    SEARCH_STARTS,
)
from app.core.tensor import (
    AltForm,
    commutator,
    max_abs,
    null_space,
    numerical_rank,
    standard_structure,
    to_complex,
    wedge,
)
from app.errors import DiagonalizationError, PreconditionError, SearchFailure
from app.logs import get_logger

logger = get_logger(__name__)


def complex_matrix(M, real_form: bool = False, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Complex m x m view of an endomorphism. With real_form=True, M is a real
    2m x 2m matrix that must commute with the standard J.
    """
    M = np.asarray(M)
    if not real_form:
        return np.atleast_2d(M.astype(complex))
    M = M.astype(float)
    _, J, _ = standard_structure(M.shape[0] // 2)
    defect = max_abs(commutator(J, M))
    if defect > tol * max(1.0, max_abs(M)):
        raise PreconditionError("matrix does not commute with J", defect)
    return to_complex(M)


# --- Unitary diagonalization ---

def _cluster(values: np.ndarray, gap: float) -> list[np.ndarray]:
    """Group sorted eigenvalues whose consecutive distance is below gap (relative)."""
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    groups, start = [], 0
    for k in range(1, len(values) + 1):
        if k == len(values) or values[k] - values[k - 1] > gap * scale:
            groups.append(np.arange(start, k))
            start = k
    return groups


def _split(V: np.ndarray, hermitians: list[np.ndarray], gap: float) -> list[np.ndarray]:
    """Refine the orthonormal block V along the remaining commuting Hermitian matrices."""
    if V.shape[1] <= 1 or not hermitians:
        return [V]
    H, rest = hermitians[0], hermitians[1:]
    values, vectors = np.linalg.eigh(V.conj().T @ H @ V)
    blocks = []
    for group in _cluster(values, gap):
        blocks.extend(_split(V @ vectors[:, group], rest, gap))
    return blocks


def _tidy(U: np.ndarray) -> np.ndarray:
    """Order columns by their dominant coordinate and make that coordinate real positive."""
    lead = np.argmax(np.abs(U), axis=0)
    order = np.argsort(lead, kind="stable")
    U = U[:, order]
    phases = U[np.argmax(np.abs(U), axis=0), np.arange(U.shape[1])]
    return U * (np.abs(phases) / phases)


def simultaneous_diagonalize(Ks, tol: float = DEFAULT_TOL,
                             gap: float = CLUSTER_GAP) -> tuple[np.ndarray, np.ndarray]:
    """
    Unitary U with U* K U diagonal for every K in a commuting family of
    normal matrices. Returns (U, alpha) with alpha[i, k] the i-th diagonal
    entry of U* K_k U.
    """
    Ks = [np.atleast_2d(np.asarray(K, dtype=complex)) for K in Ks]
    if not Ks:
        return np.zeros((0, 0), dtype=complex), np.zeros((0, 0), dtype=complex)
    m = Ks[0].shape[0]
    scale = max(1.0, max(max_abs(K) for K in Ks))
    for i, Ki in enumerate(Ks):
        for Kj in Ks[i + 1:]:
            defect = max_abs(commutator(Ki, Kj))
            if defect > tol * scale * scale:
                raise PreconditionError("matrices do not commute", defect)

    hermitians = []
    for K in Ks:
        hermitians.append((K + K.conj().T) / 2)
        hermitians.append((K - K.conj().T) / 2j)
    blocks = _split(np.eye(m, dtype=complex), hermitians, gap)
    U = _tidy(np.hstack(blocks))

    diagonals = [U.conj().T @ K @ U for K in Ks]
    residual = max(max_abs(D - np.diag(np.diag(D))) for D in diagonals)
    if residual > np.sqrt(tol) * scale:
        raise DiagonalizationError("no common unitary eigenbasis (non-normal or defective input)", residual)
    alpha = np.column_stack([np.diag(D) for D in diagonals])
    logger.debug("simultaneous diagonalization: %d blocks, residual %.2e", len(blocks), residual)
    return U, alpha


def g_skew_diagonalize(P, a: float, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """
    P with G(P) = P^2 + P*P + aP skew-Hermitian is normal; returns (U, μ)
    with U*PU = diag(μ). Each eigenvalue has real part 0 or -a/2.
    """
    P = complex_matrix(P)
    scale = max(1.0, max_abs(P), abs(a))
    G = P @ P + P.conj().T @ P + a * P
    defect = max_abs(G + G.conj().T)
    if defect > tol * scale * scale:
        raise PreconditionError("P^2 + P*P + aP is not skew-Hermitian", defect)
    U, alpha = simultaneous_diagonalize([P], tol)
    mu = alpha[:, 0]
    re = mu.real
    off = max_abs(re * (2 * re + a)) if mu.size else 0.0
    if off > np.sqrt(tol) * scale * scale:
        raise DiagonalizationError("eigenvalue real parts outside {0, -a/2}", off)
    return U, mu


# --- Symmetric bilinear maps ---

def _orthonormal_coordinates(f: np.ndarray, metric) -> tuple[np.ndarray, np.ndarray]:
    """f in a g-orthonormal basis B (columns); returns (f_B, B)."""
    n = f.shape[0]
    if metric is None:
        return f, np.eye(n)
    R = np.linalg.cholesky(np.asarray(metric, dtype=float)).T     # g = R^T R
    B = np.linalg.inv(R)
    f_B = np.einsum("ia,jb,ijk,lk->abl", B, B, f, R)
    return f_B, B


def _column_span(M: np.ndarray, rank_tol: float) -> np.ndarray:
    if M.size == 0:
        return np.zeros((M.shape[0], 0))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    return U[:, : int(np.sum(s > rank_tol * max(1.0, s[0])))]


def _check_symmetric(f: np.ndarray, tol: float) -> float:
    f = np.asarray(f, dtype=float)
    if f.ndim != 3 or len(set(f.shape)) != 1:
        raise PreconditionError(f"f must have shape (n, n, n), got {f.shape}")
    scale = max(1.0, max_abs(f))
    defect = max_abs(f - f.transpose(1, 0, 2))
    if defect > tol * scale:
        raise PreconditionError("f is not symmetric", defect)
    return scale


def associativity_defect(f: np.ndarray) -> float:
    """max |f(f(x,y),z) - f(x,f(y,z))| over basis vectors."""
    T = np.einsum("ijl,lkm->ijkm", f, f)
    return max_abs(T - T.transpose(1, 2, 0, 3))


def metric_symmetry_defect(f: np.ndarray) -> float:
    """Total symmetry of g(f(x,y), f(z,w)) in orthonormal coordinates."""
    S = np.einsum("ijm,klm->ijkl", f, f)
    return max_abs(S - S.transpose(0, 2, 1, 3))


def _quadratic_eigenvector(f: np.ndarray, rng: np.random.Generator, starts: int,
                           tol: float) -> np.ndarray | None:
    """Unit x with f(x, x) parallel to x."""
    m = f.shape[0]

    def residual(x):
        q = np.einsum("i,j,ijk->k", x, x, f)
        return np.concatenate([q - (q @ x) * x, [x @ x - 1.0]])

    candidates = [np.eye(m)[k] for k in range(m)]
    candidates += [rng.standard_normal(m) for _ in range(starts)]
    for attempt, x0 in enumerate(candidates):
        x0 = x0 / np.linalg.norm(x0)
        if max_abs(residual(x0)) <= tol:
            return x0
        sol = least_squares(residual, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
        x = sol.x / np.linalg.norm(sol.x)
        if max_abs(residual(x)) <= tol:
            logger.debug("quadratic eigenvector found at start %d", attempt)
            return x
    return None


def find_f_adapted_basis(f, metric=None, seed: int = 0, starts: int = SEARCH_STARTS,
                         tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Orthonormal basis (columns v_1..v_n) with f(v_i, v_i) in span{v_1..v_i}.
    Each step looks for a unit v with f(v, v) = λv on the orthogonal
    complement of the vectors already chosen, with f projected there.
    """
    f = np.asarray(f, dtype=float)
    scale = _check_symmetric(f, tol)
    n = f.shape[0]
    f_B, B = _orthonormal_coordinates(f, metric)
    rng = np.random.default_rng(seed)
    accept = np.sqrt(tol) * scale

    chosen: list[np.ndarray] = []
    C = np.eye(n)                                   # orthonormal basis of the remaining space
    while C.shape[1] > 0:
        f_C = np.einsum("ia,jb,ijk,kc->abc", C, C, f_B, C)
        if C.shape[1] == 1:
            x = np.ones(1)
        else:
            x = _quadratic_eigenvector(f_C, rng, starts, accept)
            if x is None:
                raise SearchFailure(
                    f"no vector with f(v, v) parallel to v after {starts} starts in dimension {C.shape[1]}"
                )
        chosen.append(C @ x)
        C = C @ null_space(x[None, :])

    V = np.column_stack(chosen)
    defect = 0.0
    for i in range(n):
        q = np.einsum("i,j,ijk->k", V[:, i], V[:, i], f_B)
        head = V[:, : i + 1]
        defect = max(defect, max_abs(q - head @ (head.T @ q)))
    if defect > accept:
        raise SearchFailure(f"returned basis violates the triangularity property (defect {defect:.3e})")
    return B @ V


def find_identity_element(f, seed: int = 0, draws: int = COMBINATION_DRAWS,
                          tol: float = DEFAULT_TOL,
                          rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """
    v with f(v, ·) = id, for f associative and onto. Powers of an
    invertible operator a = f(x, ·) stay of the form f(x_k, ·), so the
    Cayley–Hamilton expression for the identity pulls back to V.
    """
    f = np.asarray(f, dtype=float)
    scale = _check_symmetric(f, tol)
    n = f.shape[0]
    assoc = associativity_defect(f)
    if assoc > tol * scale * scale:
        raise PreconditionError("f(f(·,·),·) is not totally symmetric", assoc)
    if numerical_rank(f.reshape(n * n, n), rank_tol) < n:
        raise PreconditionError("f is not onto")

    def operator(x):
        return np.einsum("i,ijk->kj", x, f)

    def invertible(x):
        a = operator(x)
        return abs(np.linalg.det(a)) > np.sqrt(tol) * max(1.0, max_abs(a)) ** n

    rng = np.random.default_rng(seed)
    x = next((c for c in (rng.standard_normal(n) for _ in range(draws)) if invertible(c)), None)
    if x is None:
        logger.warning("random combinations degenerate; sweeping ±1 combinations")
        x = next((np.array(c, dtype=float) for c in product((1.0, -1.0), repeat=n)
                  if invertible(np.array(c, dtype=float))), None)
    if x is None:
        raise SearchFailure("no invertible combination of the operators f(u, ·)")

    coeffs = np.real(np.poly(operator(x)))        # t^n + c_{n-1} t^{n-1} + ... + c_0
    powers = [x]
    for _ in range(n - 1):
        powers.append(np.einsum("i,j,ijk->k", x, powers[-1], f))
    # a^n + c_{n-1} a^{n-1} + ... + c_1 a = -c_0 id
    v = sum(coeffs[n - k] * powers[k - 1] for k in range(1, n + 1)) / (-coeffs[n])
    residual = max_abs(operator(v) - np.eye(n))
    if residual > np.sqrt(tol) * scale:
        raise SearchFailure(f"identity element residual {residual:.3e}")
    return v


@dataclass(frozen=True)
class FNormalForm:
    V1: np.ndarray            # columns X_a with f(X_a, X_b) = δ_ab λ_a X_a
    lambdas: np.ndarray
    V2: np.ndarray
    V3: np.ndarray
    residual: float


def f_normal_form(f, metric=None, tol: float = DEFAULT_TOL,
                  rank_tol: float = DEFAULT_RANK_TOL, seed: int = 0) -> FNormalForm:
    """
    V = V1 ⊕ V2 ⊕ V3 with f(X_a, X_b) = δ_ab λ_a X_a on V1,
    f(V2 ⊕ V3, V1 ⊕ V2) = 0 and f(V3, V3) ⊂ V2.

    V1 ⊕ V2 is the image of f and V2 its annihilator there; V3 is cut out
    of the kernel of f(e, ·), e the unit of V1.
    """
    f = np.asarray(f, dtype=float)
    scale = _check_symmetric(f, tol)
    n = f.shape[0]
    f_B, B = _orthonormal_coordinates(f, metric)
    assoc = associativity_defect(f_B)
    sym = metric_symmetry_defect(f_B)
    if max(assoc, sym) > tol * scale * scale:
        raise PreconditionError("f(f(·,·),·) or g(f(·,·), f(·,·)) is not totally symmetric", max(assoc, sym))

    image = _column_span(f_B.reshape(n * n, n).T, rank_tol)
    # V2: x in the image with f(x, image) = 0
    if image.shape[1]:
        annihilate = np.einsum("ia,jb,ijk->kba", image, image, f_B).reshape(-1, image.shape[1])
        V2 = image @ null_space(annihilate, rank_tol)
    else:
        V2 = np.zeros((n, 0))
    V1_space = image @ null_space(V2.T @ image, rank_tol) if image.shape[1] else np.zeros((n, 0))

    k = V1_space.shape[1]
    if k:
        rng = np.random.default_rng(seed)
        c = V1_space @ rng.standard_normal(k)
        Fc = V1_space.T @ np.einsum("i,ijk->kj", c, f_B) @ V1_space
        _, vectors = np.linalg.eigh((Fc + Fc.T) / 2)
        X = V1_space @ vectors
        lambdas = np.einsum("ia,ja,ijk,ka->a", X, X, f_B, X)
        if np.min(np.abs(lambdas)) <= np.sqrt(tol) * scale:
            raise PreconditionError("degenerate idempotent in the image of f")
        unit = (X / lambdas).sum(axis=1)
        kernel = null_space(np.einsum("i,ijk->kj", unit, f_B), rank_tol)
    else:
        X, lambdas = np.zeros((n, 0)), np.zeros(0)
        kernel = np.eye(n)

    # V3: kernel vectors with f(x, V2) = 0, orthogonal to V2
    constraints = [V2.T]
    if V2.shape[1]:
        constraints.append(np.einsum("ia,ijk->kaj", V2, f_B).reshape(-1, n))
    W = kernel @ null_space(np.vstack(constraints) @ kernel, rank_tol)
    V3 = W

    if k + V2.shape[1] + V3.shape[1] != n:
        raise PreconditionError(
            f"subspace dimensions {k} + {V2.shape[1]} + {V3.shape[1]} do not add up to {n}"
        )

    def f_on(P, Q):
        return np.einsum("ia,jb,ijk->abk", P, Q, f_B)

    residual = 0.0
    if k:
        target = np.einsum("ab,a,ka->abk", np.eye(k), lambdas, X)
        residual = max(residual, max_abs(f_on(X, X) - target))
    rest = np.hstack([V2, V3])
    if rest.shape[1] and (k + V2.shape[1]):
        residual = max(residual, max_abs(f_on(rest, np.hstack([X, V2]))))
    if V3.shape[1]:
        out = f_on(V3, V3).reshape(-1, n).T
        residual = max(residual, max_abs(out - V2 @ (V2.T @ out)))
    if residual > np.sqrt(tol) * scale:
        raise PreconditionError("normal form properties fail", residual)
    logger.debug("f normal form: dim V1=%d, V2=%d, V3=%d", k, V2.shape[1], V3.shape[1])
    return FNormalForm(V1=B @ X, lambdas=lambdas, V2=B @ V2, V3=B @ V3, residual=residual)


# --- Pairs of (1,1)-forms ---

def _two_form(nu) -> AltForm:
    if isinstance(nu, AltForm):
        return nu
    M = np.asarray(nu, dtype=float)
    return AltForm(M, 2)


def _type_11_defect(nu: AltForm, J: np.ndarray) -> float:
    return max_abs(J.T @ nu.tensor @ J - nu.tensor)


@dataclass(frozen=True)
class RankTwoSplit:
    rotation: np.ndarray          # R in SO(2) acting on (ν1, ν2)
    alpha: np.ndarray
    beta: np.ndarray
    signs: tuple[float, float]    # rotated forms are sign * α ∧ J*α, sign * β ∧ J*β
    residual: float


def _decompose_rank_two(M: np.ndarray, J: np.ndarray) -> tuple[np.ndarray, float, float]:
    """M = sign * α ∧ J*α for a (1,1)-form of rank at most two."""
    N = M.shape[0]
    if max_abs(M) == 0.0:
        return np.zeros(N), 1.0, 0.0
    U, s, _ = np.linalg.svd(M)
    u = U[:, 0]
    Ju = J.T @ u
    model = np.outer(u, Ju) - np.outer(Ju, u)
    k = float(np.sum(M * model) / np.sum(model * model))
    alpha = np.sqrt(abs(k)) * u
    return alpha, 1.0 if k >= 0 else -1.0, max_abs(M - k * model)


def split_rank_two_pair(nu1, nu2, J=None, tol: float = DEFAULT_TOL) -> RankTwoSplit:
    """
    Rotate (ν1, ν2) with ν1^2 + ν2^2 = 0 so that both members are
    decomposable. With ν1∧ν2 = a ν1∧ν1 the angle solves
    cos 2θ + a sin 2θ = 0.
    """
    nu1, nu2 = _two_form(nu1), _two_form(nu2)
    N = nu1.dim
    J = standard_structure(N // 2)[1] if J is None else np.asarray(J, dtype=float)
    scale = max(1.0, max_abs(nu1.tensor), max_abs(nu2.tensor))
    for label, nu in (("ν1", nu1), ("ν2", nu2)):
        defect = _type_11_defect(nu, J)
        if defect > tol * scale:
            raise PreconditionError(f"{label} is not of type (1,1)", defect)
    P11, P12, P22 = wedge(nu1, nu1), wedge(nu1, nu2), wedge(nu2, nu2)
    defect = (P11 + P22).norm()
    if defect > tol * scale * scale:
        raise PreconditionError("ν1∧ν1 + ν2∧ν2 does not vanish", defect)

    norm11 = float(np.sum(P11.tensor ** 2))
    if P11.norm() <= tol * scale * scale:
        theta = 0.0
    else:
        a = float(np.sum(P12.tensor * P11.tensor)) / norm11
        anomaly = (P12 - P11 * a).norm()
        if anomaly > np.sqrt(tol) * scale * scale:
            raise PreconditionError("ν1∧ν2 is not a multiple of ν1∧ν1", anomaly)
        theta = 0.5 * np.arctan2(1.0, -a)
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, s], [-s, c]])
    first = c * nu1.tensor + s * nu2.tensor
    second = -s * nu1.tensor + c * nu2.tensor
    alpha, sign_a, res_a = _decompose_rank_two(first, J)
    beta, sign_b, res_b = _decompose_rank_two(second, J)
    residual = max(res_a, res_b)
    if residual > np.sqrt(tol) * scale:
        raise PreconditionError("rotated forms are not decomposable", residual)
    logger.debug("rank-two split: theta=%.6f, residual %.2e", theta, residual)
    return RankTwoSplit(rotation=R, alpha=alpha, beta=beta, signs=(sign_a, sign_b), residual=residual)


class RankReport(BaseModel):
    identity_residual: float
    theta_rank: int
    kernel_dim: int
    codim: int
    passed: bool


def verify_rank_conditions(sigma1, sigma2, theta, J=None, tol: float = DEFAULT_TOL,
                           rank_tol: float = DEFAULT_RANK_TOL) -> RankReport:
    """
    For σ1^2 + σ2^2 = θ∧θ̄, report the rank of θ and the common kernel of
    σ1, σ2, θ. theta is a complex antisymmetric matrix Re θ + i Im θ.
    """
    s1, s2 = _two_form(sigma1), _two_form(sigma2)
    Theta = np.asarray(theta, dtype=complex)
    re, im = AltForm(Theta.real, 2), AltForm(Theta.imag, 2)
    N = s1.dim
    scale = max(1.0, max_abs(s1.tensor), max_abs(s2.tensor), max_abs(Theta))
    identity = (wedge(s1, s1) + wedge(s2, s2) - wedge(re, re) - wedge(im, im)).norm()
    if identity > tol * scale * scale:
        raise PreconditionError("σ1^2 + σ2^2 differs from θ∧θ̄", identity)
    theta_rank = numerical_rank(Theta, rank_tol)
    kernel = null_space(np.vstack([s1.tensor, s2.tensor, Theta.real, Theta.imag]), rank_tol)
    kernel_dim = kernel.shape[1]
    codim = N - kernel_dim
    return RankReport(identity_residual=identity, theta_rank=theta_rank, kernel_dim=kernel_dim,
                      codim=codim, passed=theta_rank <= 2 and codim <= 6)


class JRelationReport(BaseModel):
    commutator_A1_J: float
    commutator_A2_J: float
    threshold: float
    passed: bool


def check_2x2_J_relation(A1, A2, J=None, tol: float = DEFAULT_TOL) -> JRelationReport:
    """[A1, A2] = 0 and [A2, J] = J[A1, J] for 2 x 2 matrices force both to commute with J."""
    A1, A2 = np.asarray(A1, dtype=float), np.asarray(A2, dtype=float)
    J = standard_structure(1)[1] if J is None else np.asarray(J, dtype=float)
    scale = max(1.0, max_abs(A1), max_abs(A2))
    hyp_a = max_abs(commutator(A1, A2))
    hyp_b = max_abs(commutator(A2, J) - J @ commutator(A1, J))
    if max(hyp_a, hyp_b) > tol * scale * scale:
        raise PreconditionError("hypotheses [A1,A2] = 0, [A2,J] = J[A1,J] fail", max(hyp_a, hyp_b))
    c1, c2 = max_abs(commutator(A1, J)), max_abs(commutator(A2, J))
    threshold = np.sqrt(tol) * scale
    return JRelationReport(commutator_A1_J=c1, commutator_A2_J=c2, threshold=threshold,
                           passed=max(c1, c2) <= threshold)
