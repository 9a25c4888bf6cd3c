"""
Explicit models of operators in C_alpha^{w,+}

For T with alpha(T*, T) >= 0 the pieces are
    D   the defect operator alpha(T*, T)^(1/2), with range basis spanning the defect space
    C   D written in that basis, C : H -> C^r
    V   the transform x -> (sqrt(k_n) C T^n x)_{n <= M}
    W   (I - V*V)^(1/2)
    S   the isometry on Ran W given by S W x = W T x
and verify_model measures how far they are from an exact model of T.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exceptions import (
    InvalidArgumentError,
    ModelInvalidError,
    NotPSDError,
    PreconditionError,
    TailUncertifiableError,
)
from .kernel_analysis import Verdict, classify_np
from .operator_core import (
    ISOMETRY_TOL,
    DenseOperator,
    Direction,
    _nilpotency_index,
    class_membership,
    conjugate,
    hereditary_apply,
    hermitian_sqrt,
    operator_norm,
    probe_vectors,
    shift_section,
    spectral_radius,
    tensor_identity,
)
from .series_core import (
    TruncatedSeries,
    estimate_at_one,
    extend,
    kernel_type,
    sup_tail,
    tail_bound,
)

logger = logging.getLogger(__name__)

MAX_DEGREE = 1 << 16
CONTRACTION_TOL = 1e-8


@dataclass(frozen=True)
class Transform:
    V: np.ndarray
    M: int
    tail_bound: float


@dataclass(frozen=True)
class ModelBundle:
    T: DenseOperator
    alpha: TruncatedSeries
    k: TruncatedSeries
    D: DenseOperator
    defect_basis: np.ndarray
    C: np.ndarray
    V: np.ndarray
    W: DenseOperator
    W_basis: np.ndarray
    S: np.ndarray
    M: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return int(self.defect_basis.shape[1])

    def to_dict(self) -> dict:
        return {
            "dim": self.T.dim,
            "rank": self.rank,
            "W_rank": int(self.W_basis.shape[1]),
            "M": self.M,
            "diagnostics": self.diagnostics,
        }


#  ----------- defect ------------ #


def _range_basis(A: np.ndarray, rank_tol: float) -> np.ndarray:
    """Eigenvectors of a PSD matrix with eigenvalue above rank_tol * ||A||, as columns."""
    eigenvalues, eigenvectors = scipy.linalg.eigh((A + A.conj().T) / 2)
    scale = max(float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0, 1e-300)
    keep = eigenvalues > rank_tol * scale
    return eigenvectors[:, keep][:, ::-1]


def build_defect(
    alpha: TruncatedSeries, T: DenseOperator, rank_tol: float = 1e-8, psd_tol: float = 1e-10
) -> tuple[DenseOperator, np.ndarray]:
    """
    D = alpha(T*, T)^(1/2) and an orthonormal basis of its range
    """
    result = hereditary_apply(alpha, T)
    # eigenvalues at or below psd_tol * ||alpha(T*, T)|| count as zero
    dust = psd_tol * operator_norm(result.value)
    D = hermitian_sqrt(result.value, psd_tol, floor=dust)
    if not np.any(D.entries):
        return D, np.zeros((T.dim, 0), dtype=complex)
    return D, _range_basis(D.entries, rank_tol)


def defect_map(D: DenseOperator, basis: np.ndarray) -> np.ndarray:
    """C = basis* D, so that ||C x|| = ||D x||."""
    return basis.conj().T @ D.entries


#  ----------- transform ------------ #


def _coefficients(k: TruncatedSeries, degree: int) -> np.ndarray:
    if degree <= k.degree:
        return k.coeffs[: degree + 1]
    if not k.generator.is_closed_form:
        raise TailUncertifiableError(f"k has {k.trunc_len} coefficients and no closed form to reach degree {degree}")
    return extend(k, degree).coeffs


def _operator_tail(k: TruncatedSeries, T: DenseOperator, M: int) -> float | None:
    """
    Certified bound on sum_{n > M} |k_n| ||T^n||^2, None when no bound is available
    """
    if T.blocks:
        parts = [_operator_tail(k, block, M) for block in T.blocks]
        return None if any(p is None for p in parts) else math.fsum(parts)

    index = _nilpotency_index(T.matrix)
    if index is not None:
        if M >= index - 1:
            return 0.0
        coeffs = _coefficients(k, index - 1)
        powers = [np.linalg.matrix_power(T.entries, n) for n in range(M + 1, index)]
        return math.fsum(abs(coeffs[n]) * operator_norm(P) ** 2 for n, P in zip(range(M + 1, index), powers))

    entries = T.entries
    if np.max(np.abs(entries.conj().T @ entries - np.eye(T.dim))) <= ISOMETRY_TOL:
        return tail_bound(k, M, 1.0)

    if spectral_radius(T) < 1.0:
        norms = [1.0]
        current = np.eye(T.dim, dtype=complex)
        while norms[-1] >= 1.0 or len(norms) == 1:
            if len(norms) > MAX_DEGREE:
                return None
            current = current @ entries
            norms.append(operator_norm(current))
        p = len(norms) - 1
        q = norms[-1]
        c = max(norms[:p])
        later = sup_tail(k, M)
        if later is None:
            return None
        if later == 0.0:
            return 0.0
        head = operator_norm(np.linalg.matrix_power(entries, M + 1)) ** 2
        return later * head * c * c * p / (1.0 - q * q)
    return None


def _transform_tail(C: np.ndarray, k: TruncatedSeries, T: DenseOperator, M: int) -> float | None:
    """
    Bound on sum_{n > M} k_n ||C T^n||^2. Summands of a direct sum on which C vanishes are skipped.
    """
    if not C.size or not np.any(C):
        return 0.0
    if not T.blocks:
        operator_tail = _operator_tail(k, T, M)
        return None if operator_tail is None else operator_norm(C) ** 2 * operator_tail
    seen = []
    start = 0
    for block in T.blocks:
        C_block = C[:, start : start + block.dim]
        start += block.dim
        if np.any(C_block):
            seen.append((operator_norm(C_block) ** 2, block))
    tails = []
    for weight, block in seen:
        operator_tail = _operator_tail(k, block, M)
        if operator_tail is None:
            return None
        tails.append(weight * operator_tail)
    # ||sum_i C_i T_i^n||^2 <= (number of summands) * sum_i ||C_i||^2 ||T_i^n||^2
    return len(seen) * math.fsum(tails)


def _default_degree(C: np.ndarray, k: TruncatedSeries, T: DenseOperator, target: float) -> tuple[int, float]:
    """Smallest M (doubling, then bisection) whose transform tail is at most target."""
    index = _nilpotency_index(T.matrix)
    if index is not None:
        return max(index - 1, 1), 0.0
    low, high = 0, 1
    bound = _transform_tail(C, k, T, high)
    while bound is None or bound > target:
        if bound is None:
            raise TailUncertifiableError(f"no certified bound on sum k_n ||C T^n||^2 for {T}")
        if high >= MAX_DEGREE:
            raise TailUncertifiableError(f"tail still {bound:.3e} at degree {high}", witness=bound)
        low, high = high, 2 * high
        bound = _transform_tail(C, k, T, high)
    while high - low > 1:
        mid = (low + high) // 2
        mid_bound = _transform_tail(C, k, T, mid)
        if mid_bound is not None and mid_bound <= target:
            high, bound = mid, mid_bound
        else:
            low = mid
    return high, bound


def build_transform(
    C: np.ndarray, k: TruncatedSeries, T: DenseOperator, M: int | None = None, tol: float = 1e-8
) -> Transform:
    """
    V with block rows sqrt(k_n) C T^n for 0 <= n <= M. Without an explicit M the degree is
    the nilpotency index of T, else the smallest M with certified tail <= tol / 10.
    """
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    if C.shape[1] != T.dim:
        raise InvalidArgumentError(f"C has {C.shape[1]} columns, T acts on dimension {T.dim}")
    if M is None:
        M, tail = _default_degree(C, k, T, tol / 10.0)
        logger.info("transform degree M=%d chosen for %s", M, T)
    else:
        if M < 1:
            raise InvalidArgumentError(f"degree M must be at least 1, got {M}")
        tail = _transform_tail(C, k, T, M)
        if tail is None:
            raise TailUncertifiableError(f"no certified tail bound for degree {M} on {T}")
    if tail > tol:
        raise TailUncertifiableError(f"degree {M} leaves tail {tail:.3e} above {tol}", witness=tail)

    coeffs = _coefficients(k, M)
    if np.any(coeffs < 0):
        raise InvalidArgumentError("k must have nonnegative coefficients to build the transform")
    rows = []
    current = C
    for n in range(M + 1):
        rows.append(math.sqrt(coeffs[n]) * current)
        current = np.asarray(current @ T.matrix)
    return Transform(np.vstack(rows), M, float(tail))


#  ----------- contraction, complement, isometry ------------ #


def verify_np_contraction(
    alpha: TruncatedSeries, T: DenseOperator, V: np.ndarray, tol: float = CONTRACTION_TOL
) -> dict:
    """
    ||V_D|| <= 1 for NP kernels and T in C_alpha^{w,+}; refuses when either precondition fails
    """
    np_report = classify_np(alpha)
    if np_report.verdict is not Verdict.HOLDS:
        raise PreconditionError("alpha is not of Nevanlinna-Pick type", witness=np_report.to_dict())
    membership = class_membership(alpha, T, probe_vectors(T.dim, 0, seed=0))
    if not membership.in_Cw_plus.is_positive:
        raise PreconditionError("T is not in C_alpha^{w,+}", witness=membership.to_dict())
    excess = max(0.0, operator_norm(V) - 1.0)
    return {"contraction_excess": excess, "passes": excess <= tol, "tol": tol}


def build_W_S(
    V: np.ndarray, T: DenseOperator, tol: float = 1e-8, rank_tol: float = 1e-8
) -> tuple[DenseOperator, np.ndarray, np.ndarray, dict]:
    """
    W = (I - V*V)^(1/2), an orthonormal basis Q of Ran W and the matrix S_Q of the isometry
    S W x = W T x in that basis, fitted by least squares over x = e_0..e_{d-1}.
    Returns (W, S_Q, Q, residuals).
    """
    d = T.dim
    V_norm = operator_norm(V) if V.size else 0.0
    if V_norm > 1.0 + tol:
        raise PreconditionError(f"||V|| = {V_norm:.12g} exceeds 1 + {tol}", witness=V_norm)
    G = np.eye(d) - (V.conj().T @ V if V.size else 0.0)
    G_norm = operator_norm(G)
    W = hermitian_sqrt(G, tol / max(G_norm, tol), floor=rank_tol)
    Q = _range_basis(W.entries, rank_tol) if G_norm > rank_tol else np.zeros((d, 0), dtype=complex)

    WT = W.entries @ T.entries
    column_gap = np.abs(np.linalg.norm(W.entries, axis=0) - np.linalg.norm(WT, axis=0))
    norm_identity = operator_norm(T.entries.conj().T @ G @ T.entries - G)
    residuals = {
        "norm_gap": float(np.max(column_gap)),
        "norm_identity": norm_identity,
        "isometry": 0.0,
        "fit": 0.0,
    }
    w = Q.shape[1]
    if w == 0:
        S = np.zeros((0, 0), dtype=complex)
    else:
        lhs = Q.conj().T @ W.entries
        rhs = Q.conj().T @ WT
        solution, *_ = scipy.linalg.lstsq(lhs.T, rhs.T)
        S = solution.T
        residuals["isometry"] = operator_norm(S.conj().T @ S - np.eye(w))
        residuals["fit"] = operator_norm(S @ lhs - rhs)
    welldef = max(residuals.values())
    residuals["S_welldef_residual"] = welldef
    if welldef > tol:
        raise ModelInvalidError(
            f"S is not a well-defined isometry on Ran W (residual {welldef:.3e} > {tol})", witness=residuals
        )
    return W, S, Q, residuals


#  ----------- verification ------------ #


def verify_model(T: DenseOperator, bundle: ModelBundle, B_section: DenseOperator | None = None) -> dict:
    """
    Residuals of the model equations:
        intertwine   ||(B_k (x) I_r) V - V T||
        isometry     ||V*V + W*W - I||
        S            ||S W - W T|| on Ran W
    """
    r = bundle.C.shape[0]
    V = bundle.V
    d = T.dim
    if B_section is None:
        B_section = shift_section(extend(bundle.k, bundle.M), Direction.BACKWARD, bundle.M + 1).operator
    lifted = tensor_identity(B_section, r) if r else None
    intertwine = operator_norm(lifted.matrix @ V - V @ T.entries) if lifted is not None and V.size else 0.0
    W = bundle.W.entries
    gram = (V.conj().T @ V if V.size else np.zeros((d, d))) + W.conj().T @ W
    isometry = operator_norm(gram - np.eye(d))
    Q = bundle.W_basis
    if Q.shape[1]:
        S_full = Q @ bundle.S @ Q.conj().T
        s_residual = operator_norm(S_full @ W - W @ T.entries)
    else:
        s_residual = operator_norm(W @ T.entries)
    return {"intertwine_residual": intertwine, "isometry_residual": isometry, "S_residual": s_residual}


def verify_relation_DCW(
    alpha: TruncatedSeries, T: DenseOperator, C: np.ndarray, W: DenseOperator, probe_vectors: np.ndarray
) -> dict:
    """
    max over probes of | ||Dx||^2 - ||Cx||^2 - alpha(1) ||Wx||^2 | / ||x||^2
    """
    probes = np.atleast_2d(np.asarray(probe_vectors, dtype=complex))
    value = hereditary_apply(alpha, T).value.entries
    at_one = estimate_at_one(alpha)
    worst = 0.0
    for x in probes:
        norm_sq = float(np.real(np.vdot(x, x)))
        if norm_sq == 0:
            continue
        d_sq = float(np.real(np.vdot(x, value @ x)))
        c_sq = float(np.linalg.norm(C @ x) ** 2) if C.size else 0.0
        w_sq = float(np.linalg.norm(W.entries @ x) ** 2)
        worst = max(worst, abs(d_sq - c_sq - at_one.value * w_sq) / norm_sq)
    return {"residual": worst, "alpha_at_one": at_one.value, "probes": int(probes.shape[0])}


def minimality_check(bundle: ModelBundle, rank_tol: float = 1e-8) -> dict:
    """
    (i) C has dense range in its target space, (ii) W restricted to Ran W has full rank
    """

    def rank(matrix: np.ndarray) -> int:
        if matrix.size == 0:
            return 0
        singular = scipy.linalg.svdvals(matrix)
        return int(np.sum(singular > rank_tol * max(float(singular[0]), 1e-300)))

    C = bundle.C
    target = C.shape[0]
    c_rank = rank(C)
    Q = bundle.W_basis
    w_rank = rank(Q.conj().T @ bundle.W.entries) if Q.shape[1] else 0
    c_ok = c_rank == target and (target == 0 or np.any(C))
    w_ok = w_rank == Q.shape[1]
    return {
        "range_C": Verdict.HOLDS.value if c_ok else Verdict.FAILS.value,
        "range_W": Verdict.HOLDS.value if w_ok else Verdict.FAILS.value,
        "minimal": bool(c_ok and w_ok),
        "C_rank": c_rank,
        "C_target_dim": target,
        "W_rank": w_rank,
        "W_basis_dim": int(Q.shape[1]),
    }


#  ----------- pipelines ------------ #


def assemble_bundle(
    T: DenseOperator,
    alpha: TruncatedSeries,
    k: TruncatedSeries,
    D: DenseOperator,
    basis: np.ndarray,
    C: np.ndarray,
    M: int | None,
    tol: float,
    rank_tol: float,
) -> ModelBundle:
    transform = build_transform(C, k, T, M, tol)
    W, S, Q, residuals = build_W_S(transform.V, T, tol, rank_tol)
    bundle = ModelBundle(T, alpha, k, D, basis, C, transform.V, W, Q, S, transform.M)
    checks = verify_model(T, bundle)
    diagnostics = {
        "isometry_residual": checks["isometry_residual"],
        "intertwine_residual": checks["intertwine_residual"],
        "S_residual": checks["S_residual"],
        "S_welldef_residual": residuals["S_welldef_residual"],
        "contraction_excess": max(0.0, (operator_norm(transform.V) if transform.V.size else 0.0) - 1.0),
        "truncation_tail_bound": transform.tail_bound,
        "type": kernel_type(estimate_at_one(alpha)).value,
        "M": transform.M,
        "rank": int(basis.shape[1]),
        "W_rank": int(Q.shape[1]),
        "is_part": T.is_part,
    }
    return ModelBundle(T, alpha, k, D, basis, C, transform.V, W, Q, S, transform.M, diagnostics)


def build_model_bundle(
    alpha: TruncatedSeries,
    k: TruncatedSeries,
    T: DenseOperator,
    M: int | None = None,
    tol: float = 1e-8,
    rank_tol: float = 1e-8,
    psd_tol: float = 1e-10,
) -> ModelBundle:
    """
    Defect, transform V_D, complement W and isometry S for T, with diagnostics.
    An operator outside C_alpha^{w,+} is reported as model-invalid.
    """
    try:
        D, basis = build_defect(alpha, T, rank_tol, psd_tol)
    except NotPSDError as exc:
        raise ModelInvalidError(
            f"alpha(T*, T) is not positive semidefinite: {exc.message}", witness=exc.min_eigenvalue
        ) from exc
    C = defect_map(D, basis)
    return assemble_bundle(T, alpha, k, D, basis, C, M, tol, rank_tol)


def trivial_unitary_model(alpha: TruncatedSeries, k: TruncatedSeries, T: DenseOperator) -> ModelBundle:
    """C = 0, V = 0, W = I, S = T: a model of any unitary T when alpha(1) > 0."""
    d = T.dim
    at_one = estimate_at_one(alpha)
    D = DenseOperator(math.sqrt(max(at_one.value, 0.0)) * np.eye(d), T.labels)
    identity = DenseOperator(np.eye(d), T.labels)
    empty = np.zeros((0, d), dtype=complex)
    parts = (T, alpha, k, D, np.zeros((d, 0)), empty, empty, identity, np.eye(d), T.entries.copy(), 0)
    checks = verify_model(T, ModelBundle(*parts), B_section=DenseOperator(np.zeros((1, 1))))
    diagnostics = {**checks, "type": kernel_type(at_one).value, "M": 0, "rank": 0, "W_rank": d}
    return ModelBundle(*parts, diagnostics)


def two_model_witness(
    alpha: TruncatedSeries, k: TruncatedSeries, T: DenseOperator, tol: float = 1e-6
) -> dict:
    """
    For unitary T and subcritical alpha, the trivial model and the defect model are both
    verified models of T and differ; uniqueness of minimal models is not claimed here.
    """
    at_one = estimate_at_one(alpha)
    if not at_one.value > at_one.tail_bound:
        raise PreconditionError("the two-model witness needs a subcritical kernel", witness=at_one.value)
    entries = T.entries
    if np.max(np.abs(entries.conj().T @ entries - np.eye(T.dim))) > ISOMETRY_TOL:
        raise PreconditionError("the two-model witness needs a unitary operator")
    trivial = trivial_unitary_model(alpha, k, T)
    defect = build_model_bundle(alpha, k, T, tol=tol)
    residual_keys = ("isometry_residual", "intertwine_residual", "S_residual")
    trivial_ok = all(trivial.diagnostics[key] <= tol for key in residual_keys)
    defect_ok = all(defect.diagnostics[key] <= math.sqrt(tol) for key in residual_keys)
    return {
        "trivial": trivial.diagnostics,
        "defect": defect.diagnostics,
        "both_verified": bool(trivial_ok and defect_ok),
        "distinct": bool(defect.rank > 0),
    }


def unitary_invariance(
    alpha: TruncatedSeries, k: TruncatedSeries, T: DenseOperator, U: np.ndarray, **kwargs
) -> dict:
    """Largest change of the scalar diagnostics when T is replaced by U T U*."""
    base = build_model_bundle(alpha, k, T, **kwargs).diagnostics
    moved = build_model_bundle(alpha, k, conjugate(T, U), **kwargs).diagnostics
    changes = {
        key: abs(base[key] - moved[key])
        for key, value in base.items()
        if isinstance(value, float) and isinstance(moved.get(key), float)
    }
    return {"max_change": max(changes.values()) if changes else 0.0, "changes": changes}
