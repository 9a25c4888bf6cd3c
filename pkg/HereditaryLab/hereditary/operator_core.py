"""
Exemplar operators and the hereditary functional calculus

Operators are finite complex matrices in an orthonormal basis. Weighted shifts
on a space with ||t^n||^2 = kappa_n are realized in the orthonormal basis
t^n / sqrt(kappa_n), so adjoints are conjugate transposes throughout.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from pathlib import Path

import numpy as np
import pandas as pd
import scipy.linalg
import scipy.sparse as sps
from scipy.stats import unitary_group

from .exceptions import (
    ConvergenceNotCertifiedError,
    InvalidArgumentError,
    NotPSDError,
    UnboundedShiftError,
)
from .kernel_analysis import Verdict, _block_ratio, _sup_trend, _table
from .series_core import (
    NP_SLACK,
    UNIT_ROUNDOFF,
    GeneratorKind,
    TruncatedSeries,
    estimate_at_one,
    extend,
    sup_tail,
    tail_bound,
    wiener_norm,
)

logger = logging.getLogger(__name__)

NILPOTENT_THRESHOLD = 1e-300
HERMITIAN_TOL = 1e-10
ISOMETRY_TOL = 1e-12
EIG_MAX_DIM = 512
GELFAND_TOL = 1e-6
GELFAND_MIN_SQUARINGS = 24
GELFAND_MAX_SQUARINGS = 60
DEFAULT_TOL = 1e-12
DEFAULT_N_CAP = 100_000


class Direction(str, Enum):
    BACKWARD = "Backward"
    FORWARD = "Forward"


class Policy(str, Enum):
    DIRECT_SUM = "DirectSum"
    EXACT_NILPOTENT = "ExactNilpotent"
    EXACT_POLYNOMIAL = "ExactPolynomial"
    ISOMETRIC = "Isometric"
    GEOMETRIC_TAIL = "GeometricTail"
    TRUNCATED = "Truncated"

    @property
    def is_exact(self) -> bool:
        return self is not Policy.TRUNCATED


@dataclass(frozen=True)
class DenseOperator:
    """
    A d x d complex matrix. `matrix` may be a scipy.sparse matrix, which is
    kept for matrix-vector products; `entries` is always the dense form.
    `is_part` is False for compressions that are not restrictions to an
    invariant subspace. `blocks` is set for block-diagonal direct sums.
    """

    matrix: np.ndarray | sps.spmatrix
    labels: str | None = None
    is_part: bool = True
    blocks: tuple["DenseOperator", ...] = ()

    def __post_init__(self) -> None:
        shape = self.matrix.shape
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] < 1:
            raise InvalidArgumentError(f"an operator needs a square nonempty matrix, got shape {shape}")
        if sps.issparse(self.matrix):
            data = self.matrix.data
        else:
            data = np.asarray(self.matrix)
            object.__setattr__(self, "matrix", np.array(data, dtype=complex))
        if not np.all(np.isfinite(data)):
            raise InvalidArgumentError("operator entries must be finite")

    @cached_property
    def entries(self) -> np.ndarray:
        if sps.issparse(self.matrix):
            dense = np.asarray(self.matrix.toarray(), dtype=complex)
        else:
            dense = self.matrix.copy()
        dense.setflags(write=False)
        return dense

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_sparse(self) -> bool:
        return sps.issparse(self.matrix)

    def adjoint(self) -> "DenseOperator":
        return DenseOperator(self.entries.conj().T, self.labels, self.is_part)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.matrix @ x)

    def __matmul__(self, other: "DenseOperator") -> "DenseOperator":
        return DenseOperator(self.entries @ other.entries, self.labels, self.is_part and other.is_part)

    def __str__(self) -> str:
        return f"DenseOperator(d={self.dim}, labels={self.labels!r}, part={self.is_part})"


@dataclass(frozen=True)
class ShiftSection:
    """
    Leading d x d section of a weighted shift with ||t^n||^2 = kappa_n.
    Backward sections are parts (restrictions to span{e_0..e_{d-1}}, which the
    backward shift leaves invariant); forward sections are compressions only.
    """

    operator: DenseOperator
    kappa: TruncatedSeries
    direction: Direction
    euclidean: bool = True

    @property
    def dim(self) -> int:
        return self.operator.dim

    @property
    def is_part(self) -> bool:
        return self.direction is Direction.BACKWARD

    def weighted_matrix(self) -> np.ndarray:
        """The same operator in the monomial basis t^n, whose Gram matrix is diag(kappa)."""
        root = np.sqrt(self.kappa.coeffs[: self.dim])
        return self.operator.entries * root[None, :] / root[:, None]

    def metric(self) -> np.ndarray:
        return np.diag(self.kappa.coeffs[: self.dim]).astype(complex)


@dataclass(frozen=True)
class PolicyUsed:
    name: Policy
    terms: int
    tail_bound: float = 0.0
    rho_est: float | None = None
    warning: str | None = None
    parts: tuple["PolicyUsed", ...] = ()

    def to_dict(self) -> dict:
        described = {"name": self.name.value, "terms": self.terms, "tail_bound": self.tail_bound}
        if self.rho_est is not None:
            described["rho_est"] = self.rho_est
        if self.warning:
            described["warning"] = self.warning
        if self.parts:
            described["parts"] = [part.to_dict() for part in self.parts]
        return described


@dataclass(frozen=True)
class HereditaryResult:
    """
    alpha(T*, T) = sum_n alpha_n T*^n T^n with the sum of |alpha_n| T*^n T^n alongside.
    `abs_trace` records the trace of the absolute partial sums term by term.
    """

    value: DenseOperator
    abs_value: DenseOperator
    policy_used: PolicyUsed
    abs_trace: np.ndarray = field(default_factory=lambda: np.zeros(0), compare=False, repr=False)


@dataclass(frozen=True)
class MembershipReport:
    """
    Membership of an operator in the classes C_alpha^w (summable hereditary
    series) and C_alpha^{w,+} (summable with nonnegative sum).
    """

    subject: str
    in_Cw: Verdict
    in_Cw_plus: Verdict
    witness: dict
    is_part: bool = True
    trend_tables: dict[str, pd.DataFrame] = field(default_factory=dict, compare=False, repr=False)

    @property
    def sup_partial_norm(self) -> float | None:
        return self.witness.get("sup_partial_norm")

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "in_Cw": self.in_Cw.value,
            "in_Cw_plus": self.in_Cw_plus.value,
            "is_part": self.is_part,
            "witness": self.witness,
        }


#  ----------- construction ------------ #


def shift_section(kappa: TruncatedSeries, direction: Direction | str, d: int) -> ShiftSection:
    """
    Orthonormal-basis matrix of the d x d section:
        Backward: (i, i+1) entries sqrt(kappa_i / kappa_{i+1})
        Forward:  (i+1, i) entries sqrt(kappa_{i+1} / kappa_i)
    """
    direction = Direction(direction)
    if d < 1 or d > kappa.trunc_len:
        raise InvalidArgumentError(f"section dimension must lie in [1, {kappa.trunc_len}], got {d}")
    weights = kappa.coeffs[:d]
    bad = np.flatnonzero(weights <= 0)
    if bad.size:
        raise InvalidArgumentError(f"kappa_{int(bad[0])} = {weights[bad[0]]} is not positive", witness=int(bad[0]))
    if direction is Direction.BACKWARD:
        matrix = sps.diags(np.sqrt(weights[:-1] / weights[1:]), offsets=1, shape=(d, d), dtype=complex, format="csr")
        labels = f"backward shift section, orthonormal monomials e_0..e_{d - 1}"
    else:
        matrix = sps.diags(np.sqrt(weights[1:] / weights[:-1]), offsets=-1, shape=(d, d), dtype=complex, format="csr")
        labels = f"forward shift compression, orthonormal monomials e_0..e_{d - 1}"
    operator = DenseOperator(matrix, labels, is_part=direction is Direction.BACKWARD)
    return ShiftSection(operator, kappa, direction)


def direct_sum(*operators: DenseOperator) -> DenseOperator:
    if not operators:
        raise InvalidArgumentError("a direct sum needs at least one summand")
    matrix = scipy.linalg.block_diag(*(op.entries for op in operators))
    labels = " (+) ".join(op.labels or f"d={op.dim}" for op in operators)
    return DenseOperator(matrix, labels, all(op.is_part for op in operators), tuple(operators))


def tensor_identity(T: DenseOperator, r: int) -> DenseOperator:
    """T (x) I_r, with T's basis index as the slow index."""
    if r < 1:
        raise InvalidArgumentError(f"identity dimension must be positive, got {r}")
    if T.is_sparse:
        matrix = sps.kron(T.matrix, sps.identity(r, dtype=complex), format="csr")
    else:
        matrix = np.kron(T.entries, np.eye(r))
    return DenseOperator(matrix, f"{T.labels or 'T'} (x) I_{r}", T.is_part)


def conjugate(T: DenseOperator, U: np.ndarray) -> DenseOperator:
    """U T U*"""
    U = np.asarray(U, dtype=complex)
    return DenseOperator(U @ T.entries @ U.conj().T, T.labels, T.is_part)


def power(T: DenseOperator, m: int) -> DenseOperator:
    if m < 0:
        raise InvalidArgumentError(f"power must be nonnegative, got {m}")
    return DenseOperator(np.linalg.matrix_power(T.entries, m), T.labels, T.is_part)


def random_unitary(d: int, seed: int) -> np.ndarray:
    return unitary_group.rvs(d, random_state=np.random.default_rng(seed)) if d > 1 else np.ones((1, 1), complex)


def diagonal_unitary(phases) -> DenseOperator:
    phases = np.asarray(phases, dtype=float)
    return DenseOperator(np.diag(np.exp(1j * phases)), "diagonal unitary")


def probe_vectors(d: int, count: int, seed: int, include_basis: bool = True) -> np.ndarray:
    """
    Unit vectors as rows: the standard basis (when asked) followed by `count`
    seeded complex Gaussian directions.
    """
    rng = np.random.default_rng(seed)
    rows = [np.eye(d, dtype=complex)] if include_basis else []
    if count:
        random = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
        rows.append(random / np.linalg.norm(random, axis=1, keepdims=True))
    return np.vstack(rows) if rows else np.zeros((0, d), dtype=complex)


#  ----------- matrix files ------------ #


def _token(z: complex) -> str:
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}j"


def write_matrix_csv(T: DenseOperator, path: str | Path) -> Path:
    """Complex entries as 're+imj' tokens, one matrix row per line."""
    path = Path(path)
    df = pd.DataFrame([[_token(complex(z)) for z in row] for row in T.entries])
    df.to_csv(path, header=False, index=False)
    return path


def read_matrix_csv(path: str | Path, labels: str | None = None) -> DenseOperator:
    try:
        df = pd.read_csv(path, header=None, dtype=str, skipinitialspace=True)
        entries = np.array([[complex(token.replace(" ", "")) for token in row] for row in df.to_numpy()])
    except (OSError, ValueError, TypeError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise InvalidArgumentError(f"cannot read matrix file {path}: {exc}") from exc
    return DenseOperator(entries, labels or Path(path).name)


#  ----------- spectral quantities ------------ #


def operator_norm(T: DenseOperator | np.ndarray) -> float:
    entries = T.entries if isinstance(T, DenseOperator) else np.asarray(T)
    if entries.size == 0 or not np.any(entries):
        return 0.0
    return float(np.linalg.norm(entries, 2))


def spectral_radius(T: DenseOperator, method: str = "auto") -> float:
    """
    max |eigenvalue| for d <= 512 (or method='eig'); otherwise the Gelfand
    limit ||T^(2^k)||^(2^-k) computed by normalized repeated squaring.
    """
    if method not in ("auto", "eig", "gelfand"):
        raise InvalidArgumentError(f"unknown spectral radius method {method!r}")
    if method == "eig" or (method == "auto" and T.dim <= EIG_MAX_DIM):
        return float(np.max(np.abs(np.linalg.eigvals(T.entries))))

    current = T.entries.copy()
    scale = np.linalg.norm(current, "fro")
    if scale == 0:
        return 0.0
    current /= scale
    log_estimate = math.log(scale)
    estimate = scale
    for k in range(1, GELFAND_MAX_SQUARINGS + 1):
        current = current @ current
        nrm = np.linalg.norm(current, "fro")
        if nrm == 0:
            return 0.0
        current /= nrm
        # log ||T^(2^k)|| = 2 log ||T^(2^(k-1))|| + log(nrm) in normalized form
        log_estimate = log_estimate + math.log(nrm) / 2**k
        previous, estimate = estimate, math.exp(log_estimate)
        if k >= GELFAND_MIN_SQUARINGS and abs(estimate - previous) <= GELFAND_TOL * max(estimate, 1e-300):
            break
    else:
        logger.warning("Gelfand iteration did not settle after %d squarings", GELFAND_MAX_SQUARINGS)
    return estimate


def _hermitian_input(A: DenseOperator | np.ndarray) -> np.ndarray:
    entries = A.entries if isinstance(A, DenseOperator) else np.asarray(A, dtype=complex)
    scale = max(operator_norm(entries), 1e-300)
    asymmetry = float(np.max(np.abs(entries - entries.conj().T))) if entries.size else 0.0
    if asymmetry > HERMITIAN_TOL * scale:
        raise InvalidArgumentError(f"matrix is not Hermitian (asymmetry {asymmetry:.3e})", witness=asymmetry)
    return (entries + entries.conj().T) / 2


def min_eigenvalue(A: DenseOperator | np.ndarray) -> float:
    return float(np.linalg.eigvalsh(_hermitian_input(A))[0])


def is_psd(A: DenseOperator | np.ndarray, tol: float = 1e-10) -> bool:
    entries = _hermitian_input(A)
    return min_eigenvalue(entries) >= -tol * max(operator_norm(entries), 1e-300)


def hermitian_sqrt(A: DenseOperator | np.ndarray, tol: float = 1e-10, floor: float = 0.0) -> DenseOperator:
    """
    Nonnegative square root by eigendecomposition; eigenvalues in [-tol ||A||, 0) are clipped to 0,
    and so are eigenvalues at or below the absolute `floor`.
    """
    entries = _hermitian_input(A)
    eigenvalues, eigenvectors = scipy.linalg.eigh(entries)
    lowest = -tol * max(float(np.max(np.abs(eigenvalues))), 1e-300)
    if eigenvalues[0] < lowest:
        raise NotPSDError(f"most negative eigenvalue {eigenvalues[0]:.3e} is below {lowest:.3e}", float(eigenvalues[0]))
    root = np.sqrt(np.where(eigenvalues > floor, eigenvalues, 0.0))
    labels = A.labels if isinstance(A, DenseOperator) else None
    return DenseOperator((eigenvectors * root) @ eigenvectors.conj().T, labels)


#  ----------- hereditary functional calculus ------------ #


def _frobenius(matrix) -> float:
    data = matrix.data if sps.issparse(matrix) else matrix
    return float(np.sqrt(np.sum(np.abs(data) ** 2)))


def _identity_like(matrix):
    d = matrix.shape[0]
    return sps.identity(d, dtype=complex, format="csr") if sps.issparse(matrix) else np.eye(d, dtype=complex)


def _gram(current) -> np.ndarray:
    gram = current.conj().T @ current
    return gram.toarray() if sps.issparse(gram) else gram


def _nilpotency_index(matrix) -> int | None:
    """Smallest m <= d with ||T^m|| <= 1e-300, or None."""
    current = _identity_like(matrix)
    for m in range(1, matrix.shape[0] + 1):
        current = current @ matrix
        if _frobenius(current) <= NILPOTENT_THRESHOLD:
            return m
    return None


def _finite_support(alpha: TruncatedSeries) -> int | None:
    """Degree of alpha when it is certified to be a polynomial."""
    generator = alpha.generator
    if generator.kind in (GeneratorKind.POLYNOMIAL, GeneratorKind.FILE_LIST):
        nonzero = np.flatnonzero(alpha.coeffs)
        return int(nonzero[-1]) if nonzero.size else 0
    if generator.kind is GeneratorKind.BINOMIAL:
        exponent = generator.exponent
        if exponent >= 0 and float(exponent).is_integer():
            return int(exponent)
    return None


def _accumulate(coeffs: np.ndarray, matrix, terms: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = matrix.shape[0]
    value = np.zeros((d, d), dtype=complex)
    abs_value = np.zeros((d, d), dtype=complex)
    trace = np.zeros(terms)
    current = _identity_like(matrix)
    for n in range(terms):
        gram = _gram(current)
        value += coeffs[n] * gram
        abs_value += abs(coeffs[n]) * gram
        trace[n] = float(np.real(np.trace(abs_value)))
        current = current @ matrix
    return value, abs_value, trace


def _hermitian_result(value, abs_value, labels, policy, trace) -> HereditaryResult:
    scale = max(1.0, float(np.max(np.abs(value))) if value.size else 1.0)
    asymmetry = float(np.max(np.abs(value - value.conj().T))) if value.size else 0.0
    assert asymmetry <= 1e-12 * scale, f"hereditary sum lost hermiticity ({asymmetry:.3e})"
    value = (value + value.conj().T) / 2
    abs_value = (abs_value + abs_value.conj().T) / 2
    return HereditaryResult(DenseOperator(value, labels), DenseOperator(abs_value, labels), policy, trace)


def _coefficients_up_to(alpha: TruncatedSeries, degree: int) -> np.ndarray | None:
    if degree <= alpha.degree:
        return alpha.coeffs[: degree + 1]
    if alpha.generator.is_closed_form:
        return extend(alpha, degree).coeffs
    return None


def hereditary_apply(
    alpha: TruncatedSeries, T: DenseOperator, tol: float = DEFAULT_TOL, n_cap: int = DEFAULT_N_CAP
) -> HereditaryResult:
    """
    sum_n alpha_n T*^n T^n under the first applicable policy:
    direct sums blockwise, nilpotent T exactly, polynomial alpha exactly,
    isometric T as alpha(1) I, spectral radius < 1 with a certified geometric
    tail, otherwise a warned truncation at min(n_cap, stored terms).
    """
    if not tol > 0 or n_cap < 1:
        raise InvalidArgumentError(f"need tol > 0 and n_cap >= 1, got tol={tol}, n_cap={n_cap}")
    entries = T.entries
    d = T.dim

    if T.blocks:
        results = [hereditary_apply(alpha, block, tol, n_cap) for block in T.blocks]
        value = scipy.linalg.block_diag(*(r.value.entries for r in results))
        abs_value = scipy.linalg.block_diag(*(r.abs_value.entries for r in results))
        parts = tuple(r.policy_used for r in results)
        policy = PolicyUsed(
            Policy.DIRECT_SUM,
            terms=max(p.terms for p in parts),
            tail_bound=sum(p.tail_bound for p in parts),
            parts=parts,
        )
        return _hermitian_result(value, abs_value, T.labels, policy, np.zeros(0))

    index = _nilpotency_index(T.matrix)
    if index is not None:
        coeffs = _coefficients_up_to(alpha, index - 1)
        if coeffs is None:
            warning = f"alpha has {alpha.trunc_len} stored terms but T has nilpotency index {index}; sum truncated"
            return _truncated(alpha.coeffs, T, 0.0, alpha.trunc_len, warning)
        value, abs_value, trace = _accumulate(coeffs, T.matrix, index)
        return _hermitian_result(value, abs_value, T.labels, PolicyUsed(Policy.EXACT_NILPOTENT, index), trace)

    degree = _finite_support(alpha)
    if degree is not None:
        coeffs = extend(alpha, degree).coeffs
        value, abs_value, trace = _accumulate(coeffs, T.matrix, degree + 1)
        return _hermitian_result(value, abs_value, T.labels, PolicyUsed(Policy.EXACT_POLYNOMIAL, degree + 1), trace)

    if np.max(np.abs(entries.conj().T @ entries - np.eye(d))) <= ISOMETRY_TOL:
        at_one = estimate_at_one(alpha)
        norm = wiener_norm(alpha)
        if at_one.converged:
            abs_total = norm.value + (norm.tail_bound if norm.tail_known else at_one.tail_bound)
            identity = np.eye(d, dtype=complex)
            policy = PolicyUsed(Policy.ISOMETRIC, alpha.trunc_len, tail_bound=at_one.tail_bound)
            return _hermitian_result(at_one.value * identity, abs_total * identity, T.labels, policy, np.zeros(0))

    rho = spectral_radius(T)
    contracting = rho < 1.0 - 10.0 * tol
    if contracting and alpha.generator.is_closed_form:
        return _geometric_tail(alpha, T, rho, tol, n_cap)

    terms = min(n_cap, alpha.trunc_len)
    if contracting:
        warning = f"no tail bound for alpha past degree {alpha.degree}; sum truncated at {terms} terms"
    else:
        warning = f"no convergence certificate (spectral radius {rho:.6g}); sum truncated at {terms} terms"
    return _truncated(alpha.coeffs, T, rho, terms, warning)


def _truncated(coeffs: np.ndarray, T: DenseOperator, rho: float, terms: int, warning: str) -> HereditaryResult:
    logger.warning(warning)
    value, abs_value, trace = _accumulate(coeffs, T.matrix, terms)
    policy = PolicyUsed(Policy.TRUNCATED, terms, tail_bound=math.nan, rho_est=rho, warning=warning)
    return _hermitian_result(value, abs_value, T.labels, policy, trace)


def _geometric_tail(alpha: TruncatedSeries, T: DenseOperator, rho: float, tol: float, n_cap: int) -> HereditaryResult:
    """
    Stop at the first M with sup_{n>M}|alpha_n| ||T^(M+1)||^2 c^2 p / (1 - q^2) <= tol,
    where q = ||T^p|| < 1 and c = max_{i<p} ||T^i||.
    """
    entries = T.entries
    d = T.dim
    current = np.eye(d, dtype=complex)
    norms = [1.0]
    for _ in range(n_cap):
        current = current @ entries
        norms.append(operator_norm(current))
        if norms[-1] < 1.0:
            break
    else:
        message = f"no power of T below norm 1 within {n_cap} steps"
        terms = min(n_cap, alpha.trunc_len)
        value, abs_value, trace = _accumulate(alpha.coeffs, T.matrix, terms)
        policy = PolicyUsed(Policy.TRUNCATED, terms, tail_bound=math.nan, rho_est=rho, warning=message)
        raise ConvergenceNotCertifiedError(message, witness=_hermitian_result(value, abs_value, T.labels, policy, trace))
    p = len(norms) - 1
    q = norms[-1]
    c = max(norms[:p])
    factor = c * c * p / (1.0 - q * q)

    if alpha.generator.is_closed_form:
        coeffs = extend(alpha, n_cap).coeffs
        beyond = sup_tail(extend(alpha, n_cap), n_cap)
        if beyond is not None and not math.isfinite(beyond):
            beyond = None
    else:
        coeffs = alpha.coeffs
        beyond = None
    suffix_max = np.maximum.accumulate(np.abs(coeffs)[::-1])[::-1]

    value = np.zeros((d, d), dtype=complex)
    abs_value = np.zeros((d, d), dtype=complex)
    trace = []
    current = np.eye(d, dtype=complex)
    for n in range(min(n_cap, coeffs.size)):
        gram = current.conj().T @ current
        value += coeffs[n] * gram
        abs_value += abs(coeffs[n]) * gram
        trace.append(float(np.real(np.trace(abs_value))))
        current = current @ entries
        later = suffix_max[n + 1] if n + 1 < coeffs.size else 0.0
        if n + 1 >= coeffs.size or beyond is not None:
            sup_later = max(later, beyond if beyond is not None else math.inf)
            bound = sup_later * operator_norm(current) ** 2 * factor
            if bound <= tol:
                policy = PolicyUsed(Policy.GEOMETRIC_TAIL, n + 1, tail_bound=bound, rho_est=rho)
                return _hermitian_result(value, abs_value, T.labels, policy, np.array(trace))
    message = f"tail bound not below {tol} within {len(trace)} terms"
    policy = PolicyUsed(Policy.TRUNCATED, len(trace), math.nan, rho, warning=message)
    partial = _hermitian_result(value, abs_value, T.labels, policy, np.array(trace))
    raise ConvergenceNotCertifiedError(message, witness=partial)


#  ----------- class membership ------------ #


def class_membership(
    alpha: TruncatedSeries, T: DenseOperator, probe_vectors: np.ndarray, tol: float = 1e-10
) -> MembershipReport:
    """
    C_alpha^w: sum |alpha_n| ||T^n x||^2 bounded over the probes (and in norm).
    C_alpha^{w,+}: additionally alpha(T*, T) >= -tol ||alpha(T*, T)||.
    Exact policies decide both; a truncated sum only gives a trend.
    """
    probes = np.atleast_2d(np.asarray(probe_vectors, dtype=complex))
    if probes.shape[0] == 0 or probes.shape[1] != T.dim:
        raise InvalidArgumentError(f"need at least one probe vector of length {T.dim}")
    if np.max(np.abs(np.linalg.norm(probes, axis=1) - 1.0)) > 1e-10:
        raise InvalidArgumentError("probe vectors must be unit-normalized")

    try:
        result = hereditary_apply(alpha, T, tol=min(tol, DEFAULT_TOL))
    except ConvergenceNotCertifiedError as exc:
        logger.warning("membership from a partial sum: %s", exc.message)
        result = exc.witness
    value = result.value.entries
    abs_value = result.abs_value.entries
    probe_sums = np.real(np.einsum("ij,jk,ik->i", probes.conj(), abs_value, probes))
    sup_partial = operator_norm(abs_value)
    lowest = min_eigenvalue(value)
    value_norm = operator_norm(value)
    nonnegative = lowest >= -tol * max(value_norm, 1e-300)
    bounded = bool(np.isfinite(sup_partial) and np.all(np.isfinite(probe_sums)))

    policy = result.policy_used
    tables = {}
    if policy.name.is_exact:
        in_cw = Verdict.HOLDS if bounded else Verdict.FAILS
        in_cw_plus = Verdict.HOLDS if bounded and nonnegative else Verdict.FAILS
    else:
        ratio = _block_ratio(result.abs_trace) if result.abs_trace.size >= 8 else math.inf
        settling = bounded and ratio < 0.9
        in_cw = Verdict.TREND_HOLDS if settling else Verdict.TREND_FAILS
        in_cw_plus = Verdict.TREND_HOLDS if settling and nonnegative else Verdict.TREND_FAILS
        tables["abs_trace"] = _table(np.arange(result.abs_trace.size), result.abs_trace)

    witness = {
        "policy": policy.to_dict(),
        "sup_partial_norm": sup_partial,
        "min_eigenvalue": lowest,
        "value_norm": value_norm,
        "probe_sums_max": float(np.max(probe_sums)),
        "probes": int(probes.shape[0]),
    }
    return MembershipReport("operator", in_cw, in_cw_plus, witness, T.is_part, tables)


def _product_slack(abs_products: np.ndarray) -> np.ndarray:
    n = np.arange(abs_products.size)
    return NP_SLACK + 4.0 * (n + 1) * UNIT_ROUNDOFF * abs_products


def _shift_bound_trend(kappa: np.ndarray, direction: Direction) -> dict:
    """
    ||B||^2 = sup kappa_n / kappa_{n+1}, ||F||^2 = sup kappa_{n+1} / kappa_n
    """
    ratio = kappa[:-1] / kappa[1:] if direction is Direction.BACKWARD else kappa[1:] / kappa[:-1]
    trend = _sup_trend(ratio)
    if trend["status"] == "unstable":
        raise UnboundedShiftError(
            f"{direction.value.lower()} shift weight ratios keep growing (sup {trend['sup']:.6g} at {trend['argsup']})",
            witness=trend,
        )
    return trend


def shift_membership_backward(alpha: TruncatedSeries, kappa: TruncatedSeries) -> MembershipReport:
    """
    Backward shift on the weights kappa:
    C_alpha^w iff sup_m (|alpha| * kappa)_m / kappa_m < inf,
    C_alpha^{w,+} iff alpha * kappa has nonnegative coefficients.
    """
    N = min(alpha.degree, kappa.degree)
    a = alpha.coeffs[: N + 1]
    weights = kappa.coeffs[: N + 1]
    bad = np.flatnonzero(weights <= 0)
    if bad.size:
        raise InvalidArgumentError(f"kappa_{int(bad[0])} is not positive", witness=int(bad[0]))
    shift_trend = _shift_bound_trend(weights, Direction.BACKWARD)

    gamma = np.convolve(np.abs(a), weights)[: N + 1]
    product = np.convolve(a, weights)[: N + 1]
    gamma_trend = _sup_trend(gamma / weights)
    slack = _product_slack(gamma)
    negative = np.flatnonzero(product < -slack)

    in_cw = Verdict.TREND_HOLDS if gamma_trend["status"] != "unstable" else Verdict.TREND_FAILS
    in_cw_plus = Verdict.FAILS if negative.size else Verdict.HOLDS
    witness = {
        "N": N,
        "shift_norm_squared": shift_trend,
        "gamma_ratio": gamma_trend,
        "min_coefficient": float(np.min(product)),
        "first_negative": int(negative[0]) if negative.size else None,
    }
    tables = {"gamma_ratio": _table(np.arange(N + 1), gamma / weights), "alpha_kappa": _table(np.arange(N + 1), product)}
    return MembershipReport("backward-shift", in_cw, in_cw_plus, witness, True, tables)


def shift_membership_forward(
    alpha: TruncatedSeries, kappa: TruncatedSeries, m_max: int | None = None
) -> MembershipReport:
    """
    Forward shift on the weights kappa: sign of alpha(nabla) kappa_m = sum_n alpha_n kappa_{m+n}
    for m <= m_max, with certified tails when both generators allow it, and the sup of
    (|alpha|(nabla) kappa)_m / kappa_m.
    """
    Na = alpha.degree
    m_max = kappa.degree // 2 if m_max is None else m_max
    if m_max < 0:
        raise InvalidArgumentError(f"m_max must be nonnegative, got {m_max}")
    kappa_ext = extend(kappa, Na + m_max) if kappa.generator.is_closed_form else kappa
    weights = kappa_ext.coeffs
    if weights.size <= m_max:
        raise InvalidArgumentError(f"kappa holds {weights.size} coefficients, need more than m_max = {m_max}")
    bad = np.flatnonzero(weights <= 0)
    if bad.size:
        raise InvalidArgumentError(f"kappa_{int(bad[0])} is not positive", witness=int(bad[0]))
    shift_trend = _shift_bound_trend(weights[: min(weights.size, kappa.trunc_len)], Direction.FORWARD)

    a = alpha.coeffs
    values = np.zeros(m_max + 1)
    abs_values = np.zeros(m_max + 1)
    tails = np.zeros(m_max + 1)
    certified = True
    for m in range(m_max + 1):
        L = min(Na, weights.size - 1 - m)
        window = weights[m : m + L + 1]
        values[m] = math.fsum(a[: L + 1] * window)
        abs_values[m] = math.fsum(np.abs(a[: L + 1]) * window)
        alpha_tail = tail_bound(alpha, L, 1.0)
        if alpha_tail == 0.0:
            continue
        kappa_sup = sup_tail(kappa_ext, m + L)
        if alpha_tail is None or kappa_sup is None:
            certified = False
            tails[m] = math.nan
        else:
            tails[m] = alpha_tail * kappa_sup

    slack = _product_slack(abs_values)
    if certified:
        below = values + tails < -slack
        above = values - tails >= -slack
        if np.any(below):
            in_cw_plus = Verdict.FAILS
        elif np.all(above):
            in_cw_plus = Verdict.HOLDS
        else:
            in_cw_plus = Verdict.INDETERMINATE
    else:
        in_cw_plus = Verdict.TREND_FAILS if np.any(values < -slack) else Verdict.TREND_HOLDS

    ratio = (abs_values + np.nan_to_num(tails, nan=0.0)) / weights[: m_max + 1]
    ratio_trend = _sup_trend(ratio) if ratio.size > 1 else {"sup": float(ratio[0]), "argsup": 0, "status": "stationary"}
    in_cw = Verdict.TREND_FAILS if ratio_trend["status"] == "unstable" or not np.all(np.isfinite(ratio)) else Verdict.TREND_HOLDS
    negative = np.flatnonzero(values < -slack)
    witness = {
        "m_max": m_max,
        "shift_norm_squared": shift_trend,
        "tail_certified": certified,
        "min_value": float(np.min(values)),
        "first_negative": int(negative[0]) if negative.size else None,
        "max_tail_bound": float(np.nanmax(tails)) if certified else None,
        "abs_ratio": ratio_trend,
        "compression": True,
    }
    tables = {"alpha_nabla_kappa": _table(np.arange(m_max + 1), values), "tail_bound": _table(np.arange(m_max + 1), tails)}
    return MembershipReport("forward-shift", in_cw, in_cw_plus, witness, False, tables)
