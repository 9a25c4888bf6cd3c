"""
Cesàro means of operator orbits

M^a_T(n) x = (1 / k^{a+1}(n)) sum_{j <= n} k^a(n - j) ||T^j x||^p, its growth trend
along an n-grid, closed-form thresholds for weighted shifts, and the mean ergodic
projection lim M^b_T(n).
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import pandas as pd
import scipy.linalg

from .exceptions import InvalidArgumentError, NotConvergedError, UnsupportedRegimeError
from .kernel_analysis import Verdict, _table
from .model_builder import ModelBundle
from .operator_core import (
    DenseOperator,
    Direction,
    class_membership,
    operator_norm,
    probe_vectors,
    shift_section,
)
from .series_core import PowSign, binomial_series, cesaro_number, cesaro_numbers

logger = logging.getLogger(__name__)

DECAY_FACTOR = 0.1
DECAY_SLOPE = -0.1
BOUNDED_RATIO = 1.1
INCREMENT_RATIO = 0.9
LOG_R2 = 0.99
LOG_INCREMENT_CAP = 1.2
TRICHOTOMY_BAND = 0.05
CAUCHY_TOL = 1e-3


class Trend(str, Enum):
    DECAYS_TO_ZERO = "DecaysToZero"
    BOUNDED = "Bounded"
    LOG_GROWTH = "LogGrowth"
    POWER_GROWTH = "PowerGrowth"

    @property
    def is_bounded(self) -> bool:
        return self in (Trend.DECAYS_TO_ZERO, Trend.BOUNDED)


_SEVERITY = [Trend.DECAYS_TO_ZERO, Trend.BOUNDED, Trend.LOG_GROWTH, Trend.POWER_GROWTH]


class OracleKind(str, Enum):
    QUADRATIC = "Quadratic"
    GENERAL = "General"
    MEMBERSHIP = "Membership"
    NORM = "Norm"


@dataclass(frozen=True)
class TrendFit:
    trend: Trend
    sup: float
    slope: float
    exponent: float
    r2_log: float
    increment_ratio: float

    def to_dict(self) -> dict:
        return {
            "trend": self.trend.value,
            "sup": self.sup,
            "slope": self.slope,
            "exponent": self.exponent,
            "r2_log": self.r2_log,
            "increment_ratio": self.increment_ratio,
        }


@dataclass(frozen=True)
class ErgodicProbe:
    """
    Samples of M^a_T(n) on the n-grid, one trend fit per probe vector.
    With `along_basis` the vector at grid point n is e_n.
    """

    operator_ref: str
    a: float
    p: float
    n_grid: np.ndarray
    samples: pd.DataFrame
    fits: tuple[TrendFit, ...]
    along_basis: bool = False

    @property
    def trend(self) -> Trend:
        return max((fit.trend for fit in self.fits), key=_SEVERITY.index)

    @property
    def bounded(self) -> bool:
        return self.trend.is_bounded

    def values(self, vector: int = 0) -> np.ndarray:
        return self.samples.loc[self.samples["vector"] == vector, "value"].to_numpy()

    def to_dict(self) -> dict:
        return {
            "operator": self.operator_ref,
            "a": self.a,
            "p": self.p,
            "along_basis": self.along_basis,
            "trend": self.trend.value,
            "fits": [fit.to_dict() for fit in self.fits],
            "n_max": int(self.n_grid[-1]),
        }


#  ----------- probes ------------ #


def _check_grid(n_grid) -> np.ndarray:
    grid = np.asarray(n_grid, dtype=int)
    if grid.ndim != 1 or grid.size == 0 or grid[0] < 0 or np.any(np.diff(grid) <= 0):
        raise InvalidArgumentError("n_grid must be a nonempty strictly increasing list of nonnegative integers")
    return grid


def _orbit_norms(T: DenseOperator, x: np.ndarray, n_max: int, p: float) -> np.ndarray:
    """||T^j x||^p for j <= n_max from running powers; stops once the orbit is exactly zero."""
    norms = np.zeros(n_max + 1)
    current = np.asarray(x, dtype=complex)
    for j in range(n_max + 1):
        norm = float(np.linalg.norm(current))
        if norm == 0.0:
            break
        norms[j] = norm**p
        current = T.matvec(current)
    return norms


def _nearest(grid: np.ndarray, target: float) -> int:
    return int(np.argmin(np.abs(np.log(np.maximum(grid, 1)) - math.log(max(target, 1.0)))))


def classify_trend(n_grid: np.ndarray, values: np.ndarray) -> TrendFit:
    """
    DecaysToZero: last-decade mean < 0.1 x first-decade mean and log-log slope < -0.1.
    Bounded: M(n_max) / M(n_max/10) < 1.1, or decade increments shrinking by a factor < 0.9.
    LogGrowth: linear fit against log n with R^2 >= 0.99 and decade increments not growing.
    Otherwise PowerGrowth when the fitted exponent is positive, Bounded when it is not.
    """
    n = np.maximum(np.asarray(n_grid, dtype=float), 1.0)
    values = np.asarray(values, dtype=float)
    sup = float(np.max(values))
    positive = values > 0
    slope = float(np.polyfit(np.log(n[positive]), np.log(values[positive]), 1)[0]) if positive.sum() >= 2 else 0.0

    n_first, n_last = n[0], n[-1]
    first = values[n <= 10 * n_first]
    last = values[n >= n_last / 10]
    first_mean = float(np.mean(first)) if first.size else 0.0
    last_mean = float(np.mean(last)) if last.size else 0.0

    top = values[-1]
    mid = values[_nearest(n, n_last / 10)]
    low = values[_nearest(n, n_last / 100)]
    late, early = top - mid, mid - low
    increment_ratio = late / early if early > 0 else (0.0 if late <= 0 else math.inf)

    log_n = np.log(n)
    if values.size >= 3 and np.ptp(values) > 0:
        coeffs = np.polyfit(log_n, values, 1)
        residual = values - np.polyval(coeffs, log_n)
        r2 = float(1.0 - np.sum(residual**2) / np.sum((values - values.mean()) ** 2))
        log_slope = float(coeffs[0])
    else:
        r2, log_slope = 0.0, 0.0

    if (last_mean < DECAY_FACTOR * first_mean and slope < DECAY_SLOPE) or sup == 0.0:
        trend = Trend.DECAYS_TO_ZERO
    elif (mid > 0 and top / mid < BOUNDED_RATIO) or increment_ratio < INCREMENT_RATIO:
        trend = Trend.BOUNDED
    elif r2 >= LOG_R2 and log_slope > 0 and increment_ratio <= LOG_INCREMENT_CAP:
        trend = Trend.LOG_GROWTH
    else:
        trend = Trend.POWER_GROWTH if slope > 0 else Trend.BOUNDED
    return TrendFit(trend, sup, slope, slope, r2, float(increment_ratio))


def cesaro_probe(
    T: DenseOperator,
    x: np.ndarray | None,
    a: float,
    p: float,
    n_grid,
    along_basis: bool = False,
    operator_ref: str | None = None,
) -> ErgodicProbe:
    """
    M^a_T(n) at every n of the grid, for each row of x (or for x = e_n when along_basis)
    """
    if not a > 0 or not p >= 1:
        raise InvalidArgumentError(f"need a > 0 and p >= 1, got a={a}, p={p}")
    grid = _check_grid(n_grid)
    n_max = int(grid[-1])
    weights = cesaro_numbers(a, n_max)
    normalizers = cesaro_numbers(a + 1.0, n_max)
    rows = []
    fits = []

    if along_basis:
        if n_max >= T.dim:
            raise InvalidArgumentError(f"probing along e_n needs n < d = {T.dim}, grid reaches {n_max}")
        values = np.zeros(grid.size)
        for i, n in enumerate(grid):
            basis_vector = np.zeros(T.dim, dtype=complex)
            basis_vector[n] = 1.0
            norms = _orbit_norms(T, basis_vector, int(n), p)
            values[i] = math.fsum(weights[n::-1] * norms) / normalizers[n]
        rows.append(pd.DataFrame({"vector": 0, "n": grid, "value": values}))
        fits.append(classify_trend(grid, values))
    else:
        vectors = np.atleast_2d(np.asarray(x, dtype=complex))
        if vectors.shape[1] != T.dim:
            raise InvalidArgumentError(f"probe vectors must have length {T.dim}")
        for index, vector in enumerate(vectors):
            norms = _orbit_norms(T, vector, n_max, p)
            sums = np.convolve(weights, norms)[: n_max + 1]
            values = sums[grid] / normalizers[grid]
            rows.append(pd.DataFrame({"vector": index, "n": grid, "value": values}))
            fits.append(classify_trend(grid, values))

    samples = pd.concat(rows, ignore_index=True)
    return ErgodicProbe(operator_ref or str(T), float(a), float(p), grid, samples, tuple(fits), along_basis)


#  ----------- closed-form shift thresholds ------------ #


def shift_threshold_oracle(s: float, value: float, q: float = 2.0, kind: OracleKind | str = OracleKind.QUADRATIC):
    """
    Quadratic     B_s quadratically (C, a)-bounded       iff 1 - s < a       (0 < s < 1)
    General       B_s (C, b, q)-bounded                  iff b > q (1 - s)/2 (0 < s < 1, 1 <= q <= 2)
    Membership    B_s in the class of (1 - t)^a          iff a <= s          (0 < s < 1)
    Norm          ||B_s^m||^2 = 1 / k^s(m) for 0 < s < 1, ||F_s^m||^2 = k^s(m) for s >= 1
    """
    kind = OracleKind(kind)
    if kind is OracleKind.NORM:
        m = int(value)
        if m != value or m < 0:
            raise InvalidArgumentError(f"power m must be a nonnegative integer, got {value}")
        if 0 < s < 1:
            return 1.0 / cesaro_number(s, m)
        if s >= 1:
            return cesaro_number(s, m)
        raise UnsupportedRegimeError(f"no power-norm law for s = {s}")
    if not 0 < s < 1:
        raise UnsupportedRegimeError(f"shift thresholds hold for 0 < s < 1, got s = {s}")
    if kind is OracleKind.QUADRATIC:
        if not value > 0:
            raise UnsupportedRegimeError(f"Cesàro order must be positive, got {value}")
        return 1.0 - s < value
    if kind is OracleKind.GENERAL:
        if not 1.0 <= q <= 2.0:
            raise UnsupportedRegimeError(f"q must lie in [1, 2], got {q}")
        return value > q * (1.0 - s) / 2.0
    if not value > 0:
        raise UnsupportedRegimeError(f"kernel exponent must be positive, got {value}")
    return value <= s


def cesaro_shift(s: float, d: int) -> DenseOperator:
    """Backward section of B_s, the shift with ||t^n||^2 = k^s(n)."""
    return shift_section(binomial_series(s, PowSign.MINUS, d - 1), Direction.BACKWARD, d).operator


#  ----------- operator means ------------ #


def operator_cesaro_means(T: DenseOperator, b: float, n_grid) -> dict[int, np.ndarray]:
    """M^b_T(n) = (1 / k^{b+1}(n)) sum_{j <= n} k^b(n - j) T^j as matrices, for each grid n."""
    if not b > 0:
        raise InvalidArgumentError(f"Cesàro order must be positive, got {b}")
    grid = _check_grid(n_grid)
    n_max = int(grid[-1])
    weights = cesaro_numbers(b, n_max)
    normalizers = cesaro_numbers(b + 1.0, n_max)
    d = T.dim
    sums = {int(n): np.zeros((d, d), dtype=complex) for n in grid}
    current = np.eye(d, dtype=complex)
    entries = T.entries
    for j in range(n_max + 1):
        for n in grid:
            if j <= n:
                sums[int(n)] += weights[n - j] * current
        current = current @ entries
    return {n: total / normalizers[n] for n, total in sums.items()}


def mean_increment_decay(T: DenseOperator, b: float, n_grid) -> dict:
    """||M^b(n_{i+1}) - M^b(n_i)|| along the grid; decays when the last is below 0.1 x the first."""
    means = operator_cesaro_means(T, b, n_grid)
    keys = sorted(means)
    increments = np.array([operator_norm(means[hi] - means[lo]) for lo, hi in zip(keys, keys[1:])])
    decays = bool(increments.size >= 2 and increments[-1] < DECAY_FACTOR * increments[0])
    return {"increments": increments.tolist(), "decays": decays, "n": keys[1:]}


def power_norm_growth(T: DenseOperator, n_grid) -> dict:
    """Fitted exponent of ||T^n|| against n on the grid."""
    grid = _check_grid(n_grid)
    norms = np.zeros(grid.size)
    current = np.eye(T.dim, dtype=complex)
    j = 0
    for i, n in enumerate(grid):
        while j < n:
            current = current @ T.entries
            j += 1
        norms[i] = operator_norm(current)
    usable = (grid > 0) & (norms > 0)
    exponent = float(np.polyfit(np.log(grid[usable]), np.log(norms[usable]), 1)[0]) if usable.sum() >= 2 else 0.0
    return {"exponent": exponent, "norms": norms.tolist(), "n": grid.tolist(), "table": _table(grid, norms)}


def adjoint_growth_witness(a: float, d: int, n_grid) -> dict:
    """
    The section of B_a lies in the class of (1 - t)^a while ||(B_a*)^n e_0|| grows without bound.
    """
    grid = _check_grid(n_grid)
    if grid[-1] >= d:
        raise InvalidArgumentError(f"grid must stay below the section dimension {d}")
    B = cesaro_shift(a, d)
    membership = class_membership(binomial_series(a, PowSign.PLUS, d), B, probe_vectors(d, 0, seed=0))
    adjoint = B.adjoint()
    norms = np.sqrt(_orbit_norms(adjoint, np.eye(d, dtype=complex)[0], int(grid[-1]), 2.0)[grid])
    fit = classify_trend(grid, norms)
    return {
        "membership": membership.in_Cw_plus.value,
        "adjoint_trend": fit.trend.value,
        "adjoint_exponent": fit.exponent,
        "witness": bool(membership.in_Cw_plus.is_positive and not fit.trend.is_bounded),
        "table": _table(grid, norms),
    }


def assani_matrix() -> DenseOperator:
    """[[-1, 2], [0, -1]]: (C, 1)-bounded while ||T^n|| grows like 2n."""
    return DenseOperator(np.array([[-1.0, 2.0], [0.0, -1.0]]), "Assani matrix")


#  ----------- trichotomy and implications ------------ #


def trichotomy_test(
    T: DenseOperator, bundle: ModelBundle, vectors: np.ndarray, n_max: int, b: float = 1.0
) -> dict:
    """
    Three indicators of the isometric part of the model, per vector x:
    ||Wx||^2, min_{n <= n_max} ||T^n x||^2 and the Cesàro (b, 2) mean at n_max.
    They agree (within 0.05 ||x||^2) for operators of the form shift part (+) isometry.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    W = bundle.W.entries
    rows = []
    for x in vectors:
        size = float(np.real(np.vdot(x, x)))
        w = float(np.linalg.norm(W @ x) ** 2)
        orbit = _orbit_norms(T, x, n_max, 2.0)
        smallest = float(np.min(orbit))
        mean = cesaro_probe(T, x, b, 2.0, [n_max]).values(0)[0]
        indicators = (w, smallest, float(mean))
        consistent = max(indicators) - min(indicators) <= TRICHOTOMY_BAND * size
        rows.append(
            {
                "W_norm_sq": w,
                "min_orbit_norm_sq": smallest,
                "cesaro_limit": float(mean),
                "S_present": w > TRICHOTOMY_BAND * size,
                "consistent": bool(consistent),
            }
        )
    verdict = Verdict.HOLDS if all(row["consistent"] for row in rows) else Verdict.FAILS
    return {"verdict": verdict.value, "vectors": rows, "W_norm": operator_norm(W), "n_max": n_max}


def implication_battery(T: DenseOperator, cases, vectors: np.ndarray | None, n_grid, along_basis: bool = False) -> dict:
    """
    Each case ((a, p), (b, q)): wherever the (C, a, p) probe is bounded, the (C, b, q) probe
    must be bounded on the same vectors. Violations point at truncation or rounding.
    """
    rows = []
    for (a, p), (b, q) in cases:
        antecedent = cesaro_probe(T, vectors, a, p, n_grid, along_basis)
        consequent = cesaro_probe(T, vectors, b, q, n_grid, along_basis)
        violated = [
            i
            for i, (before, after) in enumerate(zip(antecedent.fits, consequent.fits))
            if before.trend.is_bounded and not after.trend.is_bounded
        ]
        rows.append(
            {
                "antecedent": [a, p],
                "consequent": [b, q],
                "antecedent_trend": antecedent.trend.value,
                "consequent_trend": consequent.trend.value,
                "violations": violated,
            }
        )
    return {"cases": rows, "violations": sum(len(row["violations"]) for row in rows)}


#  ----------- mean ergodic projection ------------ #


def _projector(basis: np.ndarray) -> np.ndarray:
    return basis @ basis.conj().T


def mean_ergodic_projection(
    T: DenseOperator, b: float, n_max: int, tol: float = CAUCHY_TOL, rank_tol: float = 1e-3
) -> tuple[DenseOperator, dict]:
    """
    P = M^b_T(n_max), accepted when ||M^b(n_max) - M^b(n_max/2)|| <= tol. The residuals
    compare Ker(I - T) with Ran P and Ran(I - T) with Ker P; ranks use the absolute
    singular value threshold rank_tol.
    """
    if n_max < 2:
        raise InvalidArgumentError(f"n_max must be at least 2, got {n_max}")
    means = operator_cesaro_means(T, b, [n_max // 2, n_max])
    P = means[n_max]
    cauchy = operator_norm(P - means[n_max // 2])
    if cauchy > tol:
        raise NotConvergedError(
            f"Cesàro means of order {b} still move by {cauchy:.3e} at n = {n_max}", witness={"cauchy": cauchy}
        )
    d = T.dim
    gap = np.eye(d) - T.entries

    def range_basis(matrix: np.ndarray) -> np.ndarray:
        u, singular, _ = scipy.linalg.svd(matrix)
        return u[:, singular > rank_tol]

    def kernel_basis(matrix: np.ndarray) -> np.ndarray:
        _, singular, vh = scipy.linalg.svd(matrix)
        rank = int(np.sum(singular > rank_tol))
        return vh[rank:].conj().T

    fixed = kernel_basis(gap)
    residuals = {
        "cauchy": cauchy,
        "fixed_vs_range_P": operator_norm(_projector(fixed) - _projector(range_basis(P))),
        "range_gap_vs_kernel_P": operator_norm(_projector(range_basis(gap)) - _projector(kernel_basis(P))),
        "idempotence": operator_norm(P @ P - P),
        "fixed_dim": int(fixed.shape[1]),
    }
    residuals["decomposition_residual"] = max(residuals["fixed_vs_range_P"], residuals["range_gap_vs_kernel_P"])
    return DenseOperator(P, f"mean ergodic projection of order {b}"), residuals
