"""
Hypotheses and side conditions on a kernel pair (alpha, k)

Sign and algebraic conditions are decided at the truncation N and report
Holds / Fails. Asymptotic conditions (sups over all n, summability, limits)
only report TrendHolds / TrendFails / Indeterminate, with the trend table
attached to the report.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import pandas as pd
from scipy import special

from .exceptions import GenerationFailedError, InvalidArgumentError, SeriesOverflowError
from .series_core import (
    NP_SLACK,
    SUMMABILITY_RATIO,
    GeneratorKind,
    KernelPair,
    KernelType,
    TruncatedSeries,
    _reciprocal_coefficients,
    cauchy_product,
    derivative_tail_bound,
    estimate_at_one,
    extend,
    kernel_pair,
    kernel_type,
    np_sign_violation,
    polynomial_series,
    series_reciprocal,
    tail_bound,
    tail_extend,
)

logger = logging.getLogger(__name__)

CIRCLE_RADII = (0.5, 0.9, 0.99, 1.0)
ZERO_MODULUS = 1e-12
MONOTONE_SLACK = 1e-12
STABILITY_TOL = 1e-3
ROOT_BAND = 0.02
# relative spread of convolution-rounding noise on flat sequences
STATIONARY_SPREAD = 1e-10
HOLDER_SLOPE_TOL = 0.02
HOLDER_SAMPLES = 20
MAX_HALVINGS = 60
DEFAULT_A_GRID = (1.5, 2.0, 3.0)
DEFAULT_S_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)


class ConditionId(str, Enum):
    HYP_A = "HypA"
    HYP_B = "HypB"
    NP_TYPE = "NPType"
    CRITICAL_TYPE = "CriticalType"
    MULLER_CONDITION = "MullerCondition"
    MULLER_SUFFICIENT = "MullerSufficient"
    BANACH_ALG = "BanachAlg"
    TAU_CONDITION = "TauCondition"
    RECIPROCAL_SUMMABILITY = "ReciprocalSummability"
    HOLDER_EXPONENT = "HolderExponent"
    SIGN_PATTERN = "SignPattern"
    INVERSE_WEIGHTED = "InverseWeightedBound"
    SHIFT_MEMBERSHIP = "ShiftMembership"
    MODEL_RESIDUALS = "ModelResiduals"


class Verdict(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    TREND_HOLDS = "TrendHolds"
    TREND_FAILS = "TrendFails"
    INDETERMINATE = "Indeterminate"

    @property
    def is_positive(self) -> bool:
        return self in (Verdict.HOLDS, Verdict.TREND_HOLDS)

    @property
    def is_negative(self) -> bool:
        return self in (Verdict.FAILS, Verdict.TREND_FAILS)


@dataclass(frozen=True)
class ConditionReport:
    """
    Outcome of one condition check. `witness` holds plain JSON values;
    `trend_tables` holds the (index, value) tables written as CSV sidecars.
    """

    condition_id: ConditionId
    verdict: Verdict
    witness: dict
    N_used: int
    trend_tables: dict[str, pd.DataFrame] = field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "condition_id": self.condition_id.value,
            "verdict": self.verdict.value,
            "witness": self.witness,
            "N_used": self.N_used,
        }


@dataclass(frozen=True)
class SignPattern:
    """
    Prescribed signs of alpha_2..alpha_N for the sign-pattern kernel generator
    """

    signs: tuple[int, ...]
    epsilon: float = 1e-3
    amplitude: float = 0.05
    decay: float = 2.0

    def __post_init__(self) -> None:
        signs = tuple(int(s) for s in self.signs)
        if not signs or any(s not in (1, -1) for s in signs):
            raise InvalidArgumentError("a sign pattern is a nonempty sequence over {+1, -1}")
        for name in ("epsilon", "amplitude", "decay"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidArgumentError(f"sign pattern {name} must be finite and positive, got {value}")
        if self.decay <= 1:
            raise InvalidArgumentError(f"tail decay must exceed 1, got {self.decay}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def from_text(cls, text: str, **kwargs) -> "SignPattern":
        """Parse '+-+' or '+1,-1,+1'."""
        cleaned = text.replace(",", "").replace("1", "").replace(" ", "")
        if not cleaned or set(cleaned) - {"+", "-"}:
            raise InvalidArgumentError(f"cannot read sign pattern {text!r}")
        return cls(tuple(1 if c == "+" else -1 for c in cleaned), **kwargs)

    @property
    def degree(self) -> int:
        return len(self.signs) + 1

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)


#  ----------- helpers ------------ #


def _table(index, values) -> pd.DataFrame:
    return pd.DataFrame({"index": np.asarray(index, dtype=int), "value": np.asarray(values, dtype=float)})


def _require_positive(f: TruncatedSeries, name: str) -> np.ndarray:
    values = f.coeffs
    bad = np.flatnonzero(values <= 0)
    if bad.size:
        raise InvalidArgumentError(f"{name}_{int(bad[0])} = {values[bad[0]]} is not positive", witness=int(bad[0]))
    return values


def _circle_values(coeffs: np.ndarray, r: float, samples: int) -> np.ndarray:
    """
    f(r e^{2 pi i j / samples}) for j < samples, by folding the coefficients modulo samples
    """
    with np.errstate(under="ignore"):
        weighted = coeffs * r ** np.arange(coeffs.size)
    folded = np.zeros(samples, dtype=complex)
    np.add.at(folded, np.arange(coeffs.size) % samples, weighted)
    return np.fft.ifft(folded) * samples


def _winding_number(values: np.ndarray) -> int:
    phases = np.unwrap(np.angle(np.append(values, values[0])))
    return int(round((phases[-1] - phases[0]) / (2 * math.pi)))


def _lipschitz(coeffs: np.ndarray, r: float) -> float:
    n = np.arange(1, coeffs.size)
    with np.errstate(under="ignore"):
        return math.fsum(n * np.abs(coeffs[1:]) * r ** (n - 1.0))


def _disc_certificate(coeffs: np.ndarray, samples: int) -> tuple[bool, float, int]:
    """
    Nonvanishing of a polynomial on the closed unit disc.
    Returns (certified, lower bound of |p| on the unit circle, winding number).
    """
    values = _circle_values(coeffs, 1.0, samples)
    lower = float(np.min(np.abs(values))) - _lipschitz(coeffs, 1.0) * math.pi / samples
    winding = _winding_number(values)
    return bool(lower > 0 and winding == 0), lower, winding


def _block_ratio(values: np.ndarray) -> float:
    """
    (v_N - v_{N/2}) / (v_{N/2} - v_{N/4}) for a running quantity v
    """
    N = values.size - 1
    late = values[N] - values[N // 2]
    early = values[N // 2] - values[N // 4]
    if early <= 0:
        return 0.0 if late <= 0 else math.inf
    return float(late / early)


def _sup_trend(values: np.ndarray) -> dict:
    """
    Where the sup of a finite sequence sits: attained in the first half, stationary over
    the last half, or still creeping up at a geometrically slowing rate.
    """
    N = values.size - 1
    argsup = int(np.argmax(values))
    sup = float(values[argsup])
    last_half = values[N // 2 :]
    spread = float(np.max(last_half) - np.min(last_half))
    if spread <= STATIONARY_SPREAD * max(1.0, abs(sup)):
        status = "stationary"
    elif argsup <= N // 2:
        status = "interior"
    else:
        running = np.maximum.accumulate(values)
        status = "converging" if _block_ratio(running) < SUMMABILITY_RATIO else "unstable"
    return {"sup": sup, "argsup": argsup, "status": status}


def _running_sup_stable(running: np.ndarray) -> tuple[bool, float]:
    N = running.size - 1
    change = float(running[N] - running[(3 * N) // 4])
    relative = change / max(abs(float(running[N])), 1e-300)
    return relative <= STABILITY_TOL, relative


def _root_samples(omega: np.ndarray, band: float) -> dict:
    N = omega.size - 1
    idx = sorted({max(1, N // 4), max(1, N // 2), max(1, (3 * N) // 4), N})
    roots = {str(n): float(omega[n] ** (1.0 / n)) for n in idx}
    return {"roots": roots, "within_band": all(abs(v - 1.0) <= band for v in roots.values()), "band": band}


def _log_slope(x: np.ndarray, y: np.ndarray) -> float:
    if x.size < 2:
        return 0.0
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


#  ----------- Hypotheses ------------ #


def check_hypotheses_A(pair: KernelPair, circle_samples: int = 4096) -> ConditionReport:
    """
    k_n > 0, alpha_0 = k_0 = 1 and alpha zero-free in the open disc. Zeros are
    excluded between grid points by a Lipschitz bound when the derivative tail is known.
    """
    alpha = pair.alpha.coeffs
    witness: dict = {"circle_samples": circle_samples, "circles": {}}
    if pair.violations:
        witness["first_nonpositive_k"] = pair.violations[0]
    normalized = abs(alpha[0] - 1.0) <= NP_SLACK and abs(pair.k.coeffs[0] - 1.0) <= NP_SLACK
    witness["normalized"] = normalized

    vanishing = False
    certified = True
    for r in CIRCLE_RADII:
        values = _circle_values(alpha, r, circle_samples)
        min_modulus = float(np.min(np.abs(values)))
        circle = {"radius": r, "min_modulus": min_modulus}
        if r < 1.0:
            winding = _winding_number(values)
            derivative_tail = derivative_tail_bound(pair.alpha, r)
            lipschitz = _lipschitz(alpha, r) + (derivative_tail if derivative_tail is not None else math.inf)
            gap = min_modulus - lipschitz * math.pi * r / circle_samples
            circle.update(winding=winding, lipschitz=lipschitz, certified=bool(gap > 0))
            vanishing = vanishing or min_modulus <= ZERO_MODULUS or winding != 0
            certified = certified and gap > 0
        witness["circles"][str(r)] = circle

    if pair.violations or not normalized or vanishing:
        verdict = Verdict.FAILS
    elif certified:
        verdict = Verdict.HOLDS
    else:
        verdict = Verdict.TREND_HOLDS
    return ConditionReport(ConditionId.HYP_A, verdict, witness, pair.N)


def check_hypotheses_B(pair: KernelPair) -> ConditionReport:
    """
    k_n <= C' k_{n+1} and gamma_n <= C'' k_n with gamma = |alpha| * k
    """
    N = pair.N
    if pair.violations:
        witness = {"first_nonpositive_k": pair.violations[0]}
        return ConditionReport(ConditionId.HYP_B, Verdict.FAILS, witness, N)
    k = pair.k.coeffs
    beta = TruncatedSeries(np.abs(pair.alpha.coeffs))
    gamma = cauchy_product(beta, pair.k).coeffs
    ratio = k[:-1] / k[1:]
    gamma_ratio = gamma / k
    ratio_trend = _sup_trend(ratio)
    gamma_trend = _sup_trend(gamma_ratio)
    witness = {"C_prime": ratio_trend, "C_double_prime": gamma_trend}

    alpha = pair.alpha
    support = np.flatnonzero(alpha.coeffs)
    finite_support = alpha.generator.kind in (GeneratorKind.POLYNOMIAL, GeneratorKind.FILE_LIST) or (
        alpha.generator.kind is GeneratorKind.BINOMIAL and float(alpha.generator.exponent).is_integer()
        and alpha.generator.exponent >= 0
    )
    statuses = {ratio_trend["status"], gamma_trend["status"]}
    if statuses == {"stationary"} and finite_support and support.size and support[-1] < N // 2:
        verdict = Verdict.HOLDS
    elif statuses <= {"stationary", "interior", "converging"}:
        verdict = Verdict.TREND_HOLDS
    else:
        verdict = Verdict.INDETERMINATE
    tables = {"k_ratio": _table(np.arange(N), ratio), "gamma_ratio": _table(np.arange(N + 1), gamma_ratio)}
    return ConditionReport(ConditionId.HYP_B, verdict, witness, N, tables)


def classify_np(alpha: TruncatedSeries) -> ConditionReport:
    violation = np_sign_violation(alpha)
    if violation is None:
        return ConditionReport(ConditionId.NP_TYPE, Verdict.HOLDS, {"first_violation": None}, alpha.degree)
    witness = {"first_violation": violation, "value": float(alpha.coeffs[violation])}
    return ConditionReport(ConditionId.NP_TYPE, Verdict.FAILS, witness, alpha.degree)


def classify_critical(pair: KernelPair) -> ConditionReport:
    """
    Critical when alpha(1) = 0, Subcritical when alpha(1) > 0. The verdict says how the
    type was decided (certified tail: Holds, block estimate: TrendHolds); the type is the witness.
    """
    at_one = estimate_at_one(pair.alpha)
    kind = kernel_type(at_one)
    witness = {
        "type": kind.value,
        "alpha_at_one": at_one.value,
        "tail_bound": at_one.tail_bound,
        "tail_certified": at_one.certified,
    }
    if kind is KernelType.INDETERMINATE:
        verdict = Verdict.INDETERMINATE
    elif at_one.certified:
        verdict = Verdict.HOLDS
    else:
        verdict = Verdict.TREND_HOLDS
    return ConditionReport(ConditionId.CRITICAL_TYPE, verdict, witness, pair.N)


#  ----------- Müller-type conditions ------------ #


def muller_condition_estimate(k: TruncatedSeries, m_grid) -> ConditionReport:
    """
    S(m) = max_{2m <= n <= N} sum_{m <= j <= n/2} k_j k_{n-j} / k_n on the grid of m
    """
    values = _require_positive(k, "k")
    N = k.degree
    ms = np.array(sorted({int(m) for m in m_grid}), dtype=int)
    if ms.size == 0 or ms[0] < 0 or 2 * ms[-1] > N:
        raise InvalidArgumentError(f"m_grid must lie in [0, N/2] = [0, {N // 2}]", witness=list(map(int, ms)))

    S = np.zeros(ms.size)
    for n in range(2 * int(ms[0]), N + 1):
        half = n // 2
        j = np.arange(half + 1)
        partial = np.cumsum(values[j] * values[n - j])
        active = ms[2 * ms <= n]
        before = np.where(active > 0, partial[np.maximum(active - 1, 0)], 0.0)
        sums = (partial[half] - before) / values[n]
        S[: active.size] = np.maximum(S[: active.size], sums)

    decreasing = bool(np.all(np.diff(S) <= MONOTONE_SLACK * np.maximum(1.0, S[:-1])))
    vanishing = bool(S[-1] < 0.5 * S[0])
    verdict = Verdict.TREND_HOLDS if decreasing and vanishing else Verdict.TREND_FAILS
    ratio = values[:-1] / values[1:]
    witness = {
        "S": {str(int(m)): float(s) for m, s in zip(ms, S)},
        "decreasing": decreasing,
        "root_samples": _root_samples(values, ROOT_BAND)["roots"],
        "sup_k_ratio": float(np.max(ratio)),
    }
    return ConditionReport(ConditionId.MULLER_CONDITION, verdict, witness, N, {"S": _table(ms, S)})


def muller_sufficient_check(k: TruncatedSeries, a_grid=DEFAULT_A_GRID) -> ConditionReport:
    """
    Log-convexity of k_n (n+1)**a: (k_{n+1}/k_n)(1 + 1/(n+1))**a nondecreasing in n
    """
    a_values = [float(a) for a in a_grid]
    if not a_values or any(not a > 1 for a in a_values):
        raise InvalidArgumentError(f"a_grid entries must exceed 1, got {a_values}")
    values = _require_positive(k, "k")
    n = np.arange(values.size - 1, dtype=float)
    base = values[1:] / values[:-1]
    per_a: dict = {}
    passing = []
    for a in a_values:
        q = base * (1.0 + 1.0 / (n + 1.0)) ** a
        drops = np.flatnonzero(q[1:] < q[:-1] - MONOTONE_SLACK * np.maximum(1.0, np.abs(q[:-1])))
        per_a[repr(a)] = {"passes": not drops.size, "first_violation": int(drops[0]) + 1 if drops.size else None}
        if not drops.size:
            passing.append(a)
    witness = {"per_a": per_a, "passing_a": passing}
    verdict = Verdict.HOLDS if passing else Verdict.FAILS
    return ConditionReport(ConditionId.MULLER_SUFFICIENT, verdict, witness, k.degree)


#  ----------- weighted sequence algebras ------------ #


def banach_algebra_condition(omega: TruncatedSeries, root_band: float = ROOT_BAND) -> ConditionReport:
    """
    sup_n sum_j omega_n / (omega_j omega_{n-j})
    """
    values = _require_positive(omega, "omega")
    N = omega.degree
    inverse = 1.0 / values
    c = values * np.convolve(inverse, inverse)[: N + 1]
    running = np.maximum.accumulate(c)
    stable, relative = _running_sup_stable(running)
    argsup = int(np.argmax(c))
    witness = {
        "sup": float(running[-1]),
        "argsup": argsup,
        "relative_change_last_quarter": relative,
        "root_test": _root_samples(values, root_band),
    }
    verdict = Verdict.TREND_HOLDS if stable else Verdict.TREND_FAILS
    return ConditionReport(ConditionId.BANACH_ALG, verdict, witness, N, {"sums": _table(np.arange(N + 1), c)})


def tau_condition_check(omega: TruncatedSeries) -> ConditionReport:
    """
    tau_j = max_{2j <= n <= N} omega_n / (omega_j omega_{n-j}) and the partial sums of tau
    """
    values = _require_positive(omega, "omega")
    N = omega.degree
    tau = np.empty(N // 2 + 1)
    for j in range(N // 2 + 1):
        n = np.arange(2 * j, N + 1)
        tau[j] = np.max(values[n] / (values[j] * values[n - j]))
    ratio = _block_ratio(np.cumsum(tau))
    witness = {"tau_sum": math.fsum(tau), "cauchy_ratio": ratio, "tau_last": float(tau[-1])}
    verdict = Verdict.TREND_HOLDS if ratio < SUMMABILITY_RATIO else Verdict.TREND_FAILS
    return ConditionReport(ConditionId.TAU_CONDITION, verdict, witness, N, {"tau": _table(np.arange(tau.size), tau)})


def reciprocal_summability_check(omega: TruncatedSeries) -> ConditionReport:
    values = _require_positive(omega, "omega")
    N = omega.degree
    partial = np.cumsum(1.0 / values)
    ratio = _block_ratio(partial)
    witness = {"partial_sum": float(partial[-1]), "cauchy_ratio": ratio}
    verdict = Verdict.TREND_HOLDS if ratio < SUMMABILITY_RATIO else Verdict.TREND_FAILS
    return ConditionReport(
        ConditionId.RECIPROCAL_SUMMABILITY, verdict, witness, N, {"partial_sums": _table(np.arange(N + 1), partial)}
    )


def check_inverse_weighted_bound(f: TruncatedSeries, omega: TruncatedSeries) -> ConditionReport:
    """
    sup_n |(1/f)_n| omega_n, stabilised over the last quarter of the window
    """
    weights = _require_positive(omega, "omega")
    N = min(f.degree, omega.degree)
    inverse = series_reciprocal(f, N).coeffs
    weighted = np.abs(inverse) * weights[: N + 1]
    running = np.maximum.accumulate(weighted)
    stable, relative = _running_sup_stable(running)
    witness = {"C": float(running[-1]), "relative_change_last_quarter": relative}
    verdict = Verdict.TREND_HOLDS if stable else Verdict.TREND_FAILS
    return ConditionReport(
        ConditionId.INVERSE_WEIGHTED, verdict, witness, N, {"weighted": _table(np.arange(N + 1), weighted)}
    )


#  ----------- Hölder exponent ------------ #


def _tail_from(k: TruncatedSeries, suffix: np.ndarray, n0: int) -> float | None:
    """
    sum_{n >= n0} k_n, None when it needs coefficients that are not available
    """
    N = k.degree
    if n0 <= N:
        beyond = tail_bound(k, N, 1.0)
        if beyond is None:
            return float(suffix[n0])
        return float(suffix[n0]) + beyond
    if k.generator.kind is GeneratorKind.DERIVED:
        return None
    return tail_bound(extend(k, n0), n0 - 1, 1.0)


def holder_exponent_estimate(k: TruncatedSeries, s_grid=DEFAULT_S_GRID) -> ConditionReport:
    """
    sup over t = 2^-j (j = 1..20) of t^-s (sum_{n >= t^(s-1)} k_n)^(1/2), tested for
    boundedness by the log-log slope in 1/t. Also fits sum_{n >= m} k_n <= C m^-eps.
    """
    s_values = [float(s) for s in s_grid]
    if not s_values or any(not 0 < s < 1 for s in s_values):
        raise InvalidArgumentError(f"s_grid must lie in (0, 1), got {s_values}")
    N = k.degree
    values = np.abs(k.coeffs)
    suffix = np.cumsum(values[::-1])[::-1]
    t = 2.0 ** -np.arange(1, HOLDER_SAMPLES + 1)
    tail_certified = tail_bound(k, N, 1.0) is not None

    per_s: dict = {}
    passing = []
    tables = {}
    for s in s_values:
        samples = []
        for tj in t:
            n0 = int(math.ceil(tj ** (s - 1.0)))
            tail = _tail_from(k, suffix, n0)
            if tail is None:
                continue
            samples.append((tj, n0, tj**-s * math.sqrt(tail) if math.isfinite(tail) else math.inf))
        sampled = np.array([v for _, _, v in samples])
        inv_t = np.array([1.0 / tj for tj, _, _ in samples])
        if sampled.size and not np.all(np.isfinite(sampled)):
            passes, slope = False, math.inf
        else:
            positive = sampled > 0
            slope = _log_slope(inv_t[positive], sampled[positive]) if positive.sum() >= 2 else 0.0
            passes = bool(sampled.size) and slope <= HOLDER_SLOPE_TOL
        per_s[repr(s)] = {
            "passes": passes,
            "slope": slope,
            "sup": float(np.max(sampled)) if sampled.size else None,
            "samples": len(samples),
        }
        if passes:
            passing.append(s)
        tables[f"s={s:g}"] = _table([n0 for _, n0, _ in samples], sampled)

    # sum_{n >= m} k_n <= C m^-eps on m = 2^i
    ms = 2 ** np.arange(0, int(math.log2(N)) + 1)
    tails = np.array([_tail_from(k, suffix, int(m)) for m in ms], dtype=float)
    usable = np.isfinite(tails) & (tails > 0)
    fit: dict = {"C": None, "epsilon": None}
    if usable.sum() >= 2:
        epsilon = -_log_slope(ms[usable].astype(float), tails[usable])
        if epsilon > 0:
            fit = {"C": float(np.max(tails[usable] * ms[usable] ** epsilon)), "epsilon": epsilon}

    witness = {
        "per_s": per_s,
        "largest_passing_s": max(passing) if passing else None,
        "t_samples": f"2^-j, j=1..{HOLDER_SAMPLES}",
        "tail_certified": tail_certified,
        "power_fit": fit,
    }
    verdict = Verdict.TREND_HOLDS if passing else Verdict.TREND_FAILS
    return ConditionReport(ConditionId.HOLDER_EXPONENT, verdict, witness, N, tables)


#  ----------- sign-pattern kernels ------------ #


def _perturbed_polynomial(pattern: SignPattern, epsilon: float) -> np.ndarray:
    signs = np.array(pattern.signs)
    negatives = max(1, int(np.sum(signs < 0)))
    coeffs = np.zeros(pattern.degree + 1)
    coeffs[0] = 1.0
    coeffs[1] = -0.5
    coeffs[2:] = np.where(signs < 0, -0.25 / negatives, epsilon)
    return coeffs


def _head_witness(alpha_hat: np.ndarray, k_hat: np.ndarray, samples: int) -> dict:
    alpha_ok, alpha_lower, alpha_winding = _disc_certificate(alpha_hat, samples)
    k_ok, k_lower, k_winding = _disc_certificate(k_hat, samples)
    positive = bool(np.all(k_hat[1:] > 0))
    return {
        "ok": positive and alpha_ok and k_ok,
        "k_positive": positive,
        "alpha_lower_bound": alpha_lower,
        "alpha_winding": alpha_winding,
        "k_lower_bound": k_lower,
        "k_winding": k_winding,
    }


def generate_sign_pattern_kernel(
    pattern: SignPattern, N_total: int, circle_samples: int = 1024
) -> tuple[KernelPair, ConditionReport]:
    """
    Kernel pair whose alpha_2..alpha_N follow the prescribed signs while every k_n > 0.

    A polynomial alpha with alpha_1 = -1/2, small negative entries on the '-' slots and
    +epsilon on the '+' slots is inverted to degree N; epsilon is halved until the
    truncated inverse has positive coefficients and both polynomials are certified
    zero-free on the closed disc. k is then continued by amplitude * n**-decay and
    alpha recomputed as 1/k.
    """
    N = pattern.degree
    if N_total <= N:
        raise InvalidArgumentError(f"N_total must exceed the pattern degree {N}, got {N_total}")

    epsilon = pattern.epsilon
    head: dict = {}
    for halvings in range(MAX_HALVINGS + 1):
        alpha_hat = _perturbed_polynomial(pattern, epsilon)
        k_hat = _reciprocal_coefficients(alpha_hat)
        head = _head_witness(alpha_hat, k_hat, circle_samples)
        if head["ok"]:
            break
        logger.info("sign pattern %s: epsilon %.3e rejected, halving", pattern, epsilon)
        epsilon /= 2
    else:
        raise GenerationFailedError(
            f"no admissible epsilon after {MAX_HALVINGS} halvings", witness={"epsilon": epsilon, **head}
        )

    amplitude = pattern.amplitude
    for _ in range(MAX_HALVINGS + 1):
        tail_mass = amplitude * float(special.zeta(pattern.decay, N + 1))
        if tail_mass < head["k_lower_bound"]:
            break
        amplitude /= 2
    else:
        raise GenerationFailedError(
            "tail amplitude cannot be made smaller than the head's modulus",
            witness={"epsilon": epsilon, "amplitude": amplitude, **head},
        )

    k = tail_extend(polynomial_series(k_hat), amplitude, pattern.decay, N + 1, N_total)
    pair = kernel_pair(series_reciprocal(k, N_total), k)

    alpha = pair.alpha.coeffs
    expected = np.array(pattern.signs)
    observed = np.sign(alpha[2 : N + 1])
    mismatches = [int(n) + 2 for n in np.flatnonzero(observed != expected)]
    alpha_1_negative = bool(alpha[1] < 0)
    witness = {
        "pattern": str(pattern),
        "achieved_epsilon": epsilon,
        "halvings": halvings,
        "amplitude": amplitude,
        "decay": pattern.decay,
        "degree": N,
        "mismatches": mismatches,
        "alpha_1": float(alpha[1]),
        "k_positive": not pair.violations,
        "head": head,
    }
    verdict = Verdict.HOLDS if not mismatches and alpha_1_negative and not pair.violations else Verdict.FAILS
    report = ConditionReport(ConditionId.SIGN_PATTERN, verdict, witness, N_total)
    return pair, report


def kernel_suite(pair: KernelPair, circle_samples: int = 4096, m_grid=None) -> list[ConditionReport]:
    """
    Every condition on one pair; weights of the dual space are omega_n = 1 / k_n.
    Conditions needing k_n > 0 are skipped when the pair has nonpositive k_n.
    """
    reports = [
        classify_np(pair.alpha),
        classify_critical(pair),
        check_hypotheses_A(pair, circle_samples),
        check_hypotheses_B(pair),
    ]
    if pair.violations:
        return reports
    N = pair.N
    grid = [m for m in (m_grid or []) if 2 * m <= N] or [m for m in (1, 2, 4, 8, 16, 32, 64) if 2 * m <= N]
    reports += [muller_condition_estimate(pair.k, grid), muller_sufficient_check(pair.k)]
    try:
        with np.errstate(over="ignore"):
            omega = TruncatedSeries(1.0 / pair.k.coeffs)
    except SeriesOverflowError:
        logger.warning("omega = 1/k overflows at N=%d; weighted-algebra conditions skipped", N)
    else:
        reports += [
            banach_algebra_condition(omega),
            tau_condition_check(omega),
            reciprocal_summability_check(omega),
        ]
    reports.append(holder_exponent_estimate(pair.k))
    return reports
