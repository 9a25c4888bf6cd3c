"""
Truncated real power series

Construction, Cauchy products, reciprocals, evaluation, Wiener norms and
Cesàro numbers. Every kernel alpha(t) = sum alpha_n t^n and k(t) = 1/alpha(t)
used by the toolkit is a TruncatedSeries; the truncation length is always an
explicit argument.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import NamedTuple

import numpy as np
import pandas as pd
from numpy.polynomial import polynomial as npoly
from scipy import special

from .exceptions import (
    InvalidArgumentError,
    InversionError,
    OutOfDomainError,
    SeriesOverflowError,
    SingularAtOriginError,
)

logger = logging.getLogger(__name__)

INVERSION_TOL = 1e-10
BINOMIAL_CHECK_TOL = 1e-14
NP_SLACK = 1e-14
CRITICAL_SLACK = 1e-10
# (S_N - S_{N/2}) / (S_{N/2} - S_{N/4}) below this reads as a convergent series
SUMMABILITY_RATIO = 0.9
UNIT_ROUNDOFF = float(np.finfo(float).eps) / 2


class GeneratorKind(str, Enum):
    BINOMIAL = "Binomial"
    POLYNOMIAL = "Polynomial"
    FILE_LIST = "FileList"
    DERIVED = "Derived"
    TAIL = "Tail"


class PowSign(str, Enum):
    PLUS = "PowPlus"
    MINUS = "PowMinus"


class KernelType(str, Enum):
    CRITICAL = "Critical"
    SUBCRITICAL = "Subcritical"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class Generator:
    """
    Provenance of a series. Closed-form kinds can be extended past the
    truncation and carry certified tail bounds:
        Binomial: the series of (1 - t)**exponent
        Polynomial / FileList: coefficients past the list are zero
        Tail: `head` up to degree start-1, then amplitude * n**(-decay)
    """

    kind: GeneratorKind
    exponent: float | None = None
    amplitude: float | None = None
    decay: float | None = None
    start: int | None = None
    head: tuple[float, ...] = ()

    @classmethod
    def binomial(cls, exponent: float) -> "Generator":
        return cls(GeneratorKind.BINOMIAL, exponent=float(exponent))

    @classmethod
    def polynomial(cls) -> "Generator":
        return cls(GeneratorKind.POLYNOMIAL)

    @classmethod
    def file_list(cls) -> "Generator":
        return cls(GeneratorKind.FILE_LIST)

    @classmethod
    def derived(cls) -> "Generator":
        return cls(GeneratorKind.DERIVED)

    @classmethod
    def tail(cls, head: tuple[float, ...], amplitude: float, decay: float, start: int) -> "Generator":
        return cls(
            GeneratorKind.TAIL,
            amplitude=float(amplitude),
            decay=float(decay),
            start=int(start),
            head=tuple(float(c) for c in head),
        )

    @property
    def is_closed_form(self) -> bool:
        return self.kind is not GeneratorKind.DERIVED

    def describe(self) -> dict:
        described: dict = {"kind": self.kind.value}
        if self.kind is GeneratorKind.BINOMIAL:
            described["exponent"] = self.exponent
        if self.kind is GeneratorKind.TAIL:
            described.update(amplitude=self.amplitude, decay=self.decay, start=self.start)
        return described


@dataclass(frozen=True)
class TruncatedSeries:
    """
    Real coefficients c_0..c_N of an analytic germ, immutable.
    """

    coeffs: np.ndarray
    generator: Generator = field(default_factory=Generator.derived)

    def __post_init__(self) -> None:
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise InvalidArgumentError("a series needs a nonempty one-dimensional coefficient list")
        bad = np.flatnonzero(~np.isfinite(coeffs))
        if bad.size:
            raise SeriesOverflowError(
                f"coefficient {int(bad[0])} is not finite", witness=int(bad[0])
            )
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        if self.generator.kind is GeneratorKind.BINOMIAL:
            _verify_binomial(coeffs, self.generator.exponent)

    @property
    def trunc_len(self) -> int:
        return int(self.coeffs.size)

    @property
    def degree(self) -> int:
        return self.trunc_len - 1

    def __len__(self) -> int:
        return self.trunc_len

    def __getitem__(self, index):
        return self.coeffs[index]

    def with_generator(self, generator: Generator) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, generator)


class WienerNorm(NamedTuple):
    value: float
    tail_known: bool
    # inf when the series is certified non-summable, nan when unknown
    tail_bound: float


class Evaluation(NamedTuple):
    value: complex
    tail_bound: float | None


class ValueAtOne(NamedTuple):
    value: float
    tail_bound: float
    certified: bool
    converged: bool


class KernelFlags(NamedTuple):
    is_np: bool
    is_wiener_alpha: bool
    is_wiener_k: bool
    type: KernelType


@dataclass(frozen=True)
class KernelPair:
    """
    A pair (alpha, k) with alpha * k = 1 up to `inversion_residual`.
    `violations` lists the indices n >= 1 with k_n <= 0; callers decide.
    """

    alpha: TruncatedSeries
    k: TruncatedSeries
    inversion_residual: float
    flags: KernelFlags
    violations: tuple[int, ...] = ()

    @property
    def N(self) -> int:
        return self.k.degree

    def __str__(self) -> str:
        return f"KernelPair(N={self.N}, type={self.flags.type.value}, np={self.flags.is_np})"


#  ----------- construction ------------ #


def _binomial_coefficients(exponent: float, N: int) -> np.ndarray:
    """
    First N+1 coefficients of (1 - t)**exponent by c_n = c_{n-1} (n - exponent - 1) / n
    """
    n = np.arange(1, N + 1, dtype=float)
    factors = (n - exponent - 1.0) / n
    with np.errstate(over="ignore", invalid="ignore"):
        return np.concatenate(([1.0], np.cumprod(factors)))


def _verify_binomial(coeffs: np.ndarray, exponent: float) -> None:
    reference = _binomial_coefficients(exponent, coeffs.size - 1)
    deviation = np.abs(coeffs - reference)
    allowed = BINOMIAL_CHECK_TOL * np.abs(reference)
    bad = np.flatnonzero(deviation > allowed)
    if bad.size:
        raise InvalidArgumentError(
            f"coefficient {int(bad[0])} does not follow the binomial recurrence for exponent {exponent}",
            witness=int(bad[0]),
        )


def binomial_series(a: float, sign: PowSign, N: int) -> TruncatedSeries:
    """
    Taylor coefficients of (1 - t)**a (PowPlus) or (1 - t)**(-a) (PowMinus) up to degree N
    """
    if not math.isfinite(a):
        raise InvalidArgumentError(f"binomial exponent must be finite, got {a}")
    if N < 1:
        raise InvalidArgumentError(f"truncation N must be positive, got {N}")
    exponent = float(a) if PowSign(sign) is PowSign.PLUS else -float(a)
    return TruncatedSeries(_binomial_coefficients(exponent, N), Generator.binomial(exponent))


def polynomial_series(coeffs, N: int | None = None) -> TruncatedSeries:
    """
    Finite coefficient list, zero-padded (or cut) to degree N when N is given
    """
    values = np.asarray(coeffs, dtype=float)
    if N is not None:
        values = _fit_length(values, N)
    return TruncatedSeries(values, Generator.polynomial())


def tail_extend(head: TruncatedSeries, amplitude: float, decay: float, start: int, N: int) -> TruncatedSeries:
    """
    Keep head coefficients below degree `start` and continue with amplitude * n**(-decay)
    """
    if amplitude <= 0 or decay <= 0:
        raise InvalidArgumentError("tail amplitude and decay must be positive")
    if start < 1:
        raise InvalidArgumentError("tail start degree must be at least 1")
    head_coeffs = extend(head, start - 1).coeffs
    generator = Generator.tail(tuple(head_coeffs), amplitude, decay, start)
    return TruncatedSeries(_tail_coefficients(generator, N), generator)


def _tail_coefficients(generator: Generator, N: int) -> np.ndarray:
    head = np.asarray(generator.head, dtype=float)
    if N < head.size:
        return head[: N + 1].copy()
    n = np.arange(head.size, N + 1, dtype=float)
    return np.concatenate((head, generator.amplitude * n ** (-generator.decay)))


def _fit_length(values: np.ndarray, N: int) -> np.ndarray:
    if values.size >= N + 1:
        return values[: N + 1].copy()
    return np.concatenate((values, np.zeros(N + 1 - values.size)))


def extend(f: TruncatedSeries, N: int) -> TruncatedSeries:
    """
    Return exactly N+1 coefficients of f, continuing past the truncation
    through the closed form when the generator has one.
    """
    if N < 0:
        raise InvalidArgumentError(f"degree must be nonnegative, got {N}")
    if N + 1 <= f.trunc_len:
        return TruncatedSeries(f.coeffs[: N + 1], f.generator)
    kind = f.generator.kind
    if kind is GeneratorKind.BINOMIAL:
        return TruncatedSeries(_binomial_coefficients(f.generator.exponent, N), f.generator)
    if kind in (GeneratorKind.POLYNOMIAL, GeneratorKind.FILE_LIST):
        return TruncatedSeries(_fit_length(f.coeffs, N), f.generator)
    if kind is GeneratorKind.TAIL:
        return TruncatedSeries(_tail_coefficients(f.generator, N), f.generator)
    raise InvalidArgumentError(
        f"series has {f.trunc_len} coefficients and no closed form to reach degree {N}"
    )


def series_from_file(path: str | Path, N: int | None = None) -> TruncatedSeries:
    """
    Read one coefficient per line ('#' starts a comment); index is the line order
    """
    try:
        df = pd.read_csv(
            path, header=None, comment="#", skip_blank_lines=True, encoding="utf-8", dtype=float
        )
    except (OSError, ValueError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise InvalidArgumentError(f"cannot read coefficient file {path}: {exc}") from exc
    if df.shape[1] != 1 or df.empty:
        raise InvalidArgumentError(f"coefficient file {path} must hold one coefficient per line")
    values = df.iloc[:, 0].to_numpy(dtype=float)
    if N is not None:
        values = _fit_length(values, N)
    return TruncatedSeries(values, Generator.file_list())


def series_to_file(f: TruncatedSeries, path: str | Path) -> Path:
    path = Path(path)
    lines = [f"# {f.generator.kind.value} series, {f.trunc_len} coefficients"]
    lines += [repr(float(c)) for c in f.coeffs]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


#  ----------- arithmetic ------------ #


def cauchy_product(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """
    (f g)_n = sum_{j <= n} f_j g_{n-j}, truncated to the shorter operand
    """
    length = min(f.trunc_len, g.trunc_len)
    product = np.convolve(f.coeffs[:length], g.coeffs[:length])[:length]
    return TruncatedSeries(product, Generator.derived())


def _reciprocal_coefficients(alpha: np.ndarray) -> np.ndarray:
    N = alpha.size - 1
    k = np.zeros(N + 1)
    k[0] = 1.0 / alpha[0]
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, N + 1):
            k[n] = -np.dot(alpha[1 : n + 1], k[n - 1 :: -1]) / alpha[0]
    return k


def series_reciprocal(f: TruncatedSeries, N: int) -> TruncatedSeries:
    """
    Coefficients of 1/f up to degree N. Binomial series invert in closed form.
    """
    if f.coeffs[0] == 0:
        raise SingularAtOriginError("series has zero constant term and no reciprocal")
    if f.generator.kind is GeneratorKind.BINOMIAL:
        exponent = -f.generator.exponent
        return TruncatedSeries(_binomial_coefficients(exponent, N), Generator.binomial(exponent))
    coeffs = _reciprocal_coefficients(extend(f, N).coeffs)
    bad = np.flatnonzero(~np.isfinite(coeffs))
    if bad.size:
        raise SeriesOverflowError(
            f"reciprocal coefficient {int(bad[0])} overflows double precision; lower N",
            witness=int(bad[0]),
        )
    return TruncatedSeries(coeffs, Generator.derived())


def inversion_residual(alpha: TruncatedSeries, k: TruncatedSeries) -> float:
    """
    max_n |(alpha k)_n - delta_{n,0}| / max(1, sum_j |alpha_j k_{n-j}|)
    """
    length = min(alpha.trunc_len, k.trunc_len)
    a, b = alpha.coeffs[:length], k.coeffs[:length]
    product = np.convolve(a, b)[:length]
    product[0] -= 1.0
    scale = np.maximum(1.0, np.convolve(np.abs(a), np.abs(b))[:length])
    return float(np.max(np.abs(product) / scale))


def np_sign_violation(alpha: TruncatedSeries) -> int | None:
    """
    First index breaking alpha_0 = 1, alpha_n <= 0 (n >= 1) within NP_SLACK, else None
    """
    if abs(alpha.coeffs[0] - 1.0) > NP_SLACK:
        return 0
    bad = np.flatnonzero(alpha.coeffs[1:] > NP_SLACK)
    return int(bad[0]) + 1 if bad.size else None


def reciprocal(alpha: TruncatedSeries, N: int) -> KernelPair:
    """
    Invert alpha to degree N by k_n = -(1/alpha_0) sum_{j=1}^n alpha_j k_{n-j}
    and populate the kernel flags.
    """
    if N < 1:
        raise InvalidArgumentError(f"truncation N must be positive, got {N}")
    if alpha.coeffs[0] == 0:
        raise SingularAtOriginError("alpha_0 = 0: the kernel is singular at the origin")
    alpha_n = extend(alpha, N)
    return kernel_pair(alpha_n, series_reciprocal(alpha_n, N))


def kernel_pair(alpha: TruncatedSeries, k: TruncatedSeries) -> KernelPair:
    """
    Check alpha * k = 1 by explicit re-multiplication and classify the pair
    """
    residual = inversion_residual(alpha, k)
    if residual > INVERSION_TOL:
        raise InversionError(f"inversion residual {residual:.3e} exceeds {INVERSION_TOL}", witness=residual)
    violations = tuple(int(n) + 1 for n in np.flatnonzero(k.coeffs[1:] <= 0))
    if violations:
        logger.info("reciprocal has %d nonpositive coefficients, first at %d", len(violations), violations[0])
    flags = KernelFlags(
        is_np=np_sign_violation(alpha) is None,
        is_wiener_alpha=summability(alpha).summable,
        is_wiener_k=summability(k).summable,
        type=kernel_type(estimate_at_one(alpha)),
    )
    return KernelPair(alpha=alpha, k=k, inversion_residual=residual, flags=flags, violations=violations)


#  ----------- evaluation and norms ------------ #


def evaluate(f: TruncatedSeries, z: complex) -> Evaluation:
    """
    Horner evaluation of the truncated polynomial at z, |z| <= 1,
    with a bound on the omitted tail when the generator gives one.
    """
    if abs(z) > 1.0 + 1e-15:
        raise OutOfDomainError(f"|z| = {abs(z)} lies outside the closed unit disc")
    value = complex(npoly.polyval(complex(z), f.coeffs))
    return Evaluation(value, tail_bound(f, f.degree, abs(z)))


def wiener_norm(f: TruncatedSeries) -> WienerNorm:
    value = math.fsum(np.abs(f.coeffs))
    tail = tail_bound(f, f.degree, 1.0)
    if tail is None:
        return WienerNorm(value, False, math.nan)
    return WienerNorm(value, True, tail)


class Summability(NamedTuple):
    summable: bool
    certified: bool
    ratio: float


def cauchy_ratio(values: np.ndarray) -> float:
    """
    (S_N - S_{N/2}) / (S_{N/2} - S_{N/4}) for partial sums S of nonnegative values
    """
    values = np.asarray(values, dtype=float)
    N = values.size - 1
    if N < 8:
        return math.nan
    partial = np.cumsum(values)
    late = partial[N] - partial[N // 2]
    early = partial[N // 2] - partial[N // 4]
    if early == 0:
        return 0.0 if late == 0 else math.inf
    return float(late / early)


def summability(f: TruncatedSeries) -> Summability:
    """
    Absolute summability: certified by the generator when possible, else by
    the Cauchy ratio of block sums.
    """
    tail = tail_bound(f, f.degree, 1.0)
    if tail is not None:
        return Summability(math.isfinite(tail), True, math.nan)
    ratio = cauchy_ratio(np.abs(f.coeffs))
    return Summability(bool(ratio < SUMMABILITY_RATIO), False, ratio)


def estimate_at_one(alpha: TruncatedSeries) -> ValueAtOne:
    """
    alpha(1) = sum alpha_n from the partial sum, with a certified tail bound
    for closed-form generators and a geometric block estimate otherwise.
    Binomial generators with a positive exponent give exactly 0.
    """
    generator = alpha.generator
    if generator.kind is GeneratorKind.BINOMIAL and generator.exponent > 0:
        return ValueAtOne(0.0, 0.0, True, True)
    partial = math.fsum(alpha.coeffs)
    tail = tail_bound(alpha, alpha.degree, 1.0)
    if tail is not None:
        return ValueAtOne(partial, tail, True, math.isfinite(tail))
    abs_coeffs = np.abs(alpha.coeffs)
    ratio = cauchy_ratio(abs_coeffs)
    if not ratio < SUMMABILITY_RATIO:
        return ValueAtOne(partial, math.inf, False, False)
    N = alpha.degree
    last_block = math.fsum(abs_coeffs[N // 2 + 1 :])
    return ValueAtOne(partial, last_block * ratio / (1.0 - ratio), False, True)


def kernel_type(at_one: ValueAtOne) -> KernelType:
    if not at_one.converged:
        return KernelType.INDETERMINATE
    if abs(at_one.value) <= at_one.tail_bound + CRITICAL_SLACK:
        return KernelType.CRITICAL
    if at_one.value > at_one.tail_bound + CRITICAL_SLACK:
        return KernelType.SUBCRITICAL
    return KernelType.INDETERMINATE


#  ----------- certified tails ------------ #


def _is_nonnegative_integer(x: float) -> bool:
    return x >= 0 and float(x).is_integer()


def _binomial_tail(exponent: float, D: int, r: float) -> float:
    """
    Bound on sum_{n > D} |c_n| r**n for the coefficients c of (1 - t)**exponent
    """
    if r == 0 or (_is_nonnegative_integer(exponent) and D >= exponent):
        return 0.0
    # past m the ratio |c_{n+1} / c_n| = |n - exponent| / (n + 1) has a fixed sign pattern
    m = max(D + 1, int(math.ceil(exponent)) + 1)
    coeffs = _binomial_coefficients(exponent, m)
    explicit = math.fsum(np.abs(coeffs[D + 1 : m]) * r ** np.arange(D + 1, m))
    if r >= 1.0:
        if exponent < 0:
            return math.inf
        # partial sums of (1 - t)**e are the coefficients of (1 - t)**(e - 1); the full sum is 0
        return explicit + abs(_binomial_coefficients(exponent - 1.0, m - 1)[-1])
    q = 1.0 if exponent >= -1 else (m - exponent) / (m + 1.0)
    if q * r >= 1.0:
        return math.inf
    return explicit + abs(coeffs[m]) * r**m / (1.0 - q * r)


def _power_tail(amplitude: float, decay: float, m: int, r: float) -> float:
    """
    Bound on sum_{n >= m} amplitude * n**(-decay) * r**n
    """
    if r == 0:
        return 0.0
    if r >= 1.0:
        return amplitude * float(special.zeta(decay, m)) if decay > 1 else math.inf
    geometric = amplitude * m ** (-decay) * r**m / (1.0 - r)
    if decay > 1:
        return min(geometric, amplitude * float(special.zeta(decay, m)))
    return geometric


def _generator_tail(f: TruncatedSeries, r: float) -> float | None:
    generator = f.generator
    D = f.degree
    if generator.kind in (GeneratorKind.POLYNOMIAL, GeneratorKind.FILE_LIST):
        return 0.0
    if generator.kind is GeneratorKind.BINOMIAL:
        return _binomial_tail(generator.exponent, D, r)
    if generator.kind is GeneratorKind.TAIL:
        start = generator.start
        head = np.abs(np.asarray(generator.head[D + 1 : start], dtype=float))
        explicit = math.fsum(head * r ** np.arange(D + 1, D + 1 + head.size)) if head.size else 0.0
        return explicit + _power_tail(generator.amplitude, generator.decay, max(D + 1, start), r)
    return None


def tail_bound(f: TruncatedSeries, N: int | None = None, r: float = 1.0) -> float | None:
    """
    Certified bound on sum_{n > N} |f_n| r**n, or None when the generator gives none.
    inf means certified divergence.
    """
    N = f.degree if N is None else N
    beyond = _generator_tail(f, r)
    if beyond is None:
        return None
    stored = np.abs(f.coeffs[N + 1 :])
    explicit = math.fsum(stored * r ** np.arange(N + 1, f.trunc_len)) if stored.size else 0.0
    return explicit + beyond


def derivative_tail_bound(f: TruncatedSeries, r: float) -> float | None:
    """
    Certified bound on sum_{n > N} n |f_n| r**(n-1), used for Lipschitz bounds on circles
    """
    generator = f.generator
    D = f.degree
    if generator.kind in (GeneratorKind.POLYNOMIAL, GeneratorKind.FILE_LIST):
        return 0.0
    if generator.kind is GeneratorKind.BINOMIAL:
        # n c_n(e) = -e c_{n-1}(e - 1)
        exponent = generator.exponent
        return abs(exponent) * _binomial_tail(exponent - 1.0, D - 1, r)
    if generator.kind is GeneratorKind.TAIL and generator.decay >= 1:
        m = max(D + 1, generator.start)
        head = np.abs(np.asarray(generator.head[D + 1 : generator.start], dtype=float))
        idx = np.arange(D + 1, D + 1 + head.size)
        explicit = math.fsum(idx * head * r ** (idx - 1.0)) if head.size else 0.0
        if r >= 1.0:
            if generator.decay > 2:
                return explicit + generator.amplitude * float(special.zeta(generator.decay - 1.0, m))
            return math.inf
        return explicit + generator.amplitude * m ** (1.0 - generator.decay) * r ** (m - 1) / (1.0 - r)
    return None


def sup_tail(f: TruncatedSeries, n_from: int) -> float | None:
    """
    sup_{n > n_from} |f_n| over stored and closed-form coefficients; None if unknown
    """
    D = f.degree
    stored = np.abs(f.coeffs[n_from + 1 :])
    stored_max = float(stored.max()) if stored.size else 0.0
    generator = f.generator
    if generator.kind in (GeneratorKind.POLYNOMIAL, GeneratorKind.FILE_LIST):
        return stored_max
    if generator.kind is GeneratorKind.BINOMIAL:
        exponent = generator.exponent
        if _is_nonnegative_integer(exponent) and D >= exponent:
            return stored_max
        if exponent < -1:
            return math.inf
        # |c_n| is nonincreasing once n > exponent
        m = max(D + 1, int(math.ceil(exponent)) + 1)
        beyond = np.abs(_binomial_coefficients(exponent, m)[D + 1 :])
        return max(stored_max, float(beyond.max()))
    if generator.kind is GeneratorKind.TAIL:
        m = max(D + 1, generator.start)
        head = np.abs(np.asarray(generator.head[D + 1 : generator.start], dtype=float))
        head_max = float(head.max()) if head.size else 0.0
        return max(stored_max, head_max, generator.amplitude * m ** (-generator.decay))
    return None


#  ----------- Cesàro numbers ------------ #


def cesaro_numbers(a: float, n_max: int) -> np.ndarray:
    """
    k^a(0..n_max), the Taylor coefficients of (1 - t)**(-a), by the stable recurrence
    """
    if n_max < 0:
        raise InvalidArgumentError(f"n_max must be nonnegative, got {n_max}")
    return _binomial_coefficients(-float(a), n_max)


def cesaro_number(a: float, n: int) -> float:
    """
    k^a(n) = a (a+1) ... (a+n-1) / n!
    """
    return float(cesaro_numbers(a, n)[n])


def cesaro_number_gamma(a: float, n: int) -> float:
    """
    k^a(n) = Gamma(n + a) / (Gamma(a) Gamma(n + 1)); undefined for a in {0, -1, -2, ...}
    """
    if a <= 0 and float(a).is_integer():
        raise InvalidArgumentError(f"the Gamma formula is undefined for a = {a}")
    sign = special.gammasgn(n + a) * special.gammasgn(a)
    return float(sign * math.exp(special.gammaln(n + a) - special.gammaln(a) - special.gammaln(n + 1)))
