"""
Pipelines behind the management commands

Each pipeline takes validated inputs, runs the module operations and returns
(payload, verdicts, tables) for the report writer.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import yaml
from django.conf import settings

from ..ergodic_lab import (
    OracleKind,
    cesaro_probe,
    implication_battery,
    mean_ergodic_projection,
    shift_threshold_oracle,
    trichotomy_test,
)
from ..exceptions import HereditaryError, InvalidArgumentError, ModelInvalidError, NotConvergedError
from ..kernel_analysis import (
    ConditionId,
    ConditionReport,
    SignPattern,
    Verdict,
    check_hypotheses_A,
    check_hypotheses_B,
    classify_critical,
    classify_np,
    generate_sign_pattern_kernel,
    kernel_suite,
)
from ..kernel_spec import elaborate, parse_kernel_spec, to_text
from ..model_builder import build_model_bundle, minimality_check, verify_np_contraction, verify_relation_DCW
from ..operator_core import (
    DenseOperator,
    Direction,
    probe_vectors,
    read_matrix_csv,
    shift_membership_backward,
    shift_membership_forward,
    shift_section,
)
from ..serializers import (
    ConditionReportSerializer,
    ErgodicProbeSerializer,
    KernelPairSerializer,
    MembershipReportSerializer,
    ModelBundleSerializer,
    RunConfigSerializer,
)
from ..series_core import GeneratorKind, TruncatedSeries, extend, reciprocal, series_to_file
from .report_writer import probe_tables

logger = logging.getLogger(__name__)

HYPOTHESES = ("NPType", "CriticalType", "HypA", "HypB")
DEFAULT_MODEL_DIM = 64
PROBE_VECTORS = 4
TRICHOTOMY_VECTORS = 20
PROJECTION_TOL = 1e-6


#  ----------- configuration and inputs ------------ #


def load_run_config(overrides: dict, config_path: str | None = None) -> dict:
    """
    settings.HEREDITARY, then the YAML file, then command-line overrides (None values skipped)
    """
    config = {key: value for key, value in settings.HEREDITARY.items() if key != "report_schema"}
    if config_path:
        try:
            with open(config_path, encoding="utf-8") as fh:
                loaded = yaml.safe_load(fh) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise InvalidArgumentError(f"cannot read config file {config_path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise InvalidArgumentError(f"config file {config_path} must hold a mapping")
        unknown = sorted(set(loaded) - set(config))
        if unknown:
            raise InvalidArgumentError(f"unknown config keys: {', '.join(unknown)}")
        config.update(loaded)
    config.update({key: value for key, value in overrides.items() if value is not None})

    serializer = RunConfigSerializer(data=config)
    if not serializer.is_valid():
        raise InvalidArgumentError(f"invalid run configuration: {dict(serializer.errors)}")
    return dict(serializer.validated_data)


def read_spec(spec: str | None, spec_file: str | None) -> tuple[str, Path | None]:
    if bool(spec) == bool(spec_file):
        raise InvalidArgumentError("give exactly one of --spec and --spec-file")
    if spec:
        return spec, None
    path = Path(spec_file)
    try:
        return path.read_text(encoding="utf-8").strip(), path.parent
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidArgumentError(f"cannot read spec file {spec_file}: {exc}") from exc


def load_series(spec: str | None, spec_file: str | None, N: int) -> tuple[TruncatedSeries, str]:
    text, base_dir = read_spec(spec, spec_file)
    ast = parse_kernel_spec(text)
    return elaborate(ast, N, base_dir), to_text(ast)


def load_operator(path: str | None, kappa: TruncatedSeries, dim: int) -> DenseOperator:
    """The operator in a matrix CSV, or else the backward shift section on kappa."""
    if path:
        return read_matrix_csv(path)
    if kappa.trunc_len < dim:
        kappa = extend(kappa, dim - 1)
    return shift_section(kappa, Direction.BACKWARD, dim).operator


def condition_payload(reports: list[ConditionReport]) -> tuple[list[dict], list, dict]:
    reports = sorted(reports, key=lambda report: report.condition_id.value)
    tables = {
        f"{report.condition_id.value}_{name}": table
        for report in reports
        for name, table in report.trend_tables.items()
    }
    return ConditionReportSerializer(reports, many=True).data, [r.verdict for r in reports], tables


#  ----------- kernel ------------ #


def kernel_check(alpha: TruncatedSeries, N: int, config: dict, conditions: str = "hypotheses") -> tuple:
    pair = reciprocal(alpha, N)
    if conditions == "all":
        reports = kernel_suite(pair, config["circle_samples"], config["m_grid"])
    else:
        wanted = HYPOTHESES if conditions == "hypotheses" else tuple(c.strip() for c in conditions.split(","))
        runners = {
            "NPType": lambda: classify_np(pair.alpha),
            "CriticalType": lambda: classify_critical(pair),
            "HypA": lambda: check_hypotheses_A(pair, config["circle_samples"]),
            "HypB": lambda: check_hypotheses_B(pair),
        }
        unknown = [c for c in wanted if c not in runners]
        if unknown:
            raise InvalidArgumentError(
                f"unknown conditions {', '.join(unknown)}; use 'all', 'hypotheses' or a subset of {', '.join(runners)}"
            )
        reports = [runners[c]() for c in wanted]
    data, verdicts, tables = condition_payload(reports)
    payload = {"pair": KernelPairSerializer(pair).data, "reports": data}
    return payload, verdicts, tables


def kernel_invert(alpha: TruncatedSeries, N: int, series_out: str | None = None) -> tuple:
    pair = reciprocal(alpha, N)
    if series_out:
        series_to_file(pair.k, series_out)
    verdicts = [Verdict.FAILS if pair.violations else Verdict.HOLDS]
    payload = {"pair": KernelPairSerializer(pair, context={"coefficients": True}).data}
    return payload, verdicts, {}


#  ----------- shift ------------ #


def shift_membership(
    alpha: TruncatedSeries, kappa: TruncatedSeries, direction: str, m_max: int | None = None
) -> tuple:
    direction = Direction(direction)
    if direction is Direction.BACKWARD:
        report = shift_membership_backward(alpha, kappa)
    else:
        report = shift_membership_forward(alpha, kappa, m_max)
    payload = {"membership": MembershipReportSerializer(report).data}
    return payload, [report.in_Cw, report.in_Cw_plus], report.trend_tables


#  ----------- model ------------ #


def model_build(alpha: TruncatedSeries, k: TruncatedSeries, T: DenseOperator, config: dict, M: int | None) -> tuple:
    tol = config["model_tol"]
    bundle = build_model_bundle(alpha, k, T, M, tol, config["rank_tol"], config["psd_tol"])
    diagnostics = bundle.diagnostics
    probes = probe_vectors(T.dim, 100, config["seed"], include_basis=False)
    relation = verify_relation_DCW(alpha, T, bundle.C, bundle.W, probes)
    minimality = minimality_check(bundle, config["rank_tol"])
    checks = {
        "isometry": diagnostics["isometry_residual"] <= tol,
        "intertwine": diagnostics["intertwine_residual"] <= tol,
        "S": diagnostics["S_residual"] <= tol,
        "relation_DCW": relation["residual"] <= tol,
    }
    contraction = None
    if classify_np(alpha).verdict is Verdict.HOLDS:
        contraction = verify_np_contraction(alpha, T, bundle.V, tol)
        checks["contraction"] = contraction["passes"]
    verdicts = [Verdict.HOLDS if passed else Verdict.FAILS for passed in checks.values()]
    payload = {
        "model": ModelBundleSerializer(bundle).data,
        "relation_DCW": relation,
        "minimality": minimality,
        "contraction": contraction,
        "checks": checks,
    }
    return payload, verdicts, {}


#  ----------- ergodic ------------ #


def probe_grid(n_grid: list[int], n_max: int) -> list[int]:
    grid = [n for n in n_grid if n < n_max]
    return grid + [n_max]


def shift_oracle(kappa: TruncatedSeries | None, a: float, p: float) -> dict | None:
    """Closed-form expectation when T is the section of B_s, i.e. kappa = (1 - t)^(-s) with 0 < s < 1."""
    if kappa is None or kappa.generator.kind is not GeneratorKind.BINOMIAL or not 1.0 <= p <= 2.0:
        return None
    s = -kappa.generator.exponent
    if not 0 < s < 1:
        return None
    return {"s": s, "bounded": shift_threshold_oracle(s, a, q=p, kind=OracleKind.GENERAL)}


def ergodic_probe(
    T: DenseOperator,
    a: float,
    p: float,
    n_max: int,
    config: dict,
    count: int = PROBE_VECTORS,
    along_basis: bool = False,
    kappa: TruncatedSeries | None = None,
) -> tuple:
    grid = probe_grid(config["n_grid"], n_max)
    vectors = None if along_basis else probe_vectors(T.dim, count, config["seed"], include_basis=False)
    probe = cesaro_probe(T, vectors, a, p, grid, along_basis=along_basis, operator_ref=T.labels)
    verdict = Verdict.TREND_HOLDS if probe.bounded else Verdict.TREND_FAILS
    payload = {"probe": ErgodicProbeSerializer(probe).data}
    oracle = shift_oracle(kappa, a, p)
    if oracle is not None:
        payload["oracle"] = oracle
        if oracle["bounded"] != probe.bounded:
            logger.warning("probe trend %s disagrees with the closed form for s = %s", probe.trend.value, oracle["s"])
    return payload, [verdict], probe_tables(probe.samples)


def ergodic_oracle(s: float, kind: str, value: float, q: float = 2.0) -> tuple:
    kind = OracleKind(kind)
    result = shift_threshold_oracle(s, value, q, kind)
    payload = {"oracle": {"s": s, "kind": kind, "value": value, "q": q, "result": result}}
    if kind is OracleKind.NORM:
        return payload, [Verdict.HOLDS], {}
    return payload, [Verdict.HOLDS if result else Verdict.FAILS], {}


def ergodic_implications(
    T: DenseOperator,
    antecedent: tuple[float, float],
    consequent: tuple[float, float],
    n_max: int,
    config: dict,
    count: int = PROBE_VECTORS,
    along_basis: bool = False,
) -> tuple:
    grid = probe_grid(config["n_grid"], n_max)
    vectors = None if along_basis else probe_vectors(T.dim, count, config["seed"], include_basis=False)
    report = implication_battery(T, [(antecedent, consequent)], vectors, grid, along_basis)
    verdict = Verdict.TREND_HOLDS if report["violations"] == 0 else Verdict.TREND_FAILS
    return {"implications": report}, [verdict], {}


def ergodic_trichotomy(
    alpha: TruncatedSeries,
    k: TruncatedSeries,
    T: DenseOperator,
    n_max: int,
    config: dict,
    b: float = 1.0,
    count: int = TRICHOTOMY_VECTORS,
) -> tuple:
    bundle = build_model_bundle(alpha, k, T, None, config["model_tol"], config["rank_tol"], config["psd_tol"])
    vectors = probe_vectors(T.dim, count, config["seed"], include_basis=False)
    report = trichotomy_test(T, bundle, vectors, n_max, b)
    payload = {"trichotomy": report, "W_rank": int(bundle.W_basis.shape[1])}
    return payload, [Verdict(report["verdict"])], {}


def ergodic_projection(T: DenseOperator, b: float, n_max: int) -> tuple:
    """Mean ergodic projection; means that have not settled give TrendFails with the Cauchy gap."""
    try:
        _, residuals = mean_ergodic_projection(T, b, n_max)
    except NotConvergedError as exc:
        logger.warning("%s", exc.message)
        return {"projection": {"converged": False, "b": b, "n_max": n_max, **exc.witness}}, [Verdict.TREND_FAILS], {}
    verdict = Verdict.TREND_HOLDS if residuals["decomposition_residual"] <= PROJECTION_TOL else Verdict.TREND_FAILS
    return {"projection": {"converged": True, "b": b, "n_max": n_max, **residuals}}, [verdict], {}


#  ----------- examples ------------ #


def example_signs(pattern: SignPattern, N: int) -> tuple:
    pair, report = generate_sign_pattern_kernel(pattern, N)
    payload = {
        "pair": KernelPairSerializer(pair, context={"coefficients": N <= 64}).data,
        "reports": ConditionReportSerializer([report], many=True).data,
    }
    return payload, [report.verdict], report.trend_tables


#  ----------- bundle ------------ #


def _guarded(condition_id: ConditionId, run, N: int) -> list[ConditionReport]:
    try:
        return run()
    except HereditaryError as exc:
        logger.warning("%s: %s", condition_id.value, exc.message)
        verdict = Verdict.FAILS if isinstance(exc, ModelInvalidError) else Verdict.INDETERMINATE
        return [ConditionReport(condition_id, verdict, {"error": exc.code, "message": exc.message}, N)]


def report_bundle(alpha: TruncatedSeries, N: int, config: dict, dim: int = DEFAULT_MODEL_DIM) -> tuple:
    """
    Kernel suite, membership of alpha for the backward shift on k and the model of the
    d x d section of that shift. The three parts run concurrently; reports are merged
    in lexicographic order of condition_id.
    """
    pair = reciprocal(alpha, N)

    def suite():
        return kernel_suite(pair, config["circle_samples"], config["m_grid"])

    def membership():
        if pair.violations:
            return []
        report = shift_membership_backward(pair.alpha, pair.k)
        witness = {"in_Cw": report.in_Cw.value, "in_Cw_plus": report.in_Cw_plus.value, **report.witness}
        return [ConditionReport(ConditionId.SHIFT_MEMBERSHIP, report.in_Cw_plus, witness, N, report.trend_tables)]

    def model():
        if pair.violations:
            return []
        T = shift_section(pair.k, Direction.BACKWARD, min(dim, N + 1)).operator
        payload, verdicts, _ = model_build(pair.alpha, pair.k, T, config, None)
        verdict = Verdict.FAILS if Verdict.FAILS in verdicts else Verdict.HOLDS
        witness = {key: payload[key] for key in ("model", "checks", "relation_DCW", "minimality")}
        return [ConditionReport(ConditionId.MODEL_RESIDUALS, verdict, witness, N)]

    jobs = [
        (ConditionId.HYP_A, suite),
        (ConditionId.SHIFT_MEMBERSHIP, membership),
        (ConditionId.MODEL_RESIDUALS, model),
    ]
    with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
        futures = [pool.submit(_guarded, condition_id, run, N) for condition_id, run in jobs]
        reports = [report for future in futures for report in future.result()]

    data, verdicts, tables = condition_payload(reports)
    return {"pair": KernelPairSerializer(pair).data, "reports": data}, verdicts, tables
