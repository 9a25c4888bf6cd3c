from ...ergodic_lab import OracleKind
from ...exceptions import InvalidArgumentError
from ...kernel_spec import Pow1mt, elaborate_text, to_text
from ...operator_core import diagonal_unitary, direct_sum
from ...scripts.pipelines import (
    PROBE_VECTORS,
    TRICHOTOMY_VECTORS,
    ergodic_implications,
    ergodic_oracle,
    ergodic_probe,
    ergodic_projection,
    ergodic_trichotomy,
    load_operator,
    load_series,
)
from ...series_core import series_reciprocal
from ..base import HereditaryCommand, add_spec_arguments

DEFAULT_TRICHOTOMY_DIM = 32
DEFAULT_PROJECTION_DIM = 64


def add_operator_arguments(parser, default_dim: str) -> None:
    source = add_spec_arguments(parser, "--kernel")
    source.add_argument("--s", type=float, help="use the section of B_s, i.e. --kernel 'pow1mt(-s)'")
    parser.add_argument("--operator", help="CSV matrix of T (default: backward shift section on the kernel)")
    parser.add_argument("--dim", type=int, help=f"section dimension (default {default_dim})")


def parse_angles(text: str) -> list[float]:
    try:
        return [float(angle) for angle in text.split(",") if angle.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(f"--angles must be a comma list of reals, got {text!r}") from exc


class Command(HereditaryCommand):
    help = "Cesàro means of operator orbits"
    name = "ergodic"
    actions = {
        "probe": "sample M^a_T(n) on the n-grid and classify its trend",
        "oracle": "closed-form thresholds and power norms of the shift B_s",
        "implications": "check that (C, a, p)-boundedness carries over to (C, b, q)",
        "trichotomy": "compare ||Wx||, min ||T^n x|| and the Cesàro limit on shift (+) unitary",
        "projection": "mean ergodic projection and the decomposition Ker(I - T) + Ran(I - T)",
    }

    def add_probe_arguments(self, parser):
        add_operator_arguments(parser, "nmax + 1")
        parser.add_argument("--a", type=float, required=True, help="Cesàro order a > 0")
        parser.add_argument("--p", type=float, default=2.0, help="exponent p >= 1")
        parser.add_argument("--nmax", type=int, required=True, help="largest n probed")
        parser.add_argument("--count", type=int, default=PROBE_VECTORS, help="number of random probe vectors")
        parser.add_argument("--along-basis", action="store_true", help="probe x = e_n at each grid point n")

    def add_oracle_arguments(self, parser):
        parser.add_argument("--s", type=float, required=True, help="shift parameter s")
        parser.add_argument(
            "--kind", choices=[kind.value for kind in OracleKind], default=OracleKind.QUADRATIC.value
        )
        parser.add_argument("--a", type=float, help="Cesàro order (Quadratic) or kernel exponent (Membership)")
        parser.add_argument("--b", type=float, help="Cesàro order of the (C, b, q) means (General)")
        parser.add_argument("--q", type=float, default=2.0, help="exponent q in [1, 2] (General)")
        parser.add_argument("--m", type=int, help="power m (Norm)")

    def add_implications_arguments(self, parser):
        add_operator_arguments(parser, "nmax + 1")
        parser.add_argument("--a", type=float, required=True, help="order of the bounded means")
        parser.add_argument("--p", type=float, default=2.0, help="exponent of the bounded means")
        parser.add_argument("--b", type=float, required=True, help="order of the implied means")
        parser.add_argument("--q", type=float, default=2.0, help="exponent of the implied means")
        parser.add_argument("--nmax", type=int, required=True, help="largest n probed")
        parser.add_argument("--count", type=int, default=PROBE_VECTORS, help="number of random probe vectors")
        parser.add_argument("--along-basis", action="store_true", help="probe x = e_n at each grid point n")

    def add_trichotomy_arguments(self, parser):
        add_spec_arguments(parser)
        parser.add_argument("--kernel-spec", help="the kernel k as a spec (default 1/alpha)")
        parser.add_argument("--operator", help="CSV matrix of T (default: section on k plus a diagonal unitary)")
        parser.add_argument("--dim", type=int, default=DEFAULT_TRICHOTOMY_DIM, help="shift section dimension")
        parser.add_argument("--angles", default="0.4,2.2", help="eigenvalue phases of the unitary summand")
        parser.add_argument("--b", type=float, default=1.0, help="Cesàro order of the limit indicator")
        parser.add_argument("--nmax", type=int, default=4000, help="largest n of the orbit")
        parser.add_argument("--count", type=int, default=TRICHOTOMY_VECTORS, help="number of random vectors")

    def add_projection_arguments(self, parser):
        add_operator_arguments(parser, DEFAULT_PROJECTION_DIM)
        parser.add_argument("--b", type=float, default=1.0, help="Cesàro order b > 0")
        parser.add_argument("--nmax", type=int, required=True, help="n of the final mean")

    def operator_from(self, config, options, dim):
        """T with the weights it was built on (None for a CSV matrix) and the spec text."""
        if options["operator"]:
            return load_operator(options["operator"], None, dim), None, None
        spec = options["spec"]
        if options["s"] is not None:
            if not options["s"] > 0:
                raise InvalidArgumentError(f"--s must be positive, got {options['s']}")
            spec = to_text(Pow1mt(-options["s"]))
        kappa, text = load_series(spec, options["spec_file"], max(config["truncation"], dim - 1))
        return load_operator(None, kappa, dim), kappa, text

    def handle_probe(self, config, options):
        n_max = self.positive(options, "nmax")
        T, kappa, text = self.operator_from(config, options, options["dim"] or n_max + 1)
        payload, verdicts, tables = ergodic_probe(
            T, options["a"], options["p"], n_max, config, options["count"], options["along_basis"], kappa
        )
        return {"spec": text, **payload}, verdicts, tables

    def handle_oracle(self, config, options):
        kind = OracleKind(options["kind"])
        flag = {OracleKind.GENERAL: "b", OracleKind.NORM: "m"}.get(kind, "a")
        if options[flag] is None:
            raise InvalidArgumentError(f"--kind {kind.value} needs --{flag}")
        return ergodic_oracle(options["s"], kind, options[flag], options["q"])

    def handle_implications(self, config, options):
        n_max = self.positive(options, "nmax")
        T, _, text = self.operator_from(config, options, options["dim"] or n_max + 1)
        payload, verdicts, tables = ergodic_implications(
            T,
            (options["a"], options["p"]),
            (options["b"], options["q"]),
            n_max,
            config,
            options["count"],
            options["along_basis"],
        )
        return {"spec": text, **payload}, verdicts, tables

    def handle_trichotomy(self, config, options):
        N = config["truncation"]
        n_max = self.positive(options, "nmax")
        alpha, text = load_series(options["spec"], options["spec_file"], N)
        if options["kernel_spec"]:
            k = elaborate_text(options["kernel_spec"], N)
        else:
            k = series_reciprocal(alpha, N)
        T = load_operator(options["operator"], k, options["dim"])
        angles = parse_angles(options["angles"])
        if angles and not options["operator"]:
            T = direct_sum(T, diagonal_unitary(angles))
        payload, verdicts, tables = ergodic_trichotomy(alpha, k, T, n_max, config, options["b"], options["count"])
        return {"spec": text, **payload}, verdicts, tables

    def handle_projection(self, config, options):
        n_max = self.positive(options, "nmax")
        T, _, text = self.operator_from(config, options, options["dim"] or DEFAULT_PROJECTION_DIM)
        payload, verdicts, tables = ergodic_projection(T, options["b"], n_max)
        return {"spec": text, **payload}, verdicts, tables

    @staticmethod
    def positive(options, name):
        value = options[name]
        if value < 1:
            raise InvalidArgumentError(f"--{name} must be positive, got {value}")
        return value
