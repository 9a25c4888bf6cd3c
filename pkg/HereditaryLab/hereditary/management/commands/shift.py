from ...kernel_spec import elaborate_text
from ...operator_core import Direction
from ...scripts.pipelines import load_series, shift_membership
from ...series_core import series_reciprocal
from ..base import HereditaryCommand, add_spec_arguments


class Command(HereditaryCommand):
    help = "membership of weighted shifts in the classes of a kernel alpha"
    name = "shift"
    actions = {"membership": "decide C_alpha^w and C_alpha^{w,+} for a weighted shift"}

    def add_membership_arguments(self, parser):
        add_spec_arguments(parser)
        parser.add_argument("--kappa-spec", help="weights ||t^n||^2 = kappa_n as a spec (default 1/alpha)")
        parser.add_argument(
            "--direction",
            type=str.capitalize,
            choices=[direction.value for direction in Direction],
            default=Direction.BACKWARD.value,
        )
        parser.add_argument("--m-max", type=int, help="largest m checked for the forward shift")

    def handle_membership(self, config, options):
        N = config["truncation"]
        alpha, text = load_series(options["spec"], options["spec_file"], N)
        if options["kappa_spec"]:
            kappa = elaborate_text(options["kappa_spec"], N)
        else:
            kappa = series_reciprocal(alpha, N)
        payload, verdicts, tables = shift_membership(alpha, kappa, options["direction"], options["m_max"])
        return {"spec": text, "direction": options["direction"], **payload}, verdicts, tables
