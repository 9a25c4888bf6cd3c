from ...scripts.pipelines import kernel_check, kernel_invert, load_series
from ..base import HereditaryCommand, add_spec_arguments


class Command(HereditaryCommand):
    help = "check the hypotheses on a kernel alpha, or invert it to k = 1/alpha"
    name = "kernel"
    actions = {
        "check": "run condition checks on alpha and k = 1/alpha",
        "invert": "invert alpha to degree N",
    }

    def add_check_arguments(self, parser):
        add_spec_arguments(parser)
        parser.add_argument(
            "--conditions",
            default="hypotheses",
            help="'hypotheses' (NPType, CriticalType, HypA, HypB), 'all', or a comma list",
        )

    def add_invert_arguments(self, parser):
        add_spec_arguments(parser)
        parser.add_argument("--series-out", help="write the coefficients of k to this file")

    def handle_check(self, config, options):
        N = config["truncation"]
        alpha, text = load_series(options["spec"], options["spec_file"], N)
        payload, verdicts, tables = kernel_check(alpha, N, config, options["conditions"])
        return {"spec": text, **payload}, verdicts, tables

    def handle_invert(self, config, options):
        N = config["truncation"]
        alpha, text = load_series(options["spec"], options["spec_file"], N)
        payload, verdicts, tables = kernel_invert(alpha, N, options["series_out"])
        return {"spec": text, **payload}, verdicts, tables
