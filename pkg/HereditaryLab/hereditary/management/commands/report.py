from ...scripts.pipelines import DEFAULT_MODEL_DIM, load_series, report_bundle
from ..base import HereditaryCommand, add_spec_arguments


class Command(HereditaryCommand):
    help = "every check on one kernel, in one report"
    name = "report"
    actions = {"bundle": "kernel suite, shift membership and model residuals"}

    def add_bundle_arguments(self, parser):
        add_spec_arguments(parser)
        parser.add_argument("--dim", type=int, default=DEFAULT_MODEL_DIM, help="section dimension for the model")

    def handle_bundle(self, config, options):
        N = config["truncation"]
        alpha, text = load_series(options["spec"], options["spec_file"], N)
        payload, verdicts, tables = report_bundle(alpha, N, config, options["dim"])
        return {"spec": text, **payload}, verdicts, tables
