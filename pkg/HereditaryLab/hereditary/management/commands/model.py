from ...kernel_spec import elaborate_text
from ...scripts.pipelines import DEFAULT_MODEL_DIM, load_operator, load_series, model_build
from ...series_core import series_reciprocal
from ..base import HereditaryCommand, add_spec_arguments


class Command(HereditaryCommand):
    help = "build and verify the model (V, W, S) of an operator"
    name = "model"
    actions = {"build": "defect, transform, complement and isometry with residuals"}

    def add_build_arguments(self, parser):
        add_spec_arguments(parser, "--kernel")
        parser.add_argument("--kernel-spec", help="the kernel k as a spec (default 1/alpha)")
        parser.add_argument("--operator", help="CSV matrix of T (default: backward shift section on k)")
        parser.add_argument("--dim", type=int, default=DEFAULT_MODEL_DIM, help="section dimension d")
        parser.add_argument("--degree", type=int, help="transform degree M (default: chosen from the tail)")

    def handle_build(self, config, options):
        N = config["truncation"]
        alpha, text = load_series(options["spec"], options["spec_file"], N)
        if options["kernel_spec"]:
            k = elaborate_text(options["kernel_spec"], N)
        else:
            k = series_reciprocal(alpha, N)
        T = load_operator(options["operator"], k, options["dim"])
        payload, verdicts, tables = model_build(alpha, k, T, config, options["degree"])
        return {"spec": text, **payload}, verdicts, tables
