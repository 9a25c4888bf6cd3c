from ...kernel_analysis import SignPattern
from ...scripts.pipelines import example_signs
from ..base import HereditaryCommand


class Command(HereditaryCommand):
    help = "generate worked examples"
    name = "example"
    actions = {"signs": "kernel with prescribed signs of alpha_2..alpha_N and all k_n > 0"}

    def add_signs_arguments(self, parser):
        parser.add_argument("--pattern", required=True, help="signs of alpha_2.., e.g. '+-+'")
        parser.add_argument("--eps", type=float, default=1e-3, help="starting epsilon")
        parser.add_argument("--amplitude", type=float, default=0.05, help="tail amplitude A of k_n = A n^-b")
        parser.add_argument("--decay", type=float, default=2.0, help="tail exponent b > 1")

    def handle_signs(self, config, options):
        pattern = SignPattern.from_text(
            options["pattern"], epsilon=options["eps"], amplitude=options["amplitude"], decay=options["decay"]
        )
        payload, verdicts, tables = example_signs(pattern, config["truncation"])
        return {"pattern": str(pattern), **payload}, verdicts, tables
