from argparse import ArgumentParser, Namespace

from src.command.base import BaseCommand, get_divisor_argparser
from src.geometry.zariski import nu_of


def get_nu_argparser() -> ArgumentParser:
    parser = get_divisor_argparser()
    parser.add_argument("--flag", type=str, required=True, help="label of the curve C")
    return parser


class NuCommand(BaseCommand):
    def __init__(self, command: str = "nu", args: Namespace = None):
        if args is None:
            args = get_nu_argparser().parse_args()
        super().__init__(command, args)

    def execute(self):
        model = self.load_model()
        return {"curve": self.args.flag, "nu": nu_of(model, self.divisor(model), self.args.flag)}

    def render(self, result):
        self.logger.print(f"nu_{result['curve']}(D) = {result['nu']}", markup=False)
