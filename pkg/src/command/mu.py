from argparse import ArgumentParser, Namespace

from src.command.base import BaseCommand
from src.command.nu import get_nu_argparser
from src.geometry.zariski import mu_of


def get_mu_argparser() -> ArgumentParser:
    return get_nu_argparser()


class MuCommand(BaseCommand):
    def __init__(self, command: str = "mu", args: Namespace = None):
        if args is None:
            args = get_mu_argparser().parse_args()
        super().__init__(command, args)

    def execute(self):
        model = self.load_model()
        return {"curve": self.args.flag, "mu": mu_of(model, self.divisor(model), self.args.flag)}

    def render(self, result):
        self.logger.print(f"mu_{result['curve']}(D) = {result['mu']}", markup=False)
