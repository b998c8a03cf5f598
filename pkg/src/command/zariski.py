from argparse import ArgumentParser, Namespace

from src.command.base import BaseCommand, get_divisor_argparser
from src.geometry.zariski import volume, zariski_decompose
from src.utils.divisor_expr import format_class, format_divisor


def get_zariski_argparser() -> ArgumentParser:
    return get_divisor_argparser()


class ZariskiCommand(BaseCommand):
    def __init__(self, command: str = "zariski", args: Namespace = None):
        if args is None:
            args = get_zariski_argparser().parse_args()
        super().__init__(command, args)

    def execute(self):
        model = self.load_model()
        D = self.divisor(model)
        decomposition = zariski_decompose(model, D)
        P = decomposition.positive
        return {
            "surface": model.name,
            "divisor": format_class(D.coords, model.basis_labels),
            "positive": format_class(P.coords, model.basis_labels),
            "positive_coords": list(P.coords),
            "negative": format_divisor(decomposition.negative_coeffs),
            "negative_coeffs": dict(decomposition.negative_coeffs),
            "volume": volume(model, D),
        }

    def render(self, result):
        self.logger.print(f"P = {result['positive']}, N = {result['negative']}", markup=False)
        self.logger.print(f"vol(D) = P^2 = {result['volume']}", markup=False)
