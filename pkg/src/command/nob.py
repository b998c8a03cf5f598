from argparse import ArgumentParser, Namespace
from typing import Dict, List, Optional

from src.command.base import BaseCommand, get_divisor_argparser
from src.geometry.nob import FlagSpec, NOBPolygon, count_vertices, polygon
from src.utils.emit import exact_str, polygon_to_csv, polygon_to_svg
from src.utils.errors import PreconditionError


def get_nob_argparser() -> ArgumentParser:
    parser = get_divisor_argparser()
    parser.add_argument("--flag", type=str, required=True, help="label of the flag curve C")
    parser.add_argument(
        "--point",
        action="append",
        default=None,
        help="`general` or `at:<label>[:mult]`; repeat for several curves through p",
    )
    parser.add_argument("--svg", type=str, default="")
    parser.add_argument("--csv", type=str, default="")
    return parser


def parse_point(values: Optional[List[str]]) -> Dict[str, int]:
    """`general` gives no multiplicities, `at:E` means (E·C)_p = 1, `at:E:2` means 2."""
    point: Dict[str, int] = {}
    for value in values or []:
        if value == "general":
            continue
        parts = value.split(":")
        if parts[0] != "at" or len(parts) not in (2, 3) or not parts[1]:
            raise PreconditionError(f"bad point {value!r}: expected `general` or `at:<label>[:mult]`")
        try:
            mult = int(parts[2]) if len(parts) == 3 else 1
        except ValueError:
            raise PreconditionError(f"bad multiplicity in point {value!r}")
        point[parts[1]] = mult
    return point


def polygon_json(poly: NOBPolygon) -> dict:
    return {
        "vertices": [[t, s] for t, s in poly.vertices],
        "vertex_count": count_vertices(poly),
        "area": poly.area,
        "nu": poly.nu,
        "mu": poly.mu,
        "alpha": {"breakpoints": list(poly.alpha.breakpoints), "slopes": poly.alpha.slopes},
        "beta": {"breakpoints": list(poly.beta.breakpoints), "slopes": poly.beta.slopes},
    }


class NobCommand(BaseCommand):
    def __init__(self, command: str = "nob", args: Namespace = None):
        if args is None:
            args = get_nob_argparser().parse_args()
        super().__init__(command, args)

    def execute(self):
        model = self.load_model()
        flag = FlagSpec(self.args.flag, parse_point(self.args.point))
        poly = polygon(model, self.divisor(model), flag)
        if self.args.csv:
            polygon_to_csv(poly, self.args.csv)
        if self.args.svg:
            polygon_to_svg(poly, self.args.svg, title=f"{model.name}: D = {self.args.divisor}, flag {flag.describe()}")
        payload = polygon_json(poly)
        payload["flag"] = flag.describe()
        return payload

    def render(self, result):
        self.logger.print(
            f"{result['vertex_count']} vertices, area {exact_str(result['area'])}, "
            f"t in [{exact_str(result['nu'])}, {exact_str(result['mu'])}], flag {result['flag']}",
            markup=False,
        )
        table = self.table("vertices", "t", "s")
        for t, s in result["vertices"]:
            table.add_row(exact_str(t), exact_str(s))
        self.logger.print(table)
