from argparse import ArgumentParser, Namespace

from src.command.base import BaseCommand, get_base_argparser, resolve_surface_path
from src.geometry.configmv import intersection_matrix
from src.geometry.ellsurf import build_ns, height_pairing, shioda_tate_rank, trivial_lattice_rank
from src.geometry.lattice import discriminant, signature
from src.utils.divisor_expr import format_class
from src.utils.surface_io import parse_elliptic_spec


def get_ellsurf_argparser() -> ArgumentParser:
    parser = get_base_argparser()
    parser.add_argument("action", choices=["build"])
    parser.add_argument("surface", type=str, help="file with an `elliptic` block, or a bundled surface name")
    return parser


class EllSurfCommand(BaseCommand):
    def __init__(self, command: str = "ellsurf", args: Namespace = None):
        if args is None:
            args = get_ellsurf_argparser().parse_args()
        super().__init__(command, args)

    def execute(self):
        path = resolve_surface_path(self.args.surface)
        spec = parse_elliptic_spec(path.read_bytes(), path)
        ns = build_ns(spec)
        sig = signature(ns.lattice)
        records = ns.curve_records()
        heights = []
        sections = list(spec.sections)
        if sections:
            heights = [[height_pairing(p, q, spec) for q in sections] for p in sections]
        return {
            "chi": spec.chi,
            "rho": ns.rho,
            "trivial_rank": trivial_lattice_rank(spec),
            "mordell_weil_rank": shioda_tate_rank(ns.rho, spec),
            "basis": list(ns.lattice.labels),
            "gram": [list(row) for row in ns.lattice.gram],
            "discriminant": discriminant(ns.lattice),
            "signature": [sig.n_plus, sig.n_minus],
            "height_pairing": heights,
            "classes": {label: list(cls) for label, cls in ns.distinguished.items()},
            "curve_gram": {
                "labels": [r.label for r in records],
                "gram": [list(row) for row in intersection_matrix(records, ns.lattice.gram)],
            },
        }

    def render(self, result):
        self.logger.print(
            f"chi = {result['chi']}, rho = {result['rho']} = r + {result['trivial_rank']} "
            f"with r = {result['mordell_weil_rank']}",
            markup=False,
        )
        table = self.table("NS Gram", "", *result["basis"])
        for label, row in zip(result["basis"], result["gram"]):
            table.add_row(label, *(str(v) for v in row))
        self.logger.print(table)
        self.logger.print(
            f"disc = {result['discriminant']}, signature = ({result['signature'][0]}, {result['signature'][1]})",
            markup=False,
        )
        classes = self.table("distinguished classes", "curve", "class")
        for label, cls in result["classes"].items():
            classes.add_row(label, format_class(cls, result["basis"]))
        self.logger.print(classes)
        if result["height_pairing"]:
            self.logger.print(f"height pairing: {result['height_pairing']}", markup=False)
