from argparse import ArgumentParser, Namespace

from src.command.base import BaseCommand, get_surface_argparser
from src.geometry.configmv import (
    MvReport,
    classify_picard,
    elliptic_picard_constraint,
    mc_of,
    mv_surface,
)
from src.geometry.lattice import Lattice
from src.geometry.zariski import SurfaceModel


def get_mv_argparser() -> ArgumentParser:
    return get_surface_argparser()


def surface_mv(model: SurfaceModel, bound: int = 6, moduli=(2, 3, 4), max_box: int = 4_000_000) -> MvReport:
    ns = Lattice(gram=model.ns_gram, labels=model.basis_labels, name=model.name)
    return mv_surface(
        model.rho,
        model.negative_curves,
        model.ns_gram,
        all_negatives_are_minus2=model.all_negatives_are_minus2,
        ns=ns,
        search_bound=bound,
        moduli=moduli,
        max_box=max_box,
    )


class MvCommand(BaseCommand):
    def __init__(self, command: str = "mv", args: Namespace = None):
        if args is None:
            args = get_mv_argparser().parse_args()
        super().__init__(command, args)

    def execute(self):
        model = self.load_model()
        report = surface_mv(model, self.args.bound, self.args.mod, self.args.max_box)
        has_negative = bool(model.negative_curves)
        if model.elliptic is not None:
            constraint = elliptic_picard_constraint(model.elliptic.chi, report.mv_value)
        else:
            constraint = classify_picard(report.mv_value, has_negative)
        return {
            "surface": model.name,
            "rho": model.rho,
            "mv": report.mv_value,
            "certified": report.certified,
            "upper_bound": report.upper_bound_used,
            "witness": list(report.witness.labels),
            "k": report.witness.k,
            "mc": mc_of(report.witness),
            "note": report.note,
            "picard": str(constraint),
        }

    def render(self, result):
        status = "certified" if result["certified"] else f"lower bound, proven upper bound {result['upper_bound']}"
        self.logger.print(f"mv = {result['mv']} ({status})", markup=False)
        table = self.table(result["surface"], "quantity", "value")
        table.add_row("rho", str(result["rho"]))
        table.add_row("witness", "{" + ", ".join(result["witness"]) + "}")
        table.add_row("k, mc", f"{result['k']}, {result['mc']}")
        table.add_row("upper bound", str(result["upper_bound"]))
        table.add_row("picard constraint", result["picard"])
        if result["note"]:
            table.add_row("note", result["note"])
        self.logger.print(table)
