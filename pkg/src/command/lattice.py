from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, Dict

from src.command.base import BaseCommand, get_base_argparser
from src.geometry.lattice import (
    EmbeddingVerdict,
    Lattice,
    discriminant,
    embeds_root,
    is_even,
    is_unimodular,
    lattice_from_name,
    signature,
)
from src.utils.errors import PreconditionError
from src.utils.surface_io import parse_lattice


def get_lattice_argparser() -> ArgumentParser:
    parser = get_base_argparser()
    parser.add_argument("action", choices=["info", "embed"])
    parser.add_argument(
        "lattices",
        nargs="+",
        help="lattice names (U, A2, E8, U+A1, ...) or lattice files; `embed` takes SOURCE TARGET",
    )
    return parser


def load_lattice(text: str) -> Lattice:
    path = Path(text)
    if path.is_file():
        return parse_lattice(path.read_bytes(), path)
    return lattice_from_name(text)


def lattice_info(lattice: Lattice) -> Dict[str, Any]:
    sig = signature(lattice)
    return {
        "name": lattice.name,
        "rank": lattice.rank,
        "gram": [list(row) for row in lattice.gram],
        "labels": list(lattice.labels),
        "discriminant": discriminant(lattice),
        "signature": [sig.n_plus, sig.n_minus],
        "even": is_even(lattice),
        "unimodular": is_unimodular(lattice),
    }


def verdict_json(verdict: EmbeddingVerdict) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"status": verdict.status.value}
    if verdict.witness is not None:
        payload["witness"] = [list(v) for v in verdict.witness]
    if verdict.obstruction is not None:
        payload["obstruction"] = {
            "modulus": verdict.obstruction.modulus,
            "form": verdict.obstruction.form,
            "assignments_covered": verdict.obstruction.assignments_covered,
            "per_vector_solutions": list(verdict.obstruction.per_vector_solutions),
        }
    if verdict.search_bound is not None:
        payload["search_bound"] = verdict.search_bound
    if verdict.notes:
        payload["notes"] = list(verdict.notes)
    return payload


class LatticeCommand(BaseCommand):
    def __init__(self, command: str = "lattice", args: Namespace = None):
        if args is None:
            args = get_lattice_argparser().parse_args()
        super().__init__(command, args)

    def execute(self):
        lattices = [load_lattice(text) for text in self.args.lattices]
        if self.args.action == "info":
            return {"action": "info", "lattices": [lattice_info(L) for L in lattices]}
        if len(lattices) != 2:
            raise PreconditionError("`lattice embed` takes exactly two lattices: SOURCE TARGET")
        source, target = lattices
        verdict = embeds_root(source, target, self.args.bound, self.args.mod, self.args.max_box)
        return {
            "action": "embed",
            "source": source.name,
            "target": target.name,
            "verdict": verdict_json(verdict),
        }

    def render(self, result):
        if result["action"] == "info":
            for info in result["lattices"]:
                table = self.table(f"lattice {info['name']}", "invariant", "value")
                table.add_row("rank", str(info["rank"]))
                table.add_row("gram", "\n".join(" ".join(f"{v:>3}" for v in row) for row in info["gram"]))
                table.add_row("labels", ", ".join(info["labels"]))
                table.add_row("discriminant", str(info["discriminant"]))
                table.add_row("signature", f"({info['signature'][0]}, {info['signature'][1]})")
                table.add_row("even", str(info["even"]))
                table.add_row("unimodular", str(info["unimodular"]))
                self.logger.print(table)
            return
        verdict = result["verdict"]
        self.logger.print(f"{result['source']} -> {result['target']}: {verdict['status']}", markup=False)
        if "witness" in verdict:
            for k, v in enumerate(verdict["witness"], start=1):
                self.logger.print(f"  v{k} = {tuple(v)}", markup=False)
        if "obstruction" in verdict:
            o = verdict["obstruction"]
            self.logger.print(
                f"  no solution modulo {o['modulus']} ({o['form']} form, "
                f"{o['assignments_covered']} residue assignments)",
                markup=False,
            )
        for note in verdict.get("notes", []):
            self.logger.print(f"  note: {note}", markup=False)
