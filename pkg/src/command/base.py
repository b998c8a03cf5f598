import logging
import os
import sys
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Any, List

from rich.table import Table

from src.geometry.zariski import DivisorClass, SurfaceModel
from src.utils.divisor_expr import parse_divisor
from src.utils.emit import dump_json
from src.utils.errors import PreconditionError
from src.utils.surface_io import load_surface
from src.utils.tools import (
    OUT_DIR,
    SURFACES_DIR,
    Logger,
    fix_random_seed,
    local_time,
    make_console,
    parse_config_file,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_MISMATCH = 3


class UsageArgumentParser(ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def moduli_list(text) -> List[int]:
    if isinstance(text, (list, tuple)):
        return [int(m) for m in text]
    return [int(m) for m in str(text).split(",") if m.strip()]


def get_base_argparser() -> ArgumentParser:
    parser = UsageArgumentParser()
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--json", action="store_true", default=False)
    parser.add_argument("--bound", type=int, default=6)
    parser.add_argument("--mod", type=moduli_list, default=[2, 3, 4])
    parser.add_argument("--max_box", type=int, default=4_000_000)
    parser.add_argument("--save_log", type=int, default=0)
    parser.add_argument("--verbose", action="store_true", default=False, help="print debug records of the computation")
    parser.add_argument("-cfg", "--config_file", type=str, default="")
    return parser


def get_surface_argparser() -> ArgumentParser:
    parser = get_base_argparser()
    parser.add_argument("surface", type=str, help="path to a .surface file or the name of a bundled one")
    return parser


def get_divisor_argparser() -> ArgumentParser:
    parser = get_surface_argparser()
    parser.add_argument("-D", "--divisor", type=str, required=True)
    return parser


def resolve_surface_path(name: str) -> Path:
    """Accept a file path, or the stem of a bundled fixture such as `f1`."""
    path = Path(name)
    if path.is_file():
        return path
    for candidate in (SURFACES_DIR / name, SURFACES_DIR / f"{name}.surface"):
        if candidate.is_file():
            return candidate
    raise PreconditionError(f"no surface file {name!r} (looked in the working directory and {SURFACES_DIR})")


class BaseCommand:
    def __init__(self, command: str = "base", args: Namespace = None):
        self.args = get_base_argparser().parse_args() if args is None else args
        self.command = command
        if len(self.args.config_file) > 0 and os.path.exists(Path(self.args.config_file).absolute()):
            self.args = parse_config_file(self.args)
        self.args.mod = moduli_list(self.args.mod)
        fix_random_seed(self.args.seed)
        self.output_dir = OUT_DIR / self.command / local_time()
        self.stdout = make_console()
        self.logger = Logger(
            stdout=self.stdout,
            enable_log=bool(self.args.save_log),
            logfile_path=self.output_dir / "output.html",
        )
        self.logger.capture("src", logging.DEBUG if self.args.verbose else logging.WARNING)

    def load_model(self) -> SurfaceModel:
        return load_surface(resolve_surface_path(self.args.surface))

    def divisor(self, model: SurfaceModel) -> DivisorClass:
        return parse_divisor(self.args.divisor, model.label_map())

    def execute(self) -> Any:
        raise NotImplementedError

    def render(self, result: Any) -> None:
        self.logger.print(result)

    def exit_code(self, result: Any) -> int:
        return EXIT_OK

    def run(self) -> int:
        try:
            result = self.execute()
            if self.args.json:
                self.stdout.print(dump_json(self.to_json(result)), soft_wrap=True, highlight=False, markup=False)
            else:
                self.render(result)
            return self.exit_code(result)
        finally:
            self.logger.close()

    def to_json(self, result: Any) -> Any:
        return result

    @staticmethod
    def table(title: str, *columns: str) -> Table:
        table = Table(title=title)
        for column in columns:
            table.add_column(column)
        return table
