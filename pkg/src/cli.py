import importlib
import inspect
import sys
from typing import List, Optional

from rich.console import Console
from rich.text import Text

from src.command.base import EXIT_DOMAIN, EXIT_USAGE, get_base_argparser
from src.utils.errors import NokError, SurfaceFileError

COMMANDS = ["lattice", "ellsurf", "mv", "zariski", "nu", "mu", "nob", "search", "verify-paper"]


def _usage(console: Console) -> int:
    console.print(
        "Run like `nok <command> [args ...]`, e.g. `nok nob f1 -D \"3L - E\" --flag E`.\n"
        f"Commands: {', '.join(COMMANDS)}"
    )
    return EXIT_USAGE


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stderr = Console(stderr=True, log_path=False, log_time=False)
    if len(argv) < 1 or argv[0] in ("-h", "--help") or argv[0] not in COMMANDS:
        return _usage(stderr)

    command = argv[0]
    args_list = argv[1:]
    module_name = command.replace("-", "_")

    module = importlib.import_module(f"src.command.{module_name}")
    get_argparser = getattr(module, f"get_{module_name}_argparser", get_base_argparser)
    parser = get_argparser()
    parser.prog = f"nok {command}"
    command_class = [
        attribute
        for attribute in inspect.getmembers(module, inspect.isclass)
        if attribute[0].lower() == module_name.replace("_", "") + "command"
    ][0][1]

    try:
        args = parser.parse_args(args_list)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        return command_class(args=args).run()
    except SurfaceFileError as e:
        for diagnostic in e.diagnostics:
            stderr.print(Text.assemble(("error ", "bold red"), str(diagnostic)), highlight=False)
        return EXIT_DOMAIN
    except NokError as e:
        stderr.print(Text.assemble(("error ", "bold red"), f"{type(e).__name__}: {e}"), highlight=False)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
