import logging
import os
import random
import time
import yaml
from argparse import Namespace
from copy import deepcopy
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from rich.console import Console
from rich.logging import RichHandler

PROJECT_DIR = Path(__file__).parent.parent.parent.absolute()
OUT_DIR = PROJECT_DIR / "out"
SURFACES_DIR = PROJECT_DIR / "data" / "surfaces"


def local_time() -> str:
    return time.strftime("%Y-%m-%d-%H:%M:%S", time.localtime())  # e.g. 2023-11-08-10:31:47


def fix_random_seed(seed: int) -> None:
    """Fix the random seed of randomized sweeps and searches.

    Args:
        seed (int): Any number you like as the random seed.
    """
    os.environ["PYTHONHASHSEED"] = str(seed)
    random.seed(seed)
    np.random.seed(seed)


def make_console(stderr: bool = False) -> Console:
    """Build a console, honouring `NOK_COLOR=0|1`.

    Args:
        stderr (bool, optional): Write to stderr instead of stdout. Defaults to False.

    Returns:
        Console: The `rich.console.Console` every command prints onto.
    """
    color = os.environ.get("NOK_COLOR")
    if color == "0":
        return Console(stderr=stderr, log_path=False, log_time=False, no_color=True, highlight=False)
    if color == "1":
        return Console(stderr=stderr, log_path=False, log_time=False, force_terminal=True)
    return Console(stderr=stderr, log_path=False, log_time=False)


def parse_config_file(default_args: Namespace) -> Namespace:
    """Merging default argument namespace with argument dict from custom config file.

    Args:
        default_args (Namespace): Default args set by CLI.

    Returns:
        Namespace: The merged arg namespace.
    """
    with open(Path(default_args.config_file).absolute()) as f:
        custom = yaml.safe_load(f) or {}

    merged_args = deepcopy(vars(default_args))
    merged_args.update(custom)

    return Namespace(**merged_args)


class Logger:
    def __init__(
        self, stdout: Console, enable_log: bool, logfile_path: Union[Path, str]
    ):
        """Mirror everything logged on stdout into a recorded HTML log file.

        Args:
            stdout (Console): The `rich.console.Console` for printing info onto stdout.
            enable_log (bool): Flag indicates whether log function is actived.
            logfile_path (Union[Path, str]): The path of log file.
        """
        self.stdout = stdout
        self.logfile_path = Path(logfile_path)
        self.enable_log = enable_log
        self.logger = None
        self.handlers: List[logging.Handler] = []
        self.captured: Optional[logging.Logger] = None
        if self.enable_log:
            self.logfile_path.parent.mkdir(parents=True, exist_ok=True)
            self.logger = Console(record=True, log_path=False, log_time=False, file=open(os.devnull, "w"))

    def print(self, *args, **kwargs):
        self.stdout.print(*args, **kwargs)
        if self.enable_log:
            self.logger.print(*args, **kwargs)

    def capture(self, name: str, level: int) -> None:
        """Route records of the `name` logger hierarchy through rich handlers.

        Records go to stderr, and also into the recorded log when it is enabled.

        Args:
            name (str): Logger name, e.g. `src`.
            level (int): Lowest level that is emitted.
        """
        self.captured = logging.getLogger(name)
        self.captured.setLevel(level)
        consoles = [make_console(stderr=True)] + ([self.logger] if self.enable_log else [])
        for console in consoles:
            handler = RichHandler(console=console, show_time=False, show_path=False, markup=False)
            handler.setLevel(level)
            self.captured.addHandler(handler)
            self.handlers.append(handler)

    def close(self):
        for handler in self.handlers:
            self.captured.removeHandler(handler)
        if self.captured is not None:
            self.captured.setLevel(logging.NOTSET)
        self.handlers, self.captured = [], None
        if self.logger is not None:
            self.logger.save_html(str(self.logfile_path))
            self.logger.file.close()
            self.logger = None
