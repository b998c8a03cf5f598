import sys
from pathlib import Path

sys.path.append(Path(__file__).parent.absolute().as_posix())

from src.cli import main

if __name__ == "__main__":
    if len(sys.argv) < 2:
        raise ValueError(
            "Need to assign a command. Run like `python main.py <command> [args ...]`, e.g., python main.py mv k3_s2"
        )
    sys.exit(main(sys.argv[1:]))
