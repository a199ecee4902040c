#!/usr/bin/env python3
"""Entry point script for the quartica command line"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from scripts.quartica_cli import main as cli_main


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
