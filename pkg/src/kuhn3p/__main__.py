"""Module entry point: python -m kuhn3p."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
