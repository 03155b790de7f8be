#!/usr/bin/env python3
"""Entry script: plot.py --kind <k> --in <csv> [--curve <csv>] --out <png>."""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from plotview.plot import main

if __name__ == "__main__":
    sys.exit(main())
