"""Materialize the benchmark tables under ./data (or SESSC_DATA_DIR).

The diagnostic breast-cancer table ships with scikit-learn; the QSAR
biodegradation table needs network access to the UCI archive.
"""

import sys

from sessc.datasets import fetch_biodeg, fetch_wdbc


def main():
    print("wdbc ->", fetch_wdbc())
    try:
        print("biodeg ->", fetch_biodeg())
    except OSError as err:
        print(f"biodeg unavailable: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
