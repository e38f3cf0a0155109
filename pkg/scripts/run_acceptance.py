#!/usr/bin/env python3
"""Run the full acceptance suite and print one line per criterion.

Equivalent to ``udalab reproduce --suite all``; kept as a script so the
whole verification pass is one command from a fresh checkout.
"""

import sys

from udalab.cli import dispatch

if __name__ == "__main__":
    sys.exit(dispatch(["reproduce", "--suite", "all"] + sys.argv[1:]))
