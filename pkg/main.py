#!/usr/bin/env python3
"""
MemWeaver entry point.

Equivalent to the ``memweaver`` console script:

    python main.py build --history templates/sample_history.jsonl --store store.json
    python main.py eval --dataset templates/eval_cases.jsonl --seeds 0,1
"""

import sys

from scripts.cli import main

if __name__ == "__main__":
    sys.exit(main())
