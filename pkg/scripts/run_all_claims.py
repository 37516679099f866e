#!/usr/bin/env python3
"""Run the full claim battery and write one JSON report.

Usage:
    python3 scripts/run_all_claims.py [--max-q 13] [--out claims.json]

With --max-q 13 this covers every desk-scale claim, including the
q = 13 spectrum and the (2,7) remark instance; takes a few seconds
warm, a couple of minutes cold.
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from genlift.cache import default_cache_dir
from genlift.verify import verify_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-q", type=int, default=13)
    ap.add_argument("--out", type=Path, default=Path("claims.json"))
    ap.add_argument("--no-cache", action="store_true")
    args = ap.parse_args()

    cache_dir = None if args.no_cache else default_cache_dir()
    reports = verify_all(max_q=args.max_q, cache_dir=cache_dir)
    failed = [r for r in reports if not r.passed]
    payload = {
        "schema": 1,
        "passed": not failed,
        "claim_count": len(reports),
        "claims": [r.to_dict() for r in reports],
    }
    args.out.write_text(json.dumps(payload, indent=2) + "\n")

    for r in reports:
        mark = "ok " if r.passed else "FAIL"
        print(f"{mark} {r.claim_id:14s} {r.parameters} ({r.elapsed_ms:.0f} ms)")
    print(f"\n{len(reports) - len(failed)}/{len(reports)} claims passed -> {args.out}")
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main())
