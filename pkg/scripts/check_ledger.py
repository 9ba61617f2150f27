"""Re-check every witness of a ledger file written by `fakeclass classify --out`.

    python3 scripts/check_ledger.py LEDGER.json [--db PATH]
"""
import argparse
import json
import sys

from fakeclass.classifier import CaseVerdict, Ledger, verify_ledger
from fakeclass.fieldsdb import load_database


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("ledger")
    ap.add_argument("--db")
    args = ap.parse_args()
    with open(args.ledger, encoding="utf-8") as fh:
        ledger = Ledger.from_json(json.load(fh))
    bad = verify_ledger(ledger, load_database(args.db), ledger.precision)
    n_elim = sum(e.verdict is CaseVerdict.ELIMINATED for e in ledger.entries)
    print(f"{len(ledger.entries)} entries, {n_elim} eliminated, {len(bad)} failing witness checks")
    for cid in bad:
        print(f"  {cid}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
