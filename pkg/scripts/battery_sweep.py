"""Run the whole battery on several fixtures and tabulate outcomes and timings."""
import argparse
import collections
import time

from qworlds.battery import SUITES, BatteryConfig, run_battery
from qworlds.fixtures import FIXTURES, fixture


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("fixtures", nargs="*", default=[n for n in FIXTURES if n != "boolean1"])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show-info", action="store_true", help="print info records in full")
    args = ap.parse_args()
    for name in args.fixtures:
        print(f"== {name}")
        for suite in SUITES:
            t = time.perf_counter()
            recs = run_battery(fixture(name), BatteryConfig(name, seed=args.seed), [suite])
            tally = collections.Counter(r.result.split("(")[0] for r in recs)
            summary = ", ".join(f"{k} {v}" for k, v in sorted(tally.items()))
            print(f"   {suite:<16} {summary:<28} {time.perf_counter() - t:6.2f}s")
            for r in recs:
                if r.result == "fail" or (args.show_info and r.result == "info"):
                    print("      " + r.to_text())


if __name__ == "__main__":
    main()
