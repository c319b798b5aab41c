"""Build the catalog directory up to a tier (T0..T3) and verify what was built."""

import argparse
import logging
import time

from capkit.catalog import TierRequired, catalog_build, catalog_load
from capkit.config import RunConfig
from capkit.verify import SUITES, verify


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--tier", default="T2", choices=("T0", "T1", "T2", "T3"))
    p.add_argument("--catalog", default="catalog")
    p.add_argument("--threads", type=int)
    p.add_argument("--no-verify", action="store_true")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    t0 = time.time()
    catalog_build(args.catalog, args.tier, RunConfig(threads=args.threads, catalog=args.catalog))
    print(f"built {args.catalog} up to {args.tier} in {time.time() - t0:.0f}s")
    if args.no_verify:
        return
    cat = catalog_load(args.catalog)
    for name in SUITES:
        try:
            r = verify(name, cat)
        except TierRequired as e:
            print(f"SKIP {name}: {e}")
            continue
        s = r.summary()
        print(f"{'PASS' if s['passed'] else 'FAIL'} {name}: {s['claims']} claims, {s['failed']} failed")


if __name__ == "__main__":
    main()
