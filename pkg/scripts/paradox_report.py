"""Local-rule check, path injectivity and cycle scan for canonical patches on growing balls."""
import argparse
import time

from sftkit.paradox import (
    canonical_patch, check_path_injectivity, scan_monochromatic_cycles, standard_ball, validate_local_rules,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-radius", type=int, default=10)
    args = ap.parse_args()
    print(f"{'r':>3} {'cells':>7} {'viol':>5} {'skipped':>8} {'inj(r/2,6)':>11} {'cycles':>7} {'secs':>6}")
    for r in range(2, args.max_radius + 1):
        t0 = time.perf_counter()
        p = canonical_patch(r)
        rep = validate_local_rules(p)
        inj = check_path_injectivity(p, standard_ball(r // 2), 6)
        cyc = scan_monochromatic_cycles(p)
        dt = time.perf_counter() - t0
        print(f"{r:>3} {len(p.cells):>7} {len(rep):>5} {rep.skipped:>8} {str(inj is True):>11} {len(cyc):>7} {dt:6.2f}")


if __name__ == "__main__":
    main()
