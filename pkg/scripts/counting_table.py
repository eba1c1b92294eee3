"""Tabulate the counting inequality and run the collision search on small cases."""
import argparse

from sftkit.errors import BudgetError
from sftkit.mirror import collision_search, counting_bound, verify_collision


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=int, default=4)
    ap.add_argument("--max-N", type=int, default=9)
    ap.add_argument("--max-m", type=int, default=4)
    args = ap.parse_args()

    print(f"alpha = {args.alpha}: does 2^(Nm) > alpha^(3m) hold?")
    print("N\\m " + " ".join(f"{m:>3}" for m in range(1, args.max_m + 1)) + "   premise")
    for N in range(1, args.max_N + 1):
        cells = [counting_bound(N, args.alpha, m)["holds"] for m in range(1, args.max_m + 1)]
        prem = counting_bound(N, args.alpha, 1)["premise"]
        print(f"{N:>3} " + " ".join(f"{'yes' if c else ' - ':>3}" for c in cells) + f"   {prem}")

    print("\ncollision search (alpha, N, m):")
    for alpha, N, m in [(2, 1, 1), (2, 4, 2), (2, 7, 1), (3, 5, 2), (4, 7, 1), (4, 7, 2)]:
        try:
            c = collision_search(alpha, N, m)
        except BudgetError as e:
            print(f"  ({alpha},{N},{m}): skipped, {e}")
            continue
        if c is None:
            print(f"  ({alpha},{N},{m}): no collision among {2 ** (N * m)} labelings")
        else:
            print(f"  ({alpha},{N},{m}): p={''.join(map(str, c.p))} p'={''.join(map(str, c.p2))} "
                  f"verified={verify_collision(c, alpha, N, m)}")


if __name__ == "__main__":
    main()
