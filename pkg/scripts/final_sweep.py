"""Build and check final patches over many random points, and report timings.

Each run builds the patch over x, validates it, reads back the factor
point and compares it with its translates under the eight generators.
"""
import argparse
import random
import time
from dataclasses import dataclass

from sftkit.selfsim import (
    GENS, build_final, canonical_pair, check_equivariance, factor_phi, named_action, validate_final,
)


@dataclass
class SweepConfig:
    action: str = "trivial-golden"
    runs: int = 20
    radius: int = 3
    budget: int = 20
    length: int = 16
    m: int = 3
    seed: int = 0


def random_point(cfg: SweepConfig, rng: random.Random) -> str:
    if cfg.action == "trivial-golden":
        out = ""
        while len(out) < cfg.length:
            out += rng.choice(["0", "10"])
        return out[: cfg.length]
    return "".join(rng.choice("01") for _ in range(cfg.length))


def sweep(cfg: SweepConfig) -> list[dict]:
    rng = random.Random(cfg.seed)
    act = named_action(cfg.action)
    rho = canonical_pair(cfg.radius)
    rows = []
    for _ in range(cfg.runs):
        x = random_point(cfg, rng)
        t0 = time.perf_counter()
        z = build_final(x, act, rho, cfg.budget)
        t1 = time.perf_counter()
        rep = validate_final(z, act, cfg.budget)
        t2 = time.perf_counter()
        eq = [check_equivariance(z, s, cfg.m, act) for s in GENS]
        rows.append({
            "x": x, "phi": factor_phi(z, cfg.length), "violations": len(rep), "skipped": rep.skipped,
            "equivariant": all(eq), "compared": min(r.compared for r in eq),
            "build_s": t1 - t0, "check_s": t2 - t1,
        })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    for name, val in vars(SweepConfig()).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    cfg = SweepConfig(**vars(ap.parse_args()))
    rows = sweep(cfg)
    print(f"{'x':<18} {'phi':<8} {'viol':>4} {'eq':>3} {'build':>7} {'check':>7}")
    for r in rows:
        print(f"{r['x']:<18} {r['phi']:<8} {r['violations']:>4} {'y' if r['equivariant'] else 'n':>3} "
              f"{r['build_s']:7.3f} {r['check_s']:7.3f}")
    ok = sum(r["violations"] == 0 and r["equivariant"] for r in rows)
    print(f"{ok}/{len(rows)} clean; mean build {sum(r['build_s'] for r in rows) / len(rows):.3f}s, "
          f"mean check {sum(r['check_s'] for r in rows) / len(rows):.3f}s")


if __name__ == "__main__":
    main()
