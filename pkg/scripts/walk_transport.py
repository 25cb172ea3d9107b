"""Bare quantum walks under the four coin policies: variance curves and log-log slopes."""
import argparse
from pathlib import Path

from kickwalk.analysis import slope_loglog
from kickwalk.walk import POLICIES, WalkSpec, run_walk


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--ensemble", type=int, default=50)
    ap.add_argument("--N", type=int, default=4096)
    ap.add_argument("--rho", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="out/walk")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for policy in POLICIES:
        M = 1 if policy == "fixed_hadamard" else args.ensemble
        s = run_walk(WalkSpec(args.rho, policy, args.seed), args.steps, M, N=args.N, workers=args.workers)
        s.write(out / f"variance_{policy}.txt")
        lo = max(1, args.steps // 20)
        print(f"{policy:22s} members={M:3d} slope[{lo},{args.steps}]={slope_loglog(s, (lo, args.steps)):.3f} "
              f"sigma2(T)/T={s.sigma2[-1] / args.steps:.3f}")


if __name__ == "__main__":
    main()
