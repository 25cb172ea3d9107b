"""Standard-map ensembles: measured diffusion slope against d0 and kappa^2/2."""
import argparse
from pathlib import Path

from kickwalk.analysis import diffusion_slope
from kickwalk.classical import ClassicalEnsemble, d0, d_simple, evolve_classical


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kappas", type=float, nargs="+", default=[5.5, 11.0])
    ap.add_argument("--deltas", type=float, nargs="+", default=[0.1, 1.0])
    ap.add_argument("--size", type=int, default=1000)
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="out/classical")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    print(f"{'kappa':>6} {'delta':>6} {'slope':>9} {'d0':>9} {'k^2/2':>9}")
    for kappa in args.kappas:
        for delta in args.deltas:
            ens = ClassicalEnsemble.uniform_square(args.size, kappa, delta, args.seed)
            s = evolve_classical(ens, args.steps)
            s.write(out / f"variance_k{kappa}_d{delta}.txt")
            print(f"{kappa:6.2f} {delta:6.2f} {diffusion_slope(s, 5):9.3f} {d0(kappa):9.3f} {d_simple(kappa):9.3f}")


if __name__ == "__main__":
    main()
