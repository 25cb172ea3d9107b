"""Quantum kicked rotor at hbar_eff = 1: variance curves, recentred shapes, fitted l_s."""
import argparse
from pathlib import Path

from kickwalk.analysis import departure_time, fit_ls, recentered_histogram
from kickwalk.classical import d0
from kickwalk.combined import theory_localization
from kickwalk.evolution import SystemSpec, run_ensemble


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kappas", type=float, nargs="+", default=[5.5, 11.6])
    ap.add_argument("--ensemble", type=int, default=64)
    ap.add_argument("--N", type=int, default=2048)
    ap.add_argument("--tloc-multiple", type=float, default=10.0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="out/kr")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for kappa in args.kappas:
        t_loc, l_s_th, s2_loc = theory_localization(kappa)
        steps = int(round(args.tloc_multiple * t_loc))
        spec = SystemSpec(N=args.N, kappa=kappa)
        res = run_ensemble(spec, steps, args.ensemble, args.workers)
        hist = recentered_histogram(res.final_states(spec.lattice))
        res.series.write(out / f"variance_k{kappa}.txt")
        hist.write(out / f"histogram_k{kappa}.txt")
        l_lin, _ = fit_ls(hist)
        l_log, _ = fit_ls(hist, scale="log")
        print(f"kappa={kappa}: t_loc={t_loc:.1f} steps={steps} sigma2={res.series.sigma2[-1]:.1f} "
              f"(theory {s2_loc:.1f}) l_s fit={l_lin:.2f} (log-scale fit {l_log:.2f}, theory {l_s_th:.2f}) "
              f"departure t={departure_time(res.series, d0(kappa))}")


if __name__ == "__main__":
    main()
