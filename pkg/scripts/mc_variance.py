"""Relative standard error of the naive and the conditional estimator as w grows.

The conditional estimator only samples P(B^p (w + O) > w), which decays like
w^-b, so its relative error grows like w^(b/2) rather than e^(w/2).

    python scripts/mc_variance.py --n 100000
"""
import argparse
import math

from betagamma.exact_tail import TailQuery, log_tail_exact
from betagamma.montecarlo import McConfig, mc_conditional, mc_naive


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--params", type=float, nargs=4, default=[2.0, 3.0, 6.0, 2.0], metavar=("A", "B", "C", "P"))
    args = ap.parse_args()
    a, b, c, p = args.params
    cfg = McConfig(args.n, args.seed)
    print(f"{'w':>8} {'log_exact':>12} {'naive_rel':>10} {'cond_rel':>10} {'cond_z':>7}")
    for w in (2.0, 5.0, 10.0, 30.0, 100.0, 1000.0, 1e4):
        query = TailQuery.from_values(a, b, c, p, w ** (1 / p))
        exact = log_tail_exact(query)
        naive = mc_naive(query, cfg)
        naive_rel = "under" if naive.undersampled else f"{naive.stderr_rel:.3g}"
        try:
            cond = mc_conditional(query, cfg)
        except ValueError:
            print(f"{w:8g} {exact:12.5g} {naive_rel:>10} {'n/a':>10}")
            continue
        if cond.undersampled:
            print(f"{w:8g} {exact:12.5g} {naive_rel:>10} {'under':>10}")
            continue
        z = (math.exp(cond.log_mean - exact) - 1) / cond.stderr_rel
        print(f"{w:8g} {exact:12.5g} {naive_rel:>10} {cond.stderr_rel:10.3g} {z:7.2f}")


if __name__ == "__main__":
    main()
