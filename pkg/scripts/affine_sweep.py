"""Check the affine decomposition of T^{2k+1+l} on random polynomial problems.

Prints one row per (k, l) with the number of rational mismatches and the
worst float relative gap.
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from helpers import affine_gap  # noqa: E402

from fpsdae.expansion import JetPoint  # noqa: E402
from fpsdae.randgen import random_jet, random_polynomial_problem  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--problems", type=int, default=50)
    parser.add_argument("--kmax", type=int, default=3)
    parser.add_argument("--lmax", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    start = time.perf_counter()
    print("k l  rational_mismatch  worst_float_gap")
    for k in range(args.kmax + 1):
        for l in range(args.lmax + 1):
            bad, worst = 0, 0.0
            for t in range(args.problems):
                n, d = rng.randint(0, 2), rng.randint(1, 3)
                fmode = t % 2 == 1
                prob = random_polynomial_problem(rng, n, d, degree=3, terms=4, field="f64" if fmode else "rational")
                pt = JetPoint.from_values(random_jet(rng, 2 * k + 2 + l + n, d, fmode), n, d, prob.field)
                gap = affine_gap(prob, pt, k, l)
                if fmode:
                    worst = max(worst, gap)
                else:
                    bad += gap != 0.0
            print(f"{k} {l}  {bad:17d}  {worst:15.2e}")
    print(f"elapsed {time.perf_counter() - start:.1f} s")


if __name__ == "__main__":
    main()
