"""Compare the solver with the brute-force oracle on random degenerate instances."""

import argparse
import random

from fpsdae.errors import InfeasibleRootError
from fpsdae.oracle import brute_force_solve, coefficient_diff
from fpsdae.randgen import degenerate_instance
from fpsdae.solver import SolveOptions, solve


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--field", choices=("rational", "f64"), default="rational")
    parser.add_argument("--force-root", action="store_true", help="shift g to have an integer root (scalar only)")
    args = parser.parse_args()
    rng = random.Random(args.seed)
    agree = infeasible = 0
    for t in range(args.count):
        m, n = rng.randint(1, 2), rng.randint(0, 2)
        d = 1 if args.force_root else rng.randint(1, 2)
        if args.force_root:
            n = max(n, m)
        inst = degenerate_instance(rng, m, n, d, perturbation_terms=1, field=args.field,
                                   force_root=rng.randint(0, 3) if args.force_root else None)
        N = min(8, m + n + 5)
        try:
            fam = solve(inst.problem, inst.initial, SolveOptions(m=m, order=N))
        except InfeasibleRootError as exc:
            infeasible += 1
            orc = brute_force_solve(inst.problem, inst.initial, N)
            print(f"#{t:02d} m={m} n={n} d={d} infeasible at root {exc.root}; oracle feasible={orc.feasible}")
            continue
        free = {(s.index, p): fam.coefficients[s.index][p] for s in fam.free_slots for p in range(d)}
        orc = brute_force_solve(inst.problem, inst.initial, N, free)
        diff = coefficient_diff(fam.coefficients, orc.coefficients, inst.problem.field)
        agree += diff == 0 or (args.field == "f64" and diff < 1e-9)
        print(f"#{t:02d} m={m} n={n} d={d} roots={fam.indicial.roots} q={fam.q} max|dc|={diff:.3g}")
    print(f"agree {agree}/{args.count - infeasible}, infeasible {infeasible}")


if __name__ == "__main__":
    main()
