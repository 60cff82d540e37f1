"""Tabulate c_{m+1}(x) from Newton against the closed-form limit for a problem file."""

import argparse

from fpsdae.field import Field
from fpsdae.problemfile import load
from fpsdae.tougeron import NewtonOptions, c_limit, continue_c, tougeron_diagnostic


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("file")
    parser.add_argument("--samples", default="0.1,0.03,0.01,0.003,0.001")
    parser.add_argument("--extra-order", type=int, default=8)
    args = parser.parse_args()
    pf = load(args.file)
    prob = pf.problem()
    m = pf.m if pf.m is not None else 1
    limit = c_limit(prob, pf.initial, m)
    fl = Field("f64")
    res = continue_c(prob.with_field(fl), [[fl.coerce(v) for v in c] for c in pf.initial], m,
                     [float(s) for s in args.samples.split(",")], NewtonOptions(extra_order=args.extra_order))
    print(f"limit c_{m + 1}(0) = {[str(v) for v in limit]}")
    print("x          c(x)                                   |G|        newton")
    for s in res.samples:
        print(f"{s.x:<10g} {str([round(v, 12) + 0.0 for v in s.c]):38s} {s.residual:9.2e}  {s.iterations}")
    diag = tougeron_diagnostic(prob, pf.initial, m, args.extra_order)
    print(f"det order {diag.det_order}, residual order {diag.residual_order}, "
          f"available {diag.order_available}, required {diag.order_required}, "
          f"classical applies: {diag.classical_tougeron_applies}")


if __name__ == "__main__":
    main()
