"""Shared test helpers: the affine decomposition check and small builders."""

from fpsdae import linalg
from fpsdae.expansion import JetPoint, compute_T, extract_Rbar
from fpsdae.separant import assemble_S, gamma_times_S


def affine_gap(problem, pt: JetPoint, k: int, l: int) -> float:
    """Relative gap between ``T^{2k+1+l}`` and ``Gamma_k(l) S_k high + Rbar``.

    The high block stacks ``c_{2k+1+l+n-p}`` for ``p = 0..k``.
    """
    f = problem.field
    n = problem.n
    top = 2 * k + 1 + l
    full = compute_T(problem, pt, top)[top]
    rbar = extract_Rbar(problem, pt, k, l)
    S = assemble_S(problem, pt.head(k + n), k)
    GS = gamma_times_S(S, l)
    high = [f.coerce(v) for p in range(k + 1) for v in pt.c(top + n - p)]
    pred = [a + b for a, b in zip(linalg.matvec(GS, high), rbar)]
    if f.exact:
        return 0.0 if list(pred) == list(full) else float("inf")
    scale = max([1.0] + [abs(v) for v in full] + [abs(v) for v in pred])
    return max(abs(a - b) for a, b in zip(pred, full)) / scale

