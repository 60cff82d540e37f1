"""JSON-ready views of the result objects, plus a plain text renderer.

Exact rationals become ``"p/q"`` strings and floats keep their shortest
round-trip form, so two runs on the same input produce identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .field import format_scalar


def jsonable(obj):
    """Recursively convert scalars, tuples and dataclass-free containers."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, complex):
        return format_scalar(complex(obj.real + 0.0, obj.imag + 0.0))
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return format_scalar(obj + 0.0)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "coeffs"):
        return [jsonable(v) for v in obj.coeffs]
    return str(obj)


def dumps(data) -> str:
    return json.dumps(jsonable(data), sort_keys=True, indent=2) + "\n"


def problem_dict(pf, problem) -> dict:
    return {
        "name": pf.name,
        "equations": problem.sources(),
        "n": problem.n,
        "d": problem.d,
        "r": problem.r,
        "field": problem.field.kind,
    }


def verdict_dict(v) -> dict:
    return {"name": v.name, "ok": v.ok, "witness": v.witness, "magnitude": v.magnitude}


def conditions_dict(rep) -> dict:
    out = {
        "m": rep.m,
        "ok": rep.ok,
        "first_failure": rep.first_failure(),
        "verdicts": [verdict_dict(v) for v in rep.verdicts()],
        "T_low": rep.T_low,
    }
    if rep.S_m is not None:
        out["S_m"] = rep.S_m.matrix
    return out


def indicial_dict(ind) -> dict:
    out = {
        "m": ind.m,
        "H": ind.H,
        "roots": ind.roots,
        "root_bound": ind.root_bound,
        "borderline": ind.borderline,
    }
    if ind.g is not None:
        out["g"] = ind.g
        out["g_degree"] = len(ind.g) - 1
    else:
        out["minors"] = ind.minors
    return out


def certificate_dict(cert) -> dict:
    if cert is None:
        return None
    return {
        "ok": cert.ok,
        "orders_checked": cert.orders_checked,
        "first_failure": list(cert.first_failure) if cert.first_failure else None,
        "max_residual": cert.max_residual,
        "samples": cert.samples,
    }


def family_dict(fam) -> dict:
    return {
        "m": fam.m,
        "order": fam.order,
        "path": fam.path,
        "extension": fam.extension,
        "note": "nondegenerate extension (m = 0)" if fam.extension else "degenerate recursion",
        "coefficients": fam.coefficients,
        "base_top": fam.m + fam.n,
        "mid_band": [fam.mid_band.start, fam.mid_band.stop - 1] if len(fam.mid_band) else [],
        "indicial": indicial_dict(fam.indicial),
        "free_slots": [
            {"index": s.index, "root": s.root, "particular": s.particular, "basis": s.basis,
             "values": s.values, "source": s.source}
            for s in fam.free_slots
        ],
        "solvability": [
            {"root": r.root, "index": r.index, "feasible": r.feasible, "residual": r.residual,
             "rbar": r.rbar, "rank": r.rank, "nullity": r.nullity}
            for r in fam.records
        ],
        "pinned": fam.pinned,
        "coupling": fam.searches,
        "step_freedom": fam.step_freedom,
        "q": fam.q,
        "p": fam.p,
        "dimension_bound_ok": fam.dimension_bound_ok(),
        "residual_certificate": certificate_dict(fam.certificate),
    }


def oracle_dict(res) -> dict:
    return {
        "coefficients": res.coefficients,
        "free": [list(c) for c in res.free],
        "feasible": res.feasible,
        "witness_order": res.witness_order,
        "orders_used": res.orders_used,
        "undetermined": [list(c) for c in res.undetermined],
        "nonaffine_orders": res.nonaffine,
    }


def continuation_dict(res) -> dict:
    diag = res.diagnostic
    return {
        "m": res.m,
        "limit": res.limit,
        "samples": [
            {"x": s.x, "c": s.c, "phi_residual": s.phi_residual, "residual": s.residual,
             "iterations": s.iterations, "converged": s.converged, "tail_flag": s.tail_flag}
            for s in res.samples
        ],
        "diagnostic": diagnostic_dict(diag) if diag else None,
    }


def diagnostic_dict(diag) -> dict:
    return {
        "det_order": diag.det_order,
        "residual_order": diag.residual_order,
        "expansion_order": diag.expansion_order,
        "leading_det": diag.leading_det,
        "order_available": diag.order_available,
        "order_required": diag.order_required,
        "classical_tougeron_applies": diag.classical_tougeron_applies,
    }


def _fmt(v) -> str:
    v = jsonable(v)
    if isinstance(v, list):
        return "(" + ", ".join(_fmt(x) for x in v) + ")"
    return str(v)


def render_text(data: dict) -> str:
    """Readable rendering of a report dict (one fact per line)."""
    lines = []
    prob = data.get("problem")
    if prob:
        lines.append(f"problem {prob['name'] or '-'}: n={prob['n']} d={prob['d']} r={prob['r']} field={prob['field']}")
        for e in prob["equations"]:
            lines.append(f"  G: {e}")
    if "error" in data:
        err = data["error"]
        lines.append(f"error ({err['type']}): {err['message']}")
        if err.get("witness") is not None:
            lines.append(f"  witness: {_fmt(err['witness'])}")
    for rep in data.get("conditions", []):
        mark = "ok" if rep["ok"] else f"fails: {rep['first_failure']}"
        lines.append(f"m={rep['m']}: {mark}")
        for v in rep["verdicts"]:
            lines.append(f"  [{'x' if v['ok'] else ' '}] {v['name']}" + ("" if v["ok"] else f"  witness {_fmt(v['witness'])}"))
    ind = data.get("indicial")
    if ind:
        if "g" in ind:
            lines.append(f"g(l) coefficients (low to high): {_fmt(ind['g'])}")
        lines.append(f"integer roots: {ind['roots']}  (Cauchy bound {_fmt(ind['root_bound'])})")
    fam = data.get("family")
    if fam:
        lines.append(f"family: m={fam['m']} N={fam['order']} path={fam['path']} q={fam['q']} ({fam['note']})")
        for q, c in enumerate(fam["coefficients"]):
            lines.append(f"  c_{q} = {_fmt(c)}")
        for s in fam["free_slots"]:
            lines.append(f"  free slot c_{s['index']} (root {s['root']}): values {_fmt(s['values'])} [{s['source']}]")
        cert = fam["residual_certificate"]
        if cert:
            lines.append(f"certificate through order {cert['orders_checked']}: {'PASS' if cert['ok'] else 'FAIL'}"
                         + ("" if cert["ok"] else f" at {cert['first_failure']}"))
    cert = data.get("certificate")
    if cert:
        lines.append(f"certificate through order {cert['orders_checked']}: {'PASS' if cert['ok'] else 'FAIL'}"
                     + ("" if cert["ok"] else f" at order {cert['first_failure'][0]}, component {cert['first_failure'][1]}"))
    orc = data.get("oracle")
    if orc:
        lines.append(f"oracle: feasible={orc['feasible']} free={orc['free']}")
        for q, c in enumerate(orc["coefficients"]):
            lines.append(f"  c_{q} = {_fmt(c)}")
    if "max_abs_diff" in data:
        lines.append(f"max |delta c| = {_fmt(data['max_abs_diff'])}")
    cont = data.get("continuation")
    if cont:
        lines.append(f"c_(m+1)(0) = {_fmt(cont['limit'])}")
        for s in cont["samples"]:
            lines.append(f"  x={_fmt(s['x'])}: c={_fmt(s['c'])} |G|={_fmt(s['residual'])} newton={s['iterations']}"
                         + ("" if s["converged"] else " (not converged)"))
        diag = cont["diagnostic"]
        if diag:
            verdict = "applies" if diag["classical_tougeron_applies"] else "does not apply"
            lines.append(f"classical Tougeron {verdict}: order available {diag['order_available']}, "
                         f"required {diag['order_required']}, det order {diag['det_order']}, "
                         f"residual order {diag['residual_order'] if diag['residual_order'] is not None else '>= ' + str(diag['expansion_order'])}")
    for row in data.get("scan", []):
        lines.append(f"m={row['m']}: " + ("ok" if row["ok"] else f"fails: {row['result']}"))
    return "\n".join(lines) + "\n"
