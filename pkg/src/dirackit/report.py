"""Structured reports: JSON-ready dictionaries and their text rendering.

Classical sections hold exact rationals as strings; floats appear only in the
quantization section.  Key order is fixed so serialized output is
byte-reproducible.
"""

from __future__ import annotations

import json
from itertools import combinations

from .dirac import CASE_NAMES, ConstraintAnalysis, dirac_bracket
from .errors import DiracKitError, UnsupportedError
from .gauge import closure_coefficients, linear_reduction
from .model import print_model
from .quantize import (
    anomaly_residual,
    commutator_check,
    physical_states,
    quantize_poly,
    smaller_sites,
)

SCHEMA_VERSION = 1
KERNEL_NOTE = (
    "finite lattice kernel; generalized eigenvectors outside the Hilbert space "
    "cannot be represented"
)


def _s(x) -> str:
    return str(x)


def _num(x):
    return None if x is None else float(f"{x:.12g}")


def analysis_section(a: ConstraintAnalysis) -> dict:
    t = a.table
    lr = a.legendre
    verdict = a.verdict
    out = {
        "model": {"dim": a.dim, "lagrangian": _s(a.model.lagrangian), "text": print_model(a.model)},
        "legendre": {
            "rank": lr.rank,
            "hessian": [[_s(e) for e in row] for row in lr.hessian],
            "momenta": [_s(e) for e in lr.momenta],
            "primaries": [_s(c.expr) for c in lr.primaries],
            "h_canonical": _s(lr.h_canonical),
            "velocity_solution": {k: _s(v) for k, v in sorted(lr.velocity_solution.items())},
            "basis_dependent": lr.basis_dependent,
        },
        "total_hamiltonian": _s(a.hamiltonian),
        "iterations": [
            {
                "generation": rec.generation,
                "weak_equality": "complete" if rec.ideal_status == "complete" else "unconfirmed",
                "residuals": [
                    {"label": r.label, "value": _s(r.value), "case": r.case,
                     "case_name": CASE_NAMES[r.case]}
                    for r in rec.residuals
                ],
                "new_constraints": [_s(e) for e in rec.new_constraints],
                "mixed": [_s(e) for e in rec.mixed],
            }
            for rec in a.iteration_log
        ],
        "constraints": [
            {"label": c.label, "expr": _s(c.expr), "origin": c.origin,
             "generation": c.generation, "class": c.klass}
            for c in a.constraints
        ],
        "ideal": {
            "status": a.basis.status,
            "weak_equality": verdict,
            "basis": [_s(g) for g in a.basis.generators],
        },
        "multipliers": {
            "particular": [_s(e) for e in a.multipliers.particular],
            "denominator": _s(a.multipliers.denominator),
            "free_directions": [[_s(e) for e in v] for v in a.multipliers.free_directions],
            "free_count": a.multipliers.free_count,
        },
        "bracket_matrix": [[_s(e) for e in row] for row in a.bracket_matrix],
        "first_class_basis": [_s(e) for e in a.first_class_basis],
        "second_class_basis": [_s(e) for e in a.second_class_basis],
        "counts": {"J": a.J, "I": a.I, "K": a.K, "N": a.N, "S": a.S, "P": a.P},
        "dof": _s(a.dof),
        "weak_equality": verdict,
    }

    try:
        closure = closure_coefficients(a) if a.first_class_basis else None
        out["closure"] = {
            "basis_dependent": True,
            "weak_equality": verdict,
            "entries": [] if closure is None else [
                {"n": e.n, "m": e.m, "coefficients": [_s(c) for c in e.coefficients]}
                for e in closure.entries
            ],
        }
    except DiracKitError as exc:
        out["closure"] = {"error": str(exc)}

    names = t.names[: 2 * t.dim]
    brackets = []
    for f_name, g_name in combinations(names, 2):
        f, g = t.var(f_name), t.var(g_name)
        try:
            value = _s(dirac_bracket(f, g, a))
        except UnsupportedError as exc:
            value, note = None, str(exc)
        else:
            note = ""
        entry = {"f": f_name, "g": g_name, "value": value}
        if note:
            entry["note"] = note
        brackets.append(entry)
    out["dirac_brackets"] = {"weak_equality": verdict, "pairs": brackets}

    try:
        red = linear_reduction(a)
        out["reduction"] = {
            "dimension": red.dimension,
            "coordinates": [_s(b) for b in red.basis],
            "brackets": [[_s(x) for x in row] for row in red.brackets],
            "kernel_matches_gauge": red.kernel_matches_gauge,
        }
    except DiracKitError as exc:
        out["reduction"] = {"unsupported": str(exc)}
    return out


def quantization_section(a: ConstraintAnalysis, rep) -> dict:
    """Raises :class:`UnsupportedError` naming the first unquantizable constraint."""
    t = a.table
    for c in a.constraints:
        try:
            quantize_poly(c.expr, rep)
        except UnsupportedError as exc:
            raise UnsupportedError(f"constraint {c.label} ({c.expr}) cannot be quantized: {exc}") from None

    elementary = [t.const(1)] + [t.q(i) for i in range(1, t.dim + 1)] + [t.p(i) for i in range(1, t.dim + 1)]
    elem = [
        {"f": _s(f), "g": _s(g), "residual": _num(commutator_check(f, g, rep))}
        for f, g in combinations(elementary, 2)
    ]
    exprs = a.exprs()
    cons = [
        {"f": _s(f), "g": _s(g), "residual": _num(commutator_check(f, g, rep))}
        for f, g in combinations(exprs, 2)
    ]
    ops = [quantize_poly(g, rep) for g in a.first_class_basis]
    kernel = physical_states(ops, rep=rep)
    section = {
        "representation": {"kind": rep.kind, "dims": rep.dims, "sites": rep.sites,
                           "hbar": rep.hbar, "size": rep.size},
        "sign_convention": "iota({f,g}) = -(i/hbar)[iota f, iota g]",
        "elementary": elem,
        "constraint_pairs": cons,
        "hermitian": [quantize_poly(e, rep).is_hermitian() for e in exprs],
        "kernel": {
            "constraints": [_s(g) for g in a.first_class_basis],
            "dimension": kernel.dimension,
            "note": KERNEL_NOTE,
        },
    }
    if not exprs:
        section["note"] = "no constraints; elementary checks only"
    if a.second_class_basis:
        section["second_class_note"] = (
            "second-class constraints are not imposed on states; they are handled by the Dirac bracket"
        )
    anomalies = []
    if len(a.first_class_basis) > 1:
        for e in anomaly_residual(a, rep, closure_coefficients(a)):
            entry = {"n": e.n, "m": e.m, "norm_small": _num(e.norm_small), "norm": _num(e.norm)}
            if e.anomalous is None:
                entry["verdict"] = "unsupported"
                entry["note"] = e.note
            else:
                entry["verdict"] = "anomalous" if e.anomalous else "not anomalous"
            anomalies.append(entry)
    section["anomaly"] = {"sites_small": smaller_sites(rep.sites), "entries": anomalies}
    return section


def build_report(command: str, a: ConstraintAnalysis, rep=None) -> dict:
    doc = {"schema": SCHEMA_VERSION, "command": command}
    doc.update(analysis_section(a))
    if rep is not None:
        doc["quantization"] = quantization_section(a, rep)
    return doc


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --- text rendering ---------------------------------------------------------

def render_text(doc: dict) -> str:
    lines = []
    add = lines.append
    m = doc["model"]
    add(f"model: dim {m['dim']}, L = {m['lagrangian']}")
    lg = doc["legendre"]
    add(f"Hessian rank: {lg['rank']} of {m['dim']}")
    add("primary constraints: " + (", ".join(lg["primaries"]) or "none"))
    add(f"canonical Hamiltonian: H_c = {lg['h_canonical']}")
    add(f"total Hamiltonian: H = {doc['total_hamiltonian']}")
    add("")
    add("consistency iterations:")
    for it in doc["iterations"]:
        add(f"  generation {it['generation']} [{it['weak_equality']}]")
        for r in it["residuals"]:
            add(f"    {{phi{r['label']}, H}} ~ {r['value']}  case ({r['case']}) {r['case_name']}")
        for e in it["new_constraints"]:
            add(f"    new constraint: {e}")
        for e in it["mixed"]:
            add(f"    mixed relation: {e}")
    add("")
    c = doc["counts"]
    add(f"{c['J']} constraints ({c['I']} primary, {c['K']} secondary), "
        f"{c['N']} first class, {c['S']} second class")
    for row in doc["constraints"]:
        add(f"  phi{row['label']} = {row['expr']}  ({row['origin']}, {row['class']} class)")
    mu = doc["multipliers"]
    add(f"multipliers: {mu['free_count']} free")
    if mu["particular"]:
        den = "" if mu["denominator"] == "1" else f" / ({mu['denominator']})"
        add("  particular: (" + ", ".join(mu["particular"]) + ")" + den)
        for v in mu["free_directions"]:
            add("  free direction: (" + ", ".join(v) + ")")
    cl = doc["closure"]
    if "error" in cl:
        add(f"closure: {cl['error']}")
    elif cl["entries"]:
        add("closure {G_n, G_m} = f^p G_p (basis dependent):")
        for e in cl["entries"]:
            add(f"  ({e['n']},{e['m']}): " + ", ".join(e["coefficients"]))
    db = doc["dirac_brackets"]
    add(f"Dirac brackets [{db['weak_equality']}]:")
    for e in db["pairs"]:
        add(f"  {{{e['f']}, {e['g']}}}_D = {e['value'] if e['value'] is not None else 'unsupported'}")
    red = doc["reduction"]
    if "unsupported" in red:
        add(f"reduced phase space: {red['unsupported']}")
    else:
        add(f"reduced phase space: dimension {red['dimension']}, coordinates "
            + (", ".join(red["coordinates"]) or "none"))
    add(f"dof = {doc['dof']}  [weak equality {doc['weak_equality']}]")

    q = doc.get("quantization")
    if q is not None:
        r = q["representation"]
        add("")
        add(f"quantization: {r['kind']}, d={r['dims']}, N={r['sites']}, hbar={r['hbar']:g}, size {r['size']}")
        if "note" in q:
            add(f"  {q['note']}")
        add(f"  convention: {q['sign_convention']}")
        for e in q["elementary"]:
            add(f"  residual [{e['f']}, {e['g']}]: {e['residual']:.3e}")
        for e in q["constraint_pairs"]:
            add(f"  residual [{e['f']}, {e['g']}]: {e['residual']:.3e}")
        k = q["kernel"]
        add(f"  physical kernel dimension: {k['dimension']} ({k['note']})")
        if "second_class_note" in q:
            add(f"  {q['second_class_note']}")
        for e in q["anomaly"]["entries"]:
            if e["verdict"] == "unsupported":
                add(f"  D_{e['n']}{e['m']}: unsupported ({e['note']})")
            else:
                add(f"  D_{e['n']}{e['m']}: norm {e['norm']:.3e} at N={r['sites']}, "
                    f"{e['norm_small']:.3e} at N={q['anomaly']['sites_small']}: {e['verdict']}")
    return "\n".join(lines) + "\n"
