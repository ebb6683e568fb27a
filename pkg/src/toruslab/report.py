"""Verification checks, the per-kind registry, and deterministic reports.

Each check is a pure function of (instance, plan) returning a CheckResult with
status "pass", "window-verified" or "fail".  "window-verified" marks facts
about infinite objects that were established on the requested window only.
Reports serialize without timings so identical config + seed gives
byte-identical output; elapsed time goes to the human summary instead.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from .albert import (
    SplittingRep,
    albert_grading_check,
    coset_cover_check,
    cubic_structure,
    deg3_center_check,
)
from .assoc import (
    NotHomogeneousError,
    central_grading_group,
    coboundary_twist,
    cocycle_identity_check,
    commutation_bihomomorphism_check,
    commutation_factor,
    involution_antiautomorphism_check,
    structure_constant_rows,
)
from .clifford import center_support_window, grading_case_check, validate_triple
from .config import Instance, VerifyPlan
from .jordan import (
    gradedness_check,
    jordan_identity_check,
    jordan_invert,
    jordan_structure_rows,
    strong_type_check,
    torus_axioms_check,
)
from .lattice import box, vscale
from .scalars import format_scalar

PASS = "pass"
WINDOW = "window-verified"
FAIL = "fail"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""
    witness: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def to_json(self) -> dict:
        out = {"check": self.name, "status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _from_sweep(name: str, report, windowed: bool = True, detail: str = "") -> CheckResult:
    if report.ok:
        status = WINDOW if windowed else PASS
        note = f"{report.checked} {report.mode}"
        return CheckResult(name, status, detail=(detail or note))
    return CheckResult(name, FAIL, detail=detail, witness=str(report.witness))


# -- individual checks ---------------------------------------------------------


def check_cocycle_identity(inst: Instance, plan: VerifyPlan) -> CheckResult:
    report = cocycle_identity_check(inst.cocycle, plan.window, seed=plan.seed,
                                    sample_size=plan.sample("cocycle_identity", 20000))
    return _from_sweep("cocycle_identity", report)


def check_commutation_bihomomorphism(inst: Instance, plan: VerifyPlan) -> CheckResult:
    bound = min(plan.window, 2) if inst.rank >= 3 else plan.window
    return _from_sweep("commutation_bihomomorphism",
                       commutation_bihomomorphism_check(inst.cocycle, bound))


def check_coboundary_invariance(inst: Instance, plan: VerifyPlan) -> CheckResult:
    rng = random.Random(plan.seed)
    field = inst.field
    cache = {}

    def d(s):
        if s not in cache:
            c = field.scalar(rng.choice([1, 2, 3, -1]))
            if field.kind == "cyclotomic3":
                c = c * field.omega() ** rng.randrange(3)
            cache[s] = c
        return cache[s]

    bound = min(plan.window, 2)
    twisted = coboundary_twist(inst.cocycle, d, bound)
    for s in twisted.support_window(bound):
        for t in twisted.support_window(bound):
            if commutation_factor(twisted, s, t) != commutation_factor(inst.cocycle, s, t):
                return CheckResult("coboundary_invariance", FAIL, witness=str((s, t)))
    return CheckResult("coboundary_invariance", WINDOW,
                       detail=f"random rescaling, window {bound}")


def check_central_grading(inst: Instance, plan: VerifyPlan) -> CheckResult:
    gamma = central_grading_group(inst.cocycle)
    gens = [list(g) for g in gamma.generators]
    return CheckResult("central_grading", PASS,
                       detail=f"kernel lattice generators {gens}")


def check_jordan_identity(inst: Instance, plan: VerifyPlan) -> CheckResult:
    limit = plan.sample("jordan_identity_pairs", 4000 if inst.kind != "albert" else 600)
    report = jordan_identity_check(inst.view, plan.window, seed=plan.seed,
                                   random_sums=plan.sample("jordan_identity_sums", 30),
                                   pair_limit=limit)
    return _from_sweep("jordan_identity", report)


def check_torus_axioms(inst: Instance, plan: VerifyPlan) -> CheckResult:
    report = torus_axioms_check(inst.view, plan.window)
    if report.all_ok:
        return CheckResult("torus_axioms", WINDOW,
                           detail=f"T1,T2,T3 on {len(report.support)} support points")
    bad = [n for n, v in (("T1", report.t1), ("T2", report.t2), ("T3", report.t3)) if not v]
    return CheckResult("torus_axioms", FAIL, detail=",".join(bad), witness=str(report.witness))


def check_strong_type(inst: Instance, plan: VerifyPlan) -> CheckResult:
    report = strong_type_check(inst.view, plan.window)
    if report.holds:
        return CheckResult("strong_type", WINDOW, detail=f"{report.checked} pairs")
    # zero products are expected for Clifford mixed pairs: informative, not fatal
    if inst.kind == "clifford":
        return CheckResult("strong_type", WINDOW,
                           detail=f"strong-type=false: {len(report.failing_pairs)} zero pairs "
                                  "(expected for distinct nonzero residues)")
    return CheckResult("strong_type", FAIL,
                       witness=str(report.failing_pairs[:4]))


def check_gradedness(inst: Instance, plan: VerifyPlan) -> CheckResult:
    return _from_sweep("gradedness", gradedness_check(inst.view, plan.window))


def check_involution(inst: Instance, plan: VerifyPlan) -> CheckResult:
    report = involution_antiautomorphism_check(inst.view.theta, plan.window, seed=plan.seed)
    return _from_sweep("involution_antiautomorphism", report)


def check_hermitian_closure(inst: Instance, plan: VerifyPlan) -> CheckResult:
    view = inst.view
    theta = view.theta
    win = view.support_window(min(plan.window, 2))
    for s in win:
        for t in win:
            prod = view.graded_basis(s) * view.graded_basis(t)
            if not prod.is_zero() and not theta.is_fixed(prod.payload):
                return CheckResult("hermitian_closure", FAIL, witness=str((s, t)))
    return CheckResult("hermitian_closure", WINDOW, detail=f"{len(win) ** 2} pairs")


def check_two_g_central(inst: Instance, plan: VerifyPlan) -> CheckResult:
    gamma = central_grading_group(inst.cocycle)
    for s in box(inst.rank, plan.window):
        if not gamma.contains(vscale(2, s)):
            return CheckResult("two_g_central", FAIL, witness=str(s))
    return CheckResult("two_g_central", WINDOW, detail="2s central for windowed s")


def check_rational_structure(inst: Instance, plan: VerifyPlan) -> CheckResult:
    view = inst.view
    win = view.support_window(min(plan.window, 2))
    for s in win:
        for t in win:
            prod = view.graded_basis(s) * view.graded_basis(t)
            if any(not c.is_rational() for c in prod.payload.terms.values()):
                return CheckResult("rational_structure_constants", FAIL, witness=str((s, t)))
    return CheckResult("rational_structure_constants", WINDOW, detail=f"{len(win) ** 2} pairs")


def check_triple_valid(inst: Instance, plan: VerifyPlan) -> CheckResult:
    if inst.kind == "clifford":
        report = validate_triple(inst.triple)
        if report.ok:
            return CheckResult("triple_valid", PASS, detail="all clauses hold")
        return CheckResult("triple_valid", FAIL, detail=",".join(report.failures),
                           witness=str(report.witnesses))
    try:
        inst.triple.validate()
    except Exception as exc:
        return CheckResult("triple_valid", FAIL, witness=str(exc))
    return CheckResult("triple_valid", PASS, detail="all clauses hold")


def check_support_is_S(inst: Instance, plan: VerifyPlan) -> CheckResult:
    t = inst.triple
    expected = {s for s in box(inst.rank, plan.window) if t.s.contains(s)}
    got = set(inst.view.support_window(plan.window))
    if got == expected:
        return CheckResult("support_is_S", WINDOW, detail=f"{len(got)} points")
    return CheckResult("support_is_S", FAIL, witness=str(sorted(got ^ expected)[:4]))


def check_grading_case_table(inst: Instance, plan: VerifyPlan) -> CheckResult:
    ok, witness, zero_pairs = grading_case_check(inst.triple, plan.window)
    if ok:
        return CheckResult("grading_case_table", WINDOW,
                           detail=f"{len(zero_pairs)} zero pairs on mixed residues")
    return CheckResult("grading_case_table", FAIL, witness=str(witness))


def check_center_is_gamma(inst: Instance, plan: VerifyPlan) -> CheckResult:
    t = inst.triple
    centre = set(center_support_window(t, plan.window))
    expected = {s for s in box(inst.rank, plan.window) if t.gamma.contains(s)}
    if centre == expected:
        return CheckResult("center_is_gamma", WINDOW, detail=f"{len(centre)} central points")
    return CheckResult("center_is_gamma", FAIL, witness=str(sorted(centre ^ expected)[:4]))


def check_inverses(inst: Instance, plan: VerifyPlan) -> CheckResult:
    view = inst.view
    one = view.one()
    win = view.support_window(plan.window)
    for s in win:
        u = view.graded_basis(s)
        try:
            v = jordan_invert(u)
        except (NotHomogeneousError, ZeroDivisionError) as exc:
            return CheckResult("homogeneous_inverses", FAIL, witness=f"{s}: {exc}")
        if u * v != one or (u * u) * v != u:
            return CheckResult("homogeneous_inverses", FAIL, witness=str(s))
    return CheckResult("homogeneous_inverses", WINDOW, detail=f"{len(win)} elements")


def check_deg3_center(inst: Instance, plan: VerifyPlan) -> CheckResult:
    return _from_sweep("deg3_center", deg3_center_check(inst.torus, min(plan.window, 1)))


def check_trace_vanishing(inst: Instance, plan: VerifyPlan) -> CheckResult:
    torus = inst.torus
    cb = cubic_structure(torus)
    for i in range(3):
        for j in range(3):
            u = (torus.u1 ** i) * (torus.u2 ** j)
            t = cb.trace(u)
            if (i, j) == (0, 0):
                if t != torus.algebra.one().scale_rational(3):
                    return CheckResult("trace_vanishing", FAIL, witness="tr(1) != 3")
            elif not t.is_zero():
                return CheckResult("trace_vanishing", FAIL, witness=f"tr(u1^{i} u2^{j}) != 0")
    return CheckResult("trace_vanishing", PASS, detail="9 basis traces")


def check_charpoly_cube(inst: Instance, plan: VerifyPlan) -> CheckResult:
    torus = inst.torus
    cb = cubic_structure(torus)
    rng = random.Random(plan.seed)
    count = 0
    try:
        for i in range(3):
            for j in range(3):
                cb.charpoly_cube_check((torus.u1 ** i) * (torus.u2 ** j))
                count += 1
        for k in range(plan.sample("charpoly_random", 5)):
            cb.charpoly_cube_check(torus.random_element(rng, terms=2 + (k % 2)))
            count += 1
    except Exception as exc:
        return CheckResult("charpoly_cube", FAIL, witness=str(exc))
    return CheckResult("charpoly_cube", PASS, detail=f"{count} elements, m^3 = charpoly")


def check_splitting_norm(inst: Instance, plan: VerifyPlan) -> CheckResult:
    torus = inst.torus
    cb = cubic_structure(torus)
    rep = SplittingRep(torus)
    rng = random.Random(plan.seed)
    count = plan.sample("splitting_random", 10)
    try:
        for _ in range(count):
            x = torus.random_element(rng, terms=2)
            if rep.norm_via_det(x) != cb.norm(x):
                return CheckResult("splitting_norm", FAIL, witness="det != N")
    except Exception as exc:
        return CheckResult("splitting_norm", FAIL, witness=str(exc))
    return CheckResult("splitting_norm", PASS, detail=f"{count} determinants")


def check_tits_diagonal(inst: Instance, plan: VerifyPlan) -> CheckResult:
    view = inst.view
    torus = inst.torus
    rng = random.Random(plan.seed)
    count = plan.sample("tits_diagonal", 50)
    for _ in range(count):
        a = torus.random_element(rng, terms=2)
        b = torus.random_element(rng, terms=2)
        lhs = view.embed(a) * view.embed(b)
        rhs = view.embed((a * b + b * a).scale_rational(1, 2))
        if lhs != rhs:
            return CheckResult("tits_diagonal", FAIL, witness="diagonal reduction failed")
    return CheckResult("tits_diagonal", PASS, detail=f"{count} embedded pairs")


def check_t_alpha_cover(inst: Instance, plan: VerifyPlan) -> CheckResult:
    ok, count = coset_cover_check(inst.view, plan.window)
    if ok:
        return CheckResult("t_alpha_cover", WINDOW, detail=f"{count} cosets covered")
    return CheckResult("t_alpha_cover", FAIL, witness=f"only {count} cosets covered")


def check_albert_grading(inst: Instance, plan: VerifyPlan) -> CheckResult:
    return _from_sweep("albert_grading", albert_grading_check(inst.view, plan.window))


def check_adjoint_cayley_hamilton(inst: Instance, plan: VerifyPlan) -> CheckResult:
    view = inst.view
    rng = random.Random(plan.seed)
    win = view.support_window(plan.window)
    e = view.one()
    count = plan.sample("adjoint_samples", 40)
    for _ in range(count):
        x = view.zero()
        for _ in range(rng.randrange(1, 3)):
            x = x + view.t_alpha(rng.choice(win)).scale(view.field.scalar(rng.randrange(-2, 3)))
        p = x.payload
        if view.sharp(view.sharp(p)) != p.cscale(view.norm(p)):
            return CheckResult("adjoint_cayley_hamilton", FAIL, witness="x## != N(x) x")
        x2 = x * x
        lhs = ((x2 * x).payload - x2.payload.cscale(view.lin_trace(p))
               + p.cscale(view.spur(p)) - e.payload.cscale(view.norm(p)))
        if not lhs.is_zero():
            return CheckResult("adjoint_cayley_hamilton", FAIL, witness="Cayley-Hamilton failed")
    return CheckResult("adjoint_cayley_hamilton", PASS, detail=f"{count} samples")


def check_t_sigma3_inverse(inst: Instance, plan: VerifyPlan) -> CheckResult:
    view = inst.view
    s3 = inst.triple.s3
    t_s3 = view.t_alpha(s3)
    inv = jordan_invert(t_s3)
    from .lattice import vneg

    if inv != view.t_alpha(vneg(s3)) or t_s3 * inv != view.one():
        return CheckResult("t_sigma3_inverse", FAIL, witness="t_{s3}^-1 != t_{-s3}")
    return CheckResult("t_sigma3_inverse", PASS, detail="t_{s3}^-1 = t_{-s3}")


REGISTRY: dict[str, list[tuple[str, Callable]]] = {
    "assoc-only": [
        ("cocycle_identity", check_cocycle_identity),
        ("commutation_bihomomorphism", check_commutation_bihomomorphism),
        ("coboundary_invariance", check_coboundary_invariance),
        ("central_grading", check_central_grading),
    ],
    "quantum-plus": [
        ("cocycle_identity", check_cocycle_identity),
        ("commutation_bihomomorphism", check_commutation_bihomomorphism),
        ("coboundary_invariance", check_coboundary_invariance),
        ("central_grading", check_central_grading),
        ("jordan_identity", check_jordan_identity),
        ("torus_axioms", check_torus_axioms),
        ("strong_type", check_strong_type),
        ("gradedness", check_gradedness),
    ],
    "involution": [
        ("cocycle_identity", check_cocycle_identity),
        ("involution_antiautomorphism", check_involution),
        ("hermitian_closure", check_hermitian_closure),
        ("two_g_central", check_two_g_central),
        ("jordan_identity", check_jordan_identity),
        ("torus_axioms", check_torus_axioms),
        ("gradedness", check_gradedness),
    ],
    "extension": [
        ("cocycle_identity", check_cocycle_identity),
        ("involution_antiautomorphism", check_involution),
        ("rational_structure_constants", check_rational_structure),
        ("jordan_identity", check_jordan_identity),
        ("torus_axioms", check_torus_axioms),
        ("gradedness", check_gradedness),
    ],
    "clifford": [
        ("triple_valid", check_triple_valid),
        ("support_is_S", check_support_is_S),
        ("grading_case_table", check_grading_case_table),
        ("center_is_gamma", check_center_is_gamma),
        ("jordan_identity", check_jordan_identity),
        ("torus_axioms", check_torus_axioms),
        ("strong_type", check_strong_type),
        ("homogeneous_inverses", check_inverses),
    ],
    "albert": [
        ("triple_valid", check_triple_valid),
        ("cocycle_identity", check_cocycle_identity),
        ("deg3_center", check_deg3_center),
        ("trace_vanishing", check_trace_vanishing),
        ("charpoly_cube", check_charpoly_cube),
        ("splitting_norm", check_splitting_norm),
        ("tits_diagonal", check_tits_diagonal),
        ("t_alpha_cover", check_t_alpha_cover),
        ("albert_grading", check_albert_grading),
        ("jordan_identity", check_jordan_identity),
        ("torus_axioms", check_torus_axioms),
        ("adjoint_cayley_hamilton", check_adjoint_cayley_hamilton),
        ("t_sigma3_inverse", check_t_sigma3_inverse),
    ],
}


def worker_count() -> int:
    raw = os.environ.get("TORUSLAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_checks(inst: Instance) -> list[CheckResult]:
    """Run the registered (or requested) checks; results keep registry order
    regardless of completion order, so reports are deterministic."""
    registry = REGISTRY[inst.kind]
    if inst.plan.checks is not None:
        known = {name for name, _ in registry}
        unknown = [c for c in inst.plan.checks if c not in known]
        if unknown:
            from .config import ConfigError

            raise ConfigError("/verify/checks", f"unknown checks {unknown}; known: {sorted(known)}")
        registry = [(n, f) for n, f in registry if n in set(inst.plan.checks)]
    threads = worker_count()

    def run_one(item):
        name, fn = item
        try:
            return fn(inst, inst.plan)
        except Exception as exc:  # surfaced, never swallowed silently
            return CheckResult(name, FAIL, detail="check raised", witness=repr(exc))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, registry))
    else:
        results = [run_one(item) for item in registry]
    return results


def report_json(inst: Instance, results: list[CheckResult]) -> dict:
    return {
        "instance": inst.raw,
        "kind": inst.kind,
        "rank": inst.rank,
        "window": inst.plan.window,
        "seed": inst.plan.seed,
        "checks": [r.to_json() for r in results],
        "all_ok": all(r.ok for r in results),
    }


def human_summary(results: list[CheckResult]) -> str:
    lines = []
    width = max((len(r.name) for r in results), default=8)
    for r in results:
        mark = {"pass": "PASS", "window-verified": "PASS*", "fail": "FAIL"}[r.status]
        line = f"  {r.name:<{width}}  {mark:<5}  {r.detail}"
        if r.witness:
            line += f"  witness={r.witness}"
        lines.append(line)
    lines.append("  (* = verified on the requested window)")
    return "\n".join(lines)


# -- torus descriptors and structure tables -------------------------------------


def structure_rows(inst: Instance, bound: int) -> list[dict]:
    """Structure constants: cocycle rows for assoc kinds, Jordan rows otherwise."""
    if inst.kind == "assoc-only":
        rows = structure_constant_rows(inst.cocycle, bound)
        return [
            {"sigma": list(s), "tau": list(t), "sum": list(u), "coeff": format_scalar(c)}
            for s, t, u, c in rows
        ]
    return jordan_structure_rows(inst.view, bound)


def torus_descriptor(inst: Instance, bound: int) -> dict:
    """Metadata + structure constants: the build artifact."""
    if inst.kind == "assoc-only":
        support = inst.cocycle.support_window(bound)
        gamma = central_grading_group(inst.cocycle)
    else:
        support = inst.view.support_window(bound)
        if inst.kind == "clifford":
            gamma = inst.triple.gamma
        elif inst.kind == "albert":
            gamma = inst.triple.gamma
        elif inst.cocycle is not None:
            gamma = central_grading_group(inst.cocycle)
        else:
            gamma = None
    return {
        "type_tag": inst.type_tag(),
        "rank": inst.rank,
        "window": bound,
        "support_window": [list(s) for s in sorted(support)],
        "central_grading_group": None if gamma is None else gamma.to_json(),
        "structure_constants": structure_rows(inst, bound),
    }
