"""Randomized instance sweeps: valid instances must verify clean, adversarial
mutations must be caught, and every caught failure shrinks to a minimal
witness config written to disk.

Shrinking is family-specific but always ends in a config that still fails and
cannot be reduced by the family's own shrink moves (dropping table rows,
dropping representatives, reverting a basis change to the desk instance).
"""

from __future__ import annotations

import json
import os
import random
from typing import Callable, Optional

from .config import ConfigError, build_instance
from .lattice import (
    QuadraticMapF2,
    Subgroup,
    box,
    coset_reps,
    generates_full_lattice,
    vadd,
)
from .scalars import format_scalar

FAMILIES = ("cocycle", "clifford", "albert", "involution")

_ENTRY_POOL = ["1", "-1", "w", "w^-1", "2", "1/3"]
_RATIONAL_POOL = ["1", "-1", "2", "1/3"]
_A_POOL = ["1", "-1", "2", "1/2", "3"]


def _reciprocal(lit: str) -> str:
    table = {"1": "1", "-1": "-1", "w": "w^-1", "w^-1": "w", "2": "1/2",
             "1/2": "2", "1/3": "3", "3": "1/3"}
    return table[lit]


# -- generators ------------------------------------------------------------------


def gen_cocycle(rng: random.Random) -> dict:
    n = rng.choice([2, 2, 3])
    pool = _ENTRY_POOL if rng.randrange(2) else _RATIONAL_POOL
    q = [["1"] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            lit = rng.choice(pool)
            q[i][j] = lit
            q[j][i] = _reciprocal(lit)
    return {
        "kind": "assoc-only",
        "n": n,
        "cocycle": {"kind": "quantum", "q": q},
        "verify": {"window": 2 if n == 2 else 1, "seed": rng.randrange(1000),
                   "checks": ["cocycle_identity", "commutation_bihomomorphism",
                              "central_grading"]},
    }


def gen_involution(rng: random.Random) -> dict:
    n = rng.choice([2, 3])
    while True:
        on_basis = [rng.randrange(2) for _ in range(n)]
        on_sums = [[i, j, rng.randrange(2)] for i in range(n) for j in range(i + 1, n)]
        qmap = QuadraticMapF2(n, on_basis, {(i, j): v for i, j, v in on_sums})
        # the fixed support must generate ZZ^n, else T1 legitimately fails
        support = [v for v in box(n, 1) if qmap(v) == 0]
        if generates_full_lattice(n, support):
            break
    q = [["1"] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if qmap.beta(tuple(int(k == i) for k in range(n)),
                         tuple(int(k == j) for k in range(n))):
                q[i][j] = q[j][i] = "-1"
    return {
        "kind": "involution",
        "n": n,
        "q": q,
        "qmap": {"on_basis": on_basis, "on_sums": on_sums},
        "verify": {"window": 1, "seed": rng.randrange(1000),
                   "checks": ["involution_antiautomorphism", "hermitian_closure",
                              "torus_axioms"]},
    }


def gen_clifford(rng: random.Random) -> dict:
    n = rng.choice([2, 2, 3])
    gens = [[2 * int(i == j) for j in range(n)] for i in range(n)]
    if rng.randrange(2):
        extra = [rng.randrange(2) for _ in range(n)]
        if any(extra):
            gens.append(extra)
    gamma = Subgroup(n, gens)
    all_reps = coset_reps(n, gamma)
    if len(all_reps) < 3:
        # a single nonzero coset gives a commutative associative J whose
        # center exceeds Gamma; keep at least two nonzero residues
        gamma = Subgroup.scaled(n, 2)
        all_reps = coset_reps(n, gamma)
    nonzero = all_reps[1:]
    rng.shuffle(nonzero)
    # keep enough reps that the union generates ZZ^n, and at least two
    for count in range(2, len(nonzero) + 1):
        reps = [all_reps[0]] + sorted(nonzero[:count])
        if generates_full_lattice(n, list(gamma.generators) + reps):
            break
    a = {str(i + 1): rng.choice(_A_POOL) for i in range(len(reps) - 1)}
    return {
        "kind": "clifford",
        "n": n,
        "gamma": [list(g) for g in gamma.generators],
        "reps": [list(r) for r in reps],
        "a": a,
        "verify": {"window": 1, "seed": rng.randrange(1000),
                   "checks": ["triple_valid", "grading_case_table", "center_is_gamma",
                              "homogeneous_inverses", "jordan_identity"]},
    }


DESK_ALBERT = {
    "gamma": [[3, 0, 0, 0], [0, 3, 0, 0], [0, 0, 3, 0], [0, 0, 0, 1]],
    "delta": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 3, 0], [0, 0, 0, 1]],
    "sigma": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
}


def _random_unimodular(rng: random.Random, n: int, steps: int = 3):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-1, 1])
        for k in range(n):
            u[i][k] += c * u[j][k]
    return u


def _apply_matrix(u, v):
    n = len(u)
    return [sum(u[i][k] * v[k] for k in range(n)) for i in range(n)]


def gen_albert(rng: random.Random) -> dict:
    u = _random_unimodular(rng, 4)
    cfg = {
        "kind": "albert",
        "n": 4,
        "gamma": [_apply_matrix(u, g) for g in DESK_ALBERT["gamma"]],
        "delta": [_apply_matrix(u, g) for g in DESK_ALBERT["delta"]],
        "sigma": [_apply_matrix(u, s) for s in DESK_ALBERT["sigma"]],
        "omega": True,
        "verify": {"window": 1, "seed": rng.randrange(1000),
                   "checks": ["triple_valid", "deg3_center", "trace_vanishing",
                              "tits_diagonal", "t_sigma3_inverse"],
                   "samples": {"tits_diagonal": 10}},
    }
    return cfg


GENERATORS: dict[str, Callable[[random.Random], dict]] = {
    "cocycle": gen_cocycle,
    "involution": gen_involution,
    "clifford": gen_clifford,
    "albert": gen_albert,
}


# -- adversarial mutations ----------------------------------------------------------


def mutate_cocycle(cfg: dict, rng: random.Random) -> dict:
    """Tabulate the quantum cocycle on a window and perturb one table value.

    The table covers window 2 so every identity triple of window 1 stays
    evaluable; the perturbed pair has both arguments nonzero in window 1,
    which guarantees an exposing triple."""
    from .assoc import structure_constant_rows

    inst = build_instance(cfg)
    n = inst.rank
    rows = structure_constant_rows(inst.cocycle, 2)
    table_rows = [[list(s), list(t), format_scalar(c)] for s, t, _, c in rows]
    zero = [0] * n

    def small_nonzero(vv):
        return vv != zero and all(abs(x) <= 1 for x in vv)

    candidates = [k for k, (s, t, _) in enumerate(table_rows)
                  if small_nonzero(s) and small_nonzero(t)]
    k = rng.choice(candidates)
    table_rows[k][2] = table_rows[k][2] + "*2"
    return {
        "kind": "assoc-only",
        "n": n,
        "cocycle": {"kind": "table", "rows": table_rows},
        "verify": {"window": 1, "seed": 0, "checks": ["cocycle_identity"]},
    }


def mutate_involution(cfg: dict, rng: random.Random) -> dict:
    out = json.loads(json.dumps(cfg))
    n = out["n"]
    i = rng.randrange(n)
    j = rng.randrange(n)
    while j == i:
        j = rng.randrange(n)
    cur = out["q"][i][j]
    out["q"][i][j] = out["q"][j][i] = "-1" if cur == "1" else "1"
    return out


def mutate_clifford(cfg: dict, rng: random.Random) -> dict:
    out = json.loads(json.dumps(cfg))
    n = out["n"]
    move = rng.choice(["zero_a", "gamma_3", "drop_zero_rep"])
    if move == "zero_a" and out["a"]:
        key = rng.choice(sorted(out["a"]))
        out["a"][key] = "0"
    elif move == "gamma_3":
        out["gamma"] = [[3 * int(i == j) for j in range(n)] for i in range(n)]
    else:
        out["reps"] = out["reps"][1:] or [[1] + [0] * (n - 1)]
    return out


def mutate_albert(cfg: dict, rng: random.Random) -> dict:
    out = json.loads(json.dumps(cfg))
    move = rng.choice(["gamma_3G", "dependent_sigma", "sigma3_in_delta"])
    if move == "gamma_3G":
        out["gamma"] = [[3 * int(i == j) for j in range(4)] for i in range(4)]
    elif move == "dependent_sigma":
        out["sigma"][2] = [a + b for a, b in zip(out["sigma"][0], out["sigma"][1])]
    else:
        out["delta"] = [[int(i == j) for j in range(4)] for i in range(4)]
    return out


MUTATORS: dict[str, Callable[[dict, random.Random], dict]] = {
    "cocycle": mutate_cocycle,
    "involution": mutate_involution,
    "clifford": mutate_clifford,
    "albert": mutate_albert,
}


# -- verification and shrinking --------------------------------------------------------


def verify_config(cfg: dict) -> tuple[bool, str]:
    """(ok, failure description). Construction errors count as failures."""
    from .report import run_checks

    try:
        inst = build_instance(cfg)
    except ConfigError as exc:
        return False, f"config: {exc}"
    except Exception as exc:
        return False, f"construction: {exc}"
    try:
        results = run_checks(inst)
    except ConfigError as exc:
        return False, f"config: {exc}"
    for r in results:
        if not r.ok:
            return False, f"check {r.name}: {r.witness or r.detail}"
    return True, ""


def shrink_config(family: str, cfg: dict) -> dict:
    """Greedy family-specific minimization keeping the failure alive."""
    ok, _ = verify_config(cfg)
    assert not ok, "shrink called on a passing config"
    cur = cfg
    for move in _shrink_moves(family):
        while True:
            smaller = move(cur)
            if smaller is None:
                break
            ok, _ = verify_config(smaller)
            if ok:
                break
            cur = smaller
    return cur


def _shrink_moves(family: str):
    if family == "cocycle":
        return [_shrink_table_to_witness]
    if family == "clifford":
        return [_shrink_drop_rep]
    if family == "albert":
        return [_shrink_to_desk_basis]
    return [_shrink_noop]


def _shrink_noop(cfg):
    return None


def _shrink_table_to_witness(cfg):
    """Keep only the four table rows of one failing identity triple; the
    remaining table cannot lose a row without losing the failure."""
    from .assoc import cocycle_identity_check

    rows = cfg.get("cocycle", {}).get("rows")
    if not rows or len(rows) <= 4:
        return None
    inst = build_instance(cfg)
    report = cocycle_identity_check(inst.cocycle, cfg["verify"].get("window", 1))
    if report.ok or report.witness is None:
        return None
    s, t, d = report.witness
    needed = {
        (tuple(map(int, vadd(s, t))), d),
        (s, t),
        (s, tuple(map(int, vadd(t, d)))),
        (t, d),
    }
    cand = json.loads(json.dumps(cfg))
    cand["cocycle"]["rows"] = [
        row for row in cand["cocycle"]["rows"]
        if (tuple(row[0]), tuple(row[1])) in needed
    ]
    ok, _ = verify_config(cand)
    return cand if not ok else None


def _shrink_drop_rep(cfg):
    """Drop a nonzero representative (reindexing the a map) if still failing."""
    reps = cfg.get("reps")
    if not reps or len(reps) <= 2:
        return None
    for k in range(len(reps) - 1, 0, -1):
        cand = json.loads(json.dumps(cfg))
        del cand["reps"][k]
        new_a = {}
        new_idx = 0
        for i in range(1, len(reps)):
            if i == k:
                continue
            new_idx += 1
            if str(i) in cfg.get("a", {}):
                new_a[str(new_idx)] = cfg["a"][str(i)]
        cand["a"] = new_a
        ok, _ = verify_config(cand)
        if not ok:
            return cand
    return None


def _shrink_to_desk_basis(cfg):
    """Re-express the mutation over the desk triple, undoing the basis change."""
    if cfg.get("_desk_reverted"):
        return None
    three_i = [[3 * int(i == j) for j in range(4)] for i in range(4)]
    eye = [[int(i == j) for j in range(4)] for i in range(4)]
    cand = {"kind": "albert", "n": 4, "omega": True,
            "verify": json.loads(json.dumps(cfg.get("verify", {}))),
            "gamma": json.loads(json.dumps(DESK_ALBERT["gamma"])),
            "delta": json.loads(json.dumps(DESK_ALBERT["delta"])),
            "sigma": json.loads(json.dumps(DESK_ALBERT["sigma"])),
            "_desk_reverted": True}
    if cfg["gamma"] == three_i:
        cand["gamma"] = three_i
    if cfg["delta"] == eye:
        cand["delta"] = eye
    if cfg["sigma"][2] == [a + b for a, b in zip(cfg["sigma"][0], cfg["sigma"][1])]:
        cand["sigma"][2] = [a + b for a, b in zip(cand["sigma"][0], cand["sigma"][1])]
    return cand


# -- driver ---------------------------------------------------------------------------


def run_fuzz(family: str, trials: int, seed: int, out_dir: Optional[str] = None,
             adversarial: int = 0) -> dict:
    """Fuzz one family: `trials` random valid instances must verify clean and
    `adversarial` mutations must be caught; caught failures are shrunk and
    written to out_dir."""
    if family not in FAMILIES:
        raise ConfigError("/family", f"unknown family {family!r}; expected one of {FAMILIES}")
    rng = random.Random(seed)
    gen = GENERATORS[family]
    clean_failures = []
    for k in range(trials):
        cfg = gen(rng)
        ok, why = verify_config(cfg)
        if not ok:
            clean_failures.append({"trial": k, "why": why, "config": cfg})
    mutant_results = []
    witness_files = []
    for k in range(adversarial):
        cfg = gen(rng)
        mutant = MUTATORS[family](cfg, rng)
        ok, why = verify_config(mutant)
        caught = not ok
        entry = {"mutation": k, "caught": caught, "why": why}
        if caught:
            shrunk = shrink_config(family, mutant)
            shrunk.pop("_desk_reverted", None)
            entry["witness"] = shrunk
            if out_dir:
                os.makedirs(out_dir, exist_ok=True)
                path = os.path.join(out_dir, f"witness_{family}_{k}.json")
                with open(path, "w") as fh:
                    json.dump(shrunk, fh, indent=1, sort_keys=True)
                witness_files.append(path)
        mutant_results.append(entry)
    return {
        "family": family,
        "trials": trials,
        "clean": not clean_failures,
        "clean_failures": clean_failures,
        "adversarial": adversarial,
        "caught": sum(1 for m in mutant_results if m["caught"]),
        "mutations": mutant_results,
        "witness_files": witness_files,
        "ok": not clean_failures and all(m["caught"] for m in mutant_results),
    }
