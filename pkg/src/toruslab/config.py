"""JSON instance configs: schema validation and construction.

Config errors carry JSON-pointer locations (e.g. "/gamma/0/1") so the CLI can
name the offending field.  Construction-level failures (an incompatible
involution pair, an invalid triple) are surfaced verbatim, not re-wrapped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any, Optional

from .albert import AlbertTriple, Deg3Torus, build_deg3_torus, tits_first
from .assoc import (
    BicharacterCocycle,
    Cocycle,
    QuantumCocycle,
    QuantumMatrix,
    TableCocycle,
)
from .clifford import CliffordTriple
from .jordan import (
    CliffordView,
    JordanView,
    build_extension_type,
    build_involution_type,
    build_plus_type,
)
from .lattice import QuadraticMapF2, Subgroup
from .scalars import QQ, QW, Field, Scalar, scalar_from_json

KINDS = ("assoc-only", "quantum-plus", "involution", "extension", "clifford", "albert")


class ConfigError(ValueError):
    """Schema violation, annotated with the JSON-pointer of the bad field."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


@dataclass
class VerifyPlan:
    window: int
    seed: int = 0
    checks: Optional[list[str]] = None  # None = all registered checks
    samples: dict = dc_field(default_factory=dict)

    def sample(self, name: str, default: int) -> int:
        return int(self.samples.get(name, default))


@dataclass
class Instance:
    kind: str
    field: Field
    rank: int
    plan: VerifyPlan
    raw: dict
    cocycle: Optional[Cocycle] = None
    view: Optional[JordanView] = None
    torus: Optional[Deg3Torus] = None
    triple: Optional[object] = None  # CliffordTriple | AlbertTriple

    def type_tag(self) -> str:
        return self.kind


# -- low-level schema helpers -------------------------------------------------


def _need(obj: dict, key: str, pointer: str) -> Any:
    if key not in obj:
        raise ConfigError(pointer, f"missing required field {key!r}")
    return obj[key]


def _as_int(x, pointer: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ConfigError(pointer, f"expected an integer, got {x!r}")
    return x


def _as_int_vector(x, n: int, pointer: str) -> tuple[int, ...]:
    if not isinstance(x, list) or len(x) != n:
        raise ConfigError(pointer, f"expected a length-{n} integer vector")
    return tuple(_as_int(v, f"{pointer}/{i}") for i, v in enumerate(x))


def _as_int_matrix(x, n: int, pointer: str) -> list[tuple[int, ...]]:
    if not isinstance(x, list) or not x:
        raise ConfigError(pointer, "expected a non-empty matrix (list of rows)")
    return [_as_int_vector(row, n, f"{pointer}/{i}") for i, row in enumerate(x)]


def _as_scalar(x, field: Field, pointer: str) -> Scalar:
    try:
        return scalar_from_json(x, field)
    except Exception as exc:
        raise ConfigError(pointer, f"bad scalar literal: {exc}") from None


def parse_field(obj, pointer: str) -> Field:
    if obj is None or obj == "rational":
        return QQ
    if obj == "cyclotomic3":
        return QW
    if isinstance(obj, dict) and obj.get("kind") == "quadratic":
        from fractions import Fraction

        try:
            return Field(Field.QUADRATIC, Fraction(str(_need(obj, "d", pointer))))
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(pointer + "/d", str(exc)) from None
    raise ConfigError(pointer, f"unknown field descriptor {obj!r}")


def _infer_field(values: list, explicit, pointer: str) -> Field:
    """Default field: cyclotomic3 when any scalar literal mentions w."""
    if explicit is not None:
        return parse_field(explicit, pointer)
    for x in values:
        if isinstance(x, str) and "w" in x:
            return QW
        if isinstance(x, dict) and "w" in x:
            return QW
    return QQ


def _matrix_values(obj) -> list:
    if not isinstance(obj, list):
        return []
    return [x for row in obj if isinstance(row, list) for x in row]


def _scalar_matrix(obj, n: int, field: Field, pointer: str) -> list[list[Scalar]]:
    if not isinstance(obj, list) or len(obj) != n:
        raise ConfigError(pointer, f"expected an {n}x{n} matrix")
    out = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise ConfigError(f"{pointer}/{i}", f"expected a length-{n} row")
        out.append([_as_scalar(x, field, f"{pointer}/{i}/{j}") for j, x in enumerate(row)])
    return out


def parse_quadratic_map(obj, n: int, pointer: str) -> QuadraticMapF2:
    if not isinstance(obj, dict):
        raise ConfigError(pointer, "expected an object with on_basis / on_sums")
    on_basis = _need(obj, "on_basis", pointer)
    if not isinstance(on_basis, list) or len(on_basis) != n:
        raise ConfigError(pointer + "/on_basis", f"expected {n} basis values")
    pairs = {}
    for k, row in enumerate(obj.get("on_sums", [])):
        if not isinstance(row, list) or len(row) != 3:
            raise ConfigError(f"{pointer}/on_sums/{k}", "expected [i, j, value]")
        i, j, v = row
        pairs[(int(i), int(j))] = int(v)
    try:
        return QuadraticMapF2(n, [int(v) for v in on_basis], pairs)
    except Exception as exc:
        raise ConfigError(pointer, str(exc)) from None


def parse_cocycle(obj, n: int, field: Field, pointer: str) -> Cocycle:
    kind = _need(obj, "kind", pointer)
    if kind == "quantum":
        entries = _scalar_matrix(_need(obj, "q", pointer), n, field, pointer + "/q")
        return QuantumCocycle(QuantumMatrix(entries))
    if kind == "bicharacter":
        entries = _scalar_matrix(_need(obj, "m", pointer), n, field, pointer + "/m")
        return BicharacterCocycle(field, entries)
    if kind == "table":
        rows = _need(obj, "rows", pointer)
        if not isinstance(rows, list):
            raise ConfigError(pointer + "/rows", "expected a list of rows")
        table = {}
        for k, row in enumerate(rows):
            # both [sigma, tau, value] triples and table-dump objects are accepted
            if isinstance(row, dict):
                row = [row.get("sigma"), row.get("tau"), row.get("coeff")]
            if not isinstance(row, list) or len(row) != 3:
                raise ConfigError(f"{pointer}/rows/{k}",
                                  "expected [sigma, tau, value] or a table-dump object")
            s = _as_int_vector(row[0], n, f"{pointer}/rows/{k}/0")
            t = _as_int_vector(row[1], n, f"{pointer}/rows/{k}/1")
            table[(s, t)] = _as_scalar(row[2], field, f"{pointer}/rows/{k}/2")
        return TableCocycle(n, field, table)
    raise ConfigError(pointer + "/kind", f"unknown cocycle kind {kind!r}")


def parse_plan(obj, kind: str, pointer: str) -> VerifyPlan:
    obj = obj or {}
    if not isinstance(obj, dict):
        raise ConfigError(pointer, "expected an object")
    default_window = 1 if kind == "albert" else 2
    window = obj.get("window", default_window)
    if not isinstance(window, int) or window < 1:
        raise ConfigError(pointer + "/window", "window must be an integer >= 1")
    seed = obj.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError(pointer + "/seed", "seed must be an integer")
    checks = obj.get("checks")
    if checks == "all":
        checks = None
    if checks is not None and (
        not isinstance(checks, list) or not all(isinstance(c, str) for c in checks)
    ):
        raise ConfigError(pointer + "/checks", 'expected "all" or a list of check names')
    samples = obj.get("samples", {})
    if not isinstance(samples, dict):
        raise ConfigError(pointer + "/samples", "expected an object of name -> count")
    return VerifyPlan(window=window, seed=seed, checks=checks, samples=samples)


# -- instance construction -----------------------------------------------------


def load_config(path: str) -> dict:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("", f"not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise ConfigError("", "top level must be an object")
    return obj


def build_instance(cfg: dict) -> Instance:
    kind = _need(cfg, "kind", "")
    if kind not in KINDS:
        raise ConfigError("/kind", f"unknown kind {kind!r}; expected one of {KINDS}")
    n = _as_int(_need(cfg, "n", ""), "/n")
    if n < 1:
        raise ConfigError("/n", "rank must be >= 1")
    plan = parse_plan(cfg.get("verify"), kind, "/verify")

    if kind == "assoc-only":
        cobj = _need(cfg, "cocycle", "")
        if not isinstance(cobj, dict):
            raise ConfigError("/cocycle", "expected a cocycle object")
        values = _matrix_values(cobj.get("q")) + _matrix_values(cobj.get("m"))
        for row in cobj.get("rows", []) if isinstance(cobj.get("rows"), list) else []:
            if isinstance(row, list) and len(row) == 3:
                values.append(row[2])
            elif isinstance(row, dict):
                values.append(row.get("coeff"))
        field = _infer_field(values, cfg.get("field"), "/field")
        cocycle = parse_cocycle(cobj, n, field, "/cocycle")
        return Instance(kind, field, n, plan, cfg, cocycle=cocycle)

    if kind in ("quantum-plus", "involution"):
        qm = _need(cfg, "q", "")
        field = _infer_field(_matrix_values(qm), cfg.get("field"), "/field")
        cocycle = QuantumCocycle(QuantumMatrix(_scalar_matrix(qm, n, field, "/q")))
        if kind == "quantum-plus":
            view = build_plus_type(cocycle)
        else:
            qmap = parse_quadratic_map(_need(cfg, "qmap", ""), n, "/qmap")
            view = build_involution_type(cocycle, qmap)
        return Instance(kind, field, n, plan, cfg, cocycle=cocycle, view=view)

    if kind == "extension":
        m = _need(cfg, "m", "")
        field = _infer_field(_matrix_values(m), cfg.get("field"), "/field")
        if not field.is_extension:
            raise ConfigError("/field", "extension type needs a quadratic extension field")
        cocycle = BicharacterCocycle(field, _scalar_matrix(m, n, field, "/m"))
        view = build_extension_type(cocycle)
        return Instance(kind, field, n, plan, cfg, cocycle=cocycle, view=view)

    if kind == "clifford":
        field = parse_field(cfg.get("field"), "/field")
        gamma = Subgroup(n, _as_int_matrix(_need(cfg, "gamma", ""), n, "/gamma"))
        reps = [
            _as_int_vector(r, n, f"/reps/{i}")
            for i, r in enumerate(_need(cfg, "reps", ""))
        ]
        a_obj = _need(cfg, "a", "")
        if not isinstance(a_obj, dict):
            raise ConfigError("/a", "expected an object keyed by rep index")
        a = {}
        for key, val in a_obj.items():
            try:
                idx = int(key)
            except ValueError:
                raise ConfigError(f"/a/{key}", "keys are 1-based indices into reps") from None
            if not (1 <= idx < len(reps)):
                raise ConfigError(f"/a/{key}", f"rep index out of range 1..{len(reps) - 1}")
            a[reps[idx]] = _as_scalar(val, field, f"/a/{key}")
        triple = CliffordTriple(field, gamma, reps, a)
        return Instance(kind, field, n, plan, cfg, view=CliffordView(triple), triple=triple)

    # albert
    if not cfg.get("omega", True):
        raise ConfigError("/omega", "the Albert construction needs omega in the field")
    field = QW
    gamma = Subgroup(n, _as_int_matrix(_need(cfg, "gamma", ""), n, "/gamma"))
    delta = Subgroup(n, _as_int_matrix(_need(cfg, "delta", ""), n, "/delta"))
    sigma = _need(cfg, "sigma", "")
    if not isinstance(sigma, list) or len(sigma) != 3:
        raise ConfigError("/sigma", "expected three basis vectors")
    s1, s2, s3 = (_as_int_vector(sigma[i], n, f"/sigma/{i}") for i in range(3))
    triple = AlbertTriple(n, gamma, delta, s1, s2, s3)
    torus = build_deg3_torus(triple, field)
    view = tits_first(torus)
    return Instance(kind, field, n, plan, cfg,
                    cocycle=torus.cocycle, view=view, torus=torus, triple=triple)


def load_instance(path: str) -> Instance:
    return build_instance(load_config(path))
