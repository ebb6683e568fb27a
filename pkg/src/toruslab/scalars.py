"""Exact scalar arithmetic in the tower QQ, QQ(w) with w^2+w+1=0, and QQ(sqrt(d)).

Every scalar is a pair (a, b) of rationals meaning a + b*gen over a declared
field.  No floating point anywhere; equality is exact.  Scalars from different
fields never mix implicitly -- use :meth:`Scalar.embed_into`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Union

RationalLike = Union[int, Fraction]


class FieldMismatchError(TypeError):
    """Raised when two scalars from different field descriptors are combined."""


class UnsupportedScalarError(ValueError):
    """Raised when a scalar falls outside the form an operation supports."""


class Field:
    """A field descriptor: rational, cyclotomic3 (gen w, w^2 = -1-w) or quadratic(d)."""

    RATIONAL = "rational"
    CYCLOTOMIC3 = "cyclotomic3"
    QUADRATIC = "quadratic"

    __slots__ = ("kind", "d")

    def __init__(self, kind: str, d: Optional[RationalLike] = None):
        if kind not in (Field.RATIONAL, Field.CYCLOTOMIC3, Field.QUADRATIC):
            raise ValueError(f"unknown field kind {kind!r}")
        if kind == Field.QUADRATIC:
            if d is None:
                raise ValueError("quadratic field needs d")
            d = Fraction(d)
            if d == 0 or _is_rational_square(d):
                raise ValueError(f"d={d} is a square in QQ; not a quadratic extension")
        elif d is not None:
            raise ValueError("d only makes sense for quadratic fields")
        self.kind = kind
        self.d = d

    def __eq__(self, other):
        return isinstance(other, Field) and self.kind == other.kind and self.d == other.d

    def __hash__(self):
        return hash((self.kind, self.d))

    def __repr__(self):
        if self.kind == Field.QUADRATIC:
            return f"Field(quadratic, d={self.d})"
        return f"Field({self.kind})"

    @property
    def is_extension(self) -> bool:
        return self.kind != Field.RATIONAL

    def gen_square(self) -> tuple[Fraction, Fraction]:
        """(a, b) with gen^2 = a + b*gen."""
        if self.kind == Field.CYCLOTOMIC3:
            return (Fraction(-1), Fraction(-1))
        if self.kind == Field.QUADRATIC:
            return (self.d, Fraction(0))
        raise UnsupportedScalarError("rational field has no generator")

    def zero(self) -> "Scalar":
        return Scalar(self, 0, 0)

    def one(self) -> "Scalar":
        return Scalar(self, 1, 0)

    def scalar(self, a: RationalLike, b: RationalLike = 0) -> "Scalar":
        return Scalar(self, a, b)

    def gen(self) -> "Scalar":
        if not self.is_extension:
            raise UnsupportedScalarError("rational field has no generator")
        return Scalar(self, 0, 1)

    def omega(self) -> "Scalar":
        if self.kind != Field.CYCLOTOMIC3:
            raise UnsupportedScalarError(f"{self!r} does not contain a primitive cube root of 1")
        return Scalar(self, 0, 1)

    def trace_zero_gen(self) -> "Scalar":
        """An element s with conjugate(s) = -s (spans the trace-zero line)."""
        if self.kind == Field.CYCLOTOMIC3:
            # (1+2w)^2 = -3
            return Scalar(self, 1, 2)
        if self.kind == Field.QUADRATIC:
            return Scalar(self, 0, 1)
        raise UnsupportedScalarError("rational field has no trace-zero line")


QQ = Field(Field.RATIONAL)
QW = Field(Field.CYCLOTOMIC3)


def _is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    return _isqrt_exact(q.numerator) is not None and _isqrt_exact(q.denominator) is not None


def _isqrt_exact(n: int) -> Optional[int]:
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


class Scalar:
    """a + b*gen over a fixed Field.  Immutable, hashable, exact."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: Field, a: RationalLike, b: RationalLike = 0):
        self.field = field
        self.a = Fraction(a)
        self.b = Fraction(b)
        if self.b and not field.is_extension:
            raise UnsupportedScalarError("rational field has no generator component")

    # -- ring structure ------------------------------------------------

    def _check(self, other: "Scalar") -> None:
        if self.field != other.field:
            raise FieldMismatchError(f"cannot mix {self.field!r} and {other.field!r}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return Scalar(self.field, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Scalar":
        return Scalar(self.field, -self.a, -self.b)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        if not b and not d:
            return Scalar(self.field, a * c, 0)
        # (a + b g)(c + d g) = ac + (ad + bc) g + bd g^2,  g^2 = s + t g
        s, t = self.field.gen_square()
        bd = b * d
        return Scalar(self.field, a * c + bd * s, a * d + b * c + bd * t)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("scalar inverse of 0")
        if not self.b:
            return Scalar(self.field, 1 / self.a, 0)
        conj = self.conjugate()
        norm = self * conj
        assert not norm.b
        return Scalar(self.field, conj.a / norm.a, conj.b / norm.a)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        return self * other.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, q: RationalLike) -> "Scalar":
        q = Fraction(q)
        return Scalar(self.field, self.a * q, self.b * q)

    # -- structure -----------------------------------------------------

    def conjugate(self) -> "Scalar":
        """The nontrivial Galois automorphism of the extension (identity on QQ)."""
        if not self.field.is_extension or not self.b:
            return self
        if self.field.kind == Field.CYCLOTOMIC3:
            # conj(w) = w^2 = -1 - w
            return Scalar(self.field, self.a - self.b, -self.b)
        return Scalar(self.field, self.a, -self.b)

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def is_one(self) -> bool:
        return self.a == 1 and not self.b

    def is_rational(self) -> bool:
        return not self.b

    def rational_value(self) -> Fraction:
        if self.b:
            raise UnsupportedScalarError(f"{self} is not rational")
        return self.a

    def embed_into(self, field: Field) -> "Scalar":
        """Explicit embedding QQ -> E.  Identity when fields already match."""
        if field == self.field:
            return self
        if self.field.kind != Field.RATIONAL:
            raise FieldMismatchError(f"no embedding {self.field!r} -> {field!r}")
        return Scalar(field, self.a, 0)

    def __eq__(self, other):
        return (
            isinstance(other, Scalar)
            and self.field == other.field
            and self.a == other.a
            and self.b == other.b
        )

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def key(self) -> tuple:
        """Canonical hashable key (used to intern values in hot sweeps)."""
        return (self.a.numerator, self.a.denominator, self.b.numerator, self.b.denominator)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


def is_root_of_unity(x: Scalar) -> Optional[int]:
    """Smallest k <= 6 with x^k = 1, or None.

    Orders of roots of unity in QQ, QQ(w) and QQ(sqrt d) are bounded by 6
    (QQ(w) = QQ(sqrt -3) contains the 6th roots; real quadratic fields only +-1).
    """
    if x.is_zero():
        return None
    acc = x
    for k in range(1, 7):
        if acc.is_one():
            return k
        acc = acc * x
    return None


def factor_exponents(x: Scalar) -> tuple[int, int, dict[int, int]]:
    """Decompose x = (-1)^sign * w^a * r with r a positive rational.

    Returns (sign, a mod 3, {prime: exponent}) for r.  Raises
    UnsupportedScalarError when x is not of that form (e.g. 1 + w, or an
    irrational quadratic value).
    """
    if x.is_zero():
        raise UnsupportedScalarError("0 has no exponent decomposition")
    if x.is_rational():
        r = x.a
        a = 0
    elif x.field.kind == Field.CYCLOTOMIC3:
        if not x.a:
            r, a = x.b, 1
        elif x.a == x.b:
            # a(1 + w) = -a w^2
            r, a = -x.a, 2
        else:
            raise UnsupportedScalarError(f"{format_scalar(x)} is not of the form +-w^a * rational")
    else:
        raise UnsupportedScalarError(f"{format_scalar(x)} has an irrational non-unit part")
    sign = 1 if r < 0 else 0
    r = abs(r)
    exps: dict[int, int] = {}
    for p, e in _factor_positive_int(r.numerator).items():
        exps[p] = exps.get(p, 0) + e
    for p, e in _factor_positive_int(r.denominator).items():
        exps[p] = exps.get(p, 0) - e
    exps = {p: e for p, e in exps.items() if e}
    return sign, a % 3, exps


def recompose_exponents(field: Field, sign: int, a: int, exps: dict[int, int]) -> Scalar:
    """Inverse of factor_exponents (for round-trip tests)."""
    r = Fraction(1)
    for p, e in exps.items():
        r *= Fraction(p) ** e
    if sign:
        r = -r
    out = Scalar(field, r)
    if a % 3:
        out = out * field.omega() ** (a % 3)
    return out


def _factor_positive_int(n: int) -> dict[int, int]:
    assert n > 0
    out: dict[int, int] = {}
    for p in (2, 3, 5, 7):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 11
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- textual scalar format ----------------------------------------------
#
# Grammar (multiplicative literals, as used in quantum matrix configs):
#   "5", "-1/3", "w", "w^-1", "2*w^2", "-w"
# plus the JSON object form handled in config.py:
#   {"q": "1/2"} | {"q": "...", "w": "..."} | {"q": "...", "s": "...", "d": "..."}


def parse_scalar(text: str, field: Field) -> Scalar:
    """Parse a scalar literal: a sum of multiplicative terms like
    "-2/3*w^2", "w^-1", "1+2*w", "1-s"."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar literal")
    terms: list[str] = []
    cur = ""
    for idx, ch in enumerate(s):
        if ch in "+-" and idx > 0 and s[idx - 1] not in "^*+-":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    out = field.zero()
    for term in terms:
        out = out + _parse_term(term, text, field)
    return out


def _parse_term(s: str, original: str, field: Field) -> Scalar:
    neg = False
    while s and s[0] in "+-":
        if s[0] == "-":
            neg = not neg
        s = s[1:]
    if not s:
        raise ValueError(f"bad scalar literal {original!r}")
    rat = Fraction(1)
    wexp = 0
    sexp = 0
    for part in s.split("*"):
        if not part:
            raise ValueError(f"bad scalar literal {original!r}")
        if part[0] in "ws":
            exp = 1
            if len(part) > 1:
                if part[1] != "^":
                    raise ValueError(f"bad scalar literal {original!r}")
                exp = int(part[2:])
            if part[0] == "w":
                wexp += exp
            else:
                sexp += exp
        else:
            rat *= Fraction(part)
    if neg:
        rat = -rat
    if wexp and field.kind != Field.CYCLOTOMIC3:
        raise FieldMismatchError(f"literal {original!r} needs a cyclotomic3 field")
    if sexp and field.kind != Field.QUADRATIC:
        raise FieldMismatchError(f"literal {original!r} needs a quadratic field")
    out = Scalar(field, rat)
    if wexp:
        out = out * field.omega() ** wexp
    if sexp:
        out = out * field.gen() ** sexp
    return out


def _mono_str(coef: Fraction, gen: str) -> str:
    if coef == 1:
        return gen
    if coef == -1:
        return "-" + gen
    return f"{_frac_str(coef)}*{gen}"


def format_scalar(x: Scalar) -> str:
    """Stable textual form, bit-exact round trip through parse_scalar.

    w-monomials are written multiplicatively ("w^2", "-3*w"), everything else
    as a sum of terms ("1+2*w", "1-s")."""
    if x.is_rational():
        return _frac_str(x.a)
    if x.field.kind == Field.CYCLOTOMIC3:
        if not x.a:
            return _mono_str(x.b, "w")
        if x.a == x.b:
            # a(1 + w) = -a w^2
            return _mono_str(-x.a, "w^2")
    gen = "w" if x.field.kind == Field.CYCLOTOMIC3 else "s"
    bpart = _mono_str(x.b, gen)
    sep = "" if bpart.startswith("-") else "+"
    if not x.a:
        return bpart
    return f"{_frac_str(x.a)}{sep}{bpart}"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def scalar_to_json(x: Scalar) -> dict:
    """JSON object form of a scalar (see module External Interfaces)."""
    out = {"q": _frac_str(x.a)}
    if x.field.kind == Field.CYCLOTOMIC3:
        out["w"] = _frac_str(x.b)
    elif x.field.kind == Field.QUADRATIC:
        out["s"] = _frac_str(x.b)
        out["d"] = _frac_str(x.field.d)
    return out


def scalar_from_json(obj, field: Field) -> Scalar:
    """Parse the JSON scalar form; strings are multiplicative literals."""
    if isinstance(obj, str):
        return parse_scalar(obj, field)
    if isinstance(obj, int):
        return Scalar(field, obj)
    if isinstance(obj, dict):
        a = Fraction(obj.get("q", "0"))
        if "s" in obj or "d" in obj:
            if field.kind != Field.QUADRATIC:
                raise FieldMismatchError("sqrt literal in a non-quadratic field")
            return Scalar(field, a, Fraction(obj["s"]))
        if "w" in obj:
            if field.kind != Field.CYCLOTOMIC3:
                raise FieldMismatchError("w literal in a non-cyclotomic field")
            return Scalar(field, a, Fraction(obj["w"]))
        return Scalar(field, a)
    raise ValueError(f"cannot read scalar from {obj!r}")
