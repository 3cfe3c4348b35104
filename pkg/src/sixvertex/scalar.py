"""Exact Laurent-polynomial scalars and their floating-point counterpart.

Every spectral quantity in this package is expressed through exponentiated
variables: ``u_i`` stands for ``e^{lambda_i}``, ``w_k`` for ``e^{mu_k}`` and
``q`` for ``e^{gamma}``.  In these variables all statistical weights, operator
entries and partition functions are Laurent polynomials with rational
coefficients, so exact arithmetic is closed; no branch cuts or fractional
powers ever appear.

Two interchangeable scalar backends are used throughout:

* :class:`LaurentPoly` -- exact, immutable, arbitrary-precision rational
  coefficients.
* plain ``complex`` -- double precision, paired with a caller-supplied scale
  for every zero test (see :class:`TolerancePolicy`).

Ratios of polynomials (expansion coefficients, solved coefficient tables)
are represented by :class:`RationalFunction`, whose equality is defined by
cross-multiplication.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import (
    DegreeExceeded,
    UnassignedVariable,
    ZeroBaseWithNegativeExponent,
)

_KIND_RANK = {"u": 0, "w": 1, "q": 2}
_RANK_KIND = {v: k for k, v in _KIND_RANK.items()}

# Internal variable key: (kind rank, index).  Exponent vectors are stored as
# tuples of ((rank, index), exponent) pairs sorted by key, zero exponents
# omitted; the constant monomial is the empty tuple.
VarKey = tuple[int, int]
ExpVec = tuple[tuple[VarKey, int], ...]


@dataclass(frozen=True, order=True)
class VarId:
    """A named variable: kind 'u', 'w' or 'q' plus an index.

    All (q, i) denote the same anisotropy variable; the index is normalized
    to 0.  (u, i) == (u, j) iff i == j, likewise for w.
    """

    kind: str
    index: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown variable kind {self.kind!r}")
        if self.index < 0:
            raise ValueError("variable index must be non-negative")
        if self.kind == "q":
            object.__setattr__(self, "index", 0)

    @property
    def key(self) -> VarKey:
        return (_KIND_RANK[self.kind], self.index)

    @property
    def name(self) -> str:
        return "q" if self.kind == "q" else f"{self.kind}{self.index}"

    @staticmethod
    def from_key(key: VarKey) -> "VarId":
        return VarId(_RANK_KIND[key[0]], key[1])


def u_var(i: int) -> VarId:
    return VarId("u", i)


def w_var(i: int) -> VarId:
    return VarId("w", i)


def q_var() -> VarId:
    return VarId("q")


def _merge_exps(e1: ExpVec, e2: ExpVec) -> ExpVec:
    """Merge two sorted exponent vectors, adding exponents of shared keys."""
    if not e1:
        return e2
    if not e2:
        return e1
    out = []
    i = j = 0
    n1, n2 = len(e1), len(e2)
    while i < n1 and j < n2:
        k1, v1 = e1[i]
        k2, v2 = e2[j]
        if k1 < k2:
            out.append(e1[i])
            i += 1
        elif k2 < k1:
            out.append(e2[j])
            j += 1
        else:
            s = v1 + v2
            if s:
                out.append((k1, s))
            i += 1
            j += 1
    out.extend(e1[i:])
    out.extend(e2[j:])
    return tuple(out)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


class LaurentPoly:
    """Immutable multivariate Laurent polynomial over the rationals.

    Terms are stored canonically: no zero coefficients, no zero exponents.
    Two polynomials are equal iff their term maps are equal.  Instances are
    hashable and safe to share across threads.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[ExpVec, Fraction] | None = None):
        clean: dict[ExpVec, Fraction] = {}
        if terms:
            for exps, coeff in terms.items():
                c = _as_fraction(coeff)
                if c:
                    clean[exps] = c
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({(): Fraction(1)})

    @classmethod
    def rational(cls, value) -> "LaurentPoly":
        return cls({(): _as_fraction(value)})

    @classmethod
    def var(cls, v: VarId, exp: int = 1) -> "LaurentPoly":
        if exp == 0:
            return cls.one()
        return cls({((v.key, exp),): Fraction(1)})

    @classmethod
    def monomial(cls, coeff, exps: Mapping[VarId, int]) -> "LaurentPoly":
        vec = tuple(sorted((v.key, e) for v, e in exps.items() if e))
        return cls({vec: _as_fraction(coeff)})

    # -- inspection ----------------------------------------------------

    def items(self) -> Iterable[tuple[ExpVec, Fraction]]:
        return self._terms.items()

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def num_terms(self) -> int:
        return len(self._terms)

    def variables(self) -> set[VarId]:
        return {VarId.from_key(k) for exps in self._terms for k, _ in exps}

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (raises if non-constant)."""
        if self.is_zero():
            return Fraction(0)
        if list(self._terms) != [()]:
            raise ValueError("polynomial is not constant")
        return self._terms[()]

    def degree_in(self, v: VarId) -> int:
        """Largest exponent of ``v`` (0 if absent)."""
        key = v.key
        return max((dict(exps).get(key, 0) for exps in self._terms), default=0)

    def low_degree_in(self, v: VarId) -> int:
        """Smallest exponent of ``v`` (0 if absent)."""
        key = v.key
        return min((dict(exps).get(key, 0) for exps in self._terms), default=0)

    def exponents_of(self, v: VarId) -> set[int]:
        key = v.key
        out = set()
        for exps in self._terms:
            out.add(dict(exps).get(key, 0))
        return out

    def content(self) -> Fraction:
        """gcd of coefficient numerators over lcm of denominators, signed by
        the canonically-first term.  content(0) == 0."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        sign = 1 if self._terms[self.sorted_exps()[0]] > 0 else -1
        return Fraction(sign * num, den)

    # -- arithmetic ----------------------------------------------------

    def _coerced(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.rational(other)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for exps, c in o._terms.items():
            s = out.get(exps, Fraction(0)) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = out
        r._hash = None
        return r

    __radd__ = __add__

    def __neg__(self):
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = {e: -c for e, c in self._terms.items()}
        r._hash = None
        return r

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        if not self._terms or not o._terms:
            return LaurentPoly.zero()
        # multiply the smaller term map into the larger one
        a, b = self._terms, o._terms
        if len(a) > len(b):
            a, b = b, a
        out: dict[ExpVec, Fraction] = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = _merge_exps(e1, e2)
                s = out.get(e)
                s = c1 * c2 if s is None else s + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = out
        r._hash = None
        return r

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _as_fraction(other)
            if f == 0:
                raise ZeroDivisionError("division of polynomial by zero")
            return self._scaled(Fraction(1) / f)
        if isinstance(other, LaurentPoly) and other.is_monomial():
            return self * other.monomial_inverse()
        return NotImplemented

    def _scaled(self, f: Fraction):
        r = LaurentPoly.__new__(LaurentPoly)
        r._terms = {e: c * f for e, c in self._terms.items()}
        r._hash = None
        return r

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.is_monomial():
                return self.monomial_inverse() ** (-n)
            raise ValueError("negative power of a non-monomial polynomial")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def monomial_inverse(self) -> "LaurentPoly":
        """Inverse of a single-term polynomial."""
        if not self.is_monomial():
            raise ValueError("only monomials are invertible in the Laurent ring")
        (exps, coeff), = self._terms.items()
        inv = tuple((k, -e) for k, e in exps)
        return LaurentPoly({inv: Fraction(1) / coeff})

    def substitute(self, mapping: Mapping[VarId, "LaurentPoly | Fraction | int"]) -> "LaurentPoly":
        """Replace variables by monomials or rational constants.

        A variable occurring with a negative exponent needs an invertible
        (monomial) replacement.  Used e.g. for homogeneous limits (u_i -> u)
        and for pinning inhomogeneities to rational values (w_k -> 1).
        """
        keymap = {}
        for v, t in mapping.items():
            if isinstance(t, (int, Fraction)):
                t = LaurentPoly.rational(t)
            if not t.is_monomial():
                raise ValueError("substitution targets must be monomials")
            keymap[v.key] = t
        out = LaurentPoly.zero()
        for exps, coeff in self._terms.items():
            term = LaurentPoly.rational(coeff)
            plain = []
            for k, e in exps:
                t = keymap.get(k)
                if t is None:
                    plain.append((k, e))
                else:
                    term = term * t ** e
            term = term * LaurentPoly({tuple(plain): Fraction(1)})
            out = out + term
        return out

    # -- equality / hashing ---------------------------------------------

    def __eq__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- canonical ordering and serialization ---------------------------

    def sorted_exps(self) -> list[ExpVec]:
        """Exponent vectors in canonical graded-lex order.

        Grading is by total degree; ties break lexicographically with
        variables ordered u < w < q, then by index.
        """
        return sorted(self._terms, key=lambda e: (sum(x for _, x in e), e))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps in self.sorted_exps():
            c = self._terms[exps]
            factors = [f"({c.numerator}/{c.denominator})"]
            for key, e in exps:
                factors.append(f"{VarId.from_key(key).name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def to_json_terms(self) -> list[dict]:
        out = []
        for exps in self.sorted_exps():
            c = self._terms[exps]
            out.append({
                "coeff": f"{c.numerator}/{c.denominator}",
                "exps": {VarId.from_key(k).name: e for k, e in exps},
            })
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_json_terms())

    @classmethod
    def from_json_terms(cls, terms: list[dict]) -> "LaurentPoly":
        acc: dict[ExpVec, Fraction] = {}
        for t in terms:
            coeff = Fraction(t["coeff"])
            vec = tuple(sorted((_parse_var(nm).key, int(e)) for nm, e in t["exps"].items() if int(e)))
            acc[vec] = acc.get(vec, Fraction(0)) + coeff
        return cls(acc)

    @classmethod
    def from_text(cls, text: str) -> "LaurentPoly":
        return parse_poly(text)

    def __repr__(self):
        return f"LaurentPoly({self.to_text()})"

    __str__ = __repr__


# A scalar is either exact or a double-precision complex number.
Scalar = Union[LaurentPoly, complex]


def is_exact(x) -> bool:
    return isinstance(x, (LaurentPoly, RationalFunction, int, Fraction))


def invert(x):
    """Multiplicative inverse of a monomial or a nonzero number."""
    if isinstance(x, LaurentPoly):
        return x.monomial_inverse()
    if isinstance(x, RationalFunction):
        return RationalFunction(x.den, x.num)
    return 1 / x


_VAR_RE = re.compile(r"^(u|w)(\d+)$|^q$")


def _parse_var(name: str) -> VarId:
    m = _VAR_RE.match(name)
    if not m:
        raise ValueError(f"bad variable name {name!r}")
    if name == "q":
        return q_var()
    return VarId(m.group(1), int(m.group(2)))


def _split_terms(text: str) -> list[str]:
    """Split on top-level '+' (terms carry their sign inside the coefficient)."""
    depth = 0
    parts = []
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_poly(text: str) -> LaurentPoly:
    """Parse the canonical text form, e.g. ``(-1/2)*q^-1 + (1/2)*q``.

    Also accepts bare coefficients (``3``, ``3/4``) and factors without an
    explicit coefficient (``u1^2*w1^-1``).
    """
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero()
    acc: dict[ExpVec, Fraction] = {}
    for term in _split_terms(text):
        coeff = Fraction(1)
        exps: dict[VarKey, int] = {}
        for factor in term.split("*"):
            factor = factor.strip()
            if not factor:
                continue
            if factor.startswith("(") and factor.endswith(")"):
                coeff *= Fraction(factor[1:-1].strip())
                continue
            if re.fullmatch(r"[+-]?\d+(/\d+)?", factor):
                coeff *= Fraction(factor)
                continue
            if "^" in factor:
                nm, _, ex = factor.partition("^")
                v = _parse_var(nm.strip())
                e = int(ex)
            else:
                v = _parse_var(factor)
                e = 1
            if e:
                exps[v.key] = exps.get(v.key, 0) + e
        vec = tuple(sorted((k, e) for k, e in exps.items() if e))
        acc[vec] = acc.get(vec, Fraction(0)) + coeff
    return LaurentPoly(acc)


# -- evaluation, differentiation, coefficient extraction ----------------


def poly_eval(p: LaurentPoly, assignment: Mapping[VarId, complex]) -> complex:
    """Evaluate at complex values.  Every occurring variable must be assigned;
    a zero value with a negative exponent is rejected."""
    table = {v.key: complex(val) for v, val in assignment.items()}
    total = 0j
    for exps, coeff in p.items():
        term = complex(coeff)
        for key, e in exps:
            if key not in table:
                raise UnassignedVariable(f"no value for {VarId.from_key(key).name}")
            base = table[key]
            if base == 0 and e < 0:
                raise ZeroBaseWithNegativeExponent(VarId.from_key(key).name)
            term *= base ** e
        total += term
    return total


def poly_derivative(p: LaurentPoly, v: VarId) -> LaurentPoly:
    """Term-wise d/dv with the Laurent rule d(v^n)/dv = n v^(n-1)."""
    key = v.key
    acc: dict[ExpVec, Fraction] = {}
    for exps, coeff in p.items():
        d = dict(exps)
        e = d.get(key, 0)
        if e == 0:
            continue
        if e == 1:
            del d[key]
        else:
            d[key] = e - 1
        vec = tuple(sorted(d.items()))
        acc[vec] = acc.get(vec, Fraction(0)) + coeff * e
    return LaurentPoly(acc)


def leading_coeff(p: LaurentPoly, vars: list[VarId], degree: int) -> LaurentPoly:
    """Coefficient of ``prod v^degree`` over the listed variables.

    Raises DegreeExceeded if any listed variable occurs beyond ``degree``;
    returns the zero polynomial when the top monomial is absent.
    """
    keys = [v.key for v in vars]
    acc: dict[ExpVec, Fraction] = {}
    for exps, coeff in p.items():
        d = dict(exps)
        es = [d.get(k, 0) for k in keys]
        if any(e > degree for e in es):
            offender = vars[[e > degree for e in es].index(True)]
            raise DegreeExceeded(f"{offender.name} exceeds degree {degree}")
        if all(e == degree for e in es):
            for k in keys:
                d.pop(k, None)
            vec = tuple(sorted(d.items()))
            acc[vec] = acc.get(vec, Fraction(0)) + coeff
    return LaurentPoly(acc)


# -- rational functions ----------------------------------------------


class RationalFunction:
    """A ratio of Laurent polynomials with cross-multiplied equality.

    The canonical form folds monomial denominators into the numerator and
    divides out the denominator's rational content, so that equal fractions
    compare equal whenever num1*den2 == num2*den1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, (int, Fraction)):
            num = LaurentPoly.rational(num)
        if den is None:
            den = LaurentPoly.one()
        elif isinstance(den, (int, Fraction)):
            den = LaurentPoly.rational(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = LaurentPoly.one()
        elif den.is_monomial():
            num = num * den.monomial_inverse()
            den = LaurentPoly.one()
        else:
            # pull the denominator's monomial unit (content and lowest
            # exponents) into the numerator
            mins: dict = {}
            first = True
            for exps, _ in den.items():
                seen = dict(exps)
                if first:
                    mins = dict(seen)
                    first = False
                    continue
                for k in set(mins) | set(seen):
                    mins[k] = min(mins.get(k, 0), seen.get(k, 0))
            unit_exps = tuple((k, e) for k, e in sorted(mins.items()) if e)
            unit = LaurentPoly({unit_exps: den.content()})
            inv = unit.monomial_inverse()
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    @classmethod
    def from_scalar(cls, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return cls(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerced(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return RationalFunction(other)
        return None

    def __add__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._coerced(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        raise TypeError("RationalFunction is unhashable; compare with ==")

    def eval(self, assignment: Mapping[VarId, complex]) -> complex:
        return poly_eval(self.num, assignment) / poly_eval(self.den, assignment)

    def reduced(self) -> "RationalFunction":
        """Divide out the univariate gcd when num and den share one variable."""
        vs = self.num.variables() | self.den.variables()
        if self.den == LaurentPoly.one() or len(vs) > 1:
            return self
        if not vs:
            return self
        v = vs.pop()
        g = _gcd_univariate(self.num, self.den, v)
        if g is None or g.num_terms() == 1:
            return self
        return RationalFunction(_exact_div_univariate(self.num, g, v),
                                _exact_div_univariate(self.den, g, v))

    def to_text(self) -> str:
        if self.den == LaurentPoly.one():
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self):
        return f"RationalFunction({self.to_text()})"


def _as_coeff_list(p: LaurentPoly, v: VarId) -> tuple[int, list[Fraction]]:
    """Dense coefficient list of a univariate polynomial: (offset, coeffs)."""
    key = v.key
    lo = p.low_degree_in(v)
    hi = p.degree_in(v)
    coeffs = [Fraction(0)] * (hi - lo + 1)
    for exps, c in p.items():
        d = dict(exps)
        rest = {k: e for k, e in d.items() if k != key}
        if rest:
            raise ValueError("polynomial is not univariate")
        coeffs[d.get(key, 0) - lo] += c
    return lo, coeffs


def _from_coeff_list(offset: int, coeffs: list[Fraction], v: VarId) -> LaurentPoly:
    acc = {}
    for i, c in enumerate(coeffs):
        if c:
            e = offset + i
            vec = ((v.key, e),) if e else ()
            acc[vec] = c
    return LaurentPoly(acc)


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        while a and not a[-1]:
            a.pop()
        if len(a) < len(b):
            break
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, bc in enumerate(b):
            a[shift + i] -= f * bc
        a.pop()
    while a and not a[-1]:
        a.pop()
    return q, a


def _gcd_univariate(p1: LaurentPoly, p2: LaurentPoly, v: VarId) -> LaurentPoly | None:
    try:
        _, c1 = _as_coeff_list(p1, v)
        _, c2 = _as_coeff_list(p2, v)
    except ValueError:
        return None
    a, b = c1, c2
    while any(b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not any(a):
        return None
    # make monic
    lead = a[-1]
    a = [c / lead for c in a]
    return _from_coeff_list(0, a, v)


def _exact_div_univariate(p: LaurentPoly, g: LaurentPoly, v: VarId) -> LaurentPoly:
    lo, c = _as_coeff_list(p, v)
    glo, gc = _as_coeff_list(g, v)
    q, r = _poly_divmod(c, gc)
    if any(r):
        raise ValueError("division is not exact")
    return _from_coeff_list(lo - glo, q, v)


# -- float-backend tolerance policy -----------------------------------


@dataclass(frozen=True)
class TolerancePolicy:
    """Relative zero test for the float backend.

    A residual is accepted as zero only against a caller-supplied scale;
    absolute comparisons are never used because the weights grow
    exponentially in |lambda|.
    """

    rel_eps: float = 1e-9
    min_pole_distance: float = 1e-2

    def is_zero(self, value, scale: float) -> bool:
        if scale == 0.0:
            return abs(value) == 0.0
        return abs(value) <= self.rel_eps * scale


DEFAULT_POLICY = TolerancePolicy()


@dataclass
class CheckOutcome:
    """Result of one identity check, exact or toleranced."""

    name: str
    passed: bool
    exact: bool
    residual: float | None = None
    scale: float | None = None
    tolerance: float | None = None
    details: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        out = {
            "name": self.name,
            "passed": bool(self.passed),
            "exact": bool(self.exact),
        }
        if not self.exact:
            out.update(residual=self.residual, scale=self.scale, tolerance=self.tolerance)
        if self.details:
            out["details"] = self.details
        return out
