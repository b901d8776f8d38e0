"""Exact arithmetic kernel.

Arbitrary-precision rationals (``fractions.Fraction``), sparse multivariate
Laurent polynomials, rational functions, and subtraction-free semifield
elements, together with evaluation homomorphisms and a JSON expression format.

Reduction policy: rational functions and semifield elements are reduced by
integer content and by a common monomial factor only.  Full polynomial gcd is
deliberately not implemented; equality is decided by cross-multiplication,
which is exact for any choice of representatives.  Semifield elements keep an
internal factored form so that long mutation sequences cancel repeated factors
syntactically instead of snowballing.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    DivisionByZeroPoly,
    EvalDivisionByZero,
    InverseOfZero,
)

Rational = Union[int, Fraction]

_NAT_SPLIT = re.compile(r"(\d+)")


def _natural_key(name: str):
    return tuple(int(p) if p.isdigit() else p for p in _NAT_SPLIT.split(name))


def _grlex_key(mono: tuple) -> tuple:
    return (sum(mono), mono)


class LaurentPoly:
    """Sparse multivariate Laurent polynomial over Fraction coefficients.

    Instances are immutable and canonical: unused generators are pruned,
    generators are kept in natural name order, and zero coefficients are never
    stored, so ``==`` and ``hash`` are structural.
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Rational]):
        clean = {}
        for mono, coeff in terms.items():
            c = Fraction(coeff)
            if c:
                clean[tuple(mono)] = c
        variables = tuple(variables)
        used = [i for i in range(len(variables)) if any(m[i] for m in clean)]
        if len(used) != len(variables) or list(variables) != sorted(variables, key=_natural_key):
            kept = sorted(((variables[i], i) for i in used), key=lambda p: _natural_key(p[0]))
            variables = tuple(name for name, _ in kept)
            idx = [i for _, i in kept]
            clean = {tuple(m[i] for i in idx): c for m, c in clean.items()}
        object.__setattr__(self, "vars", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(value: Rational) -> "LaurentPoly":
        return LaurentPoly((), {(): Fraction(value)})

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly((), {})

    @staticmethod
    def one() -> "LaurentPoly":
        return LaurentPoly.constant(1)

    @staticmethod
    def gen(name: str) -> "LaurentPoly":
        return LaurentPoly((name,), {(1,): Fraction(1)})

    @staticmethod
    def monomial(coeff: Rational, powers: Mapping[str, int]) -> "LaurentPoly":
        names = tuple(sorted(powers, key=_natural_key))
        return LaurentPoly(names, {tuple(powers[n] for n in names): Fraction(coeff)})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): Fraction(1)}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.vars

    def has_positive_coeffs(self) -> bool:
        return all(c > 0 for c in self.terms.values())

    def has_nonnegative_exponents(self) -> bool:
        return all(all(e >= 0 for e in m) for m in self.terms)

    # -- alignment ---------------------------------------------------------

    def _aligned(self, other: "LaurentPoly"):
        if self.vars == other.vars:
            return self.vars, self.terms, other.terms
        names = sorted(set(self.vars) | set(other.vars), key=_natural_key)
        pos = {n: i for i, n in enumerate(names)}
        n = len(names)

        def remap(poly):
            cols = [pos[v] for v in poly.vars]
            out = {}
            for m, c in poly.terms.items():
                full = [0] * n
                for col, e in zip(cols, m):
                    full[col] = e
                out[tuple(full)] = c
            return out

        return tuple(names), remap(self), remap(other)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        names, a, b = self._aligned(other)
        out = dict(a)
        for m, c in b.items():
            out[m] = out.get(m, Fraction(0)) + c
        return LaurentPoly(names, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        names, a, b = self._aligned(other)
        out = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                out[m] = out.get(m, Fraction(0)) + ca * cb
        return LaurentPoly(names, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n == 0:
            return LaurentPoly.one()
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            ((m, c),) = self.terms.items()
            inv = LaurentPoly(self.vars, {tuple(-e for e in m): 1 / c})
            return inv ** (-n)
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure ---------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-primitive; 0 for the zero poly."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, abs(c.numerator))
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def min_exponents(self) -> dict:
        mins = {}
        for i, v in enumerate(self.vars):
            mins[v] = min(m[i] for m in self.terms)
        return mins

    def mul_monomial(self, coeff: Rational, powers: Mapping[str, int]) -> "LaurentPoly":
        return self * LaurentPoly.monomial(coeff, powers)

    def leading(self):
        """(monomial, coefficient) for the graded lexicographic order."""
        mono = max(self.terms, key=_grlex_key)
        return mono, self.terms[mono]

    def evaluate(self, assignment: Mapping[str, Rational]) -> Fraction:
        total = Fraction(0)
        vals = []
        for v in self.vars:
            if v not in assignment:
                raise KeyError(f"assignment missing generator {v!r}")
            vals.append(Fraction(assignment[v]))
        for mono, coeff in self.terms.items():
            term = coeff
            for val, e in zip(vals, mono):
                if e < 0 and val == 0:
                    raise EvalDivisionByZero(f"0**{e} while evaluating")
                term *= val ** e
            total += term
        return total

    # -- dunder plumbing ----------------------------------------------------

    def __eq__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=_grlex_key, reverse=True):
            coeff = self.terms[mono]
            factors = [
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.vars, mono)
                if e
            ]
            if not factors:
                parts.append(str(coeff))
                continue
            body = "*".join(factors)
            if coeff == 1:
                parts.append(body)
            elif coeff == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{coeff}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"


def _as_poly(value):
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return LaurentPoly.constant(value)
    return NotImplemented


def gens(*names: str) -> tuple:
    """Generator polynomials for the given names."""
    return tuple(LaurentPoly.gen(n) for n in names)


def laurent_divide_exact(p: LaurentPoly, q: LaurentPoly) -> Optional[LaurentPoly]:
    """p/q when q divides p in the Laurent ring, else None.

    Monomial factors are units here, so both operands are first shifted to
    ordinary polynomials; divisibility is then decided by single-divisor
    multivariate division with remainder under the graded lex order.
    """
    if q.is_zero():
        raise DivisionByZeroPoly("division by the zero polynomial")
    if p.is_zero():
        return LaurentPoly.zero()
    names, a, b = p._aligned(q)
    n = len(names)
    shift_a = [min(m[i] for m in a) for i in range(n)]
    shift_b = [min(m[i] for m in b) for i in range(n)]
    a = {tuple(e - s for e, s in zip(m, shift_a)): c for m, c in a.items()}
    b = {tuple(e - s for e, s in zip(m, shift_b)): c for m, c in b.items()}
    lead_b = max(b, key=_grlex_key)
    cb = b[lead_b]
    quotient = {}
    rem = dict(a)
    while rem:
        lead = max(rem, key=_grlex_key)
        diff = tuple(x - y for x, y in zip(lead, lead_b))
        if any(e < 0 for e in diff):
            return None
        coeff = rem[lead] / cb
        quotient[diff] = coeff
        for mb, c in b.items():
            m = tuple(x + y for x, y in zip(diff, mb))
            nv = rem.get(m, Fraction(0)) - coeff * c
            if nv:
                rem[m] = nv
            else:
                rem.pop(m, None)
    back = {v: sa - sb for v, sa, sb in zip(names, shift_a, shift_b) if sa != sb}
    result = LaurentPoly(names, quotient)
    if back:
        result = result.mul_monomial(1, back)
    return result


class RationalFunction:
    """Quotient of Laurent polynomials, reduced by content and monomial only.

    A monomial denominator is folded into the numerator (monomials are units
    of the Laurent ring), so fully Laurent values always carry denominator 1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = None, _reduced=False):
        if den is None:
            den = LaurentPoly.one()
        if den.is_zero():
            raise DivisionByZeroPoly("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce_pair(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @staticmethod
    def gen(name: str) -> "RationalFunction":
        return RationalFunction(LaurentPoly.gen(name))

    @staticmethod
    def constant(value: Rational) -> "RationalFunction":
        return RationalFunction(LaurentPoly.constant(value))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> "RationalFunction":
        if self.is_zero():
            raise InverseOfZero("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return _as_rf(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def reduced(self) -> "RationalFunction":
        """Attempt the exact Laurent division num/den; fall back to self."""
        if self.den.is_one():
            return self
        q = laurent_divide_exact(self.num, self.den)
        if q is None:
            return self
        return RationalFunction(q)

    def evaluate(self, assignment: Mapping[str, Rational]) -> Fraction:
        d = self.den.evaluate(assignment)
        if d == 0:
            raise EvalDivisionByZero("denominator vanishes at the assignment")
        return self.num.evaluate(assignment) / d

    def __eq__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _as_rf(value):
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalFunction.constant(value)
    if isinstance(value, LaurentPoly):
        return RationalFunction(value)
    return NotImplemented


def _reduce_pair(num: LaurentPoly, den: LaurentPoly):
    """Joint content + common monomial reduction; monomial dens are folded."""
    if num.is_zero():
        return LaurentPoly.zero(), LaurentPoly.one()
    if den.is_monomial():
        ((mono, coeff),) = den.terms.items()
        powers = {v: -e for v, e in zip(den.vars, mono) if e}
        return num.mul_monomial(1 / coeff, powers), LaurentPoly.one()
    c_num, c_den = num.content(), den.content()
    g = Fraction(math.gcd(c_num.numerator * c_den.denominator,
                          c_den.numerator * c_num.denominator),
                 c_num.denominator * c_den.denominator)
    if g not in (0, 1):
        num = num * LaurentPoly.constant(1 / g)
        den = den * LaurentPoly.constant(1 / g)
    mins_n = num.min_exponents()
    mins_d = den.min_exponents()
    shared = {}
    for v in set(mins_n) & set(mins_d):
        e = min(mins_n[v], mins_d[v])
        if e:
            shared[v] = -e
    if shared:
        num = num.mul_monomial(1, shared)
        den = den.mul_monomial(1, shared)
    if den.leading()[1] < 0:
        num, den = -num, -den
    return num, den


# ---------------------------------------------------------------------------
# semifield
# ---------------------------------------------------------------------------


def _atomize(poly: LaurentPoly):
    """Split a positive-coefficient polynomial into (coeff, powers, atom).

    The atom is content-free, has per-variable minimum exponent 0, and is None
    when the polynomial is a pure monomial.
    """
    if poly.is_zero() or not poly.has_positive_coeffs():
        raise ValueError("semifield polynomials must be nonzero with positive coefficients")
    coeff = poly.content()
    powers = {v: e for v, e in poly.min_exponents().items() if e}
    if coeff != 1 or powers:
        poly = poly.mul_monomial(1 / coeff, {v: -e for v, e in powers.items()})
    if poly.is_one():
        return coeff, powers, None
    return coeff, powers, poly


def _split_positive_quotient(poly: LaurentPoly, candidates: Iterable[LaurentPoly]):
    """Peel exact positive-coefficient factors of `poly` off the candidate list.

    Quotients with any negative coefficient are rejected so that every stored
    factor stays inside the semifield.
    """
    factors = {}
    residual = poly
    for cand in sorted(set(candidates), key=lambda f: (len(f.terms), _natural_key(str(f)))):
        if cand == residual:
            factors[cand] = factors.get(cand, 0) + 1
            residual = LaurentPoly.one()
            continue
        while not residual.is_one():
            q = laurent_divide_exact(residual, cand)
            if q is None or not q.has_positive_coeffs():
                break
            factors[cand] = factors.get(cand, 0) + 1
            residual = q
    return factors, residual


class SemifieldElement:
    """Element of the universal semifield: a subtraction-free rational value.

    Internally a positive rational coefficient, a (Laurent) monomial part, and
    a multiset of positive polynomial factors with integer exponents.  The
    factored form is what lets iterated mutations cancel; the public num/den
    view expands it back to the contract shape (positive coefficients,
    nonnegative exponents).
    """

    __slots__ = ("_coeff", "_powers", "_factors", "_num", "_den")

    def __init__(self, coeff: Fraction, powers: Mapping[str, int],
                 factors: Mapping[LaurentPoly, int]):
        coeff = Fraction(coeff)
        if coeff <= 0:
            raise ValueError("semifield coefficient must be positive")
        object.__setattr__(self, "_coeff", coeff)
        object.__setattr__(self, "_powers", {v: e for v, e in powers.items() if e})
        object.__setattr__(self, "_factors", {f: e for f, e in factors.items() if e})
        object.__setattr__(self, "_num", None)
        object.__setattr__(self, "_den", None)

    def __setattr__(self, name, value):
        raise AttributeError("SemifieldElement is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def gen(name: str) -> "SemifieldElement":
        return SemifieldElement(Fraction(1), {name: 1}, {})

    @staticmethod
    def from_fraction(value: Rational) -> "SemifieldElement":
        return SemifieldElement(Fraction(value), {}, {})

    @staticmethod
    def from_num_den(num: LaurentPoly, den: LaurentPoly,
                     candidates: Iterable[LaurentPoly] = ()) -> "SemifieldElement":
        if not (num.has_nonnegative_exponents() and den.has_nonnegative_exponents()):
            raise ValueError("semifield num/den require nonnegative exponents")
        cn, pn, an = _atomize(num)
        cd, pd, ad = _atomize(den)
        factors = {}
        for atom, sign in ((an, 1), (ad, -1)):
            if atom is None:
                continue
            found, residual = _split_positive_quotient(atom, candidates)
            if not residual.is_one():
                found[residual] = found.get(residual, 0) + 1
            for f, e in found.items():
                factors[f] = factors.get(f, 0) + sign * e
        powers = dict(pn)
        for v, e in pd.items():
            powers[v] = powers.get(v, 0) - e
        return SemifieldElement(cn / cd, powers, factors)

    # -- expansion ---------------------------------------------------------

    def _expand_side(self, positive: bool) -> LaurentPoly:
        coeff = self._coeff.numerator if positive else self._coeff.denominator
        powers = {v: abs(e) for v, e in self._powers.items()
                  if (e > 0) == positive and e}
        poly = LaurentPoly.monomial(coeff, powers)
        for f, e in self._factors.items():
            if (e > 0) == positive and e:
                poly = poly * f ** abs(e)
        return poly

    @property
    def num(self) -> LaurentPoly:
        if self._num is None:
            object.__setattr__(self, "_num", self._expand_side(True))
        return self._num

    @property
    def den(self) -> LaurentPoly:
        if self._den is None:
            object.__setattr__(self, "_den", self._expand_side(False))
        return self._den

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other):
        other = _as_sf(other)
        if other is NotImplemented:
            return NotImplemented
        powers = dict(self._powers)
        for v, e in other._powers.items():
            powers[v] = powers.get(v, 0) + e
        factors = dict(self._factors)
        for f, e in other._factors.items():
            factors[f] = factors.get(f, 0) + e
        return SemifieldElement(self._coeff * other._coeff, powers, factors)

    __rmul__ = __mul__

    def inv(self) -> "SemifieldElement":
        return SemifieldElement(1 / self._coeff,
                                {v: -e for v, e in self._powers.items()},
                                {f: -e for f, e in self._factors.items()})

    def __truediv__(self, other):
        other = _as_sf(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return _as_sf(other) / self

    def __pow__(self, n: int):
        if n == 0:
            return SemifieldElement.from_fraction(1)
        return SemifieldElement(self._coeff ** n,
                                {v: n * e for v, e in self._powers.items()},
                                {f: n * e for f, e in self._factors.items()})

    def one_plus(self) -> "SemifieldElement":
        """1 + self, i.e. (den + num) / den, refined against own factors."""
        p = self.num
        q = self.den
        s = p + q
        combined = SemifieldElement.from_num_den(s, q, candidates=self._factors.keys())
        return combined

    def __add__(self, other):
        other = _as_sf(other)
        if other is NotImplemented:
            return NotImplemented
        num = self.num * other.den + other.num * self.den
        den = self.den * other.den
        cands = set(self._factors) | set(other._factors)
        return SemifieldElement.from_num_den(num, den, candidates=cands)

    __radd__ = __add__

    def evaluate(self, assignment: Mapping[str, Rational]) -> Fraction:
        value = self._coeff
        for v, e in self._powers.items():
            x = Fraction(assignment[v])
            if x == 0 and e < 0:
                raise EvalDivisionByZero(f"0**{e} while evaluating")
            value *= x ** e
        for f, e in self._factors.items():
            x = f.evaluate(assignment)
            if x == 0 and e < 0:
                raise EvalDivisionByZero("factor vanishes at the assignment")
            value *= x ** e
        return value

    def __eq__(self, other):
        other = _as_sf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __str__(self):
        d = self.den
        if d.is_one():
            return str(self.num)
        return f"({self.num}) / ({d})"

    def __repr__(self):
        return f"SemifieldElement({self})"


def _as_sf(value):
    if isinstance(value, SemifieldElement):
        return value
    if isinstance(value, (int, Fraction)):
        return SemifieldElement.from_fraction(value)
    return NotImplemented


def one_plus(value):
    """1 + value in the appropriate structure (semifield, rational, function)."""
    if isinstance(value, SemifieldElement):
        return value.one_plus()
    return 1 + value


def inverse(value):
    """Multiplicative inverse for Fraction, RationalFunction, or SemifieldElement."""
    if isinstance(value, (RationalFunction, SemifieldElement)):
        return value.inv()
    if value == 0:
        raise InverseOfZero("inverse of zero")
    return 1 / Fraction(value)


def eq_exact(a, b) -> bool:
    """Exact equality by cross-multiplication; no canonical form required."""
    return a == b


def evaluate(expr, assignment: Mapping[str, Rational]) -> Fraction:
    """Evaluation homomorphism into the rationals."""
    if isinstance(expr, (int, Fraction)):
        return Fraction(expr)
    return expr.evaluate(assignment)


def random_nonzero_rational(rng, bits: int = 8) -> Fraction:
    """Uniform num in [-2^bits, 2^bits] without 0, den in [1, 2^bits]."""
    top = 1 << bits
    num = 0
    while num == 0:
        num = rng.randint(-top, top)
    return Fraction(num, rng.randint(1, top))


def random_positive_rational(rng, bits: int = 8) -> Fraction:
    top = 1 << bits
    return Fraction(rng.randint(1, top), rng.randint(1, top))


# ---------------------------------------------------------------------------
# JSON expression format
# ---------------------------------------------------------------------------


def _poly_terms_json(poly: LaurentPoly, names: Sequence[str]):
    pos = {n: i for i, n in enumerate(names)}
    rows = []
    for mono, coeff in poly.terms.items():
        full = [0] * len(names)
        for v, e in zip(poly.vars, mono):
            full[pos[v]] = e
        rows.append([str(coeff), full])
    rows.sort(key=lambda r: r[1])
    return rows

def expr_to_json(expr) -> dict:
    """Dump a RationalFunction or SemifieldElement as num/den term lists."""
    num, den = expr.num, expr.den
    names = sorted(set(num.vars) | set(den.vars), key=_natural_key)
    return {
        "num": _poly_terms_json(num, names),
        "den": _poly_terms_json(den, names),
        "vars": list(names),
    }


def _poly_from_json(rows, names) -> LaurentPoly:
    return LaurentPoly(names, {tuple(mono): Fraction(coeff) for coeff, mono in rows})


def expr_from_json(data: dict, semifield: bool = False):
    names = list(data["vars"])
    num = _poly_from_json(data["num"], names)
    den = _poly_from_json(data["den"], names)
    if semifield:
        return SemifieldElement.from_num_den(num, den)
    return RationalFunction(num, den)
