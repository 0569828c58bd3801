"""Exact rational-function fields Q(x_1,...,x_d).

Sparse polynomials over fractions.Fraction, rational functions in canonical
form, complex-point evaluation with pole clearance, exact directional
derivatives, and discrete-valuation data (order and unit part) at rational
points of the line and at infinity.

Canonical forms: a univariate quotient is gcd-reduced with monic denominator,
so syntactic equality is mathematical equality. Multivariate quotients are
only content-normalized (denominator primitive over Z with positive leading
coefficient in lex order); mathematical equality is decided separately by
cross-multiplication (`equals`). Unused variables are pruned, constants live
over the empty variable tuple.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _intgcd

__all__ = [
    "Polynomial",
    "RationalFunction",
    "Valuation",
    "PoleError",
    "var",
    "const",
    "parse_function",
    "rf_arith",
    "one_minus",
    "rf_eval",
    "rf_dir_derivative",
    "ord_at",
    "unit_part",
]


class PoleError(ArithmeticError):
    """Evaluation hit (or came within clearance of) a pole."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


class Polynomial:
    """Sparse multivariate polynomial with Fraction coefficients.

    terms maps exponent tuples (one slot per variable) to nonzero coefficients.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms):
        self.variables = tuple(variables)
        clean = {}
        width = len(self.variables)
        for expo, coeff in terms.items():
            coeff = _as_fraction(coeff)
            if coeff == 0:
                continue
            expo = tuple(expo)
            if len(expo) != width:
                raise ValueError("exponent width mismatch")
            clean[expo] = clean.get(expo, Fraction(0)) + coeff
        self.terms = {e: c for e, c in clean.items() if c != 0}

    # --- constructors -------------------------------------------------
    @staticmethod
    def constant(value, variables=()) -> "Polynomial":
        value = _as_fraction(value)
        if value == 0:
            return Polynomial(variables, {})
        zero = (0,) * len(variables)
        return Polynomial(variables, {zero: value})

    @staticmethod
    def variable(name: str) -> "Polynomial":
        return Polynomial((name,), {(1,): Fraction(1)})

    # --- structure ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in expo) for expo in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()), Fraction(0))

    def used_variables(self) -> tuple:
        used = set()
        for expo in self.terms:
            for i, e in enumerate(expo):
                if e:
                    used.add(self.variables[i])
        return tuple(sorted(used))

    def embed(self, variables) -> "Polynomial":
        """Reexpress over a superset of variables (sorted tuple expected)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        idx = {name: i for i, name in enumerate(variables)}
        pos = [idx[name] for name in self.variables]
        terms = {}
        for expo, coeff in self.terms.items():
            new = [0] * len(variables)
            for p, e in zip(pos, expo):
                new[p] = e
            terms[tuple(new)] = coeff
        return Polynomial(variables, terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading(self):
        """(exponent, coefficient) of the lex-largest term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        expo = max(self.terms)
        return expo, self.terms[expo]

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-coefficient, coprime."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = _intgcd(num, abs(c.numerator))
            den = den * c.denominator // _intgcd(den, c.denominator)
        return Fraction(num, den)

    # --- arithmetic -----------------------------------------------------
    def _pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self.variables)
        if self.variables == other.variables:
            return self, other
        union = tuple(sorted(set(self.variables) | set(other.variables)))
        return self.embed(union), other.embed(union)

    def __add__(self, other):
        a, b = self._pair(other)
        terms = dict(a.terms)
        for expo, coeff in b.terms.items():
            terms[expo] = terms.get(expo, Fraction(0)) + coeff
        return Polynomial(a.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._pair(other)
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                expo = tuple(x + y for x, y in zip(e1, e2))
                terms[expo] = terms.get(expo, Fraction(0)) + c1 * c2
        return Polynomial(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power on Polynomial")
        result = Polynomial.constant(1, self.variables)
        base = self
        while k:  # square and multiply
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._pair(other)
        return a.terms == b.terms

    def __hash__(self):
        used = self.used_variables()
        slim = self._prune(used)
        return hash((used, tuple(sorted(slim.terms.items()))))

    def _prune(self, used=None) -> "Polynomial":
        if used is None:
            used = self.used_variables()
        if used == self.variables:
            return self
        keep = [i for i, name in enumerate(self.variables) if name in used]
        terms = {
            tuple(expo[i] for i in keep): coeff for expo, coeff in self.terms.items()
        }
        return Polynomial(used, terms)

    # --- univariate helpers ---------------------------------------------
    def _univariate_coeffs(self):
        """Dense coefficient list, ascending degree (univariate only)."""
        if len(self.variables) > 1:
            raise ValueError("univariate operation on multivariate polynomial")
        if not self.variables:
            return [self.constant_value()] if self.terms else []
        deg = max((e[0] for e in self.terms), default=-1)
        out = [Fraction(0)] * (deg + 1)
        for (e,), c in self.terms.items():
            out[e] = c
        return out

    @staticmethod
    def _from_coeffs(name, coeffs) -> "Polynomial":
        return Polynomial((name,), {(i,): c for i, c in enumerate(coeffs) if c != 0})

    def divmod(self, other):
        """Univariate exact-arithmetic division with remainder."""
        a, b = self._pair(other)
        if len(a.variables) != 1:
            raise ValueError("divmod needs univariate polynomials")
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        name = a.variables[0]
        r = a._univariate_coeffs()
        d = b._univariate_coeffs()
        while d and d[-1] == 0:
            d.pop()
        q = [Fraction(0)] * max(len(r) - len(d) + 1, 0)
        while len(r) >= len(d) and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) < len(d):
                break
            shift = len(r) - len(d)
            factor = r[-1] / d[-1]
            q[shift] = factor
            for i, c in enumerate(d):
                r[i + shift] -= factor * c
        return Polynomial._from_coeffs(name, q), Polynomial._from_coeffs(name, r)

    def gcd(self, other) -> "Polynomial":
        """Monic univariate gcd by Euclid's algorithm."""
        a, b = self._pair(other)
        while not b.is_zero():
            _, r = a.divmod(b)
            a, b = b, r
        if a.is_zero():
            return a
        _, lc = a.leading()
        return a * (1 / lc)

    def partial(self, name: str) -> "Polynomial":
        if name not in self.variables:
            return Polynomial(self.variables, {})
        i = self.variables.index(name)
        terms = {}
        for expo, coeff in self.terms.items():
            if expo[i] == 0:
                continue
            new = list(expo)
            new[i] -= 1
            terms[tuple(new)] = terms.get(tuple(new), Fraction(0)) + coeff * expo[i]
        return Polynomial(self.variables, terms)

    def evaluate(self, point: dict) -> complex:
        total = 0j
        for expo, coeff in self.terms.items():
            term = complex(coeff)
            for name, e in zip(self.variables, expo):
                if e:
                    term *= complex(point[name]) ** e
            total += term
        return total

    # --- printing ---------------------------------------------------------
    def _term_str(self, expo, coeff, lead=False):
        parts = []
        for name, e in zip(self.variables, expo):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        mag = abs(coeff)
        if not parts:
            body = str(mag)
        elif mag == 1:
            body = "*".join(parts)
        else:
            body = str(mag) + "*" + "*".join(parts)
        sign = "-" if coeff < 0 else ("" if lead else "+")
        return sign + body

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)
        out = self._term_str(*items[0], lead=True)
        for expo, coeff in items[1:]:
            out += self._term_str(expo, coeff)
        return out

    __repr__ = __str__


class RationalFunction:
    """Quotient of polynomials in canonical form (see module docstring)."""

    __slots__ = ("num", "den", "_key")

    def __init__(self, num: Polynomial, den: Polynomial):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        union = tuple(sorted(set(num.variables) | set(den.variables)))
        num, den = num.embed(union), den.embed(union)
        used = tuple(sorted(set(num.used_variables()) | set(den.used_variables())))
        num, den = num._prune(used), den._prune(used)
        if num.is_zero():
            num = Polynomial(used, {})
            den = Polynomial.constant(1, used)
        elif len(used) == 1:
            g = num.gcd(den)
            num, _ = num.divmod(g)
            den, _ = den.divmod(g)
            _, lc = den.leading()
            num, den = num * (1 / lc), den * (1 / lc)
        else:  # constants and the multivariate case: content-normalize only
            _, lc = den.leading()
            scale = Fraction(1) / den.content()
            if lc < 0:
                scale = -scale
            num, den = num * scale, den * scale
        self.num = num
        self.den = den
        self._key = f"({num})/({den})"

    # --- structure -------------------------------------------------------
    def variables(self) -> tuple:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return not self.num.variables

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def key(self) -> str:
        """Deterministic total-order key; equal keys iff equal canonical form."""
        return self._key

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def equals(self, other: "RationalFunction") -> bool:
        """Mathematical equality by cross-multiplication (exact)."""
        return (self.num * other.den) == (other.num * self.den)

    # --- field arithmetic --------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return const(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return const(1) / (self ** (-k))
        return RationalFunction(self.num**k, self.den**k)

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return self._key

    __repr__ = __str__


def var(name: str) -> RationalFunction:
    return RationalFunction(Polynomial.variable(name), Polynomial.constant(1))


def const(value) -> RationalFunction:
    value = _as_fraction(value)
    return RationalFunction(
        Polynomial.constant(value.numerator), Polynomial.constant(value.denominator)
    )


def one_minus(f: RationalFunction) -> RationalFunction:
    return const(1) - f


def rf_arith(op: str, f: RationalFunction, g: RationalFunction = None):
    if op == "one_minus":
        return one_minus(f)
    if g is None:
        raise ValueError(f"binary op {op!r} needs two operands")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "div":
        return f / g
    raise ValueError(f"unknown op {op!r}")


# --- evaluation ---------------------------------------------------------


def _as_point(f: RationalFunction, x) -> dict:
    if isinstance(x, dict):
        return x
    names = f.variables()
    if len(names) <= 1:
        name = names[0] if names else "_"
        return {name: x}
    if isinstance(x, (tuple, list)) and len(x) == len(names):
        return dict(zip(names, x))
    raise ValueError("point shape does not match the function's variables")


def rf_eval(f: RationalFunction, x, clearance: float = 1e-12) -> complex:
    """num(x)/den(x); raises PoleError when |den(x)| <= clearance."""
    point = _as_point(f, x)
    d = f.den.evaluate(point)
    if abs(d) <= clearance:
        raise PoleError(f"denominator magnitude {abs(d):.3e} at {point}")
    return f.num.evaluate(point) / d


def rf_dir_derivative(f: RationalFunction, x, v) -> complex:
    """sum_j (df/dx_j)(x) * v_j, by exact symbolic partials then evaluation.

    v: complex displacement, shaped like the point (scalar for univariate,
    dict or aligned sequence otherwise).
    """
    point = _as_point(f, x)
    vee = _as_point(f, v)
    d = f.den.evaluate(point)
    if abs(d) <= 1e-12:
        raise PoleError(f"denominator magnitude {abs(d):.3e} at {point}")
    n = f.num.evaluate(point)
    total = 0j
    for name in f.variables():
        dn = f.num.partial(name).evaluate(point)
        dd = f.den.partial(name).evaluate(point)
        total += (dn * d - n * dd) / (d * d) * complex(vee.get(name, 0))
    return total


# --- discrete valuations -------------------------------------------------


class Valuation:
    """A place of Q(t): a rational finite point (uniformizer t-a) or infinity
    (uniformizer 1/t)."""

    __slots__ = ("kind", "point")

    def __init__(self, kind: str, point: Fraction | None = None):
        if kind not in ("finite", "infinity"):
            raise ValueError("kind must be 'finite' or 'infinity'")
        if kind == "finite" and point is None:
            raise ValueError("finite valuation needs a point")
        self.kind = kind
        self.point = _as_fraction(point) if kind == "finite" else None

    @staticmethod
    def finite(a) -> "Valuation":
        return Valuation("finite", _as_fraction(a))

    @staticmethod
    def infinity() -> "Valuation":
        return Valuation("infinity")

    @staticmethod
    def parse(text: str) -> "Valuation":
        text = text.strip()
        if text in ("inf", "infinity", "oo"):
            return Valuation.infinity()
        return Valuation.finite(Fraction(text))

    def __str__(self):
        return "inf" if self.kind == "infinity" else str(self.point)

    __repr__ = __str__

    def __eq__(self, other):
        return (
            isinstance(other, Valuation)
            and self.kind == other.kind
            and self.point == other.point
        )

    def __hash__(self):
        return hash((self.kind, self.point))


def _poly_order_at(p: Polynomial, a: Fraction):
    """(multiplicity of (t-a) in p, cofactor polynomial)."""
    if p.is_zero():
        raise ValueError("zero polynomial has no finite order")
    if not p.variables:
        return 0, p
    name = p.variables[0]
    linear = Polynomial.variable(name) - Polynomial.constant(a, (name,))
    order = 0
    while True:
        q, r = p.divmod(linear)
        if not r.is_zero():
            return order, p
        p = q
        order += 1


def ord_at(f: RationalFunction, v: Valuation) -> int:
    """Order of vanishing at the place; deg(den) - deg(num) at infinity."""
    if f.is_zero():
        raise ValueError("ord_at of the zero function")
    if len(f.variables()) > 1:
        raise ValueError("ord_at needs a univariate function")
    if v.kind == "infinity":
        return f.den.degree() - f.num.degree()
    en, _ = _poly_order_at(f.num, v.point)
    ed, _ = _poly_order_at(f.den, v.point)
    return en - ed


def unit_part(f: RationalFunction, v: Valuation) -> Fraction:
    """Value at the place of f / pi^{ord_v(f)}; always a nonzero rational here
    (places are rational points or infinity, coefficients rational)."""
    if f.is_zero():
        raise ValueError("unit_part of the zero function")
    if len(f.variables()) > 1:
        raise ValueError("unit_part needs a univariate function")
    if v.kind == "infinity":
        _, cn = f.num.leading()
        _, cd = f.den.leading()
        return cn / cd
    en, num1 = _poly_order_at(f.num, v.point)
    ed, den1 = _poly_order_at(f.den, v.point)
    point = {f.variables()[0]: v.point} if f.variables() else {}
    nval = _exact_eval(num1, point)
    dval = _exact_eval(den1, point)
    return nval / dval


def _exact_eval(p: Polynomial, point: dict) -> Fraction:
    total = Fraction(0)
    for expo, coeff in p.terms.items():
        term = coeff
        for name, e in zip(p.variables, expo):
            if e:
                term *= point[name] ** e
        total += term
    return total


# --- parser ---------------------------------------------------------------
# grammar:  expr   := term (('+'|'-') term)*
#           term   := factor (('*'|'/') factor)*
#           factor := ('-')* base ('^' integer)?
#           base   := integer | name | '(' expr ')'


class _FunctionParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ValueError(f"parse error at position {self.pos}: {message} in {self.text!r}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def parse(self) -> RationalFunction:
        value = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("trailing input")
        return value

    def expr(self) -> RationalFunction:
        value = self.term()
        while True:
            if self.take("+"):
                value = value + self.term()
            elif self.take("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> RationalFunction:
        value = self.factor()
        while True:
            c = self.peek()
            if c == "*":
                self.pos += 1
                value = value * self.factor()
            elif c == "/":
                self.pos += 1
                value = value / self.factor()
            else:
                return value

    def factor(self) -> RationalFunction:
        if self.take("-"):
            return -self.factor()
        value = self.base()
        if self.take("^"):
            sign = -1 if self.take("-") else 1
            k = self.integer()
            value = value ** (sign * k)
        return value

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected integer")
        return int(self.text[start : self.pos])

    def base(self) -> RationalFunction:
        c = self.peek()
        if c == "(":
            self.pos += 1
            value = self.expr()
            if not self.take(")"):
                self.error("expected ')'")
            return value
        if c.isdigit():
            return const(self.integer())
        if c.isalpha() or c == "_":
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            return var(self.text[start : self.pos])
        self.error("expected a number, name, or '('")


def parse_function(text: str) -> RationalFunction:
    """Parse e.g. '(t^2+1)/(t-1)' or '(x*y - 1)/(x + y)'."""
    return _FunctionParser(text).parse()
