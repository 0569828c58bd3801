"""Symbolic differential forms at the generic point.

A Form is an exact rational combination of terms

    coeff * (product of scalar factors) * (wedge of 1-form generators)

with two scalar kinds, log|g| (repetition encodes powers) and the
single-valued polylog value of weight p >= 2 at f, and two generator kinds,
dlog|g| and d i arg g.  Weight-1 single-valued scalars are rewritten to
-log|1-f| at construction.  Generators are kept in a canonical order with the
permutation sign tracked; a repeated generator kills the term.

The exterior derivative treats log|g| as having d = dlog|g|, both generators
as closed, and single-valued scalars via their total differentials:

    d sv(2, f) = -log|1-f| diarg f + log|f| diarg(1-f)
    d sv(n, f) = sv(n-1, f) diarg f
                 - sum_{k=2}^{n-1} beta_k sv(n-k, f) log^{k-1}|f| dlog|f|
                   (the k = n-1 term reading sv(1, ..) via alpha(1-f, f))

Numeric evaluation realizes generators as real-linear covectors,
dlog|g|(v) = Re(Dg(x;v)/g(x)) and diarg g(v) = i Im(Dg(x;v)/g(x)), and
expands generator wedges as determinants against the supplied vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .exact import beta
from .funcfield import PoleError, RationalFunction, rf_dir_derivative, rf_eval
from .polylog import sv_state

Rational = Union[int, Fraction]


class GenericityError(ValueError):
    """Evaluation point too close to a zero or pole of a term function."""


# scalar factors: ("log", g) or ("sv", p, f); generators: ("dlog"|"diarg", g)


def _scalar_key(s):
    if s[0] == "log":
        return (0, "", s[1].key())
    return (1, s[1], s[2].key())


def _gen_key(g):
    return (g[0], g[1].key())


class FormTerm:
    __slots__ = ("coefficient", "scalars", "generators")

    def __init__(self, coefficient: Fraction, scalars: tuple, generators: tuple):
        self.coefficient = coefficient
        self.scalars = scalars
        self.generators = generators

    def key(self):
        return (
            tuple(_scalar_key(s) for s in self.scalars),
            tuple(_gen_key(g) for g in self.generators),
        )

    def __repr__(self):
        return "FormTerm(%s)" % format_term(self)


def _make_term(coefficient: Rational, scalars, generators) -> Optional[FormTerm]:
    coefficient = Fraction(coefficient)
    if not coefficient:
        return None
    scalars = tuple(sorted(scalars, key=_scalar_key))
    gens = list(generators)
    sign = 1
    for i in range(1, len(gens)):
        j = i
        while j > 0 and _gen_key(gens[j]) < _gen_key(gens[j - 1]):
            gens[j], gens[j - 1] = gens[j - 1], gens[j]
            sign = -sign
            j -= 1
    for a, b in zip(gens, gens[1:]):
        if _gen_key(a) == _gen_key(b):
            return None
    return FormTerm(sign * coefficient, scalars, tuple(gens))


class Form:
    """Degree-homogeneous combination of terms; immutable."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Tuple[FormTerm, ...]):
        self.degree = degree
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        if self.degree != other.degree:
            return False
        return [(t.key(), t.coefficient) for t in self.terms] == [
            (t.key(), t.coefficient) for t in other.terms
        ]

    def __hash__(self):
        return hash(tuple((t.key(), t.coefficient) for t in self.terms))

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        return form(self.degree, list(self.terms) + list(other.terms))

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        c = Fraction(c)
        if not c:
            return Form(self.degree, ())
        return Form(
            self.degree,
            tuple(FormTerm(c * t.coefficient, t.scalars, t.generators) for t in self.terms),
        )

    __rmul__ = __mul__

    def wedge(self, other: "Form") -> "Form":
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(
                    _make_term(
                        a.coefficient * b.coefficient,
                        a.scalars + b.scalars,
                        a.generators + b.generators,
                    )
                )
        return form(self.degree + other.degree, out)

    def __str__(self):
        return format_form(self)

    __repr__ = __str__


def form(degree: int, terms: Iterable[Optional[FormTerm]]) -> Form:
    merged: Dict[tuple, FormTerm] = {}
    for t in terms:
        if t is None:
            continue
        if len(t.generators) != degree:
            raise ValueError("term degree mismatch")
        k = t.key()
        if k in merged:
            merged[k] = FormTerm(
                merged[k].coefficient + t.coefficient, t.scalars, t.generators
            )
        else:
            merged[k] = t
    alive = tuple(
        sorted((t for t in merged.values() if t.coefficient), key=FormTerm.key)
    )
    return Form(degree, alive)


def zero(degree: int = 0) -> Form:
    return Form(degree, ())


def scalar(c: Rational) -> Form:
    return form(0, [_make_term(c, (), ())])


def log_abs(g: RationalFunction, coefficient: Rational = 1) -> Form:
    return form(0, [_make_term(coefficient, (("log", g),), ())])


def sv_scalar(p: int, f: RationalFunction, coefficient: Rational = 1) -> Form:
    """The weight-p single-valued value at f as a 0-form; p = 1 rewrites."""
    if p < 1:
        raise ValueError("weight must be >= 1")
    if p == 1:
        from .funcfield import one_minus

        return log_abs(one_minus(f), -Fraction(coefficient))
    return form(0, [_make_term(coefficient, (("sv", p, f),), ())])


def dlog(g: RationalFunction, coefficient: Rational = 1) -> Form:
    return form(1, [_make_term(coefficient, (), (("dlog", g),))])


def diarg(g: RationalFunction, coefficient: Rational = 1) -> Form:
    return form(1, [_make_term(coefficient, (), (("diarg", g),))])


def wedge(*forms_: Form) -> Form:
    out = forms_[0]
    for b in forms_[1:]:
        out = out.wedge(b)
    return out


def alpha(f: RationalFunction, g: RationalFunction) -> Form:
    """-log|f| dlog|g| + log|g| dlog|f|."""
    return log_abs(f, -1).wedge(dlog(g)) + log_abs(g).wedge(dlog(f))


def sv_pq(p: int, q: int, f: RationalFunction) -> Form:
    """The auxiliary 1-forms: sv(p,f) log^{q-1}|f| dlog|f|, with the p = 1
    case reading alpha(1-f, f) log^{q-1}|f|."""
    if p < 1 or q < 1:
        raise ValueError("indices must be >= 1")
    from .funcfield import one_minus

    if p == 1:
        out = alpha(one_minus(f), f)
    else:
        out = sv_scalar(p, f).wedge(dlog(f))
    for _ in range(q - 1):
        out = out.wedge(log_abs(f))
    return out


# ---------------------------------------------------------------------------
# exterior derivative


def _d_scalar(s) -> Form:
    if s[0] == "log":
        return dlog(s[1])
    _, n, f = s
    from .funcfield import one_minus

    if n == 2:
        return log_abs(one_minus(f), -1).wedge(diarg(f)) + log_abs(f).wedge(
            diarg(one_minus(f))
        )
    out = sv_scalar(n - 1, f).wedge(diarg(f))
    for k in range(2, n):
        b = beta(k)
        if b:
            out = out + sv_pq(n - k, k, f) * (-b)
    return out


def exterior_derivative(a: Form) -> Form:
    out: List[Optional[FormTerm]] = []
    for t in a.terms:
        for i, s in enumerate(t.scalars):
            rest = t.scalars[:i] + t.scalars[i + 1 :]
            ds = _d_scalar(s)
            for u in ds.terms:
                out.append(
                    _make_term(
                        t.coefficient * u.coefficient,
                        rest + u.scalars,
                        u.generators + t.generators,
                    )
                )
    return form(a.degree + 1, out)


# ---------------------------------------------------------------------------
# weighted alternation


def _shuffle_sign(order: Sequence[int]) -> int:
    sign = 1
    n = len(order)
    for i in range(n):
        for j in range(i + 1, n):
            if order[i] > order[j]:
                sign = -sign
    return sign


def weighted_alternation(
    gs: Sequence[RationalFunction], split: int, log_prefixed: bool
) -> Form:
    """Sum over ascending-within-block slot assignments with shuffle signs.

    log_prefixed False: blocks are dlog slots g_1..g_split then diarg slots.
    log_prefixed True:  log|g_1| then dlog slots g_2..g_split then diarg.
    Equals the full alternation weighted by the stabilizer order.
    """
    from itertools import combinations

    m = len(gs)
    if not 0 <= split <= m or (log_prefixed and split < 1):
        raise ValueError("invalid split for the alternation pattern")
    out = zero(m - 1 if log_prefixed else m)
    idx = list(range(m))
    if log_prefixed:
        for lead in idx:
            rest = [i for i in idx if i != lead]
            for dl in combinations(rest, split - 1):
                di = [i for i in rest if i not in dl]
                order = [lead, *dl, *di]
                piece = log_abs(gs[lead], _shuffle_sign(order))
                for i in dl:
                    piece = piece.wedge(dlog(gs[i]))
                for i in di:
                    piece = piece.wedge(diarg(gs[i]))
                out = out + piece
    else:
        for dl in combinations(idx, split):
            di = [i for i in idx if i not in dl]
            order = [*dl, *di]
            piece = scalar(_shuffle_sign(order))
            for i in dl:
                piece = piece.wedge(dlog(gs[i]))
            for i in di:
                piece = piece.wedge(diarg(gs[i]))
            out = out + piece
    return out


def alternation_bruteforce(
    gs: Sequence[RationalFunction], split: int, log_prefixed: bool
) -> Form:
    """Alt_m over all permutations divided by the block stabilizer order."""
    from itertools import permutations

    m = len(gs)
    if log_prefixed:
        stab = Fraction(1, math.factorial(split - 1) * math.factorial(m - split))
    else:
        stab = Fraction(1, math.factorial(split) * math.factorial(m - split))
    out = zero(m - 1 if log_prefixed else m)
    for perm in permutations(range(m)):
        sign = _shuffle_sign(perm)
        if log_prefixed:
            piece = log_abs(gs[perm[0]], sign * stab)
            for i in perm[1:split]:
                piece = piece.wedge(dlog(gs[i]))
            for i in perm[split:]:
                piece = piece.wedge(diarg(gs[i]))
        else:
            piece = scalar(sign * stab)
            for i in perm[:split]:
                piece = piece.wedge(dlog(gs[i]))
            for i in perm[split:]:
                piece = piece.wedge(diarg(gs[i]))
        out = out + piece
    return out


# ---------------------------------------------------------------------------
# numeric evaluation


@dataclass
class EvalContext:
    clearance: float = 1e-6
    rk_tol: float = 1e-9
    fd_step: float = 1e-5


_DEFAULT_CTX = EvalContext()


def _variables(a: Form) -> list:
    vs = set()
    for t in a.terms:
        for s in t.scalars:
            vs.update((s[1] if s[0] == "log" else s[2]).variables())
        for g in t.generators:
            vs.update(g[1].variables())
    return sorted(vs)


def _as_mapping(x, names) -> dict:
    if isinstance(x, dict):
        return {k: complex(v) for k, v in x.items()}
    if len(names) <= 1:
        name = names[0] if names else "t"
        return {name: complex(x)}
    if isinstance(x, (list, tuple)) and len(x) == len(names):
        return {n: complex(v) for n, v in zip(names, x)}
    raise ValueError("point/vector must be a mapping for multivariate forms")


def _guarded_value(g: RationalFunction, x: dict, clearance: float) -> complex:
    try:
        val = rf_eval(g, x, clearance=clearance)
    except PoleError as exc:
        raise GenericityError(str(exc))
    if abs(val) < clearance:
        raise GenericityError("function value too close to zero")
    return val


def _scalar_value(s, x: dict, ctx: EvalContext) -> complex:
    if s[0] == "log":
        return math.log(abs(_guarded_value(s[1], x, ctx.clearance)))
    _, p, f = s
    zf = _guarded_value(f, x, ctx.clearance)
    if abs(zf - 1.0) < ctx.clearance:
        raise GenericityError("sv argument too close to 1")
    return sv_state(p, zf, rk_tol=ctx.rk_tol)[p - 1]


def _covector(gen, x: dict, v: dict, ctx: EvalContext) -> complex:
    kind, g = gen
    gval = _guarded_value(g, x, ctx.clearance)
    d = rf_dir_derivative(g, x, v)
    w = d / gval
    return complex(w.real, 0.0) if kind == "dlog" else complex(0.0, w.imag)


def _det(mat: List[List[complex]]) -> complex:
    n = len(mat)
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    total = 0j
    for j in range(n):
        if mat[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        total += (-1) ** j * mat[0][j] * _det(minor)
    return total


def evaluate(a: Form, x, vectors: Sequence = (), ctx: Optional[EvalContext] = None) -> complex:
    """Evaluate against tangent vectors; len(vectors) must equal the degree."""
    ctx = ctx or _DEFAULT_CTX
    if len(vectors) != a.degree:
        raise ValueError("need exactly %d vectors" % a.degree)
    names = _variables(a)
    xm = _as_mapping(x, names)
    vms = [_as_mapping(v, names) for v in vectors]
    total = 0j
    for t in a.terms:
        val = complex(Fraction(t.coefficient))
        for s in t.scalars:
            val *= _scalar_value(s, xm, ctx)
        if t.generators:
            mat = [[_covector(g, xm, v, ctx) for v in vms] for g in t.generators]
            val *= _det(mat)
        total += val
    return total


def numeric_d(
    a: Form, x, vectors: Sequence, step: Optional[float] = None, ctx: Optional[EvalContext] = None
) -> complex:
    """Central-difference approximation of (da)(v_0, ..., v_deg)."""
    ctx = ctx or _DEFAULT_CTX
    if len(vectors) != a.degree + 1:
        raise ValueError("need exactly %d vectors" % (a.degree + 1))
    names = _variables(a)
    xm = _as_mapping(x, names)
    vms = [_as_mapping(v, names) for v in vectors]
    scale = max([abs(c) for c in xm.values()] or [0.0])
    h = (step if step is not None else ctx.fd_step) * (1.0 + scale)
    total = 0j
    for i, vi in enumerate(vms):
        rest = vms[:i] + vms[i + 1 :]
        plus = {k: xm[k] + h * vi.get(k, 0) for k in xm}
        minus = {k: xm[k] - h * vi.get(k, 0) for k in xm}
        diff = (evaluate(a, plus, rest, ctx) - evaluate(a, minus, rest, ctx)) / (2 * h)
        total += (-1) ** i * diff
    return total


# ---------------------------------------------------------------------------
# pretty-printing and the golden-file grammar


def _fn_text(g: RationalFunction) -> str:
    return str(g)


def format_term(t: FormTerm) -> str:
    bits = []
    c = t.coefficient
    if c != 1 or (not t.scalars and not t.generators):
        bits.append("(%s)" % c if c.denominator != 1 or c < 0 else str(c))
    i = 0
    scalars = list(t.scalars)
    while i < len(scalars):
        s = scalars[i]
        j = i
        while j < len(scalars) and scalars[j] == s:
            j += 1
        power = j - i
        if s[0] == "log":
            text = "log(%s)" % _fn_text(s[1])
        else:
            text = "L%d(%s)" % (s[1], _fn_text(s[2]))
        bits.append(text + ("^%d" % power if power > 1 else ""))
        i = j
    gen_text = "^".join(
        ("dlog(%s)" if k == "dlog" else "darg(%s)") % _fn_text(g)
        for k, g in t.generators
    )
    if gen_text:
        bits.append(gen_text)
    return "*".join(bits) if bits else "1"


def format_form(a: Form) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for t in a.terms:
        text = format_term(
            FormTerm(abs(t.coefficient), t.scalars, t.generators)
        )
        parts.append(("- " if t.coefficient < 0 else "+ ") + text)
    joined = " ".join(parts)
    return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]


class _FormParser:
    """Grammar for golden files and the CLI:

    form   := term (('+'|'-') term)*
    term   := factor (('*'|'.') factor)*
    factor := coeff | call ['^' int]
    call   := NAME '(' args ')'  with NAME in {log, dlog, darg, alpha, L<p>}
    coeff  := int ['/' int] | '(' coeff ')'

    A product of factors multiplies scalars and wedges generators in the
    written order; alpha(f, g) expands to its two-term 1-form.
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg):
        raise ValueError("%s at offset %d in %r" % (msg, self.pos, self.text))

    def ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t·":
            self.pos += 1

    def peek(self):
        self.ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Form:
        lead = 1
        if self.peek() == "-":
            self.pos += 1
            lead = -1
        elif self.peek() == "+":
            self.pos += 1
        out = lead * self.term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                out = out + self.term()
            elif ch == "-":
                self.pos += 1
                out = out + (-1) * self.term()
            elif ch == "":
                return out
            else:
                self.error("unexpected character %r" % ch)

    def term(self) -> Form:
        out = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                out = out.wedge(self.factor())
            elif ch and (ch.isalnum() or ch == "("):
                out = out.wedge(self.factor())
            else:
                return out

    def factor(self) -> Form:
        ch = self.peek()
        if ch == "(":
            save = self.pos
            self.pos += 1
            inner = self.peek()
            if inner.isdigit() or inner == "-":
                c = self.coeff()
                if self.peek() != ")":
                    self.error("expected ) after coefficient")
                self.pos += 1
                return scalar(c)
            self.pos = save
            self.error("unexpected (")
        if ch.isdigit():
            return scalar(self.coeff())
        if not ch.isalpha():
            self.error("expected a factor")
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalnum():
            self.pos += 1
        name = self.text[start : self.pos]
        if self.peek() != "(":
            self.error("expected ( after %r" % name)
        args = self.call_args()
        out = self.build(name, args)
        if self.peek() == "^":
            save = self.pos
            self.pos += 1
            if self.peek().isdigit():
                power = self.coeff()
                if power.denominator != 1 or power < 1:
                    self.error("bad power")
                base = out
                for _ in range(int(power) - 1):
                    out = out.wedge(base)
            else:
                self.pos = save
        return out

    def call_args(self) -> list:
        # splits balanced-paren argument text at top-level commas
        assert self.peek() == "("
        self.pos += 1
        depth = 1
        start = self.pos
        args = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    args.append(self.text[start : self.pos])
                    self.pos += 1
                    return [a.strip() for a in args]
            elif ch == "," and depth == 1:
                args.append(self.text[start : self.pos])
                start = self.pos + 1
            self.pos += 1
        self.error("unbalanced parentheses in call")

    def build(self, name: str, args: list) -> Form:
        from .funcfield import parse_function

        if name == "log" and len(args) == 1:
            return log_abs(parse_function(args[0]))
        if name == "dlog" and len(args) == 1:
            return dlog(parse_function(args[0]))
        if name == "darg" and len(args) == 1:
            return diarg(parse_function(args[0]))
        if name == "alpha" and len(args) == 2:
            return alpha(parse_function(args[0]), parse_function(args[1]))
        if name.startswith("L") and name[1:].isdigit() and len(args) == 1:
            return sv_scalar(int(name[1:]), parse_function(args[0]))
        self.error("unknown call %s/%d" % (name, len(args)))

    def coeff(self) -> Fraction:
        self.ws()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a number")
        num = int(self.text[start : self.pos])
        if self.peek() == "/":
            self.pos += 1
        else:
            return Fraction(num)
        self.ws()
        dstart = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if dstart == self.pos:
            self.error("expected a denominator")
        return Fraction(num, int(self.text[dstart : self.pos]))


def parse_form(text: str) -> Form:
    """Parse the printer/golden grammar back into a Form."""
    return _FormParser(text).parse()
