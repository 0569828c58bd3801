"""Chain elements {f}_p (x) g_1^...^g_q, the differential, and residues.

A weight-n element is an integer combination of terms {f}_p tensor a wedge of
q = n - p functions (each wedge slot carries weight 1).  Depth p = 0 encodes a
pure wedge, which is always the top degree of its weight.  Degrees: q + 1 for
bracket terms, q for pure wedges.

The differential sends {f}_p (x) w to {f}_{p-1} (x) f^w for p >= 3 and to
(1-f)^f^w for p = 2; brackets with argument 0 or 1 are zero.  Residues at a
place v of Q(t) act as s_v on the bracket (reduction when the argument is a
unit, zero otherwise) tensor theta on the wedge, where theta pulls out the
uniformizer multiplicity of one slot at a time:

    theta(g_1^...^g_q) = sum_i (-1)^(i-1) ord_v(g_i) * (unit parts, slot i omitted)

Wedges are kept in a canonical sorted order with permutation sign; a repeated
entry or an entry equal to the constant 1 makes the term zero.  No further
multiplicative relations are imposed on wedge slots.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence, Tuple

from .funcfield import (
    RationalFunction,
    Valuation,
    const,
    one_minus,
    ord_at,
    parse_function,
    unit_part,
)


class ChainTerm:
    """One normalized term; use the module constructors, not this directly."""

    __slots__ = ("coefficient", "depth", "argument", "wedge")

    def __init__(self, coefficient: int, depth: int, argument, wedge: tuple):
        self.coefficient = coefficient
        self.depth = depth
        self.argument = argument
        self.wedge = wedge

    def key(self):
        arg_key = self.argument.key() if self.argument is not None else ""
        return (self.depth, arg_key, tuple(g.key() for g in self.wedge))

    @property
    def weight(self) -> int:
        return self.depth + len(self.wedge)

    @property
    def degree(self) -> int:
        q = len(self.wedge)
        return q + 1 if self.depth else q

    def __repr__(self):
        return "ChainTerm(%s)" % format_term(self.coefficient, self)


def _canonical_wedge(entries: Sequence[RationalFunction]):
    """Sort entries by key; return (sign, tuple) or None if the wedge dies."""
    keyed = []
    for g in entries:
        if g.is_zero():
            raise ValueError("zero is not allowed in a wedge slot")
        if g.is_constant() and g.constant_value() == 1:
            return None
        keyed.append((g.key(), g))
    sign = 1
    # insertion sort, counting transpositions for the permutation parity
    for i in range(1, len(keyed)):
        j = i
        while j > 0 and keyed[j][0] < keyed[j - 1][0]:
            keyed[j], keyed[j - 1] = keyed[j - 1], keyed[j]
            sign = -sign
            j -= 1
    for a, b in zip(keyed, keyed[1:]):
        if a[0] == b[0]:
            return None
    return sign, tuple(g for _, g in keyed)


def _make_term(coefficient: int, depth: int, argument, wedge) -> Optional[ChainTerm]:
    if coefficient == 0:
        return None
    if depth == 1:
        raise ValueError("depth-1 brackets are not part of the complex")
    if depth:
        if argument is None:
            raise ValueError("bracket terms need an argument")
        if argument.is_constant() and argument.constant_value() in (0, 1):
            return None
    elif argument is not None:
        raise ValueError("pure wedges carry no bracket argument")
    canon = _canonical_wedge(wedge)
    if canon is None:
        return None
    sign, entries = canon
    return ChainTerm(sign * coefficient, depth, argument, entries)


class ChainElement:
    """Normalized integer combination of terms of one weight and degree."""

    __slots__ = ("weight", "degree", "terms")

    def __init__(self, weight: int, degree: int, terms: Tuple[ChainTerm, ...]):
        self.weight = weight
        self.degree = degree
        self.terms = terms

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, ChainElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        if (self.weight, self.degree) != (other.weight, other.degree):
            return False
        return [(t.key(), t.coefficient) for t in self.terms] == [
            (t.key(), t.coefficient) for t in other.terms
        ]

    def __hash__(self):
        return hash(tuple((t.key(), t.coefficient) for t in self.terms))

    def __add__(self, other):
        if not isinstance(other, ChainElement):
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if (self.weight, self.degree) != (other.weight, other.degree):
            raise ValueError("cannot add elements of different weight or degree")
        return element(list(self.terms) + list(other.terms), self.weight, self.degree)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return ChainElement(self.weight, self.degree, ())
        return ChainElement(
            self.weight,
            self.degree,
            tuple(
                ChainTerm(k * t.coefficient, t.depth, t.argument, t.wedge)
                for t in self.terms
            ),
        )

    __rmul__ = __mul__

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for t in self.terms:
            text = format_term(abs(t.coefficient), t)
            parts.append(("- " if t.coefficient < 0 else "+ ") + text)
        joined = " ".join(parts)
        return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]

    __repr__ = __str__


def format_term(coefficient: int, t: ChainTerm) -> str:
    if t.depth == 0 and not t.wedge:
        return str(coefficient)
    text = "%d*" % coefficient if coefficient != 1 else ""
    if t.depth:
        text += "{%s}_%d" % (t.argument, t.depth)
        if t.wedge:
            text += " " + "⊗" + " "
    text += " ∧ ".join(_atom(g) for g in t.wedge)
    return text.strip()


def _atom(g: RationalFunction) -> str:
    s = str(g)
    return s if s.isalnum() or (s.startswith("(") and s.endswith(")")) else "(%s)" % s


def element(
    terms: Iterable[ChainTerm], weight: Optional[int] = None, degree: Optional[int] = None
) -> ChainElement:
    """Merge raw terms into a normalized element; zero coefficients drop."""
    merged = {}
    for t in terms:
        if t is None:
            continue
        if weight is None:
            weight = t.weight
        if degree is None:
            degree = t.degree
        if (t.weight, t.degree) != (weight, degree):
            raise ValueError("terms of mixed weight or degree")
        k = t.key()
        if k in merged:
            merged[k] = ChainTerm(
                merged[k].coefficient + t.coefficient, t.depth, t.argument, t.wedge
            )
        else:
            merged[k] = t
    alive = tuple(sorted((t for t in merged.values() if t.coefficient), key=ChainTerm.key))
    if weight is None:
        raise ValueError("cannot infer weight of an empty element")
    return ChainElement(weight, 0 if degree is None else degree, alive)


def bracket(f: RationalFunction, p: int, coefficient: int = 1) -> ChainElement:
    """The element coefficient * {f}_p."""
    return element([_make_term(coefficient, p, f, ())], p, 1 if p else 0)


def bracket_tensor(
    f: RationalFunction, p: int, wedge: Sequence[RationalFunction], coefficient: int = 1
) -> ChainElement:
    return element(
        [_make_term(coefficient, p, f, tuple(wedge))], p + len(wedge), len(wedge) + 1
    )


def pure_wedge(entries: Sequence[RationalFunction], coefficient: int = 1) -> ChainElement:
    return element([_make_term(coefficient, 0, None, tuple(entries))], len(entries), len(entries))


def delta(e: ChainElement) -> ChainElement:
    """The differential; raises on top-degree (pure-wedge) elements."""
    out: List[Optional[ChainTerm]] = []
    for t in e.terms:
        if t.depth == 0:
            raise ValueError("delta is undefined on top-degree pure wedges")
        if t.depth == 2:
            out.append(
                _make_term(
                    t.coefficient,
                    0,
                    None,
                    (one_minus(t.argument), t.argument) + t.wedge,
                )
            )
        else:
            out.append(
                _make_term(
                    t.coefficient, t.depth - 1, t.argument, (t.argument,) + t.wedge
                )
            )
    if e.is_zero():
        if e.degree >= e.weight:
            raise ValueError("delta is undefined on top-degree pure wedges")
        return ChainElement(e.weight, e.degree + 1, ())
    return element(out, e.weight, e.degree + 1)


def theta(wedge: Sequence[RationalFunction], v: Valuation) -> ChainElement:
    """Residue of a pure wedge; output entries are constants."""
    wedge = tuple(wedge)
    orders = [ord_at(g, v) for g in wedge]
    units = [const(unit_part(g, v)) for g in wedge]
    terms = []
    for i, e_i in enumerate(orders):
        if e_i == 0:
            continue
        rest = tuple(units[:i] + units[i + 1 :])
        sign = -1 if i % 2 else 1
        terms.append(_make_term(sign * e_i, 0, None, rest))
    q = len(wedge)
    return element(terms, q - 1, q - 1)


def residue(e: ChainElement, v: Valuation) -> ChainElement:
    """s_v tensor theta; weight drops by one, degree drops by one."""
    out: List[ChainTerm] = []
    new_weight = e.weight - 1
    new_degree = e.degree - 1
    for t in e.terms:
        if t.depth:
            if ord_at(t.argument, v) != 0:
                continue
            reduced = const(unit_part(t.argument, v))
            part = theta(t.wedge, v)
            for w in part.terms:
                out.append(
                    _make_term(
                        t.coefficient * w.coefficient, t.depth, reduced, w.wedge
                    )
                )
        else:
            part = theta(t.wedge, v)
            for w in part.terms:
                out.append(
                    _make_term(t.coefficient * w.coefficient, 0, None, w.wedge)
                )
    return element(out, new_weight, new_degree)


def residue_twisted(e: ChainElement, v: Valuation) -> ChainElement:
    """(-1)^q s_v tensor theta, q the wedge size; commutes with delta."""
    out: List[ChainTerm] = []
    for t in e.terms:
        q = len(t.wedge)
        single = element([t], e.weight, e.degree)
        part = residue(single, v)
        for w in part.terms:
            c = -w.coefficient if q % 2 else w.coefficient
            out.append(ChainTerm(c, w.depth, w.argument, w.wedge))
    return element(out, e.weight - 1, e.degree - 1)


# ---------------------------------------------------------------------------
# random elements and the chain-morphism check


# Sampler pools for the morphism check.  The residue comparison is exact on
# the nose when either ord_v(f) = 0 (both routes then build syntactically
# identical wedges) or every unit part at v lies in {1, -1} (the entry-1 and
# repeated-entry rules kill all surviving terms).  Entries whose unit part at
# a tested place is some other rational leave 2-torsion classes like (-1)^2
# that only cancel under multiplicative relations this representation does
# not impose; see the regression test pinning {2t+1}_2 (x) t at infinity.
# Hence: wedge entries are monic (unit part 1 at infinity), and the one
# non-monic-ratio function is allowed only as a bracket argument, where it is
# a unit at every tested place.
_WEDGE_POOL = ["t", "t+1", "t-1", "t+2", "t-2", "t+3", "(t+1)/(t-2)", "(2+t)/(1+t)"]
_BRACKET_POOL = _WEDGE_POOL + ["(2*t+1)/(t+3)"]


def random_element(weight: int, rng, depth: Optional[int] = None) -> ChainElement:
    """A random bracket term of the given weight over the standard pool."""
    if depth is None:
        depth = rng.choice([p for p in range(2, weight + 1)])
    name = rng.choice(_BRACKET_POOL)
    f = parse_function(name)
    pool = [s for s in _WEDGE_POOL if s != name]
    picks = []
    if depth < weight:
        # lead with a function that has a zero at one of the tested places,
        # so residues are frequently nonzero and sign comparisons decisive
        picks.append(rng.choice([p for p in ("t", "t-1") if p != name]))
    picks.extend(rng.sample([s for s in pool if s not in picks], weight - depth - len(picks)))
    funcs = [parse_function(s) for s in picks]
    coeff = rng.choice([1, -1, 2, 3, -2])
    return bracket_tensor(f, depth, funcs, coeff)


def residue_chain_check(
    weight: int,
    samples: int = 20,
    seed: int = 0,
    valuations: Optional[Sequence[Valuation]] = None,
    depths: Optional[Sequence[int]] = None,
) -> dict:
    """Compare residue(delta(e)) against delta(residue(e)) over random elements.

    Passes when every non-vacuous comparison matches with one global sign,
    which is reported; mixed or non-proportional outcomes fail with
    counterexamples.
    """
    import random as _random

    if weight < 2:
        raise ValueError("weight must be >= 2")
    rng = _random.Random(seed)
    if valuations is None:
        valuations = [Valuation.finite(0), Valuation.finite(1), Valuation.infinity()]
    signs = set()
    cases = []
    counterexamples = []
    undetermined = 0
    for i in range(samples):
        e = random_element(weight, rng, depth=rng.choice(list(depths)) if depths else None)
        for v in valuations:
            lhs = residue(delta(e), v)
            r = residue(e, v)
            rhs = delta(r) if not r.is_zero() else r
            if lhs.is_zero() and rhs.is_zero():
                undetermined += 1
                ok = True
            elif lhs == rhs:
                signs.add(1)
                ok = True
            elif lhs == -rhs:
                signs.add(-1)
                ok = True
            else:
                ok = False
                counterexamples.append({"element": str(e), "at": str(v)})
            cases.append(
                {
                    "input": "%s at %s" % (e, v),
                    "max_defect": 0.0 if ok else 1.0,
                    "tol": 0.0,
                    "pass": ok,
                }
            )
    consistent = len(signs) <= 1 and not counterexamples
    return {
        "suite": "residue-chain",
        "weight": weight,
        "samples": samples,
        "seed": seed,
        "sign": next(iter(signs)) if len(signs) == 1 else None,
        "undetermined": undetermined,
        "counterexamples": counterexamples,
        "cases": cases,
        "pass": bool(consistent and all(c["pass"] for c in cases)),
    }


# ---------------------------------------------------------------------------
# element text syntax


def parse_element(text: str, weight: Optional[int] = None) -> ChainElement:
    """Parse `3*{(1-t)/t}_2 (x) t ^ (1+t)`; unicode tensor/wedge also accepted.

    `^` at the top level separates wedge slots; write powers inside
    parentheses, e.g. `(t^2) ^ g`.
    """
    text = text.replace("⊗", " (x) ").replace("∧", " ^ ")
    chunks = _split_terms(text)
    if not chunks:
        raise ValueError("empty element")
    terms = []
    for sign, chunk in chunks:
        terms.append(_parse_term(sign, chunk))
    return element(terms, weight)


def _split_terms(text: str):
    chunks = []
    depth = 0
    sign = 1
    current = []
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if depth == 0 and ch in "+-":
            if "".join(current).strip():
                chunks.append((sign, "".join(current)))
                sign = 1
            elif chunks:
                raise ValueError("dangling sign in element text")
            if ch == "-":
                sign = -sign
            current = []
        else:
            current.append(ch)
    if "".join(current).strip():
        chunks.append((sign, "".join(current)))
    elif sign == -1:
        raise ValueError("dangling sign in element text")
    return chunks


def _parse_term(sign: int, chunk: str) -> Optional[ChainTerm]:
    s = chunk.strip()
    coeff = sign
    star = _top_level_star(s)
    if star is not None:
        head = s[:star].strip()
        if not head.isdigit():
            raise ValueError("coefficient must be an integer: %r" % head)
        coeff *= int(head)
        s = s[star + 1 :].strip()
    depth = 0
    argument = None
    if s.startswith("{"):
        close = s.find("}")
        if close < 0:
            raise ValueError("unclosed bracket in %r" % chunk)
        argument = parse_function(s[1:close])
        rest = s[close + 1 :].strip()
        if not rest.startswith("_"):
            raise ValueError("bracket needs a depth subscript: %r" % chunk)
        rest = rest[1:]
        i = 0
        while i < len(rest) and rest[i].isdigit():
            i += 1
        if i == 0:
            raise ValueError("bracket needs a numeric depth: %r" % chunk)
        depth = int(rest[:i])
        s = rest[i:].strip()
        if s.startswith("(x)"):
            s = s[3:].strip()
        elif s:
            raise ValueError("expected tensor separator in %r" % chunk)
    wedge = tuple(parse_function(p) for p in _split_wedge(s)) if s else ()
    return _make_term(coeff, depth, argument, wedge)


def _top_level_star(s: str) -> Optional[int]:
    depth = 0
    for i, ch in enumerate(s):
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        elif ch == "*" and depth == 0:
            return i
        elif ch in "{(" or not (ch.isdigit() or ch.isspace() or ch == "*"):
            return None
    return None


def _split_wedge(s: str):
    parts = []
    depth = 0
    current = []
    for ch in s:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == "^" and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    parts = [p.strip() for p in parts]
    if any(not p for p in parts):
        raise ValueError("empty wedge slot in %r" % s)
    return parts
