"""Regulator maps from polylogarithmic chain elements to differential forms.

The dictionary: a depth-p bracket carrying m wedge slots goes to a
degree-m form assembled from single-valued polylogarithm scalars and
the two weighted-alternation patterns; a pure wedge goes to the
alternating log/dlog/diarg combination with odd harmonic coefficients.
Everything extends Z-linearly over the terms of an element.

Three numeric suites probe the defining identities at generic points:

* chain_check     d(r(e)) == r(delta(e)) evaluated on random frames
* top_check       d(r(top wedge)) + projected holomorphic part == 0
* loop_residue_check   the loop integral of r(e) around a divisor
                       point extrapolates to 2*pi*i times r of the
                       residue element

golden_formula_tests compares the map symbolically against transcribed
closed forms kept under golden/.
"""

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .exact import beta_kp
from .forms import (
    EvalContext,
    Form,
    GenericityError,
    alpha,
    evaluate,
    exterior_derivative,
    format_form,
    log_abs,
    parse_form,
    sv_pq,
    sv_scalar,
    weighted_alternation,
    zero,
    _as_mapping,
    _det,
)
from .funcfield import (
    PoleError,
    RationalFunction,
    Valuation,
    one_minus,
    parse_function,
    rf_dir_derivative,
    rf_eval,
)
from .polycomplex import (
    ChainElement,
    bracket_tensor,
    delta,
    parse_element,
    pure_wedge,
    residue,
)
from .polylog import pi_projection, sv_polylog

_GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@dataclass(frozen=True)
class RegulatorConfig:
    tol: float = 1e-6
    samples: int = 20
    seed: int = 0
    fd_step: float = 1e-5
    loop_radii: Tuple[float, ...] = (1e-2, 3e-3, 1e-3)
    loop_nodes: int = 256

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.samples < 1:
            raise ValueError("need at least one sample")
        radii = tuple(float(r) for r in self.loop_radii)
        if any(b >= a for a, b in zip(radii, radii[1:])) or not radii:
            raise ValueError("loop radii must be strictly decreasing")
        if min(radii) <= 0:
            raise ValueError("loop radii must be positive")
        if self.loop_nodes < 64:
            raise ValueError("need at least 64 loop nodes")
        object.__setattr__(self, "loop_radii", radii)

    def eval_context(self) -> EvalContext:
        return EvalContext(fd_step=self.fd_step)


# ---------------------------------------------------------------------------
# the map itself


def _bracket_image(n: int, f: RationalFunction, gs: Sequence[RationalFunction]) -> Form:
    """Image of {f}_n tensor g_1^...^g_m, m >= 1."""
    m = len(gs)
    head = zero(m)
    for p in range(0, m // 2 + 1):
        head = head + weighted_alternation(gs, 2 * p, False) * Fraction(1, 2 * p + 1)
    out = sv_scalar(n, f).wedge(head)
    for k in range(1, n):
        lead = sv_pq(n - k, k, f)
        for split in range(1, m + 1):
            c = beta_kp(k, split)
            if c:
                out = out + lead.wedge(weighted_alternation(gs, split, True)) * c
    return out


def _wedge_image(gs: Sequence[RationalFunction]) -> Form:
    """Image of a pure wedge g_1^...^g_m.

    The single-slot case is the bottom row of the weight-1 complex,
    log|g|; the sign there is pinned by the loop-residue normalization.
    """
    m = len(gs)
    if m == 1:
        return log_abs(gs[0])
    out = zero(m - 1)
    for p in range(0, (m - 1) // 2 + 1):
        out = out + weighted_alternation(gs, 2 * p + 1, True) * Fraction(-1, 2 * p + 1)
    return out


def r_map(e: ChainElement) -> Form:
    """The regulator form of a chain element, extended Z-linearly."""
    out = zero(max(e.degree - 1, 0))
    for t in e.terms:
        if t.depth >= 2:
            if t.wedge:
                img = _bracket_image(t.depth, t.argument, t.wedge)
            else:
                img = sv_scalar(t.depth, t.argument)
        elif t.depth == 0 and t.wedge:
            img = _wedge_image(t.wedge)
        else:
            raise ValueError("malformed chain term")
        out = out + img * t.coefficient
    return out


def holomorphic_part(fs: Sequence[RationalFunction], x, vectors) -> complex:
    """pi_n of the holomorphic form dlog f_1 ^ ... ^ dlog f_n on a frame."""
    n = len(fs)
    if len(vectors) != n:
        raise ValueError("need exactly %d vectors" % n)
    names = sorted(set().union(*[set(f.variables()) for f in fs]) if fs else ())
    point = _as_mapping(x, names)
    frames = [_as_mapping(v, names) for v in vectors]
    rows = []
    for f in fs:
        try:
            val = rf_eval(f, point)
        except PoleError as exc:
            raise GenericityError(str(exc))
        if abs(val) < 1e-9:
            raise GenericityError("function vanishes at the sample point")
        rows.append([rf_dir_derivative(f, point, v) / val for v in frames])
    return pi_projection(n, _det(rows))


# ---------------------------------------------------------------------------
# golden formulas


def _load_golden() -> List[dict]:
    blocks = []
    for path in sorted(_GOLDEN_DIR.glob("*.txt")):
        current, key = {}, None
        for raw in path.read_text().splitlines() + [""]:
            line = raw.rstrip()
            if line.lstrip().startswith("#"):
                continue
            if not line.strip():
                if current:
                    blocks.append(current)
                current, key = {}, None
                continue
            if line[0] in " \t":
                if key is None:
                    raise ValueError("continuation before any key in %s" % path.name)
                current[key] += " " + line.strip()
                continue
            key, _, value = line.partition(":")
            key = key.strip()
            current[key] = value.strip()
    return blocks


def golden_formula_tests() -> dict:
    """Symbolic comparison against the transcribed closed formulas."""
    cases = []
    for block in _load_golden():
        e = parse_element(block["element"], weight=int(block["weight"]))
        want = parse_form(block["form"]) * int(block.get("sign", "1"))
        got = r_map(e)
        okay = got == want
        case = {
            "input": block["case"],
            "max_defect": 0.0 if okay else float("inf"),
            "tol": 0.0,
            "pass": okay,
        }
        if not okay:
            case["got"] = format_form(got)
            case["want"] = format_form(want)
        cases.append(case)

    # the depth-2 column: the general formula must specialize to the
    # displayed 1/((2p+1)(2p+3)) coefficients
    f = parse_function("f")
    gs = [parse_function("g%d" % i) for i in range(1, 5)]
    for m in range(1, 5):
        lhs = r_map(bracket_tensor(f, 2, gs[:m]))
        head = zero(m)
        for p in range(0, m // 2 + 1):
            head = head + weighted_alternation(gs[:m], 2 * p, False) * Fraction(
                1, 2 * p + 1
            )
        tail = zero(m - 1)
        for p in range(0, (m - 1) // 2 + 1):
            tail = tail + weighted_alternation(gs[:m], 2 * p + 1, True) * Fraction(
                1, (2 * p + 1) * (2 * p + 3)
            )
        rhs = sv_scalar(2, f).wedge(head) - alpha(one_minus(f), f).wedge(tail)
        okay = lhs == rhs
        case = {
            "input": "depth2-column-m%d" % m,
            "max_defect": 0.0 if okay else float("inf"),
            "tol": 0.0,
            "pass": okay,
        }
        if not okay:
            case["got"] = format_form(lhs)
            case["want"] = format_form(rhs)
        cases.append(case)

    return {
        "suite": "golden-formulas",
        "cases": cases,
        "pass": all(c["pass"] for c in cases),
    }


# ---------------------------------------------------------------------------
# generic sampling


def _gather_functions(a: Form) -> List[RationalFunction]:
    seen, out = set(), []
    for t in a.terms:
        fns = []
        for s in t.scalars:
            if s[0] == "log":
                fns.append(s[1])
            else:
                fns.append(s[2])
                fns.append(one_minus(s[2]))
        fns.extend(g[1] for g in t.generators)
        for h in fns:
            if h.key() not in seen:
                seen.add(h.key())
                out.append(h)
    return out


def _form_variables(*forms_: Form) -> List[str]:
    names = set()
    for a in forms_:
        for t in a.terms:
            for s in t.scalars:
                names.update((s[1] if s[0] == "log" else s[2]).variables())
            for g in t.generators:
                names.update(g[1].variables())
    return sorted(names)


def _generic_point(
    rng: random.Random, names: Sequence[str], functions: Sequence[RationalFunction]
) -> dict:
    # rejection sampling on a box; every listed function must stay in a
    # moderate annulus so logs and polylog scalars are well conditioned
    for _ in range(400):
        x = {
            n: complex(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)) for n in names
        }
        try:
            if all(1e-3 <= abs(rf_eval(h, x)) <= 1e3 for h in functions):
                return x
        except PoleError:
            continue
    raise RuntimeError("non-generic sample exhaustion")


def _frame(rng: random.Random, names: Sequence[str], count: int) -> List[dict]:
    return [
        {n: cmath.rect(1.0, rng.uniform(0.0, 2 * math.pi)) for n in names}
        for _ in range(count)
    ]


# ---------------------------------------------------------------------------
# chain-map square


def chain_check(
    weight: int,
    e: ChainElement,
    cfg: Optional[RegulatorConfig] = None,
    tuples: int = 3,
) -> dict:
    """Compare d(r(e)) with r(delta(e)) at generic sample frames.

    Also records the twist defect: values of r(e) itself must lie in
    i^(weight-1) R.
    """
    cfg = cfg or RegulatorConfig()
    if e.weight != weight:
        raise ValueError("element weight does not match")
    if e.degree >= weight:
        raise ValueError("top-degree element; use top_check")
    image = r_map(e)
    lhs = exterior_derivative(image)
    rhs = r_map(delta(e))
    names = _form_variables(lhs, rhs)
    functions = _gather_functions(lhs) + _gather_functions(rhs)
    ctx = cfg.eval_context()
    rng = random.Random(cfg.seed)
    count = e.degree
    parity = weight - 1
    worst = 0.0
    twist_worst = 0.0
    for _ in range(cfg.samples):
        x = _generic_point(rng, names, functions)
        for vs in (_frame(rng, names, count) for _ in range(tuples)):
            a = evaluate(lhs, x, vs, ctx)
            b = evaluate(rhs, x, vs, ctx)
            worst = max(worst, abs(a - b))
        if count >= 1:
            val = evaluate(image, x, _frame(rng, names, count - 1), ctx)
        else:
            val = evaluate(image, x, [], ctx)
        twist_worst = max(
            twist_worst, abs(val.real) if parity % 2 else abs(val.imag)
        )
    okay = worst < cfg.tol and twist_worst < cfg.tol
    return {
        "suite": "chain-map",
        "weight": weight,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "cases": [
            {
                "input": str(e),
                "max_defect": worst,
                "twist_defect": twist_worst,
                "tol": cfg.tol,
                "pass": okay,
            }
        ],
        "pass": okay,
    }


def standard_chain_elements(weight: int) -> List[Tuple[str, ChainElement]]:
    """One element per bracket shape (depth p >= 2, p + slots = weight),
    in one, two, or three variables as the form degree demands."""
    out = []
    uni = ["t", "t+2", "2*t-1", "t-3"]
    two = ["x", "y", "x+y", "x-2*y"]
    three = ["x", "y", "z", "x+y-z"]
    for p in range(2, weight):
        q = weight - p
        # degree of the compared forms is q + 1; a frame of k vectors is
        # degenerate once k exceeds twice the variable count
        for names, pool in (("t", uni), ("x,y", two), ("x,y,z", three)):
            nvars = len(names.split(","))
            if q + 1 > 2 * nvars:
                continue
            if nvars == 3 and q + 1 <= 4:
                continue
            if nvars == 2 and q + 1 <= 2:
                continue
            fvar = "t" if nvars == 1 else "x"
            other = "t" if nvars == 1 else "y"
            f = parse_function("(1-%s)/(1+%s)" % (fvar, other))
            gs = [parse_function(g) for g in pool[:q]]
            out.append(
                ("{%s}_%d, %d slots, vars %s" % (f, p, q, names),
                 bracket_tensor(f, p, gs))
            )
    # depth == weight, no slots: first square of the ladder
    f = parse_function("(1-t)/(1+t)")
    out.append(("{%s}_%d, 0 slots, vars t" % (f, weight), bracket_tensor(f, weight, [])))
    return out


def chain_suite(
    weights: Sequence[int] = (3, 4, 5, 6), cfg: Optional[RegulatorConfig] = None
) -> dict:
    cfg = cfg or RegulatorConfig()
    cases = []
    for w in weights:
        for label, e in standard_chain_elements(w):
            report = chain_check(w, e, cfg)
            case = dict(report["cases"][0])
            case["input"] = "weight %d: %s" % (w, label)
            cases.append(case)
    return {
        "suite": "chain-map",
        "samples": cfg.samples,
        "seed": cfg.seed,
        "cases": cases,
        "pass": all(c["pass"] for c in cases),
    }


# ---------------------------------------------------------------------------
# top row


def top_check(
    fs: Sequence[RationalFunction],
    cfg: Optional[RegulatorConfig] = None,
    tuples: int = 3,
) -> dict:
    """d r(f_1^...^f_n) plus the projected holomorphic part must vanish."""
    cfg = cfg or RegulatorConfig()
    n = len(fs)
    if n < 2:
        raise ValueError("need at least two functions")
    image = r_map(pure_wedge(fs))
    lhs = exterior_derivative(image)
    names = sorted(set().union(*[set(f.variables()) for f in fs]))
    functions = list(fs) + _gather_functions(lhs)
    ctx = cfg.eval_context()
    rng = random.Random(cfg.seed)
    worst = 0.0
    for _ in range(cfg.samples):
        x = _generic_point(rng, names, functions)
        for vs in (_frame(rng, names, n) for _ in range(tuples)):
            a = evaluate(lhs, x, vs, ctx)
            b = holomorphic_part(fs, x, vs)
            worst = max(worst, abs(a + b))
    okay = worst < cfg.tol
    return {
        "suite": "top-cycle",
        "samples": cfg.samples,
        "seed": cfg.seed,
        "cases": [
            {
                "input": "^".join(str(f) for f in fs),
                "max_defect": worst,
                "tol": cfg.tol,
                "pass": okay,
            }
        ],
        "pass": okay,
    }


# ---------------------------------------------------------------------------
# loop residues


def _constant_r_value(e: ChainElement) -> complex:
    """Numeric value of the map on a constant-coefficient element: the
    polylog scalar for brackets, log of the absolute value for a
    single-entry wedge."""
    total = 0j
    for t in e.terms:
        if t.depth >= 2 and not t.wedge:
            if not t.argument.is_constant():
                raise ValueError("residue not rational-point supported")
            total += t.coefficient * sv_polylog(t.depth, complex(t.argument.constant_value()))
        elif t.depth == 0 and len(t.wedge) == 1:
            g = t.wedge[0]
            if not g.is_constant():
                raise ValueError("residue not rational-point supported")
            total += t.coefficient * math.log(abs(complex(g.constant_value())))
        else:
            raise ValueError("residue not rational-point supported")
    return total


def loop_residue_check(
    weight: int,
    e: ChainElement,
    a,
    cfg: Optional[RegulatorConfig] = None,
    orientation: int = 1,
    tol: float = 1e-3,
) -> dict:
    """Integrate r(e) around small circles |t - a| = eps and compare the
    eps -> 0 extrapolation with 2*pi*i times r of the residue element.

    The fit model is c + b*eps*log(eps) + d*eps; the slowest smooth
    contribution on the circle scales like eps*log(eps).
    """
    cfg = cfg or RegulatorConfig()
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    if e.weight != weight:
        raise ValueError("element weight does not match")
    image = r_map(e)
    if image.degree != 1:
        raise ValueError("loop integration needs a 1-form image")
    names = _form_variables(image)
    if len(names) != 1:
        raise ValueError("loop integration needs a univariate element")
    ctx = cfg.eval_context()
    center = complex(Fraction(a))
    values = []
    for eps in cfg.loop_radii:
        total = 0j
        m = cfg.loop_nodes
        for j in range(m):
            th = orientation * 2 * math.pi * j / m
            spoke = cmath.rect(eps, th)
            tangent = orientation * 1j * spoke
            total += evaluate(image, center + spoke, [tangent], ctx)
        values.append(total * 2 * math.pi / m)

    import numpy as np

    design = np.array(
        [[1.0, eps * math.log(eps), eps] for eps in cfg.loop_radii]
    )
    coef, *_ = np.linalg.lstsq(design, np.array(values), rcond=None)
    loop_value = complex(coef[0])

    res = residue(e, Valuation.finite(Fraction(a)))
    expected = orientation * 2j * math.pi * _constant_r_value(res)
    defect = abs(loop_value - expected) / max(1.0, abs(expected))
    okay = defect < tol
    return {
        "suite": "loop-residue",
        "weight": weight,
        "cases": [
            {
                "input": "%s at %s%s" % (e, a, ", reversed" if orientation < 0 else ""),
                "loop_value": [loop_value.real, loop_value.imag],
                "expected": [expected.real, expected.imag],
                "max_defect": defect,
                "tol": tol,
                "pass": okay,
            }
        ],
        "pass": okay,
    }
