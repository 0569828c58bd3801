"""Single-valued polylogarithms.

The weight-n function is the projection

    sv(n, z) = pi_n( sum_{k=0}^{n-1} beta_k Li_{n-k}(z) log^k|z| )

with pi_n keeping the real part for odd n and the imaginary part for even n,
and beta_k the exact coefficients from `exact`.  Weight 1 is -log|1-z|,
weight 2 is the Bloch-Wigner function times i.  Values lie in i^(n-1) R and
are continuous on C minus {0, 1} with limits sv(n, 0) = 0 and, for n >= 2,
sv(n, 1) = pi_n(zeta(n)).

Two evaluation routes:

  * double precision (precision_bits <= 53): the series-based direct formula
    inside |z| <= 1/2, otherwise RK4 transport of the coupled total
    differential along a polyline from 1/2 that keeps clearance from 0 and 1,
    with step doubling and Richardson extrapolation;
  * high precision (precision_bits > 53): the defining combination evaluated
    with mpmath (own series inside |z| <= 1/2, mpmath's polylog outside).
    This route is the certification oracle for the double route.

The hot kernels live in the compiled module `_svkernel` with a pure-Python
fallback `_kernel_py`; set POLYREG_PURE=1 to force the fallback.
"""

from __future__ import annotations

import cmath
import functools
import math
import os
from dataclasses import dataclass
from typing import List, Sequence, Union

import mpmath as mp

from .exact import beta

if os.environ.get("POLYREG_PURE"):
    from . import _kernel_py as _kernel

    BACKEND = "pure"
else:
    try:
        from . import _svkernel as _kernel  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernel_py as _kernel

        BACKEND = "pure"


class ConvergenceError(ArithmeticError):
    """Raised when step doubling fails to reach the requested tolerance."""


class PathError(ValueError):
    """Raised for paths that touch 0 or 1 or violate the clearance radius."""


DEFAULT_RK_TOL = 1e-9
# tightest tolerance the adaptive loop will chase before giving up
_MAX_STEPS = 16384
_BASE_POINT = 0.5 + 0j


@dataclass(frozen=True)
class PathSpec:
    """Polyline from `base_point` through `waypoints` to the target."""

    base_point: complex = _BASE_POINT
    waypoints: tuple = ()
    steps_per_segment: int = 256
    clearance: float = 0.12

    def nodes(self, target: complex) -> List[complex]:
        return [complex(self.base_point), *map(complex, self.waypoints), complex(target)]


def _betas_float(n: int) -> List[float]:
    return [float(beta(k)) for k in range(n + 1)]


def pi_projection(n: int, w: complex) -> complex:
    """Keep Re for odd weight, i Im for even weight."""
    if n < 1:
        raise ValueError("weight must be >= 1")
    if n % 2:
        return complex(w.real, 0.0) if isinstance(w, complex) else mp.mpc(mp.re(w), 0)
    return complex(0.0, w.imag) if isinstance(w, complex) else mp.mpc(0, mp.im(w))


def li(n: int, z: complex, precision_bits: int = 53):
    """Polylogarithm by its power series; defined for |z| <= 1/2 only."""
    if n < 1:
        raise ValueError("weight must be >= 1")
    if abs(complex(z)) > 0.5:
        raise ValueError("li: series route requires |z| <= 1/2")
    if precision_bits <= 53:
        return _kernel.li_series(n, complex(z), 2.0 ** (-precision_bits))
    return _li_mp(n, mp.mpc(z), precision_bits)


def _li_mp(n: int, z, precision_bits: int):
    with mp.workprec(precision_bits + 12):
        total = mp.mpc(0)
        zk = mp.mpc(1)
        eps = mp.mpf(2) ** (-precision_bits - 6)
        for k in range(1, 200000):
            zk *= z
            term = zk / mp.mpf(k) ** n
            total += term
            if abs(term) <= eps * (abs(total) + mp.mpf("1e-600")):
                return +total
    raise ArithmeticError("mp series did not converge")


def _zeta_value(n: int, precision_bits: int):
    with mp.workprec(max(precision_bits, 53) + 12):
        return +mp.zeta(n)


# ---------------------------------------------------------------------------
# path planning


def _seg_distance(p: complex, a: complex, b: complex) -> float:
    d = b - a
    dd = (d.real * d.real + d.imag * d.imag)
    if dd == 0.0:
        return abs(p - a)
    t = ((p - a).real * d.real + (p - a).imag * d.imag) / dd
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def _plan_nodes(z: complex, clearance: float) -> List[complex]:
    """Polyline 1/2 -> z with detours around 0 and 1 where needed."""
    a, b = _BASE_POINT, z
    d = b - a
    inserts = []
    for s in (0j, 1 + 0j):
        if abs(z - s) <= clearance:  # endpoint sits close; no detour possible
            continue
        if _seg_distance(s, a, b) >= clearance:
            continue
        dd = d.real * d.real + d.imag * d.imag
        t = ((s - a).real * d.real + (s - a).imag * d.imag) / dd
        t = min(1.0, max(0.0, t))
        foot = a + t * d
        away = foot - s
        if abs(away) < 1e-12:
            away = d * 1j  # segment runs through s; step off sideways
        away /= abs(away)
        inserts.append((t, s + 1.6 * clearance * away))
    inserts.sort(key=lambda item: item[0])
    return [a, *(w for _, w in inserts), b]


def _check_clearance(nodes: Sequence[complex], clearance: float) -> None:
    for s in (0j, 1 + 0j):
        for i, (a, b) in enumerate(zip(nodes, nodes[1:])):
            if b == s or (a == s and i == 0):
                raise PathError("path endpoint hits a singular point")
            # final approach may come closer when the target itself is close
            if abs(b - s) <= clearance and i == len(nodes) - 2:
                continue
            if _seg_distance(s, a, b) < 0.5 * clearance:
                raise PathError("path violates clearance around 0 or 1")


# ---------------------------------------------------------------------------
# double-precision evaluation


@functools.lru_cache(maxsize=8192)
def _sv_state_double(n: int, z: complex, rk_tol: float) -> tuple:
    """Values [sv(1,z) .. sv(n,z)] at double precision."""
    if z == 0:
        return (0j,) * n
    if z == 1:
        out = [None]  # weight 1 diverges at z = 1
        for m in range(2, n + 1):
            val = complex(_zeta_value(m, 53)) if m % 2 else 0j
            out.append(val)
        return tuple(out)
    if abs(z) <= 0.5:
        return tuple(_kernel.sv_direct_state(n, _betas_float(n + 1), z, 2.0 ** -53))
    lead = complex(-cmath.log(1 - z).real, 0.0)
    if n == 1:
        return (lead,)
    nodes = _plan_nodes(z, 0.12)
    _check_clearance(nodes, 0.12)
    tail = _integrate(n, nodes, 256, rk_tol)
    return (lead, *tail)


def _integrate(n: int, nodes: Sequence[complex], steps: int, rk_tol: float) -> List[complex]:
    betas = _betas_float(n + 1)
    base = _kernel.sv_direct_state(n, betas, complex(nodes[0]), 2.0 ** -53)[1:]
    nodes = [complex(w) for w in nodes]
    coarse = _kernel.path_state(n, betas, nodes, steps, base)
    while True:
        steps *= 2
        fine = _kernel.path_state(n, betas, nodes, steps, base)
        err = max(abs(f - c) for f, c in zip(fine, coarse)) / 15.0
        if err <= rk_tol:
            # one Richardson step: RK4 leading error cancels between the pair
            return [f + (f - c) / 15.0 for f, c in zip(fine, coarse)]
        if steps >= _MAX_STEPS:
            raise ConvergenceError(
                "path transport did not reach tol=%g (estimate %g)" % (rk_tol, err)
            )
        coarse = fine


# ---------------------------------------------------------------------------
# high-precision evaluation


def _sv_state_mp(n: int, z: complex, precision_bits: int) -> list:
    with mp.workprec(precision_bits + 16):
        zz = mp.mpc(z)
        if zz == 0:
            return [mp.mpc(0)] * n
        betas = [mp.mpf(beta(k).numerator) / beta(k).denominator for k in range(n + 1)]
        if abs(zz) <= 0.5:
            lis = [_li_mp(m, zz, precision_bits) for m in range(1, n + 1)]
        else:
            lis = [mp.polylog(m, zz) for m in range(1, n + 1)]
        l0 = mp.log(abs(zz))
        out = []
        for m in range(1, n + 1):
            acc = mp.mpc(0)
            power = mp.mpf(1)
            for k in range(m):
                acc += betas[k] * lis[m - k - 1] * power
                power *= l0
            out.append(mp.mpc(mp.re(acc), 0) if m % 2 else mp.mpc(0, mp.im(acc)))
        return [+v for v in out]


# ---------------------------------------------------------------------------
# public entry points


def sv_polylog(
    n: int,
    z: complex,
    precision_bits: int = 53,
    path: Union[str, PathSpec] = "auto",
    rk_tol: float = DEFAULT_RK_TOL,
):
    """Single-valued polylogarithm of weight n at z.

    `path` selects the double route: "auto" plans a polyline when |z| > 1/2,
    "direct" insists on the series region, a PathSpec is used as given.
    """
    if n < 1:
        raise ValueError("weight must be >= 1")
    if complex(z) == 1 and n == 1:
        raise ValueError("sv_polylog: weight 1 diverges at z = 1")
    if precision_bits > 53:
        if complex(z) == 1:
            val = _zeta_value(n, precision_bits) if n % 2 else mp.mpf(0)
            return mp.mpc(val, 0) if n % 2 else mp.mpc(0, 0)
        return _sv_state_mp(n, z, precision_bits)[n - 1]
    z = complex(z)
    if isinstance(path, PathSpec):
        if z in (0j, 1 + 0j) or n == 1:
            return _sv_state_double(n, z, rk_tol)[n - 1]
        nodes = path.nodes(z)
        _check_clearance(nodes, path.clearance)
        tail = _integrate(n, nodes, path.steps_per_segment, rk_tol)
        return tail[n - 2]
    if path == "direct":
        if abs(z) > 0.5:
            raise ValueError("sv_polylog: direct route requires |z| <= 1/2")
    elif path != "auto":
        raise ValueError("path must be 'auto', 'direct', or a PathSpec")
    return _sv_state_double(n, z, rk_tol)[n - 1]


def sv_state(n: int, z: complex, rk_tol: float = DEFAULT_RK_TOL) -> tuple:
    """All weights 1..n at once (double route); weight-1 slot is None at z=1."""
    return _sv_state_double(n, complex(z), rk_tol)


def clear_cache() -> None:
    _sv_state_double.cache_clear()


# ---------------------------------------------------------------------------
# symmetry suite


def _sample_points(rng, count, lo=0.15, hi=6.0, avoid_unit_disc_edge=False):
    pts = []
    while len(pts) < count:
        r = math.exp(rng.uniform(math.log(lo), math.log(hi)))
        phi = rng.uniform(0.0, 2.0 * math.pi)
        z = r * cmath.exp(1j * phi)
        if abs(z) < lo or abs(z - 1) < 0.2:
            continue
        pts.append(z)
    return pts


def sv_polylog_check_symmetries(
    n: int,
    samples: int = 20,
    tol: float = 1e-8,
    seed: int = 0,
    rk_tol: float = 2e-11,
) -> dict:
    """Numerical checks: inversion, conjugation, parity, and for n = 2 the
    five-term relation.  Returns a report dict with per-case defects."""
    import random

    rng = random.Random(seed)
    sign = -1.0 if n % 2 == 0 else 1.0
    cases = []

    def record(name, defect):
        cases.append(
            {
                "input": name,
                "max_defect": float(defect),
                "tol": float(tol),
                "pass": bool(defect <= tol),
            }
        )

    worst_inv = worst_conj = worst_par = 0.0
    for z in _sample_points(rng, samples):
        a = sv_polylog(n, z, rk_tol=rk_tol)
        worst_inv = max(worst_inv, abs(sv_polylog(n, 1.0 / z, rk_tol=rk_tol) - sign * a))
        worst_conj = max(
            worst_conj, abs(sv_polylog(n, z.conjugate(), rk_tol=rk_tol) - sign * a)
        )
        worst_par = max(worst_par, abs(a.real) if n % 2 == 0 else abs(a.imag))
    record("inversion z -> 1/z", worst_inv)
    record("conjugation z -> conj z", worst_conj)
    record("parity (value in i^(n-1) R)", worst_par)

    if n == 2:
        worst5 = 0.0
        picked = 0
        while picked < samples:
            x = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
            y = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
            args = _five_term_args(x, y)
            if args is None:
                continue
            picked += 1
            total = sum(sv_polylog(2, w, rk_tol=rk_tol) for w in args)
            worst5 = max(worst5, abs(total))
        record("five-term relation", worst5)

    return {
        "suite": "polylog-symmetries",
        "weight": n,
        "samples": samples,
        "seed": seed,
        "cases": cases,
        "pass": all(c["pass"] for c in cases),
    }


def _five_term_args(x: complex, y: complex):
    """The five arguments of the dilogarithm relation, or None if degenerate."""
    if abs(1 - x * y) < 0.05:
        return None
    args = [x, y, (1 - x) / (1 - x * y), 1 - x * y, (1 - y) / (1 - x * y)]
    for w in args:
        if abs(w) < 0.02 or abs(w - 1) < 0.02 or abs(w) > 60.0:
            return None
    return args
