# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernel.

Mirrors the API and semantics of the pure fallback `_kernel_py`; see that
module for the state convention and the transported differential system.
"""

from libc.math cimport log, pow

DEF MAXN = 40
DEF MAX_TERMS = 20000


def li_series(int n, double complex z, double eps):
    cdef double complex total = 0
    cdef double complex zk = 1
    cdef double complex term
    cdef int k
    if abs(z) > 0.75:
        raise ValueError("li_series: |z| too large for the series region")
    for k in range(1, MAX_TERMS):
        zk = zk * z
        term = zk / pow(<double> k, <double> n)
        total = total + term
        if abs(term) <= eps * (abs(total) + 1e-300):
            return total
    raise ArithmeticError("li_series: no convergence at requested precision")


def sv_direct_state(int n, betas, double complex z, double eps):
    cdef double complex lis[MAXN]
    cdef double b[MAXN]
    cdef double complex acc
    cdef double l0, power
    cdef int m, k
    if n < 1 or n >= MAXN:
        raise ValueError("sv_direct_state: weight out of range")
    if abs(z) < 1e-150:
        return [0j] * n
    for k in range(n):
        b[k] = <double> betas[k]
    for m in range(1, n + 1):
        lis[m - 1] = li_series(m, z, eps)
    l0 = log(abs(z))
    out = []
    for m in range(1, n + 1):
        acc = 0
        power = 1.0
        for k in range(m):
            acc = acc + b[k] * lis[m - k - 1] * power
            power = power * l0
        if m % 2:
            out.append(complex(acc.real, 0.0))
        else:
            out.append(complex(0.0, acc.imag))
    return out


cdef void _rhs(int n, double *betas, double complex z, double complex zdot,
               double complex *y, double complex *dy):
    cdef double complex w = zdot / z
    cdef double complex wp = -zdot / (1.0 - z)
    cdef double l0 = log(abs(z))
    cdef double l1 = log(abs(1.0 - z))
    cdef double complex iw1
    cdef double complex iwp
    cdef double u = w.real
    cdef double up = wp.real
    cdef double complex acc, s
    cdef double power
    cdef int m, k
    iw1 = 1j * w.imag
    iwp = 1j * wp.imag
    dy[0] = -l1 * iw1 + l0 * iwp
    for m in range(3, n + 1):
        acc = y[m - 3] * iw1
        s = 0
        power = l0
        for k in range(2, m - 1):
            s = s + betas[k] * y[m - k - 2] * power
            power = power * l0
        acc = acc + (-s + betas[m - 1] * l1 * pow(l0, m - 2)) * u
        acc = acc + (-betas[m - 1] * pow(l0, m - 1)) * up
        dy[m - 2] = acc


def path_state(int n, betas, nodes, int steps, state):
    cdef double b[MAXN]
    cdef double complex y[MAXN]
    cdef double complex yt[MAXN]
    cdef double complex k1[MAXN]
    cdef double complex k2[MAXN]
    cdef double complex k3[MAXN]
    cdef double complex k4[MAXN]
    cdef double complex a, bb, zdot, zm, ze
    cdef double h, s
    cdef int size = n - 1
    cdef int i, j, seg
    cdef int nseg = len(nodes) - 1
    if n < 2 or n >= MAXN:
        raise ValueError("path_state: weight out of range")
    if len(state) != size:
        raise ValueError("path_state: state length mismatch")
    for j in range(n):
        b[j] = <double> betas[j]
    for j in range(size):
        y[j] = state[j]
    for seg in range(nseg):
        a = nodes[seg]
        bb = nodes[seg + 1]
        zdot = bb - a
        h = 1.0 / steps
        for i in range(steps):
            s = i * h
            _rhs(n, b, a + s * zdot, zdot, y, k1)
            zm = a + (s + 0.5 * h) * zdot
            for j in range(size):
                yt[j] = y[j] + 0.5 * h * k1[j]
            _rhs(n, b, zm, zdot, yt, k2)
            for j in range(size):
                yt[j] = y[j] + 0.5 * h * k2[j]
            _rhs(n, b, zm, zdot, yt, k3)
            ze = a + (s + h) * zdot
            for j in range(size):
                yt[j] = y[j] + h * k3[j]
            _rhs(n, b, ze, zdot, yt, k4)
            for j in range(size):
                y[j] = y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
    return [complex(y[j].real, y[j].imag) for j in range(size)]
