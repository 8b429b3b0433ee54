"""Complete/incomplete elliptic integrals and Jacobi elliptic functions.

Every routine takes the *parameter* ``m = k**2`` as its second argument,
never the modulus ``k``.  K and E use the arithmetic-geometric mean, the
incomplete E uses Carlson's symmetric integrals R_F and R_D, and
sn/cn/dn use descending Landen transformations on a period-reduced
argument.  The first argument may be a scalar or a numpy array; ``m`` is
always a scalar.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from numba import njit

# Above this parameter value K(m) is effectively unbounded and the
# hyperbolic limit formulas are used instead.
M_HYPERBOLIC = 1.0 - 1e-12

_CARLSON_TOL = 1e-16


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a routine."""


class EllipticTriple(NamedTuple):
    """Jacobi sn, cn, dn and the continuous amplitude at (u, m).

    ``hyperbolic`` is True when m was clamped to the m = 1 limit
    (sn = tanh, cn = dn = sech).
    """

    sn: float | np.ndarray
    cn: float | np.ndarray
    dn: float | np.ndarray
    am: float | np.ndarray
    hyperbolic: bool = False


def _check_m(m: float, upper_open: bool = False) -> float:
    m = float(m)
    if not math.isfinite(m) or m < 0.0 or m > 1.0 or (upper_open and m >= 1.0):
        bound = "[0, 1)" if upper_open else "[0, 1]"
        raise DomainError(f"parameter m={m!r} outside {bound}")
    return m


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


@lru_cache(maxsize=512)
def _landen(m: float) -> tuple[float, float, np.ndarray, np.ndarray]:
    """AGM sequence for 0 <= m < 1, returned as (K, E, a_n, c_n)."""
    a, b, c = 1.0, math.sqrt(1.0 - m), math.sqrt(m)
    a_seq, c_seq = [a], [c]
    acc = 0.5 * c * c  # running sum of 2**(n-1) c_n**2
    power = 0.5
    for _ in range(64):
        if c <= 1e-15 * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        power *= 2.0
        acc += power * c * c
        a_seq.append(a)
        c_seq.append(c)
    k = math.pi / (2.0 * a)
    return k, k * (1.0 - acc), np.array(a_seq), np.array(c_seq)


def ellip_k(m: float) -> float:
    """Complete elliptic integral of the first kind K(m), 0 <= m < 1."""
    return _landen(_check_m(m, upper_open=True))[0]


def ellip_e_complete(m: float) -> float:
    """Complete elliptic integral of the second kind E(m), 0 <= m <= 1."""
    m = _check_m(m)
    if m == 1.0:
        return 1.0
    return _landen(m)[1]


@njit(cache=True)
def _rf(x, y, z):
    a0 = (x + y + z) / 3.0
    q = (3.0 * _CARLSON_TOL) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    scale = 1.0
    for _ in range(60):
        if scale * q < abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        scale *= 0.25
    dx = 1.0 - x / a
    dy = 1.0 - y / a
    dz = -(dx + dy)
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    poly = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    return poly / math.sqrt(a)


@njit(cache=True)
def _rd(x, y, z):
    a0 = (x + y + 3.0 * z) / 5.0
    q = (0.25 * _CARLSON_TOL) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    scale = 1.0
    tail = 0.0
    for _ in range(60):
        if scale * q < abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        tail += scale / (sz * (z + lam))
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        scale *= 0.25
    dx = 1.0 - x / a
    dy = 1.0 - y / a
    dz = -(dx + dy) / 3.0
    xy, zz = dx * dy, dz * dz
    e2 = xy - 6.0 * zz
    e3 = (3.0 * xy - 8.0 * zz) * dz
    e4 = 3.0 * (xy - zz) * zz
    e5 = xy * zz * dz
    poly = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
            - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return scale * poly / (a * math.sqrt(a)) + 3.0 * tail


@njit(cache=True)
def _rf_vec(x, y, z):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _rf(x[i], y[i], z[i])
    return out


@njit(cache=True)
def _rd_vec(x, y, z):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _rd(x[i], y[i], z[i])
    return out


def _carlson(kernel, x, y, z):
    x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
    shape = x.shape
    out = kernel(x.ravel().copy(), y.ravel().copy(), z.ravel().copy())
    return _out(out.reshape(shape))


def carlson_rf(x, y, z):
    """Carlson's R_F(x, y, z); arguments nonnegative, at most one zero."""
    return _carlson(_rf_vec, x, y, z)


def carlson_rd(x, y, z):
    """Carlson's R_D(x, y, z); x, y nonnegative (not both zero), z > 0."""
    return _carlson(_rd_vec, x, y, z)


@njit(cache=True)
def _e_principal_vec(phi, m):
    out = np.empty(phi.size)
    for i in range(phi.size):
        s, c = math.sin(phi[i]), math.cos(phi[i])
        d2 = 1.0 - m * s * s
        out[i] = s * _rf(c * c, d2, 1.0) - (m / 3.0) * s * s * s * _rd(c * c, d2, 1.0)
    return out


def _e_principal(phi, m: float):
    """E(phi, m) for |phi| <= pi/2 via Carlson forms."""
    phi = np.asarray(phi, dtype=float)
    if m == 0.0:
        return phi
    if m == 1.0:
        return np.sin(phi)
    return _e_principal_vec(phi.ravel(), m).reshape(phi.shape)


def ellip_e_incomplete(phi, m: float):
    """Incomplete elliptic integral of the second kind E(phi, m).

    Odd in phi and quasi-periodic: E(phi + pi, m) = E(phi, m) + 2 E(m).
    """
    m = _check_m(m)
    phi = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise DomainError("phi must be finite")
    j = np.round(phi / math.pi)
    reduced = phi - j * math.pi
    return _out(2.0 * j * ellip_e_complete(m) + _e_principal(reduced, m))


@njit(cache=True)
def _descend(u, k, a_seq, c_seq):
    n = np.empty(u.size)
    phi = np.empty(u.size)
    depth = a_seq.size - 1
    top = (2.0 ** depth) * a_seq[depth]
    for j in range(u.size):
        nj = math.floor((u[j] + k) / (2.0 * k))
        p = top * (u[j] - 2.0 * k * nj)
        for i in range(depth, 0, -1):
            p = 0.5 * (p + math.asin(c_seq[i] / a_seq[i] * math.sin(p)))
        n[j] = nj
        phi[j] = p
    return n, phi


def _reduce(u: np.ndarray, m: float):
    """Split u = 2nK + r with r in [-K, K) and return (n, principal am(r))."""
    k, _, a_seq, c_seq = _landen(m)
    n, phi = _descend(u.ravel(), k, a_seq, c_seq)
    return n.reshape(u.shape), phi.reshape(u.shape)


def jacobi(u, m: float) -> EllipticTriple:
    """Jacobi elliptic functions sn, cn, dn and the continuous amplitude.

    The amplitude satisfies am(u + 2K, m) = am(u, m) + pi.  For
    m >= 1 - 1e-12 the hyperbolic limits are returned with
    ``hyperbolic=True``.
    """
    m = _check_m(m)
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise DomainError("u must be finite")
    if m >= M_HYPERBOLIC:
        sech = 1.0 / np.cosh(u)
        return EllipticTriple(_out(np.tanh(u)), _out(sech), _out(sech),
                              _out(np.arctan(np.sinh(u))), True)
    if m == 0.0:
        return EllipticTriple(_out(np.sin(u)), _out(np.cos(u)),
                              _out(np.ones_like(u)), _out(u))
    n, phi = _reduce(u, m)
    sign = 1.0 - 2.0 * np.mod(n, 2.0)
    sn = sign * np.sin(phi)
    cn = sign * np.cos(phi)
    # (1 - m) + m cn^2 avoids cancellation near sn^2 = 1 when m -> 1
    dn = np.sqrt((1.0 - m) + m * cn * cn)
    return EllipticTriple(_out(sn), _out(cn), _out(dn), _out(n * math.pi + phi))


def jacobi_epsilon(u, m: float):
    """Jacobi epsilon function E(am(u, m), m) with the continuous amplitude.

    This is the antiderivative of dn^2(u, m) vanishing at u = 0.
    """
    m = _check_m(m, upper_open=True)
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise DomainError("u must be finite")
    if m >= M_HYPERBOLIC:
        return _out(np.tanh(u))
    if m == 0.0:
        return _out(u.copy())
    n, phi = _reduce(u, m)
    return _out(2.0 * n * ellip_e_complete(m) + _e_principal(phi, m))
