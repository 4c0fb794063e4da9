"""Complex Fresnel primitives for quadratic phases.

Everything here reduces to the scaled tail

    T(w) = int_w^inf exp(-i u^2) du,

evaluated for small ``|w|`` from a table (built by stepping out from
``T(0)``) corrected by a short local Taylor series, and for large ``|w|``
by the asymptotic series ``exp(-i w^2)/(2 i w) * sum (-1)^n (2n-1)!!/(2 i w^2)^n``,
which at ``|w| > 8`` is still far from its smallest term.
The phase scale ``lam`` enters only through ``u = sqrt(lam) z``.
"""

import numpy as np
from numba import njit

__all__ = [
    "SWITCH",
    "scaled_tail",
    "tail_scalar",
    "tail_pair",
    "fresnel_tail",
    "panel_moment",
    "FresnelTail",
]

#: |w| below which the tabulated local series is used; above it the
#: asymptotic series.
SWITCH = 8.0

_ROT = np.exp(1j * np.pi / 4)
_T0 = 0.5 * np.sqrt(np.pi) / _ROT  # T(0) = sqrt(pi)/2 e^{-i pi/4}

_STEP = 0.005
_LOCAL_TERMS = 9

# asymptotic-series length per |w| band; checked against mpmath
_ASYM_EDGES = (20.0,)
_ASYM_TERMS = (14, 6)


@njit(cache=True)
def _local_integral(w0, h):
    # int_0^h exp(-i (w0 + u)^2) du = exp(-i w0^2) int_0^h exp(a u + b u^2) du
    # with a = -2 i w0, b = -i; Taylor coefficients from g' = (a + 2 b u) g
    a = -2j * w0
    b = -1j
    c_prev = 0j
    c = 1.0 + 0j
    hp = h
    acc = c * hp
    for n in range(_LOCAL_TERMS):
        c_next = (a * c + 2 * b * c_prev) / (n + 1)
        c_prev = c
        c = c_next
        hp = hp * h
        acc += c * hp / (n + 2)
    return np.exp(-1j * w0 * w0) * acc


@njit(cache=True)
def _build_table():
    n = int(round(SWITCH / _STEP)) + 2
    table = np.empty(n, np.complex128)
    table[0] = _T0
    for k in range(n - 1):
        table[k + 1] = table[k] - _local_integral(k * _STEP, _STEP)
    return table


_TABLE = _build_table()


@njit(cache=True)
def _asymptotic_sum(a):
    # sum_n (-1)^n (2n-1)!! / (2 i a^2)^n, minus its leading 1
    terms = _ASYM_TERMS[0] if a < _ASYM_EDGES[0] else _ASYM_TERMS[1]
    r = 1.0 / (2j * a * a)
    term = 1.0 + 0j
    acc = 0j
    for n in range(1, terms):
        term = -term * (2 * n - 1) * r
        acc += term
    return acc


@njit(cache=True)
def _asymptotic(a):
    # a > SWITCH:  T(a) ~ exp(-i a^2)/(2 i a) sum_n (-1)^n (2n-1)!! / (2 i a^2)^n
    return np.exp(-1j * a * a) / (2j * a) * (1.0 + _asymptotic_sum(a))


@njit(cache=True)
def tail_scalar(w):
    """``int_w^inf exp(-i u^2) du`` for a single real ``w``."""
    a = abs(w)
    if a <= SWITCH:
        k = int(a / _STEP + 0.5)
        val = _TABLE[k] - _local_integral(k * _STEP, a - k * _STEP)
    else:
        val = _asymptotic(a)
    if w >= 0:
        return val
    # the integrand is even: T(-w) = 2 T(0) - T(w)
    return 2 * _T0 - val


@njit(cache=True)
def tail_pair(w):
    """``(T(w), G(w))`` with ``G(w) = int_w^inf (u - w) exp(-i u^2) du``.

    ``G = exp(-i w^2)/(-2i) + w T(w)``; for large ``w`` both terms are
    nearly equal and their difference is taken analytically, so ``G``
    keeps full relative accuracy in the far field.
    """
    a = abs(w)
    if a <= SWITCH:
        k = int(a / _STEP + 0.5)
        t = _TABLE[k] - _local_integral(k * _STEP, a - k * _STEP)
        g = np.exp(-1j * a * a) / -2j + a * t
    else:
        phase = np.exp(-1j * a * a)
        rest = _asymptotic_sum(a)
        t = phase / (2j * a) * (1.0 + rest)
        g = phase / 2j * rest
    if w >= 0:
        return t, g
    return 2 * _T0 - t, g - 2 * a * _T0


@njit(cache=True)
def _tail_array(w, out):
    for i in range(w.size):
        out[i] = tail_scalar(w[i])


def scaled_tail(w, sign=-1):
    """Return ``int_w^inf exp(sign * i u^2) du`` elementwise.

    Parameters
    ----------
    w : array_like
        Real lower limits.
    sign : {-1, +1}
        Sign of the phase; ``+1`` gives the complex conjugate.
    """
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    w = np.asarray(w, dtype=float)
    flat = np.ascontiguousarray(w).ravel()
    out = np.empty(flat.shape, complex)
    _tail_array(flat, out)
    if sign == 1:
        out = out.conj()
    out = out.reshape(w.shape)
    return out[()] if w.ndim == 0 else out


def fresnel_tail(xi, lam, sign=-1):
    """``int_xi^inf exp(-i lam z^2) dz`` (conjugated when ``sign=+1``).

    Accurate to about 1e-13 absolute in units of ``1/sqrt(lam)``.
    """
    if np.any(np.asarray(lam) <= 0):
        raise ValueError("phase scale lam must be positive")
    root = np.sqrt(lam)
    return scaled_tail(np.asarray(xi, float) * root, sign) / root


def panel_moment(a, b, lam, k, sign=-1):
    """``int_a^b z^k exp(-i lam z^2) dz`` for ``k`` in {0, 1}.

    The first moment has an elementary antiderivative; the zeroth is a
    difference of Fresnel tails.
    """
    if np.any(np.asarray(lam) <= 0):
        raise ValueError("phase scale lam must be positive")
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if k == 0:
        return fresnel_tail(a, lam, sign) - fresnel_tail(b, lam, sign)
    if k == 1:
        s = sign * 1j * lam
        return (np.exp(s * b * b) - np.exp(s * a * a)) / (2 * s)
    raise ValueError("k must be 0 or 1")


class FresnelTail:
    """A single evaluated tail ``int_argument^inf exp(-i phase_scale z^2) dz``."""

    def __init__(self, argument, phase_scale):
        self.argument = float(argument)
        self.phase_scale = float(phase_scale)
        self.value = complex(fresnel_tail(argument, phase_scale))

    def __repr__(self):
        return (f"FresnelTail(argument={self.argument!r}, "
                f"phase_scale={self.phase_scale!r}, value={self.value!r})")
