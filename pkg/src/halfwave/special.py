"""Gamma function, principal complex powers and terminating hypergeometric sums.

Everything here is scalar- or numpy-array-valued and free of hidden state.
The hypergeometric routines only cover the terminating case (numerator
parameter ``-n``).  They are finite polynomials whose alternating
coefficients lose digits quickly, so they are evaluated in double-double
arithmetic built from error-free transformations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import zeta, zetac

from .errors import BranchCutError, DomainError

__all__ = [
    "ln_gamma",
    "gamma",
    "principal_power",
    "pochhammer",
    "compensated_sum",
    "hyp2f1_terminating",
    "hyp1f1_terminating",
    "TerminatingSeries",
]

_EULER_GAMMA = 0.57721566490153286061
_SERIES_TERMS = 70

# Taylor coefficients of log Gamma(1 + e) and log Gamma(2 + e) for k >= 2:
#   log Gamma(1 + e) = -euler*e + sum (-1)^k zeta(k)/k e^k
#   log Gamma(2 + e) = (1 - euler)*e + sum (-1)^k (zeta(k) - 1)/k e^k
_LG1_COEF = [(-1) ** k * float(zeta(k)) / k for k in range(2, _SERIES_TERMS)]
_LG2_COEF = [(-1) ** k * float(zetac(k)) / k for k in range(2, _SERIES_TERMS)]


def _log_gamma_series(e, lead, coef):
    terms = [lead * e]
    power = e
    for c in coef:
        power *= e
        terms.append(c * power)
    return math.fsum(terms)


def ln_gamma(x: float) -> float:
    """Natural logarithm of Gamma(x) for real x > 0.

    libm's ``lgamma`` loses relative accuracy next to the zeros at x = 1 and
    x = 2, so a Taylor expansion in zeta values is used within 1/2 of either
    zero.  Relative error stays below 1e-14 across (0, inf).
    """
    x = float(x)
    if not x > 0.0 or math.isnan(x):
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if abs(x - 1.0) <= 0.5:
        return _log_gamma_series(x - 1.0, -_EULER_GAMMA, _LG1_COEF)
    if abs(x - 2.0) < 0.5:
        return _log_gamma_series(x - 2.0, 1.0 - _EULER_GAMMA, _LG2_COEF)
    return math.lgamma(x)


def gamma(x: float) -> float:
    """Gamma(x) for real x > 0."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0, got {x!r}")
    if x > 171.0:
        return math.exp(ln_gamma(x))
    return math.gamma(x)


def principal_power(w, s):
    """``exp(s * Log w)`` on the principal branch, for ``Re w > 0``.

    Works on scalars and numpy arrays.  A base on or left of the imaginary
    axis raises :class:`BranchCutError` instead of silently picking a sheet.
    """
    warr = np.asarray(w, dtype=complex)
    if not np.all(warr.real > 0.0):
        raise BranchCutError("principal_power needs Re(w) > 0 for every base")
    out = np.exp(s * np.log(warr))
    if out.ndim == 0:
        return complex(out)
    return out


def pochhammer(x: float, k: int) -> float:
    """Rising factorial (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1."""
    if k < 0:
        raise DomainError("pochhammer needs k >= 0")
    result = 1.0
    for j in range(k):
        result *= x + j
    return result


def _neumaier(parts):
    total = np.array(parts[0], dtype=float, copy=True)
    comp = np.zeros_like(total)
    for t in parts[1:]:
        t = np.asarray(t, dtype=float)
        u = total + t
        big = np.abs(total) >= np.abs(t)
        comp = comp + np.where(big, (total - u) + t, (t - u) + total)
        total = u
    return total + comp


def compensated_sum(terms):
    """Neumaier-compensated sum of a sequence of scalars or equal-shape arrays.

    Complex terms are summed componentwise.
    """
    terms = [np.asarray(t) for t in terms]
    if not terms:
        return 0.0
    if any(np.iscomplexobj(t) for t in terms):
        re = _neumaier([t.real for t in terms])
        im = _neumaier([t.imag for t in terms])
        out = re + 1j * im
    else:
        out = _neumaier(terms)
    if np.ndim(out) == 0:
        return out.item()
    return out


def _binomial_float(n, k):
    try:
        return float(math.comb(n, k))
    except OverflowError as exc:
        raise OverflowError(f"binomial({n}, {k}) overflows binary64") from exc


# Double-double helpers (Dekker / Knuth error-free transformations).  A value
# is carried as an unevaluated pair hi + lo; all functions broadcast.

_SPLITTER = 134217729.0  # 2^27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _fast_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(xh, xl, yh, yl):
    s, e = _two_sum(xh, yh)
    return _fast_two_sum(s, e + xl + yl)


def _dd_mul(xh, xl, yh, yl):
    p, e = _two_prod(xh, yh)
    return _fast_two_sum(p, e + xh * yl + xl * yh)


def _dd_div(xh, xl, yh, yl):
    q1 = xh / yh
    ph, pl = _dd_mul(yh, yl, q1, 0.0)
    rh, rl = _dd_add(xh, xl, -ph, -pl)
    q2 = rh / yh
    return _fast_two_sum(q1, q2)


def _confluent_coefficients_dd(n: int, c: float):
    """(-n)_k / ((c)_k k!) for k = 0..n as double-double pairs."""
    out = [(1.0, 0.0)]
    h, l = 1.0, 0.0
    for k in range(n):
        h, l = _dd_mul(h, l, float(k - n), 0.0)
        dh, dl = _two_sum(c, float(k))
        dh, dl = _dd_mul(dh, dl, float(k + 1), 0.0)
        h, l = _dd_div(h, l, dh, dl)
        out.append((h, l))
    return out


def _gauss_coefficients_dd(n: int, g: float):
    """(-1)^k C(n,k) g/(g+k) for k = 0..n as double-double pairs."""
    out = []
    for k in range(n + 1):
        dh, dl = _two_sum(g, float(k))
        rh, rl = _dd_div(g, 0.0, dh, dl)
        b = (-1) ** k * _binomial_float(n, k)
        out.append(_dd_mul(rh, rl, b, 0.0))
    return out


def _horner_real_dd(coefs, x):
    sh = np.full(x.shape, coefs[-1][0])
    sl = np.full(x.shape, coefs[-1][1])
    for ah, al in reversed(coefs[:-1]):
        sh, sl = _dd_mul(sh, sl, x, 0.0)
        sh, sl = _dd_add(sh, sl, ah, al)
    return sh + sl


def _horner_complex_dd(coefs, w):
    wr, wi = w.real, w.imag
    rh = np.full(w.shape, coefs[-1][0])
    rl = np.full(w.shape, coefs[-1][1])
    ih = np.zeros(w.shape)
    il = np.zeros(w.shape)
    for ah, al in reversed(coefs[:-1]):
        # (r + i m)(wr + i wi) + a
        p1 = _dd_mul(rh, rl, wr, 0.0)
        p2 = _dd_mul(ih, il, -wi, 0.0)
        p3 = _dd_mul(rh, rl, wi, 0.0)
        p4 = _dd_mul(ih, il, wr, 0.0)
        rh, rl = _dd_add(*_dd_add(*p1, *p2), ah, al)
        ih, il = _dd_add(*p3, *p4)
    return (rh + rl) + 1j * (ih + il)


def _scalar_or_array(out):
    return out.item() if out.ndim == 0 else out


def hyp2f1_terminating(n: int, gamma2: float, w):
    """2F1(-n, g; g+1; w) with g = ``gamma2`` > 0, as an exact finite sum.

    Uses the reduction (-n)_k (g)_k / ((g+1)_k k!) = (-1)^k C(n,k) g/(g+k).
    Coefficients and the Horner recursion are carried in double-double
    arithmetic, so the alternating sum keeps full binary64 accuracy until
    its condition number exceeds ~1e16.  ``w`` may be a complex scalar or
    array.
    """
    if n < 0:
        raise DomainError("hyp2f1_terminating needs n >= 0")
    if not gamma2 > 0:
        raise DomainError("hyp2f1_terminating needs gamma2 > 0")
    w = np.asarray(w, dtype=complex)
    out = _horner_complex_dd(_gauss_coefficients_dd(n, float(gamma2)), w)
    if not np.all(np.isfinite(out)):
        raise OverflowError("terminating 2F1 overflowed binary64")
    return _scalar_or_array(out)


def hyp1f1_coefficients(n: int, c: float) -> list[float]:
    """Polynomial coefficients a_k = (-n)_k / ((c)_k k!) of 1F1(-n; c; q)."""
    if n < 0:
        raise DomainError("hyp1f1 needs n >= 0")
    if not c > 0:
        raise DomainError("hyp1f1 needs c > 0")
    return [h + l for h, l in _confluent_coefficients_dd(n, float(c))]


def hyp1f1_terminating(n: int, c: float, q):
    """Confluent 1F1(-n; c; q) for q >= 0, by double-double Horner evaluation."""
    if n < 0:
        raise DomainError("hyp1f1 needs n >= 0")
    if not c > 0:
        raise DomainError("hyp1f1 needs c > 0")
    qarr = np.asarray(q, dtype=float)
    if np.any(qarr < 0):
        raise DomainError("hyp1f1_terminating needs q >= 0")
    out = _horner_real_dd(_confluent_coefficients_dd(n, float(c)), qarr)
    return _scalar_or_array(np.asarray(out))


@dataclass(frozen=True)
class TerminatingSeries:
    """A terminating hypergeometric polynomial of a given degree.

    ``kind="gauss"`` is 2F1(-n, c-1; c; w); ``kind="confluent"`` is
    1F1(-n; c; q).  In this package ``c`` is always 2*gamma + 1.
    """

    degree: int
    lower: float
    kind: Literal["gauss", "confluent"]

    def __post_init__(self):
        if self.degree < 0:
            raise DomainError("degree must be a nonnegative integer")
        if not self.lower > 0:
            raise DomainError("lower parameter must be positive")
        if self.kind not in ("gauss", "confluent"):
            raise DomainError(f"unknown series kind {self.kind!r}")

    def coefficients(self) -> list[float]:
        if self.kind == "confluent":
            return hyp1f1_coefficients(self.degree, self.lower)
        g = self.lower - 1.0
        return [
            (-1) ** k * _binomial_float(self.degree, k) * g / (g + k)
            for k in range(self.degree + 1)
        ]

    def __call__(self, x):
        if self.kind == "confluent":
            return hyp1f1_terminating(self.degree, self.lower, x)
        return hyp2f1_terminating(self.degree, self.lower - 1.0, x)
