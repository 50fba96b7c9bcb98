"""Reconstruction of radial functions from closed-form coefficient fields.

Analysis uses the wavelet psi(q) = q^(gamma-2) e^(-q), which is not
admissible for gamma <= 1, so reconstruction pairs it with the constant
dual chi(q) = 1/(2 pi Gamma(gamma)).  The dual family acting on a coefficient
F reduces, per pole term, to

    1/(2 pi Gamma(g)) int_0^inf da a^(g-1) lim_N int_{-N}^{N} db e^{ibq} F(b - ia)

whose a-integral is a Beta function and whose b-integral is a known Fourier
pair.  The net effect is the term map

    C [i(zbar - i s)]^(-e)  ->  C / Gamma(e) * q^(e-g-1) e^(-s q),

the exact inverse of :func:`halfwave.transform.closed_form_transform`.
Writing the same pole as C (zbar - zbar0)^(-e) instead introduces the phase
i^e, because (zbar - zbar0)^(-e) = i^e [i(zbar - zbar0)]^(-e) on the principal
branch for every zbar in the lower half-plane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import beta as beta_fn

from .errors import ConsistencyError, DomainError
from .special import gamma as gamma_fn, hyp1f1_coefficients, principal_power
from .transform import (
    PoleField,
    PoleTerm,
    PowExpTerm,
    RadialProfile,
    _order,
    transform_field,
)

__all__ = [
    "ReconstructionWavelet",
    "analyzing_wavelet",
    "invert_pole_term",
    "reconstruct",
    "dilation_integral",
    "translation_pair",
    "pipeline_coefficient",
    "direct_reconstruction",
    "roundtrip_check",
    "operator_image",
    "hypergeometric_field",
    "confluent_profile",
    "profile_deviation",
]


def analyzing_wavelet(gamma, q):
    """psi^gamma(q) = q^(gamma - 2) e^(-q)."""
    g = _order(gamma)
    q = np.asarray(q, dtype=float)
    return q ** (g - 2.0) * np.exp(-q)


@dataclass(frozen=True)
class ReconstructionWavelet:
    """The constant dual chi^gamma = 1/(2 pi Gamma(gamma))."""

    gamma: float

    def __post_init__(self):
        _order(self.gamma)

    @property
    def value(self) -> float:
        return 1.0 / (2.0 * math.pi * gamma_fn(self.gamma))

    def __call__(self, q):
        return np.full(np.shape(q), self.value)

    def pairing_integral(self, rel_tol: float = 1e-13) -> float:
        """int_0^inf q psi(q) chi dq by QUADPACK; equals 1/(2 pi) analytically."""
        g = float(self.gamma)
        # q * psi = q^(g-1) e^(-q); the algebraic weight handles q -> 0 exactly
        head, e1 = integrate.quad(lambda q: math.exp(-q), 0.0, 1.0, weight="alg",
                                  wvar=(g - 1.0, 0.0), epsabs=0.0, epsrel=rel_tol)
        tail, e2 = integrate.quad(lambda q: q ** (g - 1.0) * math.exp(-q), 1.0, np.inf,
                                  epsabs=0.0, epsrel=rel_tol)
        return (head + tail) * self.value


def invert_pole_term(term: PoleTerm, gamma) -> PowExpTerm:
    """Radial term whose order-gamma transform is ``term``.

    C [i(zbar - zbar0)]^(-e)  ->  (C / Gamma(e)) q^(e - gamma - 1) e^(-s q),
    with s = -i zbar0.  Requires e >= gamma (alpha = e - gamma >= 0).
    """
    g = _order(gamma)
    alpha = term.exponent - g
    if alpha < -1e-12:
        raise DomainError(f"pole exponent {term.exponent} < gamma = {g}: not a transform image")
    alpha = max(alpha, 0.0)
    rate = -1j * term.pole
    return PowExpTerm(term.coeff / gamma_fn(term.exponent), alpha, rate)


def dilation_integral(gamma, exponent, base):
    """int_0^inf da a^(gamma-1) (base + a)^(-exponent) = B(g, e-g) base^(-(e-g)).

    ``base`` (complex, Re > 0) may be an array.
    """
    g = _order(gamma)
    rest = exponent - g
    if not rest > 0:
        raise DomainError("dilation integral diverges unless exponent > gamma")
    return beta_fn(g, rest) * principal_power(base, -rest)


def translation_pair(beta, rate, q):
    """lim_N int_{-N}^{N} db e^{ibq} (rate + ib)^(-beta) = 2 pi q^(beta-1) e^(-rate q) / Gamma(beta), q > 0."""
    q = np.asarray(q, dtype=float)
    return 2.0 * math.pi * q ** (beta - 1.0) * np.exp(-rate * q) / gamma_fn(beta)


def pipeline_coefficient(term: PoleTerm, gamma) -> complex:
    """Radial coefficient of ``term`` obtained through the Beta / Fourier-pair route.

    chi * C * B(g, e - g) * 2 pi / Gamma(e - g); agrees with C / Gamma(e)
    from :func:`invert_pole_term`, which it checks independently.
    """
    g = _order(gamma)
    chi = ReconstructionWavelet(g).value
    rest = term.exponent - g
    if not rest > 0:
        raise DomainError("the Beta reduction needs exponent > gamma")
    return chi * term.coeff * beta_fn(g, rest) * 2.0 * math.pi / gamma_fn(rest)


def reconstruct(F: PoleField, gamma, route: str = "direct") -> RadialProfile:
    """Radial profile whose order-gamma transform is the closed-form field ``F``.

    ``route="pipeline"`` obtains each coefficient from the Beta-function
    dilation integral and the Fourier pair instead of dividing by Gamma(e);
    it needs every exponent strictly above gamma.
    """
    if not isinstance(F, PoleField):
        raise TypeError("only closed-form pole fields can be reconstructed")
    g = _order(gamma)
    out = []
    for t in F.terms:
        if t.coeff == 0:
            continue
        term = invert_pole_term(t, g)
        if route == "pipeline":
            term = PowExpTerm(pipeline_coefficient(t, g), term.power, term.rate)
        elif route != "direct":
            raise DomainError(f"unknown reconstruction route {route!r}")
        out.append(term)
    return RadialProfile(tuple(out))


def direct_reconstruction(F, gamma, q: float, rel_tol: float = 1e-2) -> complex:
    """Reconstruct f(q) by brute-force quadrature over the half-plane.

    The b-integral is only conditionally convergent for slowly decaying
    fields, so it is taken as the symmetric limit lim_N int_{-N}^{N}, split
    into cosine and sine Fourier integrals on [0, inf) and handed to
    QUADPACK's Fourier-integral routine.  Intended as a loose cross-check of
    :func:`reconstruct`, not as a production path.
    """
    g = _order(gamma)
    q = float(q)
    if not q > 0:
        raise DomainError("reconstruction is defined for q > 0")
    chi = ReconstructionWavelet(g).value

    def fourier(a):
        def even(b, part):
            v = F(complex(b, -a)) + F(complex(-b, -a))
            return v.real if part == 0 else v.imag

        def odd(b, part):
            v = F(complex(b, -a)) - F(complex(-b, -a))
            return v.real if part == 0 else v.imag

        opts = dict(limlst=200, limit=200)
        c_re = integrate.quad(even, 0.0, np.inf, args=(0,), weight="cos", wvar=q, **opts)[0]
        c_im = integrate.quad(even, 0.0, np.inf, args=(1,), weight="cos", wvar=q, **opts)[0]
        s_re = integrate.quad(odd, 0.0, np.inf, args=(0,), weight="sin", wvar=q, **opts)[0]
        s_im = integrate.quad(odd, 0.0, np.inf, args=(1,), weight="sin", wvar=q, **opts)[0]
        # cos part + i * sin part
        return complex(c_re - s_im, c_im + s_re)

    def outer(a, part):
        v = fourier(a)
        return v.real if part == 0 else v.imag

    result = []
    for part in (0, 1):
        head, e1 = integrate.quad(outer, 0.0, 1.0, args=(part,), weight="alg",
                                  wvar=(g - 1.0, 0.0), epsrel=rel_tol * 0.1, limit=100)
        tail, e2 = integrate.quad(lambda a: a ** (g - 1.0) * outer(a, part), 1.0, np.inf,
                                  epsrel=rel_tol * 0.1, limit=100)
        result.append(head + tail)
    value = chi * complex(result[0], result[1])
    return value


def profile_deviation(f: RadialProfile, h: RadialProfile, q) -> float:
    """max over q of |f - h| / (|h| + eps * sum|terms of h|).

    The floor is the rounding scale of evaluating ``h`` term by term, so the
    measure stays meaningful at sign changes.
    """
    q = np.asarray(q, dtype=float)
    ref = h(q)
    scale = np.zeros(q.shape)
    for t in h.terms:
        scale = scale + np.abs(t(q))
    floor = np.finfo(float).eps * scale + np.finfo(float).tiny
    dev = np.abs(f(q) - ref) / (np.abs(ref) + floor)
    return float(np.max(dev)) if dev.size else 0.0


def default_q_grid():
    return np.geomspace(0.01, 20.0, 101)


def roundtrip_check(f: RadialProfile, gamma, q=None) -> float:
    """Max relative deviation of reconstruct(transform(f)) from f on a log grid."""
    g = _order(gamma)
    if q is None:
        q = default_q_grid()
    if f.is_zero:
        return 0.0
    back = reconstruct(transform_field(f, g), g)
    return profile_deviation(back, f, q)


def operator_image(F: PoleField, gamma, rtol: float = 1e-10, q=None) -> RadialProfile:
    """Radial preimage h of zbar dF/dzbar, checked against -(q d/dq + gamma + 1) f.

    Raises
    ------
    ConsistencyError
        If the two constructions of h differ by more than ``rtol``.
    """
    g = _order(gamma)
    if q is None:
        q = default_q_grid()
    h = reconstruct(F.euler(), g)
    f = reconstruct(F, g)
    expected = -(f.euler() + (g + 1.0) * f)
    if h.is_zero and expected.is_zero:
        return h
    dev = profile_deviation(h, expected, q)
    if dev > rtol:
        raise ConsistencyError(f"operator image disagrees by {dev:.3e}", dev)
    return h


def hypergeometric_field(n: int, gamma, rate: float = 1.0, degree_shift: int = 0) -> PoleField:
    """(rate + i zbar)^(-2g) 2F1(-m, 2g; 2g+1; 1/(rate + i zbar)) as pole terms, m = n - degree_shift.

    Each power of 1/(rate + i zbar) lifts the pole exponent by one, so the
    field is sum_k (-1)^k C(m,k) 2g/(2g+k) [i(zbar - i rate)]^(-(2g+k)).
    """
    g = _order(gamma)
    m = n - degree_shift
    if m < 0:
        raise DomainError("hypergeometric field needs a nonnegative degree")
    terms = []
    for k in range(m + 1):
        c = (-1) ** k * math.comb(m, k) * 2.0 * g / (2.0 * g + k)
        terms.append(PoleTerm(c, 2.0 * g + k, 1j * rate))
    return PoleField(tuple(terms), g)


def confluent_profile(n: int, gamma, rate: float = 1.0) -> RadialProfile:
    """(1/Gamma(2g)) q^(g-1) e^(-rate q) 1F1(-n; 2g+1; q) as a term list."""
    g = _order(gamma)
    lead = 1.0 / gamma_fn(2.0 * g)
    coef = hyp1f1_coefficients(n, 2.0 * g + 1.0)
    return RadialProfile(tuple(PowExpTerm(lead * a, g + k, rate) for k, a in enumerate(coef)))

