"""The half-line transform F(zbar) = int_0^inf exp(-i zbar q) q^gamma f(q) dq.

Radial profiles come in two flavours.  :class:`RadialProfile` is a finite sum
of power-exponential terms ``C q^(p-1) exp(-s q)`` and has an exact image, a
finite sum of pole terms ``C' [i(zbar - zbar0)]^(-e)`` (:class:`PoleField`).
:class:`SampledProfile` is a function known on a grid; its transform is
computed by quadrature along the real axis.

Conventions
-----------
* A half-plane point is ``z = b + i a`` with ``a > 0``; transforms are
  evaluated at ``zbar = b - i a``.
* A term with rate ``s`` (``Re s > 0``) maps to a pole at ``zbar0 = i s``, so
  that ``i (zbar - zbar0) = s + i zbar`` always has positive real part on the
  closed lower half-plane.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate
from scipy.interpolate import PchipInterpolator
from scipy.special import roots_jacobi

from .errors import AccuracyError, ConsistencyError, DomainError, HalfPlaneError
from .special import compensated_sum, gamma as gamma_fn, ln_gamma, principal_power

__all__ = [
    "HalfPlanePoint",
    "Regime",
    "TransformOrder",
    "PowExpTerm",
    "RadialProfile",
    "SampledProfile",
    "PoleTerm",
    "PoleField",
    "QuadratureField",
    "closed_form_transform",
    "transform_field",
    "forward_transform",
    "quadrature_transform",
    "real_axis_transform",
    "wavelet_coefficient",
    "derivative_field",
    "apply_euler_operator",
    "l2_norm_radial",
    "l2_inner_radial",
    "bergman_weighted_integral",
    "agamma_inner_product",
    "agamma_constant",
    "printed_agamma_constant",
    "decay_exponent_estimate",
    "rectangle_contour_integral",
]


# ---------------------------------------------------------------------------
# Points and orders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HalfPlanePoint:
    """Point ``z = b + i a`` of the upper half-plane (a > 0)."""

    b: float
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise HalfPlaneError(f"dilation a must be positive, got {self.a!r}")

    @property
    def z(self) -> complex:
        return complex(self.b, self.a)

    @property
    def zbar(self) -> complex:
        return complex(self.b, -self.a)


class Regime(str, Enum):
    ADMISSIBLE = "admissible"
    NON_ADMISSIBLE = "non-admissible"
    NON_SQUARE_INTEGRABLE = "non-square-integrable"


@dataclass(frozen=True)
class TransformOrder:
    """Order gamma > 0 of the analyzing wavelet q^(gamma-2) e^(-q).

    ``float(order)`` gives gamma, so an order can be passed wherever a plain
    float is accepted.
    """

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise DomainError(f"transform order must be positive, got {self.gamma!r}")

    def __float__(self):
        return float(self.gamma)

    @property
    def regime(self) -> Regime:
        if self.gamma > 1.0:
            return Regime.ADMISSIBLE
        if self.gamma > 0.5:
            return Regime.NON_ADMISSIBLE
        return Regime.NON_SQUARE_INTEGRABLE


def _order(gamma) -> float:
    g = float(gamma)
    if not g > 0:
        raise DomainError(f"transform order must be positive, got {g!r}")
    return g


def _check_lower(zbar):
    if np.any(np.imag(zbar) >= 0):
        raise HalfPlaneError("transform argument must satisfy Im(zbar) < 0")


# ---------------------------------------------------------------------------
# Radial profiles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowExpTerm:
    """One term ``coeff * q**(power - 1) * exp(-rate * q)``."""

    coeff: complex
    power: float
    rate: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "power", float(self.power))
        object.__setattr__(self, "rate", complex(self.rate))
        if not self.rate.real > 0:
            raise DomainError(f"decay rate needs Re(s) > 0, got {self.rate!r}")
        if not math.isfinite(self.power):
            raise DomainError("term power must be finite")

    def __call__(self, q):
        q = np.asarray(q)
        if np.iscomplexobj(q):
            return self.coeff * principal_power(q, self.power - 1.0) * np.exp(-self.rate * q)
        return self.coeff * q ** (self.power - 1.0) * np.exp(-self.rate * q)


@dataclass(frozen=True)
class RadialProfile:
    """Finite sum of :class:`PowExpTerm` terms; the zero profile has no terms."""

    terms: tuple[PowExpTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    @classmethod
    def single(cls, coeff=1.0, power=1.0, rate=1.0) -> "RadialProfile":
        return cls((PowExpTerm(coeff, power, rate),))

    @classmethod
    def family_member(cls, alpha: float, n: int) -> "RadialProfile":
        """psi_n(q) = q^(alpha - 1 + n) e^(-q), the dense family used for isometry checks."""
        return cls.single(1.0, alpha + n, 1.0)

    def __call__(self, q):
        q = np.asarray(q)
        out = np.zeros(q.shape, dtype=complex)
        for t in self.terms:
            out = out + t(q)
        if out.ndim == 0:
            return complex(out)
        return out

    def __add__(self, other):
        if not isinstance(other, RadialProfile):
            return NotImplemented
        return RadialProfile(self.terms + other.terms)

    def __mul__(self, c):
        c = complex(c)
        return RadialProfile(tuple(PowExpTerm(c * t.coeff, t.power, t.rate) for t in self.terms))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    @property
    def is_zero(self) -> bool:
        return all(t.coeff == 0 for t in self.terms)

    def simplify(self) -> "RadialProfile":
        """Merge terms with equal power and rate; drop zero coefficients."""
        merged: dict[tuple[float, complex], complex] = {}
        for t in self.terms:
            key = (t.power, t.rate)
            merged[key] = merged.get(key, 0.0) + t.coeff
        return RadialProfile(
            tuple(PowExpTerm(c, p, s) for (p, s), c in merged.items() if c != 0)
        )

    def euler(self) -> "RadialProfile":
        """The profile q f'(q), by exact term-wise differentiation."""
        out = []
        for t in self.terms:
            out.append(PowExpTerm(t.coeff * (t.power - 1.0), t.power, t.rate))
            out.append(PowExpTerm(-t.coeff * t.rate, t.power + 1.0, t.rate))
        return RadialProfile(tuple(o for o in out if o.coeff != 0))

    def times_q(self) -> "RadialProfile":
        return RadialProfile(tuple(PowExpTerm(t.coeff, t.power + 1.0, t.rate) for t in self.terms))

    def derivative(self) -> "RadialProfile":
        """f'(q) as a term list."""
        out = []
        for t in self.terms:
            out.append(PowExpTerm(t.coeff * (t.power - 1.0), t.power - 1.0, t.rate))
            out.append(PowExpTerm(-t.coeff * t.rate, t.power, t.rate))
        return RadialProfile(tuple(o for o in out if o.coeff != 0))

    @property
    def min_power(self) -> float:
        live = [t.power for t in self.terms if t.coeff != 0]
        return min(live) if live else math.inf


@dataclass(frozen=True, eq=False)
class SampledProfile:
    """A radial function known on a strictly increasing positive grid.

    Between nodes the real and imaginary parts are interpolated by monotone
    cubics.  Below the first node the profile is continued as
    ``f_1 (q/q_1)^(p0 - 1)`` with the assumed endpoint power ``p0``; beyond the
    last node as ``f_N exp(-kappa (q - q_N))``.  Both ``p0`` and ``kappa`` are
    estimated from the outermost sample pairs when not given.
    """

    q: np.ndarray
    values: np.ndarray
    endpoint_power: float | None = None
    tail_rate: float | None = None
    _re: PchipInterpolator = field(init=False, repr=False)
    _im: PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if q.ndim != 1 or q.shape != v.shape or q.size < 3:
            raise DomainError("sampled profile needs matching 1-d grids of at least 3 points")
        if not q[0] > 0 or np.any(np.diff(q) <= 0):
            raise DomainError("sample grid must be strictly increasing with q_1 > 0")
        p0 = self.endpoint_power
        if p0 is None:
            if v[0] == 0 or v[1] == 0:
                p0 = 1.0
            else:
                p0 = 1.0 + math.log(abs(v[1] / v[0])) / math.log(q[1] / q[0])
        kappa = self.tail_rate
        if kappa is None:
            if v[-1] == 0 or v[-2] == 0:
                kappa = 0.0
            else:
                kappa = max(math.log(abs(v[-2] / v[-1])) / (q[-1] - q[-2]), 0.0)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "endpoint_power", float(p0))
        object.__setattr__(self, "tail_rate", float(kappa))
        object.__setattr__(self, "_re", PchipInterpolator(q, v.real, extrapolate=False))
        object.__setattr__(self, "_im", PchipInterpolator(q, v.imag, extrapolate=False))

    @classmethod
    def from_function(cls, func, q, **kwargs) -> "SampledProfile":
        q = np.asarray(q, dtype=float)
        return cls(q, np.asarray(func(q), dtype=complex), **kwargs)

    def __call__(self, q):
        q = np.asarray(q, dtype=float)
        out = np.empty(q.shape, dtype=complex)
        q1, qn = self.q[0], self.q[-1]
        head = q < q1
        tail = q > qn
        mid = ~(head | tail)
        out[head] = self.values[0] * (q[head] / q1) ** (self.endpoint_power - 1.0)
        out[tail] = self.values[-1] * np.exp(-self.tail_rate * (q[tail] - qn))
        out[mid] = self._re(q[mid]) + 1j * self._im(q[mid])
        if out.ndim == 0:
            return complex(out)
        return out

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)


Profile = Union[RadialProfile, SampledProfile]


# ---------------------------------------------------------------------------
# Coefficient fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PoleTerm:
    """``coeff * [i (zbar - pole)]^(-exponent)`` with ``Im pole > 0``."""

    coeff: complex
    exponent: float
    pole: complex = 1j

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "exponent", float(self.exponent))
        object.__setattr__(self, "pole", complex(self.pole))
        if not self.pole.imag > 0:
            raise DomainError(f"pole must lie in the upper half-plane, got {self.pole!r}")
        if not self.exponent > 0:
            raise DomainError("pole exponent must be positive")

    def base(self, zbar):
        return 1j * (np.asarray(zbar, dtype=complex) - self.pole)

    def __call__(self, zbar):
        return self.coeff * principal_power(self.base(zbar), -self.exponent)


@dataclass(frozen=True)
class PoleField:
    """Closed-form coefficient field: a finite sum of :class:`PoleTerm`.

    ``order`` records the transform order the field was produced under, if
    any.  Instances are immutable and safe to share between threads.
    """

    terms: tuple[PoleTerm, ...] = ()
    order: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.order is not None:
            for t in self.terms:
                if t.exponent < self.order - 1e-12 and t.coeff != 0:
                    raise DomainError(
                        f"pole exponent {t.exponent} below the field order {self.order}"
                    )

    def __call__(self, zbar):
        zbar = np.asarray(zbar, dtype=complex)
        out = np.zeros(zbar.shape, dtype=complex)
        for t in self.terms:
            out = out + t(zbar)
        if out.ndim == 0:
            return complex(out)
        return out

    def __add__(self, other):
        if not isinstance(other, PoleField):
            return NotImplemented
        order = None
        if self.order is not None and other.order is not None and self.order == other.order:
            order = self.order
        return PoleField(self.terms + other.terms, order)

    def __mul__(self, c):
        c = complex(c)
        return PoleField(tuple(PoleTerm(c * t.coeff, t.exponent, t.pole) for t in self.terms), self.order)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return all(t.coeff == 0 for t in self.terms)

    def combined(self) -> "PoleField":
        """Merge terms sharing exponent and pole, ordered by exponent."""
        acc: dict[tuple[float, complex], complex] = {}
        for t in self.terms:
            key = (round(t.exponent, 12), complex(t.pole))
            acc[key] = acc.get(key, 0j) + t.coeff
        merged = [PoleTerm(c, e, pole) for (e, pole), c in sorted(acc.items(), key=lambda kv: kv[0][0])]
        return PoleField(tuple(merged), self.order)

    @property
    def slowest_exponent(self) -> float:
        live = [t.exponent for t in self.terms if t.coeff != 0]
        return min(live) if live else math.inf

    def derivative(self) -> "PoleField":
        """d/dzbar, term-wise: -i e C [i(zbar - pole)]^(-e-1)."""
        return PoleField(
            tuple(PoleTerm(-1j * t.exponent * t.coeff, t.exponent + 1.0, t.pole) for t in self.terms)
        )

    def euler(self) -> "PoleField":
        """zbar d/dzbar as a pole field.

        With w = i(zbar - pole), zbar = pole - i w, so
        zbar d/dzbar C w^(-e) = -e C w^(-e) - i e C pole w^(-e-1).
        """
        out = []
        for t in self.terms:
            out.append(PoleTerm(-t.exponent * t.coeff, t.exponent, t.pole))
            out.append(PoleTerm(-1j * t.exponent * t.coeff * t.pole, t.exponent + 1.0, t.pole))
        return PoleField(tuple(o for o in out if o.coeff != 0), self.order)


class QuadratureField:
    """Coefficient field evaluated on demand by quadrature of a stored profile."""

    def __init__(self, profile: Profile, gamma, rel_tol: float = 1e-10):
        self.profile = profile
        self.gamma = _order(gamma)
        self.rel_tol = rel_tol

    def __call__(self, zbar):
        zarr = np.asarray(zbar, dtype=complex)
        flat = [
            forward_transform(self.profile, self.gamma, z, method="quadrature", rel_tol=self.rel_tol)
            for z in zarr.ravel()
        ]
        out = np.asarray(flat, dtype=complex).reshape(zarr.shape)
        if out.ndim == 0:
            return complex(out)
        return out

    def derivative(self) -> "QuadratureField":
        # d/dzbar L^g f = -i L^(g+1) f
        return _ScaledField(-1j, QuadratureField(self.profile, self.gamma + 1.0, self.rel_tol))


class _ScaledField:
    def __init__(self, scale, inner):
        self.scale = scale
        self.inner = inner

    def __call__(self, zbar):
        return self.scale * self.inner(zbar)


CoefficientField = Union[PoleField, QuadratureField]


# ---------------------------------------------------------------------------
# Forward transform
# ---------------------------------------------------------------------------

def closed_form_transform(term: PowExpTerm, gamma) -> PoleTerm:
    """Exact image of one term: ``C q^(p-1) e^(-s q) -> C Gamma(g+p) [s + i zbar]^(-(g+p))``."""
    g = _order(gamma)
    e = g + term.power
    if not e > 0:
        raise DomainError(f"q^gamma f is not integrable at 0 (gamma + p = {e})")
    return PoleTerm(term.coeff * gamma_fn(e), e, 1j * term.rate)


def transform_field(f: Profile, gamma) -> CoefficientField:
    """Coefficient field of a profile: closed form for term lists."""
    g = _order(gamma)
    if isinstance(f, RadialProfile):
        return PoleField(tuple(closed_form_transform(t, g) for t in f.terms if t.coeff != 0), g)
    return QuadratureField(f, g)


def forward_transform(f: Profile, gamma, zbar, method: str = "auto", rel_tol: float = 1e-10):
    """F(zbar) = int_0^inf exp(-i zbar q) q^gamma f(q) dq.

    Parameters
    ----------
    f : RadialProfile or SampledProfile
    gamma : float or TransformOrder
    zbar : complex (or array of complex for the closed-form route)
        Must lie in the open lower half-plane.
    method : {"auto", "closed", "quadrature", "real-axis"}
        ``auto`` uses the closed form for term lists and real-axis quadrature
        for sampled profiles.  ``quadrature`` on a term list integrates along
        a rotated ray in the complex q-plane (no gamma-function values used).
    """
    g = _order(gamma)
    _check_lower(zbar)
    if isinstance(f, RadialProfile):
        for t in f.terms:
            if t.coeff != 0 and not g + t.power > 0:
                raise DomainError(f"q^gamma f is not integrable at 0 (gamma + p = {g + t.power})")
        if f.is_zero:
            return 0j if np.ndim(zbar) == 0 else np.zeros(np.shape(zbar), dtype=complex)
        if method in ("auto", "closed"):
            return transform_field(f, g)(zbar)
        if method == "quadrature":
            return _vectorize(lambda z: quadrature_transform(f, g, z, rel_tol), zbar)
        if method == "real-axis":
            return _vectorize(lambda z: _term_real_axis(f, g, z), zbar)
        raise DomainError(f"unknown transform method {method!r}")
    if isinstance(f, SampledProfile):
        if method == "closed":
            raise DomainError("sampled profiles have no closed-form transform")
        if not g + f.endpoint_power > 0:
            raise DomainError("q^gamma f is not integrable at 0 for the assumed endpoint power")
        if f.is_zero:
            return 0j if np.ndim(zbar) == 0 else np.zeros(np.shape(zbar), dtype=complex)
        return _vectorize(lambda z: _sampled_real_axis(f, g, z), zbar)
    raise TypeError(f"unsupported profile type {type(f).__name__}")


def _vectorize(fn, zbar):
    zarr = np.asarray(zbar, dtype=complex)
    if zarr.ndim == 0:
        return complex(fn(complex(zarr)))
    return np.asarray([fn(complex(z)) for z in zarr.ravel()], dtype=complex).reshape(zarr.shape)


def quadrature_transform(f: RadialProfile, gamma, zbar, rel_tol: float = 1e-10) -> complex:
    """Transform of a term list by adaptive quadrature on a rotated ray.

    The integrand extends analytically to Re q > 0, so the ray q = t e^{i psi}
    may replace the positive axis whenever every exponent c_k = s_k + i zbar
    keeps Re(c_k e^{i psi}) > 0.  psi is chosen to centre the arguments of the
    c_k, which removes the exp(-i b q) oscillation and with it the
    cancellation that makes real-axis quadrature useless for large |b|.
    """
    g = _order(gamma)
    zbar = complex(zbar)
    _check_lower(zbar)
    live = [t for t in f.terms if t.coeff != 0]
    if not live:
        return 0j
    c = np.array([t.rate + 1j * zbar for t in live])
    args = np.angle(c)
    psi = -0.5 * (args.max() + args.min())
    rot = np.exp(1j * psi)
    kappa = (c * rot).real
    if np.any(kappa <= 0):
        raise AccuracyError("no common descent ray for the profile's exponents")
    pmin = min(t.power for t in live)
    beta = g + pmin - 1.0
    coeffs = np.array([t.coeff * np.exp(1j * psi * (g + t.power - 1.0)) for t in live]) * rot
    dp = np.array([t.power - pmin for t in live])
    crot = c * rot

    def smooth(t):
        # integrand divided by t^beta
        return np.sum(coeffs * t ** dp * np.exp(-crot * t))

    def as_vec(v):
        return np.array([v.real, v.imag])

    split = 1.0 / kappa.min()
    if beta < 0:
        # t = split * v^(1/(beta+1)) absorbs the endpoint singularity
        k = beta + 1.0
        head, herr = integrate.quad_vec(
            lambda v: as_vec(smooth(split * v ** (1.0 / k))), 0.0, 1.0,
            epsabs=0.0, epsrel=rel_tol * 0.01, norm="max", limit=400,
        )
        head = head * split ** k / k
        herr = herr * split ** k / k
    else:
        head, herr = integrate.quad_vec(
            lambda t: as_vec(t ** beta * smooth(t)), 0.0, split,
            epsabs=0.0, epsrel=rel_tol * 0.01, norm="max", limit=400,
        )
    tail, terr = integrate.quad_vec(
        lambda t: as_vec(t ** beta * smooth(t)), split, np.inf,
        epsabs=0.0, epsrel=rel_tol * 0.01, norm="max", limit=400,
    )
    total = head + tail
    scale = np.max(np.abs(total))
    if herr + terr > rel_tol * scale:
        raise AccuracyError("rotated-ray quadrature missed its tolerance", (herr + terr) / scale)
    return complex(total[0], total[1])


# Gauss-Legendre rule on [0, 1] used for every fixed panel.
_HEAD_NODES = 40
_GL_X, _GL_W = leggauss(24)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _panel_sum(func, edges):
    """Fixed Gauss-Legendre panels between consecutive ``edges``."""
    edges = np.asarray(edges, dtype=float)
    lo = edges[:-1, None]
    width = np.diff(edges)[:, None]
    nodes = lo + width * _GL_X[None, :]
    vals = func(nodes.ravel()).reshape(nodes.shape)
    return complex(np.sum(vals * (width * _GL_W[None, :])))


def _refine(knots, max_width, max_ratio=1.5):
    """Subdivide knot intervals to width <= max_width and ratio <= max_ratio."""
    out = [knots[0]]
    for lo, hi in zip(knots[:-1], knots[1:]):
        pieces = max(1, math.ceil((hi - lo) / max_width))
        if lo > 0:
            pieces = max(pieces, math.ceil(math.log(hi / lo) / math.log(max_ratio)))
        out.extend(np.linspace(lo, hi, pieces + 1)[1:])
    return np.asarray(out)


def real_axis_transform(func: Callable, gamma, zbar, endpoint_power: float, knots: Sequence[float],
                        tail_rate: float = 0.0) -> complex:
    """Transform of a callable radial function by real-axis quadrature.

    ``knots`` is an increasing sequence of positive abscissae.  The piece
    [0, knots[0]] uses Gauss-Jacobi nodes for the weight q^(gamma + p0 - 1),
    so the endpoint singularity is integrated exactly and the oscillating
    factor stays smooth.  The middle uses fixed Gauss-Legendre panels of width
    at most pi/|b|, and the tail runs until the majorant
    exp(-(a + tail_rate) (Q - q_N)) drops below 1e-13.
    """
    g = _order(gamma)
    zbar = complex(zbar)
    _check_lower(zbar)
    c = 1j * zbar  # exp(-i zbar q) = exp(-c q), Re c = a > 0
    beta = g + endpoint_power
    if not beta > 0:
        raise DomainError("q^gamma f is not integrable at 0 for the given endpoint power")
    knots = np.asarray(knots, dtype=float)
    q1 = knots[0]

    # q^g f = q^(beta-1) q1^(1-p0) r(q) with r = f / (q/q1)^(p0-1) smooth at 0
    x, w = roots_jacobi(_HEAD_NODES, 0.0, beta - 1.0)
    q = 0.5 * q1 * (1.0 + x)
    ratio = func(q) / (q / q1) ** (endpoint_power - 1.0)
    head = (0.5 * q1) ** beta * q1 ** (1.0 - endpoint_power) * complex(np.sum(w * ratio * np.exp(-c * q)))

    b = abs(zbar.real)
    max_width = math.pi / b if b > 0 else math.inf
    max_width = min(max_width, 1.0 / max(c.real, 1e-300))

    def body(q):
        return q ** g * func(q) * np.exp(-c * q)

    mid_edges = _refine(knots, max_width)
    middle = _panel_sum(body, mid_edges) if mid_edges.size > 1 else 0j

    decay = c.real + tail_rate
    q_end = knots[-1] + (30.0 + g * math.log1p(knots[-1] * decay)) / decay
    tail_edges = _refine(np.array([knots[-1], q_end]), max_width)
    tail = _panel_sum(body, tail_edges)
    return head + middle + tail


def _sampled_real_axis(f: SampledProfile, gamma, zbar) -> complex:
    return real_axis_transform(f, gamma, zbar, f.endpoint_power, f.q, f.tail_rate)


def _term_real_axis(f: RadialProfile, gamma, zbar) -> complex:
    live = [t for t in f.terms if t.coeff != 0]
    decay = min(t.rate.real for t in live)
    head = min(0.05, 0.5 / abs(1j * complex(zbar) + decay))
    # integrand below exp(-36) of its scale beyond q_end
    pmax = max(t.power for t in live)
    q_end = (36.0 + (gamma + pmax) * math.log1p((gamma + pmax) / decay)) / decay
    knots = np.geomspace(head, q_end, 60)
    return real_axis_transform(f, gamma, zbar, f.min_power, knots, tail_rate=decay)


def wavelet_coefficient(f: Profile, gamma, z: HalfPlanePoint, method: str = "auto"):
    """a^(gamma - 1/2) F(zbar), the coefficient against the dilated, translated wavelet."""
    g = _order(gamma)
    return z.a ** (g - 0.5) * forward_transform(f, g, z.zbar, method=method)


def derivative_field(f: Profile, gamma, zbar, method: str = "auto"):
    """d F / d zbar = -i L^(gamma+1) f at ``zbar``."""
    g = _order(gamma)
    return -1j * forward_transform(f, g + 1.0, zbar, method=method)


def apply_euler_operator(f: RadialProfile, gamma, zbar, rtol: float = 1e-10):
    """L^gamma[q f'(q)](zbar), computed directly and as -(zbar d/dzbar + gamma + 1) F.

    Raises
    ------
    ConsistencyError
        If the two routes differ by more than ``rtol`` relative.
    """
    if not isinstance(f, RadialProfile):
        raise TypeError("the Euler-operator map needs a term-list profile")
    g = _order(gamma)
    _check_lower(zbar)
    direct = forward_transform(f.euler(), g, zbar)
    via_field = -(np.asarray(zbar) * derivative_field(f, g, zbar) + (g + 1.0) * forward_transform(f, g, zbar))
    dev = np.max(np.abs(direct - via_field))
    scale = max(np.max(np.abs(direct)), np.max(np.abs(via_field)))
    if dev > rtol * scale and dev > 1e-300:
        raise ConsistencyError(f"Euler-operator routes disagree: {dev / scale:.3e} relative", dev / scale)
    return direct


# ---------------------------------------------------------------------------
# Norms and half-plane integrals
# ---------------------------------------------------------------------------

def l2_inner_radial(f: Profile, g: Profile) -> complex:
    """int_0^inf q^2 conj(f) g dq, in closed form for term lists."""
    if isinstance(f, RadialProfile) and isinstance(g, RadialProfile):
        parts = []
        for tf in f.terms:
            for tg in g.terms:
                if tf.coeff == 0 or tg.coeff == 0:
                    continue
                e = tf.power + tg.power + 1.0
                if not e > 0:
                    raise DomainError("q^2 |f|^2 is not integrable at 0")
                rate = np.conj(tf.rate) + tg.rate
                lg = ln_gamma(e) - e * np.log(complex(rate))
                parts.append(np.conj(tf.coeff) * tg.coeff * np.exp(lg))
        return complex(compensated_sum(parts)) if parts else 0j
    return _sampled_inner(f, g)


def _grid_of(f):
    if isinstance(f, SampledProfile):
        return f.q
    return None


def _sampled_inner(f, g) -> complex:
    grids = [x for x in (_grid_of(f), _grid_of(g)) if x is not None]
    knots = np.unique(np.concatenate(grids))
    q1 = knots[0]
    powers = []
    for prof in (f, g):
        powers.append(prof.endpoint_power if isinstance(prof, SampledProfile) else prof.min_power)
    e = powers[0] + powers[1] + 1.0
    if not e > 0:
        raise DomainError("q^2 |f|^2 is not integrable at 0")

    def body(q):
        return q ** 2 * np.conj(f(q)) * g(q)

    # head: integrand ~ q^(e-1); substitute q = q1 v^(1/e)
    v = _GL_X
    qh = q1 * v ** (1.0 / e)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = body(qh) / (qh / q1) ** (e - 1.0)
    head = q1 / e * complex(np.sum(ratio * _GL_W))
    middle = _panel_sum(body, _refine(knots, math.inf))
    rates = [prof.tail_rate if isinstance(prof, SampledProfile) else min(t.rate.real for t in prof.terms)
             for prof in (f, g)]
    decay = sum(rates)
    if not decay > 0:
        raise DomainError("profile does not decay beyond its grid; L2 norm diverges")
    q_end = knots[-1] + (36.0 + 2.0 * math.log1p(knots[-1] * decay)) / decay
    tail = _panel_sum(body, _refine(np.array([knots[-1], q_end]), 1.0 / decay))
    return head + middle + tail


def l2_norm_radial(f: Profile) -> float:
    """int_0^inf q^2 |f(q)|^2 dq."""
    if isinstance(f, RadialProfile) and f.is_zero:
        return 0.0
    return float(l2_inner_radial(f, f).real)


def agamma_constant(gamma) -> float:
    """2 pi Gamma(2 gamma) / 2^(2 gamma): the norm ratio of the pre-Hilbert product.

    This is the admissible-order constant with gamma -> gamma + 1, i.e.
    <L f | L g> = agamma_constant(gamma) * (f, g).
    """
    g = _order(gamma)
    return 2.0 * math.pi * gamma_fn(2.0 * g) / 2.0 ** (2.0 * g)


def printed_agamma_constant(gamma) -> float:
    """2 pi Gamma(2 gamma - 2) / 2^(2 gamma - 2), the unshifted variant.

    Infinite at gamma = 1 and gamma = 1/2, negative for 1/2 < gamma < 1.
    """
    g = _order(gamma)
    x = 2.0 * g - 2.0
    if x <= 0 and float(x).is_integer():
        return math.inf
    return 2.0 * math.pi * math.gamma(x) / 2.0 ** x


def _derivative_field_of(f: Profile, gamma):
    field_ = transform_field(f, gamma)
    return field_.derivative()


def _half_plane_integral(integrand_ab, weight_exp, rel_tol, label):
    """int_0^inf da a^weight_exp int_R db integrand(a, b), both by QUADPACK.

    The b-integral runs over the whole line; the a-integral starts at 0 with
    the algebraic weight handled exactly on [0, 1].
    """
    errs = []

    def inner(a):
        val, err = integrate.quad(lambda b: integrand_ab(a, b), -np.inf, np.inf,
                                  epsabs=0.0, epsrel=rel_tol * 0.01, limit=400)
        errs.append(abs(err))
        return val

    head, herr = integrate.quad(inner, 0.0, 1.0, weight="alg", wvar=(weight_exp, 0.0),
                                epsabs=0.0, epsrel=rel_tol * 0.1, limit=200)
    tail, terr = integrate.quad(lambda a: a ** weight_exp * inner(a), 1.0, np.inf,
                                epsabs=0.0, epsrel=rel_tol * 0.1, limit=200)
    total = head + tail
    bound = herr + terr
    if total != 0 and bound > rel_tol * abs(total):
        raise AccuracyError(f"{label}: half-plane quadrature missed tolerance", bound / abs(total))
    return total


def bergman_weighted_integral(f: Profile, gamma, rel_tol: float = 1e-6) -> float:
    """c * int dmu_L (Im z)^(2 gamma + 1) |dF/dzbar|^2 with c = 2^(2g)/(2 pi Gamma(2g)).

    dmu_L = da db / a^2 is the left-invariant measure, so the net power of a is
    2 gamma - 1.  By the isometry of the admissible order gamma + 1 this equals
    :func:`l2_norm_radial`.
    """
    g = _order(gamma)
    if isinstance(f, RadialProfile) and f.is_zero:
        return 0.0
    dF = _derivative_field_of(f, g)

    def integrand(a, b):
        return abs(dF(complex(b, -a))) ** 2

    raw = _half_plane_integral(integrand, 2.0 * g - 1.0, rel_tol, "bergman_weighted_integral")
    return raw / agamma_constant(g)


def agamma_inner_product(f: Profile, h: Profile, gamma, rel_tol: float = 1e-6) -> complex:
    """<L f | L h> = int dmu_L (Im z)^(2 gamma + 1) conj(dF) dH, without normalisation."""
    g = _order(gamma)
    if (isinstance(f, RadialProfile) and f.is_zero) or (isinstance(h, RadialProfile) and h.is_zero):
        return 0j
    dF = _derivative_field_of(f, g)
    dH = _derivative_field_of(h, g)

    def product(a, b):
        zb = complex(b, -a)
        return np.conj(dF(zb)) * dH(zb)

    re = _half_plane_integral(lambda a, b: product(a, b).real, 2.0 * g - 1.0, rel_tol, "agamma re")
    if f is h:
        return complex(re, 0.0)
    im = _half_plane_integral(lambda a, b: product(a, b).imag, 2.0 * g - 1.0, rel_tol, "agamma im") \
        if _has_imag(dF, dH) else 0.0
    return complex(re, im)


def _has_imag(dF, dH) -> bool:
    probe = [complex(0.3, -0.7), complex(-1.1, -2.0), complex(2.5, -0.4)]
    return any(abs((np.conj(dF(z)) * dH(z)).imag) > 0 for z in probe)


# ---------------------------------------------------------------------------
# Field diagnostics
# ---------------------------------------------------------------------------

def _magnitude(value) -> float:
    return float(np.sqrt(np.sum(np.abs(np.asarray(value)) ** 2)))


def decay_exponent_estimate(field_: Callable, theta: float, r_min: float = 1e2,
                            r_max: float = 1e4, num: int = 41) -> float:
    """Least-squares slope of log|F| against log r along the ray zbar = r e^{i theta}.

    ``field_`` may return a scalar or a component vector (its Euclidean norm is
    used).  ``theta`` must lie in [-pi, 0]; points with Im zbar = 0 are allowed
    for closed-form fields.
    """
    if not -math.pi <= theta <= 0:
        raise DomainError("ray angle must lie in the closed lower half-plane")
    r = np.geomspace(r_min, r_max, num)
    mags = np.array([_magnitude(field_(complex(rr * math.cos(theta), rr * math.sin(theta)))) for rr in r])
    if np.any(mags <= 0) or not np.all(np.isfinite(mags)):
        raise AccuracyError("field vanishes or overflows along the ray")
    x, y = np.log(r), np.log(mags)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    if slope >= 0 or np.sqrt(np.mean(resid ** 2)) > 0.05:
        raise AccuracyError(f"no clean power-law decay along the ray (slope {slope:.3g})")
    return float(slope)


def rectangle_contour_integral(field_: Callable, b_range: tuple[float, float],
                               a_range: tuple[float, float], nodes: int = 48):
    """Contour integral of ``field_`` around the rectangle
    Re zbar in b_range, -Im zbar in a_range, counter-clockwise.

    Returns ``(integral, perimeter, max_abs)`` so callers can test
    |integral| <= tol * perimeter * max_abs.
    """
    b0, b1 = b_range
    a0, a1 = a_range
    corners = [complex(b0, -a1), complex(b1, -a1), complex(b1, -a0), complex(b0, -a0)]
    x, w = leggauss(nodes)
    total = 0j
    peak = 0.0
    perimeter = 0.0
    for start, end in zip(corners, corners[1:] + corners[:1]):
        half = 0.5 * (end - start)
        pts = start + half * (x + 1.0)
        vals = np.asarray(field_(pts), dtype=complex)
        total += complex(np.sum(vals * w) * half)
        peak = max(peak, float(np.max(np.abs(vals))))
        perimeter += abs(end - start)
    return total, perimeter, peak
