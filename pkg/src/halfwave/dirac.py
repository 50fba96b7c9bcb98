"""Bound states of the radial Dirac equation for hydrogen-like atoms.

The radial variable is q = 2 r sqrt(m^2 - eps^2) and energies are quoted as
eps/m.  The radial system solved is

    (q d/dq + 1 + kappa) f - ((q/2) R+ + lam) g = 0
    (q d/dq + 1 - kappa) g - ((q/2) R- - lam) f = 0,

with R+ = sqrt((m+eps)/(m-eps)), R- = 1/R+ and lam = N * alpha.  Transforming
with order gamma = sqrt(kappa^2 - lam^2) turns it into a first-order system
with simple poles at zbar = +-i/2, whose analytic solutions exist only at the
quantised energies and are terminating hypergeometric polynomials.

Bound states below are built with the pole at i/2 (radial decay e^{-q/2}).
Passing ``rate=1.0`` to :func:`phi_closed` or :func:`radial_eigenfunction`
reproduces the typeset closed forms with (1 + i zbar) and e^{-q}; those do not
satisfy the system above and exist only for comparison.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import ConsistencyError, DomainError, PathError, SupercriticalError, UnphysicalStateError
from .inverse import confluent_profile, hypergeometric_field
from .special import hyp2f1_terminating, principal_power
from .transform import PoleField, RadialProfile, TransformOrder, l2_norm_radial

logger = logging.getLogger(__name__)

__all__ = [
    "ALPHA_FS",
    "PHYSICAL_RATE",
    "kappa_from_jl",
    "jl_from_kappa",
    "QuantumState",
    "CouplingParams",
    "coupling",
    "DiracMatrices",
    "build_matrices",
    "phi_closed",
    "phi_fields",
    "phi_integral",
    "integral_constant",
    "path_clearance",
    "decay_window",
    "RadialSpinor",
    "radial_eigenfunction",
    "ode_residual",
    "ode_residual_profile",
    "SpectralLine",
    "spectrum_table",
    "nonrelativistic_limit_check",
    "small_q_exponent",
]

ALPHA_FS = 7.2973525693e-3  # CODATA 2018
PHYSICAL_RATE = 0.5  # poles of the transformed system sit at zbar = +- i/2

_LETTERS = "SPDFGHIKLMNOQRTUV"


def kappa_from_jl(j, l) -> int:
    """kappa = +(j + 1/2) for j = l - 1/2 and -(j + 1/2) for j = l + 1/2."""
    j = Fraction(j).limit_denominator(2)
    l = Fraction(l)
    if j < Fraction(1, 2) or j.denominator != 2 or l.denominator != 1 or l < 0:
        raise DomainError(f"invalid angular momenta j={j}, l={l}")
    if j == l - Fraction(1, 2):
        return int(j + Fraction(1, 2))
    if j == l + Fraction(1, 2):
        return -int(j + Fraction(1, 2))
    raise DomainError(f"|j - l| must be 1/2, got j={j}, l={l}")


def jl_from_kappa(kappa: int) -> tuple[Fraction, int]:
    if kappa == 0 or int(kappa) != kappa:
        raise DomainError("kappa must be a nonzero integer")
    j = Fraction(abs(kappa)) - Fraction(1, 2)
    l = int(j + Fraction(1, 2)) if kappa > 0 else int(j - Fraction(1, 2))
    return j, l


@dataclass(frozen=True)
class QuantumState:
    """A bound state (N, kappa, n) of a hydrogen-like ion.

    ``n`` is the radial index (number of analytic-continuation steps above the
    ground state for this kappa); the principal quantum number is n + |kappa|.
    """

    protons: int
    kappa: int
    n: int
    alpha_fs: float = ALPHA_FS

    def __post_init__(self):
        if self.protons < 1 or int(self.protons) != self.protons:
            raise DomainError("proton count must be a positive integer")
        if self.kappa == 0 or int(self.kappa) != self.kappa:
            raise DomainError("kappa must be a nonzero integer")
        if self.n < 0 or int(self.n) != self.n:
            raise DomainError("radial index must be a nonnegative integer")
        if self.n == 0 and self.kappa > 0:
            raise UnphysicalStateError(
                f"n=0 with kappa={self.kappa} > 0 is not a bound state "
                "(its second hypergeometric term does not terminate)"
            )
        if self.lam >= abs(self.kappa):
            raise SupercriticalError(
                f"lambda = {self.lam:.6g} >= |kappa| = {abs(self.kappa)}: no real gamma"
            )

    @classmethod
    def from_jl(cls, protons, j, l, n, alpha_fs=ALPHA_FS) -> "QuantumState":
        return cls(protons, kappa_from_jl(j, l), n, alpha_fs)

    @property
    def lam(self) -> float:
        return self.protons * self.alpha_fs

    @property
    def j(self) -> Fraction:
        return jl_from_kappa(self.kappa)[0]

    @property
    def l(self) -> int:
        return jl_from_kappa(self.kappa)[1]

    @property
    def principal(self) -> int:
        return self.n + abs(self.kappa)

    @property
    def label(self) -> str:
        return f"{self.principal}{_LETTERS[self.l]}{self.j}"


@dataclass(frozen=True)
class CouplingParams:
    """Parameter bundle for one Dirac problem, energies in units of m.

    ``one_minus_energy`` carries 1 - eps/m separately because for light ions
    it is ~1e-5 and cannot be recovered from ``energy`` without losing digits.
    """

    lam: float
    kappa: int
    gamma: float
    energy: float
    one_minus_energy: float
    n: int | None = None

    @classmethod
    def at_energy(cls, lam: float, kappa: int, energy: float,
                  one_minus_energy: float | None = None, n: int | None = None) -> "CouplingParams":
        """Parameters at an arbitrary (not necessarily quantised) energy 0 < eps/m < 1."""
        if not 0 < energy < 1:
            raise DomainError(f"bound states need 0 < eps/m < 1, got {energy!r}")
        if not lam < abs(kappa):
            raise SupercriticalError(f"lambda = {lam} >= |kappa| = {abs(kappa)}")
        if one_minus_energy is None:
            one_minus_energy = 1.0 - energy
        gamma = math.sqrt((abs(kappa) - lam) * (abs(kappa) + lam))
        return cls(lam, kappa, gamma, energy, one_minus_energy, n)

    @property
    def root(self) -> float:
        """sqrt(m^2 - eps^2)/m."""
        return math.sqrt(self.one_minus_energy * (1.0 + self.energy))

    @property
    def binding(self) -> float:
        return -self.one_minus_energy

    @property
    def sqrt_ratio_plus(self) -> float:
        return (1.0 + self.energy) / self.root

    @property
    def sqrt_ratio_minus(self) -> float:
        return self.root / (1.0 + self.energy)

    @property
    def eta_tilde(self) -> float:
        return -self.gamma + self.lam * self.energy / self.root

    @property
    def eta(self) -> float:
        return -self.gamma - self.lam * self.energy / self.root

    @property
    def trace_b(self) -> float:
        """2 lam eps / sqrt(m^2 - eps^2), the trace of B'."""
        return 2.0 * self.lam * self.energy / self.root

    @property
    def p1(self) -> float:
        return -self.gamma + self.kappa - self.lam * self.sqrt_ratio_plus

    @property
    def p2(self) -> float:
        return -self.gamma + self.kappa + self.lam * self.sqrt_ratio_plus

    @property
    def order(self) -> TransformOrder:
        return TransformOrder(self.gamma)

    def quantised_index(self, tol: float = 1e-9) -> int:
        n = round(self.eta_tilde)
        if n < 0 or abs(self.eta_tilde - n) > tol:
            raise DomainError(f"energy is not an eigenvalue (eta_tilde = {self.eta_tilde!r})")
        return int(n)

    def perturbed(self, factor: float) -> "CouplingParams":
        """Same coupling with the binding energy m - eps scaled by ``factor``."""
        om = self.one_minus_energy * factor
        return CouplingParams(self.lam, self.kappa, self.gamma, 1.0 - om, om, None)


def coupling(state: QuantumState) -> CouplingParams:
    """Quantised parameters: eps/m = [1 + lam^2 / (gamma + n)^2]^(-1/2)."""
    lam = state.lam
    kappa = state.kappa
    gamma = math.sqrt((abs(kappa) - lam) * (abs(kappa) + lam))
    x = (lam / (gamma + state.n)) ** 2
    energy = 1.0 / math.sqrt(1.0 + x)
    one_minus = -math.expm1(-0.5 * math.log1p(x))
    return CouplingParams(lam, kappa, gamma, energy, one_minus, state.n)


# ---------------------------------------------------------------------------
# Matrix algebra of the transformed system
# ---------------------------------------------------------------------------

def _frob(m) -> float:
    return float(np.linalg.norm(m))


def _relation_residual(x, y, c, z, scale) -> float:
    """||x y - c z||_F / scale."""
    if scale == 0:
        return 0.0
    return _frob(x @ y - c * z) / scale


@dataclass(frozen=True, eq=False)
class DiracMatrices:
    """A', B' and the products eta*A, eta_tilde*B.

    A and B themselves need a division by eta_tilde, which vanishes for n = 0,
    so only the products are stored and the eight algebraic relations are
    checked in division-free form.
    """

    a_prime: np.ndarray
    b_prime: np.ndarray
    eta_a: np.ndarray
    eta_tilde_b: np.ndarray
    eta: float
    eta_tilde: float
    gamma: float
    trace_b: float

    @property
    def a(self) -> np.ndarray:
        return self.eta_a / self.eta

    @property
    def b(self) -> np.ndarray:
        if self.eta_tilde == 0:
            raise DomainError("B is undefined at eta_tilde = 0; use eta_tilde_b")
        return self.eta_tilde_b / self.eta_tilde

    def relations(self) -> dict[str, float]:
        """Frobenius residual of each relation relative to max(||A'||, ||B'||)^2.

        A common scale is used because eta_tilde*B cancels to rounding noise
        at n = 0, where a per-relation normalisation would amplify that noise.
        """
        ap, bp = self.a_prime, self.b_prime
        ea, eb = self.eta_a, self.eta_tilde_b
        g2, tb = 2.0 * self.gamma, self.trace_b
        s = max(_frob(ap), _frob(bp)) ** 2
        return {
            "A'A' = 2g A'": _relation_residual(ap, ap, g2, ap, s),
            "A'B' = tB A'": _relation_residual(ap, bp, tb, ap, s),
            "B'B' = tB B'": _relation_residual(bp, bp, tb, bp, s),
            "B'A' = 2g B'": _relation_residual(bp, ap, g2, bp, s),
            "AA = A": _relation_residual(ea, ea, self.eta, ea, s),
            "AB = A": _relation_residual(ea, eb, self.eta_tilde, ea, s),
            "BB = B": _relation_residual(eb, eb, self.eta_tilde, eb, s),
            "BA = B": _relation_residual(eb, ea, self.eta, eb, s),
        }


def primed_a(params: CouplingParams) -> np.ndarray:
    g, k, lam = params.gamma, params.kappa, params.lam
    return np.array([[g - k, lam], [-lam, g + k]], dtype=float)


def build_matrices(params: CouplingParams, tol: float = 1e-12) -> DiracMatrices:
    """Assemble A', B', eta A = -(A'+B')/2 and eta_tilde B = -(A'-B')/2.

    Raises
    ------
    ConsistencyError
        If any of the eight idempotency relations has residual above ``tol``.
    """
    g, k, lam = params.gamma, params.kappa, params.lam
    rp, rm = params.sqrt_ratio_plus, params.sqrt_ratio_minus
    ap = primed_a(params)
    bp = np.array([[lam * rp, -(k + g) * rp], [-(g - k) * rm, -lam * rm]], dtype=float)
    mats = DiracMatrices(
        a_prime=ap,
        b_prime=bp,
        eta_a=-0.5 * (ap + bp),
        eta_tilde_b=-0.5 * (ap - bp),
        eta=params.eta,
        eta_tilde=params.eta_tilde,
        gamma=g,
        trace_b=params.trace_b,
    )
    worst = max(mats.relations().values())
    if worst > tol:
        raise ConsistencyError(f"matrix relations violated, residual {worst:.3e}", worst)
    return mats


# ---------------------------------------------------------------------------
# Wavelet-space eigenspinors
# ---------------------------------------------------------------------------

def _require_quantised(params: CouplingParams) -> int:
    n = params.quantised_index()
    if n == 0 and params.kappa > 0:
        raise UnphysicalStateError("n=0 with kappa > 0 has no terminating solution")
    return n


def phi_closed(params: CouplingParams, zbar, rate: float = PHYSICAL_RATE):
    """Closed-form eigenspinor (F, G) at ``zbar``; shape ``zbar.shape + (2,)``.

    Phi_n = P1 u- (1 + i zbar/r)^(-2g) 2F1(-n, 2g; 2g+1; 1/(r + i zbar))
          + P2 u+ (1 + i zbar/r)^(-2g) 2F1(-n+1, 2g; 2g+1; 1/(r + i zbar)),

    u-+ = (1, -+R-), with r = ``rate``.  The second term is absent for n = 0,
    where P2 = kappa + |kappa| vanishes.
    """
    n = _require_quantised(params)
    zbar = np.asarray(zbar, dtype=complex)
    if np.any(zbar.imag > 0):
        raise DomainError("phi_closed is defined on the closed lower half-plane")
    g2 = 2.0 * params.gamma
    base = principal_power(1.0 + 1j * zbar / rate, -g2)
    arg = 1.0 / (rate + 1j * zbar)
    t1 = params.p1 * base * hyp2f1_terminating(n, g2, arg)
    t2 = params.p2 * base * hyp2f1_terminating(n - 1, g2, arg) if n > 0 else 0.0 * base
    rm = params.sqrt_ratio_minus
    return np.stack([t1 + t2, rm * (t2 - t1)], axis=-1)


def phi_fields(params: CouplingParams, rate: float = PHYSICAL_RATE) -> tuple[PoleField, PoleField]:
    """(F, G) of :func:`phi_closed` as pole-term fields with poles at i*rate."""
    n = _require_quantised(params)
    g = params.gamma
    scale = rate ** (2.0 * g)  # (1 + i zbar/r)^(-2g) = r^(2g) (r + i zbar)^(-2g)
    first = hypergeometric_field(n, g, rate) * (scale * params.p1)
    rm = params.sqrt_ratio_minus
    if n > 0:
        second = hypergeometric_field(n, g, rate, degree_shift=1) * (scale * params.p2)
        return first + second, (first * -rm) + (second * rm)
    return first, first * -rm


def decay_window(params: CouplingParams, rate: float = PHYSICAL_RATE) -> tuple[float, float]:
    """Radius window (r_min, r_max) on which |Phi| follows its leading power law.

    Writing each component as sum_k c_k w^(-(2g+k)), w = i(zbar - i rate), the
    k-th correction is negligible once |w| >> (|c_k| / |c_0|)^(1/k).  For
    kappa > 0 the leading coefficient of F is O(lam^2), which pushes the onset
    far beyond the customary r ~ 100.
    """
    onset = 1.0
    for field_ in phi_fields(params, rate):
        coeffs = [abs(t.coeff) for t in field_.combined().terms]
        lead = coeffs[0]
        for k, c in enumerate(coeffs[1:], start=1):
            if c > 0:
                onset = max(onset, (c / lead) ** (1.0 / k))
    return 1e3 * onset, 1e5 * onset


def integral_constant(params: CouplingParams) -> complex:
    """phi_integral / phi_closed = -(2i)^(2g) / (2g) on the principal branch."""
    g = params.gamma
    phase = complex(math.cos(math.pi * g), math.sin(math.pi * g))  # i^(2g)
    return -(2.0 ** (2.0 * g)) * phase / (2.0 * g)


_POLES = (0.5j, -0.5j)


def _segment_distance(p, a, b) -> float:
    d = b - a
    if d == 0:
        return abs(p - a)
    t = ((p - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * d))


def path_clearance(zbar, anchor: float = 2.0) -> float:
    """Distance from the path -i*inf -> -i*anchor -> zbar to the poles +-i/2."""
    start = complex(0.0, -anchor)
    return min(_segment_distance(p, start, complex(zbar)) for p in _POLES)


def phi_integral(params: CouplingParams, zbar, anchor: float = 2.0, rel_tol: float = 1e-12):
    """Eigenspinor from the contour-integral representation, by quadrature.

    Integrates (z - i/2)^(-(n+2g)-1) (z + i/2)^n and, for n >= 1,
    (z - i/2)^(-(n+2g)) (z + i/2)^(n-1) from -i*inf up the imaginary axis to
    -i*anchor, then straight to ``zbar``.  The result matches
    :func:`phi_closed` up to the constant :func:`integral_constant`.

    Raises
    ------
    PathError
        If the path comes within 0.1 of the poles at +-i/2.
    """
    n = _require_quantised(params)
    zbar = complex(zbar)
    if not zbar.imag < 0:
        raise DomainError("phi_integral needs Im(zbar) < 0")
    start = complex(0.0, -anchor)
    if path_clearance(zbar, anchor) < 0.1:
        raise PathError("integration path passes within 0.1 of a pole at +-i/2")
    g2 = 2.0 * params.gamma
    e1, e2 = n + g2 + 1.0, n + g2

    def integrand(z):
        u = z - 0.5j
        v = z + 0.5j
        i1 = u ** (-e1) * v ** n
        i2 = u ** (-e2) * v ** (n - 1) if n > 0 else np.zeros_like(z)
        return np.stack([i1, i2])

    vert = _vertical_leg(n, g2, anchor, rel_tol)
    step = zbar - start
    seg = _adaptive_gl(lambda s: integrand(start + s * step), rel_tol) * step
    # dz = -i dt along the vertical leg, traversed from t = inf down to anchor
    i1 = 1j * vert[0] + seg[0]
    i2 = 1j * vert[1] + seg[1]
    rm = params.sqrt_ratio_minus
    t1 = params.p1 * i1
    t2 = params.p2 * i2
    return np.array([t1 + t2, rm * (t2 - t1)])


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _adaptive_gl(func, rel_tol, lo=0.0, hi=1.0, max_depth=40):
    """Vector-valued integral over [lo, hi] by bisection with a 20-point rule.

    ``func`` maps a 1-d array of nodes to an array of shape (k, nodes).  A
    panel is accepted when it agrees with the sum of its two halves.
    """
    def rule(a, b):
        return func(a + (b - a) * _GL_X) @ _GL_W * (b - a)

    total = 0.0
    stack = [(lo, hi, rule(lo, hi), 0)]
    scale = np.max(np.abs(stack[0][2]))
    while stack:
        a, b, whole, depth = stack.pop()
        m = 0.5 * (a + b)
        left, right = rule(a, m), rule(m, b)
        halves = left + right
        scale = max(scale, np.max(np.abs(halves)))
        if np.max(np.abs(halves - whole)) <= rel_tol * scale or depth >= max_depth:
            total = total + halves
        else:
            stack.append((a, m, left, depth + 1))
            stack.append((m, b, right, depth + 1))
    return total


@lru_cache(maxsize=256)
def _vertical_leg(n: int, g2: float, anchor: float, rel_tol: float):
    """int_anchor^inf of both integrands at z = -i t, shared by every zbar.

    On that line each integrand is a constant phase times
    (t + 1/2)^(-e) (t - 1/2)^m with e - m = 2g + 1.  Substituting
    t = anchor * v^(-1/(2g)) maps [anchor, inf) onto (0, 1] with a bounded,
    smooth integrand even when g is small and the decay is slow.
    """
    e1, e2 = n + g2 + 1.0, n + g2

    def vertical(v):
        x = v ** (1.0 / g2) / anchor  # 1/t
        a = (1.0 + 0.5 * x) ** (-e1) * (1.0 - 0.5 * x) ** n
        b = (1.0 + 0.5 * x) ** (-e2) * (1.0 - 0.5 * x) ** (n - 1) if n > 0 else 0.0
        return np.array([a, b])

    vint, _ = integrate.quad_vec(vertical, 0.0, 1.0, epsabs=0.0, epsrel=rel_tol,
                                 norm="max", limit=400)
    lead = anchor ** (-g2) / g2
    return (lead * np.exp(0.5j * math.pi * (e1 - n)) * vint[0],
            lead * np.exp(0.5j * math.pi * (e2 - n + 1)) * vint[1])


# ---------------------------------------------------------------------------
# Configuration-space eigenspinors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialSpinor:
    """The pair (f, g) as term-list profiles plus the normalisation applied."""

    f: RadialProfile
    g: RadialProfile
    normalization: float = 1.0

    def __call__(self, q):
        return self.f(q), self.g(q)

    @property
    def is_zero(self) -> bool:
        return self.f.is_zero and self.g.is_zero


def radial_eigenfunction(params: CouplingParams, rate: float = PHYSICAL_RATE,
                         normalize: bool = True) -> RadialSpinor:
    """Configuration-space eigenspinor reconstructed from :func:`phi_fields`.

    f = q^(g-1) e^(-r q) / Gamma(2g) [P1 1F1(-n; 2g+1; q) + P2 1F1(-n+1; 2g+1; q)]
    g = R- q^(g-1) e^(-r q) / Gamma(2g) [-P1 1F1(-n; 2g+1; q) + P2 1F1(-n+1; 2g+1; q)]

    With ``normalize`` the pair is scaled so int q^2 (|f|^2 + |g|^2) dq = 1.
    """
    n = _require_quantised(params)
    g = params.gamma
    first = confluent_profile(n, g, rate) * params.p1
    second = confluent_profile(n - 1, g, rate) * params.p2 if n > 0 else RadialProfile()
    rm = params.sqrt_ratio_minus
    f = (first + second).simplify()
    gg = ((first * -rm) + (second * rm)).simplify()
    norm = 1.0
    if normalize:
        total = l2_norm_radial(f) + l2_norm_radial(gg)
        norm = 1.0 / math.sqrt(total)
        f, gg = f * norm, gg * norm
    return RadialSpinor(f, gg, norm)


def ode_residual_profile(params: CouplingParams, spinor: RadialSpinor, q) -> np.ndarray:
    """Pointwise relative residual of the radial system (worse of the two rows).

    Each equation's residual is divided by |f| + |g| at that point.
    """
    q = np.asarray(q, dtype=float)
    if spinor.is_zero:
        return np.zeros(q.shape)
    f, g = spinor.f, spinor.g
    fv, gv = f(q), g(q)
    qfp, qgp = f.euler()(q), g.euler()(q)
    k, lam = params.kappa, params.lam
    r1 = qfp + (1.0 + k) * fv - (0.5 * q * params.sqrt_ratio_plus + lam) * gv
    r2 = qgp + (1.0 - k) * gv - (0.5 * q * params.sqrt_ratio_minus - lam) * fv
    scale = np.abs(fv) + np.abs(gv) + np.finfo(float).tiny
    return np.maximum(np.abs(r1), np.abs(r2)) / scale


def ode_residual(params: CouplingParams, spinor: RadialSpinor, q) -> float:
    """Max relative residual of the radial system on the sample points ``q``.

    The zero spinor trivially returns 0 (and logs a warning).
    """
    if spinor.is_zero:
        logger.warning("ode_residual called with the zero spinor")
        return 0.0
    res = ode_residual_profile(params, spinor, q)
    return float(np.max(res)) if res.size else 0.0


def small_q_exponent(f: RadialProfile, q_lo: float = 1e-4, q_hi: float = 1e-2, num: int = 41) -> float:
    """Fitted slope of log|f| against log q on [q_lo, q_hi]."""
    q = np.geomspace(q_lo, q_hi, num)
    slope = np.polyfit(np.log(q), np.log(np.abs(f(q))), 1)[0]
    return float(slope)


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralLine:
    protons: int
    kappa: int
    n: int
    principal: int
    j: Fraction
    l: int
    label: str
    gamma: float
    energy: float
    binding: float
    regime: str
    status: str = "ok"

    @property
    def rejected(self) -> bool:
        return self.status != "ok"


def _line(protons, kappa, n, alpha_fs) -> SpectralLine:
    j, l = jl_from_kappa(kappa)
    label = f"{n + abs(kappa)}{_LETTERS[l]}{j}"
    try:
        state = QuantumState(protons, kappa, n, alpha_fs)
    except SupercriticalError:
        return SpectralLine(protons, kappa, n, n + abs(kappa), j, l, label,
                            math.nan, math.nan, math.nan, "", "supercritical")
    p = coupling(state)
    return SpectralLine(protons, kappa, n, state.principal, j, l, label,
                        p.gamma, p.energy, p.binding, TransformOrder(p.gamma).regime.value)


def spectrum_table(protons: int, kappa_max: int, n_max: int, alpha_fs: float = ALPHA_FS,
                   include_rejected: bool = False) -> list[SpectralLine]:
    """Spectral lines for |kappa| <= kappa_max and 0 <= n <= n_max, sorted by energy.

    (n = 0, kappa > 0) combinations are not states and never appear.
    Supercritical states are appended after the bound lines, flagged, when
    ``include_rejected`` is set.
    """
    lines = []
    for k in range(1, kappa_max + 1):
        for kappa in (-k, k):
            for n in range(n_max + 1):
                if n == 0 and kappa > 0:
                    continue
                line = _line(protons, kappa, n, alpha_fs)
                if line.rejected and not include_rejected:
                    continue
                lines.append(line)
    lines.sort(key=lambda ln: (ln.rejected, ln.energy if not ln.rejected else 0.0,
                               ln.principal, ln.l, ln.j, ln.kappa))
    return lines


def nonrelativistic_limit_check(protons: int, kappa: int, n: int, alpha_fs: float = ALPHA_FS) -> float:
    """|(eps/m - 1) + lam^2 / (2 (n + |kappa|)^2)|, which is O(lam^4)."""
    if alpha_fs == 0:
        return 0.0
    p = coupling(QuantumState(protons, kappa, n, alpha_fs))
    nu = n + abs(kappa)
    return abs(p.binding + p.lam ** 2 / (2.0 * nu ** 2))
