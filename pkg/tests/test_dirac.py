import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from halfwave import dirac, transform
from halfwave.dirac import CouplingParams, QuantumState
from halfwave.errors import DomainError, PathError, SupercriticalError, UnphysicalStateError

mp.mp.dps = 40

# sqrt(1 - lam^2) at lam = 7.2973525693e-3, frozen from mpmath
GROUND_1S = 0.99997337396826688


@pytest.mark.parametrize("j, l, kappa", [
    (Fraction(1, 2), 0, -1),
    (Fraction(1, 2), 1, 1),
    (Fraction(3, 2), 1, -2),
    (Fraction(3, 2), 2, 2),
    (Fraction(5, 2), 2, -3),
])
def test_kappa_from_jl(j, l, kappa):
    assert dirac.kappa_from_jl(j, l) == kappa
    assert dirac.jl_from_kappa(kappa) == (j, l)


def test_kappa_from_jl_rejects_inconsistent():
    with pytest.raises(DomainError):
        dirac.kappa_from_jl(Fraction(1, 2), 2)
    with pytest.raises(DomainError):
        dirac.kappa_from_jl(Fraction(-1, 2), 0)


def test_state_validation():
    with pytest.raises(UnphysicalStateError):
        QuantumState(1, 1, 0)
    with pytest.raises(SupercriticalError):
        QuantumState(138, -1, 0)
    QuantumState(137, -1, 0)
    with pytest.raises(DomainError):
        QuantumState(1, 0, 1)
    assert QuantumState(1, -2, 0).label == "2P3/2"
    assert QuantumState.from_jl(1, Fraction(1, 2), 1, 1).label == "2P1/2"


def test_ground_state_energy():
    p = dirac.coupling(QuantumState(1, -1, 0))
    assert abs(p.energy - GROUND_1S) <= 2.3e-16
    assert abs(p.energy - math.sqrt(1 - p.lam ** 2)) <= 1e-14


def test_zero_coupling_limit():
    p = dirac.coupling(QuantumState(1, -1, 2, alpha_fs=0.0))
    assert p.energy == 1.0 and p.one_minus_energy == 0.0


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 136), st.integers(1, 4), st.integers(0, 6), st.booleans())
def test_energy_against_mpmath(N, k, n, positive):
    if n == 0 and positive:
        n = 1
    kappa = k if positive else -k
    state = QuantumState(N, kappa, n)
    p = dirac.coupling(state)
    lam = mp.mpf(state.lam)  # the binary64 coupling the code sees
    gam = mp.sqrt(kappa ** 2 - lam ** 2)
    eps = 1 / mp.sqrt(1 + lam ** 2 / (gam + n) ** 2)
    assert abs(p.energy - float(eps)) <= 4.5e-16 * float(eps)
    assert abs(p.one_minus_energy - float(1 - eps)) <= 1e-14 * float(1 - eps)


@pytest.mark.parametrize("N", [1, 20, 80, 137])
def test_kappa_degeneracy_is_exact(N):
    for k in (1, 2, 3):
        for n in range(1, 5):
            a = dirac.coupling(QuantumState(N, -k, n))
            b = dirac.coupling(QuantumState(N, k, n))
            assert a.energy == b.energy


def test_quantization_and_selection_rule():
    for N in (1, 20, 80, 137):
        for kappa in (-3, -2, -1, 1, 2, 3):
            for n in range(0 if kappa < 0 else 1, 5):
                p = dirac.coupling(QuantumState(N, kappa, n))
                assert abs(p.eta_tilde - n) <= 1e-12
                assert abs(p.eta + n + 2 * p.gamma) <= 1e-12
                assert p.quantised_index() == n
                if n == 0:
                    assert abs(p.p2) <= 1e-12


def test_non_eigenvalue_has_no_index():
    p = dirac.coupling(QuantumState(20, -1, 1)).perturbed(1.01)
    with pytest.raises(DomainError):
        p.quantised_index()


def test_nonrelativistic_limit():
    for N in (1, 5, 10):
        lam4 = (N * dirac.ALPHA_FS) ** 4
        assert dirac.nonrelativistic_limit_check(N, -1, 0) <= 2 * lam4
        assert dirac.nonrelativistic_limit_check(N, -1, 1) <= 2 * lam4
    assert dirac.nonrelativistic_limit_check(1, -1, 0, alpha_fs=0.0) == 0.0


def test_matrices_at_test_values():
    g = math.sqrt(0.75)
    p = CouplingParams.at_energy(0.5, -1, 0.8)
    assert p.gamma == pytest.approx(g, rel=1e-15)
    m = dirac.build_matrices(p)
    ap = m.a_prime
    assert np.linalg.norm(ap @ ap - 2 * g * ap) <= 1e-14
    a = m.a
    assert np.linalg.norm(a @ a - a) <= 1e-14
    assert np.trace(ap) == pytest.approx(2 * g, rel=1e-15)
    assert abs(np.linalg.det(ap)) <= 1e-15


def test_matrices_at_zero_coupling():
    p = CouplingParams.at_energy(0.0, -2, 0.9)
    m = dirac.build_matrices(p)
    assert np.array_equal(np.diag(m.a_prime), [p.gamma + 2, p.gamma - 2])
    assert m.a_prime[0, 1] == 0 and m.a_prime[1, 0] == 0


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([-3, -2, -1, 1, 2, 3]), st.floats(0.0, 0.999), st.floats(0.01, 0.999))
def test_matrix_relations_random(kappa, frac, energy):
    p = CouplingParams.at_energy(frac * abs(kappa), kappa, energy)
    rel = dirac.build_matrices(p, tol=math.inf).relations()
    assert len(rel) == 8
    assert max(rel.values()) <= 1e-12


def test_eta_tilde_b_collapses_at_ground_state():
    # eta_tilde = 0 at n = 0, so B itself is undefined and eta_tilde B = -(A' - B')/2 vanishes
    m = dirac.build_matrices(dirac.coupling(QuantumState(1, -1, 0)))
    assert np.linalg.norm(m.eta_tilde_b) <= 1e-12 * np.linalg.norm(m.b_prime)
    with pytest.raises(DomainError):
        dirac.DiracMatrices(m.a_prime, m.b_prime, m.eta_a, m.eta_tilde_b, m.eta, 0.0, m.gamma, m.trace_b).b


def test_phi_closed_ground_state_form():
    p = dirac.coupling(QuantumState(1, -1, 0))
    z = np.array([-1j, 0.3 - 0.2j, -4.0 - 1.0j])
    phi = dirac.phi_closed(p, z)
    base = (1 + 1j * z / dirac.PHYSICAL_RATE) ** (-2 * p.gamma)
    assert np.allclose(phi[:, 0], p.p1 * base, rtol=1e-14)
    assert np.allclose(phi[:, 1], -p.sqrt_ratio_minus * p.p1 * base, rtol=1e-14)


def test_phi_closed_vanishes_far_down():
    p = dirac.coupling(QuantumState(20, 2, 3))
    far = np.abs(dirac.phi_closed(p, -1e8j)).max()
    near = np.abs(dirac.phi_closed(p, -1j)).max()
    assert far < 1e-10 * near


def test_phi_fields_match_phi_closed():
    for s in (QuantumState(1, -1, 0), QuantumState(80, 2, 3), QuantumState(20, -3, 4)):
        p = dirac.coupling(s)
        F, G = dirac.phi_fields(p)
        z = np.array([0.2 - 0.9j, -3.0 - 0.05j, 10.0 - 7.0j])
        phi = dirac.phi_closed(p, z)
        scale = np.abs(phi).max()
        assert np.abs(F(z) - phi[:, 0]).max() <= 1e-13 * scale
        assert np.abs(G(z) - phi[:, 1]).max() <= 1e-13 * scale


def test_phi_closed_against_mpmath():
    p = dirac.coupling(QuantumState(20, -1, 2))
    z = 0.7 - 1.3j
    g2 = 2 * mp.mpf(p.gamma)
    w = mp.mpf(0.5) + 1j * mp.mpc(z)
    base = (1 + 1j * mp.mpc(z) / mp.mpf(0.5)) ** (-g2)
    t1 = p.p1 * base * mp.hyp2f1(-2, g2, g2 + 1, 1 / w)
    t2 = p.p2 * base * mp.hyp2f1(-1, g2, g2 + 1, 1 / w)
    ref = np.array([complex(t1 + t2), complex(p.sqrt_ratio_minus * (t2 - t1))])
    assert np.abs(dirac.phi_closed(p, z) - ref).max() <= 1e-13 * np.abs(ref).max()


@pytest.mark.parametrize("state", [QuantumState(1, -1, 1), QuantumState(80, 3, 2), QuantumState(20, -2, 4)])
def test_phi_integral_matches_closed_form(state):
    p = dirac.coupling(state)
    const = dirac.integral_constant(p)
    for z in (-1j, 1.5 - 0.3j, -2.0 - 3.0j, 4.0 - 0.05j):
        integ = dirac.phi_integral(p, z)
        closed = dirac.phi_closed(p, z) * const
        assert np.abs(integ - closed).max() <= 1e-10 * np.abs(closed).max()


def test_phi_integral_path_errors():
    p = dirac.coupling(QuantumState(1, -1, 1))
    with pytest.raises(PathError):
        dirac.phi_integral(p, -0.45j)
    with pytest.raises(DomainError):
        dirac.phi_integral(p, 1.0 + 0.0j)


def test_radial_eigenfunction_ground_state():
    p = dirac.coupling(QuantumState(1, -1, 0))
    sp = dirac.radial_eigenfunction(p)
    q = np.linspace(0.1, 30.0, 50)
    f, g = sp(q)
    assert np.allclose(g / f, -math.sqrt(p.one_minus_energy / (1 + p.energy)), rtol=1e-14)
    assert np.allclose(f, f[0] * (q / q[0]) ** (p.gamma - 1) * np.exp(-0.5 * (q - q[0])), rtol=1e-13)


@pytest.mark.parametrize("state", [QuantumState(1, -1, 0), QuantumState(1, 1, 1), QuantumState(80, -3, 4),
                                   QuantumState(137, -1, 2), QuantumState(20, 2, 3)])
def test_ode_residual_small(state):
    p = dirac.coupling(state)
    sp = dirac.radial_eigenfunction(p)
    q = np.linspace(0.05, 25.0, 60)
    assert dirac.ode_residual(p, sp, q) <= 1e-9
    assert dirac.ode_residual(p.perturbed(1.01), sp, q) >= 1e-3
    # the typeset e^-q closed forms do not solve the system
    wrong = dirac.radial_eigenfunction(p, rate=1.0)
    assert dirac.ode_residual(p, wrong, q) >= 1e-3


def test_ode_residual_zero_spinor(caplog):
    p = dirac.coupling(QuantumState(1, -1, 0))
    zero = dirac.RadialSpinor(transform.RadialProfile(), transform.RadialProfile())
    assert dirac.ode_residual(p, zero, np.linspace(0.1, 1, 5)) == 0.0
    assert "zero spinor" in caplog.text


def test_normalization_and_transform_consistency():
    p = dirac.coupling(QuantumState(80, 2, 2))
    sp = dirac.radial_eigenfunction(p)
    total = transform.l2_norm_radial(sp.f) + transform.l2_norm_radial(sp.g)
    assert total == pytest.approx(1.0, abs=1e-12)
    z = np.array([-1j, 2.0 - 0.4j, -0.7 - 2.2j])
    F = np.stack([transform.forward_transform(sp.f, p.gamma, z),
                  transform.forward_transform(sp.g, p.gamma, z)], axis=-1)
    C = dirac.phi_closed(p, z)
    ratio = F / C
    assert np.abs(ratio - ratio.flat[0]).max() <= 1e-12 * abs(ratio.flat[0])


def test_asymptotic_slope_example():
    p = dirac.coupling(QuantumState(1, -1, 1))
    for th in (-math.pi / 2, -math.pi / 4):
        slope = transform.decay_exponent_estimate(lambda z: dirac.phi_closed(p, z), th)
        assert abs(slope + 2 * p.gamma) <= 0.01 * 2 * p.gamma


def test_endpoint_power():
    for s in (QuantumState(20, -1, 0), QuantumState(20, 2, 1), QuantumState(80, -3, 3)):
        p = dirac.coupling(s)
        sp = dirac.radial_eigenfunction(p)
        assert sp.f.simplify().min_power == pytest.approx(p.gamma, abs=1e-12)
        assert sp.g.simplify().min_power == pytest.approx(p.gamma, abs=1e-12)
    p = dirac.coupling(QuantumState(20, -1, 0))
    assert abs(dirac.small_q_exponent(dirac.radial_eigenfunction(p).f) - (p.gamma - 1)) <= 1e-3


def test_spectrum_table_examples():
    lines = {ln.label: ln for ln in dirac.spectrum_table(1, 2, 2)}
    assert abs(lines["1S1/2"].energy - GROUND_1S) <= 2.3e-16
    assert lines["2S1/2"].energy == lines["2P1/2"].energy
    assert lines["2P3/2"].energy > lines["2P1/2"].energy
    assert lines["1S1/2"].binding == pytest.approx(GROUND_1S - 1, rel=1e-10)
    energies = [ln.energy for ln in dirac.spectrum_table(1, 3, 3)]
    assert energies == sorted(energies)


def test_spectrum_table_rejections():
    rows = dirac.spectrum_table(138, 2, 1, include_rejected=True)
    rejected = [r for r in rows if r.rejected]
    assert {r.kappa for r in rejected} == {-1, 1}
    assert all(r.status == "supercritical" and math.isnan(r.energy) for r in rejected)
    assert rows[-1].rejected and not rows[0].rejected
    assert all(not r.rejected for r in dirac.spectrum_table(137, 1, 1, include_rejected=True))
