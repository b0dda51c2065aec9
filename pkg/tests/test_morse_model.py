import math

from hypothesis import given, strategies as st
import numpy as np
import pytest

from diracmorse.errors import DomainError
from diracmorse.morse_model import (
    PDM,
    PSEUDOSPIN,
    SPIN,
    MassFunction,
    MorseProblem,
    MorsePotential,
    SymmetryMode,
    centrifugal_strength,
    kappa_from_j,
    mass_value,
    morse_value,
    pekeris_coefficients,
    quantum_numbers_from_kappa,
    state_label,
    xi_parameters,
)

kappas = st.integers(-10, 10).filter(lambda k: k != 0)


def test_potential_derived_quantities():
    pot = MorsePotential(2.0, 1.5, 3.0)
    assert pot.beta == 4.5
    assert pot.delta == 1.0 / 3.0
    assert pot.s_of_r(1.5) == 1.0
    assert pot.x_of_r(3.0) == 1.0


@pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0), (1, math.nan, 1)])
def test_potential_rejects_bad_parameters(args):
    with pytest.raises(DomainError):
        MorsePotential(*args)


@pytest.mark.parametrize("beta,want", [(1.0, (1.0, -2.0, 2.0)), (2.0, (0.25, 0.5, 0.25))])
def test_pekeris_exact_values(beta, want):
    assert pekeris_coefficients(beta) == want


def test_pekeris_large_beta():
    c1, c2, c3 = pekeris_coefficients(1e6)
    assert abs(c1 - 1) < 1e-5 and abs(c2) < 1e-5 and abs(c3) < 1e-5


@pytest.mark.parametrize("beta", [0.0, -1.0])
def test_pekeris_rejects_nonpositive_beta(beta):
    with pytest.raises(DomainError):
        pekeris_coefficients(beta)


@given(st.floats(0.5, 10))
def test_pekeris_matching_identities(beta):
    c1, c2, c3 = pekeris_coefficients(beta)
    assert abs(c1 + c2 + c3 - 1) < 1e-12
    assert abs(beta * c2 + 2 * beta * c3 - 2) < 1e-12
    assert abs(beta**2 * c2 + 4 * beta**2 * c3 - 6) < 1e-12


@pytest.mark.parametrize("beta", [2.0, 2.5, 3.0, 4.0])
def test_pekeris_pointwise_band(beta):
    c1, c2, c3 = pekeris_coefficients(beta)
    x = np.linspace(-0.1, 0.1, 201)
    e = np.exp(-beta * x)
    assert np.max(np.abs(c1 + c2 * e + c3 * e * e - 1 / (1 + x) ** 2)) < 0.05


def test_centrifugal_strength_examples():
    assert centrifugal_strength(1, 1.0, "lower") == 0
    assert centrifugal_strength(-1, 1.0, "upper") == 0
    assert centrifugal_strength(-1, 1.1283, "lower") == pytest.approx(1.5711, abs=1e-4)
    assert centrifugal_strength(2, 2.0, "upper") == 1.5
    with pytest.raises(DomainError):
        centrifugal_strength(1, 1.0, "middle")


def test_morse_value_examples():
    pot = MorsePotential(1.0, 1.0, 1.0)
    assert morse_value(pot, 0.0) == -1.0
    assert morse_value(pot, math.log(2)) == pytest.approx(-0.75, abs=1e-15)
    assert abs(morse_value(pot, 50.0)) < 1e-20
    # raw evaluator accepts x < -1
    assert morse_value(pot, -2.0) > 0


def test_mass_value_examples():
    pot = MorsePotential(3.0, 1.0, 2.0)
    m = MassFunction.position_dependent(10.0, pot)
    assert (m.m1, m.m2) == (6.0, -3.0)
    assert mass_value(m, pot.beta, 0.0) == 13.0
    assert mass_value(m, pot.beta, 40.0) == pytest.approx(10.0, abs=1e-12)
    const = MassFunction.constant(10.0)
    assert np.all(mass_value(const, pot.beta, np.linspace(-1, 5, 9)) == 10.0)


def test_problem_enforces_mass_identity():
    pot = MorsePotential(1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        MorseProblem(pot, MassFunction.constant(5.0), SymmetryMode.pdm(), -1)
    with pytest.raises(DomainError):
        MorseProblem(pot, MassFunction.position_dependent(5.0, pot), SymmetryMode.spin(0.0), -1)
    with pytest.raises(DomainError):
        SymmetryMode(PDM, 1.0)
    with pytest.raises(DomainError):
        MorseProblem.build(PDM, 1, 1, 1, 5, 0)


def test_xi_pdm_hand_example():
    p = MorseProblem.build(PDM, 1.0, 1.0, 1.0, 5.0, -1)
    assert p.pekeris.strength == 2.0
    assert (p.pekeris.c1, p.pekeris.c2, p.pekeris.c3) == (1.0, -2.0, 2.0)
    xi = xi_parameters(p, 4.0)
    assert (xi.xi1, xi.xi2, xi.xi3) == (2.0, 0.0, 11.0)


def test_xi_pseudospin_at_minus_m0():
    p = MorseProblem.build(PSEUDOSPIN, 2.0, 1.3, 1.7, 4.0, -2, 0.0)
    xi = xi_parameters(p, -4.0)
    d2 = (1 / 1.7) ** 2
    assert xi.xi3 == pytest.approx(d2 * p.pekeris.strength * p.pekeris.c1, rel=1e-14)


def test_xi_spin_with_vanishing_mprime():
    m0, E = 4.0, 1.5
    p = MorseProblem.build(SPIN, 2.0, 1.3, 1.7, m0, 2, m0 + E)
    pk, d2 = p.pekeris, (1 / 1.7) ** 2
    xi = xi_parameters(p, E)
    assert xi.xi1 == pytest.approx(d2 * pk.strength * pk.c3, rel=1e-14)
    assert xi.xi2 == pytest.approx(-d2 * pk.strength * pk.c2, rel=1e-14)
    assert xi.xi3 == pytest.approx(d2 * pk.strength * pk.c1, rel=1e-14)


@pytest.mark.parametrize("mode", [PDM, PSEUDOSPIN, SPIN])
def test_xi_reproduces_pekeris_ode(mode):
    # the NU form s^2 u'' + s u' + (-xi3 + xi2 s - xi1 s^2) u = 0 is the x-space
    # equation u_xx = beta^2 (xi3 - xi2 s + xi1 s^2) u = Q(x) u
    from diracmorse.ode_oracle import effective_ode_rhs

    p = MorseProblem.build(mode, 2.0, 1.3, 1.7, 4.0, -2, 0.0 if mode == PDM else 0.5)
    E = 1.234
    xi = xi_parameters(p, E)
    x = np.linspace(-0.5, 3, 30)
    s = np.exp(-p.potential.beta * x)
    lhs = p.potential.beta**2 * (xi.xi3 - xi.xi2 * s + xi.xi1 * s * s)
    assert np.allclose(lhs, effective_ode_rhs(p, E, x), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("kappa,ell,ell_t,j", [(-1, 0, 1, 0.5), (-4, 3, 4, 3.5), (2, 2, 1, 1.5), (1, 1, 0, 0.5)])
def test_quantum_numbers(kappa, ell, ell_t, j):
    qn = quantum_numbers_from_kappa(kappa)
    assert (qn.ell, qn.ell_tilde, qn.j) == (ell, ell_t, j)
    assert qn.aligned == (kappa < 0)


@given(kappas)
def test_quantum_number_relations(kappa):
    qn = quantum_numbers_from_kappa(kappa)
    assert kappa * (kappa + 1) == qn.ell * (qn.ell + 1)
    assert kappa * (kappa - 1) == qn.ell_tilde * (qn.ell_tilde + 1)
    assert qn.j == abs(kappa) - 0.5
    assert kappa_from_j(qn.j, qn.aligned) == kappa


def test_quantum_numbers_reject_zero():
    with pytest.raises(DomainError):
        quantum_numbers_from_kappa(0)


def test_state_labels():
    assert state_label(1, 0, 0.5) == "1s1/2"
    assert state_label(1, 3, 3.5) == "1f7/2"
    assert state_label(2, 1, 1.5) == "2p3/2"
