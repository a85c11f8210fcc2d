"""Deformed KdV flows: identities, conservation, symmetries, waves."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import fring_rhs_symbolic_defects
from ptlab import kdv
from ptlab.errors import BlowUpError, BranchError, ConfigurationError


def cosine_field(amplitude=0.5, L=2 * np.pi, n=64, mode=1, phase=0.0):
    return kdv.KdVField.from_callable(
        lambda x: amplitude * np.cos(2 * np.pi * mode * x / L + phase), L, n)


def pt_symmetric_field(L=20.0, n=64):
    # real even plus i times real odd: invariant under x -> -x with
    # conjugation
    return kdv.KdVField.from_callable(
        lambda x: 0.1 * np.cos(2 * np.pi * x / L) + 0.05j * np.sin(4 * np.pi * x / L),
        L, n)


# ---------------------------------------------------------------------------
# fields and right-hand sides
# ---------------------------------------------------------------------------

def test_field_validation():
    with pytest.raises(ConfigurationError):
        kdv.KdVField(L=-1.0, values=np.ones(32))
    with pytest.raises(ConfigurationError):
        kdv.KdVField(L=1.0, values=np.ones(8))


def test_spectral_derivative_exact_on_modes():
    f = cosine_field(amplitude=1.0, mode=3)
    x = f.x
    expect = -3.0 * np.sin(3 * x)
    assert np.abs(f.deriv(1) - expect).max() < 1e-12
    assert np.abs(f.deriv(3) - 27.0 * np.sin(3 * x)).max() < 1e-10


def test_flows_coincide_with_kdv_at_eps_one():
    f = kdv.KdVField.from_callable(
        lambda x: 0.7 * np.cos(x) + 0.2 * np.sin(2 * x), 2 * np.pi, 96)
    classic = -f.values * f.deriv(1) - f.deriv(3)
    assert np.abs(kdv.rhs_bender(f, 1.0) - classic).max() < 1e-10
    assert np.abs(kdv.rhs_fring(f, 1.0) - classic).max() < 1e-10


def test_fring_rhs_is_variational():
    # exact symbolic check that the literal right-hand side equals
    # d/dx of the variational derivative of the deformed density
    assert all(d == 0 for d in fring_rhs_symbolic_defects((2, 3, "7/2")))


def test_branch_error_on_cut_crossing():
    # u = i sin(x) makes i u_x = -cos(x), negative real where cos > 0
    f = kdv.KdVField.from_callable(lambda x: 1j * np.sin(x), 2 * np.pi, 64)
    with pytest.raises(BranchError):
        kdv.rhs_bender(f, 0.5)
    # integer powers never touch the cut
    kdv.rhs_bender(f, 2.0)


# ---------------------------------------------------------------------------
# conserved quantities
# ---------------------------------------------------------------------------

def test_mass_and_momentum_values():
    f = cosine_field(amplitude=2.0)
    assert abs(kdv.mass(f)) < 1e-12
    # (1/2) integral of 4 cos^2 = L
    assert kdv.momentum(f) == pytest.approx(2 * np.pi, abs=1e-12)


def test_charges_conserved_along_kdv_soliton():
    f = kdv.soliton(1.0, 40.0, 256)
    ev = kdv.evolve(f, "fring", 1.0, 0.2, 1e-3)
    drift = ev.monitor.drift()
    assert drift["M"] < 1e-10
    assert drift["P"] < 1e-10
    assert drift["E"] < 1e-9


def test_energy_conserved_for_deformed_flow():
    f = pt_symmetric_field()
    ev = kdv.evolve(f, "fring", 2.0, 0.05, 5e-4)
    assert ev.monitor.drift()["E"] < 1e-10


def test_literal_density_reality_scan():
    ok, val = kdv.energy_reality_check(pt_symmetric_field(), 2.0)
    assert ok
    skew = kdv.KdVField.from_callable(
        lambda x: 0.3 * np.cos(x) + 0.2 * np.cos(2 * x + 0.7), 2 * np.pi, 64)
    ok2, val2 = kdv.energy_reality_check(skew, 2.0)
    assert not ok2


# ---------------------------------------------------------------------------
# evolution machinery
# ---------------------------------------------------------------------------

def test_evolve_validates_time_arguments():
    f = cosine_field()
    with pytest.raises(ConfigurationError):
        kdv.evolve(f, "bender", 1.0, 1.0, -1e-3)
    with pytest.raises(ConfigurationError):
        kdv.evolve(f, "bender", 1.0, 1.05e-3 * 7, 1e-3)


def test_blow_up_reported_with_last_time():
    f = kdv.soliton(1.0, 40.0, 128)
    with pytest.raises(BlowUpError) as exc:
        kdv.evolve(f, "fring", 3.0, 1.0, 1e-3)
    assert exc.value.t_last >= 0.0


def test_snapshots_and_monitor_cadence():
    f = cosine_field()
    ev = kdv.evolve(f, "bender", 1.0, 0.1, 1e-3, n_snapshots=6)
    assert ev.completed
    assert len(ev.snapshots) == len(ev.times)
    assert ev.times[0] == 0.0
    assert ev.times[-1] == pytest.approx(0.1)
    assert ev.monitor.times[-1] == pytest.approx(0.1)


# ---------------------------------------------------------------------------
# symmetries
# ---------------------------------------------------------------------------

def test_pt_reflect_is_an_involution():
    rng = np.random.default_rng(0)
    f = kdv.KdVField(L=5.0, values=rng.normal(size=32) + 1j * rng.normal(size=32))
    twice = kdv.pt_reflect(kdv.pt_reflect(f))
    assert np.abs(twice.values - f.values).max() == 0.0


@pytest.mark.parametrize("flow", ["bender", "fring"])
def test_pt_covariance_of_deformed_flows(flow):
    f = pt_symmetric_field()
    defect = kdv.pt_covariance_defect(f, flow, 2.0, 0.05, 5e-4)
    assert defect < 1e-12


def test_galilean_dichotomy():
    f = cosine_field(amplitude=0.1, L=20.0)
    good = kdv.galilean_defect(f, "fring", 2.0, 0.1, 0.2, 1e-3)
    bad = kdv.galilean_defect(f, "bender", 2.0, 0.1, 0.2, 1e-3)
    assert good < 1e-10
    assert bad > 1e-4


def test_galilean_exact_for_classical_kdv():
    f = cosine_field(amplitude=0.3)
    assert kdv.galilean_defect(f, "bender", 1.0, 0.2, 0.2, 1e-3) < 1e-10


# ---------------------------------------------------------------------------
# traveling waves
# ---------------------------------------------------------------------------

def test_soliton_profile_and_speed_check():
    rep = kdv.traveling_wave(1, 1.0)
    assert rep.exists
    defect = kdv.traveling_wave_defect(rep, t_final=0.5, dt=1e-3)
    assert defect < 1e-6


def test_soliton_validation():
    with pytest.raises(ConfigurationError):
        kdv.soliton(-1.0, 40.0, 128)


def test_no_traveling_wave_for_eps_three():
    rep = kdv.traveling_wave(3, 1.0)
    assert not rep.exists
    assert "negative" in rep.reason
    with pytest.raises(ConfigurationError):
        kdv.traveling_wave_defect(rep)


@given(st.floats(0.2, 2.0), st.integers(5, 7))
@settings(max_examples=10, deadline=None)
def test_soliton_amplitude_property(c, p):
    f = kdv.soliton(c, 40.0, 2 ** p)
    assert np.abs(f.values).max() == pytest.approx(3.0 * c, rel=1e-6)
    assert np.abs(f.values.imag).max() == 0.0
