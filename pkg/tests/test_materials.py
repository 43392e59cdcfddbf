import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import hbar, k as k_B

from casitherm.errors import DomainError, MaterialFileError
from casitherm.materials import (
    DC_DIVERGENCE,
    IDEAL_METAL_EPS,
    ConductiveDielectric,
    ConductivityLaw,
    DivergentPermittivity,
    IdealMetal,
    NinhamParsegianModel,
    Oscillator,
    OscillatorModel,
    apply_toggles,
    beta,
    builtin_material,
    builtin_material_path,
    eval_eps,
    ev_to_radps,
    load_material,
    load_material_named,
    resistivity_to_sigma,
    save_material,
    sigma0,
    static_permittivity,
)

EV = 1.602176634e-19


def single_oscillator(eps0, omega=6.6e15, gamma=0.0):
    return OscillatorModel((Oscillator(g=(eps0 - 1) * omega * omega, omega=omega, gamma=gamma),))


# ---------------------------------------------------------------------------
# Construction invariants
# ---------------------------------------------------------------------------

def test_oscillator_invariants():
    with pytest.raises(DomainError):
        Oscillator(g=1e30, omega=0.0)
    with pytest.raises(DomainError):
        Oscillator(g=0.0, omega=1e15)
    with pytest.raises(DomainError):
        Oscillator(g=1e30, omega=1e15, gamma=-1.0)
    with pytest.raises(DomainError):
        OscillatorModel(())


def test_conductivity_law_invariants():
    with pytest.raises(DomainError):
        ConductivityLaw(form="other", sigma_a=1e15, activation=EV)
    with pytest.raises(DomainError):
        ConductivityLaw(form="mott", sigma_a=0.0, activation=EV)


def test_debye_needs_relaxation_time():
    with pytest.raises(DomainError):
        NinhamParsegianModel(f_uv=1e30, omega_uv=1e15, f_ir=0, omega_ir=1e15,
                             d=0.4, tau_debye=0.0, include_debye=True)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def test_static_value_and_uv_limit():
    m = single_oscillator(4.0, omega=1e15)
    assert m.eps(0.0) == pytest.approx(4.0, abs=1e-14)
    assert eval_eps(m, 1e22, 0.0) == pytest.approx(1.0, rel=1e-10)


def test_silicon_static_value():
    si = builtin_material("silicon")
    assert static_permittivity(si) == pytest.approx(11.66, abs=1e-12)


def test_mica_static_values():
    # From the quoted oscillator parameters: 2.48 electronic, 4.48
    # electronic+ionic, 4.88 with orientation; handbook tables round these
    # to 2.45 / 4.45 / 4.85.
    mica = builtin_material("mica")
    full = static_permittivity(mica)
    ei = static_permittivity(apply_toggles(mica, include_debye=False))
    assert ei == pytest.approx(4.4797, abs=1e-3)
    assert full == pytest.approx(ei + 0.4, abs=1e-12)
    assert abs(ei - 4.45) < 0.05
    electronic = static_permittivity(builtin_material("mica-electronic"))
    assert electronic == pytest.approx(2.4800, abs=1e-3)


def test_eval_eps_domain_errors():
    m = single_oscillator(2.0)
    with pytest.raises(DomainError):
        eval_eps(m, -1.0, 300.0)
    with pytest.raises(DomainError):
        eval_eps(m, 1e15, -1.0)


def test_conductive_divergence_markers():
    cond = ConductiveDielectric(
        base=single_oscillator(11.66),
        law=ConductivityLaw(form="bandgap", sigma_a=1e16, activation=1.12 * EV),
    )
    assert static_permittivity(cond, T=300.0) is DC_DIVERGENCE
    # The marker is decided by the law's presence, not by float underflow of
    # the Boltzmann factor: still divergent at 1 K.
    assert static_permittivity(cond, T=1.0) is DC_DIVERGENCE
    # At exactly T = 0 the conductivity is gone and the base value returns.
    assert static_permittivity(cond, T=0.0) == pytest.approx(11.66)
    assert isinstance(eval_eps(IdealMetal(), 1e15, 300.0), DivergentPermittivity)
    assert eval_eps(IdealMetal(), 0.0, 0.0) is IDEAL_METAL_EPS


def test_matsubara_shift_identity():
    # At xi_l = 2 pi kB T l / hbar the conductive permittivity exceeds the
    # base by exactly beta(T)/l.
    base = single_oscillator(11.66)
    law = ConductivityLaw(form="bandgap", sigma_a=1e16, activation=0.05 * EV)
    cond = ConductiveDielectric(base=base, law=law)
    T = 300.0
    for l in (1, 2, 5, 40):
        xi_l = 2 * math.pi * k_B * T * l / hbar
        lhs = eval_eps(cond, xi_l, T)
        rhs = eval_eps(base, xi_l, T) + beta(law, T) / l
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_sigma0_exponents():
    law = ConductivityLaw(form="bandgap", sigma_a=2.0, activation=2 * k_B * 300.0)
    assert sigma0(law, 300.0) == pytest.approx(2.0 * math.exp(-1.0), rel=1e-12)
    assert sigma0(law, 0.0) == 0.0
    mott = ConductivityLaw(form="mott", sigma_a=3.0, activation=k_B * 100.0)
    assert sigma0(mott, 50.0) == pytest.approx(3.0 * math.exp(-2.0), rel=1e-12)


def test_beta_definition_and_trend():
    # sigma0(T) = kB T / (2 hbar) makes beta exactly 1.
    T = 123.0
    target = k_B * T / (2 * hbar)
    law = ConductivityLaw(form="mott", sigma_a=target / math.exp(-1.0), activation=k_B * T)
    assert beta(law, T) == pytest.approx(1.0, rel=1e-12)
    bg = ConductivityLaw(form="bandgap", sigma_a=1e15, activation=1.12 * EV)
    assert beta(bg, 25.0) < beta(bg, 50.0)
    assert beta(bg, 0.0) == 0.0


def test_resistivity_conversion():
    # 2e-4 ohm m (2e-2 ohm cm): 4 pi sigma0 = 1/(eps_vac rho) ~ 5.65e14 rad/s.
    s = resistivity_to_sigma(2e-4)
    assert 4 * math.pi * s == pytest.approx(5.647e14, rel=1e-3)
    assert resistivity_to_sigma(1e-4) == pytest.approx(2 * s, rel=1e-14)
    assert resistivity_to_sigma(1e12) < 1e-2
    with pytest.raises(DomainError):
        resistivity_to_sigma(0.0)


def test_ev_conversion():
    assert ev_to_radps(1.0) == pytest.approx(1.519267447e15, rel=1e-8)
    assert ev_to_radps(0.0) == 0.0
    assert ev_to_radps(10.33) == pytest.approx(1.569e16, rel=1e-3)


@settings(max_examples=60, deadline=None)
@given(
    eps0=st.floats(min_value=1.2, max_value=20.0),
    gamma_frac=st.floats(min_value=0.0, max_value=0.5),
    x1=st.floats(min_value=0.0, max_value=1e17),
    x2=st.floats(min_value=1e10, max_value=1e17),
)
def test_eps_monotonically_decreasing(eps0, gamma_frac, x1, x2):
    omega = 8e15
    m = OscillatorModel((Oscillator(g=(eps0 - 1) * omega**2, omega=omega,
                                    gamma=gamma_frac * omega),))
    lo, hi = sorted((x1, x1 + x2))
    assert m.eps(hi) < m.eps(lo)


def test_np_model_monotone_with_debye():
    mica = builtin_material("mica")
    xs = np.logspace(5, 17, 60)
    values = [mica.eps(x) for x in xs]
    assert all(a > b for a, b in zip(values, values[1:]))


# ---------------------------------------------------------------------------
# Toggles
# ---------------------------------------------------------------------------

def test_apply_toggles():
    doped = builtin_material("silicon-doped")
    assert isinstance(apply_toggles(doped, include_conductivity=False), OscillatorModel)
    mica = builtin_material("mica")
    off = apply_toggles(mica, include_debye=False)
    assert not off.include_debye
    assert apply_toggles(off, include_debye=False) is off
    metal = IdealMetal()
    assert apply_toggles(metal, include_conductivity=False) is metal


# ---------------------------------------------------------------------------
# Files
# ---------------------------------------------------------------------------

def test_bundled_materials_load():
    for name, kind in (
        ("mica", NinhamParsegianModel),
        ("mica-electronic", OscillatorModel),
        ("silicon", OscillatorModel),
        ("silicon-doped", ConductiveDielectric),
        ("ideal-metal", IdealMetal),
        ("vacuum", NinhamParsegianModel),
    ):
        declared, model = load_material_named(builtin_material_path(name))
        assert declared == name
        assert isinstance(model, kind)
    assert builtin_material("vacuum").eps(1e15) == 1.0


def test_loader_rejects_zero_resonance(tmp_path):
    bad = tmp_path / "bad.mat"
    bad.write_text(
        "name = bad\nmodel = oscillator\n\noscillator:\n    g = 1e30 (rad/s)^2\n    omega = 0 rad/s\n"
    )
    with pytest.raises(MaterialFileError, match="resonance frequency"):
        load_material(bad)


def test_loader_rejects_unknown_key(tmp_path):
    bad = tmp_path / "bad.mat"
    bad.write_text("name = x\nmodel = ideal-metal\nshine = 1\n")
    with pytest.raises(MaterialFileError, match="shine"):
        load_material(bad)


def test_loader_rejects_unknown_model(tmp_path):
    bad = tmp_path / "bad.mat"
    bad.write_text("name = x\nmodel = drude\n")
    with pytest.raises(MaterialFileError, match="drude"):
        load_material(bad)


def test_loader_error_carries_location(tmp_path):
    bad = tmp_path / "bad.mat"
    bad.write_text("name = x\nmodel = oscillator\n\noscillator:\n    g = spam\n    omega = 1 eV\n")
    with pytest.raises(MaterialFileError, match=r"bad\.mat:5"):
        load_material(bad)


def test_loader_units(tmp_path):
    f = tmp_path / "m.mat"
    f.write_text(
        "name = m\nmodel = conductive\nlaw = bandgap\nactivation = 1.12 eV\n"
        "sigma_a = 2e-2 ohm.cm\n\noscillator:\n    g = 157.93 eV^2\n    omega = 10.33 eV\n"
    )
    model = load_material(f)
    assert model.law.activation == pytest.approx(1.12 * EV, rel=1e-12)
    assert model.law.sigma_a == pytest.approx(resistivity_to_sigma(2e-4), rel=1e-12)
    assert model.base.eps(0.0) == pytest.approx(2.4800, abs=1e-3)


@pytest.mark.parametrize("name", ["mica", "silicon", "silicon-doped", "ideal-metal"])
def test_save_load_round_trip(name, tmp_path):
    model = builtin_material(name)
    out = tmp_path / f"{name}.mat"
    save_material(model, out, name=name)
    reloaded = load_material(out)
    rng = np.random.default_rng(7)
    for _ in range(100):
        xi = float(rng.uniform(0, 1e17))
        T = float(rng.uniform(1.0, 600.0))
        a = eval_eps(model, xi, T)
        b = eval_eps(reloaded, xi, T)
        if isinstance(a, DivergentPermittivity):
            assert b == a
        else:
            assert b == pytest.approx(a, rel=1e-12)
