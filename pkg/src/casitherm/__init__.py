"""Thermal Casimir / van der Waals interaction of thick parallel plates.

Free energy, pressure and entropy from the Matsubara-sum formulation with
pluggable dielectric-response models, plus the closed-form limits needed
to test thermodynamic consistency of the result.
"""

from .asymptotics import (
    LowTCoefficients,
    SeriesResult,
    entropy_low_t,
    free_energy_low_t,
    high_temperature_free_energy,
    low_t_coefficients,
    nernst_violation_constant,
    orientation_correction,
    reduced_temperature,
    transition_jump,
)
from .errors import (
    ConvergenceError,
    DomainError,
    MaterialFileError,
    SeriesValidityError,
    UndefinedRatioError,
)
from .lifshitz import (
    FreeEnergyResult,
    PlateSystem,
    TermResult,
    ThermalState,
    free_energy,
    matsubara_free_energy,
    pressure,
    reflection,
    term_integral,
    thermal_correction,
    zero_temperature_energy,
)
from .materials import (
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
from .specfun import ZETA3, polylog, zeta3
from .thermo import (
    EntropyPoint,
    NernstVerdict,
    entropy,
    nernst_default_grid,
    nernst_scan,
    relative_thermal_correction,
)

__version__ = "0.1.0"
