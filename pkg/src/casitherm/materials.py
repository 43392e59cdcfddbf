"""Dielectric response evaluated on the imaginary frequency axis.

Every model is a small frozen dataclass with an ``eps(xi, T)`` method
returning the permittivity at imaginary frequency ``i*xi`` (xi in rad/s,
xi >= 0) and temperature ``T`` (K).  Internal units are rad/s for
frequencies, J for energies, s for times; dc conductivity is carried in
the Gaussian convention, i.e. the quantity that augments the permittivity
is ``4 pi sigma0(T) / xi`` with sigma0 in rad/s.

A dc-conductive model diverges at xi = 0 and an ideal metal diverges at
every xi.  Both cases are represented by an explicit marker object, never
by a large float, so that reflection coefficients downstream can take
their exact limits.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Union

from scipy.constants import e as _ELEMENTARY_CHARGE
from scipy.constants import epsilon_0 as _EPS_VAC
from scipy.constants import hbar as _HBAR
from scipy.constants import k as _K_B

from .errors import DomainError, MaterialFileError

#: Angular frequency of a 1 eV photon, rad/s.
EV_IN_RADPS = _ELEMENTARY_CHARGE / _HBAR

#: 1 eV in joule.
EV_IN_J = _ELEMENTARY_CHARGE

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class DivergentPermittivity:
    """Marker for an infinite permittivity.

    ``te_zero_limit`` records how the TE reflection behaves in the
    zero-frequency limit: 1.0 for an ideal metal (perfect reflector at all
    frequencies), 0.0 for a dc-conductivity divergence (eps*xi^2 -> 0
    kills the TE channel).
    """

    te_zero_limit: float


IDEAL_METAL_EPS = DivergentPermittivity(te_zero_limit=1.0)
DC_DIVERGENCE = DivergentPermittivity(te_zero_limit=0.0)

EpsValue = Union[float, DivergentPermittivity]


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Oscillator:
    """One damped-oscillator contribution g / (omega^2 + xi^2 + gamma*xi).

    g : strength, (rad/s)^2, > 0
    omega : resonance frequency, rad/s, strictly > 0
    gamma : damping, rad/s, >= 0
    """

    g: float
    omega: float
    gamma: float = 0.0

    def __post_init__(self):
        if not self.omega > 0.0:
            raise DomainError("oscillator resonance frequency must be > 0")
        if not self.g > 0.0:
            raise DomainError("oscillator strength must be > 0")
        if self.gamma < 0.0:
            raise DomainError("oscillator damping must be >= 0")


@dataclass(frozen=True)
class OscillatorModel:
    """Sum of oscillators; finite static permittivity 1 + sum g_j / omega_j^2."""

    oscillators: tuple[Oscillator, ...]

    def __post_init__(self):
        osc = tuple(self.oscillators)
        if not osc:
            raise DomainError("oscillator model needs at least one oscillator")
        object.__setattr__(self, "oscillators", osc)

    def eps(self, xi: float, T: float = 0.0) -> float:
        total = 1.0
        for o in self.oscillators:
            total += o.g / (o.omega * o.omega + xi * xi + o.gamma * xi)
        return total


@dataclass(frozen=True)
class ConductivityLaw:
    """Activated dc conductivity sigma0(T) = sigma_a * exp(-activation/(s*kB*T)).

    ``form`` selects the exponent convention: "bandgap" divides the
    activation energy by 2*kB*T, "mott" by kB*T.  The prefactor sigma_a is
    a Gaussian-convention conductivity in rad/s; activation is stored in J.
    """

    form: str
    sigma_a: float
    activation: float

    def __post_init__(self):
        if self.form not in ("bandgap", "mott"):
            raise DomainError(f"unknown conductivity law {self.form!r}")
        if not self.sigma_a > 0.0:
            raise DomainError("conductivity prefactor must be > 0")
        if not self.activation > 0.0:
            raise DomainError("activation energy must be > 0")


def sigma0(law: ConductivityLaw, T: float) -> float:
    """dc conductivity at temperature T (rad/s); exactly 0 at T = 0."""
    if T < 0.0:
        raise DomainError("temperature must be >= 0")
    if T == 0.0:
        return 0.0
    divisor = 2.0 if law.form == "bandgap" else 1.0
    return law.sigma_a * math.exp(-law.activation / (divisor * _K_B * T))


def beta(law: ConductivityLaw, T: float) -> float:
    """Dimensionless conductivity weight 2*hbar*sigma0(T)/(kB*T); 0 at T = 0."""
    if T < 0.0:
        raise DomainError("temperature must be >= 0")
    if T == 0.0:
        return 0.0
    return 2.0 * _HBAR * sigma0(law, T) / (_K_B * T)


@dataclass(frozen=True)
class ConductiveDielectric:
    """Oscillator dielectric augmented by activated dc conductivity.

    At any T > 0 the permittivity diverges at xi = 0 (marker); the
    divergence is decided by the presence of the law, not by whether
    exp(-activation/..) underflows, so the zero-frequency limit stays
    exact down to arbitrarily low temperature.  At T = 0 the model
    reduces to its base.
    """

    base: OscillatorModel
    law: ConductivityLaw

    def eps(self, xi: float, T: float = 0.0) -> EpsValue:
        if xi == 0.0:
            if T > 0.0:
                return DC_DIVERGENCE
            return self.base.eps(0.0, T)
        return self.base.eps(xi, T) + FOUR_PI * sigma0(self.law, T) / xi


@dataclass(frozen=True)
class NinhamParsegianModel:
    """UV + IR oscillator terms plus an optional Debye (orientation) term.

    eps(i xi) = 1 + f_uv/(w_uv^2+xi^2) + f_ir/(w_ir^2+xi^2) + d/(1+xi*tau_debye)

    d and tau_debye are held at their construction values at all
    temperatures.  Zero strengths are allowed, so the degenerate case
    f_uv = f_ir = d = 0 doubles as the vacuum model (eps = 1).
    """

    f_uv: float
    omega_uv: float
    f_ir: float
    omega_ir: float
    d: float = 0.0
    tau_debye: float = 0.0
    include_debye: bool = True

    def __post_init__(self):
        if not self.omega_uv > 0.0 or not self.omega_ir > 0.0:
            raise DomainError("oscillator frequencies must be > 0")
        if self.f_uv < 0.0 or self.f_ir < 0.0 or self.d < 0.0:
            raise DomainError("strengths and the Debye amplitude must be >= 0")
        if self.tau_debye < 0.0:
            raise DomainError("Debye relaxation time must be >= 0")
        if self.include_debye and self.d > 0.0 and not self.tau_debye > 0.0:
            raise DomainError("a Debye term with d > 0 needs tau_debye > 0")

    def eps(self, xi: float, T: float = 0.0) -> float:
        value = (
            1.0
            + self.f_uv / (self.omega_uv * self.omega_uv + xi * xi)
            + self.f_ir / (self.omega_ir * self.omega_ir + xi * xi)
        )
        if self.include_debye:
            value += self.d / (1.0 + xi * self.tau_debye)
        return value


@dataclass(frozen=True)
class IdealMetal:
    """Perfect reflector: both reflection coefficients are 1 at all (zeta, y)."""

    def eps(self, xi: float, T: float = 0.0) -> DivergentPermittivity:
        return IDEAL_METAL_EPS


PermittivityModel = Union[
    OscillatorModel, ConductiveDielectric, NinhamParsegianModel, IdealMetal
]


# ---------------------------------------------------------------------------
# Evaluation helpers
# ---------------------------------------------------------------------------

def eval_eps(model: PermittivityModel, xi: float, T: float) -> EpsValue:
    """Permittivity at imaginary frequency i*xi and temperature T.

    Returns a float >= 1 or a :class:`DivergentPermittivity` marker.
    Raises :class:`DomainError` for negative xi or T.
    """
    if xi < 0.0:
        raise DomainError("imaginary frequency must be >= 0")
    if T < 0.0:
        raise DomainError("temperature must be >= 0")
    return model.eps(xi, T)


def static_permittivity(model: PermittivityModel, T: float = 0.0) -> EpsValue:
    """Zero-frequency permittivity (may be the divergence marker)."""
    return eval_eps(model, 0.0, T)


def resistivity_to_sigma(rho: float) -> float:
    """Gaussian-convention conductivity (rad/s) equivalent to a resistivity.

    The convention is fixed so that the combination entering the
    permittivity satisfies 4*pi*sigma0 [rad/s] = 1 / (eps_vac * rho[ohm m]).
    """
    if not rho > 0.0:
        raise DomainError("resistivity must be > 0")
    return 1.0 / (FOUR_PI * _EPS_VAC * rho)


def ev_to_radps(energy_ev: float) -> float:
    """Convert an energy in eV to an angular frequency in rad/s."""
    return energy_ev * EV_IN_RADPS


def apply_toggles(
    model: PermittivityModel,
    include_conductivity: bool = True,
    include_debye: bool = True,
) -> PermittivityModel:
    """Degrade a model according to the run toggles.

    Switching conductivity off replaces a ConductiveDielectric by its base
    model; switching the Debye term off disables it in a Ninham-Parsegian
    model.  Other models pass through unchanged.
    """
    if isinstance(model, ConductiveDielectric) and not include_conductivity:
        return model.base
    if isinstance(model, NinhamParsegianModel) and not include_debye:
        if model.include_debye:
            return replace(model, include_debye=False)
    return model


# ---------------------------------------------------------------------------
# Material description files
# ---------------------------------------------------------------------------
#
# Line oriented key = value text; '#' starts a comment, blank lines are
# ignored.  Required top-level keys: name, model.  model selects the
# variant and its keys:
#
#   model = oscillator         one or more oscillator blocks
#   model = conductive         law, activation, sigma_a + oscillator blocks
#   model = ninham-parsegian   omega_uv, f_uv, omega_ir, f_ir
#                              optional: d, tau_debye, debye = on|off
#   model = ideal-metal        no further keys
#
# An oscillator block is opened by a line "oscillator:" and collects the
# keys g (required), omega (required) and gamma (optional) until a blank
# line, the next "oscillator:" line, or end of file.
#
# Numeric values may carry a unit suffix.  Accepted units by field kind:
#   frequencies (omega, omega_uv, omega_ir):  rad/s (default), eV
#   strengths  (g, f_uv, f_ir):               (rad/s)^2 (default), rad/s^2, eV^2
#   energies   (activation):                  J (default), eV
#   times      (tau_debye):                   s
#   conductivity prefactor (sigma_a):         rad/s (default); ohm.cm or
#                                             ohm.m give a resistivity that
#                                             is converted via
#                                             resistivity_to_sigma()
#   d is dimensionless and takes no unit.
#
# Unknown keys, unknown model tags and construction-invariant violations
# are rejected with the offending file location.

_FREQ_UNITS = {"rad/s": 1.0, "ev": EV_IN_RADPS}
_STRENGTH_UNITS = {"(rad/s)^2": 1.0, "rad/s^2": 1.0, "ev^2": EV_IN_RADPS**2, "ev2": EV_IN_RADPS**2}
_ENERGY_UNITS = {"j": 1.0, "ev": EV_IN_J}
_TIME_UNITS = {"s": 1.0}

_MODEL_TAGS = ("oscillator", "conductive", "ninham-parsegian", "ideal-metal")

_TOP_KEYS = {
    "oscillator": set(),
    "conductive": {"law", "activation", "sigma_a"},
    "ninham-parsegian": {"omega_uv", "f_uv", "omega_ir", "f_ir", "d", "tau_debye", "debye"},
    "ideal-metal": set(),
}

_NP_REQUIRED = ("omega_uv", "f_uv", "omega_ir", "f_ir")


def _fail(path, lineno, message):
    raise MaterialFileError(f"{path}:{lineno}: {message}")


def _parse_number(path, lineno, key, raw, units):
    parts = raw.split(None, 1)
    try:
        value = float(parts[0])
    except (ValueError, IndexError):
        _fail(path, lineno, f"field {key!r}: expected a number, got {raw!r}")
    if len(parts) == 1:
        return value
    unit = parts[1].strip().lower()
    if units is None:
        _fail(path, lineno, f"field {key!r} is dimensionless, got unit {parts[1]!r}")
    if unit not in units:
        allowed = ", ".join(sorted(units))
        _fail(path, lineno, f"field {key!r}: unknown unit {parts[1]!r} (accepted: {allowed})")
    return value * units[unit]


def _parse_sigma(path, lineno, key, raw):
    parts = raw.split(None, 1)
    try:
        value = float(parts[0])
    except (ValueError, IndexError):
        _fail(path, lineno, f"field {key!r}: expected a number, got {raw!r}")
    unit = parts[1].strip().lower() if len(parts) > 1 else "rad/s"
    if unit == "rad/s":
        return value
    if unit in ("ohm.m", "ohm.cm"):
        rho = value if unit == "ohm.m" else value * 1e-2
        try:
            return resistivity_to_sigma(rho)
        except DomainError as exc:
            _fail(path, lineno, f"field {key!r}: {exc}")
    _fail(path, lineno, f"field {key!r}: unknown unit {parts[1]!r} (accepted: rad/s, ohm.cm, ohm.m)")


def _scan(path: Path):
    """Tokenize into (lineno, kind, key, value) entries."""
    entries = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].rstrip()
        if not line.strip():
            entries.append((lineno, "blank", None, None))
            continue
        stripped = line.strip()
        if stripped == "oscillator:":
            entries.append((lineno, "oscblock", None, None))
            continue
        m = re.match(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+?)\s*$", stripped)
        if not m:
            _fail(path, lineno, f"cannot parse line {stripped!r}")
        entries.append((lineno, "kv", m.group(1).lower(), m.group(2)))
    return entries


def _parse_file(path: Path):
    path = Path(path)
    if not path.exists():
        raise MaterialFileError(f"{path}: no such file")
    entries = _scan(path)

    top: dict[str, tuple[int, str]] = {}
    blocks: list[tuple[int, dict[str, tuple[int, str]]]] = []
    in_block = False
    for lineno, kind, key, value in entries:
        if kind == "blank":
            in_block = False
        elif kind == "oscblock":
            blocks.append((lineno, {}))
            in_block = True
        elif in_block:
            if key not in ("g", "omega", "gamma"):
                _fail(path, lineno, f"unknown oscillator key {key!r}")
            if key in blocks[-1][1]:
                _fail(path, lineno, f"duplicate oscillator key {key!r}")
            blocks[-1][1][key] = (lineno, value)
        else:
            if key in top:
                _fail(path, lineno, f"duplicate key {key!r}")
            top[key] = (lineno, value)

    if "name" not in top:
        _fail(path, 1, "missing required key 'name'")
    if "model" not in top:
        _fail(path, 1, "missing required key 'model'")
    name = top.pop("name")[1]
    model_lineno, tag = top.pop("model")
    tag = tag.strip().lower()
    if tag not in _MODEL_TAGS:
        _fail(path, model_lineno, f"unknown model tag {tag!r} (accepted: {', '.join(_MODEL_TAGS)})")

    allowed = _TOP_KEYS[tag]
    for key, (lineno, _) in top.items():
        if key not in allowed:
            _fail(path, lineno, f"unknown key {key!r} for model {tag!r}")

    needs_osc = tag in ("oscillator", "conductive")
    if needs_osc and not blocks:
        _fail(path, 1, f"model {tag!r} needs at least one oscillator block")
    if not needs_osc and blocks:
        _fail(path, blocks[0][0], f"model {tag!r} takes no oscillator blocks")

    oscillators = []
    for block_lineno, block in blocks:
        for req in ("g", "omega"):
            if req not in block:
                _fail(path, block_lineno, f"oscillator block is missing key {req!r}")
        g = _parse_number(path, block["g"][0], "g", block["g"][1], _STRENGTH_UNITS)
        omega = _parse_number(path, block["omega"][0], "omega", block["omega"][1], _FREQ_UNITS)
        gamma = 0.0
        if "gamma" in block:
            gamma = _parse_number(path, block["gamma"][0], "gamma", block["gamma"][1], _FREQ_UNITS)
        try:
            oscillators.append(Oscillator(g=g, omega=omega, gamma=gamma))
        except DomainError as exc:
            _fail(path, block_lineno, f"invalid oscillator: {exc}")

    def build():
        if tag == "ideal-metal":
            return IdealMetal()
        if tag == "oscillator":
            return OscillatorModel(oscillators=tuple(oscillators))
        if tag == "conductive":
            for req in ("law", "activation", "sigma_a"):
                if req not in top:
                    _fail(path, 1, f"model 'conductive' is missing key {req!r}")
            law_lineno, law_raw = top["law"]
            law_form = law_raw.strip().lower()
            activation = _parse_number(path, top["activation"][0], "activation",
                                       top["activation"][1], _ENERGY_UNITS)
            sigma_a = _parse_sigma(path, top["sigma_a"][0], "sigma_a", top["sigma_a"][1])
            try:
                law = ConductivityLaw(form=law_form, sigma_a=sigma_a, activation=activation)
            except DomainError as exc:
                _fail(path, law_lineno, str(exc))
            return ConductiveDielectric(
                base=OscillatorModel(oscillators=tuple(oscillators)), law=law
            )
        # ninham-parsegian
        for req in _NP_REQUIRED:
            if req not in top:
                _fail(path, 1, f"model 'ninham-parsegian' is missing key {req!r}")
        kwargs = {
            "omega_uv": _parse_number(path, top["omega_uv"][0], "omega_uv", top["omega_uv"][1], _FREQ_UNITS),
            "f_uv": _parse_number(path, top["f_uv"][0], "f_uv", top["f_uv"][1], _STRENGTH_UNITS),
            "omega_ir": _parse_number(path, top["omega_ir"][0], "omega_ir", top["omega_ir"][1], _FREQ_UNITS),
            "f_ir": _parse_number(path, top["f_ir"][0], "f_ir", top["f_ir"][1], _STRENGTH_UNITS),
        }
        if "d" in top:
            kwargs["d"] = _parse_number(path, top["d"][0], "d", top["d"][1], None)
        if "tau_debye" in top:
            kwargs["tau_debye"] = _parse_number(path, top["tau_debye"][0], "tau_debye",
                                                top["tau_debye"][1], _TIME_UNITS)
        if "debye" in top:
            flag_lineno, flag_raw = top["debye"]
            flag = flag_raw.strip().lower()
            if flag not in ("on", "off"):
                _fail(path, flag_lineno, f"field 'debye': expected on|off, got {flag_raw!r}")
            kwargs["include_debye"] = flag == "on"
        else:
            kwargs["include_debye"] = kwargs.get("d", 0.0) > 0.0
        try:
            return NinhamParsegianModel(**kwargs)
        except DomainError as exc:
            _fail(path, model_lineno, str(exc))

    return name, build()


def load_material(path) -> PermittivityModel:
    """Load and validate a material description file."""
    return _parse_file(Path(path))[1]


def load_material_named(path) -> tuple[str, PermittivityModel]:
    """Like :func:`load_material` but also returning the declared name."""
    return _parse_file(Path(path))


def save_material(model: PermittivityModel, path, name: str = "material") -> None:
    """Write a model back out in the canonical (rad/s) form of the grammar."""
    lines = [f"name = {name}"]

    def osc_lines(oscillators):
        out = []
        for o in oscillators:
            out.append("")
            out.append("oscillator:")
            out.append(f"    g = {o.g!r} (rad/s)^2")
            out.append(f"    omega = {o.omega!r} rad/s")
            out.append(f"    gamma = {o.gamma!r} rad/s")
        return out

    if isinstance(model, IdealMetal):
        lines.append("model = ideal-metal")
    elif isinstance(model, OscillatorModel):
        lines.append("model = oscillator")
        lines.extend(osc_lines(model.oscillators))
    elif isinstance(model, ConductiveDielectric):
        lines.append("model = conductive")
        lines.append(f"law = {model.law.form}")
        lines.append(f"activation = {model.law.activation!r} J")
        lines.append(f"sigma_a = {model.law.sigma_a!r} rad/s")
        lines.extend(osc_lines(model.base.oscillators))
    elif isinstance(model, NinhamParsegianModel):
        lines.append("model = ninham-parsegian")
        lines.append(f"omega_uv = {model.omega_uv!r} rad/s")
        lines.append(f"f_uv = {model.f_uv!r} (rad/s)^2")
        lines.append(f"omega_ir = {model.omega_ir!r} rad/s")
        lines.append(f"f_ir = {model.f_ir!r} (rad/s)^2")
        lines.append(f"d = {model.d!r}")
        lines.append(f"tau_debye = {model.tau_debye!r} s")
        lines.append(f"debye = {'on' if model.include_debye else 'off'}")
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    Path(path).write_text("\n".join(lines) + "\n")


def builtin_material_path(name: str) -> Path:
    """Path of a bundled material file (name with or without the .mat suffix)."""
    fname = name if name.endswith(".mat") else name + ".mat"
    ref = resources.files(__package__) / "data" / fname
    with resources.as_file(ref) as concrete:
        if not concrete.exists():
            raise MaterialFileError(f"no bundled material {name!r}")
        return Path(concrete)


def builtin_material(name: str) -> PermittivityModel:
    """Load a bundled material by name."""
    return load_material(builtin_material_path(name))
