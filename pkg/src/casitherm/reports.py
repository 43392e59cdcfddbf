"""Row computation for the sweep commands.

Kept separate from the CLI so the verification suite can exercise exactly
the same code paths.  Grid points are independent; with workers > 1 they
are evaluated in a process pool and gathered back in grid order, so the
output is identical either way.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

from .errors import UndefinedRatioError
from .lifshitz import PlateSystem, free_energy
from .materials import PermittivityModel, apply_toggles
from .thermo import entropy

#: Separations of the triple-panel thermal-correction report (m).
FIG4B_SEPARATIONS = (1e-7, 5e-7, 1e-6)

FREE_ENERGY_HEADER = (
    "a_m", "T_K", "F_J_per_m2", "E0_J_per_m2", "deltaTF_rel", "l_max", "converged"
)
ENTROPY_HEADER = ("a_m", "T_K", "S_J_per_m2K", "err_estimate")
FIG4B_HEADER = (
    "T_K",
    "rel_a100nm_debye_off", "rel_a100nm_debye_on",
    "rel_a500nm_debye_off", "rel_a500nm_debye_on",
    "rel_a1000nm_debye_off", "rel_a1000nm_debye_on",
)


def _map_ordered(func, items, workers: int = 1):
    if workers <= 1:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _free_energy_point(args):
    mat1, mat2, a, T, trunc_rtol, term_epsabs = args
    res = free_energy(PlateSystem(mat1, mat2, a), T,
                      trunc_rtol=trunc_rtol, term_epsabs=term_epsabs)
    rel = res.deltaTF / res.E0 if res.E0 != 0.0 else math.nan
    return (a, T, res.F, res.E0, rel, res.l_max, res.converged)


def free_energy_rows(
    mat1: PermittivityModel,
    mat2: PermittivityModel,
    a_values,
    T_values,
    trunc_rtol: float = 1e-10,
    term_epsabs: float = 1e-13,
    workers: int = 1,
):
    points = [
        (mat1, mat2, a, T, trunc_rtol, term_epsabs)
        for a in a_values
        for T in T_values
    ]
    return FREE_ENERGY_HEADER, _map_ordered(_free_energy_point, points, workers)


def _entropy_point(args):
    mat1, mat2, a, T = args
    point = entropy(PlateSystem(mat1, mat2, a), T)
    return (a, T, point.S, point.err_estimate)


def entropy_rows(mat1, mat2, a_values, T_values, workers: int = 1):
    points = [(mat1, mat2, a, T) for a in a_values for T in T_values]
    return ENTROPY_HEADER, _map_ordered(_entropy_point, points, workers)


def _fig4b_point(args):
    model_off, model_on, T = args
    row = [T]
    for a in FIG4B_SEPARATIONS:
        for model in (model_off, model_on):
            res = free_energy(PlateSystem(model, model, a), T)
            if res.E0 == 0.0:
                raise UndefinedRatioError("vanishing zero-temperature energy")
            row.append(res.deltaTF / res.E0)
    return tuple(row)


def fig4b_rows(model: PermittivityModel, T_values, workers: int = 1):
    """Relative thermal correction at 100 nm / 500 nm / 1 um with the Debye
    term excluded and included, one row per temperature."""
    model_on = model
    model_off = apply_toggles(model, include_debye=False)
    points = [(model_off, model_on, T) for T in T_values]
    return FIG4B_HEADER, _map_ordered(_fig4b_point, points, workers)


def format_cell(value) -> str:
    """Deterministic CSV cell: 12 significant digits for floats."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return f"{value:.11e}"


def rows_to_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"
