"""Field scattered by reconfigurable intelligent surfaces.

Two engines share one scene description: a physical-optics radiation integral
over equivalent surface sources and a sum of element wavelets. Diffuse
scattering from surface roughness is added in power.
"""

from .array import ElementPattern, array_field, element_field, feasibility_check
from .budget import AngleTable, PowerBudget, solve_diffuse, solve_rayleigh
from .core import AngularCut, PlanarGrid, RisPanel, WaveSpec
from .diffuse import DiffuseConfig, diffuse_intensity
from .errors import (
    BackIlluminationError,
    BudgetError,
    BudgetWarning,
    ContractError,
    DomainError,
    FeasibilityError,
    FeasibilityWarning,
    ReactiveNearFieldWarning,
    RisError,
    ScenarioError,
    WrongHalfSpaceError,
)
from .incident import PlaneWave, SphericalSource, eval_E, eval_H
from .integral import huygens_source, reradiate_E, reradiate_H, surface_currents
from .modulation import (
    Mode,
    ModulationProfile,
    constant_mode,
    focus_profile,
    gamma,
    gradient_profile,
    multimode_profile,
)
from .scan import Scene, compare_engines, grid_scan, pattern_cut, spreading_sweep, total_field

__version__ = "0.1.0"
