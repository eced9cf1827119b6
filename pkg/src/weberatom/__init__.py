"""weberatom: semiclassical quantization of Weber's hydrogen atom.

Library layout:

* hamiltonian -- models (Coulomb / Weber, electron-proton / proton-proton),
  energies, metric components, radial momentum, flow field
* actions     -- turning points, radial action (quadrature / closed form /
  second order), apsidal angle, radial period
* spectrum    -- quantized energy levels, level formulas, transition
  frequencies, comparison tables
* dynamics    -- symplectic orbit integration, apsides, periproton shift,
  rosette closure, proton-proton probe
* delay       -- retarded Coulomb action on loops and its Taylor expansion
* cli         -- command-line front end with CSV/JSON output
"""

from .hamiltonian import (
    Model,
    ModelParams,
    Pair,
    PhaseState,
    RadialCoefficients,
    critical_radius,
    eval_hamiltonian,
    flow_field,
    metric_components,
    neumann_potential,
    radial_momentum,
)
from .actions import (
    ActionMethod,
    ActionResult,
    TurningPoints,
    apsidal_angle,
    radial_action_closed_form,
    radial_action_quadrature,
    radial_action_second_order,
    radial_period,
    turning_points,
)
from .spectrum import (
    EnergyLevel,
    LevelMethod,
    QuantumNumbers,
    SpectrumRow,
    level_coulomb,
    level_exact,
    level_second_order_weber,
    level_sommerfeld,
    spectrum_table,
    transition_frequency,
    weber_sommerfeld_split,
)
from .dynamics import (
    Apsis,
    ApsisKind,
    Closure,
    IntegratorConfig,
    OrbitTrace,
    PPProbeReport,
    Scheme,
    ShiftMeasurement,
    detect_apsides,
    integrate,
    measure_periproton_shift,
    pp_probe,
    rosette_closure,
)
from .delay import (
    DelayParams,
    LoopSamples,
    eval_loop,
    kinetic_action,
    load_loop_csv,
    neumann_action,
    neumann_integrand,
    random_loop_corpus,
    retarded_action,
    taylor_coefficient_analytic,
    taylor_coefficient_numeric,
    truncation_check_loop,
    truncation_error,
)
from . import errors

__version__ = "0.1.0"
