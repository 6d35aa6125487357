"""Toolkit for a phase-shift regulated differential class-E resonant
wireless-power receiver: switched-linear time-domain simulation, periodic
steady-state solving, harmonic/ZVS/ripple analytics, reactive and magnetic
component sizing, small-signal models with PI synthesis, and closed-loop
transient studies.
"""

from .circuit import (
    LinearDynamics,
    Mode,
    PhaseShift,
    ReceiverParams,
    StateVector,
    assemble_mode_dynamics,
    source_current,
    swap_legs,
)
from .analytics import (
    OperatingPoint,
    Spectrum,
    analytic_waveforms,
    gamma,
    output_operating_point,
    real_power,
    spectrum,
    vm,
)
from .closedloop import (
    Scenario,
    TransientResult,
    measure_frequency_response,
    regulation_sweep,
    run_transient,
)
from .control import (
    PIGains,
    PIState,
    TransferFunction1P,
    bode_points,
    current_tf,
    design_pi,
    pi_step,
    tustin_discretize,
    voltage_tf,
)
from .design import (
    DesignResult,
    DesignSpec,
    MagneticGeometry,
    feasible_region,
    inductance_bounds,
    magnetic_inductance,
    resonant_capacitance,
    ripple_bound,
    size_receiver,
    solve_alpha,
    solve_magnetic_design,
    split_capacitance,
)
from .errors import ConfigError, ConvergenceError, ValidationError, WptrxError
from .simulator import (
    SteadyState,
    Waveform,
    ZvsReport,
    exact_propagate,
    integrate,
    periodic_steady_state,
    ripple_metrics,
    settle_by_periods,
    zvs_metrics,
)
from .syncpwm import GateTimeline, pwm_generate, quantize_phase, zero_cross_detect

__version__ = "0.1.0"
