"""Unconventional photon blockade in coupled Kerr cavities with mixed input-output channels."""

from .fock import FockSpace, annihilation, creation, expectation, number_operator
from .model import (
    DrivePair,
    SystemParams,
    build_hamiltonian,
    drive_pair,
    input_mixing,
    optimal_detunings,
    optimal_nonlinearity,
    upb_parameters,
)
from .lindblad import build_liouvillian, convergence_check, liouvillian, solve, steady_state
from .inout import OutputMode, g2_out, n_out, output_mode, output_operator
from .analytic import analytic_g2, analytic_n_out, perfect_antibunching_check, weak_pump_amplitudes
from .explore import (
    calibrate_pump,
    find_local_minima,
    occupation_minimum,
    scan_dephasing,
    scan_fixed_detuning,
    sweep_detunings,
    track_minimum,
)

__version__ = "0.1.0"
