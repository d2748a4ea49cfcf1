"""Dyon topological phases, Witten-effect charges, theta-vacua and their numerical oracles."""
from .errors import (ContractError, ConvergenceError, DivergenceError, DomainError, DyonlabError,
                     InstabilityError, InvalidRunError)
from .units import (DEFAULT_CONSTANTS, DyonCharge, FluxTube, PhysicalConstants, duality_rotate,
                    elementary_flux, flux_from_integers, make_constants, sz_check, sz_pairing,
                    witten_charges)
from .phases import (PhaseResult, dyon_phase, dyon_phase_split, effective_alpha, flux_rule_phase,
                     heuristic_string_phase, theta_phase, theta_phase_from_g)
from .gauge import (PlanePath, PlanePoint, beta_gradient, conjugate_momentum, conjugate_momentum_field,
                    line_integral, vector_potentials, winding_number)
from .vacua import (ThetaVacuum, WindingState, build_theta_vacuum, dyon_state_factor, eigenvalue_residual,
                    overlap, winding_shift)
from .scattering import (ScatteringSpec, ab_cross_section, partial_wave_cross_section,
                         theta_cross_section)
from .dynamics import (EvolveConfig, Grid2D, LinkPhases, WaveField, build_link_phases, evolve,
                       gaussian_packet)
from .interferometry import PacketGeometry, SlitGeometry, fringe_shift, two_path_phase

__version__ = "0.1.0"
