"""Optimal symmetric 1->2 cloning of qubits from axisymmetric ensembles.

The ensemble of input states is any distribution on the Bloch sphere that is
symmetric about a fixed axis; its first two Legendre moments determine the
best symmetric cloner, which this package computes in closed form, simulates
exactly on three qubits, certifies against random and structured CPTP maps,
and compiles to a small quantum circuit.
"""

from .dist import (AxisDistribution, Belt, Brosseau, Delta, DeltaPair,
                   HenyeyGreenstein, MomentPair, Tabulated, Uniform,
                   VonMisesFisher, brosseau_integral, legendre_poly,
                   load_tabulated, marginal_density, moments,
                   quadrature_moments, spec_string, validate_moments)
from .errors import (CloneError, DegenerateDenominatorError, DomainError,
                     InfeasibleMomentsError, NonHermitianError, ParseError,
                     QuadratureError, UnsupportedKindError)
from .optimal import (ClonerParams, Regime, average_fidelity,
                      fidelity_from_angles, gamma, numeric_optimum,
                      optimal_angles, pcc_params, single_copy_fidelity,
                      uc_params, UC_ALPHA)
from .qsim import (AxisFrame, PureQubit, apply_clone, clone_fidelity_sim,
                   clone_isometry, partial_trace, rotate_frame)
from .choi import (build_merit, choi_fidelity, choi_from_params,
                   constrained_maximize, max_sampled_fidelity,
                   optimality_report, random_cptp, symmetry_blocks)
from .circuit import (Circuit, Gate, build_circuit, circuit_unitary,
                      gate_matrix)

__version__ = "0.1.0"
