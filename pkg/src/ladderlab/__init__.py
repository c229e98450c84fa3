"""Numerical laboratory for Jacob's ladder phi_1 and its reverse iterated integrals.

The ladder is the antiderivative of Z~^2 = Z^2 / omega, integrated from a
chosen anchor; iterated energies over reversed intervals reproduce their
upper shift g exactly by change of variables, which the checks verify.
"""

from .curve import (CriticalPointSet, CurveReport, arc_length, corollary3_check, curve_length_check,
                    find_critical_points, find_zeros)
from .energy import (EnergyResult, EnergySpec, Limits, VerificationReport, additivity_check,
                     canonical_factorization_check, change_of_variables_value, energy_integral,
                     example1_ratio, example2_ratio, multiplicativity_check, orthogonality_check,
                     unit_operator_check)
from .errors import (BracketError, CacheError, ConvergenceError, DomainError, GuardViolation,
                     LadderLabError, ZeroTableError)
from .ladder import (ComponentSet, IteratedInterval, LadderTable, StepPolicy, build_ladder,
                     component_set, interval_reverse, phi1, phi1_iter, reverse_iterate)
from .zeta_core import OmegaKind, hardy_z, hardy_z_prime, theta, z_tilde_sq

__version__ = "0.1.0"
