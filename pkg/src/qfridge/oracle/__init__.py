"""Brute-force master-equation oracle on a truncated two-mode Fock space."""

from .fock import (DimensionCapError, FockConfig, ModeOperators, build_mode_operators,
                   levels_for_occupation, shells_for_occupation)
from .generator import (BareBaths, DressedBaths, GaussianNoise, Generator, PoissonDressed,
                        PoissonKick, WorkBathFiniteT, build_generator, kick_unitary)
from .models import (SingularBathReport, auto_config, gaussian_generator, poisson_auto_config,
                     poisson_generator, singular_bath_limit_check, solve_gaussian,
                     solve_poisson, work_bath_generator)
from .solve import (OracleResult, StationaryDensity, TruncationReport, currents_from_density,
                    moment_derivatives, solve_oracle, stationary_density, su2_moments,
                    truncation_sweep)
