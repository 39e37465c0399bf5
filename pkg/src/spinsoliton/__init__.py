"""Bright, dark and linear excitations of an XXZ spin chain in an oblique
magnetic field: coefficients, closed forms, lattice and continuum solvers,
diagnostics and figure presets."""

from .analytic import (SolitonParams, Kinematics, bright_soliton, dark_soliton, gauge_transform,
                       plane_wave, soliton_kinematics)
from .continuum import evolve, stability_dt
from .errors import (NumericBlowupError, ParameterError, RegimeMismatchError, SolitonError,
                     StepSizeError)
from .fields import Boundary, Field, Grid, Trajectory
from .model import (THETA_MAGIC, Coefficients, ModelParams, Regime, RegimeKind, classify_regime,
                    compute_coefficients)

__version__ = "0.1.0"
