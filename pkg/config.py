"""
Configuration module for the Beltrami verification toolkit.

This module contains all configuration settings and constants used throughout the application.
"""

import os
from fractions import Fraction

VERSION = "0.3.0"

# Base directory configuration
DEFAULT_BASE_DIR = os.path.dirname(os.path.abspath(__file__))
DEFAULT_OUTPUT_DIR = os.environ.get(
    "BELTRAMI_OUTPUT_DIR", os.path.join(DEFAULT_BASE_DIR, "results")
)

# Logging configuration
LOG_LEVEL = "INFO"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_FILE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
LOGGER_NAME = "beltrami"
DEFAULT_LOG_PREFIX = "beltrami"

# Bootstrap engine
DEFAULT_MAX_ITER = 64

# Numerical suite defaults
DEFAULT_TORUS_GRID = 32
DEFAULT_BALL_GRID = 64
DEFAULT_DT = 1e-3
DEFAULT_T_END = 1.0
DEFAULT_VISCOSITY = 1.0
DEFAULT_XI = Fraction(1, 4)
DEFAULT_QUAD_ORDER = 8
DEFAULT_DELTAS = (0.2, 0.1, 0.05, 0.025)
DEFAULT_EPSILON = 0.25
# Divergence refinement: the support edge spans about 2 delta xi and must be resolved at N = 32
REFINEMENT_DELTA = 0.5
REFINEMENT_XI = Fraction(3, 10)
DEFAULT_SEED = 20240917

# Advective CFL limit for classical RK4 on the imaginary axis
RK4_STABILITY_LIMIT = 2.8

# Radius below which the transversal field is a polynomial blend
TRANSVERSAL_BLEND_RADIUS = 0.5

# Citation tags carried by every verdict so CSV output can be audited
CITATIONS = {
    "euler_gradient": "Thm1.1",
    "euler_curl": "Cor1.2",
    "elementary": "Prop1.3",
    "euler_beltrami": "Thm1.4",
    "nse_gradient_i": "Thm1.5(i)",
    "nse_gradient_ii": "Thm1.5(ii)",
    "nse_curl": "Rem-Thm1.5",
    "nse_beltrami": "Thm1.6",
    "nse_regularity": "Thm1.7",
    "remark_exact": "Rem1",
    "a_fortiori": "Rem2",
    "beta_zero": "Cor1.8",
    "scaling": "scaling-nabla",
    "constant_lambda": "const-lambda",
}

ENGINE_DERIVED_NOTE = "engine-derived, not theorem-stated"

# CSV column layouts
VERDICT_COLUMNS = ("command", "verdict", "citation", "time_exp", "space_exp", "note")
TRACE_COLUMNS = ("n", "p", "q", "scaling", "route", "energy", "regularity")
LN_RN_COLUMNS = (
    "n", "L_lo", "L_hi", "R_lo", "R_hi", "crossover",
    "alpha_at_L_left", "level_L", "level_R",
)
REGULARITY_COLUMNS = (
    "alpha", "beta", "verdict", "citation", "n", "side",
    "remark_alpha", "theorem_level", "theorem_alpha",
)
BETA0_COLUMNS = ("alpha", "beta", "level", "n_bar", "beta0", "verdict", "citation")
ELEMENTARY_COLUMNS = ("quantity", "time_exp", "sobolev_order", "space_exp")
LEDGER_COLUMNS = ("t", "E", "D", "E_plus_D_minus_E0_rel", "beltrami_residual", "analytic_E")
RESIDUAL_COLUMNS = ("field", "lambda", "beltrami_residual", "lamb_residual", "divergence_max")
FIELD_SUMMARY_COLUMNS = ("quantity", "value")

# Mollifier experiment tables (delta or grid size first)
CONVERGENCE_COLUMNS = ("delta", "error_lq")
GRADIENT_BOUND_COLUMNS = ("delta", "gradient_lq", "note")
SUPPORT_COLUMNS = ("delta", "support_margin", "required_margin")
COMMUTATION_COLUMNS = ("delta", "epsilon", "commutation_residual")
UNIFORM_TIME_COLUMNS = ("delta", "max_t_error_lq")
TIME_GRADIENT_COLUMNS = ("delta", "gradient_lp_lq")
DIVERGENCE_COLUMNS = ("N", "interior_div_l2", "ball_div_l2")
JACOBIAN_COLUMNS = ("delta", "piola_deviation_sup", "ratio")
