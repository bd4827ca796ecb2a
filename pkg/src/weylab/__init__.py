"""Numerical Weyl functions and L-system realizations for half-line Schrodinger operators."""
from .classify import (STANDARD_GRID, ClassificationReport, ExtensionClass, FunctionVerdict,
                       check_herglotz, check_stieltjes, classify_lsystem,
                       classify_main_operator, form_values)
from .errors import (BranchDomainError, EqualParamsRequired, Indeterminate, IntegrationFailure,
                     NoMatch, NonConvergence, NotReal, PoleError, SpecParseError,
                     TailTooLarge, Unavailable, WeylabError)
from .lsystem import (BoundaryCondition, LSystemParams, Target, alpha_for_mu,
                      donoghue_transform, impedance, impedance_values, mu_alpha,
                      quasi_kernel_xi, realize, transfer, transfer_values, xi_parameter)
from .potential import Potential, oracle_m_inf, parse_potential_spec
from .uniqueness import MatchReport, find_donoghue_alpha, impedance_match, shares_main_operator
from .weyl import (DEFAULT_CONFIG, SolverConfig, WeylEvaluation, m_alpha, m_inf,
                   m_inf_at_minus_zero, m_inf_many, solve_cauchy)

__version__ = "0.1.0"

__all__ = [
    "MatchReport",
    "Potential",
    "find_donoghue_alpha",
    "impedance_match",
    "oracle_m_inf",
    "parse_potential_spec",
    "shares_main_operator",
    "alpha_for_mu",
    "BoundaryCondition",
    "BranchDomainError",
    "check_herglotz",
    "check_stieltjes",
    "ClassificationReport",
    "classify_lsystem",
    "classify_main_operator",
    "DEFAULT_CONFIG",
    "donoghue_transform",
    "EqualParamsRequired",
    "ExtensionClass",
    "form_values",
    "FunctionVerdict",
    "impedance",
    "impedance_values",
    "Indeterminate",
    "IntegrationFailure",
    "LSystemParams",
    "m_alpha",
    "m_inf",
    "m_inf_at_minus_zero",
    "m_inf_many",
    "mu_alpha",
    "NoMatch",
    "NonConvergence",
    "NotReal",
    "PoleError",
    "quasi_kernel_xi",
    "realize",
    "solve_cauchy",
    "SolverConfig",
    "SpecParseError",
    "STANDARD_GRID",
    "TailTooLarge",
    "Target",
    "transfer",
    "transfer_values",
    "Unavailable",
    "WeylabError",
    "WeylEvaluation",
    "xi_parameter",
]
