"""Capacity of the amplitude-constrained discrete-time Poisson channel with dark current."""
from .channel import ChannelParams, DomainError, OutputTruncation, log_pmf, pmf_derivative, truncation_for
from .distribution import InputDistribution, OutputDistribution, cluster, induced_output, validate
from .information import capacity_sandwich, density_profile, info_density, mutual_information
from .blahut_arimoto import ba_run, ba_step
from .gradient_ascent import LineSearchConfig, ga_run, ga_step, mi_gradient
from .kkt import KktReport, kkt_update, kkt_validate
from .solver import SolverConfig, SolveResult, initial_support, solve, support_bounds

__version__ = "0.1.0"
