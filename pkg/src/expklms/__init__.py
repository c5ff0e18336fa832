"""Exp-KL-MS: Maillard-style sampling for one-parameter exponential-family bandits."""
from .errors import ConfigError, ConvergenceError, DomainError, UnsupportedModeError
from .oped import Bernoulli, Gamma, Gaussian, InverseGaussian, OpedFamily, Poisson, make_family
from .policies import IDENTITY, KLUCB, SHIFT_BY_ONE, ExpKLMS, PolicyState, Temperature, Uniform, scaled
from .simulator import BanditInstance, RegretTrace, SweepResult, run_episode, run_sweep

__all__ = [
    "BanditInstance", "Bernoulli", "ConfigError", "ConvergenceError", "DomainError", "ExpKLMS", "Gamma",
    "Gaussian", "IDENTITY", "InverseGaussian", "KLUCB", "OpedFamily", "Poisson", "PolicyState", "RegretTrace",
    "SHIFT_BY_ONE", "SweepResult", "Temperature", "Uniform", "UnsupportedModeError", "make_family",
    "run_episode", "run_sweep", "scaled",
]
