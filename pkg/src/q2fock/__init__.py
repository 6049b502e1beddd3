"""Exact and numerical toolkit for the (q,2)-Fock space.

Submodules: ``fock`` (operator simulator), ``combinatorics``, ``moments``,
``distribution`` (generating functions and the vacuum law of the field
operator), ``verify`` (invariant registry) and ``cli``.
"""

from q2fock._accel import BACKEND
from q2fock.combinatorics import (
    EpsilonSequence,
    PairPartition,
    catalan,
    catalan_convolution,
    enumerate_epsilon_plus,
    enumerate_pp,
    ncpp_of_epsilon,
)
from q2fock.distribution import field_distribution, mgf_T, mgf_taylor, q2_distribution, spectral_params
from q2fock.fock import (
    FockState,
    OperatorWord,
    TestVector,
    annihilate,
    apply_word,
    create,
    vacuum_expectation,
)
from q2fock.moments import moment_table, u_by_jacobi, u_by_recursion, u_by_simulator

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "EpsilonSequence",
    "PairPartition",
    "catalan",
    "catalan_convolution",
    "enumerate_epsilon_plus",
    "enumerate_pp",
    "ncpp_of_epsilon",
    "field_distribution",
    "mgf_T",
    "mgf_taylor",
    "q2_distribution",
    "spectral_params",
    "FockState",
    "OperatorWord",
    "TestVector",
    "annihilate",
    "apply_word",
    "create",
    "vacuum_expectation",
    "moment_table",
    "u_by_jacobi",
    "u_by_recursion",
    "u_by_simulator",
]
