"""Exact computations for the colored stochastic vertex model with a U-turn boundary."""

from .colors import SignedPermutation, identity, parse_one_line, simple_reflection
from .lattice import ModelSpec, enumerate_states, partition_function, total_mass
from .scalar import ParamPoint, PoleError, parse_rational

__all__ = [
    "ModelSpec",
    "ParamPoint",
    "PoleError",
    "SignedPermutation",
    "enumerate_states",
    "identity",
    "parse_one_line",
    "parse_rational",
    "partition_function",
    "simple_reflection",
    "total_mass",
]
