"""Injective multiset codes built on unique prime factorization.

Elements are interned and mapped to distinct primes. A finite multiset is
encoded exactly as the product of its primes raised to their multiplicities,
and numerically as the matching sum of logarithms.
"""

from .codebook import PrimeCodebook
from .errors import PrimesetError
from .exact import ExactCode, apply_phi, compose_phi, decode_exact, encode_exact, multiply_codes
from .multiset import EMPTY, Multiset, enumerate_multisets
from .pairs import (
    Epsilon,
    certified_pair_distinct,
    construct_integer_eps_collision,
    encode_pair,
    rational_eps_z_witness,
)
from .primes import nth_prime
from .real import RealCode, Verdict, aggregate, certified_distinct, f_log, min_gap
from .wl import Graph, load_graph, wl_fingerprint, wl_round

__all__ = [
    "EMPTY",
    "Epsilon",
    "ExactCode",
    "Graph",
    "Multiset",
    "PrimeCodebook",
    "PrimesetError",
    "RealCode",
    "Verdict",
    "aggregate",
    "apply_phi",
    "certified_distinct",
    "certified_pair_distinct",
    "compose_phi",
    "construct_integer_eps_collision",
    "decode_exact",
    "encode_exact",
    "encode_pair",
    "enumerate_multisets",
    "f_log",
    "load_graph",
    "min_gap",
    "multiply_codes",
    "nth_prime",
    "rational_eps_z_witness",
    "wl_fingerprint",
    "wl_round",
]
