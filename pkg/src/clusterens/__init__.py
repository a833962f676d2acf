"""Exact computations with cluster ensembles.

Seeds and mutations, classical and quantum cluster transformations,
tropical dynamics, finite-type canonical maps, the W-element and
dilogarithm identities.
"""

from .seed import MutationWord, Seed, a_n_zigzag, exchange_graph, markov_torus, polygon, rank2
from .exactalg import LaurentPoly, RatFunc

__version__ = "0.1.0"

__all__ = [
    "Seed",
    "MutationWord",
    "rank2",
    "markov_torus",
    "polygon",
    "a_n_zigzag",
    "exchange_graph",
    "LaurentPoly",
    "RatFunc",
]
