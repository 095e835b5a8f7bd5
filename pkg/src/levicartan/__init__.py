"""Generalized Cartan decompositions ``U(n) = L . B . H`` for Levi subgroups.

``decompose`` factors a unitary matrix for every triple in the surjective
classification; ``certify_nonsurjective`` produces an exactly checkable
obstruction for every other triple.
"""

from .certificates import (LoopWord, NonSurjectivityCertificate, certify_nonsurjective,
                           commutator_blocks, epsilon_search, loop_charpoly_is_real,
                           loop_product, tilde_block, witness_k3_pq_large, witness_k4_pq2,
                           witness_k4_pq_large, witness_three_by_three)
from .config import DEFAULT, Tolerances
from .csd import (BipartitionPair, CsdResult, cs_decompose, cs_decompose_rank1_left,
                  cs_decompose_rank1_right)
from .errors import *  # noqa: F401,F403
from .exact import GaussianRational, exact_matrix
from .herringbone import (CaseKind, CaseLabel, DecompositionResult, PlaneRotationWord,
                          TripleSpec, VerificationReport, b_shape, classify, decompose,
                          decompose_case1, decompose_case2, decompose_case3, partition_pairs,
                          verify)
from .linalg import (PolynomialCoefficients, char_poly, expm_skew_hermitian, haar_unitary,
                     plane_rotation, svd)

__version__ = "0.1.0"
