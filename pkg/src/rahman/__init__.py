"""Exact construction and verification of the Rahman polynomials, the
Hoare-Rahman kernel and their bispectral difference operators."""
from .bispectral import (conjugate_operator, discover_commutant, five_point_operator,
                         locality_check, multiplication_diagonal, normalize_gauge,
                         reproduce_paper_B, reproduce_paper_commutant, seven_point_operators)
from .exact import ExactMatrix
from .kernel import binomial_pmf, build_kernel, trinomial_pmf
from .params import (ChainParams, ParamSet, compatible_alpha2, compatible_beta, compatible_chain,
                     derive_mapped, derive_weight)
from .polyeval import build_poly_matrix, pochhammer, rahman_poly
from .spectral import eigenvalue, verify_eigen, verify_orthogonality, verify_stationarity
from .statespace import adjacency, enumerate_simplex

__version__ = "0.1.0"
