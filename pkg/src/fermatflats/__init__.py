"""Exact computations for Fermat arrangements of codimension-2 flats."""

__version__ = "0.1.0"

from .fields import QQ, CyclotomicField, PrimeField, RationalField, parse_field, root_of_unity
from .poly import GREVLEX, LEX, MonomialOrder, Poly, PolyRing, elimination_order
from .brackets import (Bracket, expand, verify_expansion_rule, verify_laplace,
                       verify_substitution, verify_useful_rule)
from .arrangement import (FermatConfig, Flat, GeneratorSpec, cone_ideal_generators,
                          enumerate_flats, fermat_polynomial, hyperplanes_through,
                          ideal_generators, verify_prop32_identities)
from .ideals import (Budget, BudgetExceeded, Ideal, buchberger, graded_membership,
                     ideal_equality, ideal_intersection, ideal_power, normal_form)
from .containment import (ContainmentQuery, ProofTrace, check_noncontainment, els_hh_bound,
                          proof_trace, symbolic_membership, vanishing_order,
                          verify_cone_intersection)

__all__ = [name for name in dir() if not name.startswith("_")]
