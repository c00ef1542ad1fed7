"""Number-theoretic ground truth over Q and F_q(t)."""

from .primes import is_prime, primes_up_to, factorize, primitive_root, squarefree_part
from .residues import legendre, jacobi, kronecker, power_residue_index, splits_in_E
from .bqf import bqf_narrow_class_group, fundamental_unit, is_fundamental, class_number
from .fields import (PrimeQ, MultiquadFieldSpec, analyze_multiquad, CyclicFieldSpec,
                     analyze_cyclic, quadratic_type)
from .vst import vst_dimension
from .search import find_primes_lb_cyclic, check_tuple, PrimeSearchCache
from .units import for_wreath_predicate
from .fqt import FqtPrime, fqt_delta

__all__ = [
    "is_prime", "primes_up_to", "factorize", "primitive_root", "squarefree_part",
    "legendre", "jacobi", "kronecker", "power_residue_index", "splits_in_E",
    "bqf_narrow_class_group", "fundamental_unit", "is_fundamental", "class_number",
    "PrimeQ", "MultiquadFieldSpec", "analyze_multiquad", "CyclicFieldSpec",
    "analyze_cyclic", "quadratic_type", "vst_dimension", "find_primes_lb_cyclic",
    "check_tuple", "PrimeSearchCache", "for_wreath_predicate", "FqtPrime", "fqt_delta",
]
