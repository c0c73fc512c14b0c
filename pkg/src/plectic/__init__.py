"""Exact Cartan calculus and homotopy Poisson brackets for n-plectic structures."""

from .coefficients import Polynomial, random_polynomial
from .combinatorics import (
    antisym_koszul_sign,
    enumerate_shuffles,
    enumerate_straight_unshuffles,
    koszul_sign,
)
from .graded_algebra import (
    Cotensor,
    Tensor,
    contract_left,
    contract_right,
    de_rham,
    lie_derivative,
    natural_pairing,
    schouten,
    tensor_degree,
)
from .homotopy import (
    BracketResult,
    CheckReport,
    bracket,
    check_jacobi,
    check_leibniz_first,
    check_leibniz_second,
    check_leibniz_third,
    check_rogers,
    leibniz,
    product,
)
from .nplectic import (
    NotPoissonWithinBound,
    NPlecticStructure,
    PoissonCotensor,
    WitnessError,
    make_poisson,
    random_poisson,
    solve_constraint,
    solve_hamilton,
    verify_cocycle,
)
from .pinfty import build_structure_maps, check_structure_equation, straight_shuffle_extension
from .syntax import ParseError, parse_cotensor, parse_polynomial, parse_tensor

__all__ = [name for name in dir() if not name.startswith("_")]
