"""Workbench for finite multiplicative Lie algebras.

An algebra is a finite group (``mul``) with a second operation (``star``),
both stored as n x n tables over element ids, identity at 0.
"""

from .core import (
    FiniteMla,
    MlaError,
    ValidationReport,
    commutator,
    commutator_star_of_group,
    conjugate,
    direct_product,
    dump_algebra,
    load_algebra,
    read_algebra,
    trivial_star_of_group,
    validate_axioms,
    write_algebra,
)
from .isoclinism import (
    CentralExtension,
    IsoclinismWitness,
    find_extension_isoclinism,
    find_isoclinism,
    is_isoclinic_morphism,
    is_stem,
    make_extension,
    pullback_extension,
    restrict_to_subalgebra,
    stem_criterion,
    stem_reduce,
    verify_witness_properties,
)
from .morph import MlaMap, find_isomorphisms, fingerprint, is_homomorphism
from .structure import (
    SubSet,
    closure_ideal,
    closure_subalgebra,
    enumerate_ideals,
    group_center,
    joint_center,
    lie_center,
    m_derived,
    quotient,
)
from .tensor import TensorSquare, pair_ideal, tensor_presentation, tensor_square

__version__ = "0.1.0"
