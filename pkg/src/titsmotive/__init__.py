"""Tits indices, p-indices and motivic equivalence of semisimple groups over Q.

The modules are layered: ``diagram`` (Dynkin combinatorics), ``qform`` and
``brauer`` (local arithmetic), ``titsindex`` (indices of classical groups),
``motive`` (symbolic motive calculus), ``equiv`` (equivalence decisions) and
``cli``.
"""

from .brauer import CsaDescriptor, ExtensionSim, extend, index, p_primary_part, p_valuation_index
from .diagram import (
    DynkinDiagram,
    PoincarePolynomial,
    StarAction,
    Vertex,
    flag_poincare,
    is_star_stable,
    levi_type,
    orbits,
    weyl_poincare,
)
from .equiv import Verdict, assign_class_ids, equivalent_mod_p, levi_descriptor, motivically_equivalent
from .errors import InconsistentInputError, MissingDataError, ValidationError
from .motive import (
    TATE,
    CharacteristicMap,
    ExtensionModel,
    Motive,
    UpperMotiveLabel,
    check_calcul,
    chi,
    restrict,
    slice,
    split_motive,
)
from .qform import FormClass, QuadraticForm, hasse_invariant, hilbert_symbol, is_isotropic, witt_index
from .titsindex import (
    Abstract,
    Completion,
    HigherIndexTable,
    SpecialLinear,
    SpecialOrthogonal,
    TitsIndex,
    higher_p_index,
    is_p_anisotropic,
    is_quasi_p_split,
    p_index,
    tits_index,
)

__version__ = "0.1.0"

__all__ = [
    "Abstract", "CharacteristicMap", "Completion", "CsaDescriptor", "DynkinDiagram", "ExtensionModel",
    "ExtensionSim", "FormClass", "HigherIndexTable", "InconsistentInputError", "MissingDataError",
    "Motive", "PoincarePolynomial", "QuadraticForm", "SpecialLinear", "SpecialOrthogonal", "StarAction",
    "TATE", "TitsIndex", "UpperMotiveLabel", "ValidationError", "Verdict", "Vertex",
    "assign_class_ids", "check_calcul", "chi", "equivalent_mod_p", "extend", "flag_poincare",
    "hasse_invariant", "higher_p_index", "hilbert_symbol", "index", "is_isotropic", "is_p_anisotropic",
    "is_quasi_p_split", "is_star_stable", "levi_descriptor", "levi_type", "motivically_equivalent",
    "orbits", "p_index", "p_primary_part", "p_valuation_index", "restrict", "slice", "split_motive",
    "tits_index", "weyl_poincare", "witt_index",
]
