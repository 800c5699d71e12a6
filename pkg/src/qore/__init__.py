"""Quantum Ore extensions at roots of unity: derivation removal and PI degrees."""

from .errors import (
    QoreError,
    DomainError,
    ParseError,
    SpecError,
    NotExtendable,
    NotLocallyNilpotent,
    NotRemovable,
    NotReorderable,
    NoClosedForm,
)
from .qarith import LaurentIntPoly, t_integer, t_factorial, t_binomial
from .scalars import (
    ScalarField,
    GenericField,
    CyclotomicField,
    Scalar,
    cyclotomic_poly,
    scalar_invert,
    evaluate_at_root,
)
from .ore import OreSpec, OreElement, HigherDerivation
from .pidegree import IntMatrix, smith_normal_form, image_cardinality, pi_degree
from .families import FamilyId, family_matrix, family_ore_spec, closed_form_pidegree

__version__ = "0.1.0"
