"""nccalc: exact differential calculi on finitely presented algebras.

The engine builds first-order (and, where the direction structure allows,
higher-order) differential calculi from a set of algebra automorphisms or
from twisted inner derivations, with all arithmetic exact over the field
of rational functions in declared parameters.
"""

from .algebra import (AlgebraError, AlgebraMorphism, NCPoly, Presentation,
                      basis_independence_probe, check_local_confluence,
                      identity_morphism, normal_words, tensor_product,
                      unit_inverse, verify_morphism)
from .calculus import (CalculusError, CalculusSpec, DirectionSet, GradedForm,
                       InconsistentCalculus, TwoFormStructure,
                       check_differentiability, constants, delta, differential,
                       d_form, graded_commutator, is_central_one_form,
                       move_left, move_right, parse_form,
                       solve_theta_in_differentials, two_form_structure,
                       vartheta, verify_inner_identities,
                       verify_twisted_two_forms, wedge)
from .geometry import (Connection, LTensor, Metric, curvature,
                       levi_civita_check, metric_compatibility,
                       metric_invariance_conditions, nabla_one_form,
                       tensor_L, torsion, torsion_free_conditions)
from .presets import PRESET_IDS, load_preset
from .scalar import Scalar, ScalarError, ZeroDenominator, params, parse_scalar

__all__ = [
    "AlgebraError", "AlgebraMorphism", "CalculusError", "CalculusSpec",
    "Connection", "DirectionSet", "GradedForm", "InconsistentCalculus",
    "LTensor", "Metric", "NCPoly", "PRESET_IDS", "Presentation", "Scalar",
    "ScalarError", "TwoFormStructure", "ZeroDenominator",
    "basis_independence_probe", "check_differentiability",
    "check_local_confluence", "constants", "curvature", "d_form", "delta",
    "differential", "graded_commutator", "identity_morphism",
    "is_central_one_form", "levi_civita_check", "load_preset",
    "metric_compatibility", "metric_invariance_conditions", "move_left",
    "move_right", "nabla_one_form", "normal_words", "params", "parse_form",
    "parse_scalar", "solve_theta_in_differentials", "tensor_L",
    "tensor_product", "torsion", "torsion_free_conditions",
    "two_form_structure", "unit_inverse", "vartheta",
    "verify_inner_identities", "verify_morphism", "verify_twisted_two_forms",
    "wedge",
]
