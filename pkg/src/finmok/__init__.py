"""Monadic multimodal predicate logic with equality over finite Kripke frames.

Parsing and printing (:mod:`finmok.syntax`), finite augmented models
(:mod:`finmok.semantics`), model checking (:mod:`finmok.modelcheck`),
validity on a fixed frame (:mod:`finmok.decide`) and refutation search over
classes of frames (:mod:`finmok.frameclass`).
"""

__version__ = "0.1.0"

from .decide import (Certificate, Modes, Status, Verdict, bound, decide_validity,
                     enumerate_models, refute, verify_certificate)
from .frameclass import (FrameClassSpec, check_predicates, class_refute, enumerate_frames,
                         parse_class, subframe)
from .modelcheck import find_failure, satisfies, true_at, true_in_model
from .semantics import (AugmentedModel, DomainMode, EqualityMode, KripkeFrame,
                        make_identity_equality, validate_frame, validate_model)
from .syntax import (check_monadic, free_vars, metrics, parse_formula, print_formula,
                     universal_closure)

__all__ = [
    "Certificate", "Modes", "Status", "Verdict", "bound", "decide_validity",
    "enumerate_models", "refute", "verify_certificate",
    "FrameClassSpec", "check_predicates", "class_refute", "enumerate_frames",
    "parse_class", "subframe",
    "find_failure", "satisfies", "true_at", "true_in_model",
    "AugmentedModel", "DomainMode", "EqualityMode", "KripkeFrame",
    "make_identity_equality", "validate_frame", "validate_model",
    "check_monadic", "free_vars", "metrics", "parse_formula", "print_formula",
    "universal_closure",
]
