"""Chase engine for TGDs and EGDs plus termination analysis.

The public surface re-exports the model vocabulary, the chase itself, the
static condition ladder, the data-dependent tools and the text frontend.
"""

from chaseterm.chase import (
    ABORTED, FAILED, TERMINATED, ChasePolicy, ChaseResult, ChaseStepRecord,
    apply_record, chase, chase_step,
)
from chaseterm.dynamic import (
    ChaseGraph, TerminationGuarantee, chase_graph, constraint_from_instance,
    data_dependent_guarantee, irrelevant_constraints,
)
from chaseterm.firing import PRECEDES, PRECEDES_P, Witness, can_cause
from chaseterm.model import (
    Atom, Constant, Constraint, Instance, LabeledNull, ModelError, Position,
    Variable, egd, find_homomorphism, find_violations, hom_equivalent,
    instance, instantiate, satisfies, tgd,
)
from chaseterm.monitor import (
    MonitorGraph, build_monitor, is_k_cyclic, monitored_chase,
)
from chaseterm.static import (
    AnalysisReport, analyze, is_inductively_restricted, is_safe,
    is_safely_restricted, is_stratified, is_weakly_acyclic, part,
)
from chaseterm.syntax import (
    ParseError, parse_constraints, parse_instance, print_constraints,
    print_instance,
)

__all__ = [
    "ABORTED", "FAILED", "TERMINATED",
    "AnalysisReport", "Atom", "ChaseGraph", "ChasePolicy", "ChaseResult",
    "ChaseStepRecord", "Constant", "Constraint", "Instance", "LabeledNull",
    "ModelError", "MonitorGraph", "ParseError", "Position", "PRECEDES",
    "PRECEDES_P", "TerminationGuarantee", "Variable", "Witness",
    "analyze", "apply_record", "build_monitor", "can_cause", "chase",
    "chase_graph", "chase_step", "constraint_from_instance",
    "data_dependent_guarantee",
    "egd", "find_homomorphism", "find_violations", "hom_equivalent",
    "instance", "instantiate", "irrelevant_constraints",
    "is_inductively_restricted", "is_k_cyclic", "is_safe",
    "is_safely_restricted", "is_stratified", "is_weakly_acyclic",
    "monitored_chase", "parse_constraints", "parse_instance", "part",
    "print_constraints", "print_instance", "satisfies", "tgd",
]
