"""majlab: a query-game laboratory for the two-color majority problem."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    CM,
    GM,
    AuditReport,
    CapacityError,
    Color,
    Coloring,
    ColoringSet,
    GmResponse,
    InputError,
    InvariantViolation,
    LogicError,
    Transcript,
    Verdict,
    audit_transcript,
    cm_answer_of,
    consistent_set,
    forced_verdict,
    gm_answer_of,
    majority_verdict_set,
)
