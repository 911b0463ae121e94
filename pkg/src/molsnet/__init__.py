"""SAT-based enumeration and verification of orthogonal Latin square pairs
of order ten whose 4-nets carry two nontrivial GF(2) relations."""

from .core import (
    CASE_FORMS,
    IncidenceMatrix,
    LatinSquare,
    LineIndex,
    MolsPair,
    RelationForm,
    are_orthogonal,
    compose_with_row_inverse,
    f2_rank,
    incidence_matrix,
    is_latin,
    line_code,
    rc_label,
    relation_membership,
    st_label,
    verify_relations,
)

__all__ = [
    "CASE_FORMS",
    "IncidenceMatrix",
    "LatinSquare",
    "LineIndex",
    "MolsPair",
    "RelationForm",
    "are_orthogonal",
    "compose_with_row_inverse",
    "f2_rank",
    "incidence_matrix",
    "is_latin",
    "line_code",
    "rc_label",
    "relation_membership",
    "st_label",
    "verify_relations",
]

__version__ = "0.1.0"
