"""Exact-arithmetic toolkit for framed chord diagrams.

Enumerates chord, framed chord, and arc diagrams in canonical form, builds
one-term and (framed) four-term relation spaces under configurable sign
schemas, computes quotient dimensions and bases over Q and GF(2), and
mechanically checks the structural facts the relation families are built
around: the parity involution isomorphism, realisability closure of 4T
quadruples, weight-table relation satisfaction, and well-definedness of
circle multiplication.
"""

__version__ = "0.1.0"

from .algebra import (
    GradedElement,
    check_phi_intertwine,
    commutator_check,
    intertwine_report,
    multiply_arc,
    multiply_circle,
    phi,
    phi_intertwine_survivors,
    phi_sign,
    phi_vector,
    schema_search,
    well_defined_check,
)
from .diagrams import (
    ArcDiagram,
    CapacityError,
    ChordDiagram,
    arc_diagram,
    canonicalize,
    closure,
    encode,
    enumerate_arc_diagrams,
    enumerate_chord_diagrams,
    enumerate_framed_diagrams,
    involutions,
    parse_arc,
    parse_chord,
    section,
    sections,
)
from .linalg import (
    GF2,
    RATIONAL,
    QuotientBasis,
    in_span,
    normalize_field,
    quotient_basis,
    rank,
)
from .realisability import (
    RealisabilityModel,
    half_incidence,
    homology_trivial,
    lemma_4t_closure_check,
    realisable,
    realisable_set,
    restricted_quotient,
    restricted_quotient_dim,
    single_class,
)
from .relations import (
    RelationVector,
    SignSchema,
    assemble_relations,
    family_fingerprint,
    generate_1t,
    generate_4t,
    relations_to_json,
    relations_to_text,
    schema_space,
)
from .weights import (
    WeightSpace,
    WeightTable,
    forget_framing,
    validate,
    weight_space,
)

__all__ = [name for name in dir() if not name.startswith("_")]
