"""Milnor mu-invariants of string links and their classification up to
2n-moves and link-homotopy."""

from .algebra import GroupWord, TruncatedSeries, commutator, magnus_expand, series_coefficient, series_mod
from .classify import (
    CanonicalForm,
    canonical_form,
    class_inverse,
    class_multiply,
    enumerate_F,
    enumerate_group,
    equivalent_2n_lh,
    generator_matrix,
    generator_V,
    group_order,
    link_equivalent_2n_lh,
    link_trivial_2n_lh,
    representative,
    s_value,
)
from .diagram import (
    BraidWord,
    StringLinkDiagram,
    braid_to_diagram,
    insert_2n_move,
    parse_braid,
    self_crossing_change,
    stack,
    winding_to_diagram,
)
from .errors import (
    BraidParseError,
    DegreeOverflowError,
    InconsistencyError,
    MilnorError,
    NonPureBraidError,
    PreconditionError,
    TheoremInapplicableError,
)
from .milnor import MilnorTable, delta, link_invariants, longitude_series, mu, mu_table

__version__ = "0.1.0"
