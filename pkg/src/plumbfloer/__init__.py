"""Heegaard Floer lattice data, knot-filtration invariants and contact
invariants of negative-definite Seifert fibred spaces."""

__version__ = "0.1.0"

from .contact import (  # noqa: E402
    blown_down_presentation,
    brieskorn_embedding_report,
    count_tight,
    ell_pair,
    embedding_obstruction,
    sharp,
    spin_obstruction,
    twisting_number_farey,
    twisting_number_height,
)
from .errors import ConsistencyError, ParseError, PlumbError, PreconditionError  # noqa: E402
from .exact import FareyPair, NegContFrac, farey_mediant_search, nc_eval, nc_expand  # noqa: E402
from .filtration import alexander_filtration, height_of_class, max_tb, tau_min, tau_of_class  # noqa: E402
from .fullpath import correction_term, hf_basis, hf_hat_dim_at, is_l_space, run_full_path  # noqa: E402
from .plumbing import (  # noqa: E402
    BrieskornData,
    SeifertData,
    StarGraph,
    brieskorn_to_seifert,
    euler_number,
    intersection_form,
    is_negative_definite,
    seifert_to_graph,
    torus_link_to_seifert,
)
from .spinc import conjugate, enumerate_initial_vectors, is_spin, maslov_grading, spinc_class_of  # noqa: E402

__all__ = [
    "BrieskornData",
    "ConsistencyError",
    "FareyPair",
    "NegContFrac",
    "ParseError",
    "PlumbError",
    "PreconditionError",
    "SeifertData",
    "StarGraph",
    "alexander_filtration",
    "blown_down_presentation",
    "brieskorn_embedding_report",
    "brieskorn_to_seifert",
    "conjugate",
    "correction_term",
    "count_tight",
    "ell_pair",
    "embedding_obstruction",
    "enumerate_initial_vectors",
    "euler_number",
    "farey_mediant_search",
    "height_of_class",
    "hf_basis",
    "hf_hat_dim_at",
    "intersection_form",
    "is_l_space",
    "is_negative_definite",
    "is_spin",
    "maslov_grading",
    "max_tb",
    "nc_eval",
    "nc_expand",
    "run_full_path",
    "seifert_to_graph",
    "sharp",
    "spin_obstruction",
    "spinc_class_of",
    "tau_min",
    "tau_of_class",
    "torus_link_to_seifert",
    "twisting_number_farey",
    "twisting_number_height",
]
