"""Van Kampen diagrams: construction, validation, t-bands and surgery."""
from .core import (
    Diagram,
    DiagramError,
    Face,
    cell_disk,
    delete_edge,
    fill_face,
    from_dict,
    glue,
    load,
    mirror,
    spike,
    subdivide,
)
from .build import ProviderError, derivation_to_diagram, provider, trace_normalize
from .validate import ValidationReport, validate
from .bands import Domain, TBand, domains, find_t_bands, k_connected, k_connected_pairs, k_member
from .surgery import SurgeryError, band_disk, eliminate_k_connected, shorten_bands
from .pipeline import (
    census_audit,
    collapse_components,
    eliminate_q_cells,
    expand_k_letters,
    lemma_pipeline,
    merge_cells,
    q_annulus,
)
from .svg import to_svg
