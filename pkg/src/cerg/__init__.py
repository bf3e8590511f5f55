"""Constructors and exact certifiers for co-edge-regular graph families."""

from .arrays import (
    GroupDivisibleArray,
    OrthogonalArray,
    goa_from_oa,
    oa_macneish,
    oa_prime_power,
    read_array,
    validate_array,
    write_array,
)
from .constructions import (
    TlsGraph,
    TlsStructure,
    h_graph,
    latin_square_graph,
    spread_modified,
    tls,
    tls_structure,
)
from .field import FieldElement, FieldSpec, NotAPrimePower, field
from .geometry import (
    Design,
    ParallelClassSystem,
    block_graph,
    design_affine_lines,
    design_one_factorization,
    parallel_classes,
    read_design,
    verify_parallel_classes,
    write_design,
)
from .graphs import (
    Graph,
    clique_extension,
    complement,
    from_graph6_bytes,
    graph6_bytes,
    local_graph,
    read_graph6,
    write_graph6,
)
from .regularity import (
    equitable_check,
    hoffman_check,
    is_strongly_regular,
    level,
    profile,
    scheme_check,
    strong_co_edge_regular,
    weak_edge_regular,
)
from .spectral import (
    SpectrumCertificate,
    certify,
    char_poly,
    cospectral,
    eq1_residual,
    goldberg,
    theorem33_identities,
)

__all__ = [name for name in dir() if not name.startswith("_")]
