"""Wide locally recoverable codes over GF(2^8).

Construction of a coupled-parity wide LRC family and three baseline
layouts, stripe coding, cluster placement, recovery-cost metrics, a
Markov MTTDL model, and a deterministic bandwidth-topology simulator.
"""

from .codes import (
    CodeDefinition,
    CodeSpec,
    DistanceResult,
    GroupLayout,
    Stripe,
    build_alrc,
    build_olrc,
    build_ulrc,
    build_unilrc,
    decodable,
    encode,
    from_json,
    global_decode,
    local_repair,
    parity_bound_check,
    rate_check,
    to_json,
    verify_distance,
)
from .errors import (
    ConstructionError,
    DecodeError,
    FieldTooSmallError,
    ModelError,
    NotLocallyRepairableError,
    ParameterError,
    SingularMatrixError,
    WideLrcError,
)
from .linalg import GfMatrix, derive_parity_check, vandermonde
from .metrics import MetricsReport, compute_metrics, lbnr_of
from .placement import (
    ClusterTopology,
    PlacementMap,
    cross_cluster_cost,
    place_ecwide,
    place_unilrc,
    validate_placement,
)
from .reliability import (
    MarkovParams,
    MttdlResult,
    RecoveryCost,
    build_chain,
    default_params,
    mttdl_exact,
    mttdl_product,
    recovery_cost,
)
from .sim import SimConfig, SimResult, Workload, gen_workload, simulate

__version__ = "0.1.0"
