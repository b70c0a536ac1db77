"""Berry-Esseen experiments for LENQD sequences and the Haar wavelet
regression estimator with MA(1) errors."""
from .blocks import block_scheme, block_sums, decay_diagnostics, exact_variances
from .dependence import (
    DEFAULT_PARAMS,
    DiscreteJoint,
    MA1Params,
    covariance_tail_sum,
    enqd_min_constant,
    lenqd_min_constant,
    ma1_covariance,
    sample_ma1,
)
from .exceptions import (
    CapacityError,
    ConfigError,
    DegenerateInputError,
    DomainError,
    LenqdError,
    PSDViolationError,
)
from .montecarlo import (
    SimulationConfig,
    rate_fit,
    run_clt_experiment,
    run_table1,
    run_wavelet_experiment,
    sup_distance_to_normal,
)
from .special_functions import std_normal_cdf, std_normal_quantile
from .wavelet import HaarWaveletRegressor, build_partition, haar_weights

__version__ = "0.1.0"
