"""LP decoding of linear codes over Z_q.

Subpackages: codes (ring symbols, Tanner graphs, code constructions),
channel (PSK modulation and AWGN log-likelihood ratios), decoder (dual
coordinate-ascent decoding), lp (exact LP decoding via simplex), and
simulate (frame-error-rate sweeps).
"""

from .channel import (
    ConstellationMap,
    InvalidRate,
    NonPositiveSigma,
    awgn_sample,
    compute_llr,
    ebno_to_sigma,
    modulate,
    psk,
    qpsk,
)
from .codes import (
    LengthMismatch,
    MalformedIndicator,
    ParseError,
    RingSymbol,
    SpcCodebook,
    TannerCode,
    enumerate_spc,
    indicator,
    indicator_block,
    ldpc80_z4,
    random_regular_code,
    read_check_matrix,
    symbol_from_indicator,
    write_check_matrix,
)
from .decoder import (
    ERASED,
    DecodeOutcome,
    DecoderConfig,
    DimensionMismatch,
    DualState,
    EmptyList,
    MalformedDecision,
    Status,
    decide,
    decode,
    dual_objective,
    init_state,
    soft_min,
)
from .lp import (
    BudgetExceeded,
    CycleGuardTripped,
    FactorPoint,
    InfeasibleInput,
    LinearProgram,
    MarginalPoint,
    SimplexResult,
    SolveStatus,
    TooLarge,
    build_decoding_lp,
    check_factor,
    check_marginal,
    codeword_vertex,
    factor_to_marginal,
    lp_cost,
    lp_decode_exact,
    marginal_to_factor,
    ml_bruteforce,
    simplex_solve,
    write_lp,
)
from .simulate import (
    FerPoint,
    SimConfig,
    format_csv,
    load_codeword_list,
    resolve_code,
    run_point,
    run_sweep,
    write_csv,
)

__all__ = [
    "BudgetExceeded",
    "ConstellationMap",
    "CycleGuardTripped",
    "DecodeOutcome",
    "DecoderConfig",
    "DimensionMismatch",
    "DualState",
    "ERASED",
    "EmptyList",
    "FactorPoint",
    "FerPoint",
    "InfeasibleInput",
    "InvalidRate",
    "LengthMismatch",
    "LinearProgram",
    "MalformedDecision",
    "MalformedIndicator",
    "MarginalPoint",
    "NonPositiveSigma",
    "ParseError",
    "RingSymbol",
    "SimConfig",
    "SimplexResult",
    "SolveStatus",
    "SpcCodebook",
    "Status",
    "TannerCode",
    "TooLarge",
    "awgn_sample",
    "build_decoding_lp",
    "check_factor",
    "check_marginal",
    "codeword_vertex",
    "compute_llr",
    "decide",
    "decode",
    "dual_objective",
    "ebno_to_sigma",
    "enumerate_spc",
    "factor_to_marginal",
    "format_csv",
    "indicator",
    "indicator_block",
    "init_state",
    "ldpc80_z4",
    "load_codeword_list",
    "lp_cost",
    "lp_decode_exact",
    "marginal_to_factor",
    "ml_bruteforce",
    "modulate",
    "psk",
    "qpsk",
    "random_regular_code",
    "read_check_matrix",
    "resolve_code",
    "run_point",
    "run_sweep",
    "simplex_solve",
    "soft_min",
    "symbol_from_indicator",
    "write_check_matrix",
    "write_csv",
    "write_lp",
]

__version__ = "0.1.0"
