"""Detrended deconvolution correlation networks.

The data path: price panels become log-return panels (:mod:`.ingest`),
pairs of return series become detrended cross-correlation coefficients
(:mod:`.dcca`), coefficient matrices are spectrally deconvolved into
direct-link matrices (:mod:`.deconv`) and cut into connectivity-preserving
networks (:mod:`.threshold`), on which centrality indices and a
spanning-tree baseline are ranked (:mod:`.graph`); :mod:`.pipeline` rolls
everything over windows and scores rank stability, :mod:`.synth` makes
panels with planted structure, and :mod:`.cli` drives it from the shell.
"""

from .dcca import (CorrelationMatrix, DccaBoxStats, Profile, box_detrend,
                   dccc, dccc_matrix, profile)
from .deconv import (DirectMatrix, SpectralDecomposition, convolve,
                     deconvolve, eigendecompose)
from .errors import DdfenError, InputError, InvariantError, NumericalError
from .graph import (INDEX_NAMES, IndexScores, Ranking, authority,
                    betweenness, closeness, compute_index, mst, rank,
                    weighted_degree)
from .ingest import (PricePanel, ReturnPanel, align_and_clean, load_prices,
                     load_prices_text, log_returns)
from .kernels import ACTIVE_KERNEL
from .network import WeightedNetwork, connected_component_count
from .pipeline import (METHODS, EventMarker, EventPlacement,
                       MethodComparison, RankSeries, WindowSpec,
                       compare_methods, detrended_volatility, place_events,
                       rank_series, roll_windows)
from .synth import (FactorSpec, chain_population_matrix, generate_panel,
                    plant_chain, plant_hub, returns_panel)
from .threshold import ThresholdReport, threshold_network

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_KERNEL", "CorrelationMatrix", "DccaBoxStats", "DdfenError",
    "DirectMatrix", "EventMarker", "EventPlacement", "FactorSpec",
    "INDEX_NAMES", "IndexScores", "InputError", "InvariantError",
    "METHODS", "MethodComparison", "NumericalError", "PricePanel",
    "Profile", "RankSeries", "Ranking", "ReturnPanel",
    "SpectralDecomposition", "ThresholdReport", "WeightedNetwork",
    "WindowSpec", "align_and_clean", "authority", "betweenness",
    "box_detrend", "chain_population_matrix", "closeness", "compare_methods",
    "compute_index", "connected_component_count", "convolve", "dccc",
    "dccc_matrix", "deconvolve",
    "detrended_volatility", "eigendecompose", "generate_panel",
    "load_prices", "load_prices_text", "log_returns", "mst", "place_events",
    "plant_chain", "plant_hub", "profile", "rank", "rank_series",
    "returns_panel", "roll_windows", "threshold_network", "weighted_degree",
]
