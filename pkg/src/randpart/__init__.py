"""Partitions of [n] induced by random maps: lattice operations, Stirling
numbers, exponent curves, and a reproducible Monte Carlo harness."""

from ._kernels import BACKEND
from .partition import (
    BlockStats,
    KFreeReport,
    PartitionError,
    SetPartition,
    block_stats,
    graph_components_oracle,
    is_k_free,
    join,
    join_streaming,
    kfree_spectrum,
    meet,
    p_max,
    p_min,
    partition_from_map,
    refines,
    verify_kfree_properties,
)
from .rng import (
    MapSample,
    SeedSpec,
    derive_trial_rng,
    inf_of_random_maps,
    sample_uniform_map,
    sup_of_random_maps,
)
from .stirling import StirlingTable, stirling_exact, stirling_log, surjection_count
from .asymptotics import entropy_H, g_of_c, lambda4_interval, mu3, solve_gamma, x_of_c
from .experiments import ExperimentConfig, EstimateResult, ScanResult, run, run_exhaustive

__version__ = "0.1.0"
