"""Classical copula mathematics and exact grid oracles."""

from .archimedean import ArchimedeanParams, archimedean_cdf
from .fabric import FabricParams, FabricReference, fabric_reference, fabric_spearman
from .grids import (
    CopulaGrid,
    GridError,
    MarginError,
    canonical_grid,
    comonotone_cdf,
    countermonotone_cdf,
    discretize_cdf,
    independence_cdf,
    mixture_grid,
)
from .mb11 import (
    InfeasibleError,
    Mb11Spec,
    TailDependenceStructure,
    mb11_from_bivariate_structure,
    mb11_weights_from_taildep,
    taildep_from_weights,
    to_number,
)
from .partitions import PartitionError, SetPartition, bell, set_partitions, signed_partition_count
from .stats import cqep_b11, grid_cqep, grid_cqep3, grid_spearman

__all__ = [
    "ArchimedeanParams",
    "CopulaGrid",
    "FabricParams",
    "FabricReference",
    "GridError",
    "InfeasibleError",
    "MarginError",
    "Mb11Spec",
    "PartitionError",
    "SetPartition",
    "TailDependenceStructure",
    "archimedean_cdf",
    "bell",
    "canonical_grid",
    "comonotone_cdf",
    "countermonotone_cdf",
    "cqep_b11",
    "discretize_cdf",
    "fabric_reference",
    "fabric_spearman",
    "grid_cqep",
    "grid_cqep3",
    "grid_spearman",
    "independence_cdf",
    "mb11_from_bivariate_structure",
    "mb11_weights_from_taildep",
    "mixture_grid",
    "set_partitions",
    "signed_partition_count",
    "taildep_from_weights",
    "to_number",
]
