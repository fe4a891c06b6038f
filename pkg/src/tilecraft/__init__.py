"""Spatial data partitioning for tile-parallel spatial joins."""
from .geom import (Dataset, Rect, SpatialObject, centroid, hilbert_index,
                   rect_contains, rect_intersects, spatial_universe)
from .join import brute_join, copartition, join_layout, spatial_join, tile_join
from .masj import Assignment, CoverageViolation, masj_assign, replica_fraction
from .metrics import (CostModel, QualityReport, boundary_ratio, estimated_join_cost,
                      payload_stddev, quality_report)
from .parallel import AnchorList, ParallelConfig, build_anchors, coarse_assign, parallel_partition
from .partitioners import (ALGORITHMS, Partition, PartitionLayout, partition, partition_bos,
                           partition_bsp, partition_fg, partition_hc, partition_slc,
                           partition_str)
from .sampling import SamplingConfig, sample_partition, uniform_sample
from .synth import GenSpec, generate

__version__ = "0.1.0"
