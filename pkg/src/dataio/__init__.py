from src.dataio.canonical import read_dataset, read_id_maps, read_split, write_dataset, write_id_maps, write_split
from src.dataio.parsing import FORMATS, FormatSpec, parse_interactions
from src.dataio.split import leave_one_out_split
from src.dataio.stats import DatasetStats, dataset_stats
from src.dataio.transforms import drop_sparse_users, kcore_filter, remap_ids, subsample_users, to_implicit
from src.dataio.types import IdMaps, InteractionLog, SplitSet

__all__ = [
    "FORMATS",
    "DatasetStats",
    "FormatSpec",
    "IdMaps",
    "InteractionLog",
    "SplitSet",
    "dataset_stats",
    "drop_sparse_users",
    "kcore_filter",
    "leave_one_out_split",
    "parse_interactions",
    "read_dataset",
    "read_id_maps",
    "read_split",
    "remap_ids",
    "subsample_users",
    "to_implicit",
    "write_dataset",
    "write_id_maps",
    "write_split",
]
