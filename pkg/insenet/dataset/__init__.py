from .manifest import (
    ANCHOR_CODECS,
    CONTENT_TYPES,
    MANIFEST_COLUMNS,
    DatasetEntry,
    Manifest,
    manifest_composition,
)
from .segment import EXCERPT_SECONDS, segment_excerpts
from .folds import FoldSplit, split_folds
from .codec import CodecClient, align_to_reference
from .oracle import OracleClient
from .build import build_manifest

__all__ = [
    "ANCHOR_CODECS",
    "CONTENT_TYPES",
    "MANIFEST_COLUMNS",
    "DatasetEntry",
    "Manifest",
    "manifest_composition",
    "EXCERPT_SECONDS",
    "segment_excerpts",
    "FoldSplit",
    "split_folds",
    "CodecClient",
    "align_to_reference",
    "OracleClient",
    "build_manifest",
]
