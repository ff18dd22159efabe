from ._core import (
    Catalog,
    EntityIndex,
    Graph,
    InvalidArgumentError,
    IoError,
    KgnbrError,
    ModelError,
    NotFoundError,
    ParseError,
    SchemaError,
    SimilarityMatrix,
    build_prompt,
    classify_target_position,
    combined_metric,
    cosine,
    emit_dataset,
    exact_match,
    filtered_rank,
    gpt_hits,
    hits_at_k,
    neighborhood,
    normalize_answer,
    parse_answer,
    run_cli,
    verbalize,
)

__all__ = [
    "Catalog",
    "EntityIndex",
    "Graph",
    "InvalidArgumentError",
    "IoError",
    "KgnbrError",
    "ModelError",
    "NotFoundError",
    "ParseError",
    "SchemaError",
    "SimilarityMatrix",
    "build_prompt",
    "classify_target_position",
    "combined_metric",
    "cosine",
    "emit_dataset",
    "exact_match",
    "filtered_rank",
    "gpt_hits",
    "hits_at_k",
    "neighborhood",
    "normalize_answer",
    "parse_answer",
    "run_cli",
    "verbalize",
]
