"""Emergent-keyword detection over dynamic keyword co-occurrence graphs."""

from ._core import (
    Graph,
    History,
    align_origin,
    ascii_letter_fraction,
    assign_segment,
    default_stopwords,
    degree_centrality,
    document_weight,
    dynamic_scores,
    eigenvector_centrality,
    evaluate_file,
    frequency_centrality,
    greedy_cover,
    lemmatize,
    normalize,
    rank_top_k,
    run_file,
    slope,
    synth_file,
)

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "History",
    "align_origin",
    "ascii_letter_fraction",
    "assign_segment",
    "default_stopwords",
    "degree_centrality",
    "document_weight",
    "dynamic_scores",
    "eigenvector_centrality",
    "evaluate_file",
    "frequency_centrality",
    "greedy_cover",
    "lemmatize",
    "normalize",
    "rank_top_k",
    "run_file",
    "slope",
    "synth_file",
]
