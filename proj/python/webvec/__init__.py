"""Greek web-corpus word embeddings: extraction, training, queries and maps."""

from ._webvec import (
    Error,
    UsageError,
    IoError,
    FormatError,
    UnknownWordError,
    NoSignalError,
    UndefinedSimilarityError,
    clean_html,
    filter_script,
    segment_sentences,
    extract_warc,
    dedup_sentences,
    count_ngrams,
    char_ngrams,
    hash_subword,
    fnv1a32,
    TrainingConfig,
    Model,
    train,
    EmbeddingStore,
    load_vectors,
    cosine,
    most_similar,
    analogy,
    compare_groups,
    spell_suggest,
    levenshtein,
    tsne,
    kmeans,
    build_map,
)

__all__ = [name for name in dir() if not name.startswith("_")]
