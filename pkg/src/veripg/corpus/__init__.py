from veripg.corpus.assemble import build_corpus, seed_pairs, seed_text
from veripg.corpus.labels import LABEL_CHECKS
from veripg.corpus.mutate import (
    MutationBroke,
    mutate_block_extension,
    mutate_name_substitution,
    mutate_structural,
)
from veripg.corpus.score import (
    ALL_CWES,
    CATEGORY_MAP,
    CorpusEntry,
    MissingFindings,
    ScoreReport,
    load_manifest,
    save_manifest,
    score,
)

__all__ = [
    "ALL_CWES",
    "CATEGORY_MAP",
    "CorpusEntry",
    "LABEL_CHECKS",
    "MissingFindings",
    "MutationBroke",
    "ScoreReport",
    "build_corpus",
    "load_manifest",
    "mutate_block_extension",
    "mutate_name_substitution",
    "mutate_structural",
    "save_manifest",
    "score",
    "seed_pairs",
    "seed_text",
]
