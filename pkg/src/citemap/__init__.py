"""Citation-graph analytics: deep bibliographic coupling and local maps of science.

The package builds an immutable citation DAG from a bibliographic corpus,
scores paper similarity with classic and diffusion-weighted bibliographic
coupling, and turns a sampled similarity matrix into a 2-D map (distance
inversion, exact t-SNE, Gaussian mean-shift clustering, keyword extraction).

Submodules are imported lazily so scripts can configure thread environment
variables before numpy loads.
"""

from importlib import import_module

__version__ = "0.1.0"

_EXPORTS = {
    # corpus / graph
    "PaperRecord": ".corpus",
    "load_corpus": ".corpus",
    "YEAR_UNKNOWN": ".corpus",
    "CitationGraph": ".graph",
    "build_graph": ".graph",
    "largest_weakly_connected_component": ".graph",
    "break_cycles": ".graph",
    "references": ".graph",
    "citations": ".graph",
    "extended_references": ".graph",
    "extended_citations": ".graph",
    "write_graph_cache": ".graph",
    "read_graph_cache": ".graph",
    # coupling
    "CoupledSet": ".coupling",
    "bc_set": ".coupling",
    "cc_set": ".coupling",
    "cosine_sim": ".coupling",
    "jaccard_sim": ".coupling",
    "bc_similarity": ".coupling",
    "cc_similarity": ".coupling",
    "coupling_matrix": ".coupling",
    # diffusion
    "WeightVector": ".diffusion",
    "PairwiseMatrix": ".diffusion",
    "level_masses": ".diffusion",
    "rwr_weights": ".diffusion",
    "weighted_cosine": ".diffusion",
    "wbc_similarity": ".diffusion",
    "pairwise_similarity": ".diffusion",
    "write_matrix_tsv": ".diffusion",
    "write_matrix_lms1": ".diffusion",
    "read_matrix_lms1": ".diffusion",
    # sampling
    "Sample": ".sampling",
    "sample_by_keyword": ".sampling",
    "sample_random": ".sampling",
    "write_sample": ".sampling",
    "read_sample": ".sampling",
    # embedding / clustering
    "Embedding": ".embedding",
    "similarity_to_distance": ".embedding",
    "tsne_embed": ".embedding",
    "conditional_probabilities": ".embedding",
    "joint_probabilities": ".embedding",
    "kl_grad": ".embedding",
    "ClusterLabeling": ".clustering",
    "auto_bandwidth": ".clustering",
    "mean_shift": ".clustering",
    "shift_points": ".clustering",
    # keywords
    "KeywordStats": ".keywords",
    "ClusterKeywordTable": ".keywords",
    "keyword_frequency": ".keywords",
    "rank_by_ratio": ".keywords",
    "cluster_tfidf": ".keywords",
    "keyword_points": ".keywords",
    "colocation_similarity": ".keywords",
    "colocation_order": ".keywords",
    # synthetic data, pipeline
    "synthetic_corpus": ".synth",
    "write_corpus_jsonl": ".synth",
    "PipelineConfig": ".pipeline",
    "run_ingest": ".pipeline",
    "run_pipeline": ".pipeline",
    "run_compare": ".pipeline",
}


def __getattr__(name):
    module = _EXPORTS.get(name)
    if module is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    return getattr(import_module(module, __name__), name)


def __dir__():
    return sorted(set(globals()) | set(_EXPORTS))
