"""Multivariate Polya (Dirichlet-multinomial) parameter estimation and
collapsed-Gibbs topic modeling with learned hyperparameters.

All randomness flows through numpy ``Generator`` objects backed by PCG64;
seeded runs are bit-for-bit reproducible.
"""

from .corpus import (
    Corpus,
    SplitSpec,
    Vocabulary,
    corpus_from_token_lists,
    default_stopwords,
    load_corpus,
    load_stopwords,
    split_train_test,
    tokenize,
)
from .estimators import (
    EstimateResult,
    EstimatorConfig,
    estimate_gn,
    estimate_minka_fpi,
    estimate_moments,
)
from .evaluation import (
    ClassificationReport,
    LtrConfig,
    MCLDAModel,
    ScoreConfig,
    classify,
    left_to_right_log_likelihood,
    mc_lda_merge,
    mc_lda_score,
    perplexity,
    threshold_sweep,
)
from .lda import (
    TopicModelState,
    TrainConfig,
    TrainedModel,
    gibbs_sweep,
    init_topic_state,
    load_model,
    save_model,
    train_lda,
    train_lda_gn,
)
from .polya import (
    CountHistograms,
    CountVector,
    Histogram,
    PolyaParams,
    SampleSet,
    build_histograms,
    digamma_diff_sum,
    log_rising_sum,
    polya_log_likelihood,
    polya_log_likelihood_hist,
    read_samples,
    trigamma_diff_sum,
    write_samples,
)
from .synth import (
    BenchGrid,
    BenchRecord,
    read_bench_csv,
    run_accuracy_bench,
    run_speed_bench,
    sample_alpha_uniform,
    sample_polya,
    write_bench_csv,
)

__version__ = "0.1.0"
