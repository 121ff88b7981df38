"""Hierarchical DO/PO bias model with a syntactic-priming simulation harness.

The estimator (`HierarchicalBetaBinomial`) pools verb-specific frame
preferences toward one global bias and exposes sklearn-style
`fit`/`predict_proba`. The experiment layer reruns two simulations on top
of it: a single-prime design crossing prime structure with verb overlap,
and a decay design that follows the priming effect through batches of
fresh exposure. Everything downstream of a seed is deterministic.
"""

from ._version import __version__
from .corpus import BetaParams, Construction, CountTable, Observation, conjugate_update
from .experiments import (
    CONDITIONS,
    Condition,
    DecayRecord,
    EffectRecord,
    ExperimentConfig,
    ExperimentItem,
    Overlap,
    build_materials,
    builtin_prior_table,
    effect_size,
    run_sim1,
    run_sim2,
    sample_batch,
)
from .logmath import beta_binomial_log_pmf, ln_beta, ln_choose, ln_gamma, log_sum_exp, logit
from .model import (
    HierarchicalBetaBinomial,
    MonteCarloEstimate,
    bias_log_likelihood,
    importance_sampled_proba,
)
from .reports import (
    CorpusError,
    RunReport,
    decay_chart_svg,
    parse_corpus,
    serialize_corpus,
    sim1_csv,
    sim2_csv,
    verb_report_block,
)

__all__ = [
    "__version__",
    "BetaParams",
    "Construction",
    "CountTable",
    "Observation",
    "conjugate_update",
    "CONDITIONS",
    "Condition",
    "DecayRecord",
    "EffectRecord",
    "ExperimentConfig",
    "ExperimentItem",
    "Overlap",
    "build_materials",
    "builtin_prior_table",
    "effect_size",
    "run_sim1",
    "run_sim2",
    "sample_batch",
    "beta_binomial_log_pmf",
    "ln_beta",
    "ln_choose",
    "ln_gamma",
    "log_sum_exp",
    "logit",
    "HierarchicalBetaBinomial",
    "MonteCarloEstimate",
    "bias_log_likelihood",
    "importance_sampled_proba",
    "CorpusError",
    "RunReport",
    "decay_chart_svg",
    "parse_corpus",
    "serialize_corpus",
    "sim1_csv",
    "sim2_csv",
    "verb_report_block",
]
