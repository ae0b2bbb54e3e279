//! Field-normalized bibliometric indicators, institution rankings under
//! configurable evaluation policies, and robustness analyses of
//! subset-based research assessment.
//!
//! The crate covers the full pipeline:
//!
//! 1. **Corpus** ([`corpus`]) — institutions, researchers, publications,
//!    authorships, and the SDS→UDA discipline scheme, loaded from CSV
//!    with full referential validation.
//! 2. **Synthetic data** ([`synth`]) — a deterministic, seed-driven
//!    generator of corpus-shaped data with heavy-tailed productivity and
//!    per-category citation skew.
//! 3. **Indicators** ([`indicators`]) — citation counts normalized to
//!    category-year baselines, per-researcher productivity indicators,
//!    co-author fractionalization, and percentile ranks.
//! 4. **Assessment** ([`assessment`]) — output-selection policies
//!    (evaluate everything, best-k per researcher, FTE-proportional
//!    quotas, a fixed share of discipline output), optional noisy
//!    selection, institution scoring, and ranking tables with fractional
//!    ranks, competition ranks, deciles, and percentiles.
//! 5. **Analysis** ([`analysis`]) — Spearman rank correlation with tie
//!    handling, rank-shift statistics, sensitivity of rankings to the
//!    evaluated share, selection-effectiveness audits, output
//!    concentration (Lorenz), and authorship-noise experiments.
//! 6. **Runs** ([`run`]) — config-driven batch execution with
//!    deterministic file outputs and a reproducibility manifest, used by
//!    the `bibliorank` binary.
//!
//! Every stochastic component is driven by addressed random streams
//! ([`rng`]): identical configs and seeds produce byte-identical
//! results, independent of host or parallelism.
//!
//! See the crate `examples/` directory for one runnable example per
//! capability:
//!
//! ```bash
//! cargo run --example generate_corpus
//! cargo run --example validate_corpus
//! cargo run --example field_normalization
//! cargo run --example researcher_indicators
//! cargo run --example rank_institutions
//! cargo run --example sensitivity_analysis
//! cargo run --example selection_audit
//! cargo run --example concentration
//! cargo run --example attribution_noise
//! cargo run --example full_pipeline
//! ```

pub mod analysis;
pub mod assessment;
pub mod corpus;
pub mod indicators;
pub mod rng;
pub mod run;
pub mod synth;

pub use corpus::{Corpus, CorpusPaths, InstitutionId, PubId, ResearcherId, YearWindow};
pub use indicators::{BaselineTable, PositionWeightScheme, QualityTable};
pub use assessment::{EvaluationScenario, RankingTable, SelectionPolicy, SelectorModel};
