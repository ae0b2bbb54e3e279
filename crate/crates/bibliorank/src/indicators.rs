//! Field-normalized quality scores and researcher productivity
//! indicators.
//!
//! Citation counts are standardized against the mean of their
//! (subject category, publication year) cell, removing cross-field
//! differences in citation intensity. Per-researcher indicators combine
//! the normalized scores with co-author fractionalization, byline
//! position weights, and per-FTE-year scaling.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, PubId, Publication, ResearcherId};

#[derive(Debug, Error, PartialEq)]
pub enum IndicatorError {
    #[error("no baseline cell for ({category}, {year})")]
    MissingBaselineCell { category: String, year: i32 },
    #[error("invalid position weights: {0}")]
    InvalidWeights(String),
    #[error("empty input")]
    EmptyInput,
    #[error("no quality score for publication `{0}`")]
    MissingScore(PubId),
}

/// Per-cell citation baseline.
///
/// Cells keep the exact integer citation sum and count; the mean is
/// their ratio. Scores are computed as `citations * n / sum`, a ratio of
/// exact integers, so scaling every citation count in a cell by a
/// constant leaves every score bit-identical.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BaselineTable {
    cells: BTreeMap<(String, i32), BaselineCell>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaselineCell {
    pub citation_sum: u64,
    pub n_publications: u32,
}

impl BaselineCell {
    pub fn mean(&self) -> f64 {
        if self.n_publications == 0 {
            0.0
        } else {
            self.citation_sum as f64 / f64::from(self.n_publications)
        }
    }
}

impl BaselineTable {
    pub fn cell(&self, category: &str, year: i32) -> Option<BaselineCell> {
        self.cells.get(&(category.to_owned(), year)).copied()
    }

    /// Mean citation count of the cell, if present.
    pub fn mean(&self, category: &str, year: i32) -> Option<f64> {
        self.cell(category, year).map(|c| c.mean())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(String, i32), &BaselineCell)> {
        self.cells.iter()
    }
}

/// Mean citations per (subject category, year) cell over the corpus.
pub fn category_year_baselines(corpus: &Corpus) -> BaselineTable {
    let mut cells: BTreeMap<(String, i32), BaselineCell> = BTreeMap::new();
    for p in corpus.publications() {
        let cell = cells
            .entry((p.subject_category.clone(), p.year))
            .or_insert(BaselineCell {
                citation_sum: 0,
                n_publications: 0,
            });
        cell.citation_sum += u64::from(p.citation_count);
        cell.n_publications += 1;
    }
    BaselineTable { cells }
}

/// Normalized quality of one publication: citations divided by its
/// category-year mean. An all-zero cell maps to 0 for every member.
pub fn normalized_quality(
    publication: &Publication,
    baselines: &BaselineTable,
) -> Result<f64, IndicatorError> {
    let cell = baselines
        .cell(&publication.subject_category, publication.year)
        .ok_or_else(|| IndicatorError::MissingBaselineCell {
            category: publication.subject_category.clone(),
            year: publication.year,
        })?;
    if cell.citation_sum == 0 {
        return Ok(0.0);
    }
    // citations/mean computed as (citations * n) / sum: one exact-integer
    // division, invariant under common scaling of the cell.
    let numerator = u64::from(publication.citation_count) * u64::from(cell.n_publications);
    Ok(numerator as f64 / cell.citation_sum as f64)
}

/// Quality scores for every publication in a corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct QualityTable {
    scores: BTreeMap<PubId, f64>,
}

impl QualityTable {
    pub fn get(&self, pub_id: &PubId) -> Option<f64> {
        self.scores.get(pub_id).copied()
    }

    pub fn require(&self, pub_id: &PubId) -> Result<f64, IndicatorError> {
        self.get(pub_id)
            .ok_or_else(|| IndicatorError::MissingScore(pub_id.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PubId, f64)> {
        self.scores.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (PubId, f64)>) -> Self {
        Self {
            scores: entries.into_iter().collect(),
        }
    }
}

/// Score every publication against the baselines.
pub fn quality_scores(
    corpus: &Corpus,
    baselines: &BaselineTable,
) -> Result<QualityTable, IndicatorError> {
    let mut scores = BTreeMap::new();
    for p in corpus.publications() {
        scores.insert(p.pub_id.clone(), normalized_quality(p, baselines)?);
    }
    Ok(QualityTable { scores })
}

/// How byline position translates into credit shares.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PositionWeightScheme {
    /// Every author gets `1 / total_authors`.
    UniformFraction,
    /// First and last authors get fixed premiums; the remainder is split
    /// equally among middle authors.
    FirstLastPremium { w_first: f64, w_last: f64 },
}

impl Default for PositionWeightScheme {
    fn default() -> Self {
        PositionWeightScheme::UniformFraction
    }
}

/// Credit share of the author at `position` on a byline of
/// `total_authors`. A single author always gets 1.0. Weights over a full
/// byline sum to 1.
pub fn position_weight(
    position: u32,
    total_authors: u32,
    scheme: PositionWeightScheme,
) -> Result<f64, IndicatorError> {
    if position == 0 || position > total_authors {
        return Err(IndicatorError::InvalidWeights(format!(
            "position {position} outside 1..={total_authors}"
        )));
    }
    if total_authors == 1 {
        return Ok(1.0);
    }
    match scheme {
        PositionWeightScheme::UniformFraction => Ok(1.0 / f64::from(total_authors)),
        PositionWeightScheme::FirstLastPremium { w_first, w_last } => {
            if !(0.0..=1.0).contains(&w_first)
                || !(0.0..=1.0).contains(&w_last)
                || w_first + w_last > 1.0
            {
                return Err(IndicatorError::InvalidWeights(format!(
                    "w_first + w_last must be <= 1, got {w_first} + {w_last}"
                )));
            }
            let middle_share = 1.0 - w_first - w_last;
            if total_authors == 2 {
                if middle_share != 0.0 {
                    return Err(IndicatorError::InvalidWeights(
                        "two authors leave no middle positions for the remaining share".into(),
                    ));
                }
                return Ok(if position == 1 { w_first } else { w_last });
            }
            if position == 1 {
                Ok(w_first)
            } else if position == total_authors {
                Ok(w_last)
            } else {
                Ok(middle_share / f64::from(total_authors - 2))
            }
        }
    }
}

/// Productivity indicators of one researcher over the assessment window.
///
/// `*_per_fte_year` fields divide the raw value by
/// `fte × window length in years`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResearcherIndicators {
    pub p_count: u32,
    pub fractional_count: f64,
    pub quality_weighted: f64,
    pub fractional_quality_weighted: f64,
    pub position_weighted: f64,
    pub p_count_per_fte_year: f64,
    pub fractional_count_per_fte_year: f64,
    pub quality_weighted_per_fte_year: f64,
    pub fractional_quality_weighted_per_fte_year: f64,
    pub position_weighted_per_fte_year: f64,
}

/// Indicators for every researcher in the corpus.
pub type IndicatorTable = BTreeMap<ResearcherId, ResearcherIndicators>;

/// Compute the full indicator suite.
///
/// Fractional and position weights always use the true byline length
/// (`total_authors`), so credit does not inflate when co-authors are
/// external to the corpus.
pub fn researcher_indicators(
    corpus: &Corpus,
    scores: &QualityTable,
    scheme: PositionWeightScheme,
) -> Result<IndicatorTable, IndicatorError> {
    let window_years = f64::from(corpus.window().len_years().max(1));
    let mut table = IndicatorTable::new();

    for r in corpus.researchers() {
        let mut ind = ResearcherIndicators::default();
        for a in corpus.authorships_of_researcher(&r.researcher_id) {
            let q = scores.require(&a.pub_id)?;
            let frac = 1.0 / f64::from(a.total_authors);
            let pos_w = position_weight(a.author_position, a.total_authors, scheme)?;
            ind.p_count += 1;
            ind.fractional_count += frac;
            ind.quality_weighted += q;
            ind.fractional_quality_weighted += q * frac;
            ind.position_weighted += q * pos_w;
        }
        let denom = r.fte * window_years;
        ind.p_count_per_fte_year = f64::from(ind.p_count) / denom;
        ind.fractional_count_per_fte_year = ind.fractional_count / denom;
        ind.quality_weighted_per_fte_year = ind.quality_weighted / denom;
        ind.fractional_quality_weighted_per_fte_year = ind.fractional_quality_weighted / denom;
        ind.position_weighted_per_fte_year = ind.position_weighted / denom;
        table.insert(r.researcher_id.clone(), ind);
    }
    Ok(table)
}

/// Percentile rank of each value within the list, preserving input
/// order: `100 * (strictly_below + 0.5 * equal) / n`, in [0, 100].
pub fn percentile_ranks(values: &[f64]) -> Result<Vec<f64>, IndicatorError> {
    if values.is_empty() {
        return Err(IndicatorError::EmptyInput);
    }
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = values.len() as f64;
    Ok(values
        .iter()
        .map(|&v| {
            let below = sorted.partition_point(|&x| x < v) as f64;
            let not_above = sorted.partition_point(|&x| x <= v) as f64;
            let equal = not_above - below;
            100.0 * (below + 0.5 * equal) / n
        })
        .collect())
}
