//! Corpus summary counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Corpus;

/// Five-number-ish summary of a count distribution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DistributionSummary {
    pub mean: f64,
    pub min: u64,
    pub max: u64,
    /// value -> how many subjects have that value
    pub histogram: BTreeMap<u64, u64>,
}

impl DistributionSummary {
    fn from_counts(counts: &[u64]) -> Self {
        if counts.is_empty() {
            return Self::default();
        }
        let mut histogram = BTreeMap::new();
        for &c in counts {
            *histogram.entry(c).or_insert(0) += 1;
        }
        Self {
            mean: counts.iter().sum::<u64>() as f64 / counts.len() as f64,
            min: counts.iter().copied().min().unwrap(),
            max: counts.iter().copied().max().unwrap(),
            histogram,
        }
    }
}

/// Aggregate counts over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_institutions: usize,
    pub n_researchers: usize,
    pub n_publications: usize,
    pub n_authorships: usize,
    /// uda -> researcher count
    pub researchers_per_uda: BTreeMap<String, usize>,
    /// subject_category -> year -> publication count
    pub publications_per_category_year: BTreeMap<String, BTreeMap<i32, usize>>,
    pub publications_per_researcher: DistributionSummary,
}

/// Summarize a (valid) corpus.
pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut researchers_per_uda: BTreeMap<String, usize> = BTreeMap::new();
    for r in corpus.researchers() {
        *researchers_per_uda.entry(r.uda.clone()).or_insert(0) += 1;
    }

    let mut publications_per_category_year: BTreeMap<String, BTreeMap<i32, usize>> =
        BTreeMap::new();
    for p in corpus.publications() {
        *publications_per_category_year
            .entry(p.subject_category.clone())
            .or_default()
            .entry(p.year)
            .or_insert(0) += 1;
    }

    let per_researcher: Vec<u64> = corpus
        .researchers()
        .iter()
        .map(|r| corpus.authorships_of_researcher(&r.researcher_id).count() as u64)
        .collect();

    CorpusStats {
        n_institutions: corpus.institutions().len(),
        n_researchers: corpus.researchers().len(),
        n_publications: corpus.publications().len(),
        n_authorships: corpus.authorships().len(),
        researchers_per_uda,
        publications_per_category_year,
        publications_per_researcher: DistributionSummary::from_counts(&per_researcher),
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn empty_corpus_is_all_zero() {
        let stats = corpus_stats(&Corpus::empty(YearWindow::new(0, 0)));
        assert_eq!(stats, CorpusStats::default());
    }

    #[test]
    fn category_year_cells_sum_to_publication_count() {
        let scheme = DisciplineScheme::new([("FIS/01".to_owned(), "PHYS".to_owned())]);
        let pubs: Vec<Publication> = [
            ("P1", 2001, "A"),
            ("P2", 2001, "A"),
            ("P3", 2002, "A"),
            ("P4", 2001, "B"),
            ("P5", 2002, "B"),
        ]
        .into_iter()
        .map(|(id, year, cat)| Publication {
            pub_id: id.into(),
            year,
            subject_category: cat.to_owned(),
            citation_count: 1,
            doc_type: DocType::Article,
        })
        .collect();
        let corpus = Corpus::new(
            Vec::new(),
            Vec::new(),
            pubs,
            Vec::new(),
            scheme,
            YearWindow::new(2001, 2002),
        );
        let stats = corpus_stats(&corpus);
        let total: usize = stats
            .publications_per_category_year
            .values()
            .flat_map(|m| m.values())
            .sum();
        assert_eq!(total, 5);
        assert_eq!(stats.publications_per_category_year["A"][&2001], 2);
    }
}
