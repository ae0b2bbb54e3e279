//! Domain model for a publication corpus: institutions, researchers,
//! publications, authorships, and the discipline scheme that maps
//! fine-grained field codes (SDS) onto discipline areas (UDA).
//!
//! A [`Corpus`] is immutable after construction and safe to share across
//! threads. Construction is permissive: semantic problems (dangling
//! references, duplicate keys, window violations) are representable and
//! reported by [`validate`], while [`io::load_corpus`] refuses to hand out
//! a corpus that has any finding.

mod io;
mod stats;
mod validate;

pub use io::{load_corpus, read_corpus, write_corpus, CorpusPaths, LoadError, LoadOptions};
pub use stats::{corpus_stats, CorpusStats, DistributionSummary};
pub use validate::{validate, EntityKind, Finding, ValidationReport};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_key {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}

string_key!(
    /// Opaque key of an institution.
    InstitutionId
);
string_key!(
    /// Opaque key of a researcher.
    ResearcherId
);
string_key!(
    /// Opaque key of a publication.
    PubId
);

/// Academic rank of a researcher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcademicRank {
    Full,
    Associate,
    Assistant,
}

impl AcademicRank {
    pub fn as_str(self) -> &'static str {
        match self {
            AcademicRank::Full => "full",
            AcademicRank::Associate => "associate",
            AcademicRank::Assistant => "assistant",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full" => Some(AcademicRank::Full),
            "associate" => Some(AcademicRank::Associate),
            "assistant" => Some(AcademicRank::Assistant),
            _ => None,
        }
    }
}

/// Document type of a publication. Only the types covered by the
/// citation benchmarks are admitted; anything else is rejected at load.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocType {
    Article,
    Review,
    Proceedings,
}

impl DocType {
    pub fn as_str(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::Review => "review",
            DocType::Proceedings => "proceedings",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "article" => Some(DocType::Article),
            "review" => Some(DocType::Review),
            "proceedings" => Some(DocType::Proceedings),
            _ => None,
        }
    }
}

/// An evaluated research unit (university, public research organization).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Institution {
    pub institution_id: InstitutionId,
    pub name: String,
}

/// A researcher on the staff of exactly one institution, classified in a
/// Scientific Disciplinary Sector (`sds`) which belongs to a University
/// Disciplinary Area (`uda`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Researcher {
    pub researcher_id: ResearcherId,
    pub institution_id: InstitutionId,
    pub sds: String,
    pub uda: String,
    pub academic_rank: AcademicRank,
    /// Employment fraction, in (0, 1].
    pub fte: f64,
}

/// A publication with a frozen citation snapshot. `subject_category` is
/// the citation-benchmark field of the venue, which is not necessarily
/// the same as any author's SDS.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub pub_id: PubId,
    pub year: i32,
    pub subject_category: String,
    pub citation_count: u32,
    pub doc_type: DocType,
}

/// Links a researcher to a publication. `total_authors` is the true
/// byline length, including co-authors that are not part of the corpus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Authorship {
    pub pub_id: PubId,
    pub researcher_id: ResearcherId,
    /// 1-based position in the byline.
    pub author_position: u32,
    pub total_authors: u32,
}

/// Total mapping from SDS codes to UDA codes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisciplineScheme {
    sds_to_uda: std::collections::BTreeMap<String, String>,
}

impl DisciplineScheme {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        Self {
            sds_to_uda: pairs.into_iter().collect(),
        }
    }

    pub fn uda_of(&self, sds: &str) -> Option<&str> {
        self.sds_to_uda.get(sds).map(String::as_str)
    }

    pub fn contains_uda(&self, uda: &str) -> bool {
        self.sds_to_uda.values().any(|u| u == uda)
    }

    pub fn udas(&self) -> BTreeSet<&str> {
        self.sds_to_uda.values().map(String::as_str).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.sds_to_uda
            .iter()
            .map(|(s, u)| (s.as_str(), u.as_str()))
    }

    pub fn len(&self) -> usize {
        self.sds_to_uda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sds_to_uda.is_empty()
    }
}

/// Inclusive assessment window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearWindow {
    pub year_min: i32,
    pub year_max: i32,
}

impl YearWindow {
    pub fn new(year_min: i32, year_max: i32) -> Self {
        Self { year_min, year_max }
    }

    pub fn contains(&self, year: i32) -> bool {
        year >= self.year_min && year <= self.year_max
    }

    /// Window length in years, inclusive of both endpoints.
    pub fn len_years(&self) -> u32 {
        if self.year_max < self.year_min {
            0
        } else {
            (self.year_max - self.year_min + 1) as u32
        }
    }
}

/// Immutable publication corpus.
///
/// Entity collections are kept in canonical order (sorted by key, then by
/// remaining fields), so two corpora built from the same rows in any order
/// compare equal and serialize identically.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    institutions: Vec<Institution>,
    researchers: Vec<Researcher>,
    publications: Vec<Publication>,
    authorships: Vec<Authorship>,
    scheme: DisciplineScheme,
    window: YearWindow,
    // Authorship indexes, aligned with `publications` / `researchers`.
    // On a corpus with duplicate keys these bind to the first occurrence;
    // validation works off the raw collections.
    by_publication: Vec<Vec<usize>>,
    by_researcher: Vec<Vec<usize>>,
}

impl Corpus {
    pub fn new(
        mut institutions: Vec<Institution>,
        mut researchers: Vec<Researcher>,
        mut publications: Vec<Publication>,
        mut authorships: Vec<Authorship>,
        scheme: DisciplineScheme,
        window: YearWindow,
    ) -> Self {
        institutions.sort_by(|a, b| (&a.institution_id, &a.name).cmp(&(&b.institution_id, &b.name)));
        researchers.sort_by(|a, b| {
            (&a.researcher_id, &a.institution_id)
                .cmp(&(&b.researcher_id, &b.institution_id))
                .then_with(|| a.sds.cmp(&b.sds))
        });
        publications.sort_by(|a, b| {
            (&a.pub_id, a.year, &a.subject_category).cmp(&(&b.pub_id, b.year, &b.subject_category))
        });
        authorships.sort();

        let mut by_publication = vec![Vec::new(); publications.len()];
        let mut by_researcher = vec![Vec::new(); researchers.len()];
        for (i, a) in authorships.iter().enumerate() {
            if let Ok(p) = publications.binary_search_by(|x| x.pub_id.cmp(&a.pub_id)) {
                by_publication[first_equal(&publications, p, |x| &x.pub_id)].push(i);
            }
            if let Ok(r) = researchers.binary_search_by(|x| x.researcher_id.cmp(&a.researcher_id)) {
                by_researcher[first_equal(&researchers, r, |x| &x.researcher_id)].push(i);
            }
        }

        Self {
            institutions,
            researchers,
            publications,
            authorships,
            scheme,
            window,
            by_publication,
            by_researcher,
        }
    }

    pub fn empty(window: YearWindow) -> Self {
        Self::new(
            Vec::new(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            DisciplineScheme::default(),
            window,
        )
    }

    pub fn institutions(&self) -> &[Institution] {
        &self.institutions
    }

    pub fn researchers(&self) -> &[Researcher] {
        &self.researchers
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn authorships(&self) -> &[Authorship] {
        &self.authorships
    }

    pub fn scheme(&self) -> &DisciplineScheme {
        &self.scheme
    }

    pub fn window(&self) -> YearWindow {
        self.window
    }

    pub fn institution(&self, id: &InstitutionId) -> Option<&Institution> {
        self.institutions
            .binary_search_by(|x| x.institution_id.cmp(id))
            .ok()
            .map(|i| &self.institutions[i])
    }

    pub fn researcher(&self, id: &ResearcherId) -> Option<&Researcher> {
        self.researcher_index(id).map(|i| &self.researchers[i])
    }

    pub fn publication(&self, id: &PubId) -> Option<&Publication> {
        self.publication_index(id).map(|i| &self.publications[i])
    }

    fn researcher_index(&self, id: &ResearcherId) -> Option<usize> {
        self.researchers
            .binary_search_by(|x| x.researcher_id.cmp(id))
            .ok()
            .map(|i| first_equal(&self.researchers, i, |x| &x.researcher_id))
    }

    fn publication_index(&self, id: &PubId) -> Option<usize> {
        self.publications
            .binary_search_by(|x| x.pub_id.cmp(id))
            .ok()
            .map(|i| first_equal(&self.publications, i, |x| &x.pub_id))
    }

    /// Authorships of one publication, in canonical order.
    pub fn authorships_of_publication(&self, id: &PubId) -> impl Iterator<Item = &Authorship> {
        let idx = self.publication_index(id);
        idx.map(|i| self.by_publication[i].as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&i| &self.authorships[i])
    }

    /// Authorships of one researcher, in canonical order.
    pub fn authorships_of_researcher(&self, id: &ResearcherId) -> impl Iterator<Item = &Authorship> {
        let idx = self.researcher_index(id);
        idx.map(|i| self.by_researcher[i].as_slice())
            .unwrap_or(&[])
            .iter()
            .map(|&i| &self.authorships[i])
    }

    /// UDA codes that occur in the scheme.
    pub fn udas(&self) -> BTreeSet<&str> {
        self.scheme.udas()
    }
}

fn first_equal<T, K: PartialEq + ?Sized>(items: &[T], hit: usize, key: impl Fn(&T) -> &K) -> usize {
    let mut i = hit;
    while i > 0 && key(&items[i - 1]) == key(&items[hit]) {
        i -= 1;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_corpus() -> Corpus {
        let scheme = DisciplineScheme::new([("FIS/01".to_owned(), "PHYS".to_owned())]);
        Corpus::new(
            vec![Institution {
                institution_id: "I1".into(),
                name: "Uni One".into(),
            }],
            vec![Researcher {
                researcher_id: "R1".into(),
                institution_id: "I1".into(),
                sds: "FIS/01".into(),
                uda: "PHYS".into(),
                academic_rank: AcademicRank::Full,
                fte: 1.0,
            }],
            vec![
                Publication {
                    pub_id: "P2".into(),
                    year: 2002,
                    subject_category: "PHYS_APPL".into(),
                    citation_count: 3,
                    doc_type: DocType::Article,
                },
                Publication {
                    pub_id: "P1".into(),
                    year: 2001,
                    subject_category: "PHYS_APPL".into(),
                    citation_count: 5,
                    doc_type: DocType::Review,
                },
            ],
            vec![
                Authorship {
                    pub_id: "P2".into(),
                    researcher_id: "R1".into(),
                    author_position: 1,
                    total_authors: 2,
                },
                Authorship {
                    pub_id: "P1".into(),
                    researcher_id: "R1".into(),
                    author_position: 1,
                    total_authors: 1,
                },
            ],
            scheme,
            YearWindow::new(2001, 2003),
        )
    }

    #[test]
    fn canonical_order_is_key_sorted() {
        let c = tiny_corpus();
        assert_eq!(c.publications()[0].pub_id.as_str(), "P1");
        assert_eq!(c.publications()[1].pub_id.as_str(), "P2");
        assert_eq!(c.authorships()[0].pub_id.as_str(), "P1");
    }

    #[test]
    fn lookup_and_authorship_indexes() {
        let c = tiny_corpus();
        assert_eq!(c.publication(&"P1".into()).unwrap().citation_count, 5);
        assert!(c.publication(&"P9".into()).is_none());
        let of_r1: Vec<_> = c
            .authorships_of_researcher(&"R1".into())
            .map(|a| a.pub_id.as_str())
            .collect();
        assert_eq!(of_r1, vec!["P1", "P2"]);
        assert_eq!(c.authorships_of_publication(&"P2".into()).count(), 1);
    }

    #[test]
    fn construction_is_order_insensitive() {
        let a = tiny_corpus();
        let mut pubs = a.publications().to_vec();
        pubs.reverse();
        let b = Corpus::new(
            a.institutions().to_vec(),
            a.researchers().to_vec(),
            pubs,
            {
                let mut au = a.authorships().to_vec();
                au.reverse();
                au
            },
            a.scheme().clone(),
            a.window(),
        );
        assert_eq!(a, b);
    }

    #[test]
    fn window_length_inclusive() {
        assert_eq!(YearWindow::new(2001, 2003).len_years(), 3);
        assert_eq!(YearWindow::new(2001, 2001).len_years(), 1);
    }
}
