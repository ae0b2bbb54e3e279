//! Semantic integrity checks.
//!
//! Violations are data, not faults: [`validate`] never fails, it
//! enumerates every broken invariant with the offending entity keys.
//! The report is empty exactly when the corpus is valid.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Corpus;

/// Entity class a finding refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Institution,
    Researcher,
    Publication,
    Authorship,
    Scheme,
}

impl EntityKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EntityKind::Institution => "institution",
            EntityKind::Researcher => "researcher",
            EntityKind::Publication => "publication",
            EntityKind::Authorship => "authorship",
            EntityKind::Scheme => "scheme",
        }
    }
}

/// One invariant violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    DuplicateKey {
        entity: EntityKind,
        key: String,
    },
    DanglingReference {
        entity: EntityKind,
        key: String,
        referenced: EntityKind,
        referenced_key: String,
    },
    DuplicateAuthorship {
        pub_id: String,
        researcher_id: String,
    },
    DuplicatePosition {
        pub_id: String,
        author_position: u32,
    },
    PositionOutOfRange {
        pub_id: String,
        researcher_id: String,
        author_position: u32,
        total_authors: u32,
    },
    TotalAuthorsMismatch {
        pub_id: String,
        values: Vec<u32>,
    },
    TotalAuthorsBelowInternal {
        pub_id: String,
        total_authors: u32,
        internal_authors: u32,
    },
    WindowViolation {
        pub_id: String,
        year: i32,
    },
    EmptyWindow {
        year_min: i32,
        year_max: i32,
    },
    FteOutOfRange {
        researcher_id: String,
        fte: f64,
    },
    SdsMissingFromScheme {
        researcher_id: String,
        sds: String,
    },
    UdaMismatch {
        researcher_id: String,
        sds: String,
        scheme_uda: String,
        declared_uda: String,
    },
    EmptyKey {
        entity: EntityKind,
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::DuplicateKey { entity, key } => {
                write!(f, "duplicate {} key `{key}`", entity.as_str())
            }
            Finding::DanglingReference {
                entity,
                key,
                referenced,
                referenced_key,
            } => write!(
                f,
                "{} `{key}` refers to unknown {} `{referenced_key}`",
                entity.as_str(),
                referenced.as_str()
            ),
            Finding::DuplicateAuthorship {
                pub_id,
                researcher_id,
            } => write!(f, "duplicate authorship ({pub_id}, {researcher_id})"),
            Finding::DuplicatePosition {
                pub_id,
                author_position,
            } => write!(f, "publication `{pub_id}` has position {author_position} twice"),
            Finding::PositionOutOfRange {
                pub_id,
                researcher_id,
                author_position,
                total_authors,
            } => write!(
                f,
                "authorship ({pub_id}, {researcher_id}): position {author_position} outside 1..={total_authors}"
            ),
            Finding::TotalAuthorsMismatch { pub_id, values } => {
                write!(f, "publication `{pub_id}` has inconsistent total_authors {values:?}")
            }
            Finding::TotalAuthorsBelowInternal {
                pub_id,
                total_authors,
                internal_authors,
            } => write!(
                f,
                "publication `{pub_id}`: total_authors {total_authors} < {internal_authors} corpus authorships"
            ),
            Finding::WindowViolation { pub_id, year } => {
                write!(f, "publication `{pub_id}` year {year} outside assessment window")
            }
            Finding::EmptyWindow { year_min, year_max } => {
                write!(f, "empty assessment window [{year_min}, {year_max}]")
            }
            Finding::FteOutOfRange { researcher_id, fte } => {
                write!(f, "researcher `{researcher_id}` fte {fte} outside (0, 1]")
            }
            Finding::SdsMissingFromScheme { researcher_id, sds } => {
                write!(f, "researcher `{researcher_id}` uses sds `{sds}` absent from scheme")
            }
            Finding::UdaMismatch {
                researcher_id,
                sds,
                scheme_uda,
                declared_uda,
            } => write!(
                f,
                "researcher `{researcher_id}`: sds `{sds}` maps to `{scheme_uda}` but row declares `{declared_uda}`"
            ),
            Finding::EmptyKey { entity } => write!(f, "{} with empty key", entity.as_str()),
        }
    }
}

/// Every violation found in a corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter()
    }
}

/// Check every invariant of the corpus and list all violations.
pub fn validate(corpus: &Corpus) -> ValidationReport {
    let mut findings = Vec::new();

    let window = corpus.window();
    if window.year_max < window.year_min {
        findings.push(Finding::EmptyWindow {
            year_min: window.year_min,
            year_max: window.year_max,
        });
    }

    // Unique, non-empty keys per entity class.
    check_keys(
        corpus.institutions().iter().map(|i| i.institution_id.as_str()),
        EntityKind::Institution,
        &mut findings,
    );
    check_keys(
        corpus.researchers().iter().map(|r| r.researcher_id.as_str()),
        EntityKind::Researcher,
        &mut findings,
    );
    check_keys(
        corpus.publications().iter().map(|p| p.pub_id.as_str()),
        EntityKind::Publication,
        &mut findings,
    );

    let institution_ids: BTreeSet<&str> = corpus
        .institutions()
        .iter()
        .map(|i| i.institution_id.as_str())
        .collect();
    let researcher_ids: BTreeSet<&str> = corpus
        .researchers()
        .iter()
        .map(|r| r.researcher_id.as_str())
        .collect();
    let pub_ids: BTreeSet<&str> = corpus
        .publications()
        .iter()
        .map(|p| p.pub_id.as_str())
        .collect();

    for r in corpus.researchers() {
        if !institution_ids.contains(r.institution_id.as_str()) {
            findings.push(Finding::DanglingReference {
                entity: EntityKind::Researcher,
                key: r.researcher_id.to_string(),
                referenced: EntityKind::Institution,
                referenced_key: r.institution_id.to_string(),
            });
        }
        if !(r.fte > 0.0 && r.fte <= 1.0) {
            findings.push(Finding::FteOutOfRange {
                researcher_id: r.researcher_id.to_string(),
                fte: r.fte,
            });
        }
        match corpus.scheme().uda_of(&r.sds) {
            None => findings.push(Finding::SdsMissingFromScheme {
                researcher_id: r.researcher_id.to_string(),
                sds: r.sds.clone(),
            }),
            Some(uda) if uda != r.uda => findings.push(Finding::UdaMismatch {
                researcher_id: r.researcher_id.to_string(),
                sds: r.sds.clone(),
                scheme_uda: uda.to_owned(),
                declared_uda: r.uda.clone(),
            }),
            Some(_) => {}
        }
    }

    for p in corpus.publications() {
        if window.year_max >= window.year_min && !window.contains(p.year) {
            findings.push(Finding::WindowViolation {
                pub_id: p.pub_id.to_string(),
                year: p.year,
            });
        }
    }

    // Authorship-level checks, grouped per publication.
    let mut seen_pairs: BTreeSet<(&str, &str)> = BTreeSet::new();
    let mut per_pub: BTreeMap<&str, Vec<&super::Authorship>> = BTreeMap::new();
    for a in corpus.authorships() {
        if !pub_ids.contains(a.pub_id.as_str()) {
            findings.push(Finding::DanglingReference {
                entity: EntityKind::Authorship,
                key: format!("({}, {})", a.pub_id, a.researcher_id),
                referenced: EntityKind::Publication,
                referenced_key: a.pub_id.to_string(),
            });
        }
        if !researcher_ids.contains(a.researcher_id.as_str()) {
            findings.push(Finding::DanglingReference {
                entity: EntityKind::Authorship,
                key: format!("({}, {})", a.pub_id, a.researcher_id),
                referenced: EntityKind::Researcher,
                referenced_key: a.researcher_id.to_string(),
            });
        }
        if !seen_pairs.insert((a.pub_id.as_str(), a.researcher_id.as_str())) {
            findings.push(Finding::DuplicateAuthorship {
                pub_id: a.pub_id.to_string(),
                researcher_id: a.researcher_id.to_string(),
            });
        }
        if a.author_position == 0 || a.author_position > a.total_authors {
            findings.push(Finding::PositionOutOfRange {
                pub_id: a.pub_id.to_string(),
                researcher_id: a.researcher_id.to_string(),
                author_position: a.author_position,
                total_authors: a.total_authors,
            });
        }
        per_pub.entry(a.pub_id.as_str()).or_default().push(a);
    }

    for (pub_id, authors) in &per_pub {
        let mut positions = BTreeSet::new();
        for a in authors {
            if !positions.insert(a.author_position) {
                findings.push(Finding::DuplicatePosition {
                    pub_id: (*pub_id).to_owned(),
                    author_position: a.author_position,
                });
            }
        }
        let totals: BTreeSet<u32> = authors.iter().map(|a| a.total_authors).collect();
        if totals.len() > 1 {
            findings.push(Finding::TotalAuthorsMismatch {
                pub_id: (*pub_id).to_owned(),
                values: totals.iter().copied().collect(),
            });
        } else if let Some(&total) = totals.iter().next() {
            let internal = authors.len() as u32;
            if total < internal {
                findings.push(Finding::TotalAuthorsBelowInternal {
                    pub_id: (*pub_id).to_owned(),
                    total_authors: total,
                    internal_authors: internal,
                });
            }
        }
    }

    ValidationReport { findings }
}

fn check_keys<'a>(
    keys: impl Iterator<Item = &'a str>,
    entity: EntityKind,
    findings: &mut Vec<Finding>,
) {
    let mut seen = BTreeSet::new();
    for key in keys {
        if key.is_empty() {
            findings.push(Finding::EmptyKey { entity });
        } else if !seen.insert(key) {
            findings.push(Finding::DuplicateKey {
                entity,
                key: key.to_owned(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    fn base() -> (
        Vec<Institution>,
        Vec<Researcher>,
        Vec<Publication>,
        Vec<Authorship>,
        DisciplineScheme,
    ) {
        (
            vec![Institution {
                institution_id: "I1".into(),
                name: "Uni".into(),
            }],
            vec![Researcher {
                researcher_id: "R1".into(),
                institution_id: "I1".into(),
                sds: "FIS/01".into(),
                uda: "PHYS".into(),
                academic_rank: AcademicRank::Full,
                fte: 1.0,
            }],
            vec![Publication {
                pub_id: "P1".into(),
                year: 2001,
                subject_category: "PHYS_APPL".into(),
                citation_count: 5,
                doc_type: DocType::Article,
            }],
            vec![Authorship {
                pub_id: "P1".into(),
                researcher_id: "R1".into(),
                author_position: 1,
                total_authors: 2,
            }],
            DisciplineScheme::new([("FIS/01".to_owned(), "PHYS".to_owned())]),
        )
    }

    #[test]
    fn valid_corpus_has_empty_report() {
        let (i, r, p, a, s) = base();
        let corpus = Corpus::new(i, r, p, a, s, YearWindow::new(2001, 2003));
        assert!(validate(&corpus).is_empty());
    }

    #[test]
    fn duplicate_authorship_is_one_finding() {
        let (i, r, p, mut a, s) = base();
        a.push(Authorship {
            pub_id: "P1".into(),
            researcher_id: "R1".into(),
            author_position: 2,
            total_authors: 2,
        });
        let corpus = Corpus::new(i, r, p, a, s, YearWindow::new(2001, 2003));
        let report = validate(&corpus);
        let dupes: Vec<_> = report
            .iter()
            .filter(|f| matches!(f, Finding::DuplicateAuthorship { .. }))
            .collect();
        assert_eq!(dupes.len(), 1);
        assert_eq!(report.len(), 1);
    }

    #[test]
    fn out_of_window_year_is_flagged() {
        let (i, r, mut p, mut a, s) = base();
        p.push(Publication {
            pub_id: "P2".into(),
            year: 1999,
            subject_category: "PHYS_APPL".into(),
            citation_count: 0,
            doc_type: DocType::Article,
        });
        a.push(Authorship {
            pub_id: "P2".into(),
            researcher_id: "R1".into(),
            author_position: 1,
            total_authors: 1,
        });
        let corpus = Corpus::new(i, r, p, a, s, YearWindow::new(2001, 2003));
        let report = validate(&corpus);
        assert_eq!(
            report.findings(),
            &[Finding::WindowViolation {
                pub_id: "P2".to_owned(),
                year: 1999
            }]
        );
    }

    #[test]
    fn each_violation_class_triggers_individually() {
        // researcher at unknown institution
        let (i, mut r, p, a, s) = base();
        r[0].institution_id = "I9".into();
        let c = Corpus::new(i, r, p, a, s, YearWindow::new(2001, 2003));
        assert!(validate(&c)
            .iter()
            .any(|f| matches!(f, Finding::DanglingReference { .. })));

        // fte out of range
        let (i, mut r, p, a, s) = base();
        r[0].fte = 1.5;
        let c = Corpus::new(i, r, p, a, s, YearWindow::new(2001, 2003));
        assert!(validate(&c)
            .iter()
            .any(|f| matches!(f, Finding::FteOutOfRange { .. })));

        // sds missing from scheme
        let (i, mut r, p, a, _) = base();
        r[0].sds = "CHIM/01".into();
        let c = Corpus::new(i, r, p, a, DisciplineScheme::default(), YearWindow::new(2001, 2003));
        assert!(validate(&c)
            .iter()
            .any(|f| matches!(f, Finding::SdsMissingFromScheme { .. })));

        // declared uda disagrees with scheme
        let (i, mut r, p, a, s) = base();
        r[0].uda = "CHEM".into();
        let c = Corpus::new(i, r, p, a, s, YearWindow::new(2001, 2003));
        assert!(validate(&c)
            .iter()
            .any(|f| matches!(f, Finding::UdaMismatch { .. })));

        // inconsistent total_authors across one publication
        let (i, mut r, p, mut a, s) = base();
        r.push(Researcher {
            researcher_id: "R2".into(),
            institution_id: "I1".into(),
            sds: "FIS/01".into(),
            uda: "PHYS".into(),
            academic_rank: AcademicRank::Assistant,
            fte: 0.5,
        });
        a.push(Authorship {
            pub_id: "P1".into(),
            researcher_id: "R2".into(),
            author_position: 2,
            total_authors: 3,
        });
        let c = Corpus::new(i, r, p, a, s, YearWindow::new(2001, 2003));
        assert!(validate(&c)
            .iter()
            .any(|f| matches!(f, Finding::TotalAuthorsMismatch { .. })));

        // total_authors below the number of corpus authorships
        let (i, mut r, p, mut a, s) = base();
        r.push(Researcher {
            researcher_id: "R2".into(),
            institution_id: "I1".into(),
            sds: "FIS/01".into(),
            uda: "PHYS".into(),
            academic_rank: AcademicRank::Assistant,
            fte: 0.5,
        });
        a[0].total_authors = 1;
        a.push(Authorship {
            pub_id: "P1".into(),
            researcher_id: "R2".into(),
            author_position: 1,
            total_authors: 1,
        });
        let c = Corpus::new(i, r, p, a, s, YearWindow::new(2001, 2003));
        let rep = validate(&c);
        assert!(rep
            .iter()
            .any(|f| matches!(f, Finding::TotalAuthorsBelowInternal { .. })));

        // empty window
        let (i, r, p, a, s) = base();
        let c = Corpus::new(i, r, p, a, s, YearWindow::new(2003, 2001));
        assert!(validate(&c).iter().any(|f| matches!(f, Finding::EmptyWindow { .. })));
    }
}
