//! CSV ingestion and export.
//!
//! Five UTF-8, comma-delimited files with header rows:
//!
//! ```text
//! institutions.csv  institution_id,name
//! researchers.csv   researcher_id,institution_id,sds,uda,academic_rank,fte
//! publications.csv  pub_id,year,subject_category,citation_count,doc_type
//! authorships.csv   pub_id,researcher_id,author_position,total_authors
//! scheme.csv        sds,uda
//! ```
//!
//! [`read_corpus`] only enforces what a row must satisfy to be
//! representable (parseable fields, enums, value ranges); cross-entity
//! problems become [`validate`](super::validate) findings. [`load_corpus`]
//! additionally runs validation and fails on the first finding.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use super::validate::{validate, Finding};
use super::{
    AcademicRank, Authorship, Corpus, DisciplineScheme, DocType, Institution, Publication,
    Researcher, YearWindow,
};

/// Locations of the corpus files.
///
/// `window` is optional metadata (`window.csv`: `year_min,year_max`);
/// when the file is absent the window is inferred from publication years.
#[derive(Debug, Clone)]
pub struct CorpusPaths {
    pub institutions: PathBuf,
    pub researchers: PathBuf,
    pub publications: PathBuf,
    pub authorships: PathBuf,
    pub scheme: PathBuf,
    pub window: PathBuf,
}

impl CorpusPaths {
    /// Conventional file names under one directory.
    pub fn from_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        Self {
            institutions: dir.join("institutions.csv"),
            researchers: dir.join("researchers.csv"),
            publications: dir.join("publications.csv"),
            authorships: dir.join("authorships.csv"),
            scheme: dir.join("scheme.csv"),
            window: dir.join("window.csv"),
        }
    }
}

/// Load-time options.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Assessment window. Takes precedence over `window.csv`; when
    /// neither is present the window is inferred as the min..max
    /// publication year (0..0 for an empty corpus).
    pub window: Option<YearWindow>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("{file}:{row}: column `{column}`: {message}")]
    SchemaViolation {
        file: String,
        row: u64,
        column: &'static str,
        message: String,
    },
    #[error("dangling reference: {entity} `{key}` refers to unknown {referenced} `{referenced_key}`")]
    DanglingReference {
        entity: &'static str,
        key: String,
        referenced: &'static str,
        referenced_key: String,
    },
    #[error("duplicate key: {entity} `{key}`")]
    DuplicateKey { entity: &'static str, key: String },
    #[error("invalid corpus: {0}")]
    Invariant(Finding),
    #[error("{path}: csv error: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Parse the five files into a corpus without cross-entity checks.
///
/// The result may carry semantic violations; run
/// [`validate`](super::validate) to enumerate them.
pub fn read_corpus(paths: &CorpusPaths, options: &LoadOptions) -> Result<Corpus, LoadError> {
    let institutions = read_institutions(&paths.institutions)?;
    let researchers = read_researchers(&paths.researchers)?;
    let publications = read_publications(&paths.publications)?;
    let authorships = read_authorships(&paths.authorships)?;
    let scheme = read_scheme(&paths.scheme)?;

    let window = match options.window {
        Some(w) => w,
        None => match read_window(&paths.window)? {
            Some(w) => w,
            None => infer_window(&publications),
        },
    };
    Ok(Corpus::new(
        institutions,
        researchers,
        publications,
        authorships,
        scheme,
        window,
    ))
}

/// Strict load: parse, validate, and refuse a corpus with any finding.
///
/// The load is order-independent: any permutation of the input rows
/// produces the same corpus.
pub fn load_corpus(paths: &CorpusPaths) -> Result<Corpus, LoadError> {
    load_corpus_with(paths, &LoadOptions::default())
}

pub fn load_corpus_with(paths: &CorpusPaths, options: &LoadOptions) -> Result<Corpus, LoadError> {
    let corpus = read_corpus(paths, options)?;
    let report = validate(&corpus);
    match report.findings().first() {
        None => Ok(corpus),
        Some(finding) => Err(finding_to_load_error(finding)),
    }
}

fn finding_to_load_error(finding: &Finding) -> LoadError {
    match finding {
        Finding::DanglingReference {
            entity,
            key,
            referenced,
            referenced_key,
        } => LoadError::DanglingReference {
            entity: entity.as_str(),
            key: key.clone(),
            referenced: referenced.as_str(),
            referenced_key: referenced_key.clone(),
        },
        Finding::DuplicateKey { entity, key } => LoadError::DuplicateKey {
            entity: entity.as_str(),
            key: key.clone(),
        },
        other => LoadError::Invariant(other.clone()),
    }
}

fn infer_window(publications: &[Publication]) -> YearWindow {
    let years = publications.iter().map(|p| p.year);
    match (years.clone().min(), years.max()) {
        (Some(lo), Some(hi)) => YearWindow::new(lo, hi),
        _ => YearWindow::new(0, 0),
    }
}

/// Write a corpus back to the five-file CSV layout, creating `dir` if
/// needed. Rows are emitted in canonical order, so equal corpora produce
/// byte-identical files.
pub fn write_corpus(corpus: &Corpus, dir: impl AsRef<Path>) -> Result<CorpusPaths, LoadError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| LoadError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let paths = CorpusPaths::from_dir(dir);

    write_rows(&paths.institutions, &["institution_id", "name"], corpus.institutions(), |i| {
        vec![i.institution_id.to_string(), i.name.clone()]
    })?;
    write_rows(
        &paths.researchers,
        &["researcher_id", "institution_id", "sds", "uda", "academic_rank", "fte"],
        corpus.researchers(),
        |r| {
            vec![
                r.researcher_id.to_string(),
                r.institution_id.to_string(),
                r.sds.clone(),
                r.uda.clone(),
                r.academic_rank.as_str().to_owned(),
                format_f64(r.fte),
            ]
        },
    )?;
    write_rows(
        &paths.publications,
        &["pub_id", "year", "subject_category", "citation_count", "doc_type"],
        corpus.publications(),
        |p| {
            vec![
                p.pub_id.to_string(),
                p.year.to_string(),
                p.subject_category.clone(),
                p.citation_count.to_string(),
                p.doc_type.as_str().to_owned(),
            ]
        },
    )?;
    write_rows(
        &paths.authorships,
        &["pub_id", "researcher_id", "author_position", "total_authors"],
        corpus.authorships(),
        |a| {
            vec![
                a.pub_id.to_string(),
                a.researcher_id.to_string(),
                a.author_position.to_string(),
                a.total_authors.to_string(),
            ]
        },
    )?;
    let scheme_rows: Vec<(String, String)> = corpus
        .scheme()
        .iter()
        .map(|(s, u)| (s.to_owned(), u.to_owned()))
        .collect();
    write_rows(&paths.scheme, &["sds", "uda"], &scheme_rows, |(s, u)| {
        vec![s.clone(), u.clone()]
    })?;
    let w = corpus.window();
    write_rows(&paths.window, &["year_min", "year_max"], &[w], |w| {
        vec![w.year_min.to_string(), w.year_max.to_string()]
    })?;
    Ok(paths)
}

/// Shortest round-trip decimal form with a "." decimal point.
fn format_f64(x: f64) -> String {
    let mut s = format!("{x}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

fn write_rows<T>(
    path: &Path,
    header: &[&str],
    rows: &[T],
    to_record: impl Fn(&T) -> Vec<String>,
) -> Result<(), LoadError> {
    let io_err = |source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    let wrap = |source: csv::Error| LoadError::Csv {
        path: path.to_path_buf(),
        source,
    };
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(to_record(row)).map_err(wrap)?;
    }
    w.flush().map_err(io_err)?;
    Ok(())
}

struct FileReader {
    path: PathBuf,
    file_name: String,
    reader: csv::Reader<BufReader<File>>,
}

impl FileReader {
    fn open(path: &Path, columns: &[&str]) -> Result<Self, LoadError> {
        let file = File::open(path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                LoadError::MissingFile(path.to_path_buf())
            } else {
                LoadError::Io {
                    path: path.to_path_buf(),
                    source: e,
                }
            }
        })?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(BufReader::new(file));
        let file_name = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let headers = reader.headers().map_err(|source| LoadError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let got: Vec<&str> = headers.iter().collect();
        if got != columns {
            return Err(LoadError::SchemaViolation {
                file: file_name,
                row: 1,
                column: "header",
                message: format!("expected header {columns:?}, found {got:?}"),
            });
        }
        Ok(Self {
            path: path.to_path_buf(),
            file_name,
            reader,
        })
    }

    fn rows(&mut self) -> Result<Vec<(u64, csv::StringRecord)>, LoadError> {
        let mut out = Vec::new();
        for (i, rec) in self.reader.records().enumerate() {
            let rec = rec.map_err(|source| LoadError::Csv {
                path: self.path.clone(),
                source,
            })?;
            // 1-based data row numbers, header is row 1.
            out.push((i as u64 + 2, rec));
        }
        Ok(out)
    }

    fn violation(&self, row: u64, column: &'static str, message: impl Into<String>) -> LoadError {
        LoadError::SchemaViolation {
            file: self.file_name.clone(),
            row,
            column,
            message: message.into(),
        }
    }
}

fn field<'r>(
    fr: &FileReader,
    rec: &'r csv::StringRecord,
    row: u64,
    idx: usize,
    column: &'static str,
) -> Result<&'r str, LoadError> {
    rec.get(idx)
        .ok_or_else(|| fr.violation(row, column, "missing field"))
}

fn nonempty(
    fr: &FileReader,
    rec: &csv::StringRecord,
    row: u64,
    idx: usize,
    column: &'static str,
) -> Result<String, LoadError> {
    let v = field(fr, rec, row, idx, column)?;
    if v.is_empty() {
        return Err(fr.violation(row, column, "must be non-empty"));
    }
    Ok(v.to_owned())
}

fn parse_num<T: std::str::FromStr>(
    fr: &FileReader,
    rec: &csv::StringRecord,
    row: u64,
    idx: usize,
    column: &'static str,
) -> Result<T, LoadError> {
    let v = field(fr, rec, row, idx, column)?;
    v.parse()
        .map_err(|_| fr.violation(row, column, format!("cannot parse `{v}`")))
}

fn read_institutions(path: &Path) -> Result<Vec<Institution>, LoadError> {
    let mut fr = FileReader::open(path, &["institution_id", "name"])?;
    let mut out = Vec::new();
    for (row, rec) in fr.rows()? {
        out.push(Institution {
            institution_id: nonempty(&fr, &rec, row, 0, "institution_id")?.into(),
            name: field(&fr, &rec, row, 1, "name")?.to_owned(),
        });
    }
    Ok(out)
}

fn read_researchers(path: &Path) -> Result<Vec<Researcher>, LoadError> {
    let mut fr = FileReader::open(
        path,
        &["researcher_id", "institution_id", "sds", "uda", "academic_rank", "fte"],
    )?;
    let mut out = Vec::new();
    for (row, rec) in fr.rows()? {
        let rank_raw = field(&fr, &rec, row, 4, "academic_rank")?;
        let academic_rank = AcademicRank::parse(rank_raw).ok_or_else(|| {
            fr.violation(row, "academic_rank", format!("unknown rank `{rank_raw}`"))
        })?;
        let fte: f64 = parse_num(&fr, &rec, row, 5, "fte")?;
        if !(fte > 0.0 && fte <= 1.0) {
            return Err(fr.violation(row, "fte", format!("must be in (0, 1], got {fte}")));
        }
        out.push(Researcher {
            researcher_id: nonempty(&fr, &rec, row, 0, "researcher_id")?.into(),
            institution_id: nonempty(&fr, &rec, row, 1, "institution_id")?.into(),
            sds: nonempty(&fr, &rec, row, 2, "sds")?,
            uda: nonempty(&fr, &rec, row, 3, "uda")?,
            academic_rank,
            fte,
        });
    }
    Ok(out)
}

fn read_publications(path: &Path) -> Result<Vec<Publication>, LoadError> {
    let mut fr = FileReader::open(
        path,
        &["pub_id", "year", "subject_category", "citation_count", "doc_type"],
    )?;
    let mut out = Vec::new();
    for (row, rec) in fr.rows()? {
        let doc_raw = field(&fr, &rec, row, 4, "doc_type")?;
        let doc_type = DocType::parse(doc_raw)
            .ok_or_else(|| fr.violation(row, "doc_type", format!("unknown type `{doc_raw}`")))?;
        out.push(Publication {
            pub_id: nonempty(&fr, &rec, row, 0, "pub_id")?.into(),
            year: parse_num(&fr, &rec, row, 1, "year")?,
            subject_category: nonempty(&fr, &rec, row, 2, "subject_category")?,
            citation_count: parse_num(&fr, &rec, row, 3, "citation_count")?,
            doc_type,
        });
    }
    Ok(out)
}

fn read_authorships(path: &Path) -> Result<Vec<Authorship>, LoadError> {
    let mut fr = FileReader::open(
        path,
        &["pub_id", "researcher_id", "author_position", "total_authors"],
    )?;
    let mut out = Vec::new();
    for (row, rec) in fr.rows()? {
        let author_position: u32 = parse_num(&fr, &rec, row, 2, "author_position")?;
        let total_authors: u32 = parse_num(&fr, &rec, row, 3, "total_authors")?;
        if author_position == 0 {
            return Err(fr.violation(row, "author_position", "must be ≥ 1"));
        }
        if total_authors < author_position {
            return Err(fr.violation(
                row,
                "total_authors",
                format!("must be ≥ author_position ({author_position}), got {total_authors}"),
            ));
        }
        out.push(Authorship {
            pub_id: nonempty(&fr, &rec, row, 0, "pub_id")?.into(),
            researcher_id: nonempty(&fr, &rec, row, 1, "researcher_id")?.into(),
            author_position,
            total_authors,
        });
    }
    Ok(out)
}

fn read_window(path: &Path) -> Result<Option<YearWindow>, LoadError> {
    if !path.exists() {
        return Ok(None);
    }
    let mut fr = FileReader::open(path, &["year_min", "year_max"])?;
    let rows = fr.rows()?;
    match rows.as_slice() {
        [(row, rec)] => {
            let year_min: i32 = parse_num(&fr, rec, *row, 0, "year_min")?;
            let year_max: i32 = parse_num(&fr, rec, *row, 1, "year_max")?;
            Ok(Some(YearWindow::new(year_min, year_max)))
        }
        _ => Err(fr.violation(2, "year_min", "expected exactly one data row")),
    }
}

fn read_scheme(path: &Path) -> Result<DisciplineScheme, LoadError> {
    let mut fr = FileReader::open(path, &["sds", "uda"])?;
    let mut pairs = Vec::new();
    for (row, rec) in fr.rows()? {
        let sds = nonempty(&fr, &rec, row, 0, "sds")?;
        let uda = nonempty(&fr, &rec, row, 1, "uda")?;
        if let Some((_, prev)) = pairs.iter().find(|(s, _)| *s == sds) {
            if *prev != uda {
                return Err(fr.violation(
                    row,
                    "sds",
                    format!("`{sds}` mapped to both `{prev}` and `{uda}`"),
                ));
            }
        }
        pairs.push((sds, uda));
    }
    Ok(DisciplineScheme::new(pairs))
}

/// Serialize any report as pretty JSON (stable field order).
pub(crate) fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// Atomic file write: everything is staged and renamed into place.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
    ));
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_file(dir: &Path, name: &str, contents: &str) {
        std::fs::write(dir.join(name), contents).unwrap();
    }

    fn well_formed(dir: &Path) {
        write_file(dir, "institutions.csv", "institution_id,name\nI1,Uni One\nI2,Uni Two\n");
        write_file(
            dir,
            "researchers.csv",
            "researcher_id,institution_id,sds,uda,academic_rank,fte\n\
             R1,I1,FIS/01,PHYS,full,1.0\n\
             R2,I1,FIS/01,PHYS,associate,0.5\n\
             R3,I2,BIO/10,BIO,assistant,1.0\n",
        );
        write_file(
            dir,
            "publications.csv",
            "pub_id,year,subject_category,citation_count,doc_type\n\
             P1,2001,PHYS_APPL,5,article\n\
             P2,2002,PHYS_APPL,0,review\n\
             P3,2001,BIO_CELL,9,article\n\
             P4,2003,BIO_CELL,2,proceedings\n\
             P5,2002,PHYS_COND,7,article\n",
        );
        write_file(
            dir,
            "authorships.csv",
            "pub_id,researcher_id,author_position,total_authors\n\
             P1,R1,1,1\nP2,R1,2,3\nP2,R2,1,3\nP3,R3,1,2\nP4,R3,2,2\nP5,R2,1,1\n",
        );
        write_file(dir, "scheme.csv", "sds,uda\nFIS/01,PHYS\nBIO/10,BIO\n");
    }

    #[test]
    fn loads_well_formed_corpus() {
        let dir = tempfile::tempdir().unwrap();
        well_formed(dir.path());
        let corpus = load_corpus(&CorpusPaths::from_dir(dir.path())).unwrap();
        assert_eq!(corpus.institutions().len(), 2);
        assert_eq!(corpus.researchers().len(), 3);
        assert_eq!(corpus.publications().len(), 5);
        assert_eq!(corpus.authorships().len(), 6);
        assert_eq!(corpus.window(), YearWindow::new(2001, 2003));
    }

    #[test]
    fn missing_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        well_formed(dir.path());
        std::fs::remove_file(dir.path().join("scheme.csv")).unwrap();
        match load_corpus(&CorpusPaths::from_dir(dir.path())) {
            Err(LoadError::MissingFile(p)) => assert!(p.ends_with("scheme.csv")),
            other => panic!("expected MissingFile, got {other:?}"),
        }
    }

    #[test]
    fn dangling_authorship_fails_strict_load() {
        let dir = tempfile::tempdir().unwrap();
        well_formed(dir.path());
        write_file(
            dir.path(),
            "authorships.csv",
            "pub_id,researcher_id,author_position,total_authors\nP9,R1,1,1\n",
        );
        match load_corpus(&CorpusPaths::from_dir(dir.path())) {
            Err(LoadError::DanglingReference { referenced_key, .. }) => {
                assert_eq!(referenced_key, "P9");
            }
            other => panic!("expected DanglingReference, got {other:?}"),
        }
    }

    #[test]
    fn zero_fte_is_a_schema_violation() {
        let dir = tempfile::tempdir().unwrap();
        well_formed(dir.path());
        write_file(
            dir.path(),
            "researchers.csv",
            "researcher_id,institution_id,sds,uda,academic_rank,fte\nR1,I1,FIS/01,PHYS,full,0\n",
        );
        match load_corpus(&CorpusPaths::from_dir(dir.path())) {
            Err(LoadError::SchemaViolation { column, row, .. }) => {
                assert_eq!(column, "fte");
                assert_eq!(row, 2);
            }
            other => panic!("expected SchemaViolation, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_key_fails_strict_load() {
        let dir = tempfile::tempdir().unwrap();
        well_formed(dir.path());
        write_file(dir.path(), "institutions.csv", "institution_id,name\nI1,A\nI1,B\nI2,C\n");
        match load_corpus(&CorpusPaths::from_dir(dir.path())) {
            Err(LoadError::DuplicateKey { key, .. }) => assert_eq!(key, "I1"),
            other => panic!("expected DuplicateKey, got {other:?}"),
        }
    }

    #[test]
    fn row_order_does_not_matter() {
        let dir_a = tempfile::tempdir().unwrap();
        well_formed(dir_a.path());
        let dir_b = tempfile::tempdir().unwrap();
        well_formed(dir_b.path());
        write_file(
            dir_b.path(),
            "publications.csv",
            "pub_id,year,subject_category,citation_count,doc_type\n\
             P5,2002,PHYS_COND,7,article\n\
             P4,2003,BIO_CELL,2,proceedings\n\
             P3,2001,BIO_CELL,9,article\n\
             P2,2002,PHYS_APPL,0,review\n\
             P1,2001,PHYS_APPL,5,article\n",
        );
        let a = load_corpus(&CorpusPaths::from_dir(dir_a.path())).unwrap();
        let b = load_corpus(&CorpusPaths::from_dir(dir_b.path())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn write_then_load_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        well_formed(dir.path());
        // Explicit window wider than the publication years must survive.
        let corpus = load_corpus_with(
            &CorpusPaths::from_dir(dir.path()),
            &LoadOptions {
                window: Some(YearWindow::new(2000, 2005)),
            },
        )
        .unwrap();
        let out = tempfile::tempdir().unwrap();
        let paths = write_corpus(&corpus, out.path()).unwrap();
        let reloaded = load_corpus(&paths).unwrap();
        assert_eq!(corpus, reloaded);
        assert_eq!(reloaded.window(), YearWindow::new(2000, 2005));
    }
}
