//! Loading the curated data directory and checking its manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::casefile::{parse_case, FanoCase};
use crate::chartab::{parse_catalog, parse_fusion, parse_table, CharacterTable, Check, FusionMap, SubgroupCatalog, ValidationReport};
use crate::permgrp::{parse_perm_file, PermFile};
use crate::repring::ExpectedRow;

pub const MANIFEST: &str = "MANIFEST";

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error("{path}: duplicate {what} `{label}`")]
    Duplicate { path: PathBuf, what: &'static str, label: String },
}

fn read(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|source| DataError::Io { path: path.to_path_buf(), source })
}

fn parse_err(path: &Path, e: impl std::fmt::Display) -> DataError {
    DataError::Parse { path: path.to_path_buf(), msg: e.to_string() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalRow {
    pub group: String,
    pub structure: String,
    pub index: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseExpectation {
    pub verdict: String,
    pub assumed: usize,
}

/// Everything under the data directory, parsed.
#[derive(Debug, Clone)]
pub struct DataSet {
    pub root: PathBuf,
    pub tables: BTreeMap<String, CharacterTable>,
    /// Keyed by subgroup label.
    pub fusions: BTreeMap<String, FusionMap>,
    pub catalogs: BTreeMap<String, SubgroupCatalog>,
    pub perms: BTreeMap<String, PermFile>,
    pub cases: Vec<FanoCase>,
    pub expected_rows: Vec<ExpectedRow>,
    pub maximal: Vec<MaximalRow>,
    pub case_expectations: BTreeMap<String, CaseExpectation>,
    pub manifest: ValidationReport,
}

fn files_with_ext(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, DataError> {
    let rd = fs::read_dir(dir).map_err(|source| DataError::Io { path: dir.to_path_buf(), source })?;
    let mut out: Vec<PathBuf> = rd
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == ext))
        .collect();
    out.sort();
    Ok(out)
}

fn insert_unique<T>(
    map: &mut BTreeMap<String, T>,
    label: String,
    value: T,
    path: &Path,
    what: &'static str,
) -> Result<(), DataError> {
    if map.contains_key(&label) {
        return Err(DataError::Duplicate { path: path.to_path_buf(), what, label });
    }
    map.insert(label, value);
    Ok(())
}

impl DataSet {
    /// Loads and parses every file. Manifest problems are recorded in
    /// `manifest`, not raised; a missing manifest is an error.
    pub fn load(root: impl AsRef<Path>) -> Result<DataSet, DataError> {
        let root = root.as_ref().to_path_buf();
        let manifest = check_manifest(&root)?;

        let mut tables = BTreeMap::new();
        for p in files_with_ext(&root.join("tables"), "tbl")? {
            let t = parse_table(&read(&p)?).map_err(|e| parse_err(&p, e))?;
            insert_unique(&mut tables, t.group.clone(), t, &p, "table")?;
        }
        let mut fusions = BTreeMap::new();
        for p in files_with_ext(&root.join("fusions"), "fus")? {
            let f = parse_fusion(&read(&p)?).map_err(|e| parse_err(&p, e))?;
            insert_unique(&mut fusions, f.sub.clone(), f, &p, "fusion")?;
        }
        let mut catalogs = BTreeMap::new();
        for p in files_with_ext(&root.join("catalogs"), "cat")? {
            let c = parse_catalog(&read(&p)?).map_err(|e| parse_err(&p, e))?;
            insert_unique(&mut catalogs, c.group.clone(), c, &p, "catalog")?;
        }
        let mut perms = BTreeMap::new();
        for p in files_with_ext(&root.join("perms"), "perm")? {
            let f = parse_perm_file(&read(&p)?).map_err(|e| parse_err(&p, e))?;
            insert_unique(&mut perms, f.name.clone(), f, &p, "permutation realization")?;
        }
        let mut cases = Vec::new();
        for p in files_with_ext(&root.join("cases"), "case")? {
            cases.push(parse_case(&read(&p)?).map_err(|e| parse_err(&p, e))?);
        }
        cases.sort_by(|a, b| a.id.cmp(&b.id));

        let exp = root.join("expected");
        let mut expected_rows = Vec::new();
        for name in ["table1", "table2"] {
            let p = exp.join(format!("{name}.csv"));
            expected_rows.extend(parse_expected_rows(&read(&p)?, name).map_err(|e| parse_err(&p, e))?);
        }
        let p = exp.join("maximal.csv");
        let maximal = parse_maximal(&read(&p)?).map_err(|e| parse_err(&p, e))?;
        let p = exp.join("cases.txt");
        let case_expectations = parse_case_expectations(&read(&p)?).map_err(|e| parse_err(&p, e))?;

        Ok(DataSet { root, tables, fusions, catalogs, perms, cases, expected_rows, maximal, case_expectations, manifest })
    }

    pub fn table(&self, label: &str) -> Option<&CharacterTable> {
        self.tables.get(label)
    }

    pub fn case(&self, id: &str) -> Option<&FanoCase> {
        self.cases.iter().find(|c| c.id == id)
    }

    /// Tables of whole groups (subgroup tables carry an `@` in their label).
    pub fn group_tables(&self) -> impl Iterator<Item = &CharacterTable> {
        self.tables.values().filter(|t| !t.group.contains('@'))
    }

    /// `base` together with its shipped central extensions: `n.base`, and the
    /// linear group for a projective label (`PSL2(7)` → `SL2(7)`).
    pub fn cover_family(&self, base: &str) -> Vec<&CharacterTable> {
        let linear = base.strip_prefix('P');
        self.group_tables()
            .filter(|t| {
                t.group == base
                    || Some(t.group.as_str()) == linear
                    || t.group.split_once('.').is_some_and(|(n, g)| g == base && n.parse::<u32>().is_ok())
            })
            .collect()
    }
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn walk(dir: &Path, base: &Path, out: &mut Vec<String>) -> Result<(), DataError> {
    let rd = fs::read_dir(dir).map_err(|source| DataError::Io { path: dir.to_path_buf(), source })?;
    for e in rd.flatten() {
        let p = e.path();
        if p.is_dir() {
            walk(&p, base, out)?;
        } else if let Ok(rel) = p.strip_prefix(base) {
            let rel = rel.to_string_lossy().replace('\\', "/");
            if rel != MANIFEST {
                out.push(rel);
            }
        }
    }
    Ok(())
}

/// Compares the `sha256  path` lines of the manifest with the files on disk.
pub fn check_manifest(root: &Path) -> Result<ValidationReport, DataError> {
    let text = read(&root.join(MANIFEST))?;
    let mut listed = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (hash, path) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(&root.join(MANIFEST), format!("line {}: expected `sha256  path`", i + 1)))?;
        listed.insert(path.trim().to_string(), hash.to_string());
    }
    let mut present = Vec::new();
    walk(root, root, &mut present)?;
    present.sort();
    let mut checks = Vec::new();
    let unlisted: Vec<&String> = present.iter().filter(|p| !listed.contains_key(*p)).collect();
    checks.push(Check::new(
        "every data file is listed",
        unlisted.is_empty(),
        unlisted.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", "),
    ));
    let mut bad = Vec::new();
    for (path, hash) in &listed {
        match fs::read(root.join(path)) {
            Ok(bytes) if sha256_hex(&bytes) == *hash => {}
            Ok(_) => bad.push(format!("{path} (checksum)")),
            Err(_) => bad.push(format!("{path} (missing)")),
        }
    }
    checks.push(Check::new("listed files match their checksums", bad.is_empty(), bad.join(", ")));
    Ok(ValidationReport { subject: "manifest".into(), checks })
}

/// Renders a manifest for the files currently on disk.
pub fn render_manifest(root: &Path) -> Result<String, DataError> {
    let mut present = Vec::new();
    walk(root, root, &mut present)?;
    present.sort();
    let mut out = String::new();
    for p in present {
        let bytes = fs::read(root.join(&p)).map_err(|source| DataError::Io { path: root.join(&p), source })?;
        out.push_str(&format!("{}  {}\n", sha256_hex(&bytes), p));
    }
    Ok(out)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with("group,"))
}

/// Rows `group,dim,d1,...,d10`; blank fields are zero.
pub fn parse_expected_rows(text: &str, source: &str) -> Result<Vec<ExpectedRow>, String> {
    data_lines(text)
        .map(|(ln, l)| {
            let f: Vec<&str> = l.split(',').map(str::trim).collect();
            if f.len() != 12 {
                return Err(format!("line {ln}: expected 12 fields, found {}", f.len()));
            }
            let n = |s: &str| if s.is_empty() { Ok(0) } else { s.parse::<u64>() };
            let counts = f[2..].iter().map(|s| n(s)).collect::<Result<Vec<_>, _>>().map_err(|e| format!("line {ln}: {e}"))?;
            Ok(ExpectedRow {
                source: source.to_string(),
                group: f[0].to_string(),
                dimension: f[1].parse().map_err(|e| format!("line {ln}: {e}"))?,
                counts,
            })
        })
        .collect()
}

pub fn parse_maximal(text: &str) -> Result<Vec<MaximalRow>, String> {
    data_lines(text)
        .map(|(ln, l)| {
            let f: Vec<&str> = l.split(',').map(str::trim).collect();
            if f.len() != 3 {
                return Err(format!("line {ln}: expected group,structure,index"));
            }
            Ok(MaximalRow {
                group: f[0].to_string(),
                structure: f[1].to_string(),
                index: f[2].parse().map_err(|e| format!("line {ln}: {e}"))?,
            })
        })
        .collect()
}

pub fn parse_case_expectations(text: &str) -> Result<BTreeMap<String, CaseExpectation>, String> {
    data_lines(text)
        .map(|(ln, l)| {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(format!("line {ln}: expected `id verdict assumed`"));
            }
            let assumed = f[2].parse().map_err(|e| format!("line {ln}: {e}"))?;
            Ok((f[0].to_string(), CaseExpectation { verdict: f[1].to_string(), assumed }))
        })
        .collect()
}
