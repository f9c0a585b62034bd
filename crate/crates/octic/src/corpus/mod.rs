//! The bundled arrangements and their printed data.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::expr::parse_expr;
use crate::arrangement::{Arrangement, ArrangementError};
use crate::combinatorics::{canonical_form, IncidenceTable, Perm};
use crate::family::{parse_cover_map, CoverMap};
use crate::{FieldDesc, Form};

include!(concat!(env!("OUT_DIR"), "/corpus_files.rs"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Rigid,
    Family,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedSymmetry {
    /// Group name as printed, e.g. `C_2\oplus C_2`.
    pub name: String,
    #[serde(default)]
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedSpecial {
    /// `inf` or an expression in `s`.
    pub at: String,
    /// Field parameter when `at` involves `s`.
    pub quad: Option<i64>,
    /// `non-CY` or a corpus label.
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedFibration {
    pub quad: Option<i64>,
    /// Base positions as `[numerator, denominator]` expressions.
    pub columns: Vec<[String; 2]>,
    pub first: Vec<String>,
    pub second: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Expected {
    pub label: String,
    pub kind: EntryKind,
    pub h11: Option<i64>,
    pub h12: Option<i64>,
    pub note: Option<String>,
    pub minimal: Option<Vec<String>>,
    pub permutation: Option<String>,
    #[serde(default)]
    pub partitions: Vec<[String; 2]>,
    pub symmetry: Option<ExpectedSymmetry>,
    #[serde(default)]
    pub points: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub special: Vec<ExpectedSpecial>,
    #[serde(default)]
    pub fibration: Vec<ExpectedFibration>,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub label: &'static str,
    pub source: &'static str,
    pub arrangement: Arrangement,
    pub expected: Expected,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus entry {label}: {source}")]
    Arrangement {
        label: String,
        source: ArrangementError,
    },
    #[error("corpus entry {label}: {source}")]
    Toml {
        label: String,
        source: toml::de::Error,
    },
    #[error("self-map line {line}: {message}")]
    Claim { line: usize, message: String },
}

fn load() -> Result<Vec<CorpusEntry>, CorpusError> {
    ENTRIES
        .iter()
        .map(|&(label, source, toml_text)| {
            let arrangement =
                Arrangement::parse(source).map_err(|source| CorpusError::Arrangement {
                    label: label.into(),
                    source,
                })?;
            let expected: Expected =
                toml::from_str(toml_text).map_err(|source| CorpusError::Toml {
                    label: label.into(),
                    source,
                })?;
            Ok(CorpusEntry {
                label,
                source,
                arrangement,
                expected,
            })
        })
        .collect()
}

/// All entries in corpus order: rigid arrangements first, then the families.
pub fn entries() -> &'static [CorpusEntry] {
    static E: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    E.get_or_init(|| load().unwrap_or_else(|e| panic!("bundled corpus is malformed: {e}")))
}

pub fn get(label: &str) -> Option<&'static CorpusEntry> {
    entries().iter().find(|e| e.label == label)
}

/// Maps a printed group name onto the symmetry dictionary's name.
pub fn group_name_from_tex(tex: &str) -> Option<&'static str> {
    let t: String = tex.chars().filter(|c| !c.is_whitespace()).collect();
    Some(match t.as_str() {
        "1,1" | "1" => "1",
        "C_2" => "C2",
        "C_2\\oplusC_2" => "C2^2",
        "C_2\\oplusC_2\\oplusC_2" => "C2^3",
        "C_4" => "C4",
        "C_6" => "C6",
        "C_8" => "C8",
        "S_3" => "S3",
        "D_4" => "D4",
        "S_4" => "S4",
        "D_6" => "D6",
        "D_4\\oplusC_2" => "D4xC2",
        "S_3\\oplusC_2\\oplusC_2" => "S3xC2^2",
        "G_{32,43}" => "Hol(C8)",
        "G_{64,138}" => "UT(4,2)",
        "G_{192,955}" => "Aut(C2xQ8)",
        _ => return None,
    })
}

/// Canonical generic tables of all entries, in corpus order.
pub fn canonical_tables() -> &'static [(&'static str, IncidenceTable)] {
    static T: OnceLock<Vec<(&'static str, IncidenceTable)>> = OnceLock::new();
    T.get_or_init(|| {
        use rayon::prelude::*;
        entries()
            .par_iter()
            .map(|e| {
                let t = e.arrangement.incidence_table(None).expect("generic table");
                (e.label, canonical_form(&t).minimal)
            })
            .collect()
    })
}

/// The corpus label whose canonical table equals `table` (which must be canonical).
pub fn lookup(table: &IncidenceTable) -> Option<&'static str> {
    canonical_tables()
        .iter()
        .find(|(_, t)| t == table)
        .map(|(l, _)| *l)
}

pub use crate::family::MapKind;

/// A printed parameter self-map `(A, B) -> (l1, l2)` of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterMapClaim {
    pub label: String,
    pub text: String,
    pub l1: Form,
    pub l2: Form,
    pub kind: MapKind,
}

pub fn parse_claims(text: &str) -> Result<Vec<ParameterMapClaim>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CorpusError::Claim {
            line: i + 1,
            message,
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [label, map, kind] = parts.as_slice() else {
            return Err(err("expected `<label> <l1>,<l2> <straight|twisted>`".into()));
        };
        let kind = match *kind {
            "straight" => MapKind::Straight,
            "twisted" => MapKind::Twisted,
            k => return Err(err(format!("unknown kind `{k}`"))),
        };
        let Some((a, b)) = map.split_once(',') else {
            return Err(err(format!("map `{map}` needs two components")));
        };
        let form = |s: &str| parse_expr(s, FieldDesc::Rational).map_err(|e| err(e.message));
        let (l1, l2) = (form(a)?, form(b)?);
        if l1.degree() != 1 || l2.degree() != 1 {
            return Err(err(format!("map `{map}` is not linear")));
        }
        out.push(ParameterMapClaim {
            label: label.to_string(),
            text: map.to_string(),
            l1,
            l2,
            kind,
        });
    }
    Ok(out)
}

/// The bundled self-map tables.
pub fn claims() -> &'static [ParameterMapClaim] {
    static C: OnceLock<Vec<ParameterMapClaim>> = OnceLock::new();
    C.get_or_init(|| {
        parse_claims(SELFMAPS).unwrap_or_else(|e| panic!("bundled claims are malformed: {e}"))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverKind {
    Horizontal,
    Automorphism,
    Galois,
}

/// A printed map of double covers from a member to another member, possibly of the conjugate family.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverClaim {
    pub kind: CoverKind,
    pub label: String,
    pub sigma: Option<Perm>,
    pub conjugate: bool,
    /// Parameter substitution for the target; absent when the parameter is kept.
    pub params: Option<(Form, Form)>,
    pub coords: String,
    pub u_scale: String,
}

impl CoverClaim {
    /// The arrangement the map lands on.
    pub fn target(&self, source: &Arrangement) -> Arrangement {
        let t = if self.conjugate {
            source.conjugate()
        } else {
            source.clone()
        };
        match &self.params {
            Some((l1, l2)) => t.substitute_params(l1, l2),
            None => t,
        }
    }

    pub fn map(&self, field: FieldDesc) -> Result<CoverMap, crate::family::FamilyError> {
        parse_cover_map(&self.coords, &self.u_scale, self.sigma, field)
    }
}

pub fn parse_cover_claims(text: &str) -> Result<Vec<CoverClaim>, CorpusError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CorpusError::Claim {
            line: i + 1,
            message,
        };
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        let [kind, label, sigma, target, coords, u] = cols.as_slice() else {
            return Err(err("expected six `|`-separated columns".into()));
        };
        let kind = match *kind {
            "horizontal" => CoverKind::Horizontal,
            "automorphism" => CoverKind::Automorphism,
            "galois" => CoverKind::Galois,
            k => return Err(err(format!("unknown kind `{k}`"))),
        };
        let sigma = match *sigma {
            "-" => None,
            s => Some(Perm::parse_cycles(s).map_err(|e| err(e.to_string()))?),
        };
        let (conjugate, params) = match target.strip_prefix("conj") {
            Some(rest) => (true, rest.strip_prefix(':')),
            None => (false, Some(*target)),
        };
        let params = match params {
            None | Some("A,B") => None,
            Some(p) => {
                let (a, b) = p
                    .split_once(',')
                    .ok_or_else(|| err(format!("target `{p}` needs two components")))?;
                let form = |s: &str| parse_expr(s, FieldDesc::Rational).map_err(|e| err(e.message));
                Some((form(a)?, form(b)?))
            }
        };
        out.push(CoverClaim {
            kind,
            label: label.to_string(),
            sigma,
            conjugate,
            params,
            coords: coords.to_string(),
            u_scale: u.to_string(),
        });
    }
    Ok(out)
}

/// The bundled explicit maps.
pub fn cover_claims() -> &'static [CoverClaim] {
    static C: OnceLock<Vec<CoverClaim>> = OnceLock::new();
    C.get_or_init(|| {
        parse_cover_claims(COVERMAPS)
            .unwrap_or_else(|e| panic!("bundled cover maps are malformed: {e}"))
    })
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Relations {
    pub birational: Vec<[String; 2]>,
    pub correspondences: Vec<[String; 2]>,
}

/// Birational pairs and correspondences, kept as metadata.
pub fn relations() -> Relations {
    toml::from_str(RELATIONS).expect("bundled relations are well formed")
}
