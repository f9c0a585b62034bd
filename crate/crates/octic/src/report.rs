//! Per-arrangement reports laid out like the printed data blocks.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::expr::parse_expr;
use crate::arrangement::{Arrangement, ArrangementError, ValidityVerdict};
use crate::combinatorics::census::{census, derive, euler_characteristic, Census, CensusError};
use crate::combinatorics::subsets::digits;
use crate::combinatorics::{canonical_form, symmetry_group, IncidenceTable, Perm, PointKind};
use crate::corpus::{self, MapKind};
use crate::family::{
    default_samples, special_values, verify_parameter_map, FamilyError, SpecialValues,
};
use crate::fibration::{fiber_model, kummer_partitions, match_fibers, FiberModel, FibrationError};
use crate::{FieldDesc, ParamPoint, Scalar};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Census(#[from] CensusError),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("cannot parse parameter point `{0}`; expected `a:b`")]
    Point(String),
    #[error("not an octic arrangement: {0}")]
    NotOctic(String),
    #[error("`--at` needs a family, but the arrangement has no parameters")]
    NotParametric,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub name: Option<&'static str>,
    pub order: usize,
    pub generators: Vec<Perm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FibrationReport {
    pub model: FiberModel,
    /// Fiber index pairs over common base points; `None` if the matchings disagree.
    pub matched: Option<Vec<(usize, usize)>>,
    pub matching_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfMapReport {
    pub map: String,
    pub claimed: MapKind,
    pub equivalent: bool,
    pub kind: Option<MapKind>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub label: Option<String>,
    pub field: FieldDesc,
    pub parametric: bool,
    pub at: Option<String>,
    /// Absent for a family, whose members are judged one at a time.
    pub validity: Option<ValidityVerdict>,
    pub table: IncidenceTable,
    pub minimal: IncidenceTable,
    pub witness: Perm,
    pub corpus_match: Option<&'static str>,
    pub census: Census,
    pub euler: i64,
    pub symmetry: SymmetryReport,
    pub fibrations: Vec<FibrationReport>,
    pub special: Option<SpecialValues>,
    pub selfmaps: Vec<SelfMapReport>,
    pub h11: Option<i64>,
    pub h12: Option<i64>,
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    /// Specialize a family at this point first.
    pub at: Option<ParamPoint>,
    /// Samples per bundled self-map claim; 0 skips them.
    pub selfmap_samples: usize,
}

/// Parses `a:b` with constant expressions on both sides, or `inf`.
pub fn parse_param_point(text: &str, field: FieldDesc) -> Result<ParamPoint, ReportError> {
    let err = || ReportError::Point(text.to_string());
    if text.trim() == "inf" {
        return Ok(ParamPoint::infinity(field));
    }
    let (a, b) = text.split_once(':').ok_or_else(err)?;
    let constant = |s: &str| -> Result<Scalar, ReportError> {
        let f = parse_expr(s, field).map_err(|_| err())?;
        if f.degree() != 0 {
            return Err(err());
        }
        Ok(f.coeffs()[0].clone())
    };
    ParamPoint::new(constant(a)?, constant(b)?).map_err(|_| err())
}

fn fibration_report(
    arr: &Arrangement,
    table: &IncidenceTable,
) -> Result<Vec<FibrationReport>, ReportError> {
    kummer_partitions(arr)?
        .iter()
        .map(|p| {
            let model = fiber_model(arr, p)?;
            let (matched, matching_error) = match match_fibers(&model, table) {
                Ok(m) => (Some(m.matched), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Ok(FibrationReport {
                model,
                matched,
                matching_error,
            })
        })
        .collect()
}

fn selfmap_reports(label: &str, fam: &Arrangement, samples: usize) -> Vec<SelfMapReport> {
    corpus::claims()
        .par_iter()
        .filter(|c| c.label == label)
        .map(|c| {
            let outcome = default_samples(fam, &c.l1, &c.l2, samples)
                .and_then(|s| verify_parameter_map(fam, &c.l1, &c.l2, &s));
            let (equivalent, kind) = match outcome {
                Ok(r) => (r.equivalent, r.kind),
                Err(_) => (false, None),
            };
            SelfMapReport {
                map: c.text.clone(),
                claimed: c.kind,
                equivalent,
                kind,
            }
        })
        .collect()
}

/// Runs every analysis on an arrangement; `label` links it to bundled claims and metadata.
pub fn report(
    arr: &Arrangement,
    label: Option<&str>,
    opts: &ReportOptions,
) -> Result<Report, ReportError> {
    let at_text = opts.at.as_ref().map(|p| p.to_string());
    let specialized;
    let arr = match &opts.at {
        Some(p) if arr.is_parametric() => {
            specialized = arr.specialize(p)?;
            &specialized
        }
        Some(_) => return Err(ReportError::NotParametric),
        None => arr,
    };
    let family = arr.is_parametric();
    let validity = if family {
        None
    } else {
        Some(arr.validate(None)?)
    };
    if let Some(v) = validity.as_ref().filter(|v| !v.valid) {
        let v: Vec<String> = v.violations.iter().map(|x| x.to_string()).collect();
        return Err(ReportError::NotOctic(v.join("; ")));
    }
    let table = arr.incidence_table(None)?;
    let canon = canonical_form(&table);
    let derived = derive(&table);
    let census = census(&table, &derived)?;
    let group = symmetry_group(&table);
    let special = if family {
        Some(special_values(arr)?)
    } else {
        None
    };
    let selfmaps = match label {
        Some(l) if family && opts.selfmap_samples > 0 => {
            selfmap_reports(l, arr, opts.selfmap_samples)
        }
        _ => Vec::new(),
    };
    let meta = label.filter(|_| opts.at.is_none()).and_then(corpus::get);
    Ok(Report {
        label: label.map(str::to_string),
        field: arr.field(),
        parametric: family,
        at: at_text,
        validity,
        table,
        minimal: canon.minimal,
        witness: canon.witness,
        corpus_match: corpus::lookup(&canon.minimal),
        euler: euler_characteristic(&census),
        census,
        symmetry: SymmetryReport {
            name: group.name,
            order: group.order,
            generators: group.generators,
        },
        fibrations: fibration_report(arr, &table)?,
        special,
        selfmaps,
        h11: meta.and_then(|e| e.expected.h11),
        h12: meta.and_then(|e| e.expected.h12),
    })
}

fn sets(masks: &[u8]) -> String {
    masks
        .iter()
        .map(|m| digits(*m))
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut head = match &self.label {
            Some(l) => format!("Arr {l}"),
            None => "Arrangement".to_string(),
        };
        if let Some(at) = &self.at {
            write!(head, " at {at}")?;
        }
        write!(head, " over {}", self.field)?;
        if self.parametric {
            head += ", one-parameter family";
        }
        writeln!(f, "{head}")?;
        if let (Some(h11), Some(h12)) = (self.h11, self.h12) {
            writeln!(f, "h11 = {h11}, h12 = {h12}")?;
        }
        writeln!(f, "Minimal incidences: {}", self.minimal)?;
        writeln!(f, "Minimizing permutation: {}", self.witness)?;
        if let Some(m) = self.corpus_match {
            writeln!(f, "Corpus class: Arr {m}")?;
        }
        let name = self.symmetry.name.unwrap_or("unnamed");
        let gens: Vec<String> = self
            .symmetry
            .generators
            .iter()
            .map(|g| g.to_string())
            .collect();
        writeln!(f, "Symmetries: {name}, order {}", self.symmetry.order)?;
        if !gens.is_empty() {
            writeln!(f, "  generators: {}", gens.join(", "))?;
        }
        writeln!(f, "Singular points:")?;
        for kind in [
            PointKind::P40,
            PointKind::P41,
            PointKind::P50,
            PointKind::P51,
            PointKind::P52,
        ] {
            let pts = self.census.points_of(kind);
            if !pts.is_empty() {
                writeln!(f, "  {}: {}", kind.key(), sets(&pts))?;
            }
        }
        if !self.census.lines.is_empty() {
            writeln!(f, "  l3: {}", sets(&self.census.lines))?;
        }
        let c = &self.census;
        writeln!(
            f,
            "Census: l2={} l3={} p3={} p40={} p41={} p50={} p51={} p52={}",
            c.l2, c.l3, c.p3, c.p40, c.p41, c.p50, c.p51, c.p52
        )?;
        writeln!(f, "Euler characteristic: {}", self.euler)?;
        if let Some(s) = &self.special {
            writeln!(f, "Special values:")?;
            for v in &s.values {
                match &v.min_poly {
                    Some(p) => writeln!(f, "  {} (root of {p}): {}", v.at, v.verdict)?,
                    None => writeln!(f, "  {}: {}", v.at, v.verdict)?,
                }
            }
            for u in &s.unresolved {
                writeln!(f, "  unresolved factor: {u}")?;
            }
        }
        if !self.fibrations.is_empty() {
            writeln!(f, "Elliptic fibrations:")?;
        }
        for fib in &self.fibrations {
            let p = &fib.model.partition;
            writeln!(f, "  {}-{}", digits(p.first), digits(p.second))?;
            for (side, fibers) in fib.model.sides.iter().enumerate() {
                let cells: Vec<String> = fibers
                    .iter()
                    .map(|x| format!("{} at {}", x.kodaira, x.position))
                    .collect();
                writeln!(f, "    side {}: {}", side + 1, cells.join(", "))?;
            }
            if !fib.model.degenerate_lines.is_empty() {
                writeln!(
                    f,
                    "    degenerate lines: {}",
                    sets(&fib.model.degenerate_lines)
                )?;
            }
            if let Some(e) = &fib.matching_error {
                writeln!(f, "    matching: {e}")?;
            }
        }
        if !self.selfmaps.is_empty() {
            writeln!(f, "Parameter self-maps:")?;
            for m in &self.selfmaps {
                let got = match (m.equivalent, m.kind) {
                    (true, Some(k)) => k.to_string(),
                    _ => "not equivalent".to_string(),
                };
                writeln!(f, "  ({}): claimed {}, found {got}", m.map, m.claimed)?;
            }
        }
        Ok(())
    }
}
