//! Regression comparison of computed data against the bundled printed data.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::census::{census, derive, Census};
use crate::combinatorics::subsets::{digits, parse_digits};
use crate::combinatorics::symmetry::model_profile;
use crate::combinatorics::{canonical_form, symmetry_group, IncidenceTable, Perm, PointKind};
use crate::corpus::{self, CorpusEntry, CoverKind, EntryKind, Expected};
use crate::family::{
    default_samples, parse_special_point, special_values, verify_cover_map, verify_parameter_map,
    CoverMap,
};
use crate::fibration::{
    align_with_printed, fiber_model, kummer_partitions, match_fibers, FiberModel, PrintedTable,
};
use crate::FieldDesc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Rigid,
    Families,
    All,
}

impl FromStr for Scope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rigid" => Ok(Scope::Rigid),
            "families" => Ok(Scope::Families),
            "all" => Ok(Scope::All),
            _ => Err(format!("unknown scope `{s}`; use rigid, families or all")),
        }
    }
}

impl Scope {
    pub fn includes(self, kind: EntryKind) -> bool {
        match self {
            Scope::All => true,
            Scope::Rigid => kind == EntryKind::Rigid,
            Scope::Families => kind == EntryKind::Family,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diff {
    pub label: String,
    pub field: String,
    pub expected: String,
    pub computed: String,
}

impl fmt::Display for Diff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: expected {}, computed {}",
            self.label, self.field, self.expected, self.computed
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub scope: Scope,
    pub entries: Vec<String>,
    pub diffs: Vec<Diff>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    /// Samples per parameter self-map claim.
    pub selfmap_samples: usize,
    pub selfmaps: bool,
    pub covers: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            selfmap_samples: 3,
            selfmaps: true,
            covers: true,
        }
    }
}

struct Differ<'a> {
    label: &'a str,
    diffs: Vec<Diff>,
}

impl Differ<'_> {
    fn push(
        &mut self,
        field: impl Into<String>,
        expected: impl fmt::Display,
        computed: impl fmt::Display,
    ) {
        self.diffs.push(Diff {
            label: self.label.to_string(),
            field: field.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
        });
    }

    fn compare<T: PartialEq + fmt::Debug>(&mut self, field: &str, expected: T, computed: T) {
        if expected != computed {
            self.push(field, format!("{expected:?}"), format!("{computed:?}"));
        }
    }
}

fn digit_set<S: AsRef<str>>(items: &[S]) -> BTreeSet<u8> {
    items
        .iter()
        .map(|s| parse_digits(s.as_ref()).unwrap_or(0))
        .collect()
}

fn rendered(set: &BTreeSet<u8>) -> Vec<String> {
    set.iter().map(|m| digits(*m)).collect()
}

fn check_tables(d: &mut Differ, exp: &Expected, table: &IncidenceTable) {
    let canon = canonical_form(table);
    if let Some(m) = &exp.minimal {
        match IncidenceTable::parse_list(m) {
            Some(printed) if printed == canon.minimal => {}
            Some(printed) => d.push("minimal", printed, canon.minimal),
            None => d.push("minimal", format!("{m:?}"), "unparsable printed list"),
        }
    }
    if let Some(p) = &exp.permutation {
        match Perm::parse_cycles(p) {
            Ok(p) if table.relabel(&p) == canon.minimal => {}
            Ok(p) => d.push(
                "permutation",
                p,
                format!("not minimizing; {}", canon.witness),
            ),
            Err(e) => d.push("permutation", p, e),
        }
    }
}

fn check_census(d: &mut Differ, exp: &Expected, table: &IncidenceTable) {
    let c: Census = match census(table, &derive(table)) {
        Ok(c) => c,
        Err(e) => return d.push("relations", "both counting relations", e),
    };
    for kind in [
        PointKind::P40,
        PointKind::P41,
        PointKind::P50,
        PointKind::P51,
        PointKind::P52,
    ] {
        let printed = digit_set(exp.points.get(kind.key()).map_or(&[][..], |v| v));
        let got: BTreeSet<u8> = c.points_of(kind).into_iter().collect();
        d.compare(
            &format!("points.{}", kind.key()),
            rendered(&printed),
            rendered(&got),
        );
    }
    let printed = digit_set(exp.points.get("l3").map_or(&[][..], |v| v));
    let got: BTreeSet<u8> = c.lines.iter().copied().collect();
    d.compare("points.l3", rendered(&printed), rendered(&got));
    if c.l2 as i64 != 28 - 3 * c.l3 as i64 {
        d.push("l2", 28 - 3 * c.l3 as i64, c.l2);
    }
}

fn check_symmetry(d: &mut Differ, exp: &Expected, table: &IncidenceTable) {
    let Some(s) = &exp.symmetry else { return };
    let group = symmetry_group(table);
    let Some(name) = corpus::group_name_from_tex(&s.name) else {
        return d.push("symmetry.name", &s.name, "not in the group dictionary");
    };
    let order = model_profile(name).map_or(0, |p| p.order);
    d.compare("symmetry.order", order, group.order);
    d.compare("symmetry.name", Some(name), group.name);
    for g in s.generators.iter().filter(|g| *g != "1") {
        match Perm::parse_cycles(g) {
            Ok(p) if table.relabel(&p) == *table => {}
            Ok(_) => d.push("symmetry.generators", g, "does not fix the table"),
            Err(e) => d.push("symmetry.generators", g, e),
        }
    }
}

fn check_fibrations(d: &mut Differ, entry: &CorpusEntry, exp: &Expected, table: &IncidenceTable) {
    let arr = &entry.arrangement;
    let parts = match kummer_partitions(arr) {
        Ok(p) => p,
        Err(e) => return d.push("partitions", format!("{:?}", exp.partitions), e),
    };
    let got: Vec<[String; 2]> = parts
        .iter()
        .map(|p| [digits(p.first), digits(p.second)])
        .collect();
    if !exp.partitions.is_empty() || !exp.fibration.is_empty() {
        d.compare("partitions", exp.partitions.clone(), got);
    }
    let mut models: Vec<FiberModel> = Vec::new();
    for p in &parts {
        let name = format!("{}-{}", digits(p.first), digits(p.second));
        match fiber_model(arr, p) {
            Ok(m) => {
                if let Err(e) = match_fibers(&m, table) {
                    d.push(format!("matching {name}"), "agreement", e);
                }
                models.push(m);
            }
            Err(e) => d.push(format!("fibration {name}"), "fiber model", e),
        }
    }
    for (k, f) in exp.fibration.iter().enumerate() {
        let field = match f.quad {
            Some(q) => match FieldDesc::quadratic(q) {
                Ok(fd) => fd,
                Err(e) => {
                    d.push(format!("fibration[{k}]"), format!("quad {q}"), e);
                    continue;
                }
            },
            None => arr.field(),
        };
        let printed = match PrintedTable::parse(&f.columns, &f.first, &f.second, field) {
            Ok(p) => p,
            Err(e) => {
                d.push(format!("fibration[{k}]"), "parsable table", e);
                continue;
            }
        };
        if !models
            .iter()
            .any(|m| align_with_printed(m, &printed).is_some())
        {
            let cols: Vec<String> = f.columns.iter().map(|[n, m]| format!("{n}/{m}")).collect();
            d.push(
                format!("fibration[{k}]"),
                format!(
                    "{} | {} | {}",
                    cols.join(" "),
                    f.first.join(" "),
                    f.second.join(" ")
                ),
                "no partition aligns",
            );
        }
    }
}

fn check_special(d: &mut Differ, entry: &CorpusEntry, exp: &Expected) {
    let fam = &entry.arrangement;
    let computed = match special_values(fam) {
        Ok(s) => s,
        Err(e) => return d.push("special", "special values", e),
    };
    let key = |at: String, field: FieldDesc, verdict: &str| format!("{at} [{field}]: {verdict}");
    let got: BTreeSet<String> = computed
        .values
        .iter()
        .map(|v| key(v.at.to_string(), v.at.field(), v.verdict.key()))
        .collect();
    let mut printed = BTreeSet::new();
    for x in &exp.special {
        let field = match x.quad {
            Some(q) => FieldDesc::quadratic(q).unwrap_or(fam.field()),
            None => fam.field(),
        };
        match parse_special_point(&x.at, field) {
            Ok(p) => {
                printed.insert(key(p.to_string(), p.field(), &x.verdict));
            }
            Err(e) => d.push("special", &x.at, e),
        }
    }
    for missing in printed.difference(&got) {
        d.push("special", missing, "absent");
    }
    for extra in got.difference(&printed) {
        d.push("special", "absent", extra);
    }
    if !computed.unresolved.is_empty() {
        let u: Vec<String> = computed.unresolved.iter().map(|f| f.to_string()).collect();
        d.push("special", "all factors resolved", u.join(", "));
    }
}

fn check_selfmaps(d: &mut Differ, entry: &CorpusEntry, samples: usize) {
    let fam = &entry.arrangement;
    for c in corpus::claims().iter().filter(|c| c.label == entry.label) {
        let field = format!("selfmap ({})", c.text);
        let outcome = default_samples(fam, &c.l1, &c.l2, samples)
            .and_then(|s| verify_parameter_map(fam, &c.l1, &c.l2, &s));
        match outcome {
            Ok(r) if r.equivalent && r.kind == Some(c.kind) => {}
            Ok(r) if r.equivalent => d.push(
                field,
                c.kind,
                r.kind.map_or("undetermined".to_string(), |k| k.to_string()),
            ),
            Ok(_) => d.push(field, c.kind, "not equivalent"),
            Err(e) => d.push(field, c.kind, e),
        }
    }
}

/// Verifies a printed cover map, deducing the relabeling and accepting the printed one or
/// its inverse.
pub fn check_cover(claim: &corpus::CoverClaim, source: &crate::Arrangement) -> Result<(), String> {
    let target = claim.target(source);
    let map: CoverMap = claim.map(source.field()).map_err(|e| e.to_string())?;
    let free = CoverMap { sigma: None, ..map };
    let c = verify_cover_map(source, &target, &free).map_err(|e| e.to_string())?;
    if !c.holds {
        return Err(c.failure.unwrap_or_else(|| "map fails".into()));
    }
    match (claim.sigma, c.sigma) {
        (Some(p), Some(s)) if p != s && p != s.inverse() => {
            Err(format!("relabeling {s} differs from printed {p}"))
        }
        _ => Ok(()),
    }
}

fn check_covers(d: &mut Differ, entry: &CorpusEntry) {
    for claim in corpus::cover_claims()
        .iter()
        .filter(|c| c.label == entry.label)
    {
        let kind = match claim.kind {
            CoverKind::Horizontal => "horizontal",
            CoverKind::Automorphism => "automorphism",
            CoverKind::Galois => "galois",
        };
        if let Err(e) = check_cover(claim, &entry.arrangement) {
            d.push(
                format!("cover.{kind} ({})", claim.coords),
                "verified map",
                e,
            );
        }
    }
}

/// Compares one entry against the given printed data.
pub fn check_entry(entry: &CorpusEntry, expected: &Expected, opts: &CheckOptions) -> Vec<Diff> {
    let mut d = Differ {
        label: entry.label,
        diffs: Vec::new(),
    };
    let table = match entry.arrangement.incidence_table(None) {
        Ok(t) => t,
        Err(e) => {
            d.push("table", "incidence table", e);
            return d.diffs;
        }
    };
    check_tables(&mut d, expected, &table);
    check_census(&mut d, expected, &table);
    check_symmetry(&mut d, expected, &table);
    check_fibrations(&mut d, entry, expected, &table);
    if entry.arrangement.is_parametric() {
        check_special(&mut d, entry, expected);
        if opts.selfmaps {
            check_selfmaps(&mut d, entry, opts.selfmap_samples);
        }
    }
    if opts.covers {
        check_covers(&mut d, entry);
    }
    d.diffs
}

/// Checks every entry in scope in parallel; diffs come out in corpus order.
pub fn corpus_check(scope: Scope, opts: &CheckOptions) -> CheckSummary {
    let selected: Vec<&CorpusEntry> = corpus::entries()
        .iter()
        .filter(|e| scope.includes(e.expected.kind))
        .collect();
    let diffs = selected
        .par_iter()
        .map(|e| check_entry(e, &e.expected, opts))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    CheckSummary {
        scope,
        entries: selected.iter().map(|e| e.label.to_string()).collect(),
        diffs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rigid_scope_has_fourteen_entries() {
        let n = corpus::entries()
            .iter()
            .filter(|e| Scope::Rigid.includes(e.expected.kind))
            .count();
        assert_eq!(n, 14);
        assert_eq!("families".parse::<Scope>(), Ok(Scope::Families));
        assert!("some".parse::<Scope>().is_err());
    }

    #[test]
    fn removed_quad_is_a_single_diff() {
        let e = corpus::get("238").unwrap();
        let mut exp = e.expected.clone();
        exp.minimal.as_mut().unwrap().remove(3);
        let opts = CheckOptions {
            covers: false,
            selfmaps: false,
            ..Default::default()
        };
        assert!(check_entry(e, &e.expected, &opts).is_empty());
        let diffs = check_entry(e, &exp, &opts);
        assert_eq!(diffs.len(), 1, "{diffs:?}");
        assert_eq!(diffs[0].label, "238");
        assert_eq!(diffs[0].field, "minimal");
    }
}
