//! Triple lines, fivefold points and the singularity census of a table.

use serde::Serialize;
use thiserror::Error;

use super::subsets::{digits, members, quints, triples, PlaneSet};
use super::table::IncidenceTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DerivedIncidence {
    /// Bitset over triple ranks.
    pub triples: u64,
    /// Bitset over quint ranks.
    pub quints: u64,
}

impl DerivedIncidence {
    pub fn triple_masks(&self) -> Vec<PlaneSet> {
        bit_masks(self.triples, &triples().masks)
    }

    pub fn quint_masks(&self) -> Vec<PlaneSet> {
        bit_masks(self.quints, &quints().masks)
    }
}

pub(crate) fn bit_masks(bits: u64, masks: &[PlaneSet]) -> Vec<PlaneSet> {
    let mut out = Vec::new();
    let mut b = bits;
    while b != 0 {
        out.push(masks[b.trailing_zeros() as usize]);
        b &= b - 1;
    }
    out
}

/// The five quads containing a triple.
pub fn quads_over(triple: PlaneSet) -> impl Iterator<Item = PlaneSet> {
    (0..8)
        .filter(move |i| triple >> i & 1 == 0)
        .map(move |i| triple | 1 << i)
}

/// The five quads inside a quint.
pub fn quads_under(quint: PlaneSet) -> impl Iterator<Item = PlaneSet> {
    (0..8)
        .filter(move |i| quint >> i & 1 == 1)
        .map(move |i| quint & !(1 << i))
}

pub fn derive(table: &IncidenceTable) -> DerivedIncidence {
    let mut d = DerivedIncidence::default();
    for (r, &t) in triples().masks.iter().enumerate() {
        if quads_over(t).all(|q| table.contains(q)) {
            d.triples |= 1 << r;
        }
    }
    for (r, &p) in quints().masks.iter().enumerate() {
        if quads_under(p).all(|q| table.contains(q)) {
            d.quints |= 1 << r;
        }
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointKind {
    P40,
    P41,
    P50,
    P51,
    P52,
}

impl PointKind {
    pub fn key(self) -> &'static str {
        match self {
            PointKind::P40 => "p40",
            PointKind::P41 => "p41",
            PointKind::P50 => "p50",
            PointKind::P51 => "p51",
            PointKind::P52 => "p52",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub l2: u32,
    pub l3: u32,
    pub p3: u32,
    pub p40: u32,
    pub p41: u32,
    pub p50: u32,
    pub p51: u32,
    pub p52: u32,
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<(PlaneSet, PointKind)>,
    #[serde(serialize_with = "ser_sets")]
    pub lines: Vec<PlaneSet>,
}

fn ser_points<S: serde::Serializer>(
    pts: &[(PlaneSet, PointKind)],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for (m, k) in pts {
        seq.serialize_element(&(digits(*m), k.key()))?;
    }
    seq.end()
}

fn ser_sets<S: serde::Serializer>(sets: &[PlaneSet], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(sets.iter().map(|m| digits(*m)))
}

impl Census {
    pub fn points_of(&self, kind: PointKind) -> Vec<PlaneSet> {
        self.points
            .iter()
            .filter(|p| p.1 == kind)
            .map(|p| p.0)
            .collect()
    }

    pub fn empty() -> Census {
        Census {
            l2: 28,
            l3: 0,
            p3: 56,
            p40: 0,
            p41: 0,
            p50: 0,
            p51: 0,
            p52: 0,
            points: vec![],
            lines: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("counting relation `{relation}` fails: {lhs} != {rhs}")]
    RelationViolation {
        relation: &'static str,
        lhs: i64,
        rhs: i64,
    },
}

pub fn census(table: &IncidenceTable, derived: &DerivedIncidence) -> Result<Census, CensusError> {
    let lines = derived.triple_masks();
    let quint_list = derived.quint_masks();
    let triples_in = |m: PlaneSet| lines.iter().filter(|&&t| t & m == t).count();
    let mut points = Vec::new();
    for &p in &quint_list {
        let kind = match triples_in(p) {
            0 => PointKind::P50,
            1 => PointKind::P51,
            _ => PointKind::P52,
        };
        points.push((p, kind));
    }
    for q in table.masks() {
        if quint_list.iter().any(|&p| p & q == q) {
            continue;
        }
        let kind = if triples_in(q) == 0 {
            PointKind::P40
        } else {
            PointKind::P41
        };
        points.push((q, kind));
    }
    points.sort_by_key(|&(m, k)| (k, members(m)));
    let count = |k: PointKind| points.iter().filter(|p| p.1 == k).count() as u32;
    let p3 = triples()
        .masks
        .iter()
        .filter(|&&t| !lines.contains(&t) && !quads_over(t).any(|q| table.contains(q)))
        .count() as u32;
    let l3 = lines.len() as u32;
    let c = Census {
        l2: 28u32.saturating_sub(3 * l3),
        l3,
        p3,
        p40: count(PointKind::P40),
        p41: count(PointKind::P41),
        p50: count(PointKind::P50),
        p51: count(PointKind::P51),
        p52: count(PointKind::P52),
        points,
        lines,
    };
    let lhs = (c.p3 + 4 * c.p40 + 3 * c.p41 + 10 * c.p50 + 9 * c.p51 + 8 * c.p52 + c.l3) as i64;
    if lhs != 56 {
        return Err(CensusError::RelationViolation {
            relation: "p3+4p40+3p41+10p50+9p51+8p52+l3=56",
            lhs,
            rhs: 56,
        });
    }
    let lhs = (c.p41 + 2 * c.p51 + 4 * c.p52) as i64;
    if lhs != 5 * c.l3 as i64 {
        return Err(CensusError::RelationViolation {
            relation: "p41+2p51+4p52=5l3",
            lhs,
            rhs: 5 * c.l3 as i64,
        });
    }
    if 3 * l3 > 28 {
        return Err(CensusError::RelationViolation {
            relation: "l2=28-3l3",
            lhs: 3 * l3 as i64,
            rhs: 28,
        });
    }
    Ok(c)
}

/// Euler characteristic of the resolved double cover.
pub fn euler_characteristic(c: &Census) -> i64 {
    40 + 4 * c.p40 as i64
        + 3 * c.p41 as i64
        + 16 * c.p50 as i64
        + 18 * c.p51 as i64
        + 20 * c.p52 as i64
        + c.l3 as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(items: &[&str]) -> IncidenceTable {
        IncidenceTable::parse_list(items).unwrap()
    }

    fn arr1_original() -> IncidenceTable {
        let mut t = table(&[
            "1235", "1236", "1245", "1248", "1256", "1257", "1258", "1347", "1348", "1356", "1378",
            "1458", "1468", "1478", "2346", "2347", "2356", "2367", "2368", "2458", "2467", "3457",
            "3467", "3478",
        ]);
        // The extra vanishing at A = B.
        t.insert(super::super::subsets::parse_digits("5678").unwrap());
        t
    }

    #[test]
    fn arr1_derived_structure() {
        let t = arr1_original();
        assert_eq!(t.len(), 25);
        let d = derive(&t);
        let ls: Vec<String> = d.triple_masks().into_iter().map(digits).collect();
        assert_eq!(ls, ["125", "148", "236", "347"]);
        let ps: Vec<String> = d.quint_masks().into_iter().map(digits).collect();
        assert_eq!(ps, ["12356", "12458", "13478", "23467"]);
        let c = census(&t, &d).unwrap();
        assert_eq!((c.p40, c.p41, c.p52, c.l3, c.p3), (1, 4, 4, 4, 4));
        assert_eq!(euler_characteristic(&c), 140);
    }

    #[test]
    fn empty_and_full() {
        let d = derive(&IncidenceTable::EMPTY);
        assert_eq!(d, DerivedIncidence::default());
        let c = census(&IncidenceTable::EMPTY, &d).unwrap();
        assert_eq!(c, Census::empty());
        assert_eq!(euler_characteristic(&c), 40);
        let d = derive(&IncidenceTable::full());
        assert_eq!(d.triples.count_ones(), 56);
        assert_eq!(d.quints.count_ones(), 56);
        assert!(census(&IncidenceTable::full(), &d).is_err());
    }

    #[test]
    fn twelve_fourfold_points() {
        let t = table(&[
            "1234", "1256", "1278", "1357", "1368", "1458", "2367", "2457", "2468", "3456", "3478",
            "5678",
        ]);
        let c = census(&t, &derive(&t)).unwrap();
        assert_eq!((c.p40, c.p3, c.l3, c.l2), (12, 8, 0, 28));
        assert_eq!(euler_characteristic(&c), 88);
    }

    #[test]
    fn two_triples_sharing_a_pair_break_the_relations() {
        let mut t = IncidenceTable::EMPTY;
        for tr in ["123", "124"] {
            for q in quads_over(super::super::subsets::parse_digits(tr).unwrap()) {
                t.insert(q);
            }
        }
        let d = derive(&t);
        assert!(matches!(
            census(&t, &d),
            Err(CensusError::RelationViolation { .. })
        ));
    }
}
