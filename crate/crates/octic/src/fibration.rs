//! Pairs of opposite fourfold points and the singular fibers of the two elliptic surfaces.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::linalg::{cross3, dot, is_zero_row, proportional, rank_by_minors, Row};
use crate::algebra::{BinForm, Field, FieldDesc, Ring, Scalar};
use crate::arrangement::expr::parse_expr;
use crate::arrangement::{Arrangement, ArrangementError};
use crate::combinatorics::subsets::{digits, from_indices, members, quads, PlaneSet};
use crate::combinatorics::IncidenceTable;
use crate::Form;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FibrationError {
    #[error("{0} lines project to one base point")]
    TooManyLines(usize),
    #[error("lines {} and {} disagree: positions equal = {geometric}, quadruple incident = {combinatorial}", digits(*line_a), digits(*line_b))]
    MatchingDisagreement {
        line_a: PlaneSet,
        line_b: PlaneSet,
        geometric: bool,
        combinatorial: bool,
    },
    #[error("anchor fibers are not pairwise distinct")]
    CoincidentAnchors,
    #[error("malformed fibration table: {0}")]
    PrintedTable(String),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kodaira {
    I2,
    I4,
    I0Star,
    I2Star,
}

impl Kodaira {
    pub fn from_line_count(n: usize) -> Option<Kodaira> {
        match n {
            1 => Some(Kodaira::I2),
            2 => Some(Kodaira::I4),
            3 => Some(Kodaira::I0Star),
            4 => Some(Kodaira::I2Star),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Option<Kodaira> {
        match s {
            "I2" => Some(Kodaira::I2),
            "I4" => Some(Kodaira::I4),
            "I0*" => Some(Kodaira::I0Star),
            "I2*" => Some(Kodaira::I2Star),
            _ => None,
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kodaira::I2 => "I2",
            Kodaira::I4 => "I4",
            Kodaira::I0Star => "I0*",
            Kodaira::I2Star => "I2*",
        })
    }
}

/// A point `(num : den)` of the base line, possibly depending on the parameters.
#[derive(Debug, Clone)]
pub struct Position {
    pub num: Form,
    pub den: Form,
}

impl Position {
    pub fn new(num: Form, den: Form) -> Position {
        Position { num, den }
    }

    /// `num * o.den - o.num * den`; zero exactly when the positions agree.
    pub fn bracket(&self, o: &Position) -> Form {
        self.num.mul_form(&o.den) - o.num.mul_form(&self.den)
    }

    pub fn same(&self, o: &Position) -> bool {
        self.bracket(o).is_zero()
    }

    /// Removes the common factor of numerator and denominator.
    pub fn reduced(&self) -> Position {
        let g = self.num.gcd(&self.den);
        let num = self.num.div_exact(&g).expect("gcd divides");
        let den = self.den.div_exact(&g).expect("gcd divides");
        // Prefer a monic denominator for display.
        let lead = den
            .coeffs()
            .iter()
            .chain(num.coeffs())
            .find(|c| !c.is_zero())
            .cloned();
        match lead.and_then(|c| c.inv()) {
            Some(i) => Position {
                num: num.scale(&i),
                den: den.scale(&i),
            },
            None => Position { num, den },
        }
    }

    pub fn eval(&self, at: &crate::ParamPoint) -> Position {
        let num = BinForm::constant(self.num.eval(at.a(), at.b()));
        let den = BinForm::constant(self.den.eval(at.a(), at.b()));
        Position { num, den }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        if r.den.is_zero() {
            return write!(f, "inf");
        }
        if r.den.degree() == 0 && r.den.coeffs()[0] == r.den.template().one_like() {
            return write!(f, "{}", r.num);
        }
        let wrap = |x: &Form| {
            let s = x.to_string();
            if s.trim_start_matches('-').contains(['+', '-', '*']) {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&r.num), wrap(&r.den))
    }
}

impl Serialize for Position {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Cross-ratio `[13][24] / [14][23]` as a pair of forms.
pub fn cross_ratio(p: [&Position; 4]) -> Position {
    Position {
        num: p[0].bracket(p[2]).mul_form(&p[1].bracket(p[3])),
        den: p[0].bracket(p[3]).mul_form(&p[1].bracket(p[2])),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KummerPartition {
    #[serde(serialize_with = "ser_set")]
    pub first: PlaneSet,
    #[serde(serialize_with = "ser_set")]
    pub second: PlaneSet,
    #[serde(skip)]
    pub point_a: Row<Form>,
    #[serde(skip)]
    pub point_b: Row<Form>,
}

fn ser_set<S: serde::Serializer>(m: &PlaneSet, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&digits(*m))
}

fn ser_sets<S: serde::Serializer>(ms: &[PlaneSet], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ms.iter().map(|m| digits(*m)))
}

/// Common point of the planes in `quad`, from three independent rows.
fn concurrency_point(rows: &[Row<Form>], quad: PlaneSet) -> Option<Row<Form>> {
    let ix = members(quad);
    ix.iter().copied().combinations(3).find_map(|c| {
        let p = cross3(&rows[c[0]], &rows[c[1]], &rows[c[2]]);
        (!is_zero_row(&p)).then_some(p)
    })
}

/// All splittings into two concurrent quadruples of rank three.
pub fn kummer_partitions(arr: &Arrangement) -> Result<Vec<KummerPartition>, FibrationError> {
    let table = arr.incidence_table(None)?;
    let rows = arr.rows();
    let mut out = Vec::new();
    for &q in &quads().masks {
        if q & 1 == 0 {
            continue;
        }
        let c = !q;
        if !table.contains(q) || !table.contains(c) {
            continue;
        }
        let sel = |m: PlaneSet| {
            members(m)
                .into_iter()
                .map(|i| rows[i].clone())
                .collect::<Vec<_>>()
        };
        if rank_by_minors(&sel(q)) != 3 || rank_by_minors(&sel(c)) != 3 {
            continue;
        }
        let (Some(point_a), Some(point_b)) =
            (concurrency_point(&rows, q), concurrency_point(&rows, c))
        else {
            continue;
        };
        if proportional(&point_a, &point_b) {
            continue;
        }
        out.push(KummerPartition {
            first: q,
            second: c,
            point_a,
            point_b,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Fiber {
    pub position: Position,
    /// Lines `l_ij`, each given by its pair of planes.
    #[serde(serialize_with = "ser_sets")]
    pub lines: Vec<PlaneSet>,
    pub kodaira: Kodaira,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberModel {
    pub partition: KummerPartition,
    pub sides: [Vec<Fiber>; 2],
    pub conjugate_pairs: [Vec<(String, String)>; 2],
    /// Lines through the opposite point, left out of the fibers.
    #[serde(serialize_with = "ser_sets")]
    pub degenerate_lines: Vec<PlaneSet>,
}

fn unit_row(k: usize, template: &Form) -> Row<Form> {
    std::array::from_fn(|j| {
        let one = template.template().one_like();
        if j == k {
            BinForm::constant(one)
        } else {
            BinForm::zero(&one)
        }
    })
}

/// Two independent linear forms vanishing at both points.
fn pencil_basis(a: &Row<Form>, b: &Row<Form>) -> [Row<Form>; 2] {
    let cands: Vec<Row<Form>> = (0..4)
        .map(|k| cross3(a, b, &unit_row(k, &a[0])))
        .filter(|g| !is_zero_row(g))
        .collect();
    let g0 = cands[0].clone();
    let g1 = cands
        .iter()
        .find(|g| !proportional(g, &g0))
        .expect("two points span a line")
        .clone();
    [g0, g1]
}

pub fn fiber_model(
    arr: &Arrangement,
    part: &KummerPartition,
) -> Result<FiberModel, FibrationError> {
    let rows = arr.rows();
    let [g0, g1] = pencil_basis(&part.point_a, &part.point_b);
    let mut sides: [Vec<Fiber>; 2] = [Vec::new(), Vec::new()];
    let mut conjugate_pairs: [Vec<(String, String)>; 2] = [Vec::new(), Vec::new()];
    let mut degenerate_lines = Vec::new();
    for (s, (quad, apex)) in [(part.first, &part.point_a), (part.second, &part.point_b)]
        .into_iter()
        .enumerate()
    {
        let ix = members(quad);
        for pair in ix.iter().copied().combinations(2) {
            let line = from_indices(&pair);
            let rest = quad & !line;
            if line < rest {
                conjugate_pairs[s].push((digits(line), digits(rest)));
            }
            let p = (0..4)
                .map(|k| cross3(&rows[pair[0]], &rows[pair[1]], &unit_row(k, &rows[0][0])))
                .find(|p| !is_zero_row(p) && !proportional(p, apex));
            let pos = p.map(|p| Position::new(dot(&g0, &p), dot(&g1, &p)));
            let Some(pos) = pos.filter(|q| !(q.num.is_zero() && q.den.is_zero())) else {
                degenerate_lines.push(line);
                continue;
            };
            match sides[s].iter_mut().find(|f| f.position.same(&pos)) {
                Some(f) => f.lines.push(line),
                None => sides[s].push(Fiber {
                    position: pos,
                    lines: vec![line],
                    kodaira: Kodaira::I2,
                }),
            }
        }
        for f in &mut sides[s] {
            f.kodaira = Kodaira::from_line_count(f.lines.len())
                .ok_or(FibrationError::TooManyLines(f.lines.len()))?;
        }
    }
    Ok(FiberModel {
        partition: part.clone(),
        sides,
        conjugate_pairs,
        degenerate_lines,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberMatching {
    /// Fiber indices `(first side, second side)` over a common base point.
    pub matched: Vec<(usize, usize)>,
    pub unmatched_first: Vec<usize>,
    pub unmatched_second: Vec<usize>,
}

/// Matches fibers by position and checks this against the incidence table line by line.
pub fn match_fibers(
    model: &FiberModel,
    table: &IncidenceTable,
) -> Result<FiberMatching, FibrationError> {
    for f in &model.sides[0] {
        for g in &model.sides[1] {
            let geometric = f.position.same(&g.position);
            for &l in &f.lines {
                for &m in &g.lines {
                    let combinatorial = table.contains(l | m);
                    if geometric != combinatorial {
                        return Err(FibrationError::MatchingDisagreement {
                            line_a: l,
                            line_b: m,
                            geometric,
                            combinatorial,
                        });
                    }
                }
            }
        }
    }
    let mut matched = Vec::new();
    for (i, f) in model.sides[0].iter().enumerate() {
        for (j, g) in model.sides[1].iter().enumerate() {
            if f.position.same(&g.position) {
                matched.push((i, j));
            }
        }
    }
    let unmatched_first = (0..model.sides[0].len())
        .filter(|i| !matched.iter().any(|m| m.0 == *i))
        .collect();
    let unmatched_second = (0..model.sides[1].len())
        .filter(|j| !matched.iter().any(|m| m.1 == *j))
        .collect();
    Ok(FiberMatching {
        matched,
        unmatched_first,
        unmatched_second,
    })
}

/// The Moebius map sending the anchors to infinity, 0 and 1, applied to `z`.
pub fn normalize(z: &Position, anchors: [&Position; 3]) -> Position {
    let [p1, p2, p3] = anchors;
    Position {
        num: z.bracket(p2).mul_form(&p3.bracket(p1)),
        den: z.bracket(p1).mul_form(&p3.bracket(p2)),
    }
}

/// Applies [`normalize`] to every fiber; anchors are `(side, fiber index)`.
pub fn normalize_positions(
    model: &FiberModel,
    anchors: [(usize, usize); 3],
) -> Result<FiberModel, FibrationError> {
    let a: Vec<&Position> = anchors
        .iter()
        .map(|&(s, i)| &model.sides[s][i].position)
        .collect();
    if a[0].same(a[1]) || a[0].same(a[2]) || a[1].same(a[2]) {
        return Err(FibrationError::CoincidentAnchors);
    }
    let mut out = model.clone();
    for side in &mut out.sides {
        for f in side.iter_mut() {
            f.position = normalize(&f.position, [a[0], a[1], a[2]]).reduced();
        }
    }
    Ok(out)
}

/// The distinct base points of a model with the fiber type over each, per side.
pub fn base_points(model: &FiberModel) -> Vec<(Position, [Option<Kodaira>; 2])> {
    let mut out: Vec<(Position, [Option<Kodaira>; 2])> = Vec::new();
    for (s, side) in model.sides.iter().enumerate() {
        for f in side {
            match out.iter_mut().find(|(p, _)| p.same(&f.position)) {
                Some((_, t)) => t[s] = Some(f.kodaira),
                None => {
                    let mut t = [None, None];
                    t[s] = Some(f.kodaira);
                    out.push((f.position.clone(), t));
                }
            }
        }
    }
    out
}

/// A printed fibration table: base positions with the fiber type on each side.
#[derive(Debug, Clone)]
pub struct PrintedTable {
    pub columns: Vec<Position>,
    pub types: [Vec<Option<Kodaira>>; 2],
}

impl PrintedTable {
    /// Builds a table from `[num, den]` expressions and type rows where `-` means no fiber.
    pub fn parse<S: AsRef<str>>(
        columns: &[[S; 2]],
        first: &[S],
        second: &[S],
        field: FieldDesc,
    ) -> Result<PrintedTable, FibrationError> {
        let bad = |m: String| FibrationError::PrintedTable(m);
        if first.len() != columns.len() || second.len() != columns.len() {
            return Err(bad(format!(
                "{} columns but rows of length {} and {}",
                columns.len(),
                first.len(),
                second.len()
            )));
        }
        let expr = |s: &S| {
            parse_expr(s.as_ref(), field)
                .map_err(|e| bad(format!("`{}`: {}", s.as_ref(), e.message)))
        };
        let cols = columns
            .iter()
            .map(|[n, d]| {
                let (num, den) = (expr(n)?, expr(d)?);
                if num.degree() != den.degree() {
                    return Err(bad(format!(
                        "`{}` and `{}` differ in degree",
                        n.as_ref(),
                        d.as_ref()
                    )));
                }
                Ok(Position::new(num, den))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let row = |r: &[S]| {
            r.iter()
                .map(|t| match t.as_ref() {
                    "-" => Ok(None),
                    x => Kodaira::parse(x)
                        .map(Some)
                        .ok_or_else(|| bad(format!("unknown fiber type `{x}`"))),
                })
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(PrintedTable {
            columns: cols,
            types: [row(first)?, row(second)?],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableAlignment {
    pub swapped: bool,
    /// For each printed column, the index into [`base_points`].
    pub columns: Vec<usize>,
}

/// Looks for a column assignment agreeing in fiber types and in cross-ratios against the first three columns.
pub fn align_with_printed(model: &FiberModel, printed: &PrintedTable) -> Option<TableAlignment> {
    let pts = base_points(model);
    let n = printed.columns.len();
    if pts.len() != n {
        return None;
    }
    for swapped in [false, true] {
        let ty = |i: usize, s: usize| pts[i].1[if swapped { 1 - s } else { s }];
        for perm in (0..n).permutations(n) {
            let types_ok = (0..n).all(|c| (0..2).all(|s| ty(perm[c], s) == printed.types[s][c]));
            if !types_ok {
                continue;
            }
            let cr_ok = (3..n).all(|k| {
                let ours = cross_ratio([
                    &pts[perm[0]].0,
                    &pts[perm[1]].0,
                    &pts[perm[2]].0,
                    &pts[perm[k]].0,
                ]);
                let theirs = cross_ratio([
                    &printed.columns[0],
                    &printed.columns[1],
                    &printed.columns[2],
                    &printed.columns[k],
                ]);
                ours.same(&theirs)
            });
            if cr_ok {
                return Some(TableAlignment {
                    swapped,
                    columns: perm,
                });
            }
        }
    }
    None
}

/// Multiset of fiber types on one side, sorted.
pub fn type_sequence(side: &[Fiber]) -> Vec<Kodaira> {
    let mut v: Vec<Kodaira> = side.iter().map(|f| f.kodaira).collect();
    v.sort();
    v
}

/// Scalars convenience for specialized models.
pub fn position_from_scalars(num: Scalar, den: Scalar) -> Position {
    Position::new(BinForm::constant(num), BinForm::constant(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::subsets::parse_digits;

    fn arr(text: &str) -> Arrangement {
        Arrangement::parse(text).unwrap()
    }

    const ARR2: &str =
        "field rational\nparams\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\nplane 0 0 0 1\n\
plane 1 1 0 0\nplane 0 1 1 0\nplane 0 0 1 1\nplane A 0 0 B\n";

    #[test]
    fn family_partitions_and_matching() {
        let a = arr(ARR2);
        let parts = kummer_partitions(&a).unwrap();
        let names: Vec<String> = parts
            .iter()
            .map(|p| format!("{}-{}", digits(p.first), digits(p.second)))
            .collect();
        assert_eq!(names, ["1256-3478", "1258-3467", "1458-2367", "1478-2356"]);
        let t = a.incidence_table(None).unwrap();
        for p in &parts {
            let m = fiber_model(&a, p).unwrap();
            for side in &m.sides {
                assert_eq!(side.iter().map(|f| f.lines.len()).sum::<usize>(), 6);
            }
            assert_eq!(m.conjugate_pairs[0].len(), 3);
            match_fibers(&m, &t).unwrap();
        }
    }

    #[test]
    fn printed_columns_align() {
        let a = arr(ARR2);
        let parts = kummer_partitions(&a).unwrap();
        let one = Scalar::from_int(1, crate::FieldDesc::Rational);
        let c = |n: i64, d: i64| {
            position_from_scalars(
                Scalar::from_int(n, one.field()),
                Scalar::from_int(d, one.field()),
            )
        };
        let ab = Position::new(BinForm::var_a(&one), BinForm::var_b(&one));
        let printed = PrintedTable {
            columns: vec![c(1, 0), c(0, 1), c(1, 1), ab],
            types: [
                vec![
                    Some(Kodaira::I2Star),
                    Some(Kodaira::I2),
                    Some(Kodaira::I2),
                    None,
                ],
                vec![
                    Some(Kodaira::I2),
                    Some(Kodaira::I2Star),
                    None,
                    Some(Kodaira::I2),
                ],
            ],
        };
        assert!(parts
            .iter()
            .any(|p| align_with_printed(&fiber_model(&a, p).unwrap(), &printed).is_some()));
        // A wrong fourth value is rejected.
        let mut wrong = printed.clone();
        wrong.columns[3] = c(2, 1);
        assert!(parts
            .iter()
            .all(|p| align_with_printed(&fiber_model(&a, p).unwrap(), &wrong).is_none()));
    }

    #[test]
    fn anchoring() {
        let f = crate::FieldDesc::Rational;
        let c =
            |n: i64, d: i64| position_from_scalars(Scalar::from_int(n, f), Scalar::from_int(d, f));
        let (p1, p2, p3) = (c(1, 0), c(0, 1), c(1, 1));
        assert!(normalize(&c(-1, 1), [&p1, &p2, &p3]).same(&c(-1, 1)));
        assert!(normalize(&c(3, 1), [&c(3, 1), &p2, &p3]).same(&p1));
        let cr = cross_ratio([&p1, &p2, &p3, &c(5, 2)]);
        let moved = [c(2, 1), c(7, 3), c(1, 5), c(4, 1)];
        let m = |z: &Position| normalize(z, [&moved[0], &moved[1], &moved[2]]);
        let cr2 = cross_ratio([&m(&p1), &m(&p2), &m(&p3), &m(&c(5, 2))]);
        assert!(cr.same(&cr2));
        assert!(normalize_positions(
            &fiber_model(&arr(ARR2), &kummer_partitions(&arr(ARR2)).unwrap()[0]).unwrap(),
            [(0, 0), (0, 0), (0, 1)]
        )
        .is_err());
    }

    #[test]
    fn generic_arrangement_has_no_partitions() {
        let text = "field rational\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\nplane 0 0 0 1\n\
plane 1 1 1 1\nplane 1 2 3 5\nplane 2 7 1 3\nplane 5 1 4 9\n";
        let a = arr(text);
        assert!(a.incidence_table(None).unwrap().is_empty());
        assert!(kummer_partitions(&a).unwrap().is_empty());
        let _ = parse_digits("12");
    }
}
