//! Eight planes with coefficients that are binary forms in the family parameters.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::expr::parse_expr;
use crate::algebra::linalg::{det4, is_zero_row, rank, Mat4, Row};
use crate::algebra::{AlgebraError, BinForm, FieldDesc, ParamPoint, Ring, Scalar};
use crate::combinatorics::subsets::{digits, from_indices, quads, PlaneSet};
use crate::combinatorics::{IncidenceTable, Perm};
use crate::Form;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("plane {0} mixes parameter degrees")]
    MixedRowDegree(usize),
    #[error("plane {0} has a coefficient of parameter degree above one")]
    DegreeTooHigh(usize),
    #[error("plane {0} is identically zero")]
    DegeneratePlane(usize),
    #[error("expected 8 planes, found {0}")]
    PlaneCount(usize),
    #[error("the arrangement is parametric; a parameter value is required")]
    MissingParameter,
}

/// A plane `c1 x + c2 y + c3 z + c4 t`; all coefficients share a parameter degree.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    coeffs: [Form; 4],
    param_degree: usize,
}

impl LinearForm {
    /// Checks homogeneity; `index` is the 1-based plane number used in errors.
    pub fn new(coeffs: [Form; 4], index: usize) -> Result<Self, ArrangementError> {
        let nonzero: Vec<&Form> = coeffs.iter().filter(|c| !c.is_zero()).collect();
        let Some(first) = nonzero.first() else {
            return Err(ArrangementError::DegeneratePlane(index));
        };
        let d = first.degree();
        if nonzero.iter().any(|c| c.degree() != d) {
            return Err(ArrangementError::MixedRowDegree(index));
        }
        if d > 1 {
            return Err(ArrangementError::DegreeTooHigh(index));
        }
        Ok(LinearForm {
            coeffs,
            param_degree: d,
        })
    }

    pub fn coeffs(&self) -> &[Form; 4] {
        &self.coeffs
    }

    pub fn param_degree(&self) -> usize {
        self.param_degree
    }

    pub fn eval(&self, at: &ParamPoint) -> Row<Scalar> {
        std::array::from_fn(|k| self.coeffs[k].eval(at.a(), at.b()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Arrangement {
    field: FieldDesc,
    parametric: bool,
    planes: Vec<LinearForm>,
    label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "planes")]
pub enum Violation {
    DegeneratePlane(usize),
    DuplicatePlane(#[serde(serialize_with = "ser_set")] PlaneSet),
    FourShareLine(#[serde(serialize_with = "ser_set")] PlaneSet),
    SixSharePoint(#[serde(serialize_with = "ser_set")] PlaneSet),
}

fn ser_set<S: serde::Serializer>(m: &PlaneSet, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&digits(*m))
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegeneratePlane(i) => write!(f, "plane {i} vanishes"),
            Violation::DuplicatePlane(m) => write!(f, "planes {} coincide", digits(*m)),
            Violation::FourShareLine(m) => write!(f, "planes {} share a line", digits(*m)),
            Violation::SixSharePoint(m) => write!(f, "planes {} share a point", digits(*m)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityVerdict {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

fn subsets_of_size(k: u32) -> impl Iterator<Item = PlaneSet> {
    (0u16..256)
        .map(|m| m as u8)
        .filter(move |m| m.count_ones() == k)
}

impl Arrangement {
    pub fn new(
        field: FieldDesc,
        planes: Vec<LinearForm>,
        label: Option<String>,
    ) -> Result<Self, ArrangementError> {
        if planes.len() != 8 {
            return Err(ArrangementError::PlaneCount(planes.len()));
        }
        for p in &planes {
            for c in &p.coeffs {
                if c.field() != field {
                    return Err(AlgebraError::FieldMismatch(c.field(), field).into());
                }
            }
        }
        let parametric = planes.iter().any(|p| p.param_degree > 0);
        Ok(Arrangement {
            field,
            parametric,
            planes,
            label,
        })
    }

    /// Builds a constant arrangement from scalar rows.
    pub fn from_rows(
        rows: &[Row<Scalar>],
        label: Option<String>,
    ) -> Result<Self, ArrangementError> {
        let field = rows.first().map_or(FieldDesc::Rational, |r| r[0].field());
        let planes = rows
            .iter()
            .enumerate()
            .map(|(i, r)| LinearForm::new(r.clone().map(BinForm::constant), i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        Arrangement::new(field, planes, label)
    }

    pub fn parse(text: &str) -> Result<Self, ArrangementError> {
        let mut field = FieldDesc::Rational;
        let mut declared_params = false;
        let mut label = None;
        let mut rows: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
        let syntax = |line: usize, column: usize, message: String| ArrangementError::SyntaxError {
            line,
            column,
            message,
        };
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let body = raw.split('#').next().unwrap_or("");
            let toks = tokens_with_columns(body);
            let Some(&(kcol, keyword)) = toks.first() else {
                continue;
            };
            match keyword {
                "field" => {
                    field = match toks.get(1..).unwrap_or(&[]) {
                        [(_, "rational")] => FieldDesc::Rational,
                        [(_, "quad"), (c, d)] => {
                            let d: i64 = d.parse().map_err(|_| {
                                syntax(line_no, *c, format!("bad field parameter `{d}`"))
                            })?;
                            FieldDesc::quadratic(d)
                                .map_err(|e| syntax(line_no, *c, e.to_string()))?
                        }
                        _ => {
                            return Err(syntax(
                                line_no,
                                kcol,
                                "expected `field rational` or `field quad <d>`".into(),
                            ))
                        }
                    };
                    if !rows.is_empty() {
                        return Err(syntax(
                            line_no,
                            kcol,
                            "`field` must precede the planes".into(),
                        ));
                    }
                }
                "params" => declared_params = true,
                "label" => {
                    let rest = body[kcol - 1 + keyword.len()..].trim();
                    if rest.is_empty() {
                        return Err(syntax(line_no, kcol, "empty label".into()));
                    }
                    label = Some(rest.to_string());
                }
                "plane" => {
                    if toks.len() != 5 {
                        return Err(syntax(
                            line_no,
                            kcol,
                            format!("a plane needs 4 coefficients, found {}", toks.len() - 1),
                        ));
                    }
                    rows.push((line_no, toks[1..].to_vec()));
                }
                other => return Err(syntax(line_no, kcol, format!("unknown keyword `{other}`"))),
            }
        }
        if rows.len() != 8 {
            return Err(ArrangementError::PlaneCount(rows.len()));
        }
        let mut planes = Vec::with_capacity(8);
        for (i, (line_no, toks)) in rows.iter().enumerate() {
            let mut coeffs = Vec::with_capacity(4);
            for &(col, src) in toks {
                let f = parse_expr(src, field)
                    .map_err(|e| syntax(*line_no, col + e.column - 1, e.message))?;
                coeffs.push(f);
            }
            let coeffs: [Form; 4] = coeffs.try_into().expect("four coefficients");
            planes.push(LinearForm::new(coeffs, i + 1)?);
        }
        let arr = Arrangement::new(field, planes, label)?;
        if arr.parametric && !declared_params {
            return Err(ArrangementError::SyntaxError {
                line: rows.iter().find(|_| true).map_or(1, |r| r.0),
                column: 1,
                message: "coefficients use A or B but `params` is not declared".into(),
            });
        }
        Ok(Arrangement {
            parametric: arr.parametric || declared_params,
            ..arr
        })
    }

    /// Renders in the file format; parsing the output gives back an equal arrangement.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(l) = &self.label {
            out.push_str(&format!("label {l}\n"));
        }
        match self.field {
            FieldDesc::Rational => out.push_str("field rational\n"),
            FieldDesc::Quadratic(d) => out.push_str(&format!("field quad {d}\n")),
        }
        if self.parametric {
            out.push_str("params\n");
        }
        for p in &self.planes {
            let cs: Vec<String> = p
                .coeffs
                .iter()
                .map(|c| c.to_string().replace(' ', ""))
                .collect();
            out.push_str(&format!("plane {}\n", cs.join(" ")));
        }
        out
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn is_parametric(&self) -> bool {
        self.parametric
    }

    pub fn planes(&self) -> &[LinearForm] {
        &self.planes
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: Option<String>) -> Self {
        self.label = label;
        self
    }

    /// Coefficient rows as binary forms.
    pub fn rows(&self) -> Vec<Row<Form>> {
        self.planes.iter().map(|p| p.coeffs.clone()).collect()
    }

    /// Common field of the arrangement and a parameter value.
    fn join_field(&self, at: &ParamPoint) -> Result<FieldDesc, AlgebraError> {
        match (self.field, at.field()) {
            (a, b) if a == b => Ok(a),
            (FieldDesc::Rational, b) => Ok(b),
            (a, FieldDesc::Rational) => Ok(a),
            (a, b) => Err(AlgebraError::FieldMismatch(a, b)),
        }
    }

    /// Scalar rows at a parameter value, in the common field.
    pub fn rows_at(&self, at: Option<&ParamPoint>) -> Result<Vec<Row<Scalar>>, ArrangementError> {
        match at {
            Some(at) => {
                let f = self.join_field(at)?;
                let e = self.embed(f)?;
                let at = at.embed(f)?;
                Ok(e.planes.iter().map(|p| p.eval(&at)).collect())
            }
            None if self.parametric => Err(ArrangementError::MissingParameter),
            None => Ok(self
                .planes
                .iter()
                .map(|p| p.coeffs.clone().map(|c| c.coeffs()[0].clone()))
                .collect()),
        }
    }

    /// The member of the family at `at`, as a constant arrangement.
    pub fn specialize(&self, at: &ParamPoint) -> Result<Arrangement, ArrangementError> {
        let rows = self.rows_at(Some(at))?;
        let planes = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| LinearForm::new(r.map(BinForm::constant), i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arrangement {
            field: self.join_field(at)?,
            parametric: false,
            planes,
            label: self.label.clone(),
        })
    }

    /// The member at the literal pair `(a, b)`; unlike [`Arrangement::specialize`] the
    /// representative is kept, which matters for cover scalars.
    pub fn specialize_pair(&self, a: &Scalar, b: &Scalar) -> Result<Arrangement, ArrangementError> {
        let f = [self.field, a.field(), b.field()].into_iter().try_fold(
            FieldDesc::Rational,
            |acc, x| match (acc, x) {
                (p, q) if p == q => Ok(p),
                (FieldDesc::Rational, q) => Ok(q),
                (p, FieldDesc::Rational) => Ok(p),
                (p, q) => Err(AlgebraError::FieldMismatch(p, q)),
            },
        )?;
        let e = self.embed(f)?;
        let (a, b) = (a.embed(f)?, b.embed(f)?);
        let planes = e
            .planes
            .iter()
            .enumerate()
            .map(|(i, p)| {
                LinearForm::new(
                    std::array::from_fn(|k| BinForm::constant(p.coeffs[k].eval(&a, &b))),
                    i + 1,
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Arrangement {
            field: f,
            parametric: false,
            planes,
            label: self.label.clone(),
        })
    }

    pub fn embed(&self, target: FieldDesc) -> Result<Arrangement, AlgebraError> {
        if target == self.field {
            return Ok(self.clone());
        }
        let planes = self
            .planes
            .iter()
            .map(|p| {
                let cs = p
                    .coeffs
                    .iter()
                    .map(|c| c.embed(target))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(LinearForm {
                    coeffs: cs.try_into().expect("four"),
                    param_degree: p.param_degree,
                })
            })
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Ok(Arrangement {
            field: target,
            planes,
            ..self.clone()
        })
    }

    /// Applies the nontrivial automorphism of the coefficient field.
    pub fn conjugate(&self) -> Arrangement {
        let planes = self
            .planes
            .iter()
            .map(|p| LinearForm {
                coeffs: p.coeffs.clone().map(|c| c.conj()),
                param_degree: p.param_degree,
            })
            .collect();
        Arrangement {
            planes,
            ..self.clone()
        }
    }

    /// Reparametrizes by `A -> l1(A, B)`, `B -> l2(A, B)` for linear forms `l1`, `l2`.
    pub fn substitute_params(&self, l1: &Form, l2: &Form) -> Arrangement {
        let lift = |l: &Form| l.embed(self.field).unwrap_or_else(|_| l.clone());
        let (l1, l2) = (&lift(l1), &lift(l2));
        let planes = self
            .planes
            .iter()
            .map(|p| {
                let coeffs = p.coeffs.clone().map(|c| {
                    if c.degree() == 0 {
                        c
                    } else {
                        c.substitute(l1, l2)
                    }
                });
                LinearForm {
                    coeffs,
                    param_degree: p.param_degree,
                }
            })
            .collect();
        Arrangement {
            planes,
            ..self.clone()
        }
    }

    /// Plane `i` moves to position `sigma(i)`.
    pub fn relabel(&self, sigma: &Perm) -> Arrangement {
        let mut planes = self.planes.clone();
        for (i, p) in self.planes.iter().enumerate() {
            planes[sigma.apply(i)] = p.clone();
        }
        Arrangement {
            planes,
            ..self.clone()
        }
    }

    /// Multiplies plane `i` (0-based) by a nonzero scalar.
    pub fn scale_plane(&self, i: usize, c: &Scalar) -> Arrangement {
        assert!(!c.is_zero(), "scaling a plane by zero");
        let mut planes = self.planes.clone();
        planes[i].coeffs = planes[i].coeffs.clone().map(|f| f.scale(c));
        Arrangement {
            planes,
            ..self.clone()
        }
    }

    /// The minor of each quadruple, in lexicographic order of the quadruples.
    pub fn all_minors(&self) -> Vec<(PlaneSet, Form)> {
        let rows = self.rows();
        quads()
            .masks
            .iter()
            .map(|&q| {
                let ix: Vec<usize> = (0..8).filter(|i| q >> i & 1 == 1).collect();
                let m: Mat4<Form> = std::array::from_fn(|k| rows[ix[k]].clone());
                (q, det4(&m))
            })
            .collect()
    }

    /// Generic table (identically vanishing minors) or the table at a parameter value.
    pub fn incidence_table(
        &self,
        at: Option<&ParamPoint>,
    ) -> Result<IncidenceTable, ArrangementError> {
        let minors = self.all_minors();
        let mut t = IncidenceTable::EMPTY;
        match at {
            None => {
                for (q, m) in minors {
                    if m.is_zero() {
                        t.insert(q);
                    }
                }
            }
            Some(at) => {
                let f = self.join_field(at)?;
                let at = at.embed(f)?;
                for (q, m) in minors {
                    if m.embed(f)?.eval(at.a(), at.b()).is_zero() {
                        t.insert(q);
                    }
                }
            }
        }
        Ok(t)
    }

    /// Checks the defining conditions of an octic arrangement by exact ranks.
    pub fn validate(&self, at: Option<&ParamPoint>) -> Result<ValidityVerdict, ArrangementError> {
        let rows = self.rows_at(at)?;
        Ok(validate_rows(&rows))
    }
}

pub fn validate_rows(rows: &[Row<Scalar>]) -> ValidityVerdict {
    let mut violations = Vec::new();
    let mut degenerate = 0u8;
    for (i, r) in rows.iter().enumerate() {
        if is_zero_row(r) {
            violations.push(Violation::DegeneratePlane(i + 1));
            degenerate |= 1 << i;
        }
    }
    let rank_of = |m: PlaneSet| {
        let sel: Vec<Row<Scalar>> = (0..8)
            .filter(|i| m >> i & 1 == 1)
            .map(|i| rows[i].clone())
            .collect();
        rank(&sel)
    };
    for (k, need, make) in [
        (2, 2, Violation::DuplicatePlane as fn(PlaneSet) -> Violation),
        (4, 3, Violation::FourShareLine),
        (6, 4, Violation::SixSharePoint),
    ] {
        for m in subsets_of_size(k) {
            if m & degenerate == 0 && rank_of(m) < need {
                violations.push(make(m));
            }
        }
    }
    ValidityVerdict {
        valid: violations.is_empty(),
        violations,
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// The quadruple `{i, j, k, l}` from 0-based indices.
pub fn quad(ix: [usize; 4]) -> PlaneSet {
    from_indices(&ix)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ARR2: &str = "label 2\nfield rational\nparams\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\nplane 0 0 0 1\n\
plane 1 1 0 0\nplane 0 1 1 0\nplane 0 0 1 1\nplane A 0 0 B\n";

    fn arr2() -> Arrangement {
        Arrangement::parse(ARR2).unwrap()
    }

    #[test]
    fn parse_and_render_round_trip() {
        let a = arr2();
        assert!(a.is_parametric());
        assert_eq!(a.label(), Some("2"));
        assert_eq!(Arrangement::parse(&a.render()).unwrap(), a);
    }

    #[test]
    fn first_minors() {
        let m = arr2().all_minors();
        assert_eq!(m.len(), 70);
        assert_eq!(digits(m[0].0), "1234");
        assert_eq!(m[0].1.to_string(), "1");
        assert_eq!(m[4].1.to_string(), "B");
        assert_eq!(m[69].1.to_string(), "-A+B");
    }

    #[test]
    fn generic_and_special_tables() {
        let a = arr2();
        let g = a.incidence_table(None).unwrap();
        assert_eq!(g.len(), 24);
        let s = a
            .incidence_table(Some(&ParamPoint::from_ints(1, 1)))
            .unwrap();
        assert_eq!(s.len(), 25);
        assert!(g.is_subset(&s));
        let v = a.validate(Some(&ParamPoint::from_ints(1, 0))).unwrap();
        assert!(!v.valid);
        assert!(
            a.validate(Some(&ParamPoint::from_ints(2, 1)))
                .unwrap()
                .valid
        );
        assert_eq!(a.validate(None), Err(ArrangementError::MissingParameter));
    }

    #[test]
    fn errors() {
        let bad = ARR2.replace("plane 0 0 1 1", "plane 0 0 0 0");
        assert_eq!(
            Arrangement::parse(&bad),
            Err(ArrangementError::DegeneratePlane(7))
        );
        let mixed = ARR2.replace("plane A 0 0 B", "plane A 0 0 1");
        assert_eq!(
            Arrangement::parse(&mixed),
            Err(ArrangementError::MixedRowDegree(8))
        );
        let syn = ARR2.replace("plane 0 0 1 1", "plane 0 0 1 1+*");
        match Arrangement::parse(&syn) {
            Err(ArrangementError::SyntaxError { line, column, .. }) => {
                assert_eq!((line, column), (10, 15))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn four_planes_through_a_line() {
        let rows: Vec<Row<Scalar>> = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [1, 1, 0, 0],
            [1, -1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [1, 2, 3, 5],
            [2, 7, 1, 3],
        ]
        .iter()
        .map(|r| r.map(|x| Scalar::from_int(x, FieldDesc::Rational)))
        .collect();
        let v = validate_rows(&rows);
        assert!(v
            .violations
            .contains(&Violation::FourShareLine(quad([0, 1, 2, 3]))));
    }

    #[test]
    fn quadratic_coefficients() {
        let text =
            "field quad -3\nparams\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\nplane 0 0 0 1\n\
plane 1 1 0 0\nplane 0 1 1 0\nplane 0 0 1 1\nplane (1-s)*A-(1-s)*(1-s)*B 0 4*B 4*B\n";
        let a = Arrangement::parse(text).unwrap();
        assert_eq!(a.planes()[7].param_degree(), 1);
        let c = &a.planes()[7].coeffs()[0];
        let d = FieldDesc::Quadratic(-3);
        let q = |x: i64, y: i64| {
            Scalar::new(
                num_rational::BigRational::from_integer(x.into()),
                num_rational::BigRational::from_integer(y.into()),
                d,
            )
        };
        assert_eq!(c.coeffs(), &[q(1, -1), q(2, 2)]);
        assert_eq!(Arrangement::parse(&a.render()).unwrap(), a);
    }
}
