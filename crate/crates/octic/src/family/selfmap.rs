//! Parameter self-maps `(A:B) -> (l1:l2)` of a family, checked at sample members.

use serde::Serialize;

use super::equivalence::equivalences;
use super::FamilyError;
use crate::algebra::{ParamPoint, Ring, Scalar};
use crate::arrangement::Arrangement;
use crate::combinatorics::{IncidenceTable, Perm};
use crate::Form;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Straight,
    Twisted,
}

impl std::fmt::Display for MapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MapKind::Straight => "straight",
            MapKind::Twisted => "twisted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleOutcome {
    pub at: ParamPoint,
    /// The literal image pair `(l1(a, 1), l2(a, 1))`.
    pub image: [String; 2],
    pub witnesses: usize,
    /// Cover scalar of the witness for each relabeling that works at this sample.
    #[serde(serialize_with = "ser_scalars")]
    pub cover_scalars: Vec<(Perm, Scalar)>,
}

fn ser_scalars<S: serde::Serializer>(xs: &[(Perm, Scalar)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(xs.iter().map(|(p, c)| (p.to_string(), c.to_string())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterMapReport {
    pub samples: Vec<SampleOutcome>,
    pub equivalent: bool,
    /// Absent if some sample is not equivalent.
    pub kind: Option<MapKind>,
    /// Relabelings whose cover scalar changes only by squares between samples.
    pub straight_via: Vec<Perm>,
}

const CANDIDATES: [(i64, i64); 16] = [
    (2, 1),
    (3, 1),
    (5, 2),
    (7, 3),
    (-3, 1),
    (4, 3),
    (11, 5),
    (13, 4),
    (-5, 3),
    (17, 7),
    (-7, 2),
    (19, 6),
    (23, 9),
    (-11, 4),
    (29, 11),
    (31, 13),
];

fn image(at: &ParamPoint, l1: &Form, l2: &Form) -> (Scalar, Scalar) {
    (l1.eval(at.a(), at.b()), l2.eval(at.a(), at.b()))
}

fn is_special(
    fam: &Arrangement,
    generic: &IncidenceTable,
    a: &Scalar,
    b: &Scalar,
) -> Result<bool, FamilyError> {
    if a.is_zero() && b.is_zero() {
        return Ok(true);
    }
    let m = fam.specialize_pair(a, b)?;
    Ok(m.incidence_table(None)? != *generic || !m.validate(None)?.valid)
}

/// The first `n` fixed sample points that are general for the family, as are their images.
pub fn default_samples(
    fam: &Arrangement,
    l1: &Form,
    l2: &Form,
    n: usize,
) -> Result<Vec<ParamPoint>, FamilyError> {
    let generic = fam.incidence_table(None)?;
    let mut out = Vec::new();
    for (a, b) in CANDIDATES {
        if out.len() == n {
            break;
        }
        let at = ParamPoint::from_ints(a, b).embed(fam.field())?;
        let (ia, ib) = image(&at, l1, l2);
        if !is_special(fam, &generic, at.a(), at.b())? && !is_special(fam, &generic, &ia, &ib)? {
            out.push(at);
        }
    }
    Ok(out)
}

/// A relabeling is straight when its cover scalar is `±1` times a square function of the
/// parameter: the values at all samples agree up to squares, and the common class is `±1`.
/// A twist by `-1` is undone by `u -> i u`.
fn straight_relabelings(samples: &[SampleOutcome]) -> Vec<Perm> {
    let (first, rest) = samples.split_first().expect("at least one sample");
    first
        .cover_scalars
        .iter()
        .filter(|(p, c0)| {
            (c0.is_square().is_some() || (-c0.clone()).is_square().is_some())
                && rest.iter().all(|s| {
                    s.cover_scalars
                        .iter()
                        .find(|(q, _)| q == p)
                        .is_some_and(|(_, c)| {
                            c.checked_div(c0).ok().and_then(|r| r.is_square()).is_some()
                        })
                })
        })
        .map(|(p, _)| *p)
        .collect()
}

/// Compares the member at each sample with the member at its image.
pub fn verify_parameter_map(
    fam: &Arrangement,
    l1: &Form,
    l2: &Form,
    samples: &[ParamPoint],
) -> Result<ParameterMapReport, FamilyError> {
    if !fam.is_parametric() {
        return Err(FamilyError::NotParametric);
    }
    if samples.len() < 3 {
        return Err(FamilyError::TooFewSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    let (l1, l2) = (l1.embed(fam.field())?, l2.embed(fam.field())?);
    let det = l1.coeffs()[0].clone() * l2.coeffs()[1].clone()
        - l1.coeffs()[1].clone() * l2.coeffs()[0].clone();
    if l1.degree() != 1 || l2.degree() != 1 || det.is_zero() {
        return Err(FamilyError::MapSyntax {
            text: format!("{l1},{l2}"),
            message: "not an invertible linear map".into(),
        });
    }
    let generic = fam.incidence_table(None)?;
    let mut out = Vec::new();
    for at in samples {
        let at = at.embed(fam.field())?;
        let (ia, ib) = image(&at, &l1, &l2);
        if is_special(fam, &generic, at.a(), at.b())? || is_special(fam, &generic, &ia, &ib)? {
            return Err(FamilyError::SampleIsSpecial(Box::new(at)));
        }
        let src = fam.specialize(&at)?;
        let dst = fam.specialize_pair(&ia, &ib)?;
        let ws = equivalences(&src, &dst, None)?;
        let cover_scalars = ws
            .iter()
            .map(|w| (w.sigma, w.cover_scalar.clone()))
            .collect();
        out.push(SampleOutcome {
            at,
            image: [ia.to_string(), ib.to_string()],
            witnesses: ws.len(),
            cover_scalars,
        });
    }
    let equivalent = out.iter().all(|s| s.witnesses > 0);
    let straight_via = if equivalent {
        straight_relabelings(&out)
    } else {
        Vec::new()
    };
    let kind = equivalent.then_some({
        if straight_via.is_empty() {
            MapKind::Twisted
        } else {
            MapKind::Straight
        }
    });
    Ok(ParameterMapReport {
        samples: out,
        equivalent,
        kind,
        straight_via,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BinForm, FieldDesc};

    const ARR2: &str =
        "field rational\nparams\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\nplane 0 0 0 1\n\
plane 1 1 0 0\nplane 0 1 1 0\nplane 0 0 1 1\nplane A 0 0 B\n";

    fn vars() -> (Form, Form) {
        let one = Scalar::one(FieldDesc::Rational);
        (BinForm::var_a(&one), BinForm::var_b(&one))
    }

    #[test]
    fn swap_is_straight_on_arr2() {
        let fam = Arrangement::parse(ARR2).unwrap();
        let (a, b) = vars();
        let samples: Vec<ParamPoint> = [(2, 1), (3, 1), (5, 2)]
            .iter()
            .map(|&(x, y)| ParamPoint::from_ints(x, y))
            .collect();
        let r = verify_parameter_map(&fam, &b, &a, &samples).unwrap();
        assert!(r.equivalent);
        assert_eq!(r.kind, Some(MapKind::Straight));
    }

    #[test]
    fn identity_is_straight() {
        let fam = Arrangement::parse(ARR2).unwrap();
        let (a, b) = vars();
        let s = default_samples(&fam, &a, &b, 3).unwrap();
        let r = verify_parameter_map(&fam, &a, &b, &s).unwrap();
        assert_eq!(r.kind, Some(MapKind::Straight));
        let one = Scalar::one(FieldDesc::Rational);
        assert!(r
            .samples
            .iter()
            .all(|s| s.cover_scalars.contains(&(Perm::IDENTITY, one.clone()))));
        assert!(r.straight_via.contains(&Perm::IDENTITY));
    }

    #[test]
    fn bad_samples() {
        let fam = Arrangement::parse(ARR2).unwrap();
        let (a, b) = vars();
        let special: Vec<ParamPoint> = [(1, 1), (2, 1), (3, 1)]
            .iter()
            .map(|&(x, y)| ParamPoint::from_ints(x, y))
            .collect();
        assert!(matches!(
            verify_parameter_map(&fam, &a, &b, &special),
            Err(FamilyError::SampleIsSpecial(_))
        ));
        assert!(matches!(
            verify_parameter_map(&fam, &a, &b, &special[1..]),
            Err(FamilyError::TooFewSamples { .. })
        ));
        assert!(verify_parameter_map(&fam, &a, &a, &special[1..]).is_err());
    }
}
