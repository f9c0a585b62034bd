//! Parameter values where a family acquires extra incidences.

use std::fmt;

use serde::Serialize;

use super::equivalence::projective_equivalence;
use super::FamilyError;
use crate::algebra::{factor_binform, FieldDesc, ParamPoint, Scalar};
use crate::arrangement::expr::parse_expr;
use crate::arrangement::{Arrangement, Violation};
use crate::combinatorics::canon::canonical_form;
use crate::combinatorics::{IncidenceTable, Perm};
use crate::{corpus, Form};

/// Which realization of a known combinatorial type a special member is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    /// Projectively equivalent to the corpus arrangement.
    Same,
    /// Equivalent only to the Galois conjugate of the corpus arrangement.
    Conjugate,
    /// Equivalent to neither.
    Other,
    /// The coefficient fields have no common embedding.
    Incomparable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    NonCy {
        violations: Vec<Violation>,
    },
    /// `witness` relabels the special member onto the corpus arrangement's table.
    Known {
        label: String,
        witness: Perm,
        realization: Realization,
    },
    UnknownOctic {
        minimal: IncidenceTable,
    },
}

impl Verdict {
    /// `non-CY`, the corpus label, or `unknown`.
    pub fn key(&self) -> &str {
        match self {
            Verdict::NonCy { .. } => "non-CY",
            Verdict::Known { label, .. } => label,
            Verdict::UnknownOctic { .. } => "unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NonCy { violations } => {
                let v: Vec<String> = violations.iter().take(3).map(|v| v.to_string()).collect();
                write!(
                    f,
                    "non-CY ({}{})",
                    v.join("; "),
                    if violations.len() > 3 { "; ..." } else { "" }
                )
            }
            Verdict::Known {
                label,
                witness,
                realization,
            } => write!(f, "Arr {label} via {witness} ({realization:?})"),
            Verdict::UnknownOctic { minimal } => write!(f, "unknown octic [{minimal}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialValue {
    pub at: ParamPoint,
    /// Minimal polynomial over the family's field for irrational values.
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_form")]
    pub min_poly: Option<Form>,
    pub verdict: Verdict,
}

fn ser_form<S: serde::Serializer>(f: &Option<Form>, s: S) -> Result<S::Ok, S::Error> {
    match f {
        Some(f) => s.collect_str(f),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialValues {
    pub values: Vec<SpecialValue>,
    /// Irreducible factors of degree three or more, not classified.
    #[serde(serialize_with = "ser_forms")]
    pub unresolved: Vec<Form>,
}

fn ser_forms<S: serde::Serializer>(fs: &[Form], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(fs.iter().map(|f| f.to_string()))
}

/// Parses `inf` or a constant expression for `A/B`; `quad` selects the field of irrational values.
pub fn parse_special_point(text: &str, field: FieldDesc) -> Result<ParamPoint, FamilyError> {
    let text = text.trim();
    if text == "inf" {
        return Ok(ParamPoint::infinity(field));
    }
    let bad = |message: String| FamilyError::MapSyntax {
        text: text.to_string(),
        message,
    };
    let f = parse_expr(text, field).map_err(|e| bad(e.message))?;
    if f.degree() != 0 {
        return Err(bad("value depends on the parameters".into()));
    }
    Ok(ParamPoint::affine(f.coeffs()[0].clone()))
}

fn classify(fam: &Arrangement, at: &ParamPoint) -> Result<Verdict, FamilyError> {
    let member = fam.specialize(at)?;
    let v = member.validate(None)?;
    if !v.valid {
        return Ok(Verdict::NonCy {
            violations: v.violations,
        });
    }
    let c = canonical_form(&member.incidence_table(None)?);
    let Some(label) = corpus::lookup(&c.minimal) else {
        return Ok(Verdict::UnknownOctic { minimal: c.minimal });
    };
    let entry = corpus::get(label).expect("looked-up label exists");
    let target = &entry.arrangement;
    let t = target.incidence_table(None)?;
    let w_target = canonical_form(&t).witness;
    let witness = w_target.inverse().compose(&c.witness);
    let realization = if target.is_parametric() {
        Realization::Incomparable
    } else {
        match projective_equivalence(&member, target, None) {
            Err(FamilyError::IncompatibleFields(..)) => Realization::Incomparable,
            Err(e) => return Err(e),
            Ok(Some(_)) => Realization::Same,
            Ok(None) if projective_equivalence(&member, &target.conjugate(), None)?.is_some() => {
                Realization::Conjugate
            }
            Ok(None) => Realization::Other,
        }
    };
    Ok(Verdict::Known {
        label: label.to_string(),
        witness,
        realization,
    })
}

/// Roots of all minors that do not vanish identically, each classified.
pub fn special_values(fam: &Arrangement) -> Result<SpecialValues, FamilyError> {
    if !fam.is_parametric() {
        return Err(FamilyError::NotParametric);
    }
    let mut points: Vec<(ParamPoint, Option<Form>)> = Vec::new();
    let mut unresolved: Vec<Form> = Vec::new();
    let mut push = |p: ParamPoint, mp: Option<Form>| {
        if !points.iter().any(|(q, _)| *q == p) {
            points.push((p, mp));
        }
    };
    for (_, m) in fam.all_minors() {
        if m.is_zero() || m.degree() == 0 {
            continue;
        }
        let r = factor_binform(&m)?;
        for (p, _) in r.rational_roots {
            push(p, None);
        }
        for q in r.quadratic_roots {
            match &q.roots {
                Some(rs) => {
                    for x in rs {
                        push(ParamPoint::affine(x.clone()), Some(q.form()));
                    }
                }
                None => {
                    if !unresolved.contains(&q.form()) {
                        unresolved.push(q.form());
                    }
                }
            }
        }
        for u in r.unresolved {
            if !unresolved.contains(&u) {
                unresolved.push(u);
            }
        }
    }
    points.sort_by_key(|(p, mp)| (mp.is_some(), !p.is_infinity(), p.value().map(sort_key)));
    use rayon::prelude::*;
    let values = points
        .into_par_iter()
        .map(|(at, min_poly)| {
            Ok(SpecialValue {
                verdict: classify(fam, &at)?,
                at,
                min_poly,
            })
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    Ok(SpecialValues { values, unresolved })
}

fn sort_key(x: &Scalar) -> (num_rational::BigRational, num_rational::BigRational) {
    (x.a().clone(), x.b().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    const ARR2: &str =
        "field rational\nparams\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\nplane 0 0 0 1\n\
plane 1 1 0 0\nplane 0 1 1 0\nplane 0 0 1 1\nplane A 0 0 B\n";

    #[test]
    fn arr2_special_values() {
        let fam = Arrangement::parse(ARR2).unwrap();
        let s = special_values(&fam).unwrap();
        let got: Vec<(String, String)> = s
            .values
            .iter()
            .map(|v| (v.at.to_string(), v.verdict.key().to_string()))
            .collect();
        let want = [("inf", "non-CY"), ("0", "non-CY"), ("1", "1")];
        assert_eq!(got, want.map(|(a, b)| (a.to_string(), b.to_string())));
        assert!(s.unresolved.is_empty());
        let generic = fam.incidence_table(None).unwrap();
        for v in &s.values {
            let t = fam.incidence_table(Some(&v.at)).unwrap();
            assert!(generic.is_subset(&t) && generic != t);
        }
        if let Verdict::Known { realization, .. } = &s.values[2].verdict {
            assert_eq!(*realization, Realization::Same);
        }
    }

    #[test]
    fn rigid_input_is_rejected() {
        let text = ARR2
            .replace("params\n", "")
            .replace("plane A 0 0 B", "plane 1 0 0 1");
        assert_eq!(
            special_values(&Arrangement::parse(&text).unwrap()),
            Err(FamilyError::NotParametric)
        );
    }

    #[test]
    fn point_parsing() {
        let q5 = FieldDesc::quadratic(5).unwrap();
        assert!(parse_special_point("inf", q5).unwrap().is_infinity());
        let p = parse_special_point("1/2*s-1/2", q5).unwrap();
        assert_eq!(p.value().unwrap().to_string(), "-1/2+1/2*s");
        assert!(parse_special_point("A", FieldDesc::Rational).is_err());
    }
}
