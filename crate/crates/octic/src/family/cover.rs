//! Explicit maps `(x, y, z, t, u) -> (M v, c u)` between double covers.

use serde::Serialize;

use super::{common_field, FamilyError};
use crate::algebra::linalg::{row_mul, Mat4, Row};
use crate::algebra::{BinForm, FieldDesc, Ring, Scalar};
use crate::arrangement::expr::parse_expr;
use crate::arrangement::Arrangement;
use crate::combinatorics::Perm;
use crate::fibration::Position;
use crate::Form;

/// `matrix[r][c]` is the coefficient of coordinate `c` in image coordinate `r`; the cover
/// coordinate is multiplied by `u_scale`, times `i` when `u_imaginary` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverMap {
    pub sigma: Option<Perm>,
    pub matrix: Mat4<Form>,
    pub u_scale: Option<(Form, bool)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverCheck {
    pub holds: bool,
    /// Source plane `sigma(i)` pulls back to a multiple of target plane `i`.
    pub sigma: Option<Perm>,
    /// Product of the per-plane scales.
    pub lambda: Option<Position>,
    pub failure: Option<String>,
}

impl CoverCheck {
    fn fail(sigma: Option<Perm>, lambda: Option<Position>, msg: String) -> CoverCheck {
        CoverCheck {
            holds: false,
            sigma,
            lambda,
            failure: Some(msg),
        }
    }
}

const VARS: [char; 4] = ['x', 'y', 'z', 't'];

/// Parses `x+y,-y,y+z,t` (coefficients may use A, B, s) and a cover scale such as `-i`,
/// `A*B*B*B` or `i*A*A*B*B`; `-` means no cover coordinate.
pub fn parse_cover_map(
    coords: &str,
    u: &str,
    sigma: Option<Perm>,
    field: FieldDesc,
) -> Result<CoverMap, FamilyError> {
    let bad = |text: &str, message: &str| FamilyError::MapSyntax {
        text: text.to_string(),
        message: message.to_string(),
    };
    let parts: Vec<&str> = coords.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(bad(coords, "expected four coordinates"));
    }
    let mut matrix: Vec<Row<Form>> = Vec::new();
    for p in parts {
        let at = |vals: [i64; 4]| -> Result<Form, FamilyError> {
            let text: String = p
                .chars()
                .map(|c| match VARS.iter().position(|v| *v == c) {
                    Some(k) => format!("({})", vals[k]),
                    None => c.to_string(),
                })
                .collect();
            parse_expr(&text, field).map_err(|e| bad(p, &e.message))
        };
        let row: Vec<Form> = (0..4)
            .map(|k| at(std::array::from_fn(|j| (j == k) as i64)))
            .collect::<Result<_, _>>()?;
        if !at([0; 4])?.is_zero() {
            return Err(bad(p, "coordinate is not linear"));
        }
        let sum = row
            .iter()
            .cloned()
            .reduce(|x, y| x.checked_add(&y).unwrap_or(x))
            .expect("four");
        if at([1; 4])? != sum {
            return Err(bad(p, "coordinate is not linear"));
        }
        matrix.push(row.try_into().expect("four"));
    }
    let u_scale = match u.trim() {
        "-" => None,
        u => {
            let imag = u.contains('i');
            let text = u.replace("*i", "").replace("i*", "").replace('i', "1");
            if text.contains('i') {
                return Err(bad(u, "at most one factor i"));
            }
            Some((
                parse_expr(&text, field).map_err(|e| bad(u, &e.message))?,
                imag,
            ))
        }
    };
    Ok(CoverMap {
        sigma,
        matrix: matrix.try_into().expect("four rows"),
        u_scale,
    })
}

fn proportional(u: &Row<Form>, v: &Row<Form>) -> bool {
    (0..4).all(|i| (i + 1..4).all(|j| u[i].mul_form(&v[j]) == u[j].mul_form(&v[i])))
}

/// Checks `prod_i source[sigma(i)](M v) = lambda * prod_i target[i](v)` and `u_scale^2 = lambda`.
pub fn verify_cover_map(
    source: &Arrangement,
    target: &Arrangement,
    map: &CoverMap,
) -> Result<CoverCheck, FamilyError> {
    let mf = map
        .matrix
        .iter()
        .flatten()
        .map(|c| c.field())
        .try_fold(FieldDesc::Rational, common_field)?;
    let f = common_field(common_field(source.field(), target.field())?, mf)?;
    let (rs, rt) = (source.embed(f)?.rows(), target.embed(f)?.rows());
    let m: Mat4<Form> = map
        .matrix
        .clone()
        .map(|r| r.map(|c| c.embed(f).expect("subfield")));
    let pulled: Vec<Row<Form>> = rs.iter().map(|r| row_mul(r, &m)).collect();
    let mut images = [0u8; 8];
    for i in 0..8 {
        let hits: Vec<usize> = (0..8)
            .filter(|&j| !pulled[j].iter().all(Ring::is_zero) && proportional(&pulled[j], &rt[i]))
            .collect();
        let j = match (map.sigma, hits.as_slice()) {
            (Some(s), _) if hits.contains(&s.apply(i)) => s.apply(i),
            (Some(s), _) => {
                return Ok(CoverCheck::fail(
                    map.sigma,
                    None,
                    format!(
                        "plane {} of the source does not pull back to plane {}",
                        s.apply(i) + 1,
                        i + 1
                    ),
                ))
            }
            (None, [j]) => *j,
            (None, _) => {
                return Ok(CoverCheck::fail(
                    None,
                    None,
                    format!("no unique preimage for plane {}", i + 1),
                ))
            }
        };
        images[i] = j as u8;
    }
    let Some(sigma) = Perm::from_images(images) else {
        return Ok(CoverCheck::fail(
            None,
            None,
            "planes are not matched bijectively".into(),
        ));
    };
    let one = BinForm::constant(Scalar::one(f));
    let (mut num, mut den) = (one.clone(), one);
    for i in 0..8 {
        let k = (0..4)
            .find(|&k| !rt[i][k].is_zero())
            .expect("nonzero plane");
        num = num.mul_form(&pulled[sigma.apply(i)][k]);
        den = den.mul_form(&rt[i][k]);
    }
    let lambda = Position::new(num.clone(), den.clone()).reduced();
    if let Some((u, imag)) = &map.u_scale {
        let u = u.embed(f)?;
        let mut u2 = u.mul_form(&u);
        if *imag {
            u2 = -u2;
        }
        if u2.mul_form(&den) != num {
            return Ok(CoverCheck::fail(
                Some(sigma),
                Some(lambda),
                "u_scale squared differs from lambda".into(),
            ));
        }
    }
    Ok(CoverCheck {
        holds: true,
        sigma: Some(sigma),
        lambda: Some(lambda),
        failure: None,
    })
}

pub fn verify_cover_automorphism(
    arr: &Arrangement,
    map: &CoverMap,
) -> Result<CoverCheck, FamilyError> {
    verify_cover_map(arr, arr, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ARR2: &str =
        "field rational\nparams\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\nplane 0 0 0 1\n\
plane 1 1 0 0\nplane 0 1 1 0\nplane 0 0 1 1\nplane A 0 0 B\n";

    #[test]
    fn horizontal_map_of_arr2() {
        let fam = Arrangement::parse(ARR2).unwrap();
        let one = Scalar::one(FieldDesc::Rational);
        let swapped = fam.substitute_params(&BinForm::var_b(&one), &BinForm::var_a(&one));
        let map = parse_cover_map("B*z,B*y,B*x,A*t", "A*B*B*B", None, FieldDesc::Rational).unwrap();
        let c = verify_cover_map(&fam, &swapped, &map).unwrap();
        assert!(c.holds, "{:?}", c.failure);
        assert_eq!(c.lambda.unwrap().to_string(), "A*A*B*B*B*B*B*B");
        assert_eq!(c.sigma.unwrap().to_string(), "(13)(56)(78)");
        let wrong = parse_cover_map("B*z,B*y,B*x,A*t", "A*B*B", None, FieldDesc::Rational);
        assert!(
            wrong.is_err()
                || !verify_cover_map(&fam, &swapped, &wrong.unwrap())
                    .unwrap()
                    .holds
        );
    }

    #[test]
    fn identity_always_holds() {
        let fam = Arrangement::parse(ARR2).unwrap();
        let id =
            parse_cover_map("x,y,z,t", "1", Some(Perm::IDENTITY), FieldDesc::Rational).unwrap();
        let c = verify_cover_automorphism(&fam, &id).unwrap();
        assert!(c.holds);
        assert_eq!(c.lambda.unwrap().to_string(), "1");
    }

    #[test]
    fn parse_errors() {
        assert!(parse_cover_map("x,y,z", "1", None, FieldDesc::Rational).is_err());
        assert!(parse_cover_map("x*y,y,z,t", "1", None, FieldDesc::Rational).is_err());
        assert!(parse_cover_map("x+1,y,z,t", "1", None, FieldDesc::Rational).is_err());
        let m = parse_cover_map("x+y,-y,y+z,t", "i", None, FieldDesc::Rational).unwrap();
        assert!(m.u_scale.as_ref().unwrap().1);
    }
}
