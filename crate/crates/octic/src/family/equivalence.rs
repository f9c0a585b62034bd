//! Projective transformations carrying one arrangement onto another.

use serde::Serialize;

use super::{common_field, FamilyError};
use crate::algebra::linalg::{coords_in_basis, inverse, mat_mul, row_mul, Mat4, Row};
use crate::algebra::{Field, Ring, Scalar};
use crate::arrangement::Arrangement;
use crate::combinatorics::canon::{canonical_form, stabilizer};
use crate::combinatorics::subsets::{members, quints};
use crate::combinatorics::{IncidenceTable, Perm};

/// `b[sigma(i)] ∘ matrix = scales[i] * a[i]` for every plane, with `cover_scalar` the product of the scales.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceWitness {
    pub sigma: Perm,
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: Mat4<Scalar>,
    #[serde(serialize_with = "ser_scalars")]
    pub scales: Vec<Scalar>,
    #[serde(serialize_with = "ser_scalar")]
    pub cover_scalar: Scalar,
}

fn ser_scalar<S: serde::Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn ser_scalars<S: serde::Serializer>(xs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

fn ser_matrix<S: serde::Serializer>(m: &Mat4<Scalar>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        m.iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    )
}

/// Five planes no four of which are concurrent.
pub fn general_position_quintuple(table: &IncidenceTable) -> Option<[usize; 5]> {
    quints().masks.iter().find_map(|&m| {
        let inside = (0..8)
            .filter(|i| m >> i & 1 == 1)
            .all(|i| !table.contains(m & !(1 << i)));
        inside.then(|| members(m).try_into().expect("five members"))
    })
}

fn scalar_rows(arr: &Arrangement) -> Result<Vec<Row<Scalar>>, FamilyError> {
    if arr.is_parametric() {
        return Err(FamilyError::Parametric);
    }
    Ok(arr.rows_at(None)?)
}

/// Nonzero `l` with `u = l * v`, if the rows are proportional.
fn ratio(u: &Row<Scalar>, v: &Row<Scalar>) -> Option<Scalar> {
    let k = (0..4).find(|&k| !v[k].is_zero())?;
    let l = u[k].div(&v[k])?;
    if l.is_zero() || (0..4).any(|j| u[j] != l.clone() * v[j].clone()) {
        return None;
    }
    Some(l)
}

fn solve(
    ra: &[Row<Scalar>],
    rb: &[Row<Scalar>],
    five: &[usize; 5],
    sigma: &Perm,
) -> Option<EquivalenceWitness> {
    let pa: Mat4<Scalar> = std::array::from_fn(|k| ra[five[k]].clone());
    let pb: Mat4<Scalar> = std::array::from_fn(|k| rb[sigma.apply(five[k])].clone());
    let x = coords_in_basis(&rb[sigma.apply(five[4])], &pb)?;
    let y = coords_in_basis(&ra[five[4]], &pa)?;
    let zero = x[0].zero_like();
    let mut lam: Mat4<Scalar> = std::array::from_fn(|_| std::array::from_fn(|_| zero.clone()));
    for k in 0..4 {
        lam[k][k] = y[k].div(&x[k])?;
    }
    let matrix = mat_mul(&inverse(&pb)?, &mat_mul(&lam, &pa));
    let scales = (0..8)
        .map(|i| ratio(&row_mul(&rb[sigma.apply(i)], &matrix), &ra[i]))
        .collect::<Option<Vec<_>>>()?;
    let cover_scalar = scales
        .iter()
        .fold(zero.one_like(), |acc, l| acc * l.clone());
    Some(EquivalenceWitness {
        sigma: *sigma,
        matrix,
        scales,
        cover_scalar,
    })
}

/// Relabelings carrying the table of `a` onto the table of `b`.
fn candidate_sigmas(ta: &IncidenceTable, tb: &IncidenceTable) -> Vec<Perm> {
    if ta == tb {
        return stabilizer(ta);
    }
    let (ca, cb) = (canonical_form(ta), canonical_form(tb));
    if ca.minimal != cb.minimal {
        return Vec::new();
    }
    let wb_inv = cb.witness.inverse();
    stabilizer(&ca.minimal)
        .iter()
        .map(|rho| wb_inv.compose(rho).compose(&ca.witness))
        .collect()
}

/// Every witness, over the given `sigma` or over all relabelings matching the tables.
pub fn equivalences(
    a: &Arrangement,
    b: &Arrangement,
    sigma: Option<&Perm>,
) -> Result<Vec<EquivalenceWitness>, FamilyError> {
    let f = common_field(a.field(), b.field())?;
    let (a, b) = (a.embed(f)?, b.embed(f)?);
    let (ra, rb) = (scalar_rows(&a)?, scalar_rows(&b)?);
    let ta = a.incidence_table(None)?;
    let tb = b.incidence_table(None)?;
    let five = general_position_quintuple(&ta).ok_or(FamilyError::NoGeneralPositionQuintuple)?;
    let sigmas = match sigma {
        Some(s) => {
            if ta.relabel(s) != tb {
                return Ok(Vec::new());
            }
            vec![*s]
        }
        None => candidate_sigmas(&ta, &tb),
    };
    Ok(sigmas
        .iter()
        .filter_map(|s| solve(&ra, &rb, &five, s))
        .collect())
}

pub fn projective_equivalence(
    a: &Arrangement,
    b: &Arrangement,
    sigma: Option<&Perm>,
) -> Result<Option<EquivalenceWitness>, FamilyError> {
    Ok(equivalences(a, b, sigma)?.into_iter().next())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldDesc;

    const ARR1: &str =
        "field rational\nplane 1 0 0 0\nplane 0 1 0 0\nplane 0 0 1 0\nplane 0 0 0 1\n\
plane 1 1 0 0\nplane 0 1 1 0\nplane 0 0 1 1\nplane 1 0 0 1\n";

    fn check(a: &Arrangement, b: &Arrangement, w: &EquivalenceWitness) {
        let (ra, rb) = (a.rows_at(None).unwrap(), b.rows_at(None).unwrap());
        for i in 0..8 {
            let img = row_mul(&rb[w.sigma.apply(i)], &w.matrix);
            let scaled: Row<Scalar> =
                std::array::from_fn(|k| w.scales[i].clone() * ra[i][k].clone());
            assert_eq!(img, scaled);
        }
    }

    #[test]
    fn reflexive_identity() {
        let a = Arrangement::parse(ARR1).unwrap();
        let w = projective_equivalence(&a, &a, Some(&Perm::IDENTITY))
            .unwrap()
            .unwrap();
        let one = Scalar::one(FieldDesc::Rational);
        assert!(w.scales.iter().all(|l| *l == one));
        assert_eq!(w.cover_scalar, one);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(
                    w.matrix[i][j],
                    if i == j { one.clone() } else { one.zero_like() }
                );
            }
        }
    }

    #[test]
    fn relabeled_and_rescaled_copy() {
        let a = Arrangement::parse(ARR1).unwrap();
        let sigma: Perm = "(15)(26)(37)(48)".parse().unwrap();
        let b = a
            .relabel(&sigma)
            .scale_plane(2, &Scalar::from_int(3, FieldDesc::Rational));
        let ws = equivalences(&a, &b, None).unwrap();
        assert!(!ws.is_empty());
        for w in &ws {
            check(&a, &b, w);
        }
        // Swapping the roles yields witnesses too.
        let back = equivalences(&b, &a, None).unwrap();
        assert_eq!(back.len(), ws.len());
    }

    #[test]
    fn different_tables_are_inequivalent() {
        let a = Arrangement::parse(ARR1).unwrap();
        let text = ARR1.replace("plane 1 0 0 1", "plane 2 0 0 1");
        let b = Arrangement::parse(&text).unwrap();
        assert_ne!(
            a.incidence_table(None).unwrap(),
            b.incidence_table(None).unwrap()
        );
        assert!(projective_equivalence(&a, &b, None).unwrap().is_none());
        assert!(matches!(
            projective_equivalence(&a, &a, Some(&"(12)".parse().unwrap())),
            Ok(None)
        ));
    }
}
