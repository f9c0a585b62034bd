//! Exact scalars: the rationals and quadratic extensions Q(sqrt d).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Commutative ring operations shared by scalars and binary forms.
pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn is_zero(&self) -> bool;
    /// The zero element living in the same field as `self`.
    fn zero_like(&self) -> Self;
}

/// A field whose elements carry enough context to build their own constants.
pub trait Field: Ring + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

impl Ring for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
}

impl Field for BigRational {
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn int_like(&self, n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Coefficient field: Q or Q(sqrt d) with d square-free, d not in {0, 1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldDesc {
    Rational,
    Quadratic(i64),
}

impl FieldDesc {
    pub fn quadratic(d: i64) -> Result<Self, AlgebraError> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(AlgebraError::InvalidField(d));
        }
        Ok(FieldDesc::Quadratic(d))
    }

    pub fn d(&self) -> Option<i64> {
        match self {
            FieldDesc::Rational => None,
            FieldDesc::Quadratic(d) => Some(*d),
        }
    }

    /// Whether elements of `self` can be embedded into `target`.
    pub fn embeds_into(&self, target: &FieldDesc) -> bool {
        self == target || *self == FieldDesc::Rational
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rational => write!(f, "Q"),
            FieldDesc::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

pub fn is_squarefree(n: i64) -> bool {
    let mut m = n.unsigned_abs();
    if m == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p * p) {
            return false;
        }
        if m.is_multiple_of(p) {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Writes a nonzero integer as `k^2 * e` with `e` square-free; returns `(k, e)`.
pub fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "zero has no square-free part");
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut k = BigInt::one();
    let mut e = BigInt::from(sign);
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let pp = &p * &p;
        while (&m % &pp).is_zero() {
            m /= &pp;
            k *= &p;
        }
        if (&m % &p).is_zero() {
            m /= &p;
            e *= &p;
        }
        p += 1;
    }
    e *= m;
    (k, e)
}

/// Square root of a rational when it is a perfect square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// The element `a + b*sqrt(d)`; `b` is zero over Q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    field: FieldDesc,
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, field: FieldDesc) -> Self {
        debug_assert!(field != FieldDesc::Rational || Zero::is_zero(&b));
        Scalar { a, b, field }
    }

    pub fn rational(a: BigRational) -> Self {
        Scalar {
            a,
            b: BigRational::zero(),
            field: FieldDesc::Rational,
        }
    }

    pub fn from_int(n: i64, field: FieldDesc) -> Self {
        Scalar {
            a: BigRational::from_integer(n.into()),
            b: BigRational::zero(),
            field,
        }
    }

    pub fn from_ratio(n: i64, d: i64, field: FieldDesc) -> Self {
        Scalar {
            a: BigRational::new(n.into(), d.into()),
            b: BigRational::zero(),
            field,
        }
    }

    pub fn zero(field: FieldDesc) -> Self {
        Scalar::from_int(0, field)
    }

    pub fn one(field: FieldDesc) -> Self {
        Scalar::from_int(1, field)
    }

    /// The generator `sqrt(d)` of a quadratic field.
    pub fn sqrt_d(field: FieldDesc) -> Result<Self, AlgebraError> {
        match field {
            FieldDesc::Rational => Err(AlgebraError::FieldMismatch(field, field)),
            FieldDesc::Quadratic(_) => Ok(Scalar {
                a: BigRational::zero(),
                b: BigRational::one(),
                field,
            }),
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    pub fn conj(&self) -> Self {
        Scalar {
            a: self.a.clone(),
            b: -self.b.clone(),
            field: self.field,
        }
    }

    fn d_rat(&self) -> BigRational {
        BigRational::from_integer(self.field.d().unwrap_or(0).into())
    }

    /// Field norm to Q.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * self.d_rat()
    }

    /// Embeds a rational element into a quadratic field (identity on equal fields).
    pub fn embed(&self, target: FieldDesc) -> Result<Self, AlgebraError> {
        if self.field == target {
            return Ok(self.clone());
        }
        if self.field == FieldDesc::Rational {
            return Ok(Scalar {
                a: self.a.clone(),
                b: BigRational::zero(),
                field: target,
            });
        }
        Err(AlgebraError::FieldMismatch(self.field, target))
    }

    fn same_field(&self, o: &Self) -> Result<(), AlgebraError> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch(self.field, o.field))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.same_field(o)?;
        Ok(Scalar {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            field: self.field,
        })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.same_field(o)?;
        Ok(Scalar {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            field: self.field,
        })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.same_field(o)?;
        let d = self.d_rat();
        Ok(Scalar {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
            field: self.field,
        })
    }

    pub fn checked_inv(&self) -> Result<Self, AlgebraError> {
        let n = self.norm();
        if Zero::is_zero(&n) {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Scalar {
            a: &self.a / &n,
            b: -(&self.b / &n),
            field: self.field,
        })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.same_field(o)?;
        self.checked_mul(&o.checked_inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = self.one_like();
        for _ in 0..k {
            r = r * self.clone();
        }
        r
    }

    /// A square root inside the element's own field, if one exists.
    pub fn is_square(&self) -> Option<Scalar> {
        let field = self.field;
        if Ring::is_zero(self) {
            return Some(self.clone());
        }
        if self.is_rational() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Scalar {
                    a: r,
                    b: BigRational::zero(),
                    field,
                });
            }
            // a = d * q^2 has root q*sqrt(d).
            if let Some(d) = field.d() {
                let q = &self.a / BigRational::from_integer(d.into());
                if let Some(r) = rational_sqrt(&q) {
                    return Some(Scalar {
                        a: BigRational::zero(),
                        b: r,
                        field,
                    });
                }
            }
            return None;
        }
        // (p + q sqrt d)^2 = x forces p^2 - d q^2 = +-sqrt(N(x)) and p^2 + d q^2 = a.
        let n = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        for cand in [(&self.a + &n) / &two, (&self.a - &n) / &two] {
            if let Some(p) = rational_sqrt(&cand) {
                if Zero::is_zero(&p) {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let y = Scalar { a: p, b: q, field };
                if y.clone() * y.clone() == *self {
                    return Some(y);
                }
            }
        }
        None
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (
            self.a.to_f64().unwrap_or(f64::NAN),
            self.b.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.field)
    }
}

pub(crate) fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Renders in the arrangement-file grammar, e.g. `-1/2+1/2*s`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a_zero = Zero::is_zero(&self.a);
        let b_zero = Zero::is_zero(&self.b);
        if b_zero {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let babs = self.b.abs();
        let bpart = if babs.is_one() {
            "s".to_string()
        } else {
            format!("{}*s", fmt_rational(&babs))
        };
        if a_zero {
            let sign = if self.b.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{bpart}");
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{}{sign}{bpart}", fmt_rational(&self.a))
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$checked(&o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: &'a Scalar) -> Scalar {
                self.$checked(o).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            a: -self.a,
            b: -self.b,
            field: self.field,
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl Ring for Scalar {
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn zero_like(&self) -> Self {
        Scalar::zero(self.field)
    }
}

impl Field for Scalar {
    fn one_like(&self) -> Self {
        Scalar::one(self.field)
    }
    fn int_like(&self, n: i64) -> Self {
        Scalar::from_int(n, self.field)
    }
    fn inv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn quad(a: i64, b: i64, d: i64) -> Scalar {
        Scalar::new(q(a, 1), q(b, 1), FieldDesc::Quadratic(d))
    }

    #[test]
    fn conjugate_pair_product_is_norm() {
        let x = quad(1, 1, -3);
        assert_eq!(
            x.clone() * x.conj(),
            Scalar::from_int(4, FieldDesc::Quadratic(-3))
        );
        let y = quad(-1, 1, -3);
        let z = quad(-1, -1, -3);
        assert_eq!(y * z, Scalar::from_int(4, FieldDesc::Quadratic(-3)));
    }

    #[test]
    fn unit_inverse_in_q_sqrt5() {
        assert_eq!(quad(2, 1, 5).inv().unwrap(), quad(-2, 1, 5));
    }

    #[test]
    fn square_roots() {
        let r = Scalar::rational(q(9, 4)).is_square().unwrap();
        assert_eq!(r, Scalar::rational(q(3, 2)));
        assert!(Scalar::rational(q(-3, 2)).is_square().is_none());
        let y = quad(7, 4, 3).is_square().unwrap();
        assert_eq!(&y * &y, quad(7, 4, 3));
        assert!(y == quad(2, 1, 3) || y == quad(-2, -1, 3));
        // -3 is the square of sqrt(-3) inside Q(sqrt(-3)) but not in Q.
        assert!(Scalar::from_int(-3, FieldDesc::Quadratic(-3))
            .is_square()
            .is_some());
        assert!(Scalar::from_int(-3, FieldDesc::Rational)
            .is_square()
            .is_none());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let x = quad(1, 1, 5);
        let y = Scalar::from_int(2, FieldDesc::Rational);
        assert!(matches!(
            x.checked_add(&y),
            Err(AlgebraError::FieldMismatch(..))
        ));
        assert_eq!(
            x.checked_add(&y.embed(x.field()).unwrap()).unwrap(),
            quad(3, 1, 5)
        );
        assert!(x.embed(FieldDesc::Rational).is_err());
    }

    #[test]
    fn division_by_zero() {
        assert!(matches!(
            Scalar::zero(FieldDesc::Quadratic(5)).checked_inv(),
            Err(AlgebraError::DivisionByZero)
        ));
    }

    #[test]
    fn field_descriptors() {
        assert!(FieldDesc::quadratic(12).is_err());
        assert!(FieldDesc::quadratic(1).is_err());
        assert!(FieldDesc::quadratic(-3).is_ok());
        assert_eq!(
            squarefree_decompose(&BigInt::from(-12)),
            (BigInt::from(2), BigInt::from(-3))
        );
        assert_eq!(
            squarefree_decompose(&BigInt::from(45)),
            (BigInt::from(3), BigInt::from(5))
        );
    }

    #[test]
    fn display_round_trips_grammar() {
        assert_eq!(quad(-1, 1, -3).to_string(), "-1+s");
        assert_eq!(
            Scalar::new(q(-1, 2), q(-1, 2), FieldDesc::Quadratic(5)).to_string(),
            "-1/2-1/2*s"
        );
        assert_eq!(quad(0, -1, 5).to_string(), "-s");
    }

    fn arb_quad(d: i64) -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..9, -50i64..50, 1i64..9).prop_map(move |(a, ad, b, bd)| {
            Scalar::new(q(a, ad), q(b, bd), FieldDesc::Quadratic(d))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn inverse_and_conjugation(x in arb_quad(-3), y in arb_quad(-3)) {
            if !Ring::is_zero(&x) {
                prop_assert_eq!(x.clone() * x.inv().unwrap(), x.one_like());
            }
            prop_assert_eq!((x.clone() * y.clone()).conj(), x.conj() * y.conj());
            prop_assert_eq!((x.clone() + y.clone()).conj(), x.conj() + y.conj());
        }

        #[test]
        fn squares_have_roots(x in arb_quad(5)) {
            let sq = x.clone() * x.clone();
            let r = sq.is_square().expect("square must have a root");
            prop_assert_eq!(r.clone() * r, sq);
            if let Some(r) = x.is_square() {
                prop_assert_eq!(r.clone() * r, x);
            }
        }
    }
}
