//! Roots of binary forms: rational points, quadratic pairs, and what is left over.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::binform::BinForm;
use super::field::{squarefree_decompose, Field, FieldDesc, Ring, Scalar};
use super::AlgebraError;

pub type Form = BinForm<Scalar>;

/// A point `(a:b)` of the parameter line, stored with `b = 1` or as `(1:0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParamPoint {
    a: Scalar,
    b: Scalar,
}

impl ParamPoint {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self, AlgebraError> {
        if b.is_zero() {
            if a.is_zero() {
                return Err(AlgebraError::DivisionByZero);
            }
            let f = a.field();
            return Ok(ParamPoint {
                a: Scalar::one(f),
                b: Scalar::zero(f),
            });
        }
        let a = a.checked_div(&b)?;
        let f = a.field();
        Ok(ParamPoint {
            a,
            b: Scalar::one(f),
        })
    }

    pub fn affine(x: Scalar) -> Self {
        let f = x.field();
        ParamPoint {
            a: x,
            b: Scalar::one(f),
        }
    }

    pub fn infinity(field: FieldDesc) -> Self {
        ParamPoint {
            a: Scalar::one(field),
            b: Scalar::zero(field),
        }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        ParamPoint::new(
            Scalar::from_int(a, FieldDesc::Rational),
            Scalar::from_int(b, FieldDesc::Rational),
        )
        .expect("not both zero")
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn field(&self) -> FieldDesc {
        self.a.field()
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    /// The affine coordinate `A/B`, absent at infinity.
    pub fn value(&self) -> Option<&Scalar> {
        (!self.is_infinity()).then_some(&self.a)
    }

    pub fn embed(&self, target: FieldDesc) -> Result<Self, AlgebraError> {
        Ok(ParamPoint {
            a: self.a.embed(target)?,
            b: self.b.embed(target)?,
        })
    }

    pub fn conj(&self) -> Self {
        ParamPoint {
            a: self.a.conj(),
            b: self.b.conj(),
        }
    }

    /// The linear form `b*A - a*B` vanishing at this point.
    pub fn linear_factor(&self) -> Form {
        BinForm::new(vec![self.b.clone(), -self.a.clone()])
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}) [{}]", self.a, self.b, self.field())
    }
}

impl Serialize for ParamPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An irreducible quadratic factor `A^2 + p*A*B + q*B^2` over the base field.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticRoot {
    /// `[1, p, q]`.
    pub min_poly: [Scalar; 3],
    /// Both roots in `Q(sqrt e)`; only available over a rational base.
    pub roots: Option<[Scalar; 2]>,
    pub multiplicity: usize,
}

impl QuadraticRoot {
    pub fn form(&self) -> Form {
        BinForm::new(self.min_poly.to_vec())
    }
}

#[derive(Clone, Debug)]
pub struct RootReport {
    pub rational_roots: Vec<(ParamPoint, usize)>,
    pub quadratic_roots: Vec<QuadraticRoot>,
    pub unresolved: Vec<Form>,
    /// Constant with `f = unit * product of all factors`.
    pub unit: Scalar,
}

impl RootReport {
    /// Reassembles the factored form.
    pub fn product(&self) -> Form {
        let mut acc = BinForm::constant(self.unit.clone());
        for (p, m) in &self.rational_roots {
            acc = acc.mul_form(&p.linear_factor().pow(*m));
        }
        for q in &self.quadratic_roots {
            acc = acc.mul_form(&q.form().pow(q.multiplicity));
        }
        for u in &self.unresolved {
            acc = acc.mul_form(u);
        }
        acc
    }
}

fn rat(x: &Scalar) -> BigRational {
    debug_assert!(x.is_rational());
    x.a().clone()
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Candidate rational roots `(r:s)` of a form with rational coefficients, nonzero at 0 and infinity.
fn rational_root_candidates(coeffs: &[BigRational]) -> Vec<(BigInt, BigInt)> {
    let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let lead = &ints[0];
    let cons = &ints[ints.len() - 1];
    let mut out = Vec::new();
    for r in positive_divisors(cons) {
        for s in positive_divisors(lead) {
            if r.gcd(&s).is_one() {
                out.push((r.clone(), s.clone()));
                out.push((-r.clone(), s));
            }
        }
    }
    out
}

/// Rational points where `g` vanishes, searched through the norm form over a quadratic base.
fn find_base_rational_root(g: &Form) -> Option<ParamPoint> {
    let field = g.field();
    let normed: Vec<BigRational> = match field {
        FieldDesc::Rational => g.coeffs().iter().map(rat).collect(),
        FieldDesc::Quadratic(_) => {
            let n = g.mul_form(&g.conj());
            n.coeffs().iter().map(rat).collect()
        }
    };
    for (r, s) in rational_root_candidates(&normed) {
        let a = Scalar::rational(BigRational::from_integer(r))
            .embed(field)
            .ok()?;
        let b = Scalar::rational(BigRational::from_integer(s))
            .embed(field)
            .ok()?;
        if g.eval(&a, &b).is_zero() {
            return ParamPoint::new(a, b).ok();
        }
    }
    None
}

fn push_root(list: &mut Vec<(ParamPoint, usize)>, p: ParamPoint) {
    if let Some(e) = list.iter_mut().find(|(q, _)| *q == p) {
        e.1 += 1;
    } else {
        list.push((p, 1));
    }
}

fn push_quadratic(list: &mut Vec<QuadraticRoot>, q: QuadraticRoot) {
    if let Some(e) = list.iter_mut().find(|e| e.min_poly == q.min_poly) {
        e.multiplicity += q.multiplicity;
    } else {
        list.push(q);
    }
}

/// Roots of `c0*A^2 + c1*A*B + c2*B^2` when it has no root in the base field.
fn quadratic_factor(c: &[Scalar]) -> QuadraticRoot {
    let p = c[1]
        .checked_div(&c[0])
        .expect("leading coefficient nonzero");
    let q = c[2]
        .checked_div(&c[0])
        .expect("leading coefficient nonzero");
    let one = p.one_like();
    let roots = if p.field() == FieldDesc::Rational {
        // t = (-p +- sqrt(p^2 - 4q)) / 2 with p^2 - 4q = k^2 e.
        let disc = rat(&p) * rat(&p) - BigRational::from_integer(4.into()) * rat(&q);
        let lcm = disc.denom().clone();
        let scaled = (&disc * BigRational::from_integer(&lcm * &lcm)).to_integer();
        let (k, e) = squarefree_decompose(&scaled);
        let e64: i64 = e.try_into().expect("square-free part fits in i64");
        let field = FieldDesc::quadratic(e64)
            .expect("irreducible quadratic has a square-free discriminant");
        let half = BigRational::new(1.into(), 2.into());
        let re = -rat(&p) * &half;
        let im = BigRational::new(k, lcm) * &half;
        Some([
            Scalar::new(re.clone(), im.clone(), field),
            Scalar::new(re, -im, field),
        ])
    } else {
        None
    };
    QuadraticRoot {
        min_poly: [one, p, q],
        roots,
        multiplicity: 1,
    }
}

/// Attempts to split a rational quartic without rational roots into two rational quadratics.
fn split_quartic(g: &Form) -> Option<(Form, Form)> {
    let c: Vec<BigRational> = g.coeffs().iter().map(rat).collect();
    let lead = c[0].clone();
    let (a, b, cc, d) = (&c[1] / &lead, &c[2] / &lead, &c[3] / &lead, &c[4] / &lead);
    // Resolvent in y = q + u for (t^2 + p t + q)(t^2 + r t + u).
    let four = BigRational::from_integer(4.into());
    let res = [
        BigRational::one(),
        -b.clone(),
        &a * &cc - &four * &d,
        -(&a * &a * &d - &four * &b * &d + &cc * &cc),
    ];
    let mut ys = Vec::new();
    if Zero::is_zero(&res[3]) {
        ys.push(BigRational::zero());
    }
    let mut cubic = res.to_vec();
    while cubic.last().is_some_and(Zero::is_zero) && cubic.len() > 1 {
        cubic.pop();
    }
    if cubic.len() > 1 {
        for (r, s) in rational_root_candidates(&cubic) {
            let y = BigRational::new(r, s);
            let mut acc = BigRational::zero();
            for co in &res {
                acc = acc * &y + co;
            }
            if Zero::is_zero(&acc) {
                ys.push(y);
            }
        }
    }
    let sq = |x: &BigRational| super::field::rational_sqrt(x);
    let two = BigRational::from_integer(2.into());
    for y in ys {
        let Some(s1) = sq(&(&y * &y - &four * &d)) else {
            continue;
        };
        let q = (&y + &s1) / &two;
        let u = (&y - &s1) / &two;
        let pairs: Vec<(BigRational, BigRational)> = if q != u {
            let p = (&cc - &a * &q) / (&u - &q);
            vec![(p.clone(), &a - &p)]
        } else {
            match sq(&(&a * &a - &four * (&b - &y))) {
                Some(s2) => vec![((&a + &s2) / &two, (&a - &s2) / &two)],
                None => vec![],
            }
        };
        for (p, r) in pairs {
            let f1 = BinForm::new(
                vec![BigRational::one(), p.clone(), q.clone()]
                    .into_iter()
                    .map(Scalar::rational)
                    .collect(),
            );
            let f2 = BinForm::new(
                vec![BigRational::one(), r.clone(), u.clone()]
                    .into_iter()
                    .map(Scalar::rational)
                    .collect(),
            );
            if f1.mul_form(&f2).scale(&Scalar::rational(lead.clone())) == *g {
                return Some((f1, f2));
            }
        }
    }
    None
}

/// Factors a nonzero binary form into roots over its field.
pub fn factor_binform(f: &Form) -> Result<RootReport, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroForm);
    }
    let field = f.field();
    let mut rational_roots = Vec::new();
    let mut quadratic_roots = Vec::new();
    let mut unresolved = Vec::new();
    let mut g = f.clone();

    // Powers of B give the root at infinity, powers of A the root 0.
    while g.degree() > 0 && g.coeffs()[0].is_zero() {
        g = g
            .divide_linear(&Scalar::one(field), &Scalar::zero(field))
            .expect("B divides");
        push_root(&mut rational_roots, ParamPoint::infinity(field));
    }
    while g.degree() > 0 && g.coeffs()[g.degree()].is_zero() {
        g = g
            .divide_linear(&Scalar::zero(field), &Scalar::one(field))
            .expect("A divides");
        push_root(&mut rational_roots, ParamPoint::affine(Scalar::zero(field)));
    }
    while g.degree() > 1 {
        let Some(p) = find_base_rational_root(&g) else {
            break;
        };
        g = g.divide_linear(p.a(), p.b()).expect("root divides");
        push_root(&mut rational_roots, p);
    }
    match g.degree() {
        0 => {}
        1 => {
            let c = g.coeffs();
            let p = ParamPoint::new(-c[1].clone(), c[0].clone())?;
            g = g.divide_linear(p.a(), p.b()).expect("root divides");
            push_root(&mut rational_roots, p);
        }
        2 => {
            let c = g.coeffs().to_vec();
            let disc =
                c[1].clone() * c[1].clone() - c[0].int_like(4) * c[0].clone() * c[2].clone();
            match (field, disc.is_square()) {
                (FieldDesc::Quadratic(_), Some(sq)) => {
                    let two_a = c[0].int_like(2) * c[0].clone();
                    for sign in [1, -1] {
                        let num = -c[1].clone() + sq.int_like(sign) * sq.clone();
                        let p = ParamPoint::new(num, two_a.clone())?;
                        g = g.divide_linear(p.a(), p.b()).expect("root divides");
                        push_root(&mut rational_roots, p);
                    }
                }
                _ => {
                    let q = quadratic_factor(&c);
                    g = BinForm::constant(c[0].clone());
                    push_quadratic(&mut quadratic_roots, q);
                }
            }
        }
        4 if field == FieldDesc::Rational => {
            if let Some((f1, f2)) = split_quartic(&g) {
                let lead = g.coeffs()[0].clone();
                for part in [f1, f2] {
                    push_quadratic(&mut quadratic_roots, quadratic_factor(part.coeffs()));
                }
                g = BinForm::constant(lead);
            } else {
                let lead = g.coeffs()[0].clone();
                unresolved.push(g.scale(&lead.inv().expect("nonzero")));
                g = BinForm::constant(lead);
            }
        }
        _ => {
            let lead = g.coeffs()[0].clone();
            unresolved.push(g.scale(&lead.inv().expect("nonzero")));
            g = BinForm::constant(lead);
        }
    }
    let partial = RootReport {
        rational_roots,
        quadratic_roots,
        unresolved,
        unit: Scalar::one(field),
    };
    let prod = partial.product();
    let k = prod
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero product");
    let unit = f.coeffs()[k].checked_div(&prod.coeffs()[k])?;
    let _ = g;
    Ok(RootReport { unit, ..partial })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n, FieldDesc::Rational)
    }

    fn form(cs: &[i64]) -> Form {
        BinForm::new(cs.iter().map(|&c| s(c)).collect())
    }

    #[test]
    fn linear_root() {
        let r = factor_binform(&form(&[1, -1])).unwrap();
        assert_eq!(r.rational_roots, vec![(ParamPoint::from_ints(1, 1), 1)]);
    }

    #[test]
    fn roots_at_zero_and_infinity() {
        let r = factor_binform(&form(&[0, 1, 0])).unwrap();
        let pts: Vec<_> = r
            .rational_roots
            .iter()
            .map(|(p, _)| p.to_string())
            .collect();
        assert_eq!(pts, vec!["inf", "0"]);
    }

    #[test]
    fn golden_ratio_pair() {
        let r = factor_binform(&form(&[1, 1, -1])).unwrap();
        assert!(r.rational_roots.is_empty());
        let q = &r.quadratic_roots[0];
        let roots = q.roots.clone().unwrap();
        let f5 = FieldDesc::Quadratic(5);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(roots[0], Scalar::new(-half.clone(), half.clone(), f5));
        assert_eq!(roots[1], Scalar::new(-half.clone(), -half, f5));
    }

    #[test]
    fn quartic_splits_through_resolvent() {
        // (t^2 + 1)(t^2 - 2) has no rational root.
        let f = form(&[1, 0, -1, 0, -2]);
        let r = factor_binform(&f).unwrap();
        assert_eq!(r.quadratic_roots.len(), 2);
        assert!(r.unresolved.is_empty());
        assert_eq!(r.product(), f);
    }

    #[test]
    fn irreducible_cubic_is_unresolved() {
        let r = factor_binform(&form(&[1, 0, 0, -2])).unwrap();
        assert_eq!(r.unresolved.len(), 1);
    }

    #[test]
    fn roots_over_quadratic_base() {
        let f = FieldDesc::Quadratic(-3);
        let w = Scalar::new(BigRational::one(), -BigRational::one(), f);
        // (A - (1 - s) B) * (A - 2B)
        let l1 = BinForm::new(vec![Scalar::one(f), -w.clone()]);
        let l2 = BinForm::new(vec![Scalar::one(f), Scalar::from_int(-2, f)]);
        let r = factor_binform(&l1.mul_form(&l2)).unwrap();
        let vals: Vec<_> = r
            .rational_roots
            .iter()
            .map(|(p, _)| p.value().unwrap().clone())
            .collect();
        assert!(vals.contains(&w));
        assert!(vals.contains(&Scalar::from_int(2, f)));
    }

    #[test]
    fn zero_form_is_rejected() {
        assert!(matches!(
            factor_binform(&form(&[0])),
            Err(AlgebraError::ZeroForm)
        ));
    }

    proptest! {
        #[test]
        fn factors_reassemble(cs in prop::collection::vec(-6i64..7, 1..6)) {
            let f = form(&cs);
            prop_assume!(!f.is_zero());
            let r = factor_binform(&f).unwrap();
            prop_assert_eq!(r.product(), f);
        }

        #[test]
        fn products_of_linear_factors_split(roots in prop::collection::vec((-5i64..6, 1i64..4), 1..4)) {
            let mut f = form(&[1]);
            for (a, b) in &roots {
                f = f.mul_form(&form(&[*b, -*a]));
            }
            let r = factor_binform(&f).unwrap();
            let total: usize = r.rational_roots.iter().map(|(_, m)| m).sum();
            prop_assert_eq!(total, roots.len());
            prop_assert_eq!(r.product(), f);
        }
    }
}
