//! Homogeneous binary forms in the family parameters (A, B).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, FieldDesc, Ring, Scalar};
use super::AlgebraError;

/// `coeffs[k]` multiplies `A^(deg-k) * B^k`. The zero form has degree 0.
#[derive(Clone, Debug)]
pub struct BinForm<F> {
    coeffs: Vec<F>,
}

impl<F: Field> BinForm<F> {
    /// Builds a form from its coefficients; an all-zero list collapses to the zero form.
    pub fn new(coeffs: Vec<F>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a binary form needs at least one coefficient"
        );
        if coeffs.iter().all(Ring::is_zero) {
            return BinForm {
                coeffs: vec![coeffs[0].zero_like()],
            };
        }
        BinForm { coeffs }
    }

    pub fn constant(c: F) -> Self {
        BinForm { coeffs: vec![c] }
    }

    pub fn zero(template: &F) -> Self {
        BinForm {
            coeffs: vec![template.zero_like()],
        }
    }

    /// The variable `A` as a degree-one form.
    pub fn var_a(template: &F) -> Self {
        BinForm {
            coeffs: vec![template.one_like(), template.zero_like()],
        }
    }

    /// The variable `B` as a degree-one form.
    pub fn var_b(template: &F) -> Self {
        BinForm {
            coeffs: vec![template.zero_like(), template.one_like()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// A representative coefficient used to build constants of the right field.
    pub fn template(&self) -> &F {
        &self.coeffs[0]
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.degree() != o.degree() {
            return Err(AlgebraError::DegreeMismatch(self.degree(), o.degree()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(x, y)| x.clone() + y.clone())
            .collect();
        Ok(BinForm::new(coeffs))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&-o.clone())
    }

    pub fn mul_form(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return BinForm::zero(self.template());
        }
        let zero = self.template().zero_like();
        let mut out = vec![zero; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        BinForm::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        BinForm::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = BinForm::constant(self.template().one_like());
        for _ in 0..k {
            r = r.mul_form(self);
        }
        r
    }

    /// Evaluates at the literal pair `(a, b)`.
    pub fn eval(&self, a: &F, b: &F) -> F {
        let d = self.degree();
        let mut acc = a.zero_like();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for _ in 0..(d - k) {
                term = term * a.clone();
            }
            for _ in 0..k {
                term = term * b.clone();
            }
            acc = acc + term;
        }
        acc
    }

    /// Substitutes `A -> l1`, `B -> l2` for forms of a common degree.
    pub fn substitute(&self, l1: &Self, l2: &Self) -> Self {
        let d = self.degree();
        let mut acc: Option<Self> = None;
        for (k, c) in self.coeffs.iter().enumerate() {
            let term = l1.pow(d - k).mul_form(&l2.pow(k)).scale(c);
            acc = Some(match acc {
                None => term,
                Some(s) => s
                    .checked_add(&term)
                    .expect("substituted terms share a degree"),
            });
        }
        acc.unwrap()
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> BinForm<G> {
        BinForm::new(self.coeffs.iter().map(f).collect())
    }

    /// Exact division by `A^i B^j`-free linear factor `(b0*A - a0*B)`; returns the quotient.
    pub fn divide_linear(&self, a0: &F, b0: &F) -> Option<Self> {
        // Synthetic division on coefficients, degree drops by one.
        let d = self.degree();
        if d == 0 {
            return None;
        }
        let zero = self.template().zero_like();
        let mut q = vec![zero.clone(); d];
        let mut rem: Vec<F> = self.coeffs.clone();
        // Leading term division by b0*A when b0 != 0, else by -a0*B from the tail.
        if !b0.is_zero() {
            let inv = b0.inv()?;
            for k in 0..d {
                let c = rem[k].clone() * inv.clone();
                q[k] = c.clone();
                rem[k] = zero.clone();
                rem[k + 1] = rem[k + 1].clone() + c * a0.clone();
            }
            if !rem[d].is_zero() {
                return None;
            }
        } else {
            let inv = (-a0.clone()).inv()?;
            if !rem[0].is_zero() {
                return None;
            }
            for k in 0..d {
                q[k] = rem[k + 1].clone() * inv.clone();
            }
        }
        Some(BinForm::new(q))
    }
    /// Number of factors of `B`.
    fn b_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Greatest common divisor, normalized to leading nonzero coefficient one.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        let (va, vb) = (self.b_valuation(), o.b_valuation());
        let g = poly_gcd(self.coeffs[va..].to_vec(), o.coeffs[vb..].to_vec());
        let mut coeffs = vec![self.template().zero_like(); va.min(vb)];
        coeffs.extend(g);
        BinForm::new(coeffs)
    }

    /// Scales so that the first nonzero coefficient is one.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// The quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (va, vb) = (self.b_valuation(), d.b_valuation());
        if va < vb {
            return None;
        }
        let (q, r) = poly_divrem(&self.coeffs[va..], &d.coeffs[vb..]);
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut coeffs = vec![self.template().zero_like(); va - vb];
        coeffs.extend(q);
        Some(BinForm::new(coeffs))
    }
}

/// Division of univariate polynomials given by descending coefficients with nonzero leads.
fn poly_divrem<F: Field>(num: &[F], den: &[F]) -> (Vec<F>, Vec<F>) {
    let zero = num[0].zero_like();
    if num.len() < den.len() {
        return (vec![zero], num.to_vec());
    }
    let inv = den[0].inv().expect("leading coefficient is nonzero");
    let mut rem = num.to_vec();
    let n = num.len() - den.len() + 1;
    let mut q = vec![zero.clone(); n];
    for k in 0..n {
        let c = rem[k].clone() * inv.clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] = rem[k + j].clone() - c.clone() * dj.clone();
        }
        q[k] = c;
    }
    let r = rem[n..].to_vec();
    (q, if r.is_empty() { vec![zero] } else { r })
}

fn strip_leading_zeros<F: Field>(mut v: Vec<F>) -> Vec<F> {
    while v.len() > 1 && v[0].is_zero() {
        v.remove(0);
    }
    v
}

fn poly_gcd<F: Field>(a: Vec<F>, b: Vec<F>) -> Vec<F> {
    let (mut a, mut b) = (strip_leading_zeros(a), strip_leading_zeros(b));
    while !(b.len() == 1 && b[0].is_zero()) {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = strip_leading_zeros(r);
    }
    let inv = a[0].inv().expect("nonzero gcd");
    a.into_iter().map(|c| c * inv.clone()).collect()
}

impl BinForm<Scalar> {
    pub fn field(&self) -> FieldDesc {
        self.coeffs[0].field()
    }

    pub fn embed(&self, target: FieldDesc) -> Result<Self, AlgebraError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.embed(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BinForm::new(coeffs))
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }
}

impl<F: Field> PartialEq for BinForm<F> {
    fn eq(&self, o: &Self) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        self.coeffs == o.coeffs
    }
}

impl<F: Field> Add for BinForm<F> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.checked_add(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<F: Field> Sub for BinForm<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.checked_sub(&o).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<F: Field> Mul for BinForm<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_form(&o)
    }
}

impl<F: Field> Neg for BinForm<F> {
    type Output = Self;
    fn neg(self) -> Self {
        BinForm {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<F: Field> Ring for BinForm<F> {
    fn is_zero(&self) -> bool {
        BinForm::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        BinForm::zero(self.template())
    }
}

fn monomial(k_a: usize, k_b: usize) -> String {
    let mut parts = Vec::new();
    for (v, k) in [("A", k_a), ("B", k_b)] {
        for _ in 0..k {
            parts.push(v);
        }
    }
    parts.join("*")
}

/// Renders in the arrangement-file grammar, e.g. `A-2*B` or `(1+s)*A`.
impl<F: Field> fmt::Display for BinForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.degree();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = monomial(d - k, k);
            let cs = c.to_string();
            let neg = cs.starts_with('-') && !cs[1..].contains(['+', '-']);
            let body = if neg { cs[1..].to_string() } else { cs.clone() };
            let compound = body.contains(['+', '-']);
            let coef = if compound { format!("({body})") } else { body };
            let term = match (mono.is_empty(), coef.as_str()) {
                (true, _) => coef.clone(),
                (false, "1") => mono.clone(),
                (false, _) => format!("{coef}*{mono}"),
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, term)?;
            } else {
                write!(f, "{}{}", if neg { "-" } else { "+" }, term)?;
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n, FieldDesc::Rational)
    }

    fn form(cs: &[i64]) -> BinForm<Scalar> {
        BinForm::new(cs.iter().map(|&c| s(c)).collect())
    }

    #[test]
    fn eval_and_mul() {
        let a_minus_b = form(&[1, -1]);
        assert!(a_minus_b.eval(&s(1), &s(1)).is_zero());
        let ab = BinForm::var_a(&s(0)).mul_form(&BinForm::var_b(&s(0)));
        assert_eq!(ab.degree(), 2);
        assert_eq!(ab, form(&[0, 1, 0]));
        let f = form(&[4, 0, 1]);
        assert_eq!(f.eval(&s(1), &s(2)), s(8));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = BinForm::var_a(&s(0));
        assert!(matches!(
            a.checked_add(&form(&[1])),
            Err(AlgebraError::DegreeMismatch(1, 0))
        ));
        assert_eq!(a.checked_add(&BinForm::zero(&s(0))).unwrap(), a);
    }

    #[test]
    fn zero_form_is_canonical() {
        let z = form(&[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), 0);
        assert_eq!(z, BinForm::zero(&s(0)));
    }

    #[test]
    fn substitution_and_division() {
        // (A - B) with A -> B, B -> A becomes B - A.
        let f = form(&[1, -1]);
        let g = f.substitute(&BinForm::var_b(&s(0)), &BinForm::var_a(&s(0)));
        assert_eq!(g, form(&[-1, 1]));
        // A^2 - B^2 = (A - B)(A + B)
        let q = form(&[1, 0, -1]).divide_linear(&s(1), &s(1)).unwrap();
        assert_eq!(q, form(&[1, 1]));
        assert!(form(&[1, 0, 1]).divide_linear(&s(1), &s(1)).is_none());
        // A*B divided by A (root (0:1)) leaves B.
        assert_eq!(
            form(&[0, 1, 0]).divide_linear(&s(0), &s(1)).unwrap(),
            form(&[0, 1])
        );
        // The factor vanishing at (1:0) is -B, so A*B leaves -A.
        assert_eq!(
            form(&[0, 1, 0]).divide_linear(&s(1), &s(0)).unwrap(),
            form(&[-1, 0])
        );
    }

    #[test]
    fn gcd_and_exact_division() {
        // (A - B) * A * B and (A - B) * B^2 share (A - B) * B.
        let ab = form(&[1, -1]).mul_form(&form(&[0, 1, 0]));
        let bb = form(&[1, -1]).mul_form(&form(&[0, 0, 1]));
        let g = ab.gcd(&bb);
        assert_eq!(g, form(&[0, 1, -1]));
        assert_eq!(ab.div_exact(&g).unwrap(), form(&[1, 0]));
        assert!(ab.div_exact(&form(&[1, 1])).is_none());
        assert_eq!(form(&[2, 4]).gcd(&form(&[3])), form(&[1]));
    }

    #[test]
    fn rendering() {
        assert_eq!(form(&[1, -2]).to_string(), "A-2*B");
        assert_eq!(form(&[0, 1, 0]).to_string(), "A*B");
        let d = FieldDesc::Quadratic(-3);
        let c = Scalar::new(
            BigRational::from_integer(1.into()),
            BigRational::from_integer(1.into()),
            d,
        );
        let f = BinForm::new(vec![c, Scalar::from_int(-1, d)]);
        assert_eq!(f.to_string(), "(1+s)*A-B");
    }
}
