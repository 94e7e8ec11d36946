//! Exact integer and rational polynomial arithmetic: gcds over `Q`, Bezout
//! cofactors, resultants and discriminants. Coefficients are arbitrary precision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Poly;

/// Polynomial over `Q`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(Vec<BigRational>);

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly(c)
    }

    pub fn from_poly(f: &Poly) -> Self {
        Self::new(f.coeffs().iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Self::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    fn lc(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.0.len().max(o.0.len());
        let z = BigRational::zero();
        QPoly::new((0..n).map(|k| self.0.get(k).unwrap_or(&z) + o.0.get(k).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (QPoly::zero(), self.clone());
        }
        let lc = d.lc();
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g = gcd(self, o)`, `g` monic (or zero).
    pub fn ext_gcd(&self, o: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    /// Squarefree part over `Q` (monic).
    pub fn squarefree(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Least common denominator of the coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Primitive integer polynomial with positive leading coefficient
    /// spanning the same line over `Q`.
    pub fn primitive(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.denominator_lcm();
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &den).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }
}

/// Content (gcd of coefficients) of an integer polynomial; zero for zero.
pub fn content(f: &Poly) -> BigInt {
    f.coeffs().iter().fold(BigInt::zero(), |acc, &c| acc.gcd(&BigInt::from(c)))
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of two integer polynomials via the Sylvester determinant, taken
/// with their formal (actual) degrees. `Res(a, c) = c^{deg a}` for a constant `c`.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    bareiss_det(rows)
}

/// Discriminant `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`; 1 for linear input.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = f.len().saturating_sub(1);
    if n <= 1 {
        return BigInt::one();
    }
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect();
    let r = resultant(f, &df) / f.last().unwrap();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

pub fn to_bigints(f: &Poly) -> Vec<BigInt> {
    f.coeffs().iter().map(|&c| BigInt::from(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn resultant_small_cases() {
        // Res(x - 2, x - 5) = (x - 5) evaluated at 2
        let r = resultant(&ints(&[-2, 1]), &ints(&[-5, 1]));
        assert_eq!(r, BigInt::from(-3));
        // Res(x^2 + 1, x - 1) = (1)^2 + 1 = 2 up to sign
        assert_eq!(resultant(&ints(&[1, 0, 1]), &ints(&[-1, 1])).abs(), BigInt::from(2));
        assert_eq!(resultant(&ints(&[1, 0, 1]), &ints(&[3])), BigInt::from(9));
        // common root
        assert!(resultant(&ints(&[-1, 0, 1]), &ints(&[-1, 1])).is_zero());
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&ints(&[-2, 0, 1])), BigInt::from(8));
        assert_eq!(discriminant(&ints(&[1, 0, 1])), BigInt::from(-4));
        assert_eq!(discriminant(&ints(&[3, 1])), BigInt::from(1));
        // x^3 - x: disc = 4
        assert_eq!(discriminant(&ints(&[0, -1, 0, 1])), BigInt::from(4));
    }

    #[test]
    fn bezout_identity() {
        let a = QPoly::from_poly(&Poly::integer(vec![-1, 0, 1]));
        let b = QPoly::from_poly(&Poly::integer(vec![2, 3, 1]));
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(g, QPoly::from_poly(&Poly::integer(vec![1, 1])));
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
    }

    #[test]
    fn squarefree_and_primitive() {
        let f = QPoly::from_poly(&Poly::integer(vec![0, 0, 2, 2])); // 2x^2(x+1)
        assert_eq!(f.squarefree().primitive(), ints(&[0, 1, 1]));
    }
}
